#pragma once

// Guard-interval / log-uniform input law.
//
// Each block is L zeros followed by tau data symbols. Data slot nu (1-based)
// has log|X|^2 uniform on [(nu-1) log P / tau, nu log P / tau] and an
// independent uniform phase.

#include "decay_profile.hpp"
#include "errors.hpp"
#include "rng.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace mpcap {

struct signaling_scheme {
    path_index guard_len = 0; ///< L, leading zeros per block
    std::size_t data_len = 1; ///< tau, data symbols per block
    double power = 2.0;       ///< P > 1

    [[nodiscard]] std::size_t block_len() const noexcept { return guard_len + data_len; }

    /// [lower, upper] bounds on |X|^2 for data slot nu in 1..tau.
    [[nodiscard]] std::pair<double, double> slot_interval(std::size_t nu) const
    {
        const double tau = static_cast<double>(data_len);
        return {std::pow(power, static_cast<double>(nu - 1) / tau),
                std::pow(power, static_cast<double>(nu) / tau)};
    }

    void validate() const
    {
        if (!(power > 1.0) || !std::isfinite(power))
            throw invalid_power_error("signaling scheme: power must exceed 1");
        if (data_len == 0)
            throw domain_error("signaling scheme: data length must be positive");
    }
};

/// Smallest L with tail_sum(profile, L) * P <= sigma^2.
inline path_index select_guard_length(const decay_profile& profile, double power, double sigma_sq)
{
    if (!(power > 0.0) || !(sigma_sq > 0.0))
        throw domain_error("select_guard_length: power and noise variance must be positive");
    return profile.first_guard_where([&](double tail) { return tail * power <= sigma_sq; });
}

struct closed_form_guard {
    path_index guard_len;
    bool clamped; ///< snr * rho / (1 - rho) <= 1, so the formula gave L <= 0
};

/// rho^L * rho/(1-rho) * snr; the guard condition for a geometric majorant is residual <= 1.
inline double geometric_guard_residual(double rho, double snr, path_index guard)
{
    return (std::pow(rho, static_cast<double>(guard)) * rho / (1.0 - rho)) * snr;
}

/// ceil(log(snr rho/(1-rho)) / log(1/rho)), clamped at 0.
///
/// At exact ties the rounded ceiling can land one off; the result is nudged to
/// the smallest L whose evaluated residual is <= 1, so the guard condition holds
/// as computed.
inline closed_form_guard guard_length_closed_form(double rho, double snr)
{
    if (!(rho > 0.0 && rho < 1.0))
        throw domain_error("guard_length_closed_form: rho must lie in (0, 1)");
    if (!(snr > 0.0) || !std::isfinite(snr))
        throw domain_error("guard_length_closed_form: snr must be positive");

    const double inner = snr * rho / (1.0 - rho);
    if (inner <= 1.0)
        return {0, true};

    const double raw = std::ceil(std::log(inner) / std::log(1.0 / rho));
    auto guard = static_cast<path_index>(std::max(raw, 0.0));
    while (geometric_guard_residual(rho, snr, guard) > 1.0)
        ++guard;
    while (guard > 0 && geometric_guard_residual(rho, snr, guard - 1) <= 1.0)
        --guard;
    return {guard, false};
}

/// One block (0,...,0, X_1,...,X_tau).
inline std::vector<std::complex<double>> sample_block(const signaling_scheme& scheme, rng& gen)
{
    scheme.validate();
    std::vector<std::complex<double>> block(scheme.block_len(), {0.0, 0.0});
    const double slot_width = std::log(scheme.power) / static_cast<double>(scheme.data_len);
    for (std::size_t nu = 1; nu <= scheme.data_len; ++nu) {
        const double log_mag_sq = (static_cast<double>(nu - 1) + gen.uniform()) * slot_width;
        const double magnitude = std::exp(0.5 * log_mag_sq);
        block[scheme.guard_len + nu - 1] = magnitude * gen.unit_phasor();
    }
    return block;
}

/// Concatenation of `blocks` independent blocks.
inline std::vector<std::complex<double>> sample_blocks(const signaling_scheme& scheme, std::size_t blocks,
                                                       rng& gen)
{
    std::vector<std::complex<double>> out;
    out.reserve(blocks * scheme.block_len());
    for (std::size_t b = 0; b < blocks; ++b) {
        const auto block = sample_block(scheme, gen);
        out.insert(out.end(), block.begin(), block.end());
    }
    return out;
}

/// Exact per-symbol average power tau (P - 1) / ((L + tau) log P); never exceeds P.
inline double expected_block_power(const signaling_scheme& scheme)
{
    scheme.validate();
    const double tau = static_cast<double>(scheme.data_len);
    const double len = static_cast<double>(scheme.block_len());
    return tau * (scheme.power - 1.0) / (len * std::log(scheme.power));
}

} // namespace mpcap
