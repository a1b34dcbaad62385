#pragma once

// Analytic lower bounds for the guard-interval scheme, in nats.
//
// Per data slot the scheme sees the scalar channel Y = H X + W, for which
//
//   I(X; HX + W) >= h(X) - E log|X|^2 + E log|H|^2 - E log(pi e (sigma_H + sigma_W/|X|)^2).
//
// With the log-uniform input and |X| >= 1 this collapses to a slot bound that
// depends on neither the slot nor the block, and weighting by the duty cycle
// tau/(L + tau) gives the capacity lower bound.

#include "decay_profile.hpp"
#include "errors.hpp"
#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>

namespace mpcap {

/// Euler-Mascheroni constant to 20 significant digits.
inline constexpr double euler_gamma = 0.57721566490153286061;

/// Y = H X + W with Var(H) = alpha_h > 0 and Var(W) = sigma_w_sq >= 0.
struct scalar_channel_params {
    double alpha_h = 1.0;
    double e_log_h_sq = -euler_gamma;
    double sigma_w_sq = 0.0;

    void validate() const
    {
        if (!(alpha_h > 0.0))
            throw domain_error("scalar channel: fading variance must be positive");
        if (!(sigma_w_sq >= 0.0))
            throw domain_error("scalar channel: disturbance variance must be nonnegative");
        // Jensen: E log|H|^2 <= log E|H|^2
        if (e_log_h_sq > std::log(alpha_h) + 1e-12 * std::abs(std::log(alpha_h)) + 1e-15)
            throw domain_error("scalar channel: E log|H|^2 exceeds log of the variance");
    }
};

/// E log|H|^2 = log(alpha) - gamma for H ~ CN(0, alpha).
inline double e_log_h_sq_gaussian(double alpha)
{
    if (!(alpha > 0.0))
        throw domain_error("e_log_h_sq_gaussian: variance must be positive");
    return std::log(alpha) - euler_gamma;
}

/// h_x - E log|X|^2 + E log|H|^2 - E log(pi e (sigma_H + sigma_W/|X|)^2).
inline double lemma_lower_bound(const scalar_channel_params& params, double h_x, double e_log_x_sq,
                                double e_log_penalty)
{
    return h_x - e_log_x_sq + params.e_log_h_sq - e_log_penalty;
}

/// Input law of data slot nu (1-based) of the log-uniform scheme:
/// log|X|^2 ~ Uniform[(nu-1) log P / tau, nu log P / tau].
struct log_uniform_slot {
    double power;
    std::size_t tau = 1;
    std::size_t nu = 1;

    void validate() const
    {
        if (!(power > 1.0) || !std::isfinite(power))
            throw invalid_power_error("log-uniform slot: power must exceed 1");
        if (tau == 0 || nu == 0 || nu > tau)
            throw domain_error("log-uniform slot: need 1 <= nu <= tau");
    }

    [[nodiscard]] double log_lower() const
    {
        return static_cast<double>(nu - 1) * std::log(power) / static_cast<double>(tau);
    }
    [[nodiscard]] double log_upper() const
    {
        return static_cast<double>(nu) * std::log(power) / static_cast<double>(tau);
    }
    [[nodiscard]] double width() const { return std::log(power) / static_cast<double>(tau); }

    /// E log|X|^2, the midpoint of the interval.
    [[nodiscard]] double e_log_mag_sq() const { return 0.5 * (log_lower() + log_upper()); }

    /// h(X) = E log|X|^2 + h(log|X|^2) + log pi for a circularly-symmetric X.
    [[nodiscard]] double differential_entropy() const
    {
        return e_log_mag_sq() + std::log(width()) + std::log(std::numbers::pi);
    }
};

/// E log(pi e (sigma_H + sigma_W/|X|)^2) under the slot law, by Gauss-Legendre over log|X|^2.
inline double exact_log_penalty(const scalar_channel_params& params, const log_uniform_slot& slot,
                                std::size_t nodes = 64)
{
    slot.validate();
    const double sigma_h = std::sqrt(params.alpha_h);
    const double sigma_w = std::sqrt(params.sigma_w_sq);
    const uniform_average_rule rule(slot.log_lower(), slot.log_upper(), nodes);
    return rule.average([&](double t) {
        const double amp = sigma_h + sigma_w * std::exp(-0.5 * t);
        return std::log(std::numbers::pi * std::numbers::e * amp * amp);
    });
}

/// Upper bound on the penalty using |X| >= 1: log(pi e (sigma_H + sigma_W)^2).
inline double bounded_log_penalty(const scalar_channel_params& params)
{
    const double amp = std::sqrt(params.alpha_h) + std::sqrt(params.sigma_w_sq);
    return std::log(std::numbers::pi * std::numbers::e * amp * amp);
}

/// log log P^(1/tau) + E log|H_0|^2 - 1 - 2 log(sqrt(alpha_0) + sqrt(w_power)).
///
/// For 1 < P^(1/tau) <= e the value is returned as is (possibly very negative).
inline double scheme_slot_bound(double alpha_0, double e_log_h0_sq, double power, std::size_t tau,
                                double w_power)
{
    if (tau == 0)
        throw domain_error("scheme_slot_bound: tau must be positive");
    if (!(power > 1.0))
        throw domain_error("scheme_slot_bound: log P^(1/tau) must be positive (P > 1)");
    if (!(alpha_0 > 0.0) || !(w_power >= 0.0))
        throw domain_error("scheme_slot_bound: need alpha_0 > 0 and w_power >= 0");
    const double log_p_root = std::log(power) / static_cast<double>(tau);
    return std::log(log_p_root) + e_log_h0_sq - 1.0 - 2.0 * std::log(std::sqrt(alpha_0) + std::sqrt(w_power));
}

struct w_power_report {
    double bound;        ///< alpha + 2 sigma^2
    double intermediate; ///< sum_{l=1}^{L} alpha_l + tail(L) * P + sigma^2
};

/// Uniform bound on E|W|^2 / |X|^2 for a guard satisfying tail(L) * P <= sigma^2.
/// Throws guard_too_short_error otherwise.
inline w_power_report w_power_bound(const decay_profile& profile, path_index guard, double power, double sigma_sq)
{
    if (!(sigma_sq > 0.0) || !(power > 0.0))
        throw domain_error("w_power_bound: power and noise variance must be positive");
    const double tail = profile.tail_sum(guard);
    if (tail * power > sigma_sq)
        throw guard_too_short_error("w_power_bound: guard leaves tail interference above the noise floor");
    const double inner = guard == 0 ? 0.0 : profile.head_sum(guard) - profile.alpha_0();
    return {profile.total_alpha() + 2.0 * sigma_sq, inner + tail * power + sigma_sq};
}

/// E log|H_0|^2 - 1 - 2 log(sqrt(alpha_0) + sqrt(alpha + 2 sigma^2)).
inline double upsilon(double e_log_h0_sq, double alpha_0, double alpha, double sigma_sq)
{
    if (!(alpha_0 > 0.0) || !(sigma_sq > 0.0))
        throw domain_error("upsilon: need alpha_0 > 0 and sigma^2 > 0");
    if (alpha < alpha_0 * (1.0 - 1e-12))
        throw domain_error("upsilon: total variance cannot be below alpha_0");
    return e_log_h0_sq - 1.0 - 2.0 * std::log(std::sqrt(alpha_0) + std::sqrt(alpha + 2.0 * sigma_sq));
}

/// 1/2 log log(1/rho) + 1/2 upsilon; raw (possibly negative) for rho >= 1/e.
inline double asymptotic_limit(double rho, double upsilon_value)
{
    if (!(rho > 0.0 && rho < 1.0))
        throw domain_error("asymptotic_limit: rho must lie in (0, 1)");
    return 0.5 * std::log(std::log(1.0 / rho)) + 0.5 * upsilon_value;
}

struct bound_report {
    path_index guard_len = 0;
    std::size_t tau = 1;
    double power = 0.0;
    double snr = 0.0;
    double upsilon = 0.0;
    double lower_bound_raw = 0.0;
    double lower_bound = 0.0; ///< max(0, raw)
    std::optional<double> asymptotic_limit;
};

/// tau/(L+tau) (log log P^(1/tau) + upsilon), plus its clamp at zero.
inline bound_report capacity_lower_bound(path_index guard, std::size_t tau, double power, double upsilon_value,
                                         double sigma_sq = 1.0)
{
    if (!(power > 1.0))
        throw domain_error("capacity_lower_bound: requires P > 1");
    if (tau == 0)
        throw domain_error("capacity_lower_bound: tau must be positive");
    bound_report r;
    r.guard_len = guard;
    r.tau = tau;
    r.power = power;
    r.snr = power / sigma_sq;
    r.upsilon = upsilon_value;
    const double t = static_cast<double>(tau);
    const double weight = t / (static_cast<double>(guard) + t);
    r.lower_bound_raw = weight * (std::log(std::log(power) / t) + upsilon_value);
    r.lower_bound = std::max(0.0, r.lower_bound_raw);
    return r;
}

} // namespace mpcap
