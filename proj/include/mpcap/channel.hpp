#pragma once

// Discrete-time multipath fading channel
//
//   Y_k = sum_{l=0}^{min(k-1, depth)} H_k^(l) x_{k-l} + Z_k,   k = 1..n
//
// with H_k^(l) ~ CN(0, alpha_l) IID in k, independent across l, and
// Z_k ~ CN(0, sigma^2) IID. Gains and noise are never stored: every sample is
// re-derived from a counter-addressed substream keyed by (seed, path) or
// (seed, noise), indexed by the time k.

#include "decay_profile.hpp"
#include "errors.hpp"
#include "rng.hpp"

#include <algorithm>
#include <complex>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace mpcap {

/// The path-gain law the simulator realizes. Gaussian path gains have finite
/// differential entropy rate whenever alpha_l > 0, so inf h_l > -inf holds.
struct path_gain_model {
    static constexpr bool iid_in_time = true;
    static constexpr bool circularly_symmetric_gaussian = true;
    static constexpr bool entropy_rate_bounded_below = true;
};

struct channel_config {
    double sigma_sq = 1.0;
    decay_profile profile{finite_taps{{1.0}}};
    path_index truncation_depth = 1;
    std::uint64_t seed = 0;

    void validate() const
    {
        if (!(sigma_sq > 0.0) || !std::isfinite(sigma_sq))
            throw domain_error("channel config: noise variance must be positive");
        if (truncation_depth < 1)
            throw domain_error("channel config: truncation depth must be at least 1");
    }
};

namespace detail {
inline constexpr std::uint64_t noise_stream_id = std::numeric_limits<std::uint64_t>::max();
}

/// Smallest depth >= 1 with tail_sum(depth) * P <= 1e-4 sigma^2.
inline path_index default_truncation_depth(const decay_profile& profile, double power, double sigma_sq)
{
    const double budget = 1e-4 * sigma_sq;
    return std::max<path_index>(1, profile.first_guard_where([&](double tail) { return tail * power <= budget; }));
}

/// H_k^(l) for time k >= 1.
inline std::complex<double> path_gain(const channel_config& config, std::uint64_t k, path_index l)
{
    return counter_stream(config.seed, l).complex_gaussian(k, config.profile.alpha_at(l));
}

inline std::complex<double> noise_sample(const channel_config& config, std::uint64_t k)
{
    return counter_stream(config.seed, detail::noise_stream_id).complex_gaussian(k, config.sigma_sq);
}

struct simulation_result {
    std::vector<std::complex<double>> outputs;
    /// The faded-input part sum_l H_k^(l) x_{k-l}; outputs = faded + Z exactly as computed.
    std::vector<std::complex<double>> faded;
    /// tail_sum(depth) * max|x|^2 exceeds 1% of sigma^2
    bool truncation_too_shallow = false;
    double neglected_interference = 0.0;
};

inline simulation_result simulate(const channel_config& config, std::span<const std::complex<double>> inputs)
{
    config.validate();
    if (inputs.empty())
        throw domain_error("simulate: at least one input symbol required");

    double peak = 0.0;
    for (const auto& x : inputs) {
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
            throw domain_error("simulate: inputs must be finite");
        peak = std::max(peak, std::norm(x));
    }

    simulation_result result;
    result.neglected_interference = config.profile.tail_sum(config.truncation_depth) * peak;
    result.truncation_too_shallow = result.neglected_interference > 0.01 * config.sigma_sq;

    const path_index depth = config.truncation_depth;
    std::vector<double> alphas(depth + 1);
    std::vector<counter_stream> streams;
    streams.reserve(depth + 1);
    for (path_index l = 0; l <= depth; ++l) {
        alphas[l] = config.profile.alpha_at(l);
        streams.emplace_back(config.seed, l);
    }
    const counter_stream noise(config.seed, detail::noise_stream_id);

    const std::uint64_t n = inputs.size();
    result.outputs.resize(n);
    result.faded.resize(n);
    for (std::uint64_t k = 1; k <= n; ++k) {
        std::complex<double> y{};
        const path_index reach = std::min<path_index>(k - 1, depth);
        for (path_index l = 0; l <= reach; ++l) {
            const auto& x = inputs[k - l - 1];
            if (x == std::complex<double>{} || alphas[l] == 0.0)
                continue;
            y += streams[l].complex_gaussian(k, alphas[l]) * x;
        }
        result.faded[k - 1] = y;
        result.outputs[k - 1] = y + noise.complex_gaussian(k, config.sigma_sq);
    }
    return result;
}

/// Row-major block of gains H_k^(l) for k in [k_first, k_first + k_count) and
/// l in [l_first, l_first + l_count).
struct gain_matrix {
    std::uint64_t k_first = 1;
    path_index l_first = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::complex<double>> values;

    [[nodiscard]] std::complex<double> at(std::size_t row, std::size_t col) const { return values[row * cols + col]; }
};

/// The same gains simulate() uses for those indices and seed.
inline gain_matrix draw_path_gains(const channel_config& config, std::uint64_t k_first, std::size_t k_count,
                                   path_index l_first, std::size_t l_count)
{
    config.validate();
    if (k_count == 0 || l_count == 0)
        throw domain_error("draw_path_gains: index ranges must be nonempty");
    if (k_first < 1)
        throw domain_error("draw_path_gains: time index starts at 1");

    gain_matrix out{k_first, l_first, k_count, l_count, {}};
    out.values.resize(k_count * l_count);
    for (std::size_t c = 0; c < l_count; ++c) {
        const path_index l = l_first + c;
        const counter_stream stream(config.seed, l);
        const double alpha = config.profile.alpha_at(l);
        for (std::size_t r = 0; r < k_count; ++r)
            out.values[r * l_count + c] = stream.complex_gaussian(k_first + r, alpha);
    }
    return out;
}

} // namespace mpcap
