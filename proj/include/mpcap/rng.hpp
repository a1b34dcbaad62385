#pragma once

// Seeded random sources.
//
// Two flavours are provided:
//  * counter_stream: a stateless, counter-addressed generator. Value i of
//    stream (seed, id) is a pure function of the triple, so any element can be
//    re-derived without replaying the stream. The channel simulator uses it for
//    path gains and noise.
//  * rng: a sequential engine (mt19937_64) with our own uniform/normal
//    transforms, so draws are bit-identical across standard libraries.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace mpcap {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent child seed; used for per-path, per-point and per-partition substreams.
inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept
{
    return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

/// Maps 64 random bits to a double in (0, 1].
inline constexpr double bits_to_unit_open_low(std::uint64_t bits) noexcept
{
    return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

/// Maps 64 random bits to a double in [0, 1).
inline constexpr double bits_to_unit(std::uint64_t bits) noexcept
{
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Circularly-symmetric complex Gaussian CN(0, variance) from two uniforms (Box-Muller).
/// Real and imaginary parts each carry variance/2.
inline std::complex<double> complex_gaussian_from_uniforms(double u_open_low, double u_phase,
                                                           double variance)
{
    const double radius = std::sqrt(-variance * std::log(u_open_low));
    const double phase = 2.0 * std::numbers::pi * u_phase;
    return {radius * std::cos(phase), radius * std::sin(phase)};
}

class counter_stream {
public:
    constexpr counter_stream(std::uint64_t seed, std::uint64_t stream_id) noexcept
        : key_(derive_seed(seed, stream_id))
    {}

    [[nodiscard]] constexpr std::uint64_t bits(std::uint64_t counter, std::uint64_t lane) const noexcept
    {
        return splitmix64(key_ ^ splitmix64(2 * counter + lane));
    }

    /// CN(0, variance) sample at position `counter`.
    [[nodiscard]] std::complex<double> complex_gaussian(std::uint64_t counter, double variance) const
    {
        if (variance == 0.0)
            return {0.0, 0.0};
        return complex_gaussian_from_uniforms(bits_to_unit_open_low(bits(counter, 0)),
                                              bits_to_unit(bits(counter, 1)), variance);
    }

private:
    std::uint64_t key_;
};

class rng {
public:
    explicit rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    double uniform() { return bits_to_unit(engine_()); }

    double uniform_open_low() { return bits_to_unit_open_low(engine_()); }

    std::complex<double> complex_gaussian(double variance)
    {
        const double u = uniform_open_low();
        const double v = uniform();
        return complex_gaussian_from_uniforms(u, v, variance);
    }

    /// Unit-modulus phasor with phase uniform on [0, 2pi).
    std::complex<double> unit_phasor()
    {
        const double phase = 2.0 * std::numbers::pi * uniform();
        return {std::cos(phase), std::sin(phase)};
    }

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
};

} // namespace mpcap
