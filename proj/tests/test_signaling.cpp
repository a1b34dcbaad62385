#include <catch2/catch_amalgamated.hpp>

#include "mpcap/signaling.hpp"
#include "support.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

using namespace mpcap;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Minimal L with tail * P <= sigma^2, by a plain scan from 0.
path_index scan_guard(const decay_profile& p, double power, double sigma_sq)
{
    path_index l = 0;
    while (p.tail_sum(l) * power > sigma_sq)
        ++l;
    return l;
}

} // namespace

TEST_CASE("select_guard_length examples", "[signaling]")
{
    const decay_profile half(geometric_ratio{0.5, 1.0});
    CHECK(select_guard_length(half, 100.0, 1.0) == 7);
    CHECK(half.tail_sum(7) * 100.0 == 0.78125);
    CHECK(half.tail_sum(6) * 100.0 == 1.5625);

    for (double p : {1.0, 1e3, 1e12})
        for (double s : {0.1, 1.0})
            CHECK(select_guard_length(decay_profile(finite_taps{{1.0}}), p, s) == 0);

    const decay_profile gauss(stretched_exp{2.0});
    CHECK(select_guard_length(gauss, 1e6, 1.0) == 3);
    CHECK(gauss.tail_sum(3) <= 1e-6);
    CHECK(gauss.tail_sum(2) > 1e-6);
}

TEST_CASE("select_guard_length is minimal and agrees with a scan", "[signaling][property]")
{
    const std::vector<decay_profile> profiles{
        decay_profile(geometric_ratio{0.2, 1.0}),  decay_profile(geometric_ratio{0.8, 2.0}),
        decay_profile(stretched_exp{0.5}),         decay_profile(stretched_exp{2.0}),
        decay_profile(double_exp{1.0}),            decay_profile(polynomial_decay{3.0}),
        decay_profile(finite_taps{{1.0, 0.2, 0.1}}),
    };
    for (const auto& p : profiles) {
        for (double power : {0.5, 3.0, 1e2, 1e4, 1e6}) {
            for (double sigma_sq : {0.3, 1.0}) {
                INFO(p.describe() << " P=" << power << " s2=" << sigma_sq);
                const path_index l = select_guard_length(p, power, sigma_sq);
                CHECK(p.tail_sum(l) * power <= sigma_sq);
                if (l > 0)
                    CHECK(p.tail_sum(l - 1) * power > sigma_sq);
                CHECK(l == scan_guard(p, power, sigma_sq));
            }
        }
    }
    CHECK_THROWS_AS(select_guard_length(profiles[0], 0.0, 1.0), domain_error);
    CHECK_THROWS_AS(select_guard_length(profiles[0], 1.0, -1.0), domain_error);
}

TEST_CASE("guard_length_closed_form examples", "[signaling]")
{
    const auto a = guard_length_closed_form(0.5, 100.0);
    CHECK(a.guard_len == 7);
    CHECK_FALSE(a.clamped);

    const double e = std::numbers::e;
    const auto b = guard_length_closed_form(1.0 / e, e * (e - 1.0));
    CHECK(b.guard_len == 1);
    CHECK_FALSE(b.clamped);

    const auto c = guard_length_closed_form(0.5, 1.0);
    CHECK(c.guard_len == 0);
    CHECK(c.clamped);

    CHECK_THROWS_AS(guard_length_closed_form(0.0, 10.0), domain_error);
    CHECK_THROWS_AS(guard_length_closed_form(1.0, 10.0), domain_error);
    CHECK_THROWS_AS(guard_length_closed_form(0.5, 0.0), domain_error);
}

TEST_CASE("closed-form guard satisfies its condition and over-covers the scan", "[signaling][property]")
{
    for (double rho : {0.05, 0.2, 1.0 / std::numbers::e, 0.5, 0.8, 0.95}) {
        const decay_profile geo(geometric_ratio{rho, 1.0});
        for (double snr : {1.5, 10.0, 1e2, 1e4, 1e6, 1e9, 1e14}) {
            INFO("rho=" << rho << " snr=" << snr);
            const auto g = guard_length_closed_form(rho, snr);
            CHECK(geometric_guard_residual(rho, snr, g.guard_len) <= 1.0);
            if (!g.clamped && g.guard_len > 0)
                CHECK(geometric_guard_residual(rho, snr, g.guard_len - 1) > 1.0);
            // without a tie the result is the textbook ceiling
            const double q = std::log(snr * rho / (1.0 - rho)) / std::log(1.0 / rho);
            if (!g.clamped && std::abs(q - std::round(q)) > 1e-9)
                CHECK(static_cast<double>(g.guard_len) == std::ceil(q));
            CHECK(g.guard_len >= select_guard_length(geo, snr, 1.0));
        }
    }
}

TEST_CASE("sample_block respects the guard and slot intervals", "[signaling]")
{
    SECTION("L = 2, tau = 1, P = e")
    {
        const signaling_scheme s{2, 1, std::numbers::e};
        rng gen(5);
        std::vector<double> logs;
        for (int i = 0; i < 100'000; ++i) {
            const auto block = sample_block(s, gen);
            REQUIRE(block.size() == 3);
            REQUIRE(block[0] == std::complex<double>{});
            REQUIRE(block[1] == std::complex<double>{});
            const double m = std::norm(block[2]);
            REQUIRE(m >= 1.0 * (1.0 - 1e-12));
            REQUIRE(m <= std::numbers::e * (1.0 + 1e-12));
            logs.push_back(std::log(m));
        }
        const auto st = testing::summarize(logs);
        CHECK(std::abs(st.mean - 0.5) <= 3.0 * st.std_err());
    }
    SECTION("L = 0, tau = 2, P = e^2")
    {
        const double e = std::numbers::e;
        const signaling_scheme s{0, 2, e * e};
        CHECK(s.slot_interval(1).first == 1.0);
        CHECK_THAT(s.slot_interval(1).second, WithinRel(e, 1e-15));
        CHECK_THAT(s.slot_interval(2).second, WithinRel(e * e, 1e-15));
        rng gen(6);
        for (int i = 0; i < 20'000; ++i) {
            const auto block = sample_block(s, gen);
            REQUIRE(std::norm(block[0]) >= 1.0 - 1e-12);
            REQUIRE(std::norm(block[0]) <= e * (1.0 + 1e-12));
            REQUIRE(std::norm(block[1]) >= e * (1.0 - 1e-12));
            REQUIRE(std::norm(block[1]) <= e * e * (1.0 + 1e-12));
        }
    }
    SECTION("mean symbol is zero")
    {
        const signaling_scheme s{1, 3, 50.0};
        rng gen(7);
        std::complex<double> sum{};
        double power = 0.0;
        std::size_t count = 0;
        for (int b = 0; b < 100'000; ++b) {
            const auto block = sample_block(s, gen);
            for (std::size_t i = s.guard_len; i < block.size(); ++i) {
                sum += block[i];
                power += std::norm(block[i]);
                ++count;
            }
        }
        const double n = static_cast<double>(count);
        CHECK(std::abs(sum / n) < 4.0 * std::sqrt(power / n / n));
    }
}

TEST_CASE("expected_block_power", "[signaling]")
{
    const double e = std::numbers::e;
    CHECK_THAT(expected_block_power({0, 1, e}), WithinRel(e - 1.0, 1e-15));
    CHECK(expected_block_power({0, 1, e}) <= e);
    CHECK_THAT(expected_block_power({0, 1, 100.0}), WithinAbs(21.497, 1e-3));

    for (std::size_t tau : {1, 2, 5})
        for (double p : {1.5, 10.0, 1e6})
            CHECK(expected_block_power({tau, tau, p}) == 0.5 * expected_block_power({0, tau, p}));

    // Monte Carlo
    const signaling_scheme s{0, 1, 100.0};
    rng gen(9);
    std::vector<double> power;
    for (int i = 0; i < 1'000'000; ++i)
        power.push_back(std::norm(sample_block(s, gen)[0]));
    const auto st = testing::summarize(power);
    CHECK(std::abs(st.mean - expected_block_power(s)) <= 3.0 * st.std_err());

    // the per-symbol power constraint
    for (double p : {1.0001, 1.5, std::numbers::e, 1e3, 1e12})
        CHECK(expected_block_power({0, 1, p}) <= p);
}

TEST_CASE("slot log-magnitude means sit at the interval midpoints", "[signaling]")
{
    const signaling_scheme s{2, 3, 1e3};
    rng gen(10);
    std::vector<std::vector<double>> logs(3);
    for (int b = 0; b < 100'000; ++b) {
        const auto block = sample_block(s, gen);
        for (std::size_t nu = 1; nu <= 3; ++nu)
            logs[nu - 1].push_back(std::log(std::norm(block[s.guard_len + nu - 1])));
    }
    for (std::size_t nu = 1; nu <= 3; ++nu) {
        const auto st = testing::summarize(logs[nu - 1]);
        const double expected = (static_cast<double>(nu) - 0.5) * std::log(1e3) / 3.0;
        INFO("nu = " << nu);
        CHECK(std::abs(st.mean - expected) <= 3.0 * st.std_err());
    }
}

TEST_CASE("invalid schemes", "[signaling]")
{
    rng gen(0);
    CHECK_THROWS_AS(sample_block({0, 1, 1.0}, gen), invalid_power_error);
    CHECK_THROWS_AS(sample_block({0, 1, 0.5}, gen), invalid_power_error);
    CHECK_THROWS_AS(expected_block_power({0, 1, 1.0}), invalid_power_error);
    CHECK_THROWS_AS(sample_block({0, 0, 10.0}, gen), domain_error);
    const auto blocks = sample_blocks({3, 2, 10.0}, 4, gen);
    CHECK(blocks.size() == 20);
}
