#include <catch2/catch_amalgamated.hpp>

#include "mpcap/config.hpp"
#include "mpcap/sweep.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace mpcap;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::StartsWith;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

sweep_config decade_sweep(decay_profile profile, int from, int to)
{
    sweep_config c;
    c.profile = std::move(profile);
    for (int k = from; k <= to; ++k)
        c.snr_grid.push_back(std::pow(10.0, k));
    return c;
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        out.push_back(line);
    return out;
}

} // namespace

TEST_CASE("flat fading: c_lb_raw - log log P is upsilon on every row", "[sweep]")
{
    auto c = decade_sweep(decay_profile(finite_taps{{1.0}}), 1, 12);
    c.tau.fixed = 1;
    const auto result = run_sweep(c);
    REQUIRE(result.rows.size() == 12);
    const double ups = -euler_gamma - 1.0 - 2.0 * std::log(1.0 + std::sqrt(3.0));
    for (const auto& r : result.rows) {
        REQUIRE(r.error.empty());
        CHECK(*r.guard_len == 0);
        CHECK(*r.tau == 1);
        CHECK_THAT(*r.upsilon, WithinAbs(ups, 1e-12));
        CHECK_THAT(*r.c_lb_raw - std::log(std::log(r.power)), WithinAbs(*r.upsilon, 1e-12));
    }
}

TEST_CASE("stretched exponential: the bound ends above where it starts", "[sweep]")
{
    auto c = decade_sweep(decay_profile(stretched_exp{2.0}), 2, 14);
    const auto rows = run_sweep(c).rows;
    CHECK(*rows.back().c_lb_raw > *rows.front().c_lb_raw);
    // L settles at 5 from 1e11 on; past the last jump the bound increases
    for (std::size_t i = 10; i < rows.size(); ++i) {
        CHECK(*rows[i].guard_len == 5);
        CHECK(*rows[i].c_lb_raw > *rows[i - 1].c_lb_raw);
    }
    for (const auto& r : rows)
        CHECK(*r.tau == std::max<path_index>(*r.guard_len, 1));
}

TEST_CASE("geometric profile: L grows like log2 SNR", "[sweep]")
{
    const auto rows = run_sweep(decade_sweep(decay_profile(geometric_ratio{0.5, 1.0}), 2, 14)).rows;
    for (const auto& r : rows) {
        if (r.snr < 1e6)
            continue;
        const double ratio = static_cast<double>(*r.guard_len) / std::log2(r.snr);
        CHECK(ratio >= 0.9);
        CHECK(ratio <= 1.1);
    }
}

TEST_CASE("closed-form guard rule and per-point errors", "[sweep]")
{
    auto c = decade_sweep(decay_profile(geometric_ratio{0.5, 1.0}), 1, 8);
    c.rho_majorant = 0.5;
    c.guard = guard_rule::closed_form;
    for (const auto& r : run_sweep(c).rows) {
        REQUIRE(r.error.empty());
        CHECK(*r.guard_len == guard_length_closed_form(0.5, r.snr).guard_len);
        CHECK(r.asymptotic_limit.has_value());
    }

    // a majorant that does not cover the profile: guard too short, recorded per row
    c.profile = decay_profile(geometric_ratio{0.8, 1.0});
    const auto rows = run_sweep(c).rows;
    bool any_error = false;
    for (const auto& r : rows)
        any_error = any_error || !r.error.empty();
    CHECK(any_error);
    CHECK(rows.size() == 8);
    const auto csv = to_csv(run_sweep(c));
    CHECK_THAT(csv, ContainsSubstring("guard"));

    sweep_config bad = decade_sweep(decay_profile(finite_taps{{1.0}}), 1, 2);
    bad.guard = guard_rule::closed_form;
    CHECK_THROWS_AS(run_sweep(bad), domain_error);
}

TEST_CASE("points with P <= 1 report an error instead of aborting", "[sweep]")
{
    sweep_config c;
    c.snr_grid = {0.5, 10.0};
    const auto rows = run_sweep(c).rows;
    CHECK_FALSE(rows[0].error.empty());
    CHECK(rows[1].error.empty());
    const auto text = lines(to_csv(run_sweep(c)));
    REQUIRE(text.size() == 3);
    CHECK_THAT(text[1], ContainsSubstring("P > 1"));
}

TEST_CASE("oracle column dominates the bound", "[sweep]")
{
    auto c = decade_sweep(decay_profile(stretched_exp{2.0}), 3, 9);
    c.oracle = true;
    c.n_samples = 40'000;
    c.seed = 3;
    for (const auto& r : run_sweep(c).rows) {
        REQUIRE(r.mi_oracle);
        CHECK(*r.mi_oracle + 3.0 * *r.mi_stderr >= *r.c_lb_raw);
        CHECK(*r.mi_oracle + 3.0 * *r.mi_stderr >= 0.0);
    }
}

TEST_CASE("CSV output is stable", "[sweep]")
{
    auto c = decade_sweep(decay_profile(stretched_exp{1.5}), 1, 6);
    c.oracle = true;
    c.n_samples = 20'000;
    c.seed = 42;
    c.threads = 4;
    const auto a = to_csv(run_sweep(c));
    const auto b = to_csv(run_sweep(c));
    CHECK(a == b);
    c.threads = 1;
    CHECK(to_csv(run_sweep(c)) == a);

    const auto text = lines(a);
    REQUIRE(text.size() == 7);
    CHECK(text[0] == "snr,p,sigma_sq,guard_len,tau,upsilon_nats,c_lb_raw_nats,c_lb_nats,mi_oracle_nats,mi_stderr,error");
    for (std::size_t i = 1; i < text.size(); ++i)
        CHECK(std::count(text[i].begin(), text[i].end(), ',') == 10);
    CHECK(a.find('\r') == std::string::npos);

    c.seed = 43;
    CHECK(to_csv(run_sweep(c)) != a);
}

TEST_CASE("real formatting", "[sweep]")
{
    CHECK(format_real(0.1) == "0.10000000000000001");
    CHECK(format_real(100.0) == "100");
    CHECK(std::stod(format_real(std::numbers::pi)) == std::numbers::pi);
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("say \"x\"") == "\"say \"\"x\"\"\"");
    CHECK(csv_escape("plain") == "plain");
}

TEST_CASE("SVG plot", "[sweep]")
{
    auto c = decade_sweep(decay_profile(stretched_exp{2.0}), 2, 10);
    std::ostringstream out;
    write_svg(out, run_sweep(c));
    const auto svg = out.str();
    CHECK_THAT(svg, StartsWith("<svg"));
    CHECK_THAT(svg, ContainsSubstring("<polyline"));
    CHECK_THAT(svg, ContainsSubstring("1e10"));
    CHECK_THAT(svg, ContainsSubstring("</svg>"));
}

TEST_CASE("sweep config parsing", "[sweep][config]")
{
    const auto c = parse_sweep_config(json::parse(R"({
        "profile": {"kind": "geometric", "rho": 0.5},
        "sigma_sq_db": 3,
        "snr_grid": {"from": 1e2, "to": 1e6, "points": 5},
        "tau": 4,
        "rho_majorant": 0.5,
        "guard_rule": "closed_form",
        "oracle": true,
        "n_samples": 1e5,
        "seed": 9,
        "output": {"csv": "out.csv", "svg": "out.svg"}
    })"));
    CHECK_THAT(c.sigma_sq, WithinRel(std::pow(10.0, 0.3), 1e-14));
    REQUIRE(c.snr_grid.size() == 5);
    CHECK_THAT(c.snr_grid[1], WithinRel(1e3, 1e-14));
    CHECK(*c.tau.fixed == 4);
    CHECK(c.guard == guard_rule::closed_form);
    CHECK(c.oracle);
    CHECK(c.n_samples == 100'000);
    CHECK(c.seed == 9);
    CHECK(c.csv_path == "out.csv");
    CHECK(c.svg_path == "out.svg");

    const auto db = parse_sweep_config(json::parse(R"({"profile": {"kind": "finite", "taps": [1]},
                                                       "snr_grid_db": [10, 20], "tau": "L"})"));
    CHECK_THAT(db.snr_grid[1], WithinRel(100.0, 1e-14));
    CHECK_FALSE(db.tau.fixed);
    CHECK(db.tau.apply(0) == 1);
    CHECK(db.tau.apply(6) == 6);

    CHECK_THROWS_AS(parse_sweep_config(json::parse(R"({"snr_grid": [1]})")), parse_error);
    CHECK_THROWS_AS(parse_sweep_config(json::parse(R"({"profile": {"kind": "finite", "taps": [1]}})")), parse_error);
    CHECK_THROWS_AS(parse_sweep_config(json::parse(R"({"profile": {"kind": "finite", "taps": [1]},
                                                       "snr_grid": [1], "tau": "M"})")),
                    parse_error);
    CHECK_THROWS_AS(parse_sweep_config(json::parse(R"({"profile": {"kind": "finite", "taps": [1]},
                                                       "snr_grid": [1], "tau": 0})")),
                    parse_error);
    CHECK_THROWS_AS(parse_sweep_config(json::parse(R"({"profile": {"kind": "finite", "taps": [1]},
                                                       "snr_grid": [1], "guard_rule": "guess"})")),
                    parse_error);

    sweep_config unsorted;
    unsorted.snr_grid = {10.0, 5.0};
    CHECK_THROWS_AS(run_sweep(unsorted), domain_error);
    unsorted.snr_grid = {};
    CHECK_THROWS_AS(run_sweep(unsorted), domain_error);
}

TEST_CASE("profile documents round-trip", "[config]")
{
    const std::vector<std::string> docs{
        R"({"kind": "finite", "taps": [1.0, 0.5]})",
        R"({"kind": "geometric", "rho": 0.25, "scale": 2.0})",
        R"({"kind": "stretched_exp", "kappa": 1.5})",
        R"({"kind": "double_exp", "kappa": 0.5})",
        R"({"kind": "polynomial", "p": 2.5})",
        R"({"kind": "tabulated", "values": [1.0, 0.3], "tail": "zero"})",
        R"({"kind": "tabulated", "values": [1.0, 0.3], "tail": "geometric", "tail_rho": 0.4})",
    };
    for (const auto& d : docs) {
        const auto p = parse_profile(json::parse(d));
        const auto back = profile_to_json(p);
        const auto again = parse_profile(back);
        INFO(d);
        CHECK(profile_to_json(again) == back);
        CHECK(again.total_alpha() == p.total_alpha());
    }
    CHECK(parse_profile(json::parse(R"({"kind": "geometric", "rho": 0.5})")).total_alpha() == 2.0);

    CHECK_THROWS_AS(parse_profile(json::parse(R"({"kind": "sinc"})")), parse_error);
    CHECK_THROWS_AS(parse_profile(json::parse(R"({"rho": 0.5})")), parse_error);
    CHECK_THROWS_AS(parse_profile(json::parse(R"({"kind": "geometric"})")), parse_error);
    CHECK_THROWS_AS(parse_profile(json::parse(R"({"kind": "finite", "taps": [1, "x"]})")), parse_error);
    CHECK_THROWS_AS(parse_profile(json::parse(R"({"kind": "tabulated", "values": [1], "tail": "cubic"})")),
                    parse_error);
    CHECK_THROWS_AS(parse_profile(json::parse(R"({"kind": "geometric", "rho": 1.5})")), domain_error);
    CHECK_THROWS_AS(parse_profile(json::parse(R"({"kind": "polynomial", "p": 1})")), non_summable_error);
}

TEST_CASE("input-law documents", "[config]")
{
    const auto lu = std::get<log_uniform_slot>(parse_input_law(json::parse(R"({"kind": "log_uniform",
                                                                             "log_power": 20, "tau": 4, "nu": 2})")));
    CHECK_THAT(std::log(lu.power), WithinRel(20.0, 1e-14));
    CHECK(lu.tau == 4);
    CHECK(lu.nu == 2);
    const auto db = std::get<log_uniform_slot>(parse_input_law(json::parse(R"({"kind": "log_uniform", "power_db": 30})")));
    CHECK_THAT(db.power, WithinRel(1000.0, 1e-14));
    const auto c = std::get<constant_modulus>(parse_input_law(json::parse(R"({"kind": "constant", "power": 2})")));
    CHECK(c.power == 2.0);
    const auto t = std::get<two_point>(
        parse_input_law(json::parse(R"({"kind": "two_point", "power_1": 1, "power_2": 100, "q": 0.25})")));
    CHECK(t.q == 0.25);
    CHECK_THROWS_AS(parse_input_law(json::parse(R"({"kind": "log_uniform"})")), parse_error);
    CHECK_THROWS_AS(parse_input_law(json::parse(R"({"kind": "uniform"})")), parse_error);
}

TEST_CASE("structured reports", "[config]")
{
    CHECK(real_to_json(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(real_to_json(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(real_to_json(std::nan("")).is_null());
    CHECK(real_to_json(1.5) == 1.5);

    const auto report = report_to_json(classify(decay_profile(finite_taps{{1.0}}), 4));
    CHECK(report.at("verdict") == "unbounded");
    CHECK(report.at("witness").at("l").size() == 4);
    CHECK(report.at("witness").at("decay_rate")[0].is_null());
    CHECK(report.at("witness").at("decay_rate")[2] == "inf");
    // the document is valid JSON text
    CHECK_NOTHROW(json::parse(report.dump()));

    auto c = decade_sweep(decay_profile(finite_taps{{1.0}}), 1, 3);
    const auto rows = sweep_to_json(run_sweep(c));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].at("guard_len") == 0);
    CHECK(rows[0].at("mi_oracle_nats").is_null());

    CHECK_THROWS_AS(load_json_file("/nonexistent/mpcap.json"), parse_error);
}

TEST_CASE("log-spaced grids", "[sweep]")
{
    const auto g = log_spaced(1e2, 1e14, 13);
    REQUIRE(g.size() == 13);
    CHECK(g.front() == 1e2);
    CHECK_THAT(g[6], WithinRel(1e8, 1e-13));
    CHECK_THAT(g.back(), WithinRel(1e14, 1e-13));
    CHECK(log_spaced(5.0, 5.0, 1) == std::vector<double>{5.0});
    CHECK_THROWS_AS(log_spaced(0.0, 1.0, 3), domain_error);
    CHECK_THROWS_AS(log_spaced(1.0, 10.0, 0), domain_error);
}
