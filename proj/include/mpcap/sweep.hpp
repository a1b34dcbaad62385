#pragma once

// SNR sweeps of the capacity lower bound, with optional Monte-Carlo
// certification per point, and their CSV / SVG serializations.

#include "bounds.hpp"
#include "config.hpp"
#include "decay_profile.hpp"
#include "errors.hpp"
#include "mi_oracle.hpp"
#include "rng.hpp"
#include "signaling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace mpcap {

struct tau_rule {
    /// nullopt: tau = L (at least 1)
    std::optional<std::size_t> fixed;

    [[nodiscard]] std::size_t apply(path_index guard) const
    {
        if (fixed)
            return *fixed;
        return static_cast<std::size_t>(std::max<path_index>(guard, 1));
    }
};

enum class guard_rule { scan, closed_form };

struct sweep_config {
    decay_profile profile{finite_taps{{1.0}}};
    double sigma_sq = 1.0;
    std::vector<double> snr_grid;
    tau_rule tau;
    std::optional<double> rho_majorant;
    guard_rule guard = guard_rule::scan;
    bool oracle = false;
    std::uint64_t n_samples = 1'000'000;
    std::uint64_t seed = 0;
    std::size_t partitions = 8;
    std::size_t threads = 0; ///< 0: hardware concurrency
    std::string csv_path;
    std::string svg_path;

    void validate() const
    {
        if (!(sigma_sq > 0.0))
            throw domain_error("sweep: noise variance must be positive");
        if (snr_grid.empty())
            throw domain_error("sweep: SNR grid must be nonempty");
        for (std::size_t i = 0; i < snr_grid.size(); ++i) {
            if (!(snr_grid[i] > 0.0) || !std::isfinite(snr_grid[i]))
                throw domain_error("sweep: SNR values must be positive");
            if (i > 0 && !(snr_grid[i] > snr_grid[i - 1]))
                throw domain_error("sweep: SNR grid must be strictly increasing");
        }
        if (tau.fixed && *tau.fixed == 0)
            throw domain_error("sweep: fixed tau must be positive");
        if (rho_majorant && !(*rho_majorant > 0.0 && *rho_majorant < 1.0))
            throw domain_error("sweep: rho majorant must lie in (0, 1)");
        if (guard == guard_rule::closed_form && !rho_majorant)
            throw domain_error("sweep: closed-form guard rule needs a rho majorant");
    }
};

/// n points log-spaced from `from` to `to` inclusive.
inline std::vector<double> log_spaced(double from, double to, std::size_t n)
{
    if (n == 0 || !(from > 0.0) || !(to >= from))
        throw domain_error("log_spaced: need 0 < from <= to and n >= 1");
    std::vector<double> out(n);
    const double a = std::log10(from);
    const double b = std::log10(to);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = n == 1 ? from : std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    return out;
}

/// Parses a sweep document:
///   {"profile": {...}, "sigma_sq": 1, "snr_grid": [...] | "snr_grid_db": [...] |
///    "snr_grid": {"from": 1e2, "to": 1e14, "points": 13}, "tau": "L" | 4,
///    "rho_majorant": 0.5, "guard_rule": "scan" | "closed_form", "oracle": true,
///    "n_samples": 1000000, "seed": 1, "partitions": 8, "output": {"csv": "...", "svg": "..."}}
inline sweep_config parse_sweep_config(const json& j)
{
    if (!j.is_object())
        throw parse_error("sweep config must be an object");
    sweep_config c;
    if (!j.contains("profile"))
        throw parse_error("sweep config: missing 'profile'");
    c.profile = parse_profile(j.at("profile"));
    c.sigma_sq = linear_quantity(j, "sigma_sq").value_or(1.0);

    try {
        if (j.contains("snr_grid") && j.at("snr_grid").is_object()) {
            const auto& g = j.at("snr_grid");
            c.snr_grid = log_spaced(detail::require_number(g, "from"), detail::require_number(g, "to"),
                                    g.value("points", std::size_t{10}));
        } else if (j.contains("snr_grid")) {
            c.snr_grid = detail::require_numbers(j, "snr_grid");
        } else if (j.contains("snr_grid_db")) {
            for (double db : detail::require_numbers(j, "snr_grid_db"))
                c.snr_grid.push_back(detail::db_to_linear(db));
        } else {
            throw parse_error("sweep config: missing 'snr_grid'");
        }

        if (j.contains("tau")) {
            const auto& t = j.at("tau");
            if (t.is_string()) {
                if (t.get<std::string>() != "L")
                    throw parse_error("sweep config: tau must be \"L\" or a positive integer");
            } else if (t.is_number_unsigned() || t.is_number_integer()) {
                const auto v = t.get<long long>();
                if (v <= 0)
                    throw parse_error("sweep config: tau must be positive");
                c.tau.fixed = static_cast<std::size_t>(v);
            } else {
                throw parse_error("sweep config: tau must be \"L\" or a positive integer");
            }
        }
        if (j.contains("rho_majorant"))
            c.rho_majorant = detail::require_number(j, "rho_majorant");
        const auto rule = j.value("guard_rule", std::string("scan"));
        if (rule == "closed_form")
            c.guard = guard_rule::closed_form;
        else if (rule != "scan")
            throw parse_error("sweep config: guard_rule must be 'scan' or 'closed_form'");
        c.oracle = j.value("oracle", false);
        if (j.contains("n_samples"))
            c.n_samples = static_cast<std::uint64_t>(detail::require_number(j, "n_samples"));
        c.seed = j.value("seed", std::uint64_t{0});
        c.partitions = j.value("partitions", std::size_t{8});
        c.threads = j.value("threads", std::size_t{0});
        if (j.contains("output")) {
            c.csv_path = j.at("output").value("csv", std::string{});
            c.svg_path = j.at("output").value("svg", std::string{});
        }
    } catch (const json::exception& e) {
        throw parse_error(std::string("sweep config: ") + e.what());
    }
    return c;
}

struct sweep_row {
    double snr = 0.0;
    double power = 0.0;
    double sigma_sq = 0.0;
    std::optional<path_index> guard_len;
    std::optional<std::size_t> tau;
    std::optional<double> upsilon;
    std::optional<double> c_lb_raw;
    std::optional<double> c_lb;
    std::optional<double> mi_oracle;
    std::optional<double> mi_stderr;
    std::optional<double> asymptotic_limit;
    std::string error;
};

struct sweep_result {
    std::vector<sweep_row> rows;
};

namespace detail {

inline sweep_row run_point(const sweep_config& c, std::size_t index, bool nested_parallel)
{
    sweep_row row;
    row.snr = c.snr_grid[index];
    row.sigma_sq = c.sigma_sq;
    row.power = row.snr * c.sigma_sq;
    try {
        const double alpha_0 = c.profile.alpha_0();
        const double alpha = c.profile.total_alpha();
        const double ups = upsilon(e_log_h_sq_gaussian(alpha_0), alpha_0, alpha, c.sigma_sq);
        row.upsilon = ups;
        if (c.rho_majorant)
            row.asymptotic_limit = asymptotic_limit(*c.rho_majorant, ups);

        path_index guard = select_guard_length(c.profile, row.power, c.sigma_sq);
        if (c.guard == guard_rule::closed_form) {
            guard = guard_length_closed_form(*c.rho_majorant, row.snr).guard_len;
            // the majorant may not cover the profile yet at this SNR
            (void)w_power_bound(c.profile, guard, row.power, c.sigma_sq);
        }
        row.guard_len = guard;
        const std::size_t tau = c.tau.apply(guard);
        row.tau = tau;

        const auto report = capacity_lower_bound(guard, tau, row.power, ups, c.sigma_sq);
        row.c_lb_raw = report.lower_bound_raw;
        row.c_lb = report.lower_bound;

        if (c.oracle) {
            mi_options opts;
            opts.n_samples = c.n_samples;
            opts.seed = c.seed ^ static_cast<std::uint64_t>(index);
            opts.partitions = c.partitions;
            opts.parallel = nested_parallel;
            const double w_power = w_power_bound(c.profile, guard, row.power, c.sigma_sq).bound;
            const auto est = estimate_mi(log_uniform_slot{row.power, tau, 1}, alpha_0, w_power, opts);
            const double duty = static_cast<double>(tau) / static_cast<double>(guard + tau);
            row.mi_oracle = duty * est.value;
            row.mi_stderr = duty * est.std_err;
        }
    } catch (const error& e) {
        row.error = e.what();
    }
    return row;
}

} // namespace detail

/// Evaluates every grid point. Points run concurrently; rows come back in grid order and
/// do not depend on the thread count.
inline sweep_result run_sweep(const sweep_config& config)
{
    config.validate();
    const std::size_t n = config.snr_grid.size();
    sweep_result result;
    result.rows.resize(n);

    std::size_t workers = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            result.rows[i] = detail::run_point(config, i, true);
        return result;
    }

    std::atomic<std::size_t> next{0};
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++)
                    result.rows[i] = detail::run_point(config, i, false);
            });
    }
    return result;
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr const char* csv_header =
    "snr,p,sigma_sq,guard_len,tau,upsilon_nats,c_lb_raw_nats,c_lb_nats,mi_oracle_nats,mi_stderr,error";

/// 17 significant digits, '.' decimal separator regardless of locale.
inline std::string format_real(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    std::string s(buf);
    std::replace(s.begin(), s.end(), ',', '.');
    return s;
}

inline std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"')
            out += '"';
        out += ch == '\n' ? ' ' : ch;
    }
    return out + "\"";
}

inline void write_csv(std::ostream& out, const sweep_result& result)
{
    auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string{}; };
    out << csv_header << '\n';
    for (const auto& r : result.rows) {
        out << format_real(r.snr) << ',' << format_real(r.power) << ',' << format_real(r.sigma_sq) << ','
            << (r.guard_len ? std::to_string(*r.guard_len) : std::string{}) << ','
            << (r.tau ? std::to_string(*r.tau) : std::string{}) << ',' << opt(r.upsilon) << ',' << opt(r.c_lb_raw)
            << ',' << opt(r.c_lb) << ',' << opt(r.mi_oracle) << ',' << opt(r.mi_stderr) << ','
            << csv_escape(r.error) << '\n';
    }
}

inline std::string to_csv(const sweep_result& result)
{
    std::ostringstream out;
    write_csv(out, result);
    return out.str();
}

// ---------------------------------------------------------------------------
// SVG: log-x line plot of c_lb and the oracle rate

inline void write_svg(std::ostream& out, const sweep_result& result)
{
    constexpr double width = 720.0;
    constexpr double height = 440.0;
    constexpr double left = 70.0;
    constexpr double right = 20.0;
    constexpr double top = 30.0;
    constexpr double bottom = 50.0;

    double x_min = std::numeric_limits<double>::infinity();
    double x_max = -x_min;
    double y_min = 0.0;
    double y_max = 0.0;
    for (const auto& r : result.rows) {
        x_min = std::min(x_min, std::log10(r.snr));
        x_max = std::max(x_max, std::log10(r.snr));
        for (const auto& v : {r.c_lb, r.mi_oracle})
            if (v && std::isfinite(*v)) {
                y_min = std::min(y_min, *v);
                y_max = std::max(y_max, *v);
            }
    }
    if (!(x_max > x_min)) {
        x_min -= 0.5;
        x_max += 0.5;
    }
    if (!(y_max > y_min))
        y_max = y_min + 1.0;

    auto px = [&](double snr) { return left + (std::log10(snr) - x_min) / (x_max - x_min) * (width - left - right); };
    auto py = [&](double y) { return height - bottom - (y - y_min) / (y_max - y_min) * (height - top - bottom); };
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return std::string(buf);
    };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\"" << width - right << "\" y2=\""
        << height - bottom << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << height - bottom
        << "\" stroke=\"black\"/>\n";
    for (int decade = static_cast<int>(std::ceil(x_min)); decade <= static_cast<int>(std::floor(x_max)); ++decade) {
        const double x = px(std::pow(10.0, decade));
        out << "<line x1=\"" << num(x) << "\" y1=\"" << height - bottom << "\" x2=\"" << num(x) << "\" y2=\""
            << height - bottom + 5 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << num(x) << "\" y=\"" << height - bottom + 20
            << "\" font-size=\"11\" text-anchor=\"middle\">1e" << decade << "</text>\n";
    }
    for (int i = 0; i <= 4; ++i) {
        const double y = y_min + (y_max - y_min) * i / 4.0;
        out << "<text x=\"" << left - 8 << "\" y=\"" << num(py(y) + 4) << "\" font-size=\"11\" text-anchor=\"end\">"
            << num(y) << "</text>\n";
    }
    out << "<text x=\"" << (left + width - right) / 2 << "\" y=\"" << height - 10
        << "\" font-size=\"12\" text-anchor=\"middle\">SNR (linear, log scale)</text>\n";
    out << "<text x=\"16\" y=\"" << (top + height - bottom) / 2
        << "\" font-size=\"12\" transform=\"rotate(-90 16 " << (top + height - bottom) / 2
        << ")\" text-anchor=\"middle\">nats per channel use</text>\n";

    auto series = [&](auto member, const char* colour, const char* label, int slot) {
        std::string points;
        for (const auto& r : result.rows) {
            const auto& v = r.*member;
            if (v && std::isfinite(*v))
                points += num(px(r.snr)) + "," + num(py(*v)) + " ";
        }
        if (points.empty())
            return;
        out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"" << points << "\"/>\n";
        out << "<text x=\"" << left + 10 << "\" y=\"" << top + 14 * slot << "\" font-size=\"12\" fill=\"" << colour
            << "\">" << label << "</text>\n";
    };
    series(&sweep_row::c_lb, "#1f77b4", "capacity lower bound", 1);
    series(&sweep_row::mi_oracle, "#d62728", "oracle rate", 2);
    out << "</svg>\n";
}

inline json sweep_to_json(const sweep_result& result)
{
    json rows = json::array();
    auto opt = [](const std::optional<double>& v) -> json { return v ? real_to_json(*v) : json(nullptr); };
    for (const auto& r : result.rows) {
        rows.push_back({{"snr", r.snr},
                        {"p", r.power},
                        {"sigma_sq", r.sigma_sq},
                        {"guard_len", r.guard_len ? json(*r.guard_len) : json(nullptr)},
                        {"tau", r.tau ? json(*r.tau) : json(nullptr)},
                        {"upsilon_nats", opt(r.upsilon)},
                        {"c_lb_raw_nats", opt(r.c_lb_raw)},
                        {"c_lb_nats", opt(r.c_lb)},
                        {"mi_oracle_nats", opt(r.mi_oracle)},
                        {"mi_stderr", opt(r.mi_stderr)},
                        {"asymptotic_limit_nats", opt(r.asymptotic_limit)},
                        {"error", r.error}});
    }
    return rows;
}

} // namespace mpcap
