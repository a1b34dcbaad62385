#pragma once

// Bounded / unbounded capacity verdicts from the decay of {alpha_l}.
//
//   liminf alpha_{l+1}/alpha_l > 0          => capacity bounded
//   lim (1/l) log log(1/alpha_l) = inf      => capacity unbounded
//   lim (1/l) log(1/alpha_l) = inf          => capacity unbounded
//   lim alpha_{l+1}/alpha_l = 0             => capacity unbounded
//
// with a/0 = inf (a > 0), 0/0 = 0 and 1/0 = inf. Closed-form families are
// decided symbolically; tabulated data by thresholded witness trajectories.

#include "decay_profile.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <string_view>
#include <vector>

namespace mpcap {

enum class verdict { bounded, unbounded, indeterminate };

enum class decay_rule {
    ratio_liminf_positive,    ///< liminf alpha_{l+1}/alpha_l > 0
    double_exponential_decay, ///< (1/l) log log(1/alpha_l) -> inf
    super_exponential_decay,  ///< (1/l) log(1/alpha_l) -> inf
    ratio_to_zero,            ///< alpha_{l+1}/alpha_l -> 0
    none,
};

inline std::string_view to_string(verdict v)
{
    switch (v) {
    case verdict::bounded: return "bounded";
    case verdict::unbounded: return "unbounded";
    case verdict::indeterminate: return "indeterminate";
    }
    return "?";
}

inline std::string_view to_string(decay_rule r)
{
    switch (r) {
    case decay_rule::ratio_liminf_positive: return "ratio_liminf_positive";
    case decay_rule::double_exponential_decay: return "double_exponential_decay";
    case decay_rule::super_exponential_decay: return "super_exponential_decay";
    case decay_rule::ratio_to_zero: return "ratio_to_zero";
    case decay_rule::none: return "none";
    }
    return "?";
}

struct witness_point {
    path_index l;
    double ratio;      ///< alpha_{l+1} / alpha_l with the a/0, 0/0 conventions
    double decay_rate; ///< (1/l) log(1/alpha_l), 1/0 = inf; NaN at l = 0
};

struct classification_report {
    verdict result = verdict::indeterminate;
    decay_rule rule = decay_rule::none;
    bool bounded_rule_fired = false;
    bool unbounded_rule_fired = false;
    /// Numeric verdict from finite data: lim and liminf cannot be told apart.
    bool limit_caveat = false;
    std::vector<witness_point> witness;
};

/// a/0 = inf for a > 0, 0/0 = 0.
inline double convention_ratio(double num, double den)
{
    if (den == 0.0)
        return num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    return num / den;
}

/// (1/l) log(1/alpha) with 1/0 = inf.
inline double decay_rate(path_index l, double alpha)
{
    if (l == 0)
        return std::numeric_limits<double>::quiet_NaN();
    if (alpha == 0.0)
        return std::numeric_limits<double>::infinity();
    return -std::log(alpha) / static_cast<double>(l);
}

namespace detail {

// log alpha_l, exact for closed forms so witnesses survive underflow; -inf for zero.
inline double log_alpha(const decay_profile& profile, path_index l)
{
    const double ld = static_cast<double>(l);
    struct visitor {
        const decay_profile& profile;
        path_index l;
        double ld;
        double operator()(const geometric_ratio& k) const { return std::log(k.scale) + ld * std::log(k.rho); }
        double operator()(const stretched_exp& k) const { return -std::pow(ld, k.kappa); }
        double operator()(const double_exp& k) const { return -std::exp(std::pow(ld, k.kappa)); }
        double operator()(const polynomial_decay& k) const { return -k.p * std::log(ld + 1.0); }
        double operator()(const finite_taps&) const { return std::log(profile.alpha_at(l)); }
        double operator()(const tabulated&) const { return std::log(profile.alpha_at(l)); }
    };
    return std::visit(visitor{profile, l, ld}, profile.kind());
}

inline std::vector<witness_point> trajectories(const decay_profile& profile, path_index range)
{
    std::vector<witness_point> out;
    out.reserve(range);
    constexpr double neg_inf = -std::numeric_limits<double>::infinity();
    double log_here = log_alpha(profile, 0);
    for (path_index l = 0; l < range; ++l) {
        const double log_next = log_alpha(profile, l + 1);
        double ratio;
        if (log_here == neg_inf)
            ratio = log_next == neg_inf ? 0.0 : std::numeric_limits<double>::infinity();
        else
            ratio = log_next == neg_inf ? 0.0 : std::exp(log_next - log_here);
        double rate = std::numeric_limits<double>::quiet_NaN();
        if (l > 0)
            rate = log_here == neg_inf ? std::numeric_limits<double>::infinity()
                                       : -log_here / static_cast<double>(l);
        out.push_back({l, ratio, rate});
        log_here = log_next;
    }
    return out;
}

inline classification_report classify_numeric(std::vector<witness_point> witness)
{
    classification_report report;
    report.limit_caveat = true;
    const std::size_t n = witness.size();
    if (n < 8) {
        report.witness = std::move(witness);
        return report;
    }

    // Ratio criterion over the last half, plateau over the last quarter.
    double r_min = std::numeric_limits<double>::infinity();
    bool ratios_finite = true;
    for (std::size_t i = n / 2; i < n; ++i) {
        r_min = std::min(r_min, witness[i].ratio);
        ratios_finite = ratios_finite && std::isfinite(witness[i].ratio);
    }
    double q_min = std::numeric_limits<double>::infinity();
    double q_max = 0.0;
    for (std::size_t i = n - n / 4; i < n; ++i) {
        q_min = std::min(q_min, witness[i].ratio);
        q_max = std::max(q_max, witness[i].ratio);
    }
    const bool plateau = ratios_finite && q_min > 0.0 && (q_max / q_min - 1.0) < 0.01;
    report.bounded_rule_fired = ratios_finite && r_min >= 1e-3 && plateau;

    // Decay-rate criterion: nondecreasing over the last half and growing tenfold from mid to end,
    // or identically infinite there (eventually-zero sequence under 1/0 = inf).
    bool nondecreasing = true;
    bool all_infinite = true;
    for (std::size_t i = n / 2; i < n; ++i) {
        all_infinite = all_infinite && std::isinf(witness[i].decay_rate);
        if (i > n / 2 && witness[i].decay_rate < witness[i - 1].decay_rate)
            nondecreasing = false;
    }
    const double s_mid = witness[n / 2].decay_rate;
    const double s_last = witness[n - 1].decay_rate;
    report.unbounded_rule_fired =
        all_infinite || (nondecreasing && s_mid > 0.0 && std::isfinite(s_mid) && s_last > 10.0 * s_mid);

    if (report.bounded_rule_fired && !report.unbounded_rule_fired) {
        report.result = verdict::bounded;
        report.rule = decay_rule::ratio_liminf_positive;
    } else if (report.unbounded_rule_fired && !report.bounded_rule_fired) {
        report.result = verdict::unbounded;
        report.rule = decay_rule::super_exponential_decay;
    }
    report.witness = std::move(witness);
    return report;
}

} // namespace detail

inline constexpr path_index default_inspect_range = 256;

inline classification_report classify(const decay_profile& profile, path_index inspect_range = default_inspect_range)
{
    if (inspect_range == 0)
        inspect_range = 1;
    auto witness = detail::trajectories(profile, inspect_range);

    auto symbolic = [&](verdict v, decay_rule r) {
        classification_report report;
        report.result = v;
        report.rule = r;
        report.bounded_rule_fired = v == verdict::bounded;
        report.unbounded_rule_fired = v == verdict::unbounded;
        report.witness = std::move(witness);
        return report;
    };

    struct visitor {
        decltype(symbolic)& decide;
        std::vector<witness_point>& witness;

        classification_report operator()(const geometric_ratio&) const
        {
            return decide(verdict::bounded, decay_rule::ratio_liminf_positive);
        }
        classification_report operator()(const polynomial_decay&) const
        {
            // ((l+1)/(l+2))^p -> 1
            return decide(verdict::bounded, decay_rule::ratio_liminf_positive);
        }
        classification_report operator()(const stretched_exp& k) const
        {
            // (1/l) l^kappa -> inf iff kappa > 1; otherwise the ratio tends to e^-1 (kappa = 1) or 1.
            if (k.kappa > 1.0)
                return decide(verdict::unbounded, decay_rule::super_exponential_decay);
            return decide(verdict::bounded, decay_rule::ratio_liminf_positive);
        }
        classification_report operator()(const double_exp&) const
        {
            return decide(verdict::unbounded, decay_rule::double_exponential_decay);
        }
        classification_report operator()(const finite_taps&) const
        {
            // eventually zero: (1/l) log(1/0) = inf
            return decide(verdict::unbounded, decay_rule::super_exponential_decay);
        }
        classification_report operator()(const tabulated&) const { return detail::classify_numeric(std::move(witness)); }
    };
    return std::visit(visitor{symbolic, witness}, profile.kind());
}

} // namespace mpcap
