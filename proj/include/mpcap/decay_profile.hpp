#pragma once

// Path-gain variance profiles {alpha_l}: closed-form families plus tabulated
// data, with exact or rigorously-terminated tail sums.

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

namespace mpcap {

using path_index = std::uint64_t;

/// alpha_0..alpha_L, zero beyond the last tap.
struct finite_taps {
    std::vector<double> taps;
};

/// alpha_l = scale * rho^l.
struct geometric_ratio {
    double rho;
    double scale = 1.0;
};

/// alpha_l = exp(-l^kappa); alpha_0 = 1.
struct stretched_exp {
    double kappa;
};

/// alpha_l = exp(-exp(l^kappa)).
struct double_exp {
    double kappa;
};

/// alpha_l = (l+1)^(-p), p > 1.
struct polynomial_decay {
    double p;
};

struct zero_tail {};

/// Beyond the table, alpha_l = last * rho^(l - last_index).
struct geometric_tail {
    double rho;
};

struct tabulated {
    std::vector<double> values;
    std::variant<zero_tail, geometric_tail> tail = zero_tail{};
};

struct alpha_lookup {
    double value;
    bool extrapolated; ///< true when a tabulated profile was read past its table
};

namespace detail {

inline constexpr double sum_rel_tol = 1e-12;
inline constexpr std::uint64_t sum_budget = 1'000'000;

// sum_{m >= a} m^(-p) for a >= 1, p > 1, via direct terms up to a cutoff M and
// the Euler-Maclaurin remainder from M on.
inline double hurwitz_zeta_tail(double p, std::uint64_t a)
{
    const auto cutoff = std::max<std::uint64_t>(a, static_cast<std::uint64_t>(std::ceil(4.0 * p)) + 16);
    double direct = 0.0;
    for (std::uint64_t m = cutoff; m-- > a;)
        direct += std::pow(static_cast<double>(m), -p);
    const double big_m = static_cast<double>(cutoff);
    const double base = std::pow(big_m, -p);
    const double m_inv = 1.0 / big_m;
    double em = big_m * base / (p - 1.0) + 0.5 * base;
    em += base * m_inv * p / 12.0;
    em -= base * std::pow(m_inv, 3) * p * (p + 1) * (p + 2) / 720.0;
    em += base * std::pow(m_inv, 5) * p * (p + 1) * (p + 2) * (p + 3) * (p + 4) / 30240.0;
    return direct + em;
}

// Upper bound on integral_N^inf exp(-x^kappa) dx = Gamma(1/kappa, N^kappa)/kappa.
inline double stretched_exp_remainder_bound(double kappa, double n)
{
    const double x = std::pow(n, kappa);
    const double a = 1.0 / kappa;
    double log_bound;
    if (a <= 1.0) {
        log_bound = (a - 1.0) * std::log(x) - x;
    } else if (x > a - 1.0) {
        log_bound = a * std::log(x) - x - std::log(x - a + 1.0);
    } else {
        return std::numeric_limits<double>::infinity();
    }
    return std::exp(log_bound - std::log(kappa));
}

inline bool negligible(double remainder, double acc)
{
    return remainder <= sum_rel_tol * acc || remainder < std::numeric_limits<double>::min();
}

} // namespace detail

class decay_profile {
public:
    using kind_type =
        std::variant<finite_taps, geometric_ratio, stretched_exp, double_exp, polynomial_decay, tabulated>;

    /// Validates the parameters and the summability of the sequence.
    /// Throws domain_error for invalid parameters, non_summable_error for divergent sums.
    explicit decay_profile(kind_type kind) : kind_(std::move(kind))
    {
        validate();
        total_ = sum_from(0);
        if (!std::isfinite(total_))
            throw non_summable_error("decay profile: sum of variances is not finite");
    }

    [[nodiscard]] const kind_type& kind() const noexcept { return kind_; }

    [[nodiscard]] double alpha_0() const { return alpha_at(0); }

    /// alpha = sum over all paths.
    [[nodiscard]] double total_alpha() const noexcept { return total_; }

    [[nodiscard]] alpha_lookup lookup(path_index l) const
    {
        return std::visit([l](const auto& k) { return lookup_impl(k, l); }, kind_);
    }

    [[nodiscard]] double alpha_at(path_index l) const { return lookup(l).value; }

    /// sum_{l = L+1}^inf alpha_l.
    /// Throws non_summable_error if the partial sums fail to settle within the iteration budget.
    [[nodiscard]] double tail_sum(path_index guard) const
    {
        if (guard == std::numeric_limits<path_index>::max())
            return 0.0;
        return sum_from(guard + 1);
    }

    /// sum_{l=0}^{L} alpha_l, summed directly.
    [[nodiscard]] double head_sum(path_index guard) const
    {
        double acc = 0.0;
        for (path_index l = 0; l <= guard; ++l)
            acc += alpha_at(l);
        return acc;
    }

    [[nodiscard]] std::string describe() const;

    /// Smallest L with pred(tail_sum(L)) true, for a predicate that is monotone in the
    /// (nonincreasing) tail. Doubling then bisection; same answer as a scan from L = 0.
    template <class Pred>
    [[nodiscard]] path_index first_guard_where(Pred pred) const;

private:
    void validate() const;
    [[nodiscard]] double sum_from(path_index first) const;

    static alpha_lookup lookup_impl(const finite_taps& k, path_index l)
    {
        return {l < k.taps.size() ? k.taps[l] : 0.0, false};
    }
    static alpha_lookup lookup_impl(const geometric_ratio& k, path_index l)
    {
        return {k.scale * std::pow(k.rho, static_cast<double>(l)), false};
    }
    static alpha_lookup lookup_impl(const stretched_exp& k, path_index l)
    {
        return {std::exp(-std::pow(static_cast<double>(l), k.kappa)), false};
    }
    static alpha_lookup lookup_impl(const double_exp& k, path_index l)
    {
        return {std::exp(-std::exp(std::pow(static_cast<double>(l), k.kappa))), false};
    }
    static alpha_lookup lookup_impl(const polynomial_decay& k, path_index l)
    {
        return {std::pow(static_cast<double>(l) + 1.0, -k.p), false};
    }
    static alpha_lookup lookup_impl(const tabulated& k, path_index l)
    {
        if (l < k.values.size())
            return {k.values[l], false};
        if (const auto* g = std::get_if<geometric_tail>(&k.tail)) {
            const auto steps = static_cast<double>(l - (k.values.size() - 1));
            return {k.values.back() * std::pow(g->rho, steps), true};
        }
        return {0.0, true};
    }

    kind_type kind_;
    double total_ = 0.0;
};

inline void decay_profile::validate() const
{
    auto check_values = [](const std::vector<double>& v, const char* what) {
        if (v.empty())
            throw domain_error(std::string(what) + ": at least one value required");
        for (double a : v)
            if (!std::isfinite(a) || a < 0.0)
                throw domain_error(std::string(what) + ": variances must be finite and nonnegative");
        if (!(v.front() > 0.0))
            throw domain_error(std::string(what) + ": alpha_0 must be positive");
    };
    auto check_rho = [](double rho, const char* what) {
        if (!(rho > 0.0 && rho < 1.0))
            throw domain_error(std::string(what) + ": ratio must lie in (0, 1)");
    };

    struct visitor {
        decltype(check_values)& values;
        decltype(check_rho)& rho;
        void operator()(const finite_taps& k) const { values(k.taps, "finite taps"); }
        void operator()(const geometric_ratio& k) const
        {
            rho(k.rho, "geometric profile");
            if (!(k.scale > 0.0) || !std::isfinite(k.scale))
                throw domain_error("geometric profile: scale must be positive");
        }
        void operator()(const stretched_exp& k) const
        {
            if (!(k.kappa > 0.0) || !std::isfinite(k.kappa))
                throw domain_error("stretched-exponential profile: kappa must be positive");
        }
        void operator()(const double_exp& k) const
        {
            if (!(k.kappa > 0.0) || !std::isfinite(k.kappa))
                throw domain_error("double-exponential profile: kappa must be positive");
        }
        void operator()(const polynomial_decay& k) const
        {
            if (!std::isfinite(k.p))
                throw domain_error("polynomial profile: exponent must be finite");
            if (!(k.p > 1.0))
                throw non_summable_error("polynomial profile: (l+1)^(-p) is not summable for p <= 1");
        }
        void operator()(const tabulated& k) const
        {
            values(k.values, "tabulated profile");
            if (const auto* g = std::get_if<geometric_tail>(&k.tail))
                rho(g->rho, "tabulated geometric tail");
        }
    };
    std::visit(visitor{check_values, check_rho}, kind_);
}

inline double decay_profile::sum_from(path_index first) const
{
    struct visitor {
        path_index first;

        double operator()(const finite_taps& k) const
        {
            if (first >= k.taps.size())
                return 0.0;
            return std::accumulate(k.taps.begin() + static_cast<std::ptrdiff_t>(first), k.taps.end(), 0.0);
        }

        double operator()(const geometric_ratio& k) const
        {
            // Written as rho^(first-1) * rho/(1-rho) so that tail_sum(L) evaluates the same
            // expression as the closed-form guard condition rho^L * rho/(1-rho).
            return k.scale * (std::pow(k.rho, static_cast<double>(first) - 1.0) * k.rho / (1.0 - k.rho));
        }

        double operator()(const stretched_exp& k) const
        {
            double acc = 0.0;
            for (std::uint64_t i = 0; i < detail::sum_budget; ++i) {
                const double l = static_cast<double>(first + i);
                const double term = std::exp(-std::pow(l, k.kappa));
                acc += term;
                if (detail::negligible(term, acc) &&
                    detail::negligible(detail::stretched_exp_remainder_bound(k.kappa, l), acc))
                    return acc;
            }
            throw non_summable_error("stretched-exponential profile: partial sums did not converge");
        }

        double operator()(const double_exp& k) const
        {
            double acc = 0.0;
            double prev_term = 0.0;
            double prev_ratio = std::numeric_limits<double>::infinity();
            for (std::uint64_t i = 0; i < detail::sum_budget; ++i) {
                const double l = static_cast<double>(first + i);
                const double term = std::exp(-std::exp(std::pow(l, k.kappa)));
                acc += term;
                if (term == 0.0)
                    return acc;
                if (i > 0) {
                    const double ratio = term / prev_term;
                    if (ratio < 1.0 && ratio <= prev_ratio && detail::negligible(term, acc) &&
                        detail::negligible(term * ratio / (1.0 - ratio), acc))
                        return acc;
                    prev_ratio = ratio;
                }
                prev_term = term;
            }
            throw non_summable_error("double-exponential profile: partial sums did not converge");
        }

        double operator()(const polynomial_decay& k) const { return detail::hurwitz_zeta_tail(k.p, first + 1); }

        double operator()(const tabulated& k) const
        {
            const path_index size = k.values.size();
            double head = 0.0;
            for (path_index l = first; l < size; ++l)
                head += k.values[l];
            if (std::holds_alternative<zero_tail>(k.tail))
                return head;
            const double rho = std::get<geometric_tail>(k.tail).rho;
            const path_index start = std::max(first, size);
            const double steps = static_cast<double>(start - (size - 1));
            return head + k.values.back() * std::pow(rho, steps) / (1.0 - rho);
        }
    };
    return std::visit(visitor{first}, kind_);
}

template <class Pred>
path_index decay_profile::first_guard_where(Pred pred) const
{
    if (pred(tail_sum(0)))
        return 0;
    path_index bad = 0;
    path_index good = 1;
    while (!pred(tail_sum(good))) {
        bad = good;
        if (good > (path_index{1} << 62))
            throw non_summable_error("decay profile: tail never falls below the requested level");
        good *= 2;
    }
    while (good - bad > 1) {
        const path_index mid = bad + (good - bad) / 2;
        if (pred(tail_sum(mid)))
            good = mid;
        else
            bad = mid;
    }
    return good;
}

inline std::string decay_profile::describe() const
{
    struct visitor {
        std::string operator()(const finite_taps& k) const
        {
            return "finite taps (" + std::to_string(k.taps.size()) + ")";
        }
        std::string operator()(const geometric_ratio& k) const
        {
            return "geometric rho=" + std::to_string(k.rho) + " scale=" + std::to_string(k.scale);
        }
        std::string operator()(const stretched_exp& k) const
        {
            return "stretched exponential kappa=" + std::to_string(k.kappa);
        }
        std::string operator()(const double_exp& k) const
        {
            return "double exponential kappa=" + std::to_string(k.kappa);
        }
        std::string operator()(const polynomial_decay& k) const { return "polynomial p=" + std::to_string(k.p); }
        std::string operator()(const tabulated& k) const
        {
            return "tabulated (" + std::to_string(k.values.size()) + ")" +
                   (std::holds_alternative<zero_tail>(k.tail) ? " zero tail" : " geometric tail");
        }
    };
    return std::visit(visitor{}, kind_);
}

} // namespace mpcap
