#pragma once

// Small statistics helpers shared by the unit tests and the acceptance binary.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace mpcap::testing {

struct sample_stats {
    double mean = 0.0;
    double variance = 0.0; ///< unbiased
    std::size_t n = 0;

    [[nodiscard]] double std_err() const { return std::sqrt(variance / static_cast<double>(n)); }
};

template <class Range>
sample_stats summarize(const Range& values)
{
    sample_stats s;
    double m2 = 0.0;
    for (double x : values) {
        ++s.n;
        const double d = x - s.mean;
        s.mean += d / static_cast<double>(s.n);
        m2 += d * (x - s.mean);
    }
    s.variance = s.n > 1 ? m2 / static_cast<double>(s.n - 1) : 0.0;
    return s;
}

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
inline double ks_statistic(std::vector<double> a, std::vector<double> b)
{
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x)
            ++i;
        while (j < b.size() && b[j] <= x)
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

/// Asymptotic two-sample KS critical value at significance `alpha`.
inline double ks_critical(double alpha, std::size_t na, std::size_t nb)
{
    const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
    const double a = static_cast<double>(na);
    const double b = static_cast<double>(nb);
    return c * std::sqrt((a + b) / (a * b));
}

} // namespace mpcap::testing
