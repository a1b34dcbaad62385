#pragma once

#include "errors.hpp"

#include <cmath>
#include <cstddef>
#include <numbers>
#include <utility>
#include <vector>

namespace mpcap {

/// Gauss-Legendre rule on [-1, 1]; nodes by Newton iteration on P_n.
struct gauss_legendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit gauss_legendre(std::size_t n)
    {
        if (n == 0)
            throw quadrature_error("gauss_legendre: need at least one node");
        nodes.resize(n);
        weights.resize(n);
        const auto nd = static_cast<double>(n);
        // P_n(x) and P_n'(x) by the three-term recurrence
        auto legendre = [n, nd](double x) {
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const auto kd = static_cast<double>(k);
                const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
                p0 = p1;
                p1 = p2;
            }
            return std::pair{p1, nd * (x * p1 - p0) / (x * x - 1.0)};
        };
        for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
            double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
            for (int iter = 0; iter < 100; ++iter) {
                const auto [p, dp] = legendre(x);
                const double dx = p / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16)
                    break;
            }
            const double dp = legendre(x).second;
            const double w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if (n % 2 == 1)
            nodes[n / 2] = 0.0;
    }
};

/// Probability-weighted nodes for E[f(T)] with T ~ Uniform[a, b]: weights sum to 1.
struct uniform_average_rule {
    std::vector<double> points;
    std::vector<double> weights;

    uniform_average_rule(double a, double b, std::size_t n)
    {
        const gauss_legendre gl(n);
        points.resize(n);
        weights.resize(n);
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            points[i] = mid + half * gl.nodes[i];
            weights[i] = 0.5 * gl.weights[i];
            total += weights[i];
        }
        if (std::abs(total - 1.0) > 1e-10)
            throw quadrature_error("uniform_average_rule: weights do not integrate the constant 1");
    }

    template <class F>
    [[nodiscard]] double average(F&& f) const
    {
        double acc = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i)
            acc += weights[i] * f(points[i]);
        return acc;
    }
};

} // namespace mpcap
