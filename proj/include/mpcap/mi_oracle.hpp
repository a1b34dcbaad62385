#pragma once

// Mutual information of the scalar surrogate Y = H X + W with H ~ CN(0, alpha_h),
// W ~ CN(0, sigma_w^2), and a circularly-symmetric input.
//
// Given |X|^2 = s, Y is CN(0, alpha_h s + sigma_w^2), so
//   h(Y|X) = E_s log(pi e v(s))                       (closed form / quadrature)
//   p_Y(y) = E_s exp(-|y|^2 / v(s)) / (pi v(s))       (same quadrature)
//   h(Y)   = -E log p_Y(Y)                            (Monte Carlo)
// and I(X;Y) = h(Y) - h(Y|X). The input law enters only through |X|^2, which
// is represented as a finite set of weighted atoms.

#include "bounds.hpp"
#include "errors.hpp"
#include "quadrature.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <thread>
#include <variant>
#include <vector>

namespace mpcap {

/// |X|^2 = c with probability one.
struct constant_modulus {
    double power;
};

/// |X|^2 = c1 with probability q, c2 otherwise.
struct two_point {
    double power_1;
    double power_2;
    double q = 0.5;
};

using input_law = std::variant<log_uniform_slot, constant_modulus, two_point>;

struct mi_estimate {
    double value = 0.0;   ///< nats
    double std_err = 0.0; ///< Monte-Carlo standard error of the h(Y) term
    std::uint64_t n_samples = 0;
    double h_output = 0.0;      ///< h(Y) estimate
    double h_conditional = 0.0; ///< h(Y|X), deterministic
    std::size_t quadrature_nodes = 0;
};

struct mi_options {
    std::uint64_t n_samples = 1'000'000;
    std::uint64_t seed = 0;
    std::size_t partitions = 8; ///< independent substreams; result depends on (seed, partitions)
    bool random_input_phase = true;
    bool parallel = true;
};

/// Discrete representation of the law of |X|^2 used for h(Y|X) and p_Y.
struct power_atoms {
    std::vector<double> powers;
    std::vector<double> weights;
    std::size_t nodes = 0; ///< Gauss-Legendre nodes used (0 for discrete laws)
};

inline double conditional_entropy(const power_atoms& atoms, double alpha_h, double sigma_w_sq)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < atoms.powers.size(); ++i)
        acc += atoms.weights[i] *
               std::log(std::numbers::pi * std::numbers::e * (alpha_h * atoms.powers[i] + sigma_w_sq));
    return acc;
}

namespace detail {

inline power_atoms log_uniform_atoms(const log_uniform_slot& slot, std::size_t nodes)
{
    const uniform_average_rule rule(slot.log_lower(), slot.log_upper(), nodes);
    power_atoms atoms;
    atoms.nodes = nodes;
    atoms.weights = rule.weights;
    atoms.powers.reserve(nodes);
    for (double t : rule.points)
        atoms.powers.push_back(std::exp(t));
    return atoms;
}

} // namespace detail

/// Atoms for the law; log-uniform laws start at 64 Gauss-Legendre nodes and double
/// until h(Y|X) moves by less than 1e-8.
inline power_atoms make_power_atoms(const input_law& law, double alpha_h, double sigma_w_sq)
{
    struct visitor {
        double alpha_h;
        double sigma_w_sq;

        power_atoms operator()(const constant_modulus& c) const
        {
            if (!(c.power > 0.0))
                throw domain_error("constant-modulus law: power must be positive");
            return {{c.power}, {1.0}, 0};
        }
        power_atoms operator()(const two_point& t) const
        {
            if (!(t.power_1 > 0.0) || !(t.power_2 > 0.0) || !(t.q >= 0.0 && t.q <= 1.0))
                throw domain_error("two-point law: powers must be positive and q in [0, 1]");
            return {{t.power_1, t.power_2}, {t.q, 1.0 - t.q}, 0};
        }
        power_atoms operator()(const log_uniform_slot& slot) const
        {
            slot.validate();
            constexpr std::size_t max_nodes = 4096;
            auto coarse = detail::log_uniform_atoms(slot, 64);
            double h_coarse = conditional_entropy(coarse, alpha_h, sigma_w_sq);
            for (std::size_t n = 128; n <= max_nodes; n *= 2) {
                auto fine = detail::log_uniform_atoms(slot, n);
                const double h_fine = conditional_entropy(fine, alpha_h, sigma_w_sq);
                if (std::abs(h_fine - h_coarse) < 1e-8)
                    return coarse;
                coarse = std::move(fine);
                h_coarse = h_fine;
            }
            throw quadrature_error("log-uniform law: h(Y|X) quadrature did not settle");
        }
    };
    return std::visit(visitor{alpha_h, sigma_w_sq}, law);
}

/// Mixture density of Y, p_Y(y) = sum_i w_i exp(-|y|^2 / v_i) / (pi v_i), with the
/// per-atom constants precomputed.
class output_density {
public:
    output_density(const power_atoms& atoms, double alpha_h, double sigma_w_sq)
    {
        for (std::size_t i = 0; i < atoms.powers.size(); ++i) {
            if (atoms.weights[i] <= 0.0)
                continue;
            const double v = alpha_h * atoms.powers[i] + sigma_w_sq;
            offsets_.push_back(std::log(atoms.weights[i]) - std::log(std::numbers::pi * v));
            inv_var_.push_back(1.0 / v);
        }
    }

    /// -log p_Y(y) for |y|^2 = r, by log-sum-exp over the atoms.
    [[nodiscard]] double neg_log(double r) const
    {
        double max_term = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < offsets_.size(); ++i)
            max_term = std::max(max_term, offsets_[i] - r * inv_var_[i]);
        double acc = 0.0;
        for (std::size_t i = 0; i < offsets_.size(); ++i)
            acc += std::exp(offsets_[i] - r * inv_var_[i] - max_term);
        return -(max_term + std::log(acc));
    }

    [[nodiscard]] double density(double r) const { return std::exp(-neg_log(r)); }

private:
    std::vector<double> offsets_;
    std::vector<double> inv_var_;
};

namespace detail {

struct running_moments {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void push(double x)
    {
        ++count;
        const double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
    }

    void merge(const running_moments& o)
    {
        if (o.count == 0)
            return;
        const auto n = static_cast<double>(count + o.count);
        const double delta = o.mean - mean;
        mean += delta * static_cast<double>(o.count) / n;
        m2 += o.m2 + delta * delta * static_cast<double>(count) * static_cast<double>(o.count) / n;
        count += o.count;
    }
};

inline double draw_input_power(const input_law& law, rng& gen)
{
    struct visitor {
        rng& gen;
        double operator()(const constant_modulus& c) const { return c.power; }
        double operator()(const two_point& t) const { return gen.uniform() < t.q ? t.power_1 : t.power_2; }
        double operator()(const log_uniform_slot& s) const
        {
            return std::exp(s.log_lower() + gen.uniform() * s.width());
        }
    };
    return std::visit(visitor{gen}, law);
}

} // namespace detail

/// Monte-Carlo estimate of I(X; HX + W). Requires n_samples >= 1e4 and sigma_w_sq > 0.
inline mi_estimate estimate_mi(const input_law& law, double alpha_h, double sigma_w_sq, const mi_options& opts = {})
{
    if (!(alpha_h > 0.0) || !(sigma_w_sq > 0.0))
        throw domain_error("estimate_mi: need alpha_h > 0 and sigma_w_sq > 0");
    if (opts.n_samples < 10'000)
        throw domain_error("estimate_mi: at least 1e4 samples required");
    if (opts.partitions == 0)
        throw domain_error("estimate_mi: partition count must be positive");

    const power_atoms atoms = make_power_atoms(law, alpha_h, sigma_w_sq);
    const double h_cond = conditional_entropy(atoms, alpha_h, sigma_w_sq);
    const output_density density(atoms, alpha_h, sigma_w_sq);

    const std::size_t parts = opts.partitions;
    std::vector<detail::running_moments> moments(parts);
    auto run_part = [&](std::size_t part) {
        const std::uint64_t count =
            opts.n_samples / parts + (part < opts.n_samples % parts ? 1 : 0);
        rng gen(derive_seed(opts.seed, part));
        detail::running_moments acc;
        for (std::uint64_t i = 0; i < count; ++i) {
            const double s = detail::draw_input_power(law, gen);
            const std::complex<double> x =
                opts.random_input_phase ? std::sqrt(s) * gen.unit_phasor() : std::complex<double>{std::sqrt(s), 0.0};
            const std::complex<double> h = gen.complex_gaussian(alpha_h);
            const std::complex<double> w = gen.complex_gaussian(sigma_w_sq);
            const std::complex<double> y = h * x + w;
            acc.push(density.neg_log(std::norm(y)));
        }
        moments[part] = acc;
    };

    if (opts.parallel && parts > 1) {
        std::vector<std::jthread> workers;
        workers.reserve(parts);
        for (std::size_t p = 0; p < parts; ++p)
            workers.emplace_back(run_part, p);
    } else {
        for (std::size_t p = 0; p < parts; ++p)
            run_part(p);
    }

    detail::running_moments total;
    for (const auto& m : moments)
        total.merge(m);

    mi_estimate out;
    out.n_samples = total.count;
    out.h_output = total.mean;
    out.h_conditional = h_cond;
    out.value = total.mean - h_cond;
    out.std_err = std::sqrt(total.m2 / static_cast<double>(total.count - 1)) / std::sqrt(static_cast<double>(total.count));
    out.quadrature_nodes = atoms.nodes;
    return out;
}

} // namespace mpcap
