#pragma once
/**
 * @file heat_solver.hpp
 * @brief Heat-type product equations (∂_t - aΔ)^m u = f and ∏_j (∂_t - a_jΔ) u = f
 *        on ℝⁿ, n ≤ 3, with e^{λΔ} realized as Gaussian convolution.
 *
 * e^{λΔ}f(x) = π^{-n/2} ∫ f(x + 2√λ s) e^{-|s|²} ds is evaluated by a tensor
 * Gauss-Legendre rule on [-c, c]ⁿ whose weights are renormalized to sum to 1;
 * the discarded Gaussian tail is below e^{-c²}.
 */

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <vector>

#include "waveforge/errors.hpp"
#include "waveforge/expr.hpp"
#include "waveforge/kernels.hpp"
#include "waveforge/problem.hpp"
#include "waveforge/quadrature.hpp"

namespace waveforge {

struct HeatPropagatorSpec {
    double truncation = 6.0;
    int nodes = 48;

    void validate() const {
        if (!(truncation >= 4.0)) throw InvalidOrder("heat truncation multiplier must be at least 4");
        if (nodes < 16) throw InvalidOrder("heat rule needs at least 16 nodes per axis");
    }
};

namespace detail {

struct HeatRule {
    std::vector<double> s;
    std::vector<double> w;
};

inline std::shared_ptr<const HeatRule> heat_rule(const HeatPropagatorSpec& spec) {
    static std::mutex mutex;
    static std::map<std::pair<double, int>, std::shared_ptr<const HeatRule>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{spec.truncation, spec.nodes}];
    if (!slot) {
        const GaussRule g = gauss_legendre(spec.nodes, -spec.truncation, spec.truncation);
        auto r = std::make_shared<HeatRule>();
        double total = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            r->s.push_back(g.nodes[i]);
            r->w.push_back(g.weights[i] * std::exp(-g.nodes[i] * g.nodes[i]));
            total += r->w.back();
        }
        for (double& w : r->w) w /= total;
        slot = std::move(r);
    }
    return slot;
}

/// e^{λΔ} applied to a callable field g(const double* η) at x, n ≤ 3.
template <class F>
double heat_apply_fn(F&& g, const double* x, int n, double lambda, const HeatRule& rule) {
    if (lambda < 0.0) throw NegativeDiffusionTime("diffusion time must be non-negative");
    if (lambda == 0.0) return g(x);
    const double scale = 2.0 * std::sqrt(lambda);
    const std::size_t q = rule.s.size();
    double eta[3] = {0.0, 0.0, 0.0};
    double sum = 0.0;
    if (n == 1) {
        for (std::size_t i = 0; i < q; ++i) {
            eta[0] = x[0] + scale * rule.s[i];
            sum += rule.w[i] * g(static_cast<const double*>(eta));
        }
    } else if (n == 2) {
        for (std::size_t i = 0; i < q; ++i) {
            eta[0] = x[0] + scale * rule.s[i];
            double inner = 0.0;
            for (std::size_t j = 0; j < q; ++j) {
                eta[1] = x[1] + scale * rule.s[j];
                inner += rule.w[j] * g(static_cast<const double*>(eta));
            }
            sum += rule.w[i] * inner;
        }
    } else {
        for (std::size_t i = 0; i < q; ++i) {
            eta[0] = x[0] + scale * rule.s[i];
            double mid = 0.0;
            for (std::size_t j = 0; j < q; ++j) {
                eta[1] = x[1] + scale * rule.s[j];
                double inner = 0.0;
                for (std::size_t k = 0; k < q; ++k) {
                    eta[2] = x[2] + scale * rule.s[k];
                    inner += rule.w[k] * g(static_cast<const double*>(eta));
                }
                mid += rule.w[j] * inner;
            }
            sum += rule.w[i] * mid;
        }
    }
    return sum;
}

/// e^{λΔ} field at x (field frozen at `time`), n ≤ 3.
inline double heat_apply(const Expr& field, const double* x, int n, double lambda, double time,
                         const HeatRule& rule) {
    return heat_apply_fn([&](const double* eta) { return field.evaluate(eta, time); }, x, n, lambda, rule);
}

inline void check_heat_dimension(int n) {
    if (n < 1 || n > 3) throw UnsupportedDimension("heat propagation supports n = 1, 2, 3");
}

}  // namespace detail

/// e^{λΔ} field at x. A time-dependent field is frozen at x.time (default 0).
inline double heat_propagate(const Expr& field, double lambda, const Point& x, const HeatPropagatorSpec& spec = {}) {
    spec.validate();
    const int n = static_cast<int>(x.coords.size());
    detail::check_heat_dimension(n);
    if (field.dimension() > n) throw DimensionError("field dimension exceeds point dimension");
    return detail::heat_apply(field, x.coords.data(), n, lambda, x.time.value_or(0.0), *detail::heat_rule(spec));
}

struct HeatSolveSpec {
    HeatPropagatorSpec propagator;
    int time_nodes = 32;
};

/// Solution of (∂_t - aΔ)^m u = f (one speed) or ∏_j (∂_t - a_jΔ) u = f (m distinct
/// speeds) with ∂_t^r u(x,0) = φ_r, r < m.
inline SolutionEvaluator solve_heat_product(const CauchyProblem& p, const HeatSolveSpec& spec = {}) {
    if (p.kind != ProblemKind::HeatProduct) throw InvalidOrder(std::string("problem kind is ") + kind_name(p.kind));
    detail::check_heat_dimension(p.dimension);
    p.validate();
    spec.propagator.validate();
    if (spec.time_nodes < 2) throw InvalidOrder("time quadrature needs at least 2 nodes");

    const int n = p.dimension, m = p.order, nt = spec.time_nodes;
    const auto rule = detail::heat_rule(spec.propagator);
    std::optional<Expr> source;
    if (p.source && !p.source->is_zero()) source = p.source->with_dimension(n);

    if (!p.heat_has_distinct_speeds()) {
        const double a = p.speeds[0];
        // D(x,t) = Σ_k t^k/k! Σ_{r≤k} (-1)^{k-r} C(k,r) (aΔ)^{k-r} φ_r
        std::vector<std::vector<Expr>> lap(m);  // lap[r][i] = Δ^i φ_r
        for (int r = 0; r < m; ++r) {
            lap[r].push_back(p.datum(r).with_dimension(n));
            for (int i = 1; i + r < m; ++i) lap[r].push_back(laplacian(lap[r].back()));
        }
        Expr data = Expr::constant(0.0, n);
        for (int k = 0; k < m; ++k) {
            Expr ek = Expr::constant(0.0, n);
            double binom = 1.0;  // C(k, r) for r = k, k-1, ...
            for (int r = k; r >= 0; --r) {
                const int i = k - r;
                ek = ek + ((i % 2 ? -1.0 : 1.0) * binom * std::pow(a, i)) * lap[r][i];
                binom = binom * r / (i + 1);
            }
            if (ek.is_zero()) continue;
            data = data + pow(Expr::time(n), Expr::constant(k)) * ((1.0 / factorial(k)) * ek);
        }
        return SolutionEvaluator(n, [n, m, a, nt, rule, data, source](const double* x, double t) {
            if (t < 0.0) throw NegativeDiffusionTime("solutions are evaluated for t >= 0");
            double u = data.is_zero() ? 0.0 : detail::heat_apply(data, x, n, a * t, t, *rule);
            if (source) {
                u += integrate_from_zero(
                    [&](double tau) {
                        return std::pow(t - tau, m - 1) / factorial(m - 1) *
                               detail::heat_apply(*source, x, n, a * (t - tau), tau, *rule);
                    },
                    t, nt);
            }
            return u;
        });
    }

    // Distinct speeds: G(t) = ∫₀ᵗ (t-τ)^{m-2}/(m-2)! Σ_j w_j e^{τ a_j Δ} dτ and
    // u = G * f + Σ_k b_k Δ^{m-k} Σ_{r<k} ∂_t^{k-1-r} G φ_r with Σ b_k χ^k = ∏(χ - a_j).
    const PartialFractionWeights w = first_order_weights(p.speeds);
    const std::vector<double> b = monic_product_coefficients(p.speeds);
    std::vector<Expr> fields(m, Expr::constant(0.0, n));
    for (int r = 0; r < m; ++r) {
        const Expr phi = p.datum(r).with_dimension(n);
        if (phi.is_zero()) continue;
        std::vector<Expr> powers{phi};
        for (int i = 1; i < m; ++i) powers.push_back(laplacian(powers.back()));
        for (int k = r + 1; k <= m; ++k) fields[k - 1 - r] = fields[k - 1 - r] + b[k] * powers[m - k];
    }
    const std::vector<double> speeds = p.speeds;
    const std::vector<double> weights = w.weights;
    return SolutionEvaluator(n, [=](const double* x, double t) {
        if (t < 0.0) throw NegativeDiffusionTime("solutions are evaluated for t >= 0");
        auto mix = [&](const Expr& psi, double s, double time) {
            double v = 0.0;
            for (std::size_t j = 0; j < speeds.size(); ++j) {
                v += weights[j] * detail::heat_apply(psi, x, n, speeds[j] * s, time, *rule);
            }
            return v;
        };
        double u = 0.0;
        for (int d = 0; d < m; ++d) {
            if (fields[d].is_zero()) continue;
            if (d == m - 1) {
                u += mix(fields[d], t, 0.0);
            } else {
                const int e = m - 2 - d;
                u += integrate_from_zero(
                    [&](double tau) { return std::pow(t - tau, e) / factorial(e) * mix(fields[d], tau, 0.0); }, t, nt);
            }
        }
        if (source) {
            u += integrate_from_zero(
                [&](double tau) {
                    const double span = t - tau;
                    return integrate_from_zero(
                        [&](double s) { return std::pow(span - s, m - 2) / factorial(m - 2) * mix(*source, s, tau); },
                        span, nt);
                },
                t, nt);
        }
        return u;
    });
}

}  // namespace waveforge
