#pragma once
/**
 * @file wave_solver.hpp
 * @brief Closed-form solution evaluators for (∂_t² - a²Δ)^m u = f and
 *        ∏_j (∂_t² - a_j²Δ) u = f on ℝ³ and ℝ⁵.
 *
 * Both solutions have the shape
 *
 *     u = G * f + Σ_d ∂_t^d G F_d,
 *
 * where G(t) = ∫₀ᵗ U(t,τ) K(τ) dτ is built from the sinh kernel K, F_d are
 * data combinations with symbolic Laplacian powers, and `*` is the Duhamel
 * convolution in time. In ℝ⁵ the kernel splits into a spherical part and a
 * pure polynomial part t^{2m-1}/(2m-1)!; the radial integrals are reordered
 * so that the inner weight is a polynomial integrated exactly.
 *
 * Time derivatives of the spherical part use 8th-order centered differences
 * with step 1e-2·max(t, 1). Integrals over (0, t) are taken on the signed
 * interval so the stencil may reach t < 0, where G continues analytically.
 */

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "waveforge/errors.hpp"
#include "waveforge/expr.hpp"
#include "waveforge/kernels.hpp"
#include "waveforge/problem.hpp"
#include "waveforge/quadrature.hpp"

namespace waveforge {

namespace detail {

/// Fornberg weights for the d-th derivative on the offsets -p..p (unit spacing).
inline std::vector<double> centered_weights(int d, int p) {
    const int count = 2 * p + 1;
    std::vector<std::vector<double>> c(count, std::vector<double>(d + 1, 0.0));
    std::vector<double> x(count);
    for (int i = 0; i < count; ++i) x[i] = i - p;
    double c1 = 1.0;
    double c4 = x[0];
    c[0][0] = 1.0;
    for (int i = 1; i < count; ++i) {
        const int mn = std::min(i, d);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i];
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(count);
    for (int i = 0; i < count; ++i) w[i] = c[i][d];
    return w;
}

/// Half-width giving 8th-order accuracy for a centered d-th derivative stencil.
inline int fd_half_width(int d) { return (d + 1) / 2 + 3; }

inline const std::vector<double>& cached_centered_weights(int d) {
    static std::mutex mutex;
    static std::map<int, std::vector<double>> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(d);
    if (it == cache.end()) it = cache.emplace(d, centered_weights(d, fd_half_width(d))).first;
    return it->second;
}

template <class F>
double time_derivative(F&& g, double t, int d) {
    if (d == 0) return g(t);
    const double h = 1e-2 * std::max(t, 1.0);
    const auto& w = cached_centered_weights(d);
    const int p = fd_half_width(d);
    double s = 0.0;
    for (int i = -p; i <= p; ++i) {
        if (w[i + p] != 0.0) s += w[i + p] * g(t + i * h);
    }
    return s / std::pow(h, d);
}

/// Spatial-kernel part of G(t) = ∫₀ᵗ U_j(t,τ) K_{a_j}(τ) dτ summed over speeds.
class WavePropagator {
public:
    WavePropagator(int n, int m, bool multiple, std::vector<double> speeds, std::vector<double> weights,
                   const QuadratureSpec& spec)
        : n_(n), m_(m), multiple_(multiple), speeds_(std::move(speeds)), weights_(std::move(weights)), spec_(spec),
          rule_(sphere_rule(n, spec.sphere_degree)) {
        norm_ = multiple_ ? double_factorial(2 * m - 2) * double_factorial(2 * m - 4) : factorial(2 * m - 3);
    }

    int order() const noexcept { return m_; }

    /// n = 3: pass ψ. n = 5: pass Δψ; the polynomial part is separate.
    double spherical(const Expr& field, const double* x, double t, double field_time) const {
        if (t == 0.0) return 0.0;
        const SphereRule& rule = *rule_;
        double total = 0.0;
        for (std::size_t j = 0; j < speeds_.size(); ++j) {
            const double a = speeds_[j];
            if (n_ == 3) {
                if (m_ == 1) return t * spherical_mean(field, x, a * t, rule, field_time);
                total += integrate_from_zero(
                    [&](double tau) { return weight(j, t, tau) * tau * spherical_mean(field, x, a * tau, rule, field_time); },
                    t, spec_.radial_nodes);
            } else {
                const double part = integrate_from_zero(
                    [&](double s) {
                        const double v = m_ == 1 ? t : inner(j, t, s);
                        return spherical_mean(field, x, a * s, rule, field_time) * s * v;
                    },
                    t, spec_.radial_nodes);
                total += a * a * part / 3.0;
            }
        }
        return total;
    }

    /// d-th derivative of t^{2m-1}/(2m-1)!, the ℝ⁵ polynomial part of G.
    double polynomial(int d, double t) const {
        const int e = 2 * m_ - 1 - d;
        if (e < 0) return 0.0;
        return std::pow(t, e) / factorial(e);
    }

private:
    // U_j(t, τ)
    double weight(std::size_t j, double t, double tau) const {
        if (multiple_) return std::pow(t * t - tau * tau, m_ - 2) * tau / norm_;
        return weights_[j] * std::pow(t - tau, 2 * m_ - 3) / norm_;
    }

    // ∫_σ^t U_j(t,τ) τ dτ, exact: the integrand is a polynomial of degree ≤ 2m-2.
    double inner(std::size_t j, double t, double sigma) const {
        const GaussRule& g = unit_gauss(m_ + 1);
        const double len = t - sigma;
        double s = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double tau = sigma + len * g.nodes[i];
            s += g.weights[i] * weight(j, t, tau) * tau;
        }
        return len * s;
    }

    int n_;
    int m_;
    bool multiple_;
    std::vector<double> speeds_;
    std::vector<double> weights_;
    QuadratureSpec spec_;
    std::shared_ptr<const SphereRule> rule_;
    double norm_ = 1.0;
};

struct WaveTerms {
    int n = 3;
    int m = 1;
    std::shared_ptr<WavePropagator> propagator;
    std::vector<Expr> fields;      // F_d, d = 0..2m-1
    std::vector<Expr> lap_fields;  // ΔF_d (n = 5 only)
    std::optional<Expr> source;
    std::optional<Expr> lap_source;
    int time_nodes = 32;

    double operator()(const double* x, double t) const {
        if (t < 0.0) throw InvalidInterval("solutions are evaluated for t >= 0");
        const WavePropagator& prop = *propagator;
        double u = 0.0;
        for (int d = 0; d < static_cast<int>(fields.size()); ++d) {
            if (fields[d].is_zero()) continue;
            const Expr& s = n == 3 ? fields[d] : lap_fields[d];
            u += time_derivative([&](double tt) { return prop.spherical(s, x, tt, 0.0); }, t, d);
            if (n == 5) u += fields[d].evaluate(x, 0.0) * prop.polynomial(d, t);
        }
        if (source) {
            const Expr& s = n == 3 ? *source : *lap_source;
            u += integrate_from_zero([&](double tau) { return prop.spherical(s, x, t - tau, tau); }, t, time_nodes);
            if (n == 5) {
                u += integrate_from_zero(
                    [&](double tau) { return prop.polynomial(0, t - tau) * source->evaluate(x, tau); }, t,
                    time_nodes);
            }
        }
        return u;
    }
};

inline void check_wave_problem(const CauchyProblem& p, ProblemKind expected, const QuadratureSpec& spec) {
    if (p.kind != expected) throw InvalidOrder(std::string("problem kind is ") + kind_name(p.kind));
    if (p.dimension != 3 && p.dimension != 5) {
        throw UnsupportedDimension("wave solvers support n = 3 and n = 5, got n = " + std::to_string(p.dimension));
    }
    p.validate();
    spec.validate();
}

inline SolutionEvaluator assemble_wave(const CauchyProblem& p, std::shared_ptr<WavePropagator> prop,
                                       std::vector<Expr> fields, const QuadratureSpec& spec) {
    WaveTerms terms;
    terms.n = p.dimension;
    terms.m = p.order;
    terms.propagator = std::move(prop);
    terms.time_nodes = spec.time_nodes;
    if (p.dimension == 5) {
        for (const Expr& f : fields) terms.lap_fields.push_back(f.is_zero() ? f : laplacian(f));
    }
    terms.fields = std::move(fields);
    if (p.source && !p.source->is_zero()) {
        terms.source = p.source->with_dimension(p.dimension);
        if (p.dimension == 5) terms.lap_source = laplacian(*terms.source);
    }
    return SolutionEvaluator(p.dimension, std::move(terms));
}

}  // namespace detail

/// Solution of (∂_t² - a²Δ)^m u = f with ∂_t^r u(x,0) = φ_r, r < 2m.
inline SolutionEvaluator solve_multiple_wave(const CauchyProblem& p, const QuadratureSpec& spec = {}) {
    detail::check_wave_problem(p, ProblemKind::WaveMultiple, spec);
    const int n = p.dimension, m = p.order;
    const double a2 = p.speeds[0] * p.speeds[0];

    // F_d = Σ (-1)^k C(m,k) (a²Δ)^k φ_r over 2m-1-2k-r = d.
    std::vector<Expr> fields(2 * m, Expr::constant(0.0, n));
    for (int r = 0; r < 2 * m; ++r) {
        Expr lap = p.datum(r).with_dimension(n);
        double binom = 1.0;
        for (int k = 0; k < m && 2 * m - 1 - 2 * k - r >= 0; ++k) {
            if (lap.is_zero()) break;
            const double coef = (k % 2 ? -1.0 : 1.0) * binom * std::pow(a2, k);
            Expr& slot = fields[2 * m - 1 - 2 * k - r];
            slot = slot + coef * lap;
            binom = binom * (m - k) / (k + 1);
            lap = laplacian(lap);
        }
    }
    auto prop = std::make_shared<detail::WavePropagator>(n, m, true, p.speeds, std::vector<double>{1.0}, spec);
    return detail::assemble_wave(p, std::move(prop), std::move(fields), spec);
}

/// Solution of ∏_j (∂_t² - a_j²Δ) u = f with ∂_t^r u(x,0) = φ_r, r < 2m.
inline SolutionEvaluator solve_distinct_speeds(const CauchyProblem& p, const QuadratureSpec& spec = {}) {
    detail::check_wave_problem(p, ProblemKind::WaveDistinctSpeeds, spec);
    const int n = p.dimension, m = p.order;
    const PartialFractionWeights w = second_order_weights(p.speeds);
    const std::vector<double> b = even_product_coefficients(p.speeds);

    // F_d = Σ b_{2k} Δ^{m-k} φ_r over 2k-1-r = d.
    std::vector<Expr> fields(2 * m, Expr::constant(0.0, n));
    for (int r = 0; r < 2 * m; ++r) {
        const Expr phi = p.datum(r).with_dimension(n);
        if (phi.is_zero()) continue;
        std::vector<Expr> powers{phi};
        for (int i = 1; i <= m; ++i) powers.push_back(laplacian(powers.back()));
        for (int k = 1; k <= m; ++k) {
            const int d = 2 * k - 1 - r;
            if (d < 0) continue;
            fields[d] = fields[d] + b[k] * powers[m - k];
        }
    }
    auto prop = std::make_shared<detail::WavePropagator>(n, m, false, p.speeds, w.weights, spec);
    return detail::assemble_wave(p, std::move(prop), std::move(fields), spec);
}

}  // namespace waveforge
