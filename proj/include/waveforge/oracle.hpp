#pragma once
/**
 * @file oracle.hpp
 * @brief Independent references: per-mode ODE integration, finite-difference
 *        PDE residuals and closed-form heat solutions.
 *
 * Nothing here uses the solver kernels. The ODE integrator is Boost.Odeint's
 * controlled Runge-Kutta-Fehlberg 7(8); nested time integrals use Boost.Math's
 * fixed Gauss rules.
 */

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/numeric/odeint.hpp>

#include "waveforge/errors.hpp"
#include "waveforge/expr.hpp"
#include "waveforge/problem.hpp"

namespace waveforge {

/// y^{(N)} + Σ_{k<N} p_k y^{(k)} = g(t), integrated from t = 0 with y^{(k)}(0) = init[k].
/// Returns y at each requested time (any order, t ≥ 0).
inline std::vector<double> integrate_linear_ode(const std::vector<double>& coeffs, std::vector<double> init,
                                                const std::function<double(double)>& forcing,
                                                const std::vector<double>& times, double tol = 1e-11) {
    namespace odeint = boost::numeric::odeint;
    using State = std::vector<double>;
    const std::size_t order = coeffs.size();
    if (order == 0) throw InvalidOrder("ODE order must be positive");
    init.resize(order, 0.0);

    std::vector<double> sorted(times);
    for (double t : sorted) {
        if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidInterval("ODE output times must be finite and >= 0");
    }
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<double> grid{0.0};
    for (double t : sorted) {
        if (t > 0.0) grid.push_back(t);
    }

    std::map<double, double> values;
    values[0.0] = init[0];
    if (grid.size() > 1) {
        auto system = [&](const State& y, State& dy, double t) {
            double top = forcing ? forcing(t) : 0.0;
            for (std::size_t k = 0; k < order; ++k) top -= coeffs[k] * y[k];
            for (std::size_t k = 0; k + 1 < order; ++k) dy[k] = y[k + 1];
            dy[order - 1] = top;
        };
        State y = init;
        auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_fehlberg78<State>());
        try {
            odeint::integrate_times(stepper, system, y, grid.begin(), grid.end(), 1e-3,
                                    [&](const State& s, double t) { values[t] = s[0]; },
                                    odeint::max_step_checker(1000000));
        } catch (const Error&) {
            throw;
        } catch (const std::exception& e) {
            throw IntegratorFailure(std::string("mode integrator failed: ") + e.what());
        }
    }
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) out.push_back(values.at(t));
    return out;
}

/// Ascending coefficients of a product of polynomial factors.
inline std::vector<double> multiply_polynomials(const std::vector<std::vector<double>>& factors) {
    std::vector<double> c{1.0};
    for (const auto& f : factors) {
        std::vector<double> next(c.size() + f.size() - 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            for (std::size_t j = 0; j < f.size(); ++j) next[i + j] += c[i] * f[j];
        }
        c = std::move(next);
    }
    return c;
}

/// One real plane-wave mode sin(k·x + δ) of a Cauchy problem.
struct ModeProblem {
    ProblemKind kind = ProblemKind::WaveMultiple;
    int order = 1;
    std::vector<double> speeds{1.0};
    std::vector<double> wavevector;
    double phase = 0.0;
    std::optional<Expr> source;   // modal amplitude g(t), an expression in t only
    std::vector<double> initial;  // T^{(r)}(0); missing entries are zero

    double wavenumber_squared() const {
        double s = 0.0;
        for (double k : wavevector) s += k * k;
        return s;
    }

    double shape(const double* x) const {
        double arg = phase;
        for (std::size_t i = 0; i < wavevector.size(); ++i) arg += wavevector[i] * x[i];
        return std::sin(arg);
    }

    /// Monic characteristic coefficients p_0..p_{N-1} of the modal ODE.
    std::vector<double> characteristic() const {
        const double k2 = wavenumber_squared();
        const bool wave = kind != ProblemKind::HeatProduct;
        if (wave && !(k2 > 0.0)) throw InvalidInterval("wave modes need |k| > 0");
        std::vector<std::vector<double>> factors;
        for (int j = 0; j < order; ++j) {
            const double a = speeds.size() == 1 ? speeds[0] : speeds.at(j);
            if (wave) {
                factors.push_back({a * a * k2, 0.0, 1.0});
            } else {
                factors.push_back({a * k2, 1.0});
            }
        }
        std::vector<double> c = multiply_polynomials(factors);
        c.pop_back();
        return c;
    }
};

inline std::vector<double> mode_solve(const ModeProblem& mp, const std::vector<double>& times, double tol = 1e-11) {
    std::function<double(double)> g;
    if (mp.source) {
        const Expr src = *mp.source;
        g = [src](double t) { return src.evaluate(static_cast<const double*>(nullptr), t); };
    }
    return integrate_linear_ode(mp.characteristic(), mp.initial, g, times, tol);
}

/// Modal amplitude T(t) of the mode problem.
inline double mode_solve(const ModeProblem& mp, double t, double tol = 1e-11) {
    if (t < 0.0) throw InvalidInterval("mode_solve needs t >= 0");
    return mode_solve(mp, std::vector<double>{t}, tol).front();
}

/// (σ/(σ+t))^{n/2} exp(-|x|²/(4(σ+t))): heat flow of exp(-|x|²/(4σ)).
inline double heat_closed_form(double sigma, double t, const Point& x) {
    double r2 = 0.0;
    for (double v : x.coords) r2 += v * v;
    const double n = static_cast<double>(x.coords.size());
    return std::pow(sigma / (sigma + t), n / 2.0) * std::exp(-r2 / (4.0 * (sigma + t)));
}

/// (∫₀ᵗ · τdτ)^m g by literally nesting m one-dimensional Gauss integrals.
inline double nested_time_integral(const std::function<double(double)>& g, int m, double t) {
    if (m < 1) throw InvalidOrder("nesting depth must be at least 1");
    using Rule = boost::math::quadrature::gauss<double, 20>;
    std::function<double(double, int)> level = [&](double upper, int depth) -> double {
        if (upper == 0.0) return 0.0;
        return Rule::integrate(
            [&](double tau) { return (depth == 1 ? g(tau) : level(tau, depth - 1)) * tau; }, 0.0, upper);
    };
    return level(t, m);
}

// ---------------------------------------------------------------------------
// Finite-difference residuals

struct ResidualGrid {
    std::vector<Point> points;  // sample points (x, t), each with a time value
    double spacing = 0.2;       // coarsest step, shared by x and t
    int levels = 3;             // halvings: spacing, spacing/2, ...
};

struct ResidualReport {
    std::vector<double> spacings;
    std::vector<double> max_residuals;
    double max_residual = 0.0;  // at the finest level
    double order = std::nan("");
};

namespace detail {

using Stencil = std::map<std::vector<int>, double>;

inline Stencil compose(const Stencil& a, const Stencil& b) {
    Stencil out;
    for (const auto& [oa, ca] : a) {
        for (const auto& [ob, cb] : b) {
            std::vector<int> o(oa.size());
            for (std::size_t i = 0; i < o.size(); ++i) o[i] = oa[i] + ob[i];
            out[o] += ca * cb;
        }
    }
    return out;
}

// 4th-order central stencils on unit spacing along axis `axis` of `dims` axes.
inline Stencil axis_stencil(int dims, int axis, int derivative) {
    static const double first[5] = {1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12};
    static const double second[5] = {-1.0 / 12, 4.0 / 3, -5.0 / 2, 4.0 / 3, -1.0 / 12};
    const double* w = derivative == 1 ? first : second;
    Stencil s;
    for (int i = 0; i < 5; ++i) {
        if (w[i] == 0.0) continue;
        std::vector<int> o(dims, 0);
        o[axis] = i - 2;
        s[o] = w[i];
    }
    return s;
}

inline Stencil identity_stencil(int dims) { return Stencil{{std::vector<int>(dims, 0), 1.0}}; }

}  // namespace detail

/// Applies the problem's differential operator with composed 4th-order central
/// differences (same step in x and t) at each grid point and each refinement
/// level, and fits the convergence order of max |L u - f| by least squares.
inline ResidualReport residual_check(const SolutionEvaluator& u, const CauchyProblem& p, const ResidualGrid& grid) {
    const int n = p.dimension;
    const int dims = n + 1;
    // Operator as polynomial in (∂_t, Δ): map (i, j) -> coefficient of ∂_t^i Δ^j.
    std::map<std::pair<int, int>, double> poly{{{0, 0}, 1.0}};
    const bool wave = p.is_wave();
    for (int f = 0; f < p.order; ++f) {
        const double a = p.speeds.size() == 1 ? p.speeds[0] : p.speeds.at(f);
        const double c = wave ? a * a : a;
        const int ti = wave ? 2 : 1;
        std::map<std::pair<int, int>, double> next;
        for (const auto& [ij, v] : poly) {
            next[{ij.first + ti, ij.second}] += v;
            next[{ij.first, ij.second + 1}] -= c * v;
        }
        poly = std::move(next);
    }
    detail::Stencil laplace;
    for (int i = 0; i < n; ++i) {
        for (const auto& [o, c] : detail::axis_stencil(dims, i, 2)) laplace[o] += c;
    }
    struct Term {
        detail::Stencil stencil;
        int power;  // total derivative order
    };
    std::vector<Term> terms;
    for (const auto& [ij, v] : poly) {
        if (v == 0.0) continue;
        detail::Stencil s = detail::identity_stencil(dims);
        for (int k = 0; k < ij.first / 2; ++k) s = detail::compose(s, detail::axis_stencil(dims, n, 2));
        if (ij.first % 2) s = detail::compose(s, detail::axis_stencil(dims, n, 1));
        for (int k = 0; k < ij.second; ++k) s = detail::compose(s, laplace);
        for (auto& [o, c] : s) c *= v;
        terms.push_back({std::move(s), ij.first + 2 * ij.second});
    }

    ResidualReport report;
    std::vector<double> xs(n);
    for (int level = 0; level < grid.levels; ++level) {
        const double h = grid.spacing / std::pow(2.0, level);
        double worst = 0.0;
        for (const Point& pt : grid.points) {
            if (!pt.time || static_cast<int>(pt.coords.size()) != n) {
                throw DimensionError("residual grid points need n coordinates and a time");
            }
            double lu = 0.0;
            for (const Term& term : terms) {
                double acc = 0.0;
                for (const auto& [o, c] : term.stencil) {
                    for (int i = 0; i < n; ++i) xs[i] = pt.coords[i] + o[i] * h;
                    acc += c * u.evaluate(xs.data(), *pt.time + o[n] * h);
                }
                lu += acc / std::pow(h, term.power);
            }
            const double f = p.source ? p.source->evaluate(pt.coords.data(), *pt.time) : 0.0;
            worst = std::max(worst, std::fabs(lu - f));
        }
        report.spacings.push_back(h);
        report.max_residuals.push_back(worst);
    }
    report.max_residual = report.max_residuals.back();
    // Least-squares slope of log r against log h.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (std::size_t i = 0; i < report.spacings.size(); ++i) {
        if (!(report.max_residuals[i] > 0.0)) continue;
        const double lx = std::log(report.spacings[i]), ly = std::log(report.max_residuals[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++count;
    }
    if (count >= 2) report.order = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    return report;
}

}  // namespace waveforge
