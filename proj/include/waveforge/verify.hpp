#pragma once
/**
 * @file verify.hpp
 * @brief Acceptance checks run by `waveforge verify` and the acceptance test.
 *
 * Each criterion compares a solver against a reference it shares no code with:
 * the Runge-Kutta mode integrator, closed-form solutions, finite-difference
 * residuals or literal nested quadrature.
 */

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "waveforge/config.hpp"
#include "waveforge/driver.hpp"
#include "waveforge/expr.hpp"
#include "waveforge/heat_solver.hpp"
#include "waveforge/ibvp.hpp"
#include "waveforge/kernels.hpp"
#include "waveforge/opcalc.hpp"
#include "waveforge/oracle.hpp"
#include "waveforge/quadrature.hpp"
#include "waveforge/wave_solver.hpp"

namespace waveforge::verify {

struct Check {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

struct Criterion {
    int id = 0;
    std::string title;
    std::vector<Check> checks;
    double seconds = 0.0;

    bool passed() const {
        for (const auto& c : checks) {
            if (!c.passed) return false;
        }
        return !checks.empty();
    }

    void add(std::string name, double measured, double tolerance) {
        checks.push_back({std::move(name), measured, tolerance, measured <= tolerance});
    }
};

namespace detail {

inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <class F>
Criterion timed(int id, std::string title, F&& body) {
    Criterion c;
    c.id = id;
    c.title = std::move(title);
    const auto start = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.checks.push_back({std::string("exception: ") + e.what(), 1.0, 0.0, false});
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return c;
}

struct PlaneMode {
    std::vector<double> k;
    double phase = 0.0;

    std::string text() const {
        std::string arg = num(phase);
        for (std::size_t i = 0; i < k.size(); ++i) arg += " + " + num(k[i]) + "*x" + std::to_string(i + 1);
        return "sin(" + arg + ")";
    }
};

inline PlaneMode random_mode(std::mt19937_64& rng, int n, double kmin, double kmax) {
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> mag(kmin, kmax), phase(0.0, 2.0 * std::numbers::pi);
    std::vector<double> dir(n);
    double norm = 0.0;
    do {
        norm = 0.0;
        for (double& d : dir) {
            d = normal(rng);
            norm += d * d;
        }
    } while (norm < 1e-6);
    const double k = mag(rng);
    for (double& d : dir) d *= k / std::sqrt(norm);
    return {dir, phase(rng)};
}

}  // namespace detail

/// 1. Wave solutions (m = 1, 2; n = 3) agree with the per-mode ODE oracle.
inline Criterion mode_equivalence(int sets = 10) {
    return detail::timed(1, "mode equivalence, m = 1, 2, n = 3", [&](Criterion& c) {
        std::mt19937_64 rng(0x5eed0001);
        std::uniform_real_distribution<double> unit(-1.0, 1.0), speed(0.5, 1.5), freq(0.5, 2.0), time(0.1, 1.5);
        std::uniform_int_distribution<int> count(1, 3);
        for (int m : {1, 2}) {
            double worst = 0.0;
            for (int set = 0; set < sets; ++set) {
                const double a = speed(rng);
                const int modes = count(rng);
                std::vector<detail::PlaneMode> shape;
                std::vector<std::vector<double>> amp(modes);
                std::vector<std::string> g(modes);
                std::vector<std::string> phi(2 * m);
                std::string f;
                for (int l = 0; l < modes; ++l) {
                    shape.push_back(detail::random_mode(rng, 3, 0.5, 2.0));
                    for (int r = 0; r < 2 * m; ++r) {
                        amp[l].push_back(unit(rng));
                        phi[r] += (phi[r].empty() ? "" : " + ") + detail::num(amp[l][r]) + "*" + shape[l].text();
                    }
                    g[l] = detail::num(unit(rng)) + "*cos(" + detail::num(freq(rng)) + "*t) + " +
                           detail::num(unit(rng)) + "*t";
                    f += (f.empty() ? "" : " + ") + ("(" + g[l] + ")*") + shape[l].text();
                }
                CauchyProblem p;
                p.kind = ProblemKind::WaveMultiple;
                p.dimension = 3;
                p.order = m;
                p.speeds = {a};
                p.source = parse(f, 3);
                for (const auto& s : phi) p.data.push_back(parse(s, 3));
                const SolutionEvaluator u = solve_multiple_wave(p);

                double err = 0.0, scale = 0.0;
                for (int pt = 0; pt < 5; ++pt) {
                    const double x[3] = {unit(rng), unit(rng), unit(rng)};
                    const double t = time(rng);
                    double ref = 0.0;
                    for (int l = 0; l < modes; ++l) {
                        ModeProblem mp;
                        mp.kind = ProblemKind::WaveMultiple;
                        mp.order = m;
                        mp.speeds = {a};
                        mp.wavevector = shape[l].k;
                        mp.phase = shape[l].phase;
                        mp.source = parse(g[l], 0);
                        mp.initial = amp[l];
                        ref += mode_solve(mp, t) * mp.shape(x);
                    }
                    err = std::max(err, std::fabs(u.evaluate(x, t) - ref));
                    scale = std::max(scale, std::fabs(ref));
                }
                worst = std::max(worst, err / scale);
            }
            c.add("m = " + std::to_string(m) + ": max relative error over " + std::to_string(sets) + " data sets",
                  worst, 1e-6);
        }
    });
}

/// 2. ∏(∂_t² - a_j²Δ)u = 0 with a = (1, 2) reproduces sin(x1)(cos t - cos 2t).
inline Criterion distinct_speeds() {
    return detail::timed(2, "distinct speeds a = (1, 2), n = 3", [](Criterion& c) {
        CauchyProblem p;
        p.kind = ProblemKind::WaveDistinctSpeeds;
        p.dimension = 3;
        p.order = 2;
        p.speeds = {1.0, 2.0};
        p.data = {parse("0", 3), parse("0", 3), parse("3*sin(x1)", 3), parse("0", 3)};
        const SolutionEvaluator u = solve_distinct_speeds(p);
        double err = 0.0;
        for (int i = 0; i <= 4; ++i) {
            for (int j = 0; j <= 4; ++j) {
                const double x[3] = {i / 4.0, 0.3, -0.7};
                const double t = j / 4.0;
                const double exact = std::sin(x[0]) * (std::cos(t) - std::cos(2.0 * t));
                err = std::max(err, std::fabs(u.evaluate(x, t) - exact));
            }
        }
        c.add("max abs error on [0,1]^2 (x1, t)", err, 1e-6);
    });
}

/// 3. The ℝ⁵ sinh kernel multiplies sin(k·x) by sin(a|k|t)/(a|k|).
inline Criterion sinh_kernel_n5() {
    return detail::timed(3, "sinh kernel symbol, n = 5", [](Criterion& c) {
        std::mt19937_64 rng(0x5eed0003);
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        double worst = 0.0;
        for (double kmag : {1.0, 2.0}) {
            auto mode = detail::random_mode(rng, 5, kmag, kmag);
            const Expr field = parse(mode.text(), 5);
            for (double a : {1.0, 0.7}) {
                for (double t : {0.25, 0.6, 1.0}) {
                    Point x{{unit(rng), unit(rng), unit(rng), unit(rng), unit(rng)}, std::nullopt};
                    const double symbol = std::sin(a * kmag * t) / (a * kmag);
                    double arg = mode.phase;
                    for (int i = 0; i < 5; ++i) arg += mode.k[i] * x.coords[i];
                    const double exact = symbol * std::sin(arg);
                    worst = std::max(worst, std::fabs(sinh_kernel_apply(field, a, t, x) - exact) / std::fabs(symbol));
                }
            }
        }
        c.add("max relative error, |k| in {1, 2}, t <= 1", worst, 1e-5);
    });
}

/// 4. Collapsed single integral equals the literal m-fold nesting.
inline Criterion iterated_integral() {
    return detail::timed(4, "iterated time integral identity", [](Criterion& c) {
        std::mt19937_64 rng(0x5eed0004);
        std::uniform_real_distribution<double> coef(-1.0, 1.0);
        double worst = 0.0;
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<double> poly(7);
            for (double& v : poly) v = coef(rng);
            auto g = [&](double tau) {
                double s = 0.0;
                for (int i = 6; i >= 0; --i) s = s * tau + poly[i];
                return s;
            };
            for (int m = 1; m <= 3; ++m) {
                for (double t : {0.5, 1.0, 2.0}) {
                    const double nested = nested_time_integral(g, m, t);
                    const double collapsed = iterated_time_integral(g, m, t);
                    worst = std::max(worst, std::fabs(nested - collapsed) / std::max(1.0, std::fabs(nested)));
                }
            }
        }
        c.add("max error, degree-6 polynomials, m <= 3", worst, 1e-11);
    });
}

/// 5. Partial-fraction weights satisfy the divided-difference identities and
///    reproduce 1/∏(s - a_j) at random s.
inline Criterion partial_fractions() {
    return detail::timed(5, "partial-fraction identities", [](Criterion& c) {
        std::mt19937_64 rng(0x5eed0005);
        std::uniform_real_distribution<double> speed(0.5, 3.0), probe(4.0, 6.0);
        double first = 0.0, second = 0.0, residue = 0.0;
        for (int m = 2; m <= 4; ++m) {
            for (int trial = 0; trial < 20; ++trial) {
                std::vector<double> a;
                while (static_cast<int>(a.size()) < m) {
                    const double v = speed(rng);
                    bool far = true;
                    for (double b : a) far = far && std::fabs(v - b) > 0.2;
                    if (far) a.push_back(v);
                }
                const auto w1 = first_order_weights(a);
                const auto w2 = second_order_weights(a);
                for (int p = 0; p <= m - 1; ++p) {
                    const double expect = p == m - 1 ? 1.0 : 0.0;
                    double s1 = 0.0, s2 = 0.0;
                    for (int j = 0; j < m; ++j) {
                        s1 += w1.weights[j] * std::pow(a[j], p - (m - 1));
                        s2 += w2.weights[j] * std::pow(a[j], 2 * (p - (m - 1)));
                    }
                    first = std::max(first, std::fabs(s1 - expect));
                    second = std::max(second, std::fabs(s2 - expect));
                }
                const double s = probe(rng);
                double direct = 1.0, split = 0.0;
                for (int j = 0; j < m; ++j) {
                    direct /= s - a[j];
                    split += w1.weights[j] / std::pow(a[j], m - 1) / (s - a[j]);
                }
                residue = std::max(residue, std::fabs(direct - split) / std::fabs(direct));
            }
        }
        c.add("first-order sums, m <= 4", first, 1e-10);
        c.add("second-order sums, m <= 4", second, 1e-10);
        c.add("1/prod(s - a_j) reconstruction (relative)", residue, 1e-10);
    });
}

/// 6. Gaussian heat flow, a manufactured m = 2 solution and the semigroup law.
inline Criterion heat_pipeline() {
    return detail::timed(6, "heat pipeline", [](Criterion& c) {
        std::mt19937_64 rng(0x5eed0006);
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        const double sigma = 0.5;
        double gauss = 0.0;
        for (int n = 1; n <= 3; ++n) {
            std::string r2;
            for (int i = 1; i <= n; ++i) r2 += (i > 1 ? " + " : "") + std::string("x") + std::to_string(i) + "^2";
            CauchyProblem p;
            p.kind = ProblemKind::HeatProduct;
            p.dimension = n;
            p.order = 1;
            p.data = {parse("exp(-(" + r2 + ")/(4*" + detail::num(sigma) + "))", n)};
            const SolutionEvaluator u = solve_heat_product(p);
            for (double t : {0.1, 0.5, 1.0}) {
                Point x;
                for (int i = 0; i < n; ++i) x.coords.push_back(unit(rng));
                gauss = std::max(gauss, std::fabs(u.evaluate(x.coords.data(), t) - heat_closed_form(sigma, t, x)));
            }
        }
        c.add("Gaussian vs closed form, n <= 3", gauss, 1e-8);

        CauchyProblem q;
        q.kind = ProblemKind::HeatProduct;
        q.dimension = 3;
        q.order = 2;
        q.data = {parse("sin(x1)", 3), parse("0", 3)};
        const SolutionEvaluator v = solve_heat_product(q);
        double manufactured = 0.0;
        for (double t : {0.0, 0.3, 1.0, 2.0}) {
            const double x[3] = {unit(rng), unit(rng), unit(rng)};
            const double exact = std::sin(x[0]) * (1.0 + t) * std::exp(-t);
            manufactured = std::max(manufactured, std::fabs(v.evaluate(x, t) - exact));
        }
        c.add("(1+t)e^-t sin(x1), m = 2", manufactured, 1e-6);

        const auto rule = waveforge::detail::heat_rule({});
        double semigroup = 0.0;
        for (int n = 1; n <= 2; ++n) {
            const Expr f = parse(n == 1 ? "exp(-x1^2/2)*cos(x1)" : "exp(-(x1^2 + x2^2)/2)*cos(x1 - x2)", n);
            for (int trial = 0; trial < 2; ++trial) {
                const double x[3] = {unit(rng), unit(rng), 0.0};
                const double l1 = 0.3, l2 = 0.5;
                const double twice = waveforge::detail::heat_apply_fn(
                    [&](const double* eta) { return waveforge::detail::heat_apply(f, eta, n, l1, 0.0, *rule); }, x, n,
                    l2, *rule);
                const double once = waveforge::detail::heat_apply(f, x, n, l1 + l2, 0.0, *rule);
                semigroup = std::max(semigroup, std::fabs(twice - once));
            }
        }
        c.add("semigroup e^{l2 D} e^{l1 D} = e^{(l1+l2) D}, n <= 2", semigroup, 1e-7);
    });
}

/// 7. Box problems: single modes, boundary trace, energy conservation.
inline Criterion ibvp_checks() {
    return detail::timed(7, "initial-boundary problems on boxes", [](Criterion& c) {
        const double pi = std::numbers::pi;
        double single = 0.0;
        auto run = [&](CauchyProblem p, std::vector<double> box, const std::function<double(const double*, double)>& exact) {
            const SolutionEvaluator u = solve_ibvp(p, build_basis(box, 8));
            for (double t : {0.0, 0.4, 1.3, 3.0}) {
                for (double s : {0.17, 0.5, 0.83}) {
                    double x[3];
                    for (std::size_t i = 0; i < box.size(); ++i) x[i] = box[i] * (i % 2 ? 1.0 - s : s);
                    single = std::max(single, std::fabs(u.evaluate(x, t) - exact(x, t)));
                }
            }
        };
        CauchyProblem w1;
        w1.dimension = 1;
        w1.data = {parse("sin(x1)", 1), parse("0", 1)};
        run(w1, {pi}, [](const double* x, double t) { return std::sin(x[0]) * std::cos(t); });
        CauchyProblem h1;
        h1.kind = ProblemKind::HeatProduct;
        h1.dimension = 1;
        h1.data = {parse("sin(x1)", 1)};
        run(h1, {pi}, [](const double* x, double t) { return std::sin(x[0]) * std::exp(-t); });
        CauchyProblem w2;
        w2.dimension = 2;
        w2.speeds = {0.8};
        w2.data = {parse("0", 2), parse("sin(pi*x1)*sin(2*pi*x2/3)", 2)};
        run(w2, {1.0, 3.0}, [pi](const double* x, double t) {
            const double om = 0.8 * pi * std::sqrt(1.0 + 4.0 / 9.0);
            return std::sin(pi * x[0]) * std::sin(2 * pi * x[1] / 3) * std::sin(om * t) / om;
        });
        CauchyProblem w3;  // (∂_t² - Δ)² u = 0 with u = t cos t sin x
        w3.dimension = 1;
        w3.order = 2;
        w3.data = {parse("0", 1), parse("sin(x1)", 1), parse("0", 1), parse("-3*sin(x1)", 1)};
        run(w3, {pi}, [](const double* x, double t) { return std::sin(x[0]) * t * std::cos(t); });
        CauchyProblem h3;  // (∂_t - Δ)(∂_t - 2Δ) u = 0 with u = (2e^{-t} - e^{-2t}) sin x
        h3.kind = ProblemKind::HeatProduct;
        h3.dimension = 1;
        h3.order = 2;
        h3.speeds = {1.0, 2.0};
        h3.data = {parse("sin(x1)", 1), parse("0", 1)};
        run(h3, {pi}, [](const double* x, double t) { return std::sin(x[0]) * (2 * std::exp(-t) - std::exp(-2 * t)); });
        c.add("single-mode problems, max abs error, t in [0, 3]", single, 1e-10);

        CauchyProblem b;
        b.dimension = 2;
        b.data = {parse("x1*(1 - x1)*x2*(2 - x2)*exp(x1)", 2), parse("sin(pi*x1)*x2*(2 - x2)", 2)};
        b.source = parse("x1*(1 - x1)*cos(t)", 2);
        const SolutionEvaluator ub = solve_ibvp(b, build_basis({1.0, 2.0}, 16));
        double trace = 0.0;
        for (double t : {0.5, 2.0}) {
            for (double s : {0.0, 0.3, 0.77, 1.0}) {
                const double faces[4][2] = {{0.0, 2.0 * s}, {1.0, 2.0 * s}, {s, 0.0}, {s, 2.0}};
                for (const auto& f : faces) trace = std::max(trace, std::fabs(ub.evaluate(f, t)));
            }
        }
        c.add("boundary trace, max |u| on faces", trace, 1e-12);

        CauchyProblem e;
        e.dimension = 1;
        e.speeds = {1.3};
        e.data = {parse("x1*(pi - x1)", 1), parse("sin(2*x1)*x1", 1)};
        const auto sol = build_ibvp(e, build_basis({pi}, 24));
        const double e0 = sol->energy(0.0);
        double drift = 0.0;
        for (int i = 1; i <= 30; ++i) drift = std::max(drift, std::fabs(sol->energy(0.1 * i) - e0) / e0);
        c.add("m = 1 wave modal energy drift over [0, 3] (relative)", drift, 1e-8);

        // Same energy from the evaluated field: ∫ u_t² + a²u_x² dx by Gauss-Legendre,
        // derivatives by 4th-order central differences.
        const SolutionEvaluator ue = solve_ibvp(e, build_basis({pi}, 24));
        const GaussRule g = gauss_legendre(200, 0.0, pi);
        const double h = 1e-3;
        auto field_energy = [&](double t) {
            return g.integrate([&](double x) {
                auto d = [&](auto&& f) { return (f(-2) - 8 * f(-1) + 8 * f(1) - f(2)) / (12 * h); };
                const double ut = d([&](int i) { return ue.evaluate(&x, t + i * h); });
                const double ux = d([&](int i) {
                    const double y = x + i * h;
                    return ue.evaluate(&y, t);
                });
                return ut * ut + 1.3 * 1.3 * ux * ux;
            });
        };
        const double f0 = field_energy(0.25);
        double field_drift = 0.0;
        for (int i = 1; i <= 11; ++i) field_drift = std::max(field_drift, std::fabs(field_energy(0.25 * i) - f0) / f0);
        c.add("m = 1 wave field energy drift over [0.25, 3] (relative)", field_drift, 1e-8);
    });
}

/// 8. Finite-difference residuals of solver output converge at 4th order.
inline Criterion residual_convergence() {
    return detail::timed(8, "residual convergence order", [](Criterion& c) {
        auto check = [&](const std::string& name, const CauchyProblem& p, const SolutionEvaluator& u,
                         std::vector<Point> pts, double h) {
            const ResidualReport r = residual_check(u, p, {std::move(pts), h, 3});
            c.add(name + ": |order - 4| (order " + detail::num(r.order) + ", finest residual " +
                      detail::num(r.max_residual) + ")",
                  std::isnan(r.order) ? 1e9 : std::fabs(r.order - 4.0), 0.5);
        };
        CauchyProblem w;
        w.dimension = 3;
        w.speeds = {0.9};
        w.data = {parse("sin(x1 + 0.5*x2)*cos(0.7*x3)", 3), parse("cos(0.8*x1 - x3)", 3)};
        w.source = parse("exp(-0.2*t)*sin(x2 - 0.4*x1)", 3);
        check("wave m = 1, n = 3", w, solve_multiple_wave(w), {Point{{0.2, -0.1, 0.4}, 1.0}}, 0.2);

        CauchyProblem h;
        h.kind = ProblemKind::HeatProduct;
        h.dimension = 2;
        h.data = {parse("exp(-(x1^2 + x2^2)/3)*cos(x1)", 2)};
        h.source = parse("sin(x1 - x2)*cos(t)", 2);
        check("heat m = 1, n = 2", h, solve_heat_product(h), {Point{{0.3, -0.2}, 1.0}}, 0.2);

        CauchyProblem b;
        b.dimension = 1;
        b.data = {parse("sin(x1) + 0.5*sin(3*x1)", 1), parse("0.3*sin(2*x1)", 1)};
        b.source = parse("sin(2*x1)*cos(t)", 1);
        check("box wave m = 1, d = 1", b, solve_ibvp(b, build_basis({std::numbers::pi}, 8)),
              {Point{{1.1}, 1.2}, Point{{2.0}, 1.5}}, 0.2);
    });
}

/// 9. Complex-shift closed forms, square wave and Poisson-kernel cross-check.
inline Criterion operator_calculus() {
    return detail::timed(9, "operator calculus", [](Criterion& c) {
        const double pi = std::numbers::pi;
        std::mt19937_64 rng(0x5eed0009);
        std::uniform_real_distribution<double> xs(-1.5, 1.5), hs(-0.8, 0.8), bs(0.3, 1.5);
        double tan_err = 0.0, cos_err = 0.0;
        for (int trial = 0; trial < 50; ++trial) {
            const double b = bs(rng), x = xs(rng), h = hs(rng);
            const Point p{{x}, std::nullopt};
            const double tan_v = complex_shift_cos(parse("tan(" + detail::num(b) + "*x1)", 1), {h}, p);
            const double tan_exact = std::sin(2 * b * x) / (std::cosh(2 * b * h) + std::cos(2 * b * x));
            tan_err = std::max(tan_err, std::fabs(tan_v - tan_exact));
            const double cos_v = complex_shift_cos(parse("cos(" + detail::num(b) + "*x1)", 1), {h}, p);
            cos_err = std::max(cos_err, std::fabs(cos_v - std::cosh(b * h) * std::cos(b * x)));
        }
        c.add("cos(h d/dx) tan(bx) closed form", tan_err, 1e-12);
        c.add("cos(h d/dx) cos(bx) = cosh(bh) cos(bx)", cos_err, 1e-12);

        const double l = 1.0;
        FourierSeriesSpec square;
        square.half_period = l;
        square.cosine_generator = parse("4/pi*atan(t)", 0);
        const double z = -1e-3;
        double wave_err = std::max(std::fabs(abel_poisson_sum(square, 0.0, z) - 1.0),
                                   std::fabs(abel_poisson_sum(square, l, z) + 1.0));
        for (int i = 0; i <= 400; ++i) {
            const double x = -l + 2.0 * l * i / 400;
            const double cv = std::cos(pi * x / l);
            if (std::fabs(cv) < 0.2) continue;
            wave_err = std::max(wave_err, std::fabs(abel_poisson_sum(square, x, z) - (cv > 0 ? 1.0 : -1.0)));
        }
        c.add("square wave at z = -1e-3 away from jumps", wave_err, 0.01);

        const std::size_t samples = 1 << 16;
        std::vector<double> f(samples);
        for (std::size_t j = 0; j < samples; ++j) {
            // Jumps at ±l/2 land on nodes j = N/4, 3N/4 and take the mean value 0.
            if (j == samples / 4 || j == 3 * samples / 4) continue;
            const double xi = -l + 2.0 * l * static_cast<double>(j) / samples;
            f[j] = std::cos(pi * xi / l) > 0 ? 1.0 : -1.0;
        }
        double cross = 0.0;
        for (double x : {-0.9, -0.7, -0.2, 0.0, 0.15, 0.35, 0.8, 1.0}) {
            cross = std::max(cross, std::fabs(poisson_kernel_sum(f, l, x, -0.05) - abel_poisson_sum(square, x, -0.05)));
        }
        c.add("Poisson kernel vs Abel-Poisson at z = -0.05", cross, 1e-6);
    });
}

/// 10. The f(x²) derivative expansion against symbolic differentiation.
inline Criterion square_identity() {
    return detail::timed(10, "f(x^2) derivative expansion", [](Criterion& c) {
        double worst = 0.0;
        for (const char* fn : {"sin", "exp", "atan", "cosh"}) {
            const Expr f = parse(std::string(fn) + "(x1)", 1);
            Expr composed = parse(std::string(fn) + "(x1^2)", 1);
            std::vector<Expr> fd{f};
            for (int i = 1; i <= 6; ++i) fd.push_back(differentiate(fd.back(), Var::x(1)));
            for (int k = 0; k <= 6; ++k) {
                for (double x : {-0.4, 0.3, 0.7, 1.1}) {
                    std::vector<double> derivs;
                    const double y = x * x;
                    for (int i = 0; i <= k; ++i) derivs.push_back(fd[i].evaluate(&y, 0.0));
                    const double expanded = square_derivative_expand(derivs, x, k);
                    const double direct = composed.evaluate(&x, 0.0);
                    worst = std::max(worst, std::fabs(expanded - direct) / std::max(1.0, std::fabs(direct)));
                }
                composed = differentiate(composed, Var::x(1));
            }
        }
        c.add("max relative error, k <= 6", worst, 1e-9);
    });
}

/// Small configurations used for determinism checks.
inline std::vector<std::string> determinism_configs() {
    return {
        "[problem]\nkind = wave-multiple\nn = 3\nm = 1\nspeeds = 1\n[data]\nf = sin(x1)*t\n"
        "phi0 = cos(x1 - x2)\nphi1 = 1\n[domain]\nx1 = -1, 1, 3\nx2 = 0, 0.5, 2\nx3 = 0, 0, 1\nt = 0, 1, 3\n",
        "[problem]\nkind = heat-product\nn = 1\nm = 2\nspeeds = 1, 2\n[data]\nphi0 = exp(-x1^2)\n"
        "[domain]\nx1 = -2, 2, 9\nt = 0, 1, 4\n",
        "[problem]\nkind = wave-multiple\nn = 2\nm = 2\nspeeds = 1\n[data]\nphi1 = x1*(1 - x1)*x2*(1 - x2)\n"
        "[domain]\ntype = box\nx1 = 0, 1, 5\nx2 = 0, 1, 5\nt = 0, 2, 3\nbox = 1, 1\nkmax = 6\n",
    };
}

/// 11. In-process determinism: repeated runs and thread counts give identical bytes.
inline Criterion determinism() {
    return detail::timed(11, "determinism", [](Criterion& c) {
        int mismatches = 0;
        for (const auto& text : determinism_configs()) {
            const ProblemConfig cfg = parse_config_text(text);
            const std::string first = solve_to_csv(cfg, 1);
            if (solve_to_csv(cfg, 1) != first) ++mismatches;
            if (solve_to_csv(cfg, 3) != first) ++mismatches;
        }
        c.add("byte mismatches across repeats and thread counts", mismatches, 0.0);
    });
}

inline std::vector<std::string> suite_names() { return {"modes", "heat", "ibvp", "residual", "opcalc", "determinism"}; }

/// Runs a named suite ("modes", "heat", "ibvp", "residual", "opcalc", "determinism", "all").
inline std::vector<Criterion> run_suite(const std::string& suite) {
    std::vector<Criterion> out;
    const bool all = suite == "all";
    if (all || suite == "modes") {
        out.push_back(mode_equivalence());
        out.push_back(distinct_speeds());
        out.push_back(sinh_kernel_n5());
        out.push_back(iterated_integral());
        out.push_back(partial_fractions());
    }
    if (all || suite == "heat") out.push_back(heat_pipeline());
    if (all || suite == "ibvp") out.push_back(ibvp_checks());
    if (all || suite == "residual") out.push_back(residual_convergence());
    if (all || suite == "opcalc") {
        out.push_back(operator_calculus());
        out.push_back(square_identity());
    }
    if (all || suite == "determinism") out.push_back(determinism());
    return out;
}

inline bool is_suite(const std::string& name) {
    if (name == "all") return true;
    for (const auto& s : suite_names()) {
        if (s == name) return true;
    }
    return false;
}

}  // namespace waveforge::verify
