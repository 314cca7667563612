#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "waveforge/heat_solver.hpp"
#include "waveforge/oracle.hpp"

using namespace waveforge;

namespace {

CauchyProblem heat(int n, std::vector<double> speeds, int m, std::vector<std::string> data, std::string source = "") {
    CauchyProblem p;
    p.kind = ProblemKind::HeatProduct;
    p.dimension = n;
    p.order = m;
    p.speeds = std::move(speeds);
    for (const auto& d : data) p.data.push_back(parse(d, n));
    if (!source.empty()) p.source = parse(source, n);
    return p;
}

}  // namespace

TEST(Heat, PropagatesPolynomialsExactly) {
    // e^{λΔ}(x1² + x2²) = x1² + x2² + 4λ, e^{λΔ} x1⁴ = x1⁴ + 12λx1² + 12λ².
    const Point x{{0.3, -0.7}, std::nullopt};
    EXPECT_NEAR(heat_propagate(parse("x1^2 + x2^2", 2), 0.4, x), 0.09 + 0.49 + 1.6, 1e-13);
    EXPECT_NEAR(heat_propagate(parse("x1^4", 1), 0.25, Point{{0.5}, std::nullopt}), 0.0625 + 0.75 + 0.75, 1e-13);
    EXPECT_NEAR(heat_propagate(parse("x1", 1), 0.0, Point{{0.5}, std::nullopt}), 0.5, 0.0);
}

TEST(Heat, PlaneWavesDecayBySymbol) {
    const Expr f = parse("cos(0.8*x1 - 1.2*x2 + 0.5*x3)", 3);
    const double k2 = 0.64 + 1.44 + 0.25;
    for (double lambda : {0.1, 0.5, 1.0}) {
        const Point x{{0.2, 0.1, -0.4}, std::nullopt};
        EXPECT_NEAR(heat_propagate(f, lambda, x), std::exp(-k2 * lambda) * eval_real(f, Point{x.coords, 0.0}), 1e-12);
    }
}

TEST(Heat, Errors) {
    EXPECT_THROW(heat_propagate(parse("x1", 1), -0.1, Point{{0.0}, std::nullopt}), NegativeDiffusionTime);
    EXPECT_THROW(heat_propagate(parse("x1", 4), 0.1, Point{{0, 0, 0, 0}, std::nullopt}), UnsupportedDimension);
    HeatPropagatorSpec bad;
    bad.nodes = 4;
    EXPECT_THROW(heat_propagate(parse("x1", 1), 0.1, Point{{0.0}, std::nullopt}, bad), InvalidOrder);
    const auto u = solve_heat_product(heat(1, {1.0}, 1, {"x1"}));
    EXPECT_THROW(u(Point{{0.0}, -1.0}), NegativeDiffusionTime);
    EXPECT_THROW(solve_heat_product(heat(1, {1.0, 1.0}, 2, {"x1"})), DegenerateSpeeds);
    EXPECT_THROW(solve_heat_product(heat(1, {1.0}, 1, {"x1", "1"})), DataCountMismatch);
}

TEST(Heat, GaussianMatchesClosedForm) {
    for (int n = 1; n <= 3; ++n) {
        std::string r2 = "x1^2";
        for (int i = 2; i <= n; ++i) r2 += " + x" + std::to_string(i) + "^2";
        const auto u = solve_heat_product(heat(n, {1.0}, 1, {"exp(-(" + r2 + ")/2)"}));
        Point x{std::vector<double>(n, 0.35), std::nullopt};
        for (double t : {0.05, 0.4, 1.0}) {
            EXPECT_NEAR(u(std::span<const double>(x.coords), t), heat_closed_form(0.5, t, x), 1e-8) << n;
        }
    }
}

TEST(Heat, WideKernelsNeedMoreNodes) {
    // At λ = 4σ the Gaussian datum is narrow in the kernel variable; the default
    // 48 nodes lose digits, 96 recover them.
    const auto p = heat(1, {1.0}, 1, {"exp(-x1^2/2)"});
    const Point x{{0.35}, std::nullopt};
    const double exact = heat_closed_form(0.5, 2.0, x);
    HeatSolveSpec fine;
    fine.propagator.nodes = 96;
    const double coarse_err = std::fabs(solve_heat_product(p).evaluate(x.coords.data(), 2.0) - exact);
    const double fine_err = std::fabs(solve_heat_product(p, fine).evaluate(x.coords.data(), 2.0) - exact);
    EXPECT_GT(coarse_err, 1e-9);
    EXPECT_LT(fine_err, 1e-12);
}

TEST(HeatProperty, MaximumPrinciple) {
    std::mt19937_64 rng(0x5003);
    std::uniform_real_distribution<double> u(-2.0, 2.0), l(0.0, 2.0);
    const Expr f = parse("atan(3*x1) + 0.5*cos(x2)*sin(5*x1)/(1 + x1^2)", 2);
    for (int trial = 0; trial < 20; ++trial) {
        const Point x{{u(rng), u(rng)}, std::nullopt};
        const double v = heat_propagate(f, l(rng), x);
        EXPECT_LE(v, M_PI / 2 + 0.5);
        EXPECT_GE(v, -M_PI / 2 - 0.5);
    }
    EXPECT_NEAR(heat_propagate(parse("1", 1), 3.0, Point{{0.2}, std::nullopt}), 1.0, 1e-15);
    EXPECT_NEAR(heat_propagate(parse("x1", 1), 3.0, Point{{0.2}, std::nullopt}), 0.2, 1e-14);
}

TEST(HeatProperty, MatchesModeOracle) {
    // Random trigonometric data and sources in n = 1, 2 against the modal ODE.
    std::mt19937_64 rng(0x5001);
    std::uniform_real_distribution<double> u(-1.0, 1.0), kk(0.3, 1.5), sp(0.5, 1.5);
    for (int trial = 0; trial < 8; ++trial) {
        const int n = 1 + trial % 2;
        const int m = 1 + (trial / 2) % 3;
        const bool distinct = m >= 2 && trial % 3 == 0;
        std::vector<double> speeds{sp(rng)};
        if (distinct) {
            for (int j = 1; j < m; ++j) speeds.push_back(speeds[0] + 0.4 * j);
        }
        ModeProblem mp;
        mp.kind = ProblemKind::HeatProduct;
        mp.order = m;
        mp.speeds = speeds;
        for (int i = 0; i < n; ++i) mp.wavevector.push_back(kk(rng));
        mp.phase = u(rng);
        char buf[200];
        std::string shape;
        std::snprintf(buf, sizeof buf, "sin(%.17g + %.17g*x1%s", mp.phase, mp.wavevector[0], n == 2 ? "" : ")");
        shape = buf;
        if (n == 2) {
            std::snprintf(buf, sizeof buf, " + %.17g*x2)", mp.wavevector[1]);
            shape += buf;
        }
        std::vector<std::string> data;
        for (int r = 0; r < m; ++r) {
            mp.initial.push_back(u(rng));
            std::snprintf(buf, sizeof buf, "%.17g*", mp.initial.back());
            data.push_back(buf + shape);
        }
        const bool src = distinct ? n == 1 : true;
        std::string source;
        if (src) {
            std::snprintf(buf, sizeof buf, "(%.17g*cos(t) + 0.5)", u(rng));
            mp.source = parse(buf, 0);
            source = std::string(buf) + "*" + shape;
        }
        CauchyProblem p = heat(n, speeds, m, data, source);
        if (!distinct) p.speeds = {speeds[0]};
        const auto sol = solve_heat_product(p);
        if (!distinct) mp.speeds = {speeds[0]};
        const double x[2] = {u(rng), u(rng)};
        for (double t : {0.3, 1.1}) {
            const double ref = mode_solve(mp, t) * mp.shape(x);
            EXPECT_NEAR(sol.evaluate(x, t), ref, 1e-8) << "n = " << n << " m = " << m << " distinct = " << distinct;
        }
    }
}

TEST(HeatProperty, InitialValueAndTimeDerivative) {
    const auto p = heat(2, {0.7}, 2, {"exp(-x1^2)*cos(x2)", "sin(x1)*exp(-x2^2)"});
    const auto u = solve_heat_product(p);
    const double x[2] = {0.3, -0.2};
    EXPECT_NEAR(u.evaluate(x, 0.0), p.data[0].evaluate(x, 0.0), 1e-14);
    const double h = 1e-3;
    const double d1 = (-25 * u.evaluate(x, 0) + 48 * u.evaluate(x, h) - 36 * u.evaluate(x, 2 * h) +
                       16 * u.evaluate(x, 3 * h) - 3 * u.evaluate(x, 4 * h)) /
                      (12 * h);
    EXPECT_NEAR(d1, p.data[1].evaluate(x, 0.0), 1e-7);
}

TEST(HeatProperty, Semigroup) {
    std::mt19937_64 rng(0x5002);
    std::uniform_real_distribution<double> u(-1.0, 1.0), l(0.05, 0.4);
    const auto rule = detail::heat_rule({});
    const Expr f = parse("exp(-(x1^2 + x2^2)/4)*cos(x1 - 0.5*x2)", 2);
    for (int trial = 0; trial < 4; ++trial) {
        const double x[3] = {u(rng), u(rng), 0.0};
        const double l1 = l(rng), l2 = l(rng);
        const double twice = detail::heat_apply_fn(
            [&](const double* eta) { return detail::heat_apply(f, eta, 2, l1, 0.0, *rule); }, x, 2, l2, *rule);
        EXPECT_NEAR(twice, detail::heat_apply(f, x, 2, l1 + l2, 0.0, *rule), 1e-7);
    }
}
