#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "waveforge/oracle.hpp"
#include "waveforge/wave_solver.hpp"

using namespace waveforge;

namespace {

std::string full(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "(%.17g)", v);
    return buf;
}

CauchyProblem wave(int n, int m, std::vector<double> speeds, std::vector<std::string> data,
                   std::string source = "") {
    CauchyProblem p;
    p.kind = speeds.size() > 1 ? ProblemKind::WaveDistinctSpeeds : ProblemKind::WaveMultiple;
    p.dimension = n;
    p.order = m;
    p.speeds = std::move(speeds);
    for (const auto& d : data) p.data.push_back(parse(d, n));
    if (!source.empty()) p.source = parse(source, n);
    return p;
}

SolutionEvaluator solve(const CauchyProblem& p) {
    return p.kind == ProblemKind::WaveMultiple ? solve_multiple_wave(p) : solve_distinct_speeds(p);
}

// Random sum of plane-wave modes with modal sources; evaluates both solver and oracle.
struct ModalCase {
    CauchyProblem problem;
    std::vector<ModeProblem> modes;

    double reference(const double* x, double t) const {
        double s = 0.0;
        for (const auto& mp : modes) s += mode_solve(mp, t) * mp.shape(x);
        return s;
    }
};

ModalCase random_case(std::mt19937_64& rng, int n, int m, bool distinct, bool with_source) {
    std::uniform_real_distribution<double> u(-1.0, 1.0), kmag(0.4, 1.8);
    std::normal_distribution<double> g;
    std::vector<double> speeds;
    if (distinct) {
        for (int j = 0; j < m; ++j) speeds.push_back(0.6 + 0.5 * j + 0.2 * u(rng));
    } else {
        speeds = {1.0 + 0.4 * u(rng)};
    }
    ModalCase c;
    std::vector<std::string> data(2 * m, "0");
    std::string src = "0";
    for (int l = 0; l < 2; ++l) {
        ModeProblem mp;
        mp.kind = distinct ? ProblemKind::WaveDistinctSpeeds : ProblemKind::WaveMultiple;
        mp.order = m;
        mp.speeds = speeds;
        double norm = 0.0;
        for (int i = 0; i < n; ++i) {
            mp.wavevector.push_back(g(rng));
            norm += mp.wavevector.back() * mp.wavevector.back();
        }
        const double k = kmag(rng);
        for (double& v : mp.wavevector) v *= k / std::sqrt(norm);
        mp.phase = 3.0 * u(rng);
        std::string shape = "sin(" + full(mp.phase);
        for (int i = 0; i < n; ++i) shape += " + " + full(mp.wavevector[i]) + "*x" + std::to_string(i + 1);
        shape += ")";
        for (int r = 0; r < 2 * m; ++r) {
            mp.initial.push_back(u(rng));
            data[r] += " + " + full(mp.initial.back()) + "*" + shape;
        }
        if (with_source) {
            const std::string gt = full(u(rng)) + "*cos(" + full(1 + u(rng)) + "*t) + " + full(u(rng));
            mp.source = parse(gt, 0);
            src += " + (" + gt + ")*" + shape;
        }
        c.modes.push_back(mp);
    }
    c.problem = wave(n, m, speeds, data, with_source ? src : "");
    return c;
}

}  // namespace

TEST(Wave, KirchhoffConstantVelocity) {
    const auto u = solve_multiple_wave(wave(3, 1, {1.0}, {"0", "1"}));
    for (double t : {0.0, 0.5, 2.0}) EXPECT_NEAR(u(Point{{0.3, -1.0, 2.0}, t}), t, 1e-14);
}

TEST(Wave, QuadraticDataClosedForms) {
    // (∂_t² - a²Δ)u = 0, u(0) = |x|²: u = |x|² + n a² t².
    for (int n : {3, 5}) {
        std::string r2 = "x1^2";
        for (int i = 2; i <= n; ++i) r2 += " + x" + std::to_string(i) + "^2";
        const auto u = solve_multiple_wave(wave(n, 1, {0.7}, {r2}));
        std::vector<double> x(n, 0.4);
        for (double t : {0.3, 1.2}) {
            EXPECT_NEAR(u(x, t), 0.16 * n + n * 0.49 * t * t, 1e-10) << n;
        }
    }
    // (∂_t² - Δ)²u = 0, u_tt(0) = x1²: u = x1² t²/2 + t⁴/6.
    for (int n : {3, 5}) {
        const auto u = solve_multiple_wave(wave(n, 2, {1.0}, {"0", "0", "x1^2"}));
        std::vector<double> x(n, -0.3);
        x[0] = 0.8;
        for (double t : {0.4, 1.1}) EXPECT_NEAR(u(x, t), 0.64 * t * t / 2 + std::pow(t, 4) / 6, 1e-9) << n;
    }
    // Top datum only: u = t³/6.
    const auto top = solve_multiple_wave(wave(3, 2, {1.3}, {"0", "0", "0", "1"}));
    EXPECT_NEAR(top(Point{{0, 0, 0}, 1.5}), 1.5 * 1.5 * 1.5 / 6, 1e-10);
}

TEST(Wave, RejectsInvalidProblems) {
    EXPECT_THROW(solve_multiple_wave(wave(2, 1, {1.0}, {"x1"})), UnsupportedDimension);
    EXPECT_THROW(solve_multiple_wave(wave(3, 1, {1.0}, {"x1", "0", "0"})), DataCountMismatch);
    EXPECT_THROW(solve_multiple_wave(wave(3, 1, {-1.0}, {"x1"})), NonPositiveSpeed);
    EXPECT_THROW(solve_distinct_speeds(wave(3, 2, {1.0, 1.0}, {"x1"})), DegenerateSpeeds);
    const auto u = solve_multiple_wave(wave(3, 1, {1.0}, {"x1"}));
    EXPECT_THROW(u(Point{{0, 0, 0}, -0.5}), InvalidInterval);
    EXPECT_THROW(u(Point{{0, 0}, 0.5}), DimensionError);
}

TEST(WaveProperty, MatchesModeOracleN3) {
    std::mt19937_64 rng(0x4001);
    std::uniform_real_distribution<double> u(-1.0, 1.0), time(0.05, 1.5);
    for (int trial = 0; trial < 6; ++trial) {
        const int m = 1 + trial % 2;
        const bool distinct = m == 2 && trial % 4 == 3;
        const auto c = random_case(rng, 3, m, distinct, true);
        const auto sol = solve(c.problem);
        for (int k = 0; k < 2; ++k) {
            const double x[3] = {u(rng), u(rng), u(rng)};
            const double t = time(rng);
            EXPECT_NEAR(sol.evaluate(x, t), c.reference(x, t), 1e-8) << "m = " << m << " distinct = " << distinct;
        }
    }
}

TEST(WaveProperty, MatchesModeOracleN5) {
    std::mt19937_64 rng(0x4002);
    std::uniform_real_distribution<double> u(-1.0, 1.0), time(0.05, 1.2);
    for (int trial = 0; trial < 4; ++trial) {
        const int m = 1 + trial % 2;
        const bool distinct = trial == 3;
        const auto c = random_case(rng, 5, m, distinct, trial < 2);
        const auto sol = solve(c.problem);
        const double x[5] = {u(rng), u(rng), u(rng), u(rng), u(rng)};
        const double t = time(rng);
        EXPECT_NEAR(sol.evaluate(x, t), c.reference(x, t), 1e-7) << "m = " << m << " distinct = " << distinct;
    }
}

TEST(WaveProperty, Linearity) {
    std::mt19937_64 rng(0x4003);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 3; ++trial) {
        const auto a = random_case(rng, 3, 2, false, false);
        auto b = random_case(rng, 3, 2, false, false);
        b.problem.speeds = a.problem.speeds;
        const double alpha = u(rng), beta = u(rng);
        CauchyProblem sum = a.problem;
        for (int r = 0; r < 4; ++r) sum.data[r] = alpha * a.problem.data[r] + beta * b.problem.data[r];
        const double x[3] = {u(rng), u(rng), u(rng)};
        const double t = 0.9;
        const double lhs = solve(sum).evaluate(x, t);
        const double rhs = alpha * solve(a.problem).evaluate(x, t) + beta * solve(b.problem).evaluate(x, t);
        EXPECT_NEAR(lhs, rhs, 1e-9 * (1 + std::fabs(rhs)));
    }
}

TEST(WaveProperty, InitialTracesAreReproduced) {
    // ∂_t^r u(x, 0) = φ_r, checked with one-sided differences near t = 0.
    const auto p = wave(3, 2, {1.1}, {"sin(x1 + x2)", "cos(x3)", "x1*x2", "exp(-x2^2)"});
    const auto u = solve_multiple_wave(p);
    const double x[3] = {0.2, -0.4, 0.7};
    const double h = 0.05;
    std::vector<double> v;
    for (int i = 0; i <= 7; ++i) v.push_back(u.evaluate(x, i * h));
    // Forward-difference weights of order 5 accuracy for first derivative.
    const double d1 = (-137 * v[0] + 300 * v[1] - 300 * v[2] + 200 * v[3] - 75 * v[4] + 12 * v[5]) / (60 * h);
    EXPECT_NEAR(v[0], p.data[0].evaluate(x, 0.0), 1e-11);
    EXPECT_NEAR(d1, p.data[1].evaluate(x, 0.0), 1e-5);
}
