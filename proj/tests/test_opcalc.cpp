#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "waveforge/opcalc.hpp"

using namespace waveforge;

namespace {

constexpr double pi = std::numbers::pi;

}  // namespace

TEST(ComplexShift, TrigonometricClosedForms) {
    const Expr f = parse("sin(1.3*x1)", 1);
    for (double h : {-0.7, 0.2, 1.5}) {
        const Point x{{0.4}, std::nullopt};
        EXPECT_NEAR(complex_shift_cos(f, {h}, x), std::cosh(1.3 * h) * std::sin(1.3 * 0.4), 1e-14);
        EXPECT_NEAR(complex_shift_sin(f, {h}, x), std::sinh(1.3 * h) * std::cos(1.3 * 0.4), 1e-14);
    }
    const Expr g = parse("exp(x1)*cos(x2)", 2);
    const Point y{{0.3, -0.5}, std::nullopt};
    // Re exp(x1 + i h1) cos(x2 + i h2)
    const std::complex<double> z = std::exp(std::complex<double>(0.3, 0.2)) * std::cos(std::complex<double>(-0.5, 0.4));
    EXPECT_NEAR(complex_shift_cos(g, {0.2, 0.4}, y), z.real(), 1e-14);
    EXPECT_NEAR(complex_shift_sin(g, {0.2, 0.4}, y), z.imag(), 1e-14);
    EXPECT_THROW(complex_shift_cos(g, {0.2}, y), DimensionError);
}

TEST(ComplexShiftProperty, MatchesTaylorSeriesOnPolynomials) {
    // cos(h d/dx) p = Σ_j (-1)^j h^{2j}/(2j)! p^{(2j)}, sin(h d/dx) p = Σ_j (-1)^j h^{2j+1}/(2j+1)! p^{(2j+1)}.
    std::mt19937_64 rng(0x7001);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        std::string text = "0";
        char buf[64];
        for (int k = 0; k <= 7; ++k) {
            std::snprintf(buf, sizeof buf, " + %.17g*x1^%d", u(rng), k);
            text += buf;
        }
        const Expr p = parse(text, 1);
        const double x = u(rng), h = u(rng);
        std::vector<Expr> d{p};
        for (int k = 1; k <= 8; ++k) d.push_back(differentiate(d.back(), Var::x(1)));
        double c = 0.0, s = 0.0, hk = 1.0, fact = 1.0;
        for (int k = 0; k <= 8; ++k) {
            const double term = hk / fact * d[k].evaluate(&x, 0.0);
            if (k % 2 == 0) c += (k % 4 == 0 ? 1 : -1) * term;
            else s += (k % 4 == 1 ? 1 : -1) * term;
            hk *= h;
            fact *= k + 1;
        }
        EXPECT_NEAR(complex_shift_cos(p, {h}, Point{{x}, std::nullopt}), c, 1e-12);
        EXPECT_NEAR(complex_shift_sin(p, {h}, Point{{x}, std::nullopt}), s, 1e-12);
    }
}

TEST(Dilation, ScalesCoordinates) {
    const Expr f = parse("x1^2 + sin(x2)", 2);
    EXPECT_NEAR(dilation_apply(f, {2.0, -1.0}, Point{{0.5, 0.3}, std::nullopt}), 1.0 + std::sin(-0.3), 1e-15);
    EXPECT_THROW(dilation_apply(f, {2.0}, Point{{0.5, 0.3}, std::nullopt}), DimensionError);
}

TEST(AbelPoisson, GeneratorMatchesTruncatedSeries) {
    // S(w) = w/(1 - w): a_n = 1 for n ≥ 1.
    FourierSeriesSpec gen;
    gen.half_period = 2.0;
    gen.cosine_generator = parse("t/(1 - t)", 0);
    gen.sine_generator = parse("t/(1 - t)", 0);
    FourierSeriesSpec list;
    list.half_period = 2.0;
    list.cosine_coefficients.assign(400, 1.0);
    list.cosine_coefficients[0] = 0.0;
    list.sine_coefficients = list.cosine_coefficients;
    for (double x : {-1.7, -0.2, 0.0, 0.9}) {
        EXPECT_NEAR(abel_poisson_sum(gen, x, -0.2), abel_poisson_sum(list, x, -0.2), 1e-13) << x;
    }
}

TEST(AbelPoisson, RichardsonLimitOfSmoothSeries) {
    // Σ 2^{-n} cos(nπx): limit Re(w/(2 - w)) at |w| = 1.
    FourierSeriesSpec spec;
    spec.half_period = 1.0;
    spec.cosine_generator = parse("t/(2 - t)", 0);
    for (double x : {0.1, 0.45, 0.8}) {
        const std::complex<double> w = std::polar(1.0, pi * x);
        EXPECT_NEAR(abel_poisson_limit(spec, x, 1e-4), (w / (2.0 - w)).real(), 1e-10);
    }
    EXPECT_THROW(abel_poisson_limit(spec, 0.1, 0.0), InvalidInterval);
}

TEST(AbelPoisson, Errors) {
    FourierSeriesSpec spec;
    spec.cosine_generator = parse("t", 0);
    EXPECT_THROW(abel_poisson_sum(spec, 0.0, 0.0), InvalidInterval);
    EXPECT_THROW(abel_poisson_sum(spec, 0.0, 0.1), InvalidInterval);
    spec.half_period = 0.0;
    EXPECT_THROW(abel_poisson_sum(spec, 0.0, -0.1), InvalidInterval);
    EXPECT_THROW(poisson_kernel_sum(std::vector<double>(8, 1.0), 1.0, 0.0, -0.1), GridTooCoarse);
    EXPECT_THROW(poisson_kernel_sum(std::vector<double>(32, 1.0), 1.0, 0.0, 0.0), InvalidInterval);
}

TEST(PoissonKernel, ReproducesTrigonometricPolynomials) {
    // f = 1 + cos(3πξ/l) - 2 sin(πξ/l) → 1 + e^{3z} cos(3πx/l) - 2 e^{z} sin(πx/l).
    const double l = 1.5, z = -0.3;
    std::vector<double> f(256);
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double xi = -l + 2 * l * j / f.size();
        f[j] = 1 + std::cos(3 * pi * xi / l) - 2 * std::sin(pi * xi / l);
    }
    for (double x : {-1.0, 0.2, 1.4}) {
        const double expect = 1 + std::exp(3 * z) * std::cos(3 * pi * x / l) - 2 * std::exp(z) * std::sin(pi * x / l);
        EXPECT_NEAR(poisson_kernel_sum(f, l, x, z), expect, 1e-12);
    }
}

TEST(SquareDerivative, ExpandsExpOfSquare) {
    // d^k/dx^k e^{x²} via the recurrence y_{k+1} = 2x y_k + 2k y_{k-1}.
    const double x = 0.7;
    std::vector<double> derivs(9, std::exp(x * x));
    double prev = 0.0, cur = std::exp(x * x);
    for (int k = 0; k <= 8; ++k) {
        EXPECT_NEAR(square_derivative_expand(derivs, x, k), cur, 1e-12 * std::fabs(cur)) << k;
        const double next = 2 * x * cur + 2 * k * prev;
        prev = cur;
        cur = next;
    }
    EXPECT_THROW(square_derivative_expand({1.0, 1.0}, x, 2), InsufficientDerivatives);
    EXPECT_THROW(square_derivative_expand({1.0}, x, -1), InvalidOrder);
}
