#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "waveforge/kernels.hpp"
#include "waveforge/oracle.hpp"

using namespace waveforge;

namespace {

std::vector<double> distinct_speeds(std::mt19937_64& rng, int m) {
    std::uniform_real_distribution<double> u(0.3, 3.0);
    std::vector<double> a;
    while (static_cast<int>(a.size()) < m) {
        const double v = u(rng);
        bool ok = true;
        for (double b : a) ok = ok && std::fabs(v - b) > 0.1;
        if (ok) a.push_back(v);
    }
    return a;
}

}  // namespace

TEST(KernelsProperty, DividedDifferenceSums) {
    std::mt19937_64 rng(0x3001);
    for (int m = 2; m <= 6; ++m) {
        for (int trial = 0; trial < 30; ++trial) {
            const auto a = distinct_speeds(rng, m);
            for (int p = 0; p <= m - 1; ++p) {
                EXPECT_NEAR(divided_difference_sum(a, p), p == m - 1 ? 1.0 : 0.0, 1e-9) << m << " " << p;
            }
        }
    }
}

TEST(KernelsProperty, WeightedResolventSplits) {
    // Σ_j w_j/(a_j^{m-1}(s - a_j)) = 1/∏(s - a_j), and the squared-speed analogue.
    std::mt19937_64 rng(0x3002);
    std::uniform_real_distribution<double> probe(3.5, 5.0);
    for (int m = 2; m <= 5; ++m) {
        for (int trial = 0; trial < 30; ++trial) {
            const auto a = distinct_speeds(rng, m);
            const auto w1 = first_order_weights(a);
            const auto w2 = second_order_weights(a);
            const double s = probe(rng);
            double p1 = 1.0, p2 = 1.0, s1 = 0.0, s2 = 0.0;
            for (int j = 0; j < m; ++j) {
                p1 /= s - a[j];
                p2 /= s * s - a[j] * a[j];
                s1 += w1.weights[j] / std::pow(a[j], m - 1) / (s - a[j]);
                s2 += w2.weights[j] / std::pow(a[j], 2 * m - 2) / (s * s - a[j] * a[j]);
            }
            EXPECT_NEAR(s1 / p1, 1.0, 1e-10);
            EXPECT_NEAR(s2 / p2, 1.0, 1e-9);
        }
    }
}

TEST(Kernels, WeightErrors) {
    EXPECT_THROW(first_order_weights({1.0}), InvalidOrder);
    EXPECT_THROW(second_order_weights({1.0}), InvalidOrder);
    EXPECT_THROW(first_order_weights({1.0, 1.0}), DegenerateSpeeds);
    EXPECT_THROW(second_order_weights({1.0, 1.0 + 1e-12}), DegenerateSpeeds);
    EXPECT_THROW(second_order_weights({1.0, -2.0}), NonPositiveSpeed);
}

TEST(KernelsProperty, ProductCoefficientsVanishAtRoots) {
    std::mt19937_64 rng(0x3003);
    for (int m = 1; m <= 6; ++m) {
        const auto a = distinct_speeds(rng, m);
        const auto c = monic_product_coefficients(a);
        ASSERT_EQ(c.size(), static_cast<std::size_t>(m + 1));
        EXPECT_EQ(c.back(), 1.0);
        for (double r : a) {
            double v = 0.0;
            for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * r + *it;
            EXPECT_NEAR(v, 0.0, 1e-11);
        }
        const auto b = even_product_coefficients(a);
        for (double r : a) {
            double v = 0.0;
            for (auto it = b.rbegin(); it != b.rend(); ++it) v = v * r * r + *it;
            EXPECT_NEAR(v, 0.0, 1e-9);
        }
    }
}

TEST(Kernels, WaveSymbolIsFundamentalSolution) {
    // G_m(ω, t) solves (d²/dt² + ω²)^m y = 0 with y^{(2m-1)}(0) = 1, lower derivatives 0.
    for (int m = 1; m <= 4; ++m) {
        for (double omega : {0.5, 1.3}) {
            std::vector<double> init(2 * m, 0.0);
            init.back() = 1.0;
            std::vector<std::vector<double>> factors(m, std::vector<double>{omega * omega, 0.0, 1.0});
            auto coeffs = multiply_polynomials(factors);
            coeffs.pop_back();
            const std::vector<double> times{0.4, 1.0, 2.2};
            const auto ref = integrate_linear_ode(coeffs, init, {}, times, 1e-12);
            for (std::size_t i = 0; i < times.size(); ++i) {
                EXPECT_NEAR(gm_wave_symbol(omega, m, times[i]), ref[i], 1e-9) << m << " " << omega;
            }
        }
    }
    EXPECT_NEAR(gm_wave_symbol(0.9, 2, 1.7), gm_wave_symbol_m2(0.9, 1.7), 1e-14);
}

TEST(Kernels, EigenSymbols) {
    EXPECT_NEAR(eigen_symbol(EigenSymbol::HeatExp, 2.0, 0.5, 1.5), std::exp(-1.5), 1e-15);
    EXPECT_NEAR(eigen_symbol(EigenSymbol::WaveCos, 4.0, 0.5, 1.5), std::cos(1.5), 1e-15);
    EXPECT_NEAR(eigen_symbol(EigenSymbol::WaveSin, 4.0, 0.5, 1.5), std::sin(1.5), 1e-15);
    // Continuity across the small-argument switch.
    const double below = eigen_symbol(EigenSymbol::WaveSin, 1.0, 1.0, 0.99999e-4);
    const double above = eigen_symbol(EigenSymbol::WaveSin, 1.0, 1.0, 1.00001e-4);
    EXPECT_NEAR(above - below, 2e-9, 1e-15);
    EXPECT_EQ(eigen_symbol(EigenSymbol::WaveSin, 0.0, 1.0, 0.7), 0.7);
    EXPECT_THROW(eigen_symbol(EigenSymbol::HeatExp, -1.0, 1.0, 1.0), InvalidInterval);
}
