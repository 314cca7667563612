#pragma once
/**
 * @file kernels.hpp
 * @brief Scalar symbols of the time-propagation kernels and the
 *        partial-fraction weights that split factored operators.
 */

#include <cmath>
#include <string>
#include <vector>

#include "waveforge/errors.hpp"
#include "waveforge/quadrature.hpp"

namespace waveforge {

inline constexpr double speed_separation = 1e-9;

enum class FactorOrder { First, Second };

struct PartialFractionWeights {
    std::vector<double> speeds;
    std::vector<double> weights;
    FactorOrder order = FactorOrder::First;
};

inline void require_distinct(const std::vector<double>& a) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            if (std::fabs(a[i] - a[j]) < speed_separation) {
                throw DegenerateSpeeds("speeds " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                                       " are closer than 1e-9");
            }
        }
    }
}

inline void require_positive(const std::vector<double>& a) {
    for (double v : a) {
        if (!(v > 0.0)) throw NonPositiveSpeed("speeds must be positive");
    }
}

/// Σ_j a_j^p / ∏_{i≠j}(a_j - a_i): 0 for p ≤ m-2 and 1 for p = m-1.
inline double divided_difference_sum(const std::vector<double>& a, int p) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        double den = 1.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i != j) den *= a[j] - a[i];
        }
        s += std::pow(a[j], p) / den;
    }
    return s;
}

/// w_j = a_j^{m-1} / ∏_{i≠j}(a_j - a_i).
inline PartialFractionWeights first_order_weights(const std::vector<double>& a) {
    if (a.size() < 2) throw InvalidOrder("partial-fraction weights need m >= 2");
    require_distinct(a);
    const int m = static_cast<int>(a.size());
    PartialFractionWeights w{a, std::vector<double>(a.size()), FactorOrder::First};
    for (int j = 0; j < m; ++j) {
        double den = 1.0;
        for (int i = 0; i < m; ++i) {
            if (i != j) den *= a[j] - a[i];
        }
        w.weights[j] = std::pow(a[j], m - 1) / den;
    }
    return w;
}

/// w_j = a_j^{2m-2} / ∏_{i≠j}(a_j² - a_i²).
inline PartialFractionWeights second_order_weights(const std::vector<double>& a) {
    if (a.size() < 2) throw InvalidOrder("partial-fraction weights need m >= 2");
    require_positive(a);
    require_distinct(a);
    const int m = static_cast<int>(a.size());
    PartialFractionWeights w{a, std::vector<double>(a.size()), FactorOrder::Second};
    for (int j = 0; j < m; ++j) {
        double den = 1.0;
        for (int i = 0; i < m; ++i) {
            if (i != j) den *= a[j] * a[j] - a[i] * a[i];
        }
        w.weights[j] = std::pow(a[j], 2 * m - 2) / den;
    }
    return w;
}

/// Coefficients c_0..c_m (ascending) of ∏_i (χ - r_i).
inline std::vector<double> monic_product_coefficients(const std::vector<double>& roots) {
    std::vector<double> c{1.0};
    for (double r : roots) {
        std::vector<double> next(c.size() + 1, 0.0);
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k + 1] += c[k];
            next[k] -= r * c[k];
        }
        c = std::move(next);
    }
    return c;
}

/// b_0, b_2, .., b_{2m} of ∏(χ² - a_i²), returned as b[k] = b_{2k}.
inline std::vector<double> even_product_coefficients(const std::vector<double>& a) {
    std::vector<double> squares;
    for (double v : a) squares.push_back(v * v);
    return monic_product_coefficients(squares);
}

inline double gm_wave_symbol(double omega, int m, double t, int count = 32) {
    if (m < 1) throw InvalidOrder("G_m needs m >= 1");
    if (!(omega > 0.0)) throw InvalidInterval("symbol frequency must be positive");
    if (t < 0.0) throw InvalidInterval("G_m symbol needs t >= 0");
    if (m == 1) return std::sin(omega * t) / omega;
    return iterated_time_integral([omega](double tau) { return std::sin(omega * tau) / omega; }, m - 1, t, count) /
           double_factorial(2 * m - 2);
}

/// Closed form of the m = 2 symbol.
inline double gm_wave_symbol_m2(double omega, double t) {
    return (std::sin(omega * t) - omega * t * std::cos(omega * t)) / (2.0 * omega * omega * omega);
}

enum class EigenSymbol { HeatExp, WaveSin, WaveCos };

inline double eigen_symbol(EigenSymbol kind, double lambda, double a, double t) {
    if (lambda < 0.0) throw InvalidInterval("eigenvalue must be non-negative");
    if (t < 0.0) throw InvalidInterval("symbol needs t >= 0");
    switch (kind) {
        case EigenSymbol::HeatExp: return std::exp(-t * a * lambda);
        case EigenSymbol::WaveCos: return std::cos(a * std::sqrt(lambda) * t);
        case EigenSymbol::WaveSin: {
            const double w = a * std::sqrt(lambda);
            if (w * t < 1e-4) return t - w * w * t * t * t / 6.0;
            return std::sin(w * t) / w;
        }
    }
    return 0.0;
}

}  // namespace waveforge
