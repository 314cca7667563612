#pragma once
/**
 * @file opcalc.hpp
 * @brief Operator calculus by analytic continuation: complex shifts, dilation,
 *        Abel-Poisson summation of Fourier series and the f(x²) derivative expansion.
 */

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include "waveforge/errors.hpp"
#include "waveforge/expr.hpp"

namespace waveforge {

namespace detail {

inline std::complex<double> shifted_value(const Expr& f, const std::vector<double>& h, const Point& x) {
    if (h.size() != x.coords.size()) throw DimensionError("shift and point dimensions differ");
    ComplexPoint z;
    for (std::size_t i = 0; i < h.size(); ++i) z.coords.emplace_back(x.coords[i], h[i]);
    if (x.time) z.time = std::complex<double>(*x.time, 0.0);
    return eval_complex(f, z);
}

}  // namespace detail

/// cos(h·∂x) f at x, realized as Re f(x + ih).
inline double complex_shift_cos(const Expr& f, const std::vector<double>& h, const Point& x) {
    return detail::shifted_value(f, h, x).real();
}

/// sin(h·∂x) f at x, realized as Im f(x + ih).
inline double complex_shift_sin(const Expr& f, const std::vector<double>& h, const Point& x) {
    return detail::shifted_value(f, h, x).imag();
}

/// a^{x∂x} f at x = f(a₁x₁, …, a_nx_n).
inline double dilation_apply(const Expr& f, const std::vector<double>& a, const Point& x) {
    if (a.size() != x.coords.size()) throw DimensionError("dilation and point dimensions differ");
    Point y = x;
    for (std::size_t i = 0; i < a.size(); ++i) y.coords[i] *= a[i];
    return eval_real(f, y);
}

/// A Fourier series on [-l, l] given by power-series generators:
/// Σ a_n cos(nπx/l) ↔ S₊(w) = Σ a_n wⁿ and Σ b_n sin(nπx/l) ↔ S₋(w) = Σ b_n wⁿ.
/// Generators are expressions in `t`; coefficient lists are finite series.
struct FourierSeriesSpec {
    double half_period = std::numbers::pi;
    std::optional<Expr> cosine_generator;
    std::optional<Expr> sine_generator;
    std::vector<double> cosine_coefficients;  // a_0, a_1, ...
    std::vector<double> sine_coefficients;    // b_0, b_1, ...
};

/// f_z(x) = Re S₊(e^{z+iπx/l}) + Im S₋(e^{z+iπx/l}), z < 0.
inline double abel_poisson_sum(const FourierSeriesSpec& spec, double x, double z) {
    if (!(z < 0.0)) throw InvalidInterval("Abel-Poisson summation needs z < 0");
    if (!(spec.half_period > 0.0)) throw InvalidInterval("half-period must be positive");
    const double theta = std::numbers::pi * x / spec.half_period;
    const std::complex<double> w = std::polar(std::exp(z), theta);
    double sum = 0.0;
    ComplexPoint at;
    at.time = w;
    if (spec.cosine_generator) sum += eval_complex(*spec.cosine_generator, at).real();
    if (spec.sine_generator) sum += eval_complex(*spec.sine_generator, at).imag();
    for (std::size_t n = 0; n < spec.cosine_coefficients.size(); ++n) {
        sum += spec.cosine_coefficients[n] * std::exp(n * z) * std::cos(n * theta);
    }
    for (std::size_t n = 0; n < spec.sine_coefficients.size(); ++n) {
        sum += spec.sine_coefficients[n] * std::exp(n * z) * std::sin(n * theta);
    }
    return sum;
}

/// Quadratic Richardson extrapolation of f_z(x) from z ∈ {-4ε, -2ε, -ε} to z = 0.
inline double abel_poisson_limit(const FourierSeriesSpec& spec, double x, double epsilon) {
    if (!(epsilon > 0.0)) throw InvalidInterval("Richardson step must be positive");
    const double f1 = abel_poisson_sum(spec, x, -epsilon);
    const double f2 = abel_poisson_sum(spec, x, -2.0 * epsilon);
    const double f4 = abel_poisson_sum(spec, x, -4.0 * epsilon);
    const double r1 = 2.0 * f1 - f2;
    const double r2 = 2.0 * f2 - f4;
    return (4.0 * r1 - r2) / 3.0;
}

/// Poisson-kernel convolution (1/2l)∫ f(ξ)(1-e^{2z})/(1-2e^z cos(π(x-ξ)/l)+e^{2z}) dξ
/// by the periodic trapezoid rule. `samples[j]` is f at ξ_j = -l + 2lj/N, j < N.
inline double poisson_kernel_sum(const std::vector<double>& samples, double l, double x, double z) {
    if (samples.size() < 16) throw GridTooCoarse("Poisson summation needs at least 16 samples");
    if (!(z < 0.0)) throw InvalidInterval("Poisson summation needs z < 0");
    if (!(l > 0.0)) throw InvalidInterval("half-period must be positive");
    const std::size_t n = samples.size();
    const double r = std::exp(z);
    const double num = (1.0 - r) * (1.0 + r);
    const double h = 2.0 * l / static_cast<double>(n);
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double xi = -l + h * static_cast<double>(j);
        const double c = std::cos(std::numbers::pi * (x - xi) / l);
        sum += samples[j] * num / (1.0 - 2.0 * r * c + r * r);
    }
    return sum / static_cast<double>(n);
}

/// d^k/dx^k f(x²) = Σ_{j ≤ k/2} k!/(j!(k-2j)!) (2x)^{k-2j} f^{(k-j)}(x²),
/// with derivs[i] = f^{(i)}(x²).
inline double square_derivative_expand(const std::vector<double>& derivs, double x, int k) {
    if (k < 0) throw InvalidOrder("derivative order must be non-negative");
    if (static_cast<int>(derivs.size()) < k + 1) {
        throw InsufficientDerivatives("need " + std::to_string(k + 1) + " derivative values, got " +
                                      std::to_string(derivs.size()));
    }
    double sum = 0.0;
    double kfact = 1.0;
    for (int i = 2; i <= k; ++i) kfact *= i;
    for (int j = 0; 2 * j <= k; ++j) {
        double den = 1.0;
        for (int i = 2; i <= j; ++i) den *= i;
        for (int i = 2; i <= k - 2 * j; ++i) den *= i;
        sum += kfact / den * std::pow(2.0 * x, k - 2 * j) * derivs[k - j];
    }
    return sum;
}

}  // namespace waveforge
