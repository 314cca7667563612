#pragma once
/**
 * @file quadrature.hpp
 * @brief Gauss-Legendre rules, mean-normalized sphere rules for n = 3 and 5,
 *        collapsed iterated time integrals and the odd-dimensional sinh kernel.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

#include "waveforge/errors.hpp"
#include "waveforge/expr.hpp"

namespace waveforge {

struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    double a = -1.0;
    double b = 1.0;

    std::size_t size() const noexcept { return nodes.size(); }

    template <class F>
    double integrate(F&& f) const {
        double s = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
        return s;
    }
};

namespace detail {

// Nodes/weights on (-1, 1), cached per count.
inline std::shared_ptr<const GaussRule> reference_gauss(int count) {
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const GaussRule>> cache;
    std::lock_guard lock(mutex);
    if (auto it = cache.find(count); it != cache.end()) return it->second;

    auto rule = std::make_shared<GaussRule>();
    rule->nodes.resize(count);
    rule->weights.resize(count);
    const int half = (count + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
        double dp = 1.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= count; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = count * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        // Recompute derivative at the converged node for the weight.
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= count; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = count * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule->nodes[i] = -x;
        rule->nodes[count - 1 - i] = x;
        rule->weights[i] = w;
        rule->weights[count - 1 - i] = w;
    }
    if (count % 2 == 1) rule->nodes[count / 2] = 0.0;
    cache.emplace(count, rule);
    return rule;
}

}  // namespace detail

/// Gauss-Legendre rule with `count` nodes on (a, b).
inline GaussRule gauss_legendre(int count, double a, double b) {
    if (count < 1) throw InvalidOrder("Gauss rule needs at least one node");
    if (!(a < b)) throw InvalidInterval("Gauss rule needs a < b");
    const auto ref = detail::reference_gauss(count);
    GaussRule r;
    r.a = a;
    r.b = b;
    r.nodes.resize(count);
    r.weights.resize(count);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < count; ++i) {
        r.nodes[i] = mid + half * ref->nodes[i];
        r.weights[i] = half * ref->weights[i];
    }
    return r;
}

/// Unit-interval rule used for signed integrals: ∫₀ᵗ g = t ∫₀¹ g(t s) ds.
inline const GaussRule& unit_gauss(int count) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<GaussRule>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[count];
    if (!slot) slot = std::make_unique<GaussRule>(gauss_legendre(count, 0.0, 1.0));
    return *slot;
}

/// ∫₀ᵗ g(τ) dτ for either sign of t (the rule is applied to the signed interval).
template <class F>
double integrate_from_zero(F&& g, double t, int count) {
    if (t == 0.0) return 0.0;
    const GaussRule& r = unit_gauss(count);
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * g(t * r.nodes[i]);
    return t * s;
}

struct QuadratureSpec {
    int time_nodes = 32;
    int radial_nodes = 32;
    int sphere_degree = 16;

    void validate() const {
        if (time_nodes < 2 || radial_nodes < 2 || sphere_degree < 2) {
            throw InvalidOrder("quadrature counts must be at least 2");
        }
    }
};

/// Mean-normalized rule on the unit sphere S^{n-1}. Nodes are stored row-wise.
/// Every rule is antipodally symmetric, so means at negative radius equal
/// means at the opposite radius.
struct SphereRule {
    int dimension = 3;
    int degree = 0;
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const noexcept { return weights.size(); }
    const double* node(std::size_t j) const noexcept { return nodes.data() + j * dimension; }
};

namespace detail {

inline SphereRule build_sphere_rule(int n, int degree) {
    SphereRule rule;
    rule.dimension = n;
    rule.degree = degree;
    constexpr double pi = std::numbers::pi;
    if (n == 3) {
        const GaussRule u = gauss_legendre(degree, -1.0, 1.0);
        const int naz = 2 * degree;
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double s = std::sqrt(std::max(0.0, 1.0 - u.nodes[i] * u.nodes[i]));
            for (int j = 0; j < naz; ++j) {
                const double phi = 2.0 * pi * j / naz;
                rule.nodes.insert(rule.nodes.end(), {u.nodes[i], s * std::cos(phi), s * std::sin(phi)});
                rule.weights.push_back(0.5 * u.weights[i] / naz);
            }
        }
        return rule;
    }
    // S^4 as ξ1 = u1, ξ2 = s1 u2, ξ3 = s1 s2 u3, (ξ4, ξ5) = s1 s2 s3 (cos φ, sin φ),
    // surface element (1-u1²) du1 · (1-u2²)^{1/2} du2 · du3 · dφ.
    const int n1 = degree / 2 + 2;
    const int n2 = degree / 2 + 1;
    const int n3 = degree / 2 + 1;
    const int naz = 2 * ((degree + 3) / 2);
    const GaussRule g1 = gauss_legendre(n1, -1.0, 1.0);
    const GaussRule g3 = gauss_legendre(n3, -1.0, 1.0);
    std::vector<double> u2(n2), w2(n2);
    for (int j = 1; j <= n2; ++j) {
        const double th = j * pi / (n2 + 1);
        u2[j - 1] = std::cos(th);
        w2[j - 1] = pi / (n2 + 1) * std::sin(th) * std::sin(th);
    }
    const double norm1 = 4.0 / 3.0, norm2 = pi / 2.0, norm3 = 2.0;
    for (int a = 0; a < n1; ++a) {
        const double x1 = g1.nodes[a];
        const double wa = g1.weights[a] * (1.0 - x1 * x1) / norm1;
        const double s1 = std::sqrt(std::max(0.0, 1.0 - x1 * x1));
        for (int b = 0; b < n2; ++b) {
            const double wb = w2[b] / norm2;
            const double s2 = std::sqrt(std::max(0.0, 1.0 - u2[b] * u2[b]));
            for (int c = 0; c < n3; ++c) {
                const double wc = g3.weights[c] / norm3;
                const double s3 = std::sqrt(std::max(0.0, 1.0 - g3.nodes[c] * g3.nodes[c]));
                for (int d = 0; d < naz; ++d) {
                    const double phi = 2.0 * pi * d / naz;
                    rule.nodes.insert(rule.nodes.end(), {x1, s1 * u2[b], s1 * s2 * g3.nodes[c],
                                                         s1 * s2 * s3 * std::cos(phi),
                                                         s1 * s2 * s3 * std::sin(phi)});
                    rule.weights.push_back(wa * wb * wc / naz);
                }
            }
        }
    }
    return rule;
}

}  // namespace detail

/// Product rule on S^{n-1}, exact for polynomials of total degree ≤ `degree`.
inline std::shared_ptr<const SphereRule> sphere_rule(int n, int degree) {
    if (n != 3 && n != 5) throw UnsupportedDimension("sphere rules exist for n = 3 and n = 5 only");
    if (degree < 2) throw InvalidOrder("sphere rule degree must be at least 2");
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::shared_ptr<const SphereRule>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{n, degree}];
    if (!slot) slot = std::make_shared<const SphereRule>(detail::build_sphere_rule(n, degree));
    return slot;
}

/// Mean of `field` over the sphere |ξ - center| = |radius|, field evaluated at time `time`.
inline double spherical_mean(const Expr& field, const double* center, double radius, const SphereRule& rule,
                             double time = 0.0) {
    if (radius == 0.0) return field.evaluate(center, time);
    const int n = rule.dimension;
    double xi[5];
    double sum = 0.0;
    for (std::size_t j = 0; j < rule.size(); ++j) {
        const double* v = rule.node(j);
        for (int i = 0; i < n; ++i) xi[i] = center[i] + radius * v[i];
        sum += rule.weights[j] * field.evaluate(xi, time);
    }
    return sum;
}

inline double spherical_mean(const Expr& field, const Point& center, double radius, const SphereRule& rule) {
    if (radius < 0.0) throw InvalidInterval("sphere radius must be non-negative");
    if (static_cast<int>(center.coords.size()) != rule.dimension || field.dimension() != rule.dimension) {
        throw DimensionError("sphere rule, field and center dimensions differ");
    }
    return spherical_mean(field, center.coords.data(), radius, rule, center.time.value_or(0.0));
}

inline double double_factorial(int k) {
    double r = 1.0;
    for (int i = k; i > 1; i -= 2) r *= i;
    return r;
}

inline double factorial(int k) {
    double r = 1.0;
    for (int i = 2; i <= k; ++i) r *= i;
    return r;
}

/// (∫₀ᵗ · τdτ)^m g collapsed to ∫₀ᵗ (t²-τ²)^{m-1}/(2m-2)!! g(τ) τ dτ.
inline double iterated_time_integral(const std::function<double(double)>& g, int m, double t, int count = 32) {
    if (m < 1) throw InvalidOrder("iterated integral order must be at least 1");
    if (t < 0.0) throw InvalidInterval("iterated integral needs t >= 0");
    if (count < 1) throw InvalidOrder("rule count must be positive");
    const double scale = 1.0 / double_factorial(2 * m - 2);
    return integrate_from_zero(
        [&](double tau) { return std::pow(t * t - tau * tau, m - 1) * scale * g(tau) * tau; }, t, count);
}

/// [sinh(atΔ^{1/2})/(aΔ^{1/2})] field at x, for n = 3 and n = 5.
/// A time-dependent field is frozen at x.time (default 0).
inline double sinh_kernel_apply(const Expr& field, double a, double t, const Point& x,
                                const QuadratureSpec& spec = {}) {
    spec.validate();
    const int n = static_cast<int>(x.coords.size());
    if (n != 3 && n != 5) throw UnsupportedDimension("sinh kernel needs n = 3 or n = 5");
    if (field.dimension() != n) throw DimensionError("field dimension differs from point dimension");
    if (!(a > 0.0)) throw NonPositiveSpeed("speed must be positive");
    if (t < 0.0) throw InvalidInterval("sinh kernel needs t >= 0");
    if (t == 0.0) return 0.0;
    const auto rule = sphere_rule(n, spec.sphere_degree);
    const double time = x.time.value_or(0.0);
    if (n == 3) return t * spherical_mean(field, x.coords.data(), a * t, *rule, time);
    // The mean over S^4 carries 1/3 relative to the normalization 2(2π)²(aτ)⁴.
    const Expr lap = laplacian(field);
    const double radial = integrate_from_zero(
        [&](double s) { return spherical_mean(lap, x.coords.data(), a * s, *rule, time) * s; }, t,
        spec.radial_nodes);
    return t * (a * a * radial / 3.0 + field.evaluate(x.coords.data(), time));
}

}  // namespace waveforge
