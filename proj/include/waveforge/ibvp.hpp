#pragma once
/**
 * @file ibvp.hpp
 * @brief Initial-boundary value problems on boxes [0,L₁]×…×[0,L_d] with
 *        homogeneous Dirichlet conditions, solved by sine-eigenfunction expansion.
 *
 * Every mode e_k(x) = ∏ √(2/L_i) sin(k_iπx_i/L_i), λ_k = Σ (k_iπ/L_i)², evolves
 * by the scalar symbol of the operator. Wave problems of order m ≥ 2 use the
 * Runge-Kutta mode integrator for the per-mode ODE; all other kinds use closed
 * forms. Sources enter through a Gauss-Legendre Duhamel integral in time with
 * the source projected at each node.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "waveforge/errors.hpp"
#include "waveforge/expr.hpp"
#include "waveforge/kernels.hpp"
#include "waveforge/oracle.hpp"
#include "waveforge/problem.hpp"
#include "waveforge/quadrature.hpp"

namespace waveforge {

/// sin(kπx/L), exactly zero at x = 0 and x = L.
inline double box_sine(int k, double x, double L) {
    double u = k * (x / L);
    u -= 2.0 * std::round(u / 2.0);  // u ∈ [-1, 1]
    if (u > 0.5) u = 1.0 - u;
    if (u < -0.5) u = -1.0 - u;
    return std::sin(std::numbers::pi * u);
}

class EigenBasis {
public:
    EigenBasis(std::vector<double> lengths, int kmax) : lengths_(std::move(lengths)), kmax_(kmax) {
        const int d = dimension();
        if (d < 1 || d > 3) throw InvalidBox("boxes must have 1 to 3 sides");
        for (double L : lengths_) {
            if (!(L > 0.0) || !std::isfinite(L)) throw InvalidBox("box sides must be positive");
        }
        if (kmax < 1) throw InvalidBox("K_max must be at least 1");
        norm_ = 1.0;
        for (double L : lengths_) norm_ *= std::sqrt(2.0 / L);
        std::vector<int> idx(d, 1);
        for (;;) {
            std::array<int, 3> k{0, 0, 0};
            double lambda = 0.0;
            for (int i = 0; i < d; ++i) {
                k[i] = idx[i];
                const double w = idx[i] * std::numbers::pi / lengths_[i];
                lambda += w * w;
            }
            modes_.push_back(k);
            eigenvalues_.push_back(lambda);
            int axis = d - 1;
            while (axis >= 0 && idx[axis] == kmax) idx[axis--] = 1;
            if (axis < 0) break;
            ++idx[axis];
        }
        std::vector<std::size_t> order(modes_.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return eigenvalues_[a] < eigenvalues_[b]; });
        std::vector<std::array<int, 3>> m;
        std::vector<double> e;
        for (std::size_t i : order) {
            m.push_back(modes_[i]);
            e.push_back(eigenvalues_[i]);
        }
        modes_ = std::move(m);
        eigenvalues_ = std::move(e);
    }

    int dimension() const noexcept { return static_cast<int>(lengths_.size()); }
    int kmax() const noexcept { return kmax_; }
    const std::vector<double>& lengths() const noexcept { return lengths_; }
    std::size_t size() const noexcept { return modes_.size(); }
    const std::array<int, 3>& mode(std::size_t i) const { return modes_.at(i); }
    double eigenvalue(std::size_t i) const { return eigenvalues_.at(i); }
    const std::vector<double>& eigenvalues() const noexcept { return eigenvalues_; }
    double normalization() const noexcept { return norm_; }

    double eigenfunction(std::size_t i, const double* x) const {
        double v = norm_;
        for (int a = 0; a < dimension(); ++a) v *= box_sine(modes_[i][a], x[a], lengths_[a]);
        return v;
    }

    /// Position of mode k in the sorted list, if present.
    std::optional<std::size_t> find(const std::array<int, 3>& k) const {
        for (std::size_t i = 0; i < modes_.size(); ++i) {
            if (modes_[i] == k) return i;
        }
        return std::nullopt;
    }

private:
    std::vector<double> lengths_;
    int kmax_;
    double norm_ = 1.0;
    std::vector<std::array<int, 3>> modes_;
    std::vector<double> eigenvalues_;
};

inline EigenBasis build_basis(const std::vector<double>& lengths, int kmax) { return EigenBasis(lengths, kmax); }

struct ModeCoefficients {
    std::vector<double> values;  // aligned with the basis order
};

inline int default_projection_nodes(const EigenBasis& basis) { return std::max(64, 4 * basis.kmax()); }

/// c_k = ∫_box field · e_k by a tensor Gauss rule, sum-factorized axis by axis.
inline ModeCoefficients project(const Expr& field, const EigenBasis& basis, int quad_count = 0, double time = 0.0) {
    const int d = basis.dimension();
    if (field.dimension() > d) throw DimensionError("field dimension exceeds box dimension");
    if (quad_count <= 0) quad_count = default_projection_nodes(basis);
    const int q = quad_count, K = basis.kmax();
    ModeCoefficients out;
    out.values.assign(basis.size(), 0.0);
    if (field.is_zero()) return out;

    std::vector<GaussRule> rules;
    for (double L : basis.lengths()) rules.push_back(gauss_legendre(q, 0.0, L));
    // Sample the field on the tensor grid (last axis fastest).
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= q;
    std::vector<double> tensor(total);
    std::vector<int> idx(d, 0);
    double x[3] = {0.0, 0.0, 0.0};
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rem = flat;
        for (int a = d - 1; a >= 0; --a) {
            idx[a] = static_cast<int>(rem % q);
            rem /= q;
        }
        for (int a = 0; a < d; ++a) x[a] = rules[a].nodes[idx[a]];
        tensor[flat] = field.evaluate(x, time);
    }
    // Contract each axis with S[k][l] = w_l √(2/L) sin(kπx_l/L).
    std::vector<std::size_t> shape(d, q);
    for (int a = 0; a < d; ++a) {
        const double L = basis.lengths()[a];
        std::vector<double> S(static_cast<std::size_t>(K) * q);
        for (int k = 1; k <= K; ++k) {
            for (int l = 0; l < q; ++l) {
                S[(k - 1) * q + l] = rules[a].weights[l] * std::sqrt(2.0 / L) * box_sine(k, rules[a].nodes[l], L);
            }
        }
        std::size_t outer = 1, inner = 1;
        for (int b = 0; b < a; ++b) outer *= shape[b];
        for (int b = a + 1; b < d; ++b) inner *= shape[b];
        std::vector<double> next(outer * K * inner, 0.0);
        for (std::size_t o = 0; o < outer; ++o) {
            for (int k = 0; k < K; ++k) {
                double* dst = next.data() + (o * K + k) * inner;
                for (int l = 0; l < q; ++l) {
                    const double s = S[k * q + l];
                    const double* src = tensor.data() + (o * q + l) * inner;
                    for (std::size_t i = 0; i < inner; ++i) dst[i] += s * src[i];
                }
            }
        }
        tensor = std::move(next);
        shape[a] = K;
    }
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto& k = basis.mode(i);
        std::size_t flat = 0;
        for (int a = 0; a < d; ++a) flat = flat * K + (k[a] - 1);
        out.values[i] = tensor[flat];
    }
    return out;
}

struct IbvpSpec {
    int project_nodes = 0;  // 0: max(64, 4·K_max)
    int time_nodes = 32;
    double ode_tolerance = 1e-11;
};

/// Eigen-expansion solution with access to modal amplitudes.
class IbvpSolution {
public:
    IbvpSolution(const CauchyProblem& p, EigenBasis basis, const IbvpSpec& spec)
        : problem_(p), basis_(std::move(basis)), spec_(spec) {
        p.validate();
        if (p.dimension != basis_.dimension()) throw DimensionError("problem and box dimensions differ");
        if (spec.time_nodes < 2) throw InvalidOrder("time quadrature needs at least 2 nodes");
        for (int r = 0; r < p.data_count(); ++r) {
            const Expr phi = p.datum(r).with_dimension(p.dimension);
            data_.push_back(project(phi, basis_, spec.project_nodes));
            if (!phi.is_zero() && !vanishes_on_boundary(phi)) {
                warnings_.push_back("phi" + std::to_string(r) +
                                    " does not vanish on the box boundary; the sine series converges slowly");
            }
        }
        if (p.source && !p.source->is_zero()) source_ = p.source->with_dimension(p.dimension);
        if (p.kind != ProblemKind::HeatProduct && p.order >= 2) {
            for (std::size_t i = 0; i < basis_.size(); ++i) characteristic_.push_back(mode_problem(i).characteristic());
        }
    }

    const EigenBasis& basis() const noexcept { return basis_; }
    const CauchyProblem& problem() const noexcept { return problem_; }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }
    const ModeCoefficients& data_coefficients(int r) const { return data_.at(r); }

    /// Modal amplitudes T_k(t), cached per t.
    std::shared_ptr<const std::vector<double>> amplitudes(double t) const {
        if (t < 0.0) throw InvalidInterval("solutions are evaluated for t >= 0");
        {
            std::lock_guard lock(mutex_);
            if (auto it = cache_.find(t); it != cache_.end()) return it->second;
        }
        auto amps = std::make_shared<const std::vector<double>>(compute_amplitudes(t));
        std::lock_guard lock(mutex_);
        if (cache_.size() >= 256) cache_.clear();
        cache_.emplace(t, amps);
        return amps;
    }

    /// dT_k/dt for unforced first-order-in-m problems (m = 1 wave or heat).
    std::vector<double> rates(double t) const {
        if (problem_.order != 1 || source_) throw InvalidOrder("closed-form rates need m = 1 and no source");
        std::vector<double> out(basis_.size());
        const double a = problem_.speeds[0];
        for (std::size_t i = 0; i < basis_.size(); ++i) {
            const double lam = basis_.eigenvalue(i);
            const double c0 = data_[0].values[i];
            if (problem_.kind == ProblemKind::HeatProduct) {
                out[i] = -a * lam * c0 * std::exp(-a * lam * t);
            } else {
                const double w = a * std::sqrt(lam);
                const double c1 = data_[1].values[i];
                out[i] = -c0 * w * std::sin(w * t) + c1 * std::cos(w * t);
            }
        }
        return out;
    }

    /// Σ_k (T_k')² + a²λ_k T_k² for the m = 1 wave equation.
    double energy(double t) const {
        if (problem_.kind == ProblemKind::HeatProduct) throw InvalidOrder("energy is defined for wave problems");
        const auto amps = amplitudes(t);
        const auto dt = rates(t);
        const double a = problem_.speeds[0];
        double e = 0.0;
        for (std::size_t i = 0; i < basis_.size(); ++i) {
            e += dt[i] * dt[i] + a * a * basis_.eigenvalue(i) * (*amps)[i] * (*amps)[i];
        }
        return e;
    }

    double operator()(const double* x, double t) const {
        const auto amps = amplitudes(t);
        double u = 0.0;
        for (std::size_t i = 0; i < basis_.size(); ++i) {
            if ((*amps)[i] != 0.0) u += (*amps)[i] * basis_.eigenfunction(i, x);
        }
        return u;
    }

private:
    bool vanishes_on_boundary(const Expr& phi) const {
        const int d = basis_.dimension();
        const int samples = 7;
        double x[3] = {0.0, 0.0, 0.0};
        for (int face = 0; face < d; ++face) {
            for (int side = 0; side < 2; ++side) {
                int total = 1;
                for (int a = 0; a < d - 1; ++a) total *= samples;
                for (int s = 0; s < total; ++s) {
                    int rem = s;
                    for (int a = 0; a < d; ++a) {
                        if (a == face) {
                            x[a] = side ? basis_.lengths()[a] : 0.0;
                        } else {
                            x[a] = basis_.lengths()[a] * (rem % samples + 0.5) / samples;
                            rem /= samples;
                        }
                    }
                    if (std::fabs(phi.evaluate(x, 0.0)) > 1e-10) return false;
                }
            }
        }
        return true;
    }

    ModeProblem mode_problem(std::size_t i) const {
        ModeProblem mp;
        mp.kind = problem_.kind;
        mp.order = problem_.order;
        mp.speeds = problem_.speeds;
        const double lam = basis_.eigenvalue(i);
        mp.wavevector = {std::sqrt(lam)};
        return mp;
    }

    // Impulse response Y(t) of the modal operator and its data response.
    std::vector<double> compute_amplitudes(double t) const {
        const std::size_t count = basis_.size();
        std::vector<double> amps(count, 0.0);
        const int m = problem_.order;
        const int nd = problem_.data_count();

        // Duhamel nodes and projected sources.
        std::vector<double> taus;
        std::vector<double> tau_weights;
        std::vector<ModeCoefficients> forcing;
        if (source_ && t > 0.0) {
            const GaussRule& g = unit_gauss(spec_.time_nodes);
            for (std::size_t j = 0; j < g.size(); ++j) {
                taus.push_back(t * g.nodes[j]);
                tau_weights.push_back(t * g.weights[j]);
                forcing.push_back(project(*source_, basis_, spec_.project_nodes, taus.back()));
            }
        }

        for (std::size_t i = 0; i < count; ++i) {
            std::vector<double> c(nd);
            bool any = false;
            for (int r = 0; r < nd; ++r) {
                c[r] = data_[r].values[i];
                any = any || c[r] != 0.0;
            }
            bool forced = false;
            for (const auto& f : forcing) forced = forced || f.values[i] != 0.0;
            if (!any && !forced) continue;
            const double lam = basis_.eigenvalue(i);
            double value = 0.0;
            if (problem_.kind == ProblemKind::HeatProduct) {
                value = heat_mode(lam, c, t, taus, tau_weights, forcing, i);
            } else if (m == 1) {
                const double a = problem_.speeds[0];
                value = c[0] * eigen_symbol(EigenSymbol::WaveCos, lam, a, t) +
                        c[1] * eigen_symbol(EigenSymbol::WaveSin, lam, a, t);
                for (std::size_t j = 0; j < taus.size(); ++j) {
                    value += tau_weights[j] * eigen_symbol(EigenSymbol::WaveSin, lam, a, t - taus[j]) *
                             forcing[j].values[i];
                }
            } else {
                const auto& coeffs = characteristic_[i];
                if (any) value = integrate_linear_ode(coeffs, c, {}, {t}, spec_.ode_tolerance).front();
                if (forced) {
                    std::vector<double> impulse(2 * m, 0.0);
                    impulse.back() = 1.0;
                    std::vector<double> lags;
                    for (double tau : taus) lags.push_back(t - tau);
                    const auto y = integrate_linear_ode(coeffs, impulse, {}, lags, spec_.ode_tolerance);
                    for (std::size_t j = 0; j < taus.size(); ++j) value += tau_weights[j] * y[j] * forcing[j].values[i];
                }
            }
            amps[i] = value;
        }
        return amps;
    }

    double heat_mode(double lam, const std::vector<double>& c, double t, const std::vector<double>& taus,
                     const std::vector<double>& tau_weights, const std::vector<ModeCoefficients>& forcing,
                     std::size_t i) const {
        const int m = problem_.order;
        if (!problem_.heat_has_distinct_speeds()) {
            // (D + aλ)^m T = g
            const double s = problem_.speeds[0] * lam;
            double poly = 0.0;
            for (int k = 0; k < m; ++k) {
                double inner = 0.0, binom = 1.0;
                for (int r = k; r >= 0; --r) {
                    inner += binom * std::pow(s, k - r) * c[r];
                    binom = binom * r / (k - r + 1);
                }
                poly += std::pow(t, k) / factorial(k) * inner;
            }
            double value = std::exp(-s * t) * poly;
            for (std::size_t j = 0; j < taus.size(); ++j) {
                const double lag = t - taus[j];
                value += tau_weights[j] * std::pow(lag, m - 1) / factorial(m - 1) * std::exp(-s * lag) *
                         forcing[j].values[i];
            }
            return value;
        }
        // ∏(D - s_j) T = g with s_j = -a_j λ; Y = Σ_j e^{s_j t}/∏_{i≠j}(s_j - s_i).
        std::vector<double> s;
        for (double a : problem_.speeds) s.push_back(-a * lam);
        auto impulse = [&](double tt, int deriv) {
            double y = 0.0;
            for (std::size_t j = 0; j < s.size(); ++j) {
                double den = 1.0;
                for (std::size_t k = 0; k < s.size(); ++k) {
                    if (k != j) den *= s[j] - s[k];
                }
                y += std::pow(s[j], deriv) * std::exp(s[j] * tt) / den;
            }
            return y;
        };
        if (lam == 0.0) throw InvalidBox("zero eigenvalue in a Dirichlet box");
        const std::vector<double> beta = monic_product_coefficients(s);
        double value = 0.0;
        for (int k = 1; k <= m; ++k) {
            for (int r = 0; r < k; ++r) {
                if (c[r] != 0.0) value += beta[k] * impulse(t, k - 1 - r) * c[r];
            }
        }
        for (std::size_t j = 0; j < taus.size(); ++j) {
            value += tau_weights[j] * impulse(t - taus[j], 0) * forcing[j].values[i];
        }
        return value;
    }

    CauchyProblem problem_;
    EigenBasis basis_;
    IbvpSpec spec_;
    std::vector<ModeCoefficients> data_;
    std::optional<Expr> source_;
    std::vector<std::string> warnings_;
    std::vector<std::vector<double>> characteristic_;
    mutable std::mutex mutex_;
    mutable std::map<double, std::shared_ptr<const std::vector<double>>> cache_;
};

inline std::shared_ptr<const IbvpSolution> build_ibvp(const CauchyProblem& p, const EigenBasis& basis,
                                                      const IbvpSpec& spec = {}) {
    return std::make_shared<const IbvpSolution>(p, basis, spec);
}

inline SolutionEvaluator solve_ibvp(const CauchyProblem& p, const EigenBasis& basis, const IbvpSpec& spec = {}) {
    auto sol = build_ibvp(p, basis, spec);
    return SolutionEvaluator(p.dimension, [sol](const double* x, double t) { return (*sol)(x, t); });
}

}  // namespace waveforge
