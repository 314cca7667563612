#pragma once
/**
 * @file problem.hpp
 * @brief Cauchy problem description and the solution evaluator handle.
 */

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "waveforge/errors.hpp"
#include "waveforge/expr.hpp"

namespace waveforge {

enum class ProblemKind {
    WaveMultiple,        // (∂_t² - a²Δ)^m u = f
    WaveDistinctSpeeds,  // ∏_j (∂_t² - a_j²Δ) u = f
    HeatProduct,         // (∂_t - aΔ)^m u = f, or ∏_j (∂_t - a_jΔ) u = f
};

inline const char* kind_name(ProblemKind k) {
    switch (k) {
        case ProblemKind::WaveMultiple: return "wave-multiple";
        case ProblemKind::WaveDistinctSpeeds: return "wave-distinct";
        case ProblemKind::HeatProduct: return "heat-product";
    }
    return "?";
}

struct CauchyProblem {
    ProblemKind kind = ProblemKind::WaveMultiple;
    int dimension = 3;
    int order = 1;
    std::vector<double> speeds{1.0};
    std::optional<Expr> source;
    /// φ_0, φ_1, ...; missing trailing entries are zero.
    std::vector<Expr> data;

    bool is_wave() const noexcept { return kind != ProblemKind::HeatProduct; }

    /// Number of initial conditions the operator takes: 2m for wave kinds, m for heat.
    int data_count() const noexcept { return is_wave() ? 2 * order : order; }

    /// Heat problems with one speed use the equal-speed formula.
    bool heat_has_distinct_speeds() const noexcept { return speeds.size() > 1; }

    Expr datum(int r) const {
        if (r < static_cast<int>(data.size())) return data[r];
        return Expr::constant(0.0, dimension);
    }

    /// Checks what every solver needs; dimension limits are solver-specific.
    void validate() const {
        if (order < 1) throw InvalidOrder("order m must be at least 1");
        if (dimension < 1) throw UnsupportedDimension("dimension must be positive");
        if (static_cast<int>(data.size()) > data_count()) {
            throw DataCountMismatch(std::string(kind_name(kind)) + " of order " + std::to_string(order) +
                                    " takes " + std::to_string(data_count()) + " initial conditions, got " +
                                    std::to_string(data.size()));
        }
        for (std::size_t r = 0; r < data.size(); ++r) {
            if (data[r].dimension() > dimension) throw DimensionError("initial datum dimension exceeds n");
            if (data[r].uses_time()) {
                throw DimensionError("initial datum phi" + std::to_string(r) + " must not depend on t");
            }
        }
        if (source && source->dimension() > dimension) throw DimensionError("source dimension exceeds n");
        for (double a : speeds) {
            if (!(a > 0.0)) throw NonPositiveSpeed("speeds must be positive");
        }
        switch (kind) {
            case ProblemKind::WaveMultiple:
                if (speeds.size() != 1) throw DataCountMismatch("wave-multiple takes exactly one speed");
                break;
            case ProblemKind::WaveDistinctSpeeds:
                if (order < 2) throw InvalidOrder("distinct-speed problems need m >= 2");
                if (static_cast<int>(speeds.size()) != order) {
                    throw DataCountMismatch("distinct-speed problems take m speeds");
                }
                break;
            case ProblemKind::HeatProduct:
                if (speeds.size() != 1 && static_cast<int>(speeds.size()) != order) {
                    throw DataCountMismatch("heat-product takes one speed or m speeds");
                }
                if (speeds.size() > 1 && order < 2) throw InvalidOrder("distinct heat speeds need m >= 2");
                break;
        }
    }
};

/// Immutable handle to a constructed solution u(x, t). Copies share state;
/// concurrent evaluation is safe.
class SolutionEvaluator {
public:
    using Function = std::function<double(const double* x, double t)>;

    SolutionEvaluator(int dimension, Function fn)
        : dimension_(dimension), fn_(std::make_shared<const Function>(std::move(fn))) {}

    int dimension() const noexcept { return dimension_; }

    double operator()(std::span<const double> x, double t) const {
        if (static_cast<int>(x.size()) != dimension_) throw DimensionError("point dimension differs from problem");
        return (*fn_)(x.data(), t);
    }

    double operator()(const Point& p) const {
        if (!p.time) throw DimensionError("solution evaluation needs a time value");
        return (*this)(std::span<const double>(p.coords), *p.time);
    }

    /// Unchecked: `x` must hold dimension() values.
    double evaluate(const double* x, double t) const { return (*fn_)(x, t); }

private:
    int dimension_;
    std::shared_ptr<const Function> fn_;
};

}  // namespace waveforge
