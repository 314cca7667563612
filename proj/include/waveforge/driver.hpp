#pragma once
/**
 * @file driver.hpp
 * @brief Config-to-CSV pipeline shared by the command-line tool and the tests.
 *
 * CSV layout: header `x1,...,xn,t,u`, one row per grid point with t outermost
 * and x1..xn nested inside it (xn varies fastest). Values are printed with
 * `%.16e` (17 significant digits), `.` decimal point, LF line endings.
 */

#include <algorithm>
#include <cstdio>
#include <exception>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "waveforge/config.hpp"
#include "waveforge/errors.hpp"
#include "waveforge/heat_solver.hpp"
#include "waveforge/ibvp.hpp"
#include "waveforge/problem.hpp"
#include "waveforge/wave_solver.hpp"

namespace waveforge {

struct BuiltSolver {
    SolutionEvaluator evaluator;
    std::vector<std::string> warnings;
};

/// Constructs the evaluator a configuration describes.
inline BuiltSolver build_solver(const ProblemConfig& cfg) {
    const CauchyProblem p = to_problem(cfg);
    if (cfg.box) {
        IbvpSpec spec;
        spec.project_nodes = cfg.project_nodes;
        spec.time_nodes = cfg.quadrature.time_nodes;
        auto sol = build_ibvp(p, build_basis(cfg.box_lengths, cfg.kmax), spec);
        BuiltSolver out{SolutionEvaluator(p.dimension, [sol](const double* x, double t) { return (*sol)(x, t); }),
                        sol->warnings()};
        return out;
    }
    switch (p.kind) {
        case ProblemKind::WaveMultiple: return {solve_multiple_wave(p, cfg.quadrature), {}};
        case ProblemKind::WaveDistinctSpeeds: return {solve_distinct_speeds(p, cfg.quadrature), {}};
        case ProblemKind::HeatProduct: {
            HeatSolveSpec spec;
            spec.propagator = cfg.heat;
            spec.time_nodes = cfg.quadrature.time_nodes;
            return {solve_heat_product(p, spec), {}};
        }
    }
    throw ConfigError("unsupported problem kind");
}

inline std::size_t grid_size(const ProblemConfig& cfg) {
    std::size_t total = static_cast<std::size_t>(cfg.time.count);
    for (const auto& a : cfg.axes) total *= static_cast<std::size_t>(a.count);
    return total;
}

/// Coordinates (x1..xn, t) of the flat grid index.
inline std::vector<double> grid_point(const ProblemConfig& cfg, std::size_t flat) {
    const int n = static_cast<int>(cfg.axes.size());
    std::vector<double> p(n + 1);
    for (int i = n - 1; i >= 0; --i) {
        const std::size_t c = static_cast<std::size_t>(cfg.axes[i].count);
        p[i] = cfg.axes[i].value(static_cast<int>(flat % c));
        flat /= c;
    }
    p[n] = cfg.time.value(static_cast<int>(flat));
    return p;
}

/// Evaluates the solution on the configured grid with `threads` workers.
/// The result is independent of the thread count.
inline std::vector<double> evaluate_grid(const ProblemConfig& cfg, const SolutionEvaluator& u, int threads) {
    const std::size_t total = grid_size(cfg);
    const int n = cfg.n;
    std::vector<double> values(total, 0.0);
    std::vector<std::exception_ptr> errors(total);
    threads = std::max(1, std::min<int>(threads, static_cast<int>(std::max<std::size_t>(total, 1))));
    // Contiguous blocks keep equal-time points together for the box solver's amplitude cache.
    auto work = [&](int id) {
        const std::size_t begin = total * id / threads, end = total * (id + 1) / threads;
        for (std::size_t i = begin; i < end; ++i) {
            try {
                const std::vector<double> pt = grid_point(cfg, i);
                values[i] = u.evaluate(pt.data(), pt[n]);
            } catch (...) {
                errors[i] = std::current_exception();
                return;
            }
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int id = 0; id < threads; ++id) pool.emplace_back(work, id);
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return values;
}

inline void write_csv(const ProblemConfig& cfg, const std::vector<double>& values, std::ostream& out) {
    const int n = cfg.n;
    for (int i = 1; i <= n; ++i) out << 'x' << i << ',';
    out << "t,u\n";
    char buf[64];
    for (std::size_t flat = 0; flat < values.size(); ++flat) {
        const std::vector<double> pt = grid_point(cfg, flat);
        std::string row;
        for (int i = 0; i <= n; ++i) {
            std::snprintf(buf, sizeof buf, "%.16e,", pt[i]);
            row += buf;
        }
        std::snprintf(buf, sizeof buf, "%.16e\n", values[flat]);
        row += buf;
        out << row;
    }
}

/// Full pipeline into a string.
inline std::string solve_to_csv(const ProblemConfig& cfg, int threads = 1) {
    const BuiltSolver s = build_solver(cfg);
    const std::vector<double> values = evaluate_grid(cfg, s.evaluator, threads);
    std::ostringstream out;
    write_csv(cfg, values, out);
    return out.str();
}

}  // namespace waveforge
