// waveforge command-line tool: solve, verify, sum-series.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "waveforge/waveforge.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kConfigError = 2;
constexpr int kEvalError = 3;

int default_threads() {
    if (const char* env = std::getenv("WAVEFORGE_THREADS")) {
        try {
            const int v = std::stoi(env);
            if (v >= 1) return v;
        } catch (const std::exception&) {
        }
        std::cerr << "warning: ignoring WAVEFORGE_THREADS='" << env << "'\n";
    }
    return 1;
}

// Writes to `path`, or stdout for "-".
bool emit(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        std::cout.flush();
        return static_cast<bool>(std::cout);
    }
    std::ofstream out(path, std::ios::binary);
    out << text;
    return static_cast<bool>(out);
}

int cmd_solve(const std::string& path, std::optional<int> threads, bool dump) {
    waveforge::ProblemConfig cfg;
    std::optional<waveforge::BuiltSolver> solver;
    try {
        cfg = waveforge::load_config(path);
        if (dump) {
            std::cout << waveforge::dump_config(cfg);
            return kOk;
        }
        solver = waveforge::build_solver(cfg);
    } catch (const waveforge::Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    }
    for (const auto& w : solver->warnings) std::cerr << "warning: " << w << "\n";
    std::vector<double> values;
    try {
        values = waveforge::evaluate_grid(cfg, solver->evaluator, threads.value_or(default_threads()));
    } catch (const std::exception& e) {
        std::cerr << "evaluation error: " << e.what() << "\n";
        return kEvalError;
    }
    std::ostringstream csv;
    waveforge::write_csv(cfg, values, csv);
    if (!emit(cfg.output_path, csv.str())) {
        std::cerr << "error: cannot write '" << cfg.output_path << "'\n";
        return kEvalError;
    }
    return kOk;
}

int cmd_verify(const std::string& suite) {
    if (!waveforge::verify::is_suite(suite)) {
        std::cerr << "unknown suite '" << suite << "' (modes, heat, ibvp, residual, opcalc, determinism, all)\n";
        return kConfigError;
    }
    bool ok = true;
    for (const auto& c : waveforge::verify::run_suite(suite)) {
        for (const auto& k : c.checks) {
            std::printf("%s  [%d] %s: %s: %.3e (tol %.1e)\n", k.passed ? "PASS" : "FAIL", c.id, c.title.c_str(),
                        k.name.c_str(), k.measured, k.tolerance);
        }
        std::printf("%s  [%d] %s (%.1f s)\n", c.passed() ? "PASS" : "FAIL", c.id, c.title.c_str(), c.seconds);
        ok = ok && c.passed();
    }
    std::fflush(stdout);
    return ok ? kOk : kVerifyFailed;
}

struct SeriesArgs {
    std::string generator;
    std::string odd_generator;
    std::string coefficients;
    std::string odd_coefficients;
    double l = 3.141592653589793;
    std::string range = "-1, 1, 101";
    double z = -1e-3;
    std::optional<double> richardson;
    std::string out = "-";
};

int cmd_sum_series(const SeriesArgs& a) {
    waveforge::FourierSeriesSpec spec;
    waveforge::AxisRange range;
    try {
        spec.half_period = a.l;
        if (!a.generator.empty()) spec.cosine_generator = waveforge::parse(a.generator, 0);
        if (!a.odd_generator.empty()) spec.sine_generator = waveforge::parse(a.odd_generator, 0);
        if (!a.coefficients.empty()) spec.cosine_coefficients = waveforge::detail::parse_list("--coefficients", a.coefficients);
        if (!a.odd_coefficients.empty()) {
            spec.sine_coefficients = waveforge::detail::parse_list("--odd-coefficients", a.odd_coefficients);
        }
        range = waveforge::detail::parse_range("--x-range", a.range);
        if (!(a.l > 0.0)) throw waveforge::ConfigError("--l must be positive");
        if (a.richardson) {
            if (!(*a.richardson > 0.0)) throw waveforge::ConfigError("--richardson step must be positive");
        } else if (!(a.z < 0.0)) {
            throw waveforge::ConfigError("--z must be negative");
        }
    } catch (const waveforge::Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    }
    std::string csv = "x,f_z\n";
    char buf[96];
    try {
        for (int i = 0; i < range.count; ++i) {
            const double x = range.value(i);
            const double v = a.richardson ? waveforge::abel_poisson_limit(spec, x, *a.richardson)
                                          : waveforge::abel_poisson_sum(spec, x, a.z);
            std::snprintf(buf, sizeof buf, "%.16e,%.16e\n", x, v);
            csv += buf;
        }
    } catch (const std::exception& e) {
        std::cerr << "evaluation error: " << e.what() << "\n";
        return kEvalError;
    }
    if (!emit(a.out, csv)) {
        std::cerr << "error: cannot write '" << a.out << "'\n";
        return kEvalError;
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"waveforge: closed-form solutions of multiple wave and heat-type equations"};
    app.require_subcommand(1);

    auto* solve = app.add_subcommand("solve", "evaluate a configured problem on its grid and write CSV");
    std::string config_path;
    std::optional<int> threads;
    bool dump = false;
    solve->add_option("config", config_path, "problem configuration file")->required();
    solve->add_option("--threads", threads, "worker threads (default: WAVEFORGE_THREADS or 1)")
        ->check(CLI::PositiveNumber);
    solve->add_flag("--dump-config", dump, "print the canonical configuration and exit");

    auto* verify = app.add_subcommand("verify", "run an acceptance suite");
    std::string suite;
    verify->add_option("suite", suite, "modes, heat, ibvp, residual, opcalc, determinism or all")->required();

    auto* series = app.add_subcommand("sum-series", "Abel-Poisson sum of a Fourier series given by generators");
    SeriesArgs sa;
    series->add_option("--generator", sa.generator, "S+(t) for the cosine series, an expression in t");
    series->add_option("--odd-generator", sa.odd_generator, "S-(t) for the sine series, an expression in t");
    series->add_option("--coefficients", sa.coefficients, "explicit cosine coefficients a0, a1, ...");
    series->add_option("--odd-coefficients", sa.odd_coefficients, "explicit sine coefficients b0, b1, ...");
    series->add_option("--l", sa.l, "half-period l")->capture_default_str();
    series->add_option("--x-range", sa.range, "lo, hi, count")->capture_default_str();
    series->add_option("--z", sa.z, "Abel-Poisson parameter, z < 0")->capture_default_str();
    series->add_option("--richardson", sa.richardson, "extrapolate to z = 0 from -4e, -2e, -e");
    series->add_option("--out", sa.out, "output path, - for stdout")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    if (*solve) return cmd_solve(config_path, threads, dump);
    if (*verify) return cmd_verify(suite);
    return cmd_sum_series(sa);
}
