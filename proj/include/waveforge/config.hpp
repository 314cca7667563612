#pragma once
/**
 * @file config.hpp
 * @brief Problem configuration files.
 *
 * INI syntax: `[section]` headers, `key = value` lines, full-line comments
 * starting with `;` or `#`. Keys are case-sensitive; unknown sections or keys
 * and duplicates are errors.
 *
 *     [problem]    kind = wave-multiple | wave-distinct | heat-product
 *                  n = 3            m = 1            speeds = 1[, 2, ...]
 *     [data]       f = <expr>       phi0 = <expr>    phi1 = <expr> ...
 *     [domain]     type = free | box
 *                  x1 = lo, hi, count   (one line per coordinate)
 *                  t = lo, hi, count
 *                  box = L1[, L2, L3]   kmax = 24          (type = box)
 *     [quadrature] time_nodes  radial_nodes  sphere_degree
 *                  heat_trunc  heat_nodes    project_nodes
 *     [output]     path = - | file.csv   format = csv
 *
 * Missing initial data default to zero; a missing source means f = 0.
 */

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "waveforge/errors.hpp"
#include "waveforge/expr.hpp"
#include "waveforge/heat_solver.hpp"
#include "waveforge/problem.hpp"
#include "waveforge/quadrature.hpp"

namespace waveforge {

struct AxisRange {
    double lo = 0.0;
    double hi = 0.0;
    int count = 1;

    double value(int i) const { return count == 1 ? lo : lo + (hi - lo) * i / (count - 1); }
};

struct ProblemConfig {
    ProblemKind kind = ProblemKind::WaveMultiple;
    int n = 3;
    int m = 1;
    std::vector<double> speeds{1.0};
    std::optional<std::string> source;
    std::vector<std::optional<std::string>> data;  // phi0, phi1, ...

    bool box = false;
    std::vector<AxisRange> axes;  // x1..xn
    AxisRange time;
    std::vector<double> box_lengths;
    int kmax = 24;

    QuadratureSpec quadrature;
    HeatPropagatorSpec heat;
    int project_nodes = 0;

    std::string output_path = "-";
    std::string format = "csv";
};

namespace detail {

inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        out.push_back(b == std::string::npos ? "" : item.substr(b, e - b + 1));
    }
    return out;
}

inline double parse_double(const std::string& where, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ConfigError(where + ": '" + text + "' is not a number");
    }
    if (used != text.size() || !std::isfinite(v)) throw ConfigError(where + ": '" + text + "' is not a number");
    return v;
}

inline int parse_int(const std::string& where, const std::string& text) {
    const double v = parse_double(where, text);
    if (v != std::floor(v) || std::fabs(v) > 1e9) throw ConfigError(where + ": '" + text + "' is not an integer");
    return static_cast<int>(v);
}

inline std::vector<double> parse_list(const std::string& where, const std::string& text) {
    std::vector<double> out;
    for (const auto& item : split_list(text)) out.push_back(parse_double(where, item));
    if (out.empty()) throw ConfigError(where + ": empty list");
    return out;
}

inline AxisRange parse_range(const std::string& where, const std::string& text) {
    const auto parts = split_list(text);
    if (parts.size() != 3) throw ConfigError(where + ": expected 'lo, hi, count'");
    AxisRange r{parse_double(where, parts[0]), parse_double(where, parts[1]), parse_int(where, parts[2])};
    if (r.count < 1) throw ConfigError(where + ": count must be at least 1");
    if (r.hi < r.lo) throw ConfigError(where + ": hi must not be below lo");
    return r;
}

inline std::string range_text(const AxisRange& r) {
    return format_number(r.lo) + ", " + format_number(r.hi) + ", " + std::to_string(r.count);
}

inline Expr parse_field(const std::string& where, const std::string& text, int n) {
    try {
        return parse(text, n);
    } catch (const SyntaxError& e) {
        throw ConfigError(where + ": " + e.what());
    } catch (const UnknownSymbol& e) {
        throw ConfigError(where + ": " + e.what());
    } catch (const DimensionError& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

}  // namespace detail

/// Builds the Cauchy problem; expression errors become ConfigError with the key name.
inline CauchyProblem to_problem(const ProblemConfig& cfg) {
    CauchyProblem p;
    p.kind = cfg.kind;
    p.dimension = cfg.n;
    p.order = cfg.m;
    p.speeds = cfg.speeds;
    if (cfg.source) p.source = detail::parse_field("[data] f", *cfg.source, cfg.n);
    for (std::size_t r = 0; r < cfg.data.size(); ++r) {
        const std::string key = "[data] phi" + std::to_string(r);
        p.data.push_back(cfg.data[r] ? detail::parse_field(key, *cfg.data[r], cfg.n) : Expr::constant(0.0, cfg.n));
        if (p.data.back().uses_time()) throw ConfigError(key + ": initial data must not depend on t");
    }
    try {
        p.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(std::string("[problem] ") + e.what());
    }
    return p;
}

inline ProblemConfig parse_config(std::istream& in) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("config line " + std::to_string(e.line()) + ": " + e.message());
    }

    const std::map<std::string, std::set<std::string>> allowed = {
        {"problem", {"kind", "n", "m", "speeds"}},
        {"data", {"f"}},
        {"domain", {"type", "t", "box", "kmax"}},
        {"quadrature", {"time_nodes", "radial_nodes", "sphere_degree", "heat_trunc", "heat_nodes", "project_nodes"}},
        {"output", {"path", "format"}},
    };
    auto is_indexed = [](const std::string& key, const std::string& prefix) {
        return key.size() > prefix.size() && key.compare(0, prefix.size(), prefix) == 0 &&
               key.find_first_not_of("0123456789", prefix.size()) == std::string::npos &&
               !(key.size() > prefix.size() + 1 && key[prefix.size()] == '0');
    };
    for (const auto& [section, body] : tree) {
        if (!body.data().empty() && body.empty()) throw ConfigError("key '" + section + "' outside any section");
        const auto it = allowed.find(section);
        if (it == allowed.end()) throw ConfigError("unknown section [" + section + "]");
        for (const auto& [key, value] : body) {
            const bool ok = it->second.count(key) || (section == "data" && is_indexed(key, "phi")) ||
                            (section == "domain" && is_indexed(key, "x"));
            if (!ok) throw ConfigError("unknown key '" + key + "' in [" + section + "]");
        }
    }
    auto get = [&](const std::string& section, const std::string& key) -> std::optional<std::string> {
        const auto s = tree.get_child_optional(section);
        if (!s) return std::nullopt;
        const auto v = s->get_child_optional(pt::ptree::path_type(key, '\0'));
        if (!v) return std::nullopt;
        return v->data();
    };
    auto require = [&](const std::string& section, const std::string& key) {
        const auto v = get(section, key);
        if (!v) throw ConfigError("missing [" + section + "] " + key);
        return *v;
    };

    ProblemConfig cfg;
    const std::string kind = require("problem", "kind");
    if (kind == "wave-multiple") {
        cfg.kind = ProblemKind::WaveMultiple;
    } else if (kind == "wave-distinct") {
        cfg.kind = ProblemKind::WaveDistinctSpeeds;
    } else if (kind == "heat-product") {
        cfg.kind = ProblemKind::HeatProduct;
    } else {
        throw ConfigError("[problem] kind: unknown kind '" + kind + "'");
    }
    cfg.n = detail::parse_int("[problem] n", require("problem", "n"));
    cfg.m = detail::parse_int("[problem] m", require("problem", "m"));
    if (cfg.n < 1 || cfg.n > 5) throw ConfigError("[problem] n: must be between 1 and 5");
    if (cfg.m < 1 || cfg.m > 8) throw ConfigError("[problem] m: must be between 1 and 8");
    if (auto s = get("problem", "speeds")) cfg.speeds = detail::parse_list("[problem] speeds", *s);

    cfg.source = get("data", "f");
    const int wanted = cfg.kind == ProblemKind::HeatProduct ? cfg.m : 2 * cfg.m;
    if (const auto d = tree.get_child_optional("data")) {
        for (const auto& [key, value] : *d) {
            if (key == "f") continue;
            const int r = detail::parse_int("[data] " + key, key.substr(3));
            if (r >= wanted) {
                throw ConfigError("[data] " + key + ": order " + std::to_string(cfg.m) + " takes phi0..phi" +
                                  std::to_string(wanted - 1));
            }
            if (static_cast<int>(cfg.data.size()) <= r) cfg.data.resize(r + 1);
            cfg.data[r] = value.data();
        }
    }

    const std::string type = get("domain", "type").value_or("free");
    if (type != "free" && type != "box") throw ConfigError("[domain] type: expected 'free' or 'box'");
    cfg.box = type == "box";
    for (int i = 1; i <= cfg.n; ++i) {
        const std::string key = "x" + std::to_string(i);
        cfg.axes.push_back(detail::parse_range("[domain] " + key, require("domain", key)));
    }
    if (const auto d = tree.get_child_optional("domain")) {
        for (const auto& [key, value] : *d) {
            if (key.size() < 2 || key[0] != 'x') continue;
            const int i = detail::parse_int("[domain] " + key, key.substr(1));
            if (i < 1 || i > cfg.n) {
                throw ConfigError("[domain] " + key + ": no such coordinate in dimension " + std::to_string(cfg.n));
            }
        }
    }
    cfg.time = detail::parse_range("[domain] t", require("domain", "t"));
    if (cfg.time.lo < 0.0) throw ConfigError("[domain] t: times must be non-negative");
    if (cfg.box) {
        cfg.box_lengths = detail::parse_list("[domain] box", require("domain", "box"));
        if (static_cast<int>(cfg.box_lengths.size()) != cfg.n) {
            throw ConfigError("[domain] box: needs " + std::to_string(cfg.n) + " side lengths");
        }
        if (auto k = get("domain", "kmax")) cfg.kmax = detail::parse_int("[domain] kmax", *k);
    } else if (get("domain", "box") || get("domain", "kmax")) {
        throw ConfigError("[domain] box/kmax require type = box");
    }

    auto quad_int = [&](const std::string& key, int& slot) {
        if (auto v = get("quadrature", key)) slot = detail::parse_int("[quadrature] " + key, *v);
    };
    quad_int("time_nodes", cfg.quadrature.time_nodes);
    quad_int("radial_nodes", cfg.quadrature.radial_nodes);
    quad_int("sphere_degree", cfg.quadrature.sphere_degree);
    quad_int("heat_nodes", cfg.heat.nodes);
    quad_int("project_nodes", cfg.project_nodes);
    if (auto v = get("quadrature", "heat_trunc")) cfg.heat.truncation = detail::parse_double("[quadrature] heat_trunc", *v);

    cfg.output_path = get("output", "path").value_or("-");
    cfg.format = get("output", "format").value_or("csv");
    if (cfg.format != "csv") throw ConfigError("[output] format: only 'csv' is supported");

    try {
        cfg.quadrature.validate();
        cfg.heat.validate();
    } catch (const Error& e) {
        throw ConfigError(std::string("[quadrature] ") + e.what());
    }
    if (cfg.project_nodes < 0) throw ConfigError("[quadrature] project_nodes: must be non-negative");
    to_problem(cfg);  // surfaces expression and problem errors now
    return cfg;
}

inline ProblemConfig parse_config_text(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

inline ProblemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    return parse_config(in);
}

/// Canonical text of a configuration; parse_config(dump_config(c)) is equivalent to c.
inline std::string dump_config(const ProblemConfig& cfg) {
    using detail::format_number;
    std::ostringstream out;
    out << "[problem]\n";
    out << "kind = " << kind_name(cfg.kind) << "\n";
    out << "n = " << cfg.n << "\n";
    out << "m = " << cfg.m << "\n";
    out << "speeds = ";
    for (std::size_t i = 0; i < cfg.speeds.size(); ++i) out << (i ? ", " : "") << format_number(cfg.speeds[i]);
    out << "\n\n[data]\n";
    if (cfg.source) out << "f = " << *cfg.source << "\n";
    for (std::size_t r = 0; r < cfg.data.size(); ++r) {
        if (cfg.data[r]) out << "phi" << r << " = " << *cfg.data[r] << "\n";
    }
    out << "\n[domain]\n";
    out << "type = " << (cfg.box ? "box" : "free") << "\n";
    for (std::size_t i = 0; i < cfg.axes.size(); ++i) out << "x" << i + 1 << " = " << detail::range_text(cfg.axes[i]) << "\n";
    out << "t = " << detail::range_text(cfg.time) << "\n";
    if (cfg.box) {
        out << "box = ";
        for (std::size_t i = 0; i < cfg.box_lengths.size(); ++i) out << (i ? ", " : "") << format_number(cfg.box_lengths[i]);
        out << "\nkmax = " << cfg.kmax << "\n";
    }
    out << "\n[quadrature]\n";
    out << "time_nodes = " << cfg.quadrature.time_nodes << "\n";
    out << "radial_nodes = " << cfg.quadrature.radial_nodes << "\n";
    out << "sphere_degree = " << cfg.quadrature.sphere_degree << "\n";
    out << "heat_trunc = " << format_number(cfg.heat.truncation) << "\n";
    out << "heat_nodes = " << cfg.heat.nodes << "\n";
    out << "project_nodes = " << cfg.project_nodes << "\n";
    out << "\n[output]\n";
    out << "path = " << cfg.output_path << "\n";
    out << "format = " << cfg.format << "\n";
    return out.str();
}

}  // namespace waveforge
