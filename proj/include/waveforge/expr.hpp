#pragma once
/**
 * @file expr.hpp
 * @brief Scalar expressions over space-time variables (x1..xn, t).
 *
 * Expressions are immutable trees shared by pointer. They evaluate at real
 * points (with domain checking) and at complex points (principal branches),
 * and differentiate symbolically with light constant folding so repeated
 * Laplacians stay compact.
 *
 * Grammar (whitespace-insensitive):
 *
 *     expr    = term { ("+" | "-") term } ;
 *     term    = unary { ("*" | "/") unary } ;
 *     unary   = "-" unary | "+" unary | power ;
 *     power   = primary [ "^" unary ] ;            (right-associative)
 *     primary = number | "pi" | variable | call | "(" expr ")" ;
 *     call    = name "(" expr ")" ;
 *     name    = "sin" | "cos" | "tan" | "exp" | "log" | "sqrt"
 *             | "sinh" | "cosh" | "atan" | "abs" ;
 *     variable = "x" digit { digit } | "t" ;
 *     number  = digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ]
 *             | "." digits [ exponent ] ;
 *
 * `-x^2` parses as `-(x^2)`. There is no implicit multiplication.
 *
 * Complex branch cuts: log and sqrt cut along the negative real axis, atan
 * along the imaginary axis outside [-i, i]. A real base raised to a
 * non-integer power uses exp(b*log(a)).
 */

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "waveforge/errors.hpp"

namespace waveforge {

/// A real space-time point. `coords.size()` must equal the expression dimension.
struct Point {
    std::vector<double> coords;
    std::optional<double> time;
};

struct ComplexPoint {
    std::vector<std::complex<double>> coords;
    std::optional<std::complex<double>> time;
};

enum class Op : std::uint8_t {
    Constant,
    Variable,
    Time,
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
    Atan,
    Abs,
};

/// Differentiation variable: a coordinate x_i (1-based) or time.
struct Var {
    int index = 0;  // 0 means t
    static constexpr Var x(int i) { return Var{i}; }
    static constexpr Var t() { return Var{0}; }
    constexpr bool is_time() const { return index == 0; }
};

class Expr {
public:
    struct Node;
    using NodePtr = std::shared_ptr<const Node>;
    struct Node {
        Op op = Op::Constant;
        double value = 0.0;  // Constant
        int index = 0;       // Variable (1-based)
        NodePtr lhs;
        NodePtr rhs;
    };

    Expr() : Expr(constant(0.0)) {}

    static Expr constant(double value, int dimension = 0) {
        auto n = std::make_shared<Node>();
        n->op = Op::Constant;
        n->value = value;
        return Expr(std::move(n), dimension);
    }
    static Expr variable(int index, int dimension) {
        if (index < 1 || index > dimension) {
            throw DimensionError("variable x" + std::to_string(index) +
                                 " exceeds dimension " + std::to_string(dimension));
        }
        auto n = std::make_shared<Node>();
        n->op = Op::Variable;
        n->index = index;
        return Expr(std::move(n), dimension);
    }
    static Expr time(int dimension = 0) {
        auto n = std::make_shared<Node>();
        n->op = Op::Time;
        return Expr(std::move(n), dimension);
    }

    int dimension() const noexcept { return dimension_; }
    const Node& root() const noexcept { return *root_; }
    const NodePtr& root_ptr() const noexcept { return root_; }

    bool is_constant() const noexcept { return root_->op == Op::Constant; }
    bool is_zero() const noexcept { return is_constant() && root_->value == 0.0; }
    double constant_value() const noexcept { return root_->value; }

    bool depends_on(Var v) const { return depends(*root_, v); }
    bool uses_time() const { return depends(*root_, Var::t()); }

    /// Same tree with a (larger) declared dimension.
    Expr with_dimension(int dimension) const {
        if (dimension < max_index(*root_)) {
            throw DimensionError("cannot shrink expression dimension below its highest variable");
        }
        return Expr(root_, dimension);
    }

    /// Unchecked fast path: `x` must hold at least dimension() values.
    double evaluate(const double* x, double t) const {
        const double v = eval_node(*root_, x, t);
        if (!std::isfinite(v)) throw DomainError("non-finite result");
        return v;
    }
    double evaluate(std::span<const double> x, double t) const {
        check_size(x.size());
        return evaluate(x.data(), t);
    }
    std::complex<double> evaluate(std::span<const std::complex<double>> x,
                                  std::complex<double> t) const {
        check_size(x.size());
        const auto v = eval_node(*root_, x.data(), t);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw DomainError("non-finite result");
        }
        return v;
    }

    std::string to_string() const {
        std::string out;
        print(*root_, 0, out);
        return out;
    }

    // -- construction with light simplification --------------------------

    static Expr apply(Op fn, const Expr& arg) { return Expr(make_unary(fn, arg.root_), arg.dimension_); }

    friend Expr operator+(const Expr& a, const Expr& b) { return Expr(make_add(a.root_, b.root_), dim(a, b)); }
    friend Expr operator-(const Expr& a, const Expr& b) { return Expr(make_sub(a.root_, b.root_), dim(a, b)); }
    friend Expr operator*(const Expr& a, const Expr& b) { return Expr(make_mul(a.root_, b.root_), dim(a, b)); }
    friend Expr operator/(const Expr& a, const Expr& b) { return Expr(make_div(a.root_, b.root_), dim(a, b)); }
    friend Expr operator-(const Expr& a) { return Expr(make_neg(a.root_), a.dimension_); }
    friend Expr pow(const Expr& a, const Expr& b) { return Expr(make_pow(a.root_, b.root_), dim(a, b)); }
    friend Expr operator*(double c, const Expr& b) { return constant(c) * b; }
    friend Expr operator+(const Expr& a, double c) { return a + constant(c); }

    friend Expr differentiate(const Expr& e, Var v);

private:
    Expr(NodePtr root, int dimension) : root_(std::move(root)), dimension_(dimension) {}

    static int dim(const Expr& a, const Expr& b) { return a.dimension_ > b.dimension_ ? a.dimension_ : b.dimension_; }

    void check_size(std::size_t n) const {
        if (n != static_cast<std::size_t>(dimension_)) {
            throw DimensionError("point has " + std::to_string(n) + " coordinates, expression expects " +
                                 std::to_string(dimension_));
        }
    }

    static int max_index(const Node& n) {
        int m = n.op == Op::Variable ? n.index : 0;
        if (n.lhs) m = std::max(m, max_index(*n.lhs));
        if (n.rhs) m = std::max(m, max_index(*n.rhs));
        return m;
    }

    static bool depends(const Node& n, Var v) {
        switch (n.op) {
            case Op::Constant: return false;
            case Op::Variable: return !v.is_time() && n.index == v.index;
            case Op::Time: return v.is_time();
            default:
                return (n.lhs && depends(*n.lhs, v)) || (n.rhs && depends(*n.rhs, v));
        }
    }

    // -- evaluation ------------------------------------------------------

    static bool integer_exponent(const Node& n, int& k) {
        if (n.op != Op::Constant) return false;
        const double v = n.value;
        if (v != std::floor(v) || std::fabs(v) > 64.0) return false;
        k = static_cast<int>(v);
        return true;
    }

    template <class T>
    static T int_power(T base, int k) {
        const bool invert = k < 0;
        unsigned e = static_cast<unsigned>(invert ? -k : k);
        T result(1.0);
        while (e) {
            if (e & 1U) result *= base;
            base *= base;
            e >>= 1U;
        }
        if (invert) {
            if (result == T(0.0)) throw DomainError("zero raised to a negative power");
            result = T(1.0) / result;
        }
        return result;
    }

    static double eval_node(const Node& n, const double* x, double t) {
        switch (n.op) {
            case Op::Constant: return n.value;
            case Op::Variable: return x[n.index - 1];
            case Op::Time: return t;
            case Op::Neg: return -eval_node(*n.lhs, x, t);
            case Op::Add: return eval_node(*n.lhs, x, t) + eval_node(*n.rhs, x, t);
            case Op::Sub: return eval_node(*n.lhs, x, t) - eval_node(*n.rhs, x, t);
            case Op::Mul: return eval_node(*n.lhs, x, t) * eval_node(*n.rhs, x, t);
            case Op::Div: {
                const double a = eval_node(*n.lhs, x, t);
                const double b = eval_node(*n.rhs, x, t);
                if (b == 0.0) throw DomainError("division by zero");
                return a / b;
            }
            case Op::Pow: {
                const double a = eval_node(*n.lhs, x, t);
                int k = 0;
                if (integer_exponent(*n.rhs, k)) return int_power(a, k);
                const double b = eval_node(*n.rhs, x, t);
                if (a < 0.0 && b != std::floor(b)) {
                    throw DomainError("negative base with non-integer exponent");
                }
                if (a == 0.0 && b < 0.0) throw DomainError("zero raised to a negative power");
                return std::pow(a, b);
            }
            case Op::Sin: return std::sin(eval_node(*n.lhs, x, t));
            case Op::Cos: return std::cos(eval_node(*n.lhs, x, t));
            case Op::Tan: return std::tan(eval_node(*n.lhs, x, t));
            case Op::Exp: return std::exp(eval_node(*n.lhs, x, t));
            case Op::Log: {
                const double a = eval_node(*n.lhs, x, t);
                if (a <= 0.0) throw DomainError("log of non-positive value");
                return std::log(a);
            }
            case Op::Sqrt: {
                const double a = eval_node(*n.lhs, x, t);
                if (a < 0.0) throw DomainError("sqrt of negative value");
                return std::sqrt(a);
            }
            case Op::Sinh: return std::sinh(eval_node(*n.lhs, x, t));
            case Op::Cosh: return std::cosh(eval_node(*n.lhs, x, t));
            case Op::Atan: return std::atan(eval_node(*n.lhs, x, t));
            case Op::Abs: return std::fabs(eval_node(*n.lhs, x, t));
        }
        return 0.0;
    }

    using cplx = std::complex<double>;

    static cplx eval_node(const Node& n, const cplx* x, cplx t) {
        // Real-axis arguments go through the real primitives so both modes agree bit-for-bit.
        auto real_arg = [](cplx z) { return z.imag() == 0.0; };
        switch (n.op) {
            case Op::Constant: return {n.value, 0.0};
            case Op::Variable: return x[n.index - 1];
            case Op::Time: return t;
            case Op::Neg: return -eval_node(*n.lhs, x, t);
            case Op::Add: return eval_node(*n.lhs, x, t) + eval_node(*n.rhs, x, t);
            case Op::Sub: return eval_node(*n.lhs, x, t) - eval_node(*n.rhs, x, t);
            case Op::Mul: {
                const cplx a = eval_node(*n.lhs, x, t);
                const cplx b = eval_node(*n.rhs, x, t);
                if (real_arg(a) && real_arg(b)) return {a.real() * b.real(), 0.0};
                return a * b;
            }
            case Op::Div: {
                const cplx a = eval_node(*n.lhs, x, t);
                const cplx b = eval_node(*n.rhs, x, t);
                if (b == cplx(0.0)) throw DomainError("division by zero");
                if (real_arg(a) && real_arg(b)) return {a.real() / b.real(), 0.0};
                return a / b;
            }
            case Op::Pow: {
                const cplx a = eval_node(*n.lhs, x, t);
                int k = 0;
                if (integer_exponent(*n.rhs, k)) {
                    if (real_arg(a)) return {int_power(a.real(), k), 0.0};
                    return int_power(a, k);
                }
                const cplx b = eval_node(*n.rhs, x, t);
                if (a == cplx(0.0)) {
                    if (b.real() > 0.0) return {0.0, 0.0};
                    throw DomainError("zero raised to a non-positive power");
                }
                if (real_arg(a) && real_arg(b) && a.real() > 0.0) return {std::pow(a.real(), b.real()), 0.0};
                return std::exp(b * std::log(a));
            }
            case Op::Sin: {
                const cplx a = eval_node(*n.lhs, x, t);
                return real_arg(a) ? cplx(std::sin(a.real()), 0.0) : std::sin(a);
            }
            case Op::Cos: {
                const cplx a = eval_node(*n.lhs, x, t);
                return real_arg(a) ? cplx(std::cos(a.real()), 0.0) : std::cos(a);
            }
            case Op::Tan: {
                const cplx a = eval_node(*n.lhs, x, t);
                return real_arg(a) ? cplx(std::tan(a.real()), 0.0) : std::tan(a);
            }
            case Op::Exp: {
                const cplx a = eval_node(*n.lhs, x, t);
                return real_arg(a) ? cplx(std::exp(a.real()), 0.0) : std::exp(a);
            }
            case Op::Log: {
                const cplx a = eval_node(*n.lhs, x, t);
                if (a == cplx(0.0)) throw DomainError("log of zero");
                if (real_arg(a) && a.real() > 0.0) return {std::log(a.real()), 0.0};
                return std::log(a);
            }
            case Op::Sqrt: {
                const cplx a = eval_node(*n.lhs, x, t);
                if (real_arg(a) && a.real() >= 0.0) return {std::sqrt(a.real()), 0.0};
                return std::sqrt(a);
            }
            case Op::Sinh: {
                const cplx a = eval_node(*n.lhs, x, t);
                return real_arg(a) ? cplx(std::sinh(a.real()), 0.0) : std::sinh(a);
            }
            case Op::Cosh: {
                const cplx a = eval_node(*n.lhs, x, t);
                return real_arg(a) ? cplx(std::cosh(a.real()), 0.0) : std::cosh(a);
            }
            case Op::Atan: {
                const cplx a = eval_node(*n.lhs, x, t);
                if (real_arg(a)) return {std::atan(a.real()), 0.0};
                if (a.real() == 0.0 && std::fabs(a.imag()) == 1.0) throw DomainError("atan branch point");
                return std::atan(a);
            }
            case Op::Abs: return {std::abs(eval_node(*n.lhs, x, t)), 0.0};
        }
        return {};
    }

    // -- printing --------------------------------------------------------

    static const char* function_name(Op op) {
        switch (op) {
            case Op::Sin: return "sin";
            case Op::Cos: return "cos";
            case Op::Tan: return "tan";
            case Op::Exp: return "exp";
            case Op::Log: return "log";
            case Op::Sqrt: return "sqrt";
            case Op::Sinh: return "sinh";
            case Op::Cosh: return "cosh";
            case Op::Atan: return "atan";
            case Op::Abs: return "abs";
            default: return nullptr;
        }
    }

    static int precedence(const Node& n) {
        switch (n.op) {
            case Op::Add:
            case Op::Sub: return 1;
            case Op::Mul:
            case Op::Div: return 2;
            case Op::Neg: return 3;
            case Op::Pow: return 4;
            case Op::Constant: return std::signbit(n.value) ? 3 : 5;
            default: return 5;
        }
    }

    static void print(const Node& n, int required, std::string& out) {
        const bool wrap = precedence(n) < required;
        if (wrap) out += '(';
        switch (n.op) {
            case Op::Constant: {
                char buf[40];
                std::snprintf(buf, sizeof buf, "%.17g", std::fabs(n.value));
                if (std::signbit(n.value)) out += '-';
                out += buf;
                break;
            }
            case Op::Variable: out += "x" + std::to_string(n.index); break;
            case Op::Time: out += 't'; break;
            case Op::Neg:
                out += '-';
                print(*n.lhs, 3, out);
                break;
            case Op::Add:
            case Op::Sub:
                print(*n.lhs, 1, out);
                out += n.op == Op::Add ? " + " : " - ";
                print(*n.rhs, 2, out);
                break;
            case Op::Mul:
            case Op::Div:
                print(*n.lhs, 2, out);
                out += n.op == Op::Mul ? "*" : "/";
                print(*n.rhs, 3, out);
                break;
            case Op::Pow:
                print(*n.lhs, 5, out);
                out += '^';
                print(*n.rhs, 3, out);
                break;
            default:
                out += function_name(n.op);
                out += '(';
                print(*n.lhs, 0, out);
                out += ')';
                break;
        }
        if (wrap) out += ')';
    }

    // -- simplifying node builders ----------------------------------------

    static NodePtr make_const(double v) {
        auto n = std::make_shared<Node>();
        n->op = Op::Constant;
        n->value = v;
        return n;
    }
    static NodePtr make_node(Op op, NodePtr a, NodePtr b = nullptr) {
        auto n = std::make_shared<Node>();
        n->op = op;
        n->lhs = std::move(a);
        n->rhs = std::move(b);
        return n;
    }
    static bool is_const(const NodePtr& n) { return n->op == Op::Constant; }
    static bool is_const(const NodePtr& n, double v) { return n->op == Op::Constant && n->value == v; }

    static bool same(const NodePtr& a, const NodePtr& b) {
        if (a == b) return true;
        if (a->op != b->op) return false;
        switch (a->op) {
            case Op::Constant: return a->value == b->value;
            case Op::Variable: return a->index == b->index;
            case Op::Time: return true;
            default:
                if (!same(a->lhs, b->lhs)) return false;
                if (a->rhs || b->rhs) return a->rhs && b->rhs && same(a->rhs, b->rhs);
                return true;
        }
    }

    // Splits n into (c, rest) with n == c*rest.
    static std::pair<double, NodePtr> split_coefficient(const NodePtr& n) {
        if (n->op == Op::Mul && is_const(n->lhs)) return {n->lhs->value, n->rhs};
        if (n->op == Op::Neg) {
            auto [c, r] = split_coefficient(n->lhs);
            return {-c, r};
        }
        return {1.0, n};
    }

    static std::optional<double> try_fold(const NodePtr& n) {
        try {
            const double v = eval_node(*n, nullptr, 0.0);
            if (std::isfinite(v)) return v;
        } catch (const DomainError&) {
        }
        return std::nullopt;
    }

    static NodePtr make_unary(Op fn, const NodePtr& a) {
        if (is_const(a)) {
            if (const auto v = try_fold(make_node(fn, a))) return make_const(*v);
        }
        return make_node(fn, a);
    }

    static NodePtr make_neg(const NodePtr& a) {
        if (is_const(a)) return make_const(-a->value);
        if (a->op == Op::Neg) return a->lhs;
        if (a->op == Op::Mul && is_const(a->lhs)) return make_mul(make_const(-a->lhs->value), a->rhs);
        return make_node(Op::Neg, a);
    }

    static NodePtr make_add(const NodePtr& a, const NodePtr& b) {
        if (is_const(a) && is_const(b)) return make_const(a->value + b->value);
        if (is_const(a, 0.0)) return b;
        if (is_const(b, 0.0)) return a;
        if (b->op == Op::Neg) return make_sub(a, b->lhs);
        if (auto merged = collect_sum(a, b, 1.0)) return merged;
        return make_node(Op::Add, a, b);
    }

    static NodePtr make_sub(const NodePtr& a, const NodePtr& b) {
        if (is_const(a) && is_const(b)) return make_const(a->value - b->value);
        if (is_const(b, 0.0)) return a;
        if (is_const(a, 0.0)) return make_neg(b);
        if (b->op == Op::Neg) return make_add(a, b->lhs);
        if (auto merged = collect_sum(a, b, -1.0)) return merged;
        return make_node(Op::Sub, a, b);
    }

    struct Term {
        double coef;
        NodePtr rest;  // nullptr for the constant term
    };

    static void flatten_sum(const NodePtr& n, double sign, std::vector<Term>& out) {
        switch (n->op) {
            case Op::Add:
                flatten_sum(n->lhs, sign, out);
                flatten_sum(n->rhs, sign, out);
                return;
            case Op::Sub:
                flatten_sum(n->lhs, sign, out);
                flatten_sum(n->rhs, -sign, out);
                return;
            case Op::Neg: flatten_sum(n->lhs, -sign, out); return;
            case Op::Constant: out.push_back({sign * n->value, nullptr}); return;
            default: {
                auto [c, r] = split_coefficient(n);
                out.push_back({sign * c, r});
            }
        }
    }

    // a + sign*b with like terms combined; nullptr when nothing combines.
    static NodePtr collect_sum(const NodePtr& a, const NodePtr& b, double sign) {
        std::vector<Term> terms;
        flatten_sum(a, 1.0, terms);
        flatten_sum(b, sign, terms);
        std::vector<Term> merged;
        for (const Term& t : terms) {
            auto it = std::find_if(merged.begin(), merged.end(), [&](const Term& m) {
                return (!m.rest && !t.rest) || (m.rest && t.rest && same(m.rest, t.rest));
            });
            if (it == merged.end()) {
                merged.push_back(t);
            } else {
                it->coef += t.coef;
            }
        }
        if (merged.size() == terms.size()) return nullptr;
        NodePtr acc;
        for (const Term& t : merged) {
            if (t.coef == 0.0) continue;
            const double mag = acc ? std::fabs(t.coef) : t.coef;
            NodePtr piece = !t.rest ? make_const(mag) : mag == 1.0 ? t.rest : make_mul(make_const(mag), t.rest);
            if (!acc) {
                acc = piece;
            } else {
                acc = make_node(t.coef < 0.0 ? Op::Sub : Op::Add, acc, piece);
            }
        }
        return acc ? acc : make_const(0.0);
    }

    static NodePtr make_mul(const NodePtr& a, const NodePtr& b) {
        if (is_const(a) && is_const(b)) return make_const(a->value * b->value);
        if (is_const(b)) return make_mul(b, a);  // constants to the left
        if (is_const(a)) {
            const double c = a->value;
            if (c == 0.0) return make_const(0.0);
            if (c == 1.0) return b;
            if (c == -1.0) return make_neg(b);
            if (b->op == Op::Mul && is_const(b->lhs)) return make_mul(make_const(c * b->lhs->value), b->rhs);
            if (b->op == Op::Neg) return make_mul(make_const(-c), b->lhs);
            return make_node(Op::Mul, a, b);
        }
        // Pull constant factors outward: (c*x)*y -> c*(x*y)
        if (a->op == Op::Mul && is_const(a->lhs)) return make_mul(a->lhs, make_mul(a->rhs, b));
        if (b->op == Op::Mul && is_const(b->lhs)) return make_mul(b->lhs, make_mul(a, b->rhs));
        if (a->op == Op::Neg) return make_neg(make_mul(a->lhs, b));
        if (b->op == Op::Neg) return make_neg(make_mul(a, b->lhs));
        return make_node(Op::Mul, a, b);
    }

    static NodePtr make_div(const NodePtr& a, const NodePtr& b) {
        if (is_const(b) && b->value != 0.0) {
            if (is_const(a)) return make_const(a->value / b->value);
            return make_mul(make_const(1.0 / b->value), a);
        }
        if (is_const(a, 0.0)) return make_const(0.0);
        if (a->op == Op::Mul && is_const(a->lhs)) return make_mul(a->lhs, make_div(a->rhs, b));
        return make_node(Op::Div, a, b);
    }

    static NodePtr make_pow(const NodePtr& a, const NodePtr& b) {
        if (is_const(b, 1.0)) return a;
        if (is_const(b, 0.0)) return make_const(1.0);
        if (is_const(a) && is_const(b)) {
            if (const auto v = try_fold(make_node(Op::Pow, a, b))) return make_const(*v);
        }
        return make_node(Op::Pow, a, b);
    }

    static NodePtr derive(const NodePtr& n, Var v) {
        if (!depends(*n, v)) return make_const(0.0);
        const NodePtr& a = n->lhs;
        const NodePtr& b = n->rhs;
        switch (n->op) {
            case Op::Constant: return make_const(0.0);
            case Op::Variable:
            case Op::Time: return make_const(1.0);
            case Op::Neg: return make_neg(derive(a, v));
            case Op::Add: return make_add(derive(a, v), derive(b, v));
            case Op::Sub: return make_sub(derive(a, v), derive(b, v));
            case Op::Mul: return make_add(make_mul(derive(a, v), b), make_mul(a, derive(b, v)));
            case Op::Div:
                return make_div(make_sub(make_mul(derive(a, v), b), make_mul(a, derive(b, v))), make_mul(b, b));
            case Op::Pow:
                if (!depends(*b, v)) {
                    return make_mul(make_mul(b, make_pow(a, make_sub(b, make_const(1.0)))), derive(a, v));
                }
                return make_mul(n, make_add(make_mul(derive(b, v), make_unary(Op::Log, a)),
                                            make_div(make_mul(b, derive(a, v)), a)));
            case Op::Sin: return make_mul(make_unary(Op::Cos, a), derive(a, v));
            case Op::Cos: return make_neg(make_mul(make_unary(Op::Sin, a), derive(a, v)));
            case Op::Tan: return make_div(derive(a, v), make_pow(make_unary(Op::Cos, a), make_const(2.0)));
            case Op::Exp: return make_mul(n, derive(a, v));
            case Op::Log: return make_div(derive(a, v), a);
            case Op::Sqrt: return make_div(derive(a, v), make_mul(make_const(2.0), n));
            case Op::Sinh: return make_mul(make_unary(Op::Cosh, a), derive(a, v));
            case Op::Cosh: return make_mul(make_unary(Op::Sinh, a), derive(a, v));
            case Op::Atan:
                return make_div(derive(a, v), make_add(make_const(1.0), make_pow(a, make_const(2.0))));
            case Op::Abs: return make_mul(make_div(a, n), derive(a, v));  // raises DomainError at the kink
        }
        return make_const(0.0);
    }

    friend class Parser;

    NodePtr root_;
    int dimension_ = 0;
};

inline Expr differentiate(const Expr& e, Var v) {
    if (!v.is_time() && (v.index < 1 || v.index > e.dimension_)) {
        throw DimensionError("cannot differentiate by x" + std::to_string(v.index) + " in dimension " +
                             std::to_string(e.dimension_));
    }
    return Expr(Expr::derive(e.root_, v), e.dimension_);
}

/// Sum of unmixed second derivatives over x1..xn.
inline Expr laplacian(const Expr& e) {
    Expr sum = Expr::constant(0.0, e.dimension());
    for (int i = 1; i <= e.dimension(); ++i) {
        sum = sum + differentiate(differentiate(e, Var::x(i)), Var::x(i));
    }
    return sum;
}

inline Expr laplacian_power(Expr e, int k) {
    for (int i = 0; i < k; ++i) e = laplacian(e);
    return e;
}

class Parser {
public:
    Parser(std::string_view text, int dimension) : text_(text), dimension_(dimension) {}

    Expr parse() {
        if (dimension_ < 0) throw DimensionError("negative dimension");
        skip();
        if (pos_ >= text_.size()) throw SyntaxError(pos_, "empty expression");
        Expr::NodePtr root = expr();
        skip();
        if (pos_ != text_.size()) throw SyntaxError(pos_, std::string("unexpected '") + text_[pos_] + "'");
        return Expr(std::move(root), dimension_);
    }

private:
    using NodePtr = Expr::NodePtr;

    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) {
            if (pos_ >= text_.size()) throw SyntaxError(pos_, std::string("expected '") + c + "' before end of input");
            throw SyntaxError(pos_, std::string("expected '") + c + "', found '" + text_[pos_] + "'");
        }
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = Expr::make_node(Op::Add, lhs, term());
            } else if (accept('-')) {
                lhs = Expr::make_node(Op::Sub, lhs, term());
            } else {
                return lhs;
            }
        }
    }
    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) {
                lhs = Expr::make_node(Op::Mul, lhs, unary());
            } else if (accept('/')) {
                lhs = Expr::make_node(Op::Div, lhs, unary());
            } else {
                return lhs;
            }
        }
    }
    NodePtr unary() {
        if (accept('-')) return Expr::make_node(Op::Neg, unary());
        if (accept('+')) return unary();
        return power();
    }
    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return Expr::make_node(Op::Pow, base, unary());
        return base;
    }
    NodePtr primary() {
        skip();
        if (pos_ >= text_.size()) throw SyntaxError(pos_, "unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr inner = expr();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        throw SyntaxError(pos_, std::string("unexpected '") + c + "'");
    }
    NodePtr number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
                ++n;
            }
            return n;
        };
        std::size_t count = digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            count += digits();
        }
        if (count == 0) throw SyntaxError(start, "malformed number");
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (digits() == 0) throw SyntaxError(pos_, "malformed exponent");
        }
        const std::string lexeme(text_.substr(start, pos_ - start));
        return Expr::make_const(std::strtod(lexeme.c_str(), nullptr));
    }
    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        const std::string name(text_.substr(start, pos_ - start));
        if (const auto fn = function_op(name)) {
            skip();
            if (pos_ >= text_.size() || text_[pos_] != '(') {
                throw SyntaxError(pos_, "function '" + name + "' requires an argument in parentheses");
            }
            ++pos_;
            NodePtr arg = expr();
            expect(')');
            return Expr::make_node(*fn, arg);
        }
        if (name == "t") return Expr::make_node(Op::Time, nullptr);
        if (name == "pi") return Expr::make_const(3.141592653589793238462643383279502884);
        if (name.size() > 1 && name[0] == 'x' &&
            name.find_first_not_of("0123456789", 1) == std::string::npos) {
            const long idx = std::strtol(name.c_str() + 1, nullptr, 10);
            if (idx < 1) throw UnknownSymbol(start, name);
            if (idx > dimension_) {
                throw DimensionError("variable '" + name + "' at byte " + std::to_string(start) +
                                     " exceeds dimension " + std::to_string(dimension_));
            }
            auto n = std::make_shared<Expr::Node>();
            n->op = Op::Variable;
            n->index = static_cast<int>(idx);
            return n;
        }
        throw UnknownSymbol(start, name);
    }
    static std::optional<Op> function_op(const std::string& name) {
        static constexpr std::pair<const char*, Op> table[] = {
            {"sin", Op::Sin},   {"cos", Op::Cos},   {"tan", Op::Tan},   {"exp", Op::Exp},
            {"log", Op::Log},   {"sqrt", Op::Sqrt}, {"sinh", Op::Sinh}, {"cosh", Op::Cosh},
            {"atan", Op::Atan}, {"abs", Op::Abs},
        };
        for (const auto& [n, op] : table) {
            if (name == n) return op;
        }
        return std::nullopt;
    }

    std::string_view text_;
    int dimension_;
    std::size_t pos_ = 0;
};

inline Expr parse(std::string_view text, int dimension) { return Parser(text, dimension).parse(); }

inline double eval_real(const Expr& e, const Point& p) {
    if (!p.time && e.uses_time()) throw DimensionError("expression uses t but the point has no time value");
    return e.evaluate(std::span<const double>(p.coords), p.time.value_or(0.0));
}

inline std::complex<double> eval_complex(const Expr& e, const ComplexPoint& p) {
    if (!p.time && e.uses_time()) throw DimensionError("expression uses t but the point has no time value");
    return e.evaluate(std::span<const std::complex<double>>(p.coords), p.time.value_or(0.0));
}

inline std::string to_string(const Expr& e) { return e.to_string(); }

}  // namespace waveforge
