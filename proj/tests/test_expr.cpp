#include <cmath>
#include <complex>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "waveforge/expr.hpp"

using namespace waveforge;

namespace {

// Random expression text over x1..xn and t whose value stays finite on [-1, 1]^n.
class ExprGen {
public:
    ExprGen(std::uint64_t seed, int n) : rng_(seed), n_(n) {}

    std::string operator()(int depth) {
        std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 12);
        switch (pick(rng_)) {
            case 0: return number();
            case 1: return "x" + std::to_string(var(rng_));
            case 2: return "t";
            case 3: return "(" + (*this)(depth - 1) + " + " + (*this)(depth - 1) + ")";
            case 4: return "(" + (*this)(depth - 1) + " - " + (*this)(depth - 1) + ")";
            case 5: return (*this)(depth - 1) + "*" + (*this)(depth - 1);
            case 6: return (*this)(depth - 1) + "/(2 + cos(" + (*this)(depth - 1) + "))";
            case 7: return "sin(" + (*this)(depth - 1) + ")";
            case 8: return "cos(" + (*this)(depth - 1) + ")";
            case 9: return "exp(0.3*sin(" + (*this)(depth - 1) + "))";
            case 10: return "log(1.5 + cos(" + (*this)(depth - 1) + "))";
            case 11: return "atan(" + (*this)(depth - 1) + ")^2";
            default: return "-sqrt(1 + (" + (*this)(depth - 1) + ")^2)";
        }
    }

    double uniform() { return unit_(rng_); }

private:
    std::string number() {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", 2.0 * unit_(rng_));
        return buf[0] == '-' ? std::string("(") + buf + ")" : buf;
    }

    std::mt19937_64 rng_;
    int n_;
    std::uniform_int_distribution<int> var{1, 3};
    std::uniform_real_distribution<double> unit_{-1.0, 1.0};
};

double at(const Expr& e, double x1, double x2, double x3, double t) {
    const double x[3] = {x1, x2, x3};
    return e.evaluate(x, t);
}

}  // namespace

TEST(Expr, EvaluatesArithmeticAndFunctions) {
    EXPECT_DOUBLE_EQ(at(parse("1 + 2*3", 3), 0, 0, 0, 0), 7.0);
    EXPECT_DOUBLE_EQ(at(parse("x1*x2 - x3/t", 3), 2, 3, 4, 8), 5.5);
    EXPECT_DOUBLE_EQ(at(parse("sin(x1)^2 + cos(x1)^2", 3), 0.7, 0, 0, 0), 1.0);
    EXPECT_NEAR(at(parse("pi", 3), 0, 0, 0, 0), M_PI, 0.0);
    EXPECT_DOUBLE_EQ(at(parse("1.5e2 + .5", 1), 0, 0, 0, 0), 150.5);
    EXPECT_DOUBLE_EQ(at(parse("abs(x1) + sqrt(x2) + exp(0) + log(1)", 3), -2, 9, 0, 0), 6.0);
}

TEST(Expr, PrecedenceAndAssociativity) {
    EXPECT_DOUBLE_EQ(at(parse("-x1^2", 1), 3, 0, 0, 0), -9.0);
    EXPECT_DOUBLE_EQ(at(parse("2^3^2", 1), 0, 0, 0, 0), 512.0);
    EXPECT_DOUBLE_EQ(at(parse("8/4/2", 1), 0, 0, 0, 0), 1.0);
    EXPECT_DOUBLE_EQ(at(parse("2^-1", 1), 0, 0, 0, 0), 0.5);
    EXPECT_DOUBLE_EQ(at(parse("1 - 2 - 3", 1), 0, 0, 0, 0), -4.0);
}

TEST(Expr, SyntaxErrorsCarryPosition) {
    try {
        parse("sin(x1 + )", 1);
        FAIL() << "expected SyntaxError";
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.position(), 9u);
    }
    EXPECT_THROW(parse("", 1), SyntaxError);
    EXPECT_THROW(parse("1 2", 1), SyntaxError);
    EXPECT_THROW(parse("(x1", 1), SyntaxError);
    EXPECT_THROW(parse("x1 $ 2", 1), SyntaxError);
}

TEST(Expr, UnknownSymbolsAndDimensions) {
    try {
        parse("2*foo(x1)", 1);
        FAIL() << "expected UnknownSymbol";
    } catch (const UnknownSymbol& e) {
        EXPECT_EQ(e.name(), "foo");
        EXPECT_EQ(e.position(), 2u);
    }
    EXPECT_THROW(parse("x0", 3), UnknownSymbol);
    EXPECT_THROW(parse("y", 3), UnknownSymbol);
    EXPECT_THROW(parse("x4", 3), DimensionError);
    EXPECT_NO_THROW(parse("x3", 3));
}

TEST(Expr, DomainErrors) {
    const Expr e = parse("log(x1)", 1);
    const double bad = -1.0;
    EXPECT_THROW(e.evaluate(&bad, 0.0), DomainError);
    const double zero = 0.0;
    EXPECT_THROW(parse("1/x1", 1).evaluate(&zero, 0.0), DomainError);
    EXPECT_THROW(parse("sqrt(x1)", 1).evaluate(&bad, 0.0), DomainError);
    EXPECT_THROW(eval_real(parse("x1 + x2", 2), Point{{1.0}, 0.0}), DimensionError);
}

TEST(Expr, DifferentiationRules) {
    const Expr e = parse("x1^3*sin(x2) + exp(t*x1)", 2);
    const Expr dx = differentiate(e, Var::x(1));
    const Expr dt = differentiate(e, Var::t());
    const double x[2] = {0.4, 1.1};
    const double t = 0.7;
    EXPECT_NEAR(dx.evaluate(x, t), 3 * 0.16 * std::sin(1.1) + t * std::exp(t * 0.4), 1e-14);
    EXPECT_NEAR(dt.evaluate(x, t), 0.4 * std::exp(t * 0.4), 1e-14);
    EXPECT_THROW(differentiate(e, Var::x(3)), DimensionError);
    EXPECT_TRUE(differentiate(parse("x1", 2), Var::x(2)).is_zero());
}

TEST(Expr, LaplacianOfProducts) {
    const Expr e = parse("sin(x1)*cos(2*x2)*exp(x3)", 3);
    const double x[3] = {0.3, -0.8, 0.5};
    EXPECT_NEAR(laplacian(e).evaluate(x, 0.0), (-1 - 4 + 1) * e.evaluate(x, 0.0), 1e-13);
    EXPECT_NEAR(laplacian_power(e, 2).evaluate(x, 0.0), 16 * e.evaluate(x, 0.0), 1e-12);
    EXPECT_NEAR(laplacian_power(e, 0).evaluate(x, 0.0), e.evaluate(x, 0.0), 0.0);
}

TEST(Expr, ComplexEvaluationMatchesClosedForms) {
    const Expr e = parse("sin(x1)", 1);
    const std::complex<double> z(0.4, 0.9);
    const auto v = eval_complex(e, ComplexPoint{{z}, std::nullopt});
    EXPECT_NEAR(std::abs(v - std::sin(z)), 0.0, 1e-15);
    const auto w = eval_complex(parse("atan(t)", 0), ComplexPoint{{}, std::complex<double>(0.3, 0.2)});
    EXPECT_NEAR(std::abs(w - std::atan(std::complex<double>(0.3, 0.2))), 0.0, 1e-15);
}

TEST(ExprProperty, PrintParseRoundTrip) {
    ExprGen gen(0x1001, 3);
    for (int trial = 0; trial < 300; ++trial) {
        const Expr e = parse(gen(4), 3);
        const Expr back = parse(e.to_string(), 3);
        for (int k = 0; k < 3; ++k) {
            const double x[3] = {gen.uniform(), gen.uniform(), gen.uniform()};
            const double t = gen.uniform();
            EXPECT_EQ(e.evaluate(x, t), back.evaluate(x, t)) << e.to_string();
        }
    }
}

TEST(ExprProperty, DerivativeMatchesFiniteDifference) {
    ExprGen gen(0x1002, 3);
    const double h = 1e-4;
    for (int trial = 0; trial < 200; ++trial) {
        const Expr e = parse(gen(3), 3);
        for (int v = 0; v <= 3; ++v) {
            const Expr d = differentiate(e, Var{v});
            double x[3] = {gen.uniform(), gen.uniform(), gen.uniform()};
            double t = gen.uniform();
            auto shifted = [&](double s) {
                double y[3] = {x[0], x[1], x[2]};
                double tt = t;
                (v == 0 ? tt : y[v - 1]) += s;
                return e.evaluate(y, tt);
            };
            const double fd = (shifted(-2 * h) - 8 * shifted(-h) + 8 * shifted(h) - shifted(2 * h)) / (12 * h);
            EXPECT_NEAR(d.evaluate(x, t), fd, 1e-6 * (1 + std::fabs(fd))) << e.to_string() << " d/var " << v;
        }
    }
}

TEST(ExprProperty, ComplexAgreesWithRealOnRealAxis) {
    ExprGen gen(0x1003, 3);
    for (int trial = 0; trial < 300; ++trial) {
        const Expr e = parse(gen(4), 3);
        const double x[3] = {gen.uniform(), gen.uniform(), gen.uniform()};
        const double t = gen.uniform();
        const auto z = eval_complex(e, ComplexPoint{{x[0], x[1], x[2]}, std::complex<double>(t)});
        EXPECT_EQ(z.real(), e.evaluate(x, t)) << e.to_string();
        EXPECT_EQ(z.imag(), 0.0) << e.to_string();
    }
}

TEST(ExprProperty, SimplificationPreservesValue) {
    ExprGen gen(0x1004, 3);
    for (int trial = 0; trial < 200; ++trial) {
        const std::string a = gen(3), b = gen(3);
        const Expr ea = parse(a, 3), eb = parse(b, 3);
        const Expr built = (2.0 * ea - eb) * ea + eb / (Expr::constant(3.0) + ea * ea);
        const Expr text = parse("(2*(" + a + ") - (" + b + "))*(" + a + ") + (" + b + ")/(3 + (" + a + ")^2)", 3);
        const double x[3] = {gen.uniform(), gen.uniform(), gen.uniform()};
        const double t = gen.uniform();
        const double ref = text.evaluate(x, t);
        EXPECT_NEAR(built.evaluate(x, t), ref, 1e-13 * (1 + std::fabs(ref)));
    }
}
