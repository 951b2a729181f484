#pragma once

#include <random>
#include <string>
#include <vector>

#include "nsroot/analysis.hpp"
#include "nsroot/divdiff.hpp"
#include "nsroot/expr.hpp"
#include "nsroot/methods.hpp"
#include "nsroot/real.hpp"

namespace testsupport {

using nsroot::Expr;
using nsroot::NumericContext;
using nsroot::Real;

// |got - want| <= 10^-digits * max(1, |want|)
inline bool close_digits(const Real& got, const Real& want, int digits,
                         const NumericContext& ctx) {
    Real scale = abs(want);
    Real one = ctx.real(1);
    if (scale < one) scale = one;
    return abs(got - want) <= scale * ctx.pow10(-digits);
}

inline bool within(const Real& value, double lo, double hi) {
    double v = value.to_double();
    return v >= lo && v <= hi;
}

inline std::string random_decimal(std::mt19937_64& rng, double range, int places = 4) {
    double scale = 1;
    for (int i = 0; i < places; ++i) scale *= 10;
    long long span = static_cast<long long>(range * scale);
    std::uniform_int_distribution<long long> dist(-span, span);
    long long raw = dist(rng);
    long long whole = raw / static_cast<long long>(scale);
    long long frac = std::llabs(raw % static_cast<long long>(scale));
    std::string s = (raw < 0 && whole == 0 ? "-" : "") + std::to_string(whole) + ".";
    std::string f = std::to_string(frac);
    s += std::string(places - f.size(), '0') + f;
    return s;
}

// ---------------------------------------------------------------------------
// Polynomial helpers (independent of Expr/divdiff; plain coefficient Horner)
// ---------------------------------------------------------------------------

inline std::vector<long long> random_poly_coeffs(std::mt19937_64& rng, int degree) {
    std::uniform_int_distribution<long long> coeff(-9, 9);
    std::vector<long long> c(degree + 1);
    for (auto& v : c) v = coeff(rng);
    if (c.back() == 0) c.back() = 1;
    return c;
}

inline Real poly_eval(const std::vector<long long>& coeffs, const Real& x,
                      const NumericContext& ctx) {
    Real acc = ctx.real(static_cast<long>(coeffs.back()));
    for (std::size_t i = coeffs.size() - 1; i-- > 0;) {
        acc = acc * x + ctx.real(static_cast<long>(coeffs[i]));
    }
    return acc;
}

inline Real poly_derivative_eval(const std::vector<long long>& coeffs, const Real& x,
                                 const NumericContext& ctx) {
    if (coeffs.size() < 2) return ctx.real(0);
    Real acc = ctx.real(static_cast<long>(coeffs.back()) *
                        static_cast<long>(coeffs.size() - 1));
    for (std::size_t i = coeffs.size() - 1; i-- > 1;) {
        acc = acc * x + ctx.real(static_cast<long>(coeffs[i]) * static_cast<long>(i));
    }
    return acc;
}

inline std::string poly_text(const std::vector<long long>& coeffs) {
    std::string s;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (!s.empty()) s += " + ";
        s += "(" + std::to_string(coeffs[i]) + ")";
        if (i == 1) s += " * x";
        if (i > 1) s += " * x^" + std::to_string(i);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Random expression corpus. Every node kind appears; ln/sqrt arguments and
// division denominators are kept positive so domain rejections stay rare.
// ---------------------------------------------------------------------------

inline Expr random_expression(std::mt19937_64& rng, int depth) {
    using U = Expr::UnaryOp;
    using B = Expr::BinaryOp;
    std::uniform_int_distribution<int> pick(0, 99);

    if (depth <= 0) {
        int c = pick(rng);
        if (c < 45) return Expr::variable();
        if (c < 65) {
            std::uniform_int_distribution<int> small(1, 3);
            return Expr::integer(small(rng));
        }
        if (c < 90) return Expr::constant(random_decimal(rng, 2.5, 2));
        return Expr::pi_constant();
    }

    auto positive_arg = [&](int d) {
        // 2 + (subexpr)^2: bounded away from zero everywhere.
        return Expr::binary(B::Add, Expr::integer(2),
                            Expr::binary(B::Pow, random_expression(rng, d), Expr::integer(2)));
    };

    int c = pick(rng);
    if (c < 14) return Expr::binary(B::Add, random_expression(rng, depth - 1),
                                    random_expression(rng, depth - 1));
    if (c < 28) return Expr::binary(B::Sub, random_expression(rng, depth - 1),
                                    random_expression(rng, depth - 1));
    if (c < 42) return Expr::binary(B::Mul, random_expression(rng, depth - 1),
                                    random_expression(rng, depth - 1));
    if (c < 52) return Expr::binary(B::Div, random_expression(rng, depth - 1),
                                    positive_arg(depth - 2));
    if (c < 58) {
        std::uniform_int_distribution<int> e(2, 3);
        return Expr::binary(B::Pow, random_expression(rng, depth - 1), Expr::integer(e(rng)));
    }
    if (c < 62) return Expr::binary(B::Pow, positive_arg(depth - 2), Expr::constant("2.5"));
    if (c < 70) return Expr::unary(U::Neg, random_expression(rng, depth - 1));
    if (c < 78) return Expr::unary(U::Sin, random_expression(rng, depth - 1));
    if (c < 86) return Expr::unary(U::Cos, random_expression(rng, depth - 1));
    if (c < 92) return Expr::unary(U::Exp, random_expression(rng, depth - 1));
    if (c < 96) return Expr::unary(U::Ln, positive_arg(depth - 1));
    return Expr::unary(U::Sqrt, positive_arg(depth - 1));
}

// ---------------------------------------------------------------------------
// Central-difference oracle with a two-step Richardson validity estimate.
// Assertions are made only where the oracle itself can deliver the requested
// accuracy; the estimate never looks at the symbolic derivative.
// ---------------------------------------------------------------------------

struct FdResult {
    bool valid = false;
    Real value;

    explicit FdResult(Real v) : value(std::move(v)) {}
};

inline FdResult central_difference(const Expr& e, const Real& x, const NumericContext& ctx,
                                   long h_exponent, int tol_digits) {
    Real h = ctx.pow10(h_exponent);
    Real two = ctx.real(2);
    Real fd_h = (e.evaluate(x + h, ctx) - e.evaluate(x - h, ctx)) / (two * h);
    Real h2 = h / two;
    Real fd_h2 = (e.evaluate(x + h2, ctx) - e.evaluate(x - h2, ctx)) / (two * h2);

    FdResult result(fd_h2);
    Real scale = abs(fd_h2);
    Real one = ctx.real(1);
    if (scale < one) scale = one;
    // err(fd_h2) ~= |fd_h - fd_h2| / 3; require a 10x margin under tolerance.
    result.valid = abs(fd_h - fd_h2) <= scale * ctx.pow10(-tol_digits) * ctx.real(3) / ctx.real(10);
    return result;
}

inline const char* kEq21 = "x^2 - exp((1/x) * sin(pi * x^2 / 2)) - 1";

}  // namespace testsupport
