#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "nsroot/real.hpp"

namespace nsroot {

// Immutable expression tree over one variable x. Node set: decimal constants,
// x, pi, unary {neg, exp, sin, cos, ln, sqrt}, binary {add, sub, mul, div,
// pow}. The set is closed under differentiation: pow with a non-constant (or
// non-integer) exponent is rewritten as exp(b*ln(a)) before differentiating.
class Expr {
  public:
    enum class Kind { Constant, Variable, Pi, Unary, Binary };
    enum class UnaryOp { Neg, Exp, Sin, Cos, Ln, Sqrt };
    enum class BinaryOp { Add, Sub, Mul, Div, Pow };

    // Grammar: pow > unary minus > mul/div > add/sub, all left-associative
    // except pow (right-associative); parentheses; fn(expr) call syntax;
    // decimal literals; identifiers x and pi.
    static Expr parse(std::string_view source);

    // Construction helpers (apply constant folding and 0/1 identities).
    static Expr constant(const std::string& decimal_literal);
    static Expr integer(long long value);
    static Expr variable();
    static Expr pi_constant();
    static Expr unary(UnaryOp op, const Expr& operand);
    static Expr binary(BinaryOp op, const Expr& lhs, const Expr& rhs);

    Real evaluate(const Real& x, const NumericContext& ctx) const;

    // Symbolic derivative of the given order (>= 1), simplified only by
    // constant folding and 0/1 identities.
    Expr differentiate(int order = 1) const;

    // Printer whose output re-parses to an equivalent expression.
    std::string to_string() const;

    Kind kind() const;
    UnaryOp unary_op() const;
    BinaryOp binary_op() const;
    Expr lhs() const;
    Expr rhs() const;
    const std::string& literal() const;
    std::optional<long long> integer_value() const;

  private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    std::shared_ptr<const Node> node_;
};

}  // namespace nsroot
