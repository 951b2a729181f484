#include "nsroot/expr.hpp"

#include <cctype>
#include <utility>

namespace nsroot {

struct Expr::Node {
    Kind kind;
    std::string literal;                     // Constant: exact decimal text
    std::optional<long long> int_value;      // Constant: set when integral
    UnaryOp uop = UnaryOp::Neg;
    BinaryOp bop = BinaryOp::Add;
    std::shared_ptr<const Node> child, rhs;  // Unary uses child only
};

namespace {

std::optional<long long> parse_integer_literal(const std::string& text) {
    if (text.empty()) return std::nullopt;
    std::size_t i = text[0] == '-' ? 1 : 0;
    if (i == text.size() || text.size() - i > 18) return std::nullopt;
    long long v = 0;
    for (; i < text.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) return std::nullopt;
        v = v * 10 + (text[i] - '0');
    }
    return text[0] == '-' ? -v : v;
}

bool is_int(const Expr& e, long long v) {
    return e.integer_value() == v;
}

bool add_ok(long long a, long long b, long long& out) { return !__builtin_add_overflow(a, b, &out); }
bool sub_ok(long long a, long long b, long long& out) { return !__builtin_sub_overflow(a, b, &out); }
bool mul_ok(long long a, long long b, long long& out) { return !__builtin_mul_overflow(a, b, &out); }

}  // namespace

Expr Expr::constant(const std::string& decimal_literal) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Constant;
    n->literal = decimal_literal;
    n->int_value = parse_integer_literal(decimal_literal);
    return Expr(std::move(n));
}

Expr Expr::integer(long long value) {
    return constant(std::to_string(value));
}

Expr Expr::variable() {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Variable;
    return Expr(std::move(n));
}

Expr Expr::pi_constant() {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Pi;
    return Expr(std::move(n));
}

Expr Expr::unary(UnaryOp op, const Expr& operand) {
    if (op == UnaryOp::Neg) {
        if (auto v = operand.integer_value()) {
            long long neg;
            if (sub_ok(0, *v, neg)) return integer(neg);
        }
        if (operand.kind() == Kind::Unary && operand.unary_op() == UnaryOp::Neg) {
            return operand.lhs();
        }
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::Unary;
    n->uop = op;
    n->child = operand.node_;
    return Expr(std::move(n));
}

Expr Expr::binary(BinaryOp op, const Expr& lhs, const Expr& rhs) {
    const auto li = lhs.integer_value();
    const auto ri = rhs.integer_value();
    long long folded;
    switch (op) {
        case BinaryOp::Add:
            if (is_int(lhs, 0)) return rhs;
            if (is_int(rhs, 0)) return lhs;
            if (li && ri && add_ok(*li, *ri, folded)) return integer(folded);
            break;
        case BinaryOp::Sub:
            if (is_int(rhs, 0)) return lhs;
            if (is_int(lhs, 0)) return unary(UnaryOp::Neg, rhs);
            if (li && ri && sub_ok(*li, *ri, folded)) return integer(folded);
            break;
        case BinaryOp::Mul:
            if (is_int(lhs, 0) || is_int(rhs, 0)) return integer(0);
            if (is_int(lhs, 1)) return rhs;
            if (is_int(rhs, 1)) return lhs;
            if (li && ri && mul_ok(*li, *ri, folded)) return integer(folded);
            break;
        case BinaryOp::Div:
            if (is_int(rhs, 1)) return lhs;
            if (is_int(lhs, 0) && !is_int(rhs, 0)) return integer(0);
            if (li && ri && *ri != 0 && *li % *ri == 0) return integer(*li / *ri);
            break;
        case BinaryOp::Pow:
            if (is_int(rhs, 1)) return lhs;
            if (is_int(rhs, 0)) return integer(1);
            if (is_int(lhs, 1)) return integer(1);
            if (li && ri && *ri >= 0 && *ri <= 16) {
                long long acc = 1;
                bool ok = true;
                for (long long k = 0; k < *ri && ok; ++k) ok = mul_ok(acc, *li, acc);
                if (ok) return integer(acc);
            }
            break;
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::Binary;
    n->bop = op;
    n->child = lhs.node_;
    n->rhs = rhs.node_;
    return Expr(std::move(n));
}

Expr::Kind Expr::kind() const { return node_->kind; }
Expr::UnaryOp Expr::unary_op() const { return node_->uop; }
Expr::BinaryOp Expr::binary_op() const { return node_->bop; }
Expr Expr::lhs() const {
    if (!node_->child) throw Error("leaf expression has no operands");
    return Expr(node_->child);
}
Expr Expr::rhs() const {
    if (!node_->rhs) throw Error("expression has no right operand");
    return Expr(node_->rhs);
}
const std::string& Expr::literal() const { return node_->literal; }
std::optional<long long> Expr::integer_value() const {
    return node_->kind == Kind::Constant ? node_->int_value : std::nullopt;
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

class Parser {
  public:
    explicit Parser(std::string_view src) : src_(src) {}

    Expr run() {
        Expr e = expression();
        skip_ws();
        if (pos_ != src_.size()) {
            throw ParseError(pos_, "operator or end of input");
        }
        return e;
    }

  private:
    std::string_view src_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr expression() {
        Expr e = term();
        for (;;) {
            if (eat('+')) {
                e = Expr::binary(Expr::BinaryOp::Add, e, term());
            } else if (eat('-')) {
                e = Expr::binary(Expr::BinaryOp::Sub, e, term());
            } else {
                return e;
            }
        }
    }

    Expr term() {
        Expr e = unary();
        for (;;) {
            if (eat('*')) {
                e = Expr::binary(Expr::BinaryOp::Mul, e, unary());
            } else if (eat('/')) {
                e = Expr::binary(Expr::BinaryOp::Div, e, unary());
            } else {
                return e;
            }
        }
    }

    Expr unary() {
        if (eat('-')) {
            return Expr::unary(Expr::UnaryOp::Neg, unary());
        }
        return power();
    }

    Expr power() {
        Expr base = atom();
        if (eat('^')) {
            // Right-associative; the exponent may carry its own unary minus.
            return Expr::binary(Expr::BinaryOp::Pow, base, unary());
        }
        return base;
    }

    Expr atom() {
        skip_ws();
        if (pos_ >= src_.size()) {
            throw ParseError(pos_, "number, 'x', 'pi', function call, or '('");
        }
        char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = expression();
            if (!eat(')')) throw ParseError(pos_, "')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            return number();
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            return identifier();
        }
        throw ParseError(pos_, "number, 'x', 'pi', function call, or '('");
    }

    Expr number() {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            } else {
                pos_ = mark;
            }
        }
        return Expr::constant(std::string(src_.substr(start, pos_ - start)));
    }

    Expr identifier() {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        std::string name(src_.substr(start, pos_ - start));
        if (name == "x") return Expr::variable();
        if (name == "pi") return Expr::pi_constant();

        Expr::UnaryOp op;
        if (name == "exp") op = Expr::UnaryOp::Exp;
        else if (name == "sin") op = Expr::UnaryOp::Sin;
        else if (name == "cos") op = Expr::UnaryOp::Cos;
        else if (name == "ln") op = Expr::UnaryOp::Ln;
        else if (name == "sqrt") op = Expr::UnaryOp::Sqrt;
        else throw ParseError(start, "'x', 'pi', or one of exp/sin/cos/ln/sqrt");

        if (!eat('(')) throw ParseError(pos_, "'(' after function name");
        Expr arg = expression();
        if (!eat(')')) throw ParseError(pos_, "')'");
        return Expr::unary(op, arg);
    }
};

}  // namespace

Expr Expr::parse(std::string_view source) {
    if (source.empty()) {
        throw ParseError(0, "non-empty expression");
    }
    return Parser(source).run();
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

Real eval_rec(const Expr& e, const Real& x, const NumericContext& ctx) {
    using K = Expr::Kind;
    using U = Expr::UnaryOp;
    using B = Expr::BinaryOp;
    switch (e.kind()) {
        case K::Constant:
            return ctx.real(e.literal());
        case K::Variable:
            return x;
        case K::Pi:
            return ctx.pi();
        case K::Unary: {
            Real v = eval_rec(e.lhs(), x, ctx);
            switch (e.unary_op()) {
                case U::Neg: return -v;
                case U::Exp: return exp(v);
                case U::Sin: return sin(v);
                case U::Cos: return cos(v);
                case U::Ln: return ln(v);
                case U::Sqrt: return sqrt(v);
            }
            break;
        }
        case K::Binary: {
            Real a = eval_rec(e.lhs(), x, ctx);
            Real b = eval_rec(e.rhs(), x, ctx);
            switch (e.binary_op()) {
                case B::Add: return a + b;
                case B::Sub: return a - b;
                case B::Mul: return a * b;
                case B::Div:
                    if (b.is_zero()) throw DomainError("division by zero");
                    return a / b;
                case B::Pow:
                    if (auto k = e.rhs().integer_value()) return pow_int(a, static_cast<long>(*k));
                    return pow(a, b);
            }
            break;
        }
    }
    throw Error("corrupt expression node");
}

}  // namespace

Real Expr::evaluate(const Real& x, const NumericContext& ctx) const {
    try {
        return eval_rec(*this, x, ctx);
    } catch (const DivisionByZero&) {
        throw DomainError("division by zero evaluating expression at x = " + x.to_decimal(12));
    } catch (const DomainError& e) {
        throw DomainError(std::string(e.what()) + ", evaluating expression at x = " +
                          x.to_decimal(12));
    }
}

// ---------------------------------------------------------------------------
// Differentiation
// ---------------------------------------------------------------------------

namespace {

Expr diff1(const Expr& e) {
    using K = Expr::Kind;
    using U = Expr::UnaryOp;
    using B = Expr::BinaryOp;
    switch (e.kind()) {
        case K::Constant:
        case K::Pi:
            return Expr::integer(0);
        case K::Variable:
            return Expr::integer(1);
        case K::Unary: {
            Expr u = e.lhs();
            Expr du = diff1(u);
            switch (e.unary_op()) {
                case U::Neg: return Expr::unary(U::Neg, du);
                case U::Exp: return Expr::binary(B::Mul, Expr::unary(U::Exp, u), du);
                case U::Sin: return Expr::binary(B::Mul, Expr::unary(U::Cos, u), du);
                case U::Cos:
                    return Expr::unary(U::Neg, Expr::binary(B::Mul, Expr::unary(U::Sin, u), du));
                case U::Ln: return Expr::binary(B::Div, du, u);
                case U::Sqrt:
                    return Expr::binary(
                        B::Div, du,
                        Expr::binary(B::Mul, Expr::integer(2), Expr::unary(U::Sqrt, u)));
            }
            break;
        }
        case K::Binary: {
            Expr a = e.lhs();
            Expr b = e.rhs();
            switch (e.binary_op()) {
                case B::Add: return Expr::binary(B::Add, diff1(a), diff1(b));
                case B::Sub: return Expr::binary(B::Sub, diff1(a), diff1(b));
                case B::Mul:
                    return Expr::binary(B::Add, Expr::binary(B::Mul, diff1(a), b),
                                        Expr::binary(B::Mul, a, diff1(b)));
                case B::Div:
                    return Expr::binary(
                        B::Div,
                        Expr::binary(B::Sub, Expr::binary(B::Mul, diff1(a), b),
                                     Expr::binary(B::Mul, a, diff1(b))),
                        Expr::binary(B::Pow, b, Expr::integer(2)));
                case B::Pow: {
                    if (auto k = b.integer_value()) {
                        // Power rule for integer constant exponents.
                        return Expr::binary(
                            B::Mul, Expr::integer(*k),
                            Expr::binary(B::Mul,
                                         Expr::binary(B::Pow, a, Expr::integer(*k - 1)),
                                         diff1(a)));
                    }
                    // General exponent: differentiate exp(b*ln(a)) instead.
                    Expr rewritten =
                        Expr::unary(U::Exp, Expr::binary(B::Mul, b, Expr::unary(U::Ln, a)));
                    return diff1(rewritten);
                }
            }
            break;
        }
    }
    throw Error("corrupt expression node");
}

}  // namespace

Expr Expr::differentiate(int order) const {
    if (order < 1) {
        throw InputError("derivative order must be >= 1");
    }
    Expr result = *this;
    for (int i = 0; i < order; ++i) {
        result = diff1(result);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

// Binding strengths for the printer: add/sub 1, mul/div 2, neg 3, pow 4, atom 5.
int expr_prec(const Expr& e) {
    switch (e.kind()) {
        case Expr::Kind::Constant:
        case Expr::Kind::Variable:
        case Expr::Kind::Pi:
            return 5;
        case Expr::Kind::Unary:
            return e.unary_op() == Expr::UnaryOp::Neg ? 3 : 5;
        case Expr::Kind::Binary:
            switch (e.binary_op()) {
                case Expr::BinaryOp::Add:
                case Expr::BinaryOp::Sub: return 1;
                case Expr::BinaryOp::Mul:
                case Expr::BinaryOp::Div: return 2;
                case Expr::BinaryOp::Pow: return 4;
            }
    }
    return 5;
}

void print_expr(const Expr& e, std::string& out);

void print_child(const Expr& child, std::string& out, int min_prec) {
    bool paren = expr_prec(child) < min_prec ||
                 (child.kind() == Expr::Kind::Constant && !child.literal().empty() &&
                  child.literal()[0] == '-');
    if (paren) out += '(';
    print_expr(child, out);
    if (paren) out += ')';
}

void print_expr(const Expr& e, std::string& out) {
    switch (e.kind()) {
        case Expr::Kind::Constant:
            out += e.literal();
            return;
        case Expr::Kind::Variable:
            out += 'x';
            return;
        case Expr::Kind::Pi:
            out += "pi";
            return;
        case Expr::Kind::Unary:
            switch (e.unary_op()) {
                case Expr::UnaryOp::Neg:
                    out += '-';
                    print_child(e.lhs(), out, 3);
                    return;
                case Expr::UnaryOp::Exp: out += "exp("; break;
                case Expr::UnaryOp::Sin: out += "sin("; break;
                case Expr::UnaryOp::Cos: out += "cos("; break;
                case Expr::UnaryOp::Ln: out += "ln("; break;
                case Expr::UnaryOp::Sqrt: out += "sqrt("; break;
            }
            print_expr(e.lhs(), out);
            out += ')';
            return;
        case Expr::Kind::Binary: {
            // Same-precedence right children keep their parentheses so the
            // printed text re-parses to the identical tree (and therefore the
            // identical rounding order).
            const char* op = nullptr;
            int prec = expr_prec(e);
            int lmin = prec;
            int rmin = prec + 1;
            switch (e.binary_op()) {
                case Expr::BinaryOp::Add: op = " + "; break;
                case Expr::BinaryOp::Sub: op = " - "; break;
                case Expr::BinaryOp::Mul: op = " * "; break;
                case Expr::BinaryOp::Div: op = " / "; break;
                case Expr::BinaryOp::Pow:
                    op = "^";
                    lmin = prec + 1;  // any non-atom base gets parentheses
                    rmin = prec;      // right-assoc chain stays bare
                    break;
            }
            print_child(e.lhs(), out, lmin);
            out += op;
            print_child(e.rhs(), out, rmin);
            return;
        }
    }
}

}  // namespace

std::string Expr::to_string() const {
    std::string out;
    print_expr(*this, out);
    return out;
}

}  // namespace nsroot
