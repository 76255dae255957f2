#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "qem/errors.hpp"
#include "qem/jet.hpp"

namespace qem {

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

enum class TokenKind { Number, Identifier, Operator, LParen, RParen, Comma };

struct Token {
    TokenKind kind;
    std::string text;
    std::size_t offset;
};

// Lossless over valid input: every byte is either whitespace or part of
// exactly one token. Numbers are decimal with optional fraction and exponent
// and must start with a digit.
inline std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    const std::size_t n = src.size();
    auto isdig = [](char c) { return c >= '0' && c <= '9'; };
    auto isalpha_ = [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
    };
    while (i < n) {
        const char c = src[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (isdig(c)) {
            ++i;
            while (i < n && isdig(src[i])) ++i;
            if (i < n && src[i] == '.') {
                ++i;
                while (i < n && isdig(src[i])) ++i;
            }
            if (i < n && (src[i] == 'e' || src[i] == 'E')) {
                // Consume the exponent only if digits follow; otherwise the
                // 'e' starts a new token (it may be Euler's constant).
                std::size_t j = i + 1;
                if (j < n && (src[j] == '+' || src[j] == '-')) ++j;
                if (j < n && isdig(src[j])) {
                    ++j;
                    while (j < n && isdig(src[j])) ++j;
                    i = j;
                }
            }
            out.push_back({TokenKind::Number, std::string(src.substr(start, i - start)), start});
        } else if (isalpha_(c)) {
            ++i;
            while (i < n && (isalpha_(src[i]) || isdig(src[i]))) ++i;
            out.push_back({TokenKind::Identifier, std::string(src.substr(start, i - start)), start});
        } else if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
            ++i;
            out.push_back({TokenKind::Operator, std::string(1, c), start});
        } else if (c == '(') {
            ++i;
            out.push_back({TokenKind::LParen, "(", start});
        } else if (c == ')') {
            ++i;
            out.push_back({TokenKind::RParen, ")", start});
        } else if (c == ',') {
            ++i;
            out.push_back({TokenKind::Comma, ",", start});
        } else {
            throw parse_error(std::string("illegal character '") + c + "'", start);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// AST
// ---------------------------------------------------------------------------

enum class Var : int { T = 0, X1 = 1, X2 = 2, X3 = 3 };

inline const char* name(Var v) {
    switch (v) {
    case Var::T: return "t";
    case Var::X1: return "x1";
    case Var::X2: return "x2";
    case Var::X3: return "x3";
    }
    return "?";
}

// Scalar expressions over (t, x1, x2, x3). Immutable after construction;
// evaluation is pure, so one tree may be shared across threads.
class Expr {
public:
    struct Node {
        enum class Kind { Constant, Variable, Neg, Add, Sub, Mul, Div, Pow, Call };
        Kind kind;
        double value = 0.0; // Constant
        Var var = Var::T;   // Variable
        JetFn fn = JetFn::Sin; // Call
        std::shared_ptr<const Node> lhs, rhs; // Neg/Call use lhs only
    };
    using NodePtr = std::shared_ptr<const Node>;

    Expr() = default;

    static Expr parse(std::string_view src);

    static Expr constant(double c) {
        if (!std::isfinite(c)) throw domain_error("Expr::constant: value must be finite");
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::Constant;
        n->value = c;
        return Expr(std::move(n));
    }
    static Expr variable(Var v) {
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::Variable;
        n->var = v;
        return Expr(std::move(n));
    }
    static Expr call(JetFn f, const Expr& arg) {
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::Call;
        n->fn = f;
        n->lhs = arg.root();
        return Expr(std::move(n));
    }

    bool valid() const { return root_ != nullptr; }

    Jet4 eval(const Point4& p) const { return eval_node(*checked_root(), p); }
    double eval_value(const Point4& p) const { return eval_value_node(*checked_root(), p); }

    bool references(Var v) const { return references_node(root_.get(), v); }

    std::string str() const;

    bool operator==(const Expr& other) const { return equal_nodes(root_.get(), other.root_.get()); }

    const NodePtr& root() const { return root_; }
    static Expr from_node(NodePtr n) { return Expr(std::move(n)); }

private:
    explicit Expr(NodePtr n) : root_(std::move(n)) {}

    const Node* checked_root() const {
        if (!root_) throw domain_error("Expr: evaluating an empty expression");
        return root_.get();
    }

    static Jet4 eval_node(const Node& n, const Point4& p);
    static double eval_value_node(const Node& n, const Point4& p);
    static bool references_node(const Node* n, Var v);
    static bool equal_nodes(const Node* a, const Node* b);

    NodePtr root_;
};

inline Expr make_binary(Expr::Node::Kind kind, const Expr& a, const Expr& b) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = kind;
    n->lhs = a.root();
    n->rhs = b.root();
    return Expr::from_node(std::move(n));
}

inline Expr operator+(const Expr& a, const Expr& b) { return make_binary(Expr::Node::Kind::Add, a, b); }
inline Expr operator-(const Expr& a, const Expr& b) { return make_binary(Expr::Node::Kind::Sub, a, b); }
inline Expr operator*(const Expr& a, const Expr& b) { return make_binary(Expr::Node::Kind::Mul, a, b); }
inline Expr operator/(const Expr& a, const Expr& b) { return make_binary(Expr::Node::Kind::Div, a, b); }
inline Expr pow(const Expr& a, const Expr& b) { return make_binary(Expr::Node::Kind::Pow, a, b); }
inline Expr operator-(const Expr& a) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = Expr::Node::Kind::Neg;
    n->lhs = a.root();
    return Expr::from_node(std::move(n));
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------
//
// Grammar (loosest to tightest): '+' '-', then '*' '/', then unary minus,
// then right-associative '^'. So "-x1^2" is -(x1^2) and "2^3^2" is 2^(3^2).

namespace detail {

class Parser {
public:
    Parser(std::vector<Token> tokens, std::size_t end_offset)
        : tokens_(std::move(tokens)), end_(end_offset) {}

    Expr::NodePtr run() {
        auto e = parse_add(0);
        if (pos_ != tokens_.size())
            throw parse_error("trailing tokens after expression", tokens_[pos_].offset);
        return e;
    }

private:
    static constexpr int kMaxDepth = 256;

    const Token* peek() const { return pos_ < tokens_.size() ? &tokens_[pos_] : nullptr; }
    std::size_t here() const { return pos_ < tokens_.size() ? tokens_[pos_].offset : end_; }

    bool accept_op(const char* op) {
        const Token* t = peek();
        if (t && t->kind == TokenKind::Operator && t->text == op) {
            ++pos_;
            return true;
        }
        return false;
    }

    void check_depth(int depth) const {
        if (depth > kMaxDepth) throw parse_error("expression too deeply nested", here());
    }

    Expr::NodePtr parse_add(int depth) {
        check_depth(depth);
        auto lhs = parse_mul(depth + 1);
        for (;;) {
            if (accept_op("+")) lhs = binary(Expr::Node::Kind::Add, lhs, parse_mul(depth + 1));
            else if (accept_op("-")) lhs = binary(Expr::Node::Kind::Sub, lhs, parse_mul(depth + 1));
            else return lhs;
        }
    }

    Expr::NodePtr parse_mul(int depth) {
        check_depth(depth);
        auto lhs = parse_unary(depth + 1);
        for (;;) {
            if (accept_op("*")) lhs = binary(Expr::Node::Kind::Mul, lhs, parse_unary(depth + 1));
            else if (accept_op("/")) lhs = binary(Expr::Node::Kind::Div, lhs, parse_unary(depth + 1));
            else return lhs;
        }
    }

    Expr::NodePtr parse_unary(int depth) {
        check_depth(depth);
        if (accept_op("-")) {
            auto n = std::make_shared<Expr::Node>();
            n->kind = Expr::Node::Kind::Neg;
            n->lhs = parse_unary(depth + 1);
            return n;
        }
        return parse_power(depth + 1);
    }

    Expr::NodePtr parse_power(int depth) {
        check_depth(depth);
        auto base = parse_primary(depth + 1);
        if (accept_op("^"))
            return binary(Expr::Node::Kind::Pow, base, parse_unary(depth + 1));
        return base;
    }

    Expr::NodePtr parse_primary(int depth) {
        check_depth(depth);
        const Token* t = peek();
        if (!t) throw parse_error("expected expression, found end of input", end_);
        if (t->kind == TokenKind::Number) {
            ++pos_;
            char* endp = nullptr;
            const double v = std::strtod(t->text.c_str(), &endp);
            if (endp != t->text.c_str() + t->text.size() || !std::isfinite(v))
                throw parse_error("malformed or out-of-range number '" + t->text + "'", t->offset);
            auto n = std::make_shared<Expr::Node>();
            n->kind = Expr::Node::Kind::Constant;
            n->value = v;
            return n;
        }
        if (t->kind == TokenKind::Identifier) {
            ++pos_;
            return parse_identifier(*t, depth);
        }
        if (t->kind == TokenKind::LParen) {
            ++pos_;
            auto e = parse_add(depth + 1);
            expect_rparen(t->offset);
            return e;
        }
        throw parse_error("expected expression, found '" + t->text + "'", t->offset);
    }

    Expr::NodePtr parse_identifier(const Token& t, int depth) {
        if (t.text == "t") return var_node(Var::T);
        if (t.text == "x1") return var_node(Var::X1);
        if (t.text == "x2") return var_node(Var::X2);
        if (t.text == "x3") return var_node(Var::X3);
        if (t.text == "pi") return const_node(3.14159265358979323846);
        if (t.text == "e") return const_node(2.71828182845904523536);
        JetFn fn;
        if (t.text == "sin") fn = JetFn::Sin;
        else if (t.text == "cos") fn = JetFn::Cos;
        else if (t.text == "exp") fn = JetFn::Exp;
        else if (t.text == "log") fn = JetFn::Log;
        else if (t.text == "sqrt") fn = JetFn::Sqrt;
        else if (t.text == "tanh") fn = JetFn::Tanh;
        else throw parse_error("unknown identifier '" + t.text + "'", t.offset);

        const Token* open = peek();
        if (!open || open->kind != TokenKind::LParen)
            throw parse_error("function '" + t.text + "' must be followed by '('", here());
        ++pos_;
        std::vector<Expr::NodePtr> args;
        args.push_back(parse_add(depth + 1));
        while (true) {
            const Token* nxt = peek();
            if (nxt && nxt->kind == TokenKind::Comma) {
                ++pos_;
                args.push_back(parse_add(depth + 1));
            } else {
                break;
            }
        }
        expect_rparen(open->offset);
        if (args.size() != 1)
            throw parse_error("function '" + t.text + "' expects 1 argument, got " +
                                  std::to_string(args.size()),
                              t.offset);
        auto n = std::make_shared<Expr::Node>();
        n->kind = Expr::Node::Kind::Call;
        n->fn = fn;
        n->lhs = args[0];
        return n;
    }

    void expect_rparen(std::size_t open_offset) {
        const Token* t = peek();
        if (!t || t->kind != TokenKind::RParen)
            throw parse_error("unbalanced parenthesis opened at offset " +
                                  std::to_string(open_offset),
                              here());
        ++pos_;
    }

    static Expr::NodePtr binary(Expr::Node::Kind k, Expr::NodePtr a, Expr::NodePtr b) {
        auto n = std::make_shared<Expr::Node>();
        n->kind = k;
        n->lhs = std::move(a);
        n->rhs = std::move(b);
        return n;
    }
    static Expr::NodePtr var_node(Var v) {
        auto n = std::make_shared<Expr::Node>();
        n->kind = Expr::Node::Kind::Variable;
        n->var = v;
        return n;
    }
    static Expr::NodePtr const_node(double v) {
        auto n = std::make_shared<Expr::Node>();
        n->kind = Expr::Node::Kind::Constant;
        n->value = v;
        return n;
    }

    std::vector<Token> tokens_;
    std::size_t end_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline Expr Expr::parse(std::string_view src) {
    detail::Parser p(tokenize(src), src.size());
    return Expr(p.run());
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace detail {

inline bool integral_exponent(double e, long long& out) {
    if (!(std::abs(e) <= 1e6)) return false;
    if (std::rint(e) != e) return false;
    out = static_cast<long long>(e);
    return true;
}

} // namespace detail

inline Jet4 Expr::eval_node(const Node& n, const Point4& p) {
    using K = Node::Kind;
    switch (n.kind) {
    case K::Constant: return Jet4::constant(n.value);
    case K::Variable:
        switch (n.var) {
        case Var::T: return jet_t(p);
        case Var::X1: return jet_x1(p);
        case Var::X2: return jet_x2(p);
        case Var::X3: return jet_x3(p);
        }
        break;
    case K::Neg: return -eval_node(*n.lhs, p);
    case K::Add: return eval_node(*n.lhs, p) + eval_node(*n.rhs, p);
    case K::Sub: return eval_node(*n.lhs, p) - eval_node(*n.rhs, p);
    case K::Mul: return eval_node(*n.lhs, p) * eval_node(*n.rhs, p);
    case K::Div: return eval_node(*n.lhs, p) / eval_node(*n.rhs, p);
    case K::Pow: {
        const Jet4 base = eval_node(*n.lhs, p);
        long long k = 0;
        if (n.rhs->kind == K::Constant && detail::integral_exponent(n.rhs->value, k))
            return pow_int(base, k);
        const Jet4 ex = eval_node(*n.rhs, p);
        if (!(base.val > 0.0))
            throw domain_error("pow: base must be positive for a non-integer exponent");
        return exp(ex * log(base));
    }
    case K::Call: return jet_fn(n.fn, eval_node(*n.lhs, p));
    }
    throw domain_error("Expr: corrupt node");
}

inline double Expr::eval_value_node(const Node& n, const Point4& p) {
    using K = Node::Kind;
    switch (n.kind) {
    case K::Constant: return n.value;
    case K::Variable:
        switch (n.var) {
        case Var::T: return p.t;
        case Var::X1: return p.x1;
        case Var::X2: return p.x2;
        case Var::X3: return p.x3;
        }
        break;
    case K::Neg: return -eval_value_node(*n.lhs, p);
    case K::Add: return eval_value_node(*n.lhs, p) + eval_value_node(*n.rhs, p);
    case K::Sub: return eval_value_node(*n.lhs, p) - eval_value_node(*n.rhs, p);
    case K::Mul: return eval_value_node(*n.lhs, p) * eval_value_node(*n.rhs, p);
    case K::Div: {
        const double den = eval_value_node(*n.rhs, p);
        if (den == 0.0) throw domain_error("division by zero value");
        return eval_value_node(*n.lhs, p) / den;
    }
    case K::Pow: {
        const double base = eval_value_node(*n.lhs, p);
        long long k = 0;
        if (n.rhs->kind == K::Constant && detail::integral_exponent(n.rhs->value, k)) {
            if (k < 0 && base == 0.0) throw domain_error("pow: zero base with negative exponent");
            return std::pow(base, static_cast<double>(k));
        }
        const double ex = eval_value_node(*n.rhs, p);
        if (!(base > 0.0))
            throw domain_error("pow: base must be positive for a non-integer exponent");
        return std::pow(base, ex);
    }
    case K::Call: {
        const double a = eval_value_node(*n.lhs, p);
        switch (n.fn) {
        case JetFn::Sin: return std::sin(a);
        case JetFn::Cos: return std::cos(a);
        case JetFn::Exp: return std::exp(a);
        case JetFn::Log:
            if (!(a > 0.0)) throw domain_error("log: argument must be positive");
            return std::log(a);
        case JetFn::Sqrt:
            if (!(a > 0.0)) throw domain_error("sqrt: argument must be positive");
            return std::sqrt(a);
        case JetFn::Tanh: return std::tanh(a);
        }
        break;
    }
    }
    throw domain_error("Expr: corrupt node");
}

inline bool Expr::references_node(const Node* n, Var v) {
    if (!n) return false;
    if (n->kind == Node::Kind::Variable) return n->var == v;
    return references_node(n->lhs.get(), v) || references_node(n->rhs.get(), v);
}

inline bool Expr::equal_nodes(const Node* a, const Node* b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
    case Node::Kind::Constant: return a->value == b->value;
    case Node::Kind::Variable: return a->var == b->var;
    case Node::Kind::Call:
        return a->fn == b->fn && equal_nodes(a->lhs.get(), b->lhs.get());
    case Node::Kind::Neg: return equal_nodes(a->lhs.get(), b->lhs.get());
    default:
        return equal_nodes(a->lhs.get(), b->lhs.get()) && equal_nodes(a->rhs.get(), b->rhs.get());
    }
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace detail {

// Precedence levels for printing: + - (1), * / (2), unary - (3), ^ (4),
// atoms (5). Mirrors the parse grammar so print/parse round-trips.
inline int print_prec(const Expr::Node& n) {
    using K = Expr::Node::Kind;
    switch (n.kind) {
    case K::Add:
    case K::Sub: return 1;
    case K::Mul:
    case K::Div: return 2;
    case K::Neg: return 3;
    case K::Pow: return 4;
    default: return 5;
    }
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void print_node(const Expr::Node& n, std::string& out) {
    using K = Expr::Node::Kind;
    auto child = [&out](const Expr::Node& c, int min_prec) {
        const bool parens = print_prec(c) < min_prec;
        if (parens) out += '(';
        print_node(c, out);
        if (parens) out += ')';
    };
    switch (n.kind) {
    case K::Constant:
        // Negative constants only arise from programmatic construction;
        // parenthesize so they re-read with the same value in any context.
        if (std::signbit(n.value)) {
            out += '(';
            out += format_double(n.value);
            out += ')';
        } else {
            out += format_double(n.value);
        }
        return;
    case K::Variable: out += name(n.var); return;
    case K::Neg:
        out += '-';
        child(*n.lhs, 3);
        return;
    case K::Add:
        child(*n.lhs, 1);
        out += " + ";
        child(*n.rhs, 2);
        return;
    case K::Sub:
        child(*n.lhs, 1);
        out += " - ";
        child(*n.rhs, 2);
        return;
    case K::Mul:
        child(*n.lhs, 2);
        out += '*';
        child(*n.rhs, 3);
        return;
    case K::Div:
        child(*n.lhs, 2);
        out += '/';
        child(*n.rhs, 3);
        return;
    case K::Pow:
        child(*n.lhs, 5); // left operand of ^ must be an atom
        out += '^';
        child(*n.rhs, 3); // exponent binds through unary minus
        return;
    case K::Call:
        out += name(n.fn);
        out += '(';
        print_node(*n.lhs, out);
        out += ')';
        return;
    }
}

} // namespace detail

inline std::string Expr::str() const {
    std::string out;
    detail::print_node(*checked_root(), out);
    return out;
}

// ---------------------------------------------------------------------------
// Derivative modes and field specs
// ---------------------------------------------------------------------------

enum class DerivativeMode { Jet, FiniteDifference };

// Evaluate with either exact jet derivatives or the central-difference
// oracle at step `fd_step`.
inline Jet4 eval_jet(const Expr& e, const Point4& p, DerivativeMode mode,
                     double fd_step = 1e-4) {
    if (mode == DerivativeMode::Jet) return e.eval(p);
    return fd_jet([&e](const Point4& q) { return e.eval_value(q); }, p, fd_step);
}

// A named scalar (1 component) or vector (3 components) field definition.
struct FieldSpec {
    std::string name;
    std::vector<Expr> components;

    bool is_scalar() const { return components.size() == 1; }
    bool is_vector() const { return components.size() == 3; }
};

} // namespace qem
