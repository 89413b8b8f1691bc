#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gburgers/jet.hpp"

namespace gburgers {

/// Syntax error with the byte offset of the offending token.
struct ParseError : std::runtime_error {
    std::size_t offset;
    ParseError(const std::string& msg, std::size_t off)
        : std::runtime_error(msg + " (offset " + std::to_string(off) + ")"), offset(off) {}
};

enum class Func { sin, cos, exp, log, atan, sqrt };

namespace detail {

enum class NodeKind { number, pi, variable, neg, add, sub, mul, div, pow, call };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    NodeKind kind;
    double number = 0.0;
    long long exponent = 0;
    Func func = Func::sin;
    NodePtr lhs, rhs;
};

inline NodePtr make_node(Node n) { return std::make_shared<const Node>(std::move(n)); }

// Shortest decimal string that parses back to exactly the same double.
inline std::string format_number(double v) {
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

}  // namespace detail

/// Immutable closed-form expression of one real variable. Supports value
/// evaluation and exact derivatives up to order four via jet arithmetic.
class Expression {
  public:
    Expression() = default;

    static Expression parse(std::string_view source);

    /// Value of the expression at x.
    double eval(double x) const;

    /// Value plus exact derivatives up to `order` (0..4) at `point`.
    Jet eval_jet(double point, int order) const;

    /// Pretty-print; re-parsing the result yields a structurally identical tree.
    std::string str() const;

    /// Name of the free variable ("" for constant expressions).
    const std::string& variable() const { return var_; }

    bool empty() const { return !root_; }
    bool is_constant() const { return root_ && var_.empty(); }
    bool is_identity() const { return root_ && root_->kind == detail::NodeKind::variable; }

    friend bool same_structure(const Expression& a, const Expression& b);

  private:
    Expression(detail::NodePtr root, std::string var) : root_(std::move(root)), var_(std::move(var)) {}

    detail::NodePtr root_;
    std::string var_;
};

namespace detail {

struct Token {
    enum Kind { number, ident, plus, minus, star, slash, caret, lparen, rparen, end } kind;
    std::size_t offset;
    double value = 0.0;      // number
    std::string text;        // ident
};

class Lexer {
  public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

  private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        tok_.offset = pos_;
        if (pos_ >= src_.size()) {
            tok_.kind = Token::end;
            return;
        }
        const char c = src_[pos_];
        switch (c) {
            case '+': tok_.kind = Token::plus; ++pos_; return;
            case '-': tok_.kind = Token::minus; ++pos_; return;
            case '*': tok_.kind = Token::star; ++pos_; return;
            case '/': tok_.kind = Token::slash; ++pos_; return;
            case '^': tok_.kind = Token::caret; ++pos_; return;
            case '(': tok_.kind = Token::lparen; ++pos_; return;
            case ')': tok_.kind = Token::rparen; ++pos_; return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = src_.data() + pos_;
            char* endp = nullptr;
            tok_.value = std::strtod(begin, &endp);
            if (endp == begin) throw ParseError("malformed number", pos_);
            tok_.kind = Token::number;
            pos_ += static_cast<std::size_t>(endp - begin);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = pos_;
            while (j < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_'))
                ++j;
            tok_.kind = Token::ident;
            tok_.text.assign(src_.substr(pos_, j - pos_));
            pos_ = j;
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    Token tok_;
};

inline bool lookup_func(const std::string& name, Func& out) {
    if (name == "sin") { out = Func::sin; return true; }
    if (name == "cos") { out = Func::cos; return true; }
    if (name == "exp") { out = Func::exp; return true; }
    if (name == "log") { out = Func::log; return true; }
    if (name == "atan") { out = Func::atan; return true; }
    if (name == "sqrt") { out = Func::sqrt; return true; }
    return false;
}

inline const char* func_name(Func f) {
    switch (f) {
        case Func::sin: return "sin";
        case Func::cos: return "cos";
        case Func::exp: return "exp";
        case Func::log: return "log";
        case Func::atan: return "atan";
        case Func::sqrt: return "sqrt";
    }
    return "?";
}

// Grammar (precedence low to high):
//   sum     := term (('+'|'-') term)*          left associative
//   term    := unary (('*'|'/') unary)*        left associative
//   unary   := '-' unary | power
//   power   := primary ('^' exponent)*         exponent: non-negative integer literal
//   primary := number | 'pi' | variable | func '(' sum ')' | '(' sum ')'
class Parser {
  public:
    explicit Parser(std::string_view src) : lex_(src) {}

    NodePtr run(std::string& var) {
        NodePtr e = parse_sum();
        if (lex_.peek().kind != Token::end)
            throw ParseError("syntax error: unexpected token", lex_.peek().offset);
        var = var_;
        return e;
    }

  private:
    NodePtr parse_sum() {
        NodePtr lhs = parse_term();
        for (;;) {
            const Token& t = lex_.peek();
            if (t.kind == Token::plus || t.kind == Token::minus) {
                const auto kind = t.kind == Token::plus ? NodeKind::add : NodeKind::sub;
                lex_.take();
                NodePtr rhs = parse_term();
                lhs = make_node({.kind = kind, .lhs = lhs, .rhs = rhs});
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_unary();
        for (;;) {
            const Token& t = lex_.peek();
            if (t.kind == Token::star || t.kind == Token::slash) {
                const auto kind = t.kind == Token::star ? NodeKind::mul : NodeKind::div;
                lex_.take();
                NodePtr rhs = parse_unary();
                lhs = make_node({.kind = kind, .lhs = lhs, .rhs = rhs});
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_unary() {
        if (lex_.peek().kind == Token::minus) {
            lex_.take();
            NodePtr child = parse_unary();
            return make_node({.kind = NodeKind::neg, .lhs = child});
        }
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        while (lex_.peek().kind == Token::caret) {
            lex_.take();
            const Token t = lex_.peek();
            if (t.kind != Token::number)
                throw ParseError("exponent must be a non-negative integer literal", t.offset);
            const double v = t.value;
            if (v < 0.0 || v != std::floor(v) || v > 1e9)
                throw ParseError("exponent must be a non-negative integer literal", t.offset);
            lex_.take();
            base = make_node({.kind = NodeKind::pow, .exponent = static_cast<long long>(v), .lhs = base});
        }
        return base;
    }

    NodePtr parse_primary() {
        const Token t = lex_.peek();
        switch (t.kind) {
            case Token::number:
                lex_.take();
                return make_node({.kind = NodeKind::number, .number = t.value});
            case Token::lparen: {
                lex_.take();
                NodePtr inner = parse_sum();
                expect_rparen();
                return inner;
            }
            case Token::ident: {
                lex_.take();
                if (t.text == "pi") return make_node({.kind = NodeKind::pi});
                Func f;
                if (lookup_func(t.text, f)) {
                    if (lex_.peek().kind != Token::lparen)
                        throw ParseError("expected '(' after function name", lex_.peek().offset);
                    lex_.take();
                    NodePtr arg = parse_sum();
                    expect_rparen();
                    return make_node({.kind = NodeKind::call, .func = f, .lhs = arg});
                }
                if (var_.empty()) {
                    var_ = t.text;
                } else if (var_ != t.text) {
                    throw ParseError("unknown identifier '" + t.text + "'", t.offset);
                }
                return make_node({.kind = NodeKind::variable});
            }
            default:
                throw ParseError("syntax error: expected a value", t.offset);
        }
    }

    void expect_rparen() {
        const Token& t = lex_.peek();
        if (t.kind != Token::rparen) {
            if (t.kind == Token::end)
                throw ParseError("syntax error: expected ')' (unclosed parenthesis)", t.offset);
            throw ParseError("syntax error: expected ')'", t.offset);
        }
        lex_.take();
    }

    Lexer lex_;
    std::string var_;
};

inline std::string node_str(const Node& n);

inline int precedence(const Node& n) {
    switch (n.kind) {
        case NodeKind::add:
        case NodeKind::sub: return 1;
        case NodeKind::mul:
        case NodeKind::div: return 2;
        case NodeKind::neg: return 3;
        case NodeKind::pow: return 4;
        default: return 5;
    }
}

inline std::string child_str(const Node& c, int min_prec) {
    std::string s = node_str(c);
    if (precedence(c) < min_prec) return "(" + s + ")";
    return s;
}

inline std::string node_str(const Node& n) {
    switch (n.kind) {
        case NodeKind::number: return format_number(n.number);
        case NodeKind::pi: return "pi";
        case NodeKind::variable: return "@";  // patched by Expression::str
        case NodeKind::neg: return "-" + child_str(*n.lhs, 3);
        case NodeKind::add: return child_str(*n.lhs, 1) + " + " + child_str(*n.rhs, 2);
        case NodeKind::sub: return child_str(*n.lhs, 1) + " - " + child_str(*n.rhs, 2);
        case NodeKind::mul: return child_str(*n.lhs, 2) + "*" + child_str(*n.rhs, 3);
        case NodeKind::div: return child_str(*n.lhs, 2) + "/" + child_str(*n.rhs, 3);
        case NodeKind::pow: return child_str(*n.lhs, 4) + "^" + std::to_string(n.exponent);
        case NodeKind::call: return std::string(func_name(n.func)) + "(" + node_str(*n.lhs) + ")";
    }
    return "?";
}

[[noreturn]] inline void domain_error(const char* what, const Node& n) {
    throw EvalError(std::string(what) + " in '" + node_str(n) + "'");
}

inline double eval_node(const Node& n, double x) {
    switch (n.kind) {
        case NodeKind::number: return n.number;
        case NodeKind::pi: return std::numbers::pi;
        case NodeKind::variable: return x;
        case NodeKind::neg: return -eval_node(*n.lhs, x);
        case NodeKind::add: return eval_node(*n.lhs, x) + eval_node(*n.rhs, x);
        case NodeKind::sub: return eval_node(*n.lhs, x) - eval_node(*n.rhs, x);
        case NodeKind::mul: return eval_node(*n.lhs, x) * eval_node(*n.rhs, x);
        case NodeKind::div: {
            const double den = eval_node(*n.rhs, x);
            if (den == 0.0) domain_error("division by zero", n);
            return eval_node(*n.lhs, x) / den;
        }
        case NodeKind::pow: {
            double b = eval_node(*n.lhs, x), r = 1.0;
            for (long long i = 0; i < n.exponent; ++i) r *= b;
            return r;
        }
        case NodeKind::call: {
            const double a = eval_node(*n.lhs, x);
            switch (n.func) {
                case Func::sin: return std::sin(a);
                case Func::cos: return std::cos(a);
                case Func::exp: return std::exp(a);
                case Func::atan: return std::atan(a);
                case Func::log:
                    if (a <= 0.0) domain_error("log of non-positive value", n);
                    return std::log(a);
                case Func::sqrt:
                    if (a < 0.0) domain_error("sqrt of negative value", n);
                    return std::sqrt(a);
            }
            return 0.0;
        }
    }
    return 0.0;
}

inline std::array<double, Jet::max_order + 1> outer_derivs(Func f, double a, int order, const Node& n) {
    std::array<double, Jet::max_order + 1> w{};
    switch (f) {
        case Func::sin: w = {std::sin(a), std::cos(a), -std::sin(a), -std::cos(a), std::sin(a)}; break;
        case Func::cos: w = {std::cos(a), -std::sin(a), -std::cos(a), std::sin(a), std::cos(a)}; break;
        case Func::exp: {
            const double e = std::exp(a);
            w = {e, e, e, e, e};
            break;
        }
        case Func::atan: {
            const double q = 1.0 + a * a;
            w = {std::atan(a), 1.0 / q, -2.0 * a / (q * q), (6.0 * a * a - 2.0) / (q * q * q),
                 24.0 * a * (1.0 - a * a) / (q * q * q * q)};
            break;
        }
        case Func::log: {
            if (a <= 0.0) domain_error("log of non-positive value", n);
            w = {std::log(a), 1.0 / a, -1.0 / (a * a), 2.0 / (a * a * a), -6.0 / (a * a * a * a)};
            break;
        }
        case Func::sqrt: {
            if (a < 0.0 || (a == 0.0 && order >= 1)) domain_error("sqrt outside differentiable domain", n);
            const double s = std::sqrt(a);
            w[0] = s;
            if (order >= 1) w[1] = 0.5 / s;
            if (order >= 2) w[2] = -0.25 / (s * a);
            if (order >= 3) w[3] = 0.375 / (s * a * a);
            if (order >= 4) w[4] = -0.9375 / (s * a * a * a);
            break;
        }
    }
    return w;
}

inline Jet eval_jet_node(const Node& n, double x, int order) {
    switch (n.kind) {
        case NodeKind::number: return Jet::constant(n.number, order);
        case NodeKind::pi: return Jet::constant(std::numbers::pi, order);
        case NodeKind::variable: return Jet::variable(x, order);
        case NodeKind::neg: return -eval_jet_node(*n.lhs, x, order);
        case NodeKind::add: return eval_jet_node(*n.lhs, x, order) + eval_jet_node(*n.rhs, x, order);
        case NodeKind::sub: return eval_jet_node(*n.lhs, x, order) - eval_jet_node(*n.rhs, x, order);
        case NodeKind::mul: return eval_jet_node(*n.lhs, x, order) * eval_jet_node(*n.rhs, x, order);
        case NodeKind::div: {
            const Jet den = eval_jet_node(*n.rhs, x, order);
            if (den.d[0] == 0.0) domain_error("division by zero", n);
            return eval_jet_node(*n.lhs, x, order) / den;
        }
        case NodeKind::pow: return jet_pow(eval_jet_node(*n.lhs, x, order), n.exponent);
        case NodeKind::call: {
            const Jet u = eval_jet_node(*n.lhs, x, order);
            return jet_compose(outer_derivs(n.func, u.d[0], order, n), u);
        }
    }
    return Jet::constant(0.0, order);
}

inline bool nodes_equal(const Node& a, const Node& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case NodeKind::number: return a.number == b.number;
        case NodeKind::pi:
        case NodeKind::variable: return true;
        case NodeKind::pow: return a.exponent == b.exponent && nodes_equal(*a.lhs, *b.lhs);
        case NodeKind::neg: return nodes_equal(*a.lhs, *b.lhs);
        case NodeKind::call: return a.func == b.func && nodes_equal(*a.lhs, *b.lhs);
        default: return nodes_equal(*a.lhs, *b.lhs) && nodes_equal(*a.rhs, *b.rhs);
    }
}

}  // namespace detail

inline Expression Expression::parse(std::string_view source) {
    if (source.empty()) throw ParseError("empty expression", 0);
    detail::Parser p(source);
    std::string var;
    detail::NodePtr root = p.run(var);
    return Expression(std::move(root), std::move(var));
}

inline double Expression::eval(double x) const {
    if (!root_) throw EvalError("empty expression");
    return detail::eval_node(*root_, x);
}

inline Jet Expression::eval_jet(double point, int order) const {
    if (!root_) throw EvalError("empty expression");
    if (order < 0 || order > Jet::max_order)
        throw std::invalid_argument("jet order must be in [0, 4]");
    return detail::eval_jet_node(*root_, point, order);
}

inline std::string Expression::str() const {
    if (!root_) return "";
    std::string s = detail::node_str(*root_);
    const std::string name = var_.empty() ? "x" : var_;
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '@') out += name;
        else out += c;
    }
    return out;
}

inline bool same_structure(const Expression& a, const Expression& b) {
    if (!a.root_ || !b.root_) return a.root_ == b.root_;
    return detail::nodes_equal(*a.root_, *b.root_);
}

/// Convenience wrappers mirroring the library's operation names.
inline Expression parse(std::string_view source) { return Expression::parse(source); }
inline Jet eval_jet(const Expression& e, double point, int order) { return e.eval_jet(point, order); }

}  // namespace gburgers
