#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include "delayosc/errors.hpp"

namespace delayosc {

/// Immutable expression in one variable t over {+, -, *, /, ^, sin, cos, exp}
/// with symbolic differentiation. This is the front end for user-supplied
/// history and forcing functions; the solver needs phi' and phi'' exactly,
/// so derivatives are taken on the tree, never numerically.
///
/// Grammar (EBNF, whitespace insensitive):
///   expr   = term  { ("+" | "-") term } ;
///   term   = unary { ("*" | "/") unary } ;
///   unary  = "-" unary | power ;
///   power  = atom { "^" integer } ;
///   atom   = number | "t" | ("sin" | "cos" | "exp") "(" expr ")" | "(" expr ")" ;
/// "^" binds tighter than unary minus: -t^2 parses as -(t^2).
class Expression {
    struct Node;
    using NodePtr = std::shared_ptr<const Node>;

    enum class Kind { Constant, Time, Negate, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp };

    struct Node {
        explicit Node(Kind k) : kind(k) {}
        Node(Kind k, double v) : kind(k), value(v) {}

        Kind kind;
        double value = 0.0;  // Constant
        int exponent = 0;    // Pow
        NodePtr lhs, rhs;
    };

public:
    Expression() : root_(constant_node(0.0)) {}

    static Expression parse(std::string_view text) {
        Parser p{text, 0};
        Expression e(p.parse_expr());
        p.skip_ws();
        if (p.pos != text.size()) {
            throw SyntaxError("unexpected trailing input", p.pos);
        }
        return e;
    }

    static Expression constant(double v) { return Expression(constant_node(v)); }
    static Expression time_variable() { return Expression(std::make_shared<Node>(Kind::Time)); }
    static Expression sin(const Expression& e) { return Expression(unary(Kind::Sin, e.root_)); }
    static Expression cos(const Expression& e) { return Expression(unary(Kind::Cos, e.root_)); }
    static Expression exp(const Expression& e) { return Expression(unary(Kind::Exp, e.root_)); }
    static Expression pow(const Expression& base, int exponent) {
        if (exponent < 0) throw InvalidParameter("Expression::pow: exponent must be >= 0");
        return Expression(make_pow(base.root_, exponent));
    }

    double operator()(double t) const { return eval_node(*root_, t); }

    Expression derivative() const { return Expression(diff(root_)); }

    /// Canonical printable form; parse(str()) evaluates identically.
    std::string str() const { return print(*root_, 0); }

    friend Expression operator+(const Expression& a, const Expression& b) {
        return Expression(make_add(a.root_, b.root_));
    }
    friend Expression operator-(const Expression& a, const Expression& b) {
        return Expression(make_sub(a.root_, b.root_));
    }
    friend Expression operator*(const Expression& a, const Expression& b) {
        return Expression(make_mul(a.root_, b.root_));
    }
    friend Expression operator/(const Expression& a, const Expression& b) {
        return Expression(make_div(a.root_, b.root_));
    }
    friend Expression operator*(double c, const Expression& e) {
        return Expression(make_mul(constant_node(c), e.root_));
    }
    friend Expression operator-(const Expression& e) {
        return Expression(make_neg(e.root_));
    }

private:
    explicit Expression(NodePtr root) : root_(std::move(root)) {}

    static NodePtr constant_node(double v) {
        return std::make_shared<Node>(Kind::Constant, v);
    }

    static NodePtr unary(Kind k, NodePtr a) {
        Node n{k};
        n.lhs = std::move(a);
        return std::make_shared<Node>(std::move(n));
    }

    static NodePtr binary(Kind k, NodePtr a, NodePtr b) {
        Node n{k};
        n.lhs = std::move(a);
        n.rhs = std::move(b);
        return std::make_shared<Node>(std::move(n));
    }

    static bool is_const(const NodePtr& n, double v) {
        return n->kind == Kind::Constant && n->value == v;
    }

    // Simplifying constructors: constant folding plus zero/one elimination.
    static NodePtr make_add(NodePtr a, NodePtr b) {
        if (a->kind == Kind::Constant && b->kind == Kind::Constant) {
            return constant_node(a->value + b->value);
        }
        if (is_const(a, 0.0)) return b;
        if (is_const(b, 0.0)) return a;
        return binary(Kind::Add, std::move(a), std::move(b));
    }

    static NodePtr make_sub(NodePtr a, NodePtr b) {
        if (a->kind == Kind::Constant && b->kind == Kind::Constant) {
            return constant_node(a->value - b->value);
        }
        if (is_const(b, 0.0)) return a;
        if (is_const(a, 0.0)) return make_neg(std::move(b));
        return binary(Kind::Sub, std::move(a), std::move(b));
    }

    static NodePtr make_mul(NodePtr a, NodePtr b) {
        if (a->kind == Kind::Constant && b->kind == Kind::Constant) {
            return constant_node(a->value * b->value);
        }
        if (is_const(a, 0.0) || is_const(b, 0.0)) return constant_node(0.0);
        if (is_const(a, 1.0)) return b;
        if (is_const(b, 1.0)) return a;
        return binary(Kind::Mul, std::move(a), std::move(b));
    }

    static NodePtr make_div(NodePtr a, NodePtr b) {
        if (is_const(a, 0.0)) return constant_node(0.0);
        if (is_const(b, 1.0)) return a;
        return binary(Kind::Div, std::move(a), std::move(b));
    }

    static NodePtr make_neg(NodePtr a) {
        if (a->kind == Kind::Constant) return constant_node(-a->value);
        if (a->kind == Kind::Negate) return a->lhs;
        return unary(Kind::Negate, std::move(a));
    }

    static NodePtr make_pow(NodePtr base, int exponent) {
        if (exponent == 0) return constant_node(1.0);
        if (exponent == 1) return base;
        if (base->kind == Kind::Constant) {
            double acc = 1.0;
            for (int i = 0; i < exponent; ++i) acc *= base->value;
            return constant_node(acc);
        }
        Node n{Kind::Pow};
        n.exponent = exponent;
        n.lhs = std::move(base);
        return std::make_shared<Node>(std::move(n));
    }

    static double eval_node(const Node& n, double t) {
        switch (n.kind) {
            case Kind::Constant: return n.value;
            case Kind::Time: return t;
            case Kind::Negate: return -eval_node(*n.lhs, t);
            case Kind::Add: return eval_node(*n.lhs, t) + eval_node(*n.rhs, t);
            case Kind::Sub: return eval_node(*n.lhs, t) - eval_node(*n.rhs, t);
            case Kind::Mul: return eval_node(*n.lhs, t) * eval_node(*n.rhs, t);
            case Kind::Div: {
                const double denom = eval_node(*n.rhs, t);
                const double out = eval_node(*n.lhs, t) / denom;
                if (!std::isfinite(out)) throw EvalError("division produced a non-finite value");
                return out;
            }
            case Kind::Pow: {
                const double base = eval_node(*n.lhs, t);
                double acc = 1.0;
                for (int i = 0; i < n.exponent; ++i) acc *= base;
                return acc;
            }
            case Kind::Sin: return std::sin(eval_node(*n.lhs, t));
            case Kind::Cos: return std::cos(eval_node(*n.lhs, t));
            case Kind::Exp: return std::exp(eval_node(*n.lhs, t));
        }
        throw EvalError("corrupt expression node");
    }

    static NodePtr diff(const NodePtr& n) {
        switch (n->kind) {
            case Kind::Constant: return constant_node(0.0);
            case Kind::Time: return constant_node(1.0);
            case Kind::Negate: return make_neg(diff(n->lhs));
            case Kind::Add: return make_add(diff(n->lhs), diff(n->rhs));
            case Kind::Sub: return make_sub(diff(n->lhs), diff(n->rhs));
            case Kind::Mul:
                return make_add(make_mul(diff(n->lhs), n->rhs), make_mul(n->lhs, diff(n->rhs)));
            case Kind::Div:
                // (u/v)' = (u'v - uv') / v^2
                return make_div(make_sub(make_mul(diff(n->lhs), n->rhs), make_mul(n->lhs, diff(n->rhs))),
                                make_pow(n->rhs, 2));
            case Kind::Pow:
                // n * u^(n-1) * u'
                return make_mul(constant_node(static_cast<double>(n->exponent)),
                                make_mul(make_pow(n->lhs, n->exponent - 1), diff(n->lhs)));
            case Kind::Sin: return make_mul(unary(Kind::Cos, n->lhs), diff(n->lhs));
            case Kind::Cos: return make_neg(make_mul(unary(Kind::Sin, n->lhs), diff(n->lhs)));
            case Kind::Exp: return make_mul(unary(Kind::Exp, n->lhs), diff(n->lhs));
        }
        throw EvalError("corrupt expression node");
    }

    // Precedence levels for printing: 0 add, 1 mul, 2 unary, 3 pow/atom.
    static int precedence(Kind k) {
        switch (k) {
            case Kind::Add:
            case Kind::Sub: return 0;
            case Kind::Mul:
            case Kind::Div: return 1;
            case Kind::Negate: return 2;
            case Kind::Pow: return 3;
            default: return 4;
        }
    }

    static std::string format_double(double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return buf;
    }

    static std::string print(const Node& n, int parent_prec) {
        const int prec = precedence(n.kind);
        std::string out;
        switch (n.kind) {
            case Kind::Constant:
                out = format_double(n.value);
                if (n.value < 0.0) out = "(" + out + ")";
                return out;
            case Kind::Time: return "t";
            case Kind::Negate: out = "-" + print(*n.lhs, prec); break;
            case Kind::Add: out = print(*n.lhs, prec) + " + " + print(*n.rhs, prec + 1); break;
            case Kind::Sub: out = print(*n.lhs, prec) + " - " + print(*n.rhs, prec + 1); break;
            case Kind::Mul: out = print(*n.lhs, prec) + "*" + print(*n.rhs, prec + 1); break;
            case Kind::Div: out = print(*n.lhs, prec) + "/" + print(*n.rhs, prec + 1); break;
            case Kind::Pow:
                out = print(*n.lhs, prec + 1) + "^" + std::to_string(n.exponent);
                break;
            case Kind::Sin: return "sin(" + print(*n.lhs, 0) + ")";
            case Kind::Cos: return "cos(" + print(*n.lhs, 0) + ")";
            case Kind::Exp: return "exp(" + print(*n.lhs, 0) + ")";
        }
        if (prec < parent_prec) out = "(" + out + ")";
        return out;
    }

    struct Parser {
        std::string_view text;
        std::size_t pos;

        void skip_ws() {
            while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        }

        bool consume(char c) {
            skip_ws();
            if (pos < text.size() && text[pos] == c) {
                ++pos;
                return true;
            }
            return false;
        }

        char peek() {
            skip_ws();
            return pos < text.size() ? text[pos] : '\0';
        }

        NodePtr parse_expr() {
            NodePtr lhs = parse_term();
            for (;;) {
                if (consume('+')) {
                    lhs = binary(Kind::Add, std::move(lhs), parse_term());
                } else if (consume('-')) {
                    lhs = binary(Kind::Sub, std::move(lhs), parse_term());
                } else {
                    return lhs;
                }
            }
        }

        NodePtr parse_term() {
            NodePtr lhs = parse_unary();
            for (;;) {
                if (consume('*')) {
                    lhs = binary(Kind::Mul, std::move(lhs), parse_unary());
                } else if (consume('/')) {
                    lhs = binary(Kind::Div, std::move(lhs), parse_unary());
                } else {
                    return lhs;
                }
            }
        }

        NodePtr parse_unary() {
            if (consume('-')) return unary(Kind::Negate, parse_unary());
            return parse_power();
        }

        NodePtr parse_power() {
            NodePtr base = parse_atom();
            while (consume('^')) {
                skip_ws();
                const std::size_t at = pos;
                int exponent = 0;
                if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) {
                    throw SyntaxError("expected a nonnegative integer exponent", at);
                }
                auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), exponent);
                if (ec != std::errc{}) {
                    throw SyntaxError("expected a nonnegative integer exponent", at);
                }
                pos = static_cast<std::size_t>(ptr - text.data());
                Node n{Kind::Pow};
                n.exponent = exponent;
                n.lhs = std::move(base);
                base = std::make_shared<Node>(std::move(n));
            }
            return base;
        }

        NodePtr parse_atom() {
            skip_ws();
            if (pos >= text.size()) {
                throw SyntaxError("expected a number, 't', a function or '('", pos);
            }
            const char c = text[pos];
            if (c == '(') {
                ++pos;
                NodePtr inner = parse_expr();
                if (!consume(')')) throw SyntaxError("expected ')'", pos);
                return inner;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
            throw SyntaxError("expected a number, 't', a function or '('", pos);
        }

        NodePtr parse_number() {
            const std::size_t at = pos;
            double value = 0.0;
            auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), value);
            if (ec != std::errc{}) throw SyntaxError("malformed number", at);
            pos = static_cast<std::size_t>(ptr - text.data());
            return constant_node(value);
        }

        NodePtr parse_identifier() {
            const std::size_t at = pos;
            while (pos < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
                ++pos;
            }
            const std::string_view name = text.substr(at, pos - at);
            if (name == "t") return std::make_shared<Node>(Kind::Time);
            if (name == "sin" || name == "cos" || name == "exp") {
                if (!consume('(')) throw SyntaxError("expected '(' after function name", pos);
                NodePtr arg = parse_expr();
                if (!consume(')')) throw SyntaxError("expected ')'", pos);
                const Kind k = name == "sin" ? Kind::Sin : name == "cos" ? Kind::Cos : Kind::Exp;
                return unary(k, std::move(arg));
            }
            throw UnknownIdentifier(std::string(name), at);
        }
    };

    NodePtr root_;
};

}  // namespace delayosc
