#ifndef TDNET_EXPR_HPP
#define TDNET_EXPR_HPP

#include <cctype>
#include <cmath>
#include <cstdio>
#include <memory>
#include <sstream>
#include <string>
#include <utility>

#include "tdnet/errors.hpp"

namespace tdnet {

// Closed expression grammar over the variables `t` (time) and `x` (a coupled
// divergence value): constants, + - * /, sin, cos, exp, and ^ with a constant
// exponent. Trees are immutable; differentiation is analytic.
class Expr {
public:
    enum class Kind { Const, VarT, VarX, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Neg };

    Expr() : Expr(constant(0.0)) {}

    static Expr constant(double v) {
        auto n = std::make_shared<Node>();
        n->value = v;
        return Expr(std::shared_ptr<const Node>(std::move(n)));
    }
    static Expr t() { return leaf(Kind::VarT); }
    static Expr x() { return leaf(Kind::VarX); }

    friend Expr operator+(const Expr& a, const Expr& b) {
        if (a.is_const(0)) return b;
        if (b.is_const(0)) return a;
        if (a.is_const() && b.is_const()) return constant(a.node_->value + b.node_->value);
        return binary(Kind::Add, a, b);
    }
    friend Expr operator-(const Expr& a, const Expr& b) {
        if (b.is_const(0)) return a;
        if (a.is_const() && b.is_const()) return constant(a.node_->value - b.node_->value);
        return binary(Kind::Sub, a, b);
    }
    friend Expr operator*(const Expr& a, const Expr& b) {
        if (a.is_const(0) || b.is_const(0)) return constant(0);
        if (a.is_const(1)) return b;
        if (b.is_const(1)) return a;
        if (a.is_const() && b.is_const()) return constant(a.node_->value * b.node_->value);
        return binary(Kind::Mul, a, b);
    }
    friend Expr operator/(const Expr& a, const Expr& b) {
        if (a.is_const(0)) return constant(0);
        if (b.is_const(1)) return a;
        if (a.is_const() && b.is_const() && b.node_->value != 0)
            return constant(a.node_->value / b.node_->value);
        return binary(Kind::Div, a, b);
    }
    friend Expr operator-(const Expr& a) {
        if (a.is_const()) return constant(-a.node_->value);
        auto n = std::make_shared<Node>();
        n->kind = Kind::Neg;
        n->lhs = a.node_;
        return Expr(std::shared_ptr<const Node>(std::move(n)));
    }
    static Expr sin(const Expr& a) { return unary(Kind::Sin, a); }
    static Expr cos(const Expr& a) { return unary(Kind::Cos, a); }
    static Expr exp(const Expr& a) { return unary(Kind::Exp, a); }
    static Expr pow(const Expr& base, double exponent) {
        if (exponent == 0.0) return constant(1);
        if (exponent == 1.0) return base;
        if (base.is_const()) return constant(std::pow(base.node_->value, exponent));
        Expr e = binary(Kind::Pow, base, constant(exponent));
        return e;
    }

    double eval(double t_val, double x_val = 0.0) const { return eval_node(*node_, t_val, x_val); }

    bool uses_x() const { return uses(Kind::VarX); }
    bool uses_t() const { return uses(Kind::VarT); }

    // d/dt or d/dx.
    Expr diff_t() const { return diff(*node_, true); }
    Expr diff_x() const { return diff(*node_, false); }

    std::string str() const {
        std::ostringstream os;
        print(*node_, os);
        return os.str();
    }

    // Recursive-descent parser for the grammar above.
    static Expr parse(const std::string& text) {
        Parser p{text, 0};
        Expr e = p.parse_expr();
        p.skip_ws();
        if (p.pos != text.size())
            throw ParseError("trailing characters in expression: '" + text.substr(p.pos) + "'");
        return e;
    }

private:
    struct Node {
        Kind kind = Kind::Const;
        double value = 0.0;
        std::shared_ptr<const Node> lhs, rhs;
    };

    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    static Expr leaf(Kind k) {
        auto n = std::make_shared<Node>();
        n->kind = k;
        return Expr(std::shared_ptr<const Node>(std::move(n)));
    }

    std::shared_ptr<const Node> node_;

    bool is_const() const { return node_->kind == Kind::Const; }
    bool is_const(double v) const { return is_const() && node_->value == v; }

    static Expr binary(Kind k, const Expr& a, const Expr& b) {
        auto n = std::make_shared<Node>();
        n->kind = k;
        n->lhs = a.node_;
        n->rhs = b.node_;
        return Expr(std::shared_ptr<const Node>(n));
    }
    static Expr unary(Kind k, const Expr& a) {
        if (a.is_const()) {
            double v = a.node_->value;
            switch (k) {
                case Kind::Sin: return constant(std::sin(v));
                case Kind::Cos: return constant(std::cos(v));
                case Kind::Exp: return constant(std::exp(v));
                default: break;
            }
        }
        auto n = std::make_shared<Node>();
        n->kind = k;
        n->lhs = a.node_;
        return Expr(std::shared_ptr<const Node>(n));
    }

    static double eval_node(const Node& n, double t, double x) {
        switch (n.kind) {
            case Kind::Const: return n.value;
            case Kind::VarT: return t;
            case Kind::VarX: return x;
            case Kind::Add: return eval_node(*n.lhs, t, x) + eval_node(*n.rhs, t, x);
            case Kind::Sub: return eval_node(*n.lhs, t, x) - eval_node(*n.rhs, t, x);
            case Kind::Mul: return eval_node(*n.lhs, t, x) * eval_node(*n.rhs, t, x);
            case Kind::Div: return eval_node(*n.lhs, t, x) / eval_node(*n.rhs, t, x);
            case Kind::Pow: return std::pow(eval_node(*n.lhs, t, x), n.rhs->value);
            case Kind::Sin: return std::sin(eval_node(*n.lhs, t, x));
            case Kind::Cos: return std::cos(eval_node(*n.lhs, t, x));
            case Kind::Exp: return std::exp(eval_node(*n.lhs, t, x));
            case Kind::Neg: return -eval_node(*n.lhs, t, x);
        }
        return 0.0;
    }

    bool uses(Kind k) const { return uses_node(*node_, k); }
    static bool uses_node(const Node& n, Kind k) {
        if (n.kind == k) return true;
        if (n.lhs && uses_node(*n.lhs, k)) return true;
        if (n.rhs && uses_node(*n.rhs, k)) return true;
        return false;
    }

    static Expr diff(const Node& n, bool wrt_t) {
        const Expr a = n.lhs ? Expr(n.lhs) : Expr();
        const Expr b = n.rhs ? Expr(n.rhs) : Expr();
        switch (n.kind) {
            case Kind::Const: return constant(0);
            case Kind::VarT: return constant(wrt_t ? 1 : 0);
            case Kind::VarX: return constant(wrt_t ? 0 : 1);
            case Kind::Add: return diff(*n.lhs, wrt_t) + diff(*n.rhs, wrt_t);
            case Kind::Sub: return diff(*n.lhs, wrt_t) - diff(*n.rhs, wrt_t);
            case Kind::Mul: return diff(*n.lhs, wrt_t) * b + a * diff(*n.rhs, wrt_t);
            case Kind::Div:
                return (diff(*n.lhs, wrt_t) * b - a * diff(*n.rhs, wrt_t)) / (b * b);
            case Kind::Pow: {
                double k = n.rhs->value;
                return constant(k) * pow(a, k - 1) * diff(*n.lhs, wrt_t);
            }
            case Kind::Sin: return cos(a) * diff(*n.lhs, wrt_t);
            case Kind::Cos: return -(sin(a) * diff(*n.lhs, wrt_t));
            case Kind::Exp: return exp(a) * diff(*n.lhs, wrt_t);
            case Kind::Neg: return -diff(*n.lhs, wrt_t);
        }
        return constant(0);
    }

    static void print(const Node& n, std::ostringstream& os) {
        switch (n.kind) {
            case Kind::Const: {
                char buf[40];
                std::snprintf(buf, sizeof(buf), "%.17g", n.value);
                os << buf;
                break;
            }
            case Kind::VarT: os << 't'; break;
            case Kind::VarX: os << 'x'; break;
            case Kind::Add: os << '('; print(*n.lhs, os); os << " + "; print(*n.rhs, os); os << ')'; break;
            case Kind::Sub: os << '('; print(*n.lhs, os); os << " - "; print(*n.rhs, os); os << ')'; break;
            case Kind::Mul: os << '('; print(*n.lhs, os); os << " * "; print(*n.rhs, os); os << ')'; break;
            case Kind::Div: os << '('; print(*n.lhs, os); os << " / "; print(*n.rhs, os); os << ')'; break;
            case Kind::Pow: os << '('; print(*n.lhs, os); os << '^'; print(*n.rhs, os); os << ')'; break;
            case Kind::Sin: os << "sin("; print(*n.lhs, os); os << ')'; break;
            case Kind::Cos: os << "cos("; print(*n.lhs, os); os << ')'; break;
            case Kind::Exp: os << "exp("; print(*n.lhs, os); os << ')'; break;
            case Kind::Neg: os << "(-"; print(*n.lhs, os); os << ')'; break;
        }
    }

    struct Parser {
        const std::string& s;
        size_t pos;

        void skip_ws() {
            while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        }
        bool eat(char c) {
            skip_ws();
            if (pos < s.size() && s[pos] == c) { ++pos; return true; }
            return false;
        }
        Expr parse_expr() {
            Expr e = parse_term();
            for (;;) {
                if (eat('+')) e = e + parse_term();
                else if (eat('-')) e = e - parse_term();
                else return e;
            }
        }
        Expr parse_term() {
            Expr e = parse_factor();
            for (;;) {
                if (eat('*')) e = e * parse_factor();
                else if (eat('/')) e = e / parse_factor();
                else return e;
            }
        }
        Expr parse_factor() {
            Expr base = parse_unary();
            if (eat('^')) {
                Expr exp_part = parse_unary();
                if (!exp_part.is_const())
                    throw ParseError("exponent must be a constant");
                return Expr::pow(base, exp_part.node_->value);
            }
            return base;
        }
        Expr parse_unary() {
            if (eat('-')) return -parse_unary();
            return parse_primary();
        }
        Expr parse_primary() {
            skip_ws();
            if (pos >= s.size()) throw ParseError("unexpected end of expression");
            char c = s[pos];
            if (c == '(') {
                ++pos;
                Expr e = parse_expr();
                if (!eat(')')) throw ParseError("expected ')'");
                return e;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                size_t end = pos;
                while (end < s.size() &&
                       (std::isdigit(static_cast<unsigned char>(s[end])) || s[end] == '.' ||
                        s[end] == 'e' || s[end] == 'E' ||
                        ((s[end] == '+' || s[end] == '-') && end > pos &&
                         (s[end - 1] == 'e' || s[end - 1] == 'E'))))
                    ++end;
                double v = std::stod(s.substr(pos, end - pos));
                pos = end;
                return Expr::constant(v);
            }
            if (std::isalpha(static_cast<unsigned char>(c))) {
                size_t end = pos;
                while (end < s.size() && std::isalpha(static_cast<unsigned char>(s[end]))) ++end;
                std::string name = s.substr(pos, end - pos);
                pos = end;
                if (name == "t") return Expr::t();
                if (name == "x") return Expr::x();
                if (name == "pi") return Expr::constant(3.14159265358979323846);
                if (!eat('(')) throw ParseError("expected '(' after '" + name + "'");
                Expr arg = parse_expr();
                if (!eat(')')) throw ParseError("expected ')'");
                if (name == "sin") return Expr::sin(arg);
                if (name == "cos") return Expr::cos(arg);
                if (name == "exp") return Expr::exp(arg);
                throw ParseError("unknown function '" + name + "'");
            }
            throw ParseError(std::string("unexpected character '") + c + "'");
        }
    };
};

} // namespace tdnet

#endif
