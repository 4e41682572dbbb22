#pragma once
// Arithmetic expressions in one variable x.
//
// Grammar (no implicit multiplication):
//   expr    := term (('+'|'-') term)*
//   term    := unary (('*'|'/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | 'x' | 'pi' | name '(' expr ')' | '(' expr ')'
// Functions: cos sin exp ln sqrt abs. Unary minus binds looser than '^',
// so -2^2 is -(2^2).

#include <cctype>
#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

#include "dispersal/grid.hpp"

namespace dispersal {

struct SyntaxError : std::runtime_error {
    std::size_t position;
    SyntaxError(std::size_t pos, const std::string& msg)
        : std::runtime_error(msg + " (offset " + std::to_string(pos) + ")"),
          position(pos) {}
};

struct DomainError : std::runtime_error {
    int node_index;  // grid node during sampling, -1 for scalar evaluation
    explicit DomainError(const std::string& msg, int node = -1)
        : std::runtime_error(msg), node_index(node) {}
};

class Expression {
    enum class Kind { literal, variable, pi_constant, negate, add, sub, mul, div, pow_op, call };
    enum class Func { cos_fn, sin_fn, exp_fn, ln_fn, sqrt_fn, abs_fn };

    struct Node {
        Kind kind;
        double value = 0.0;                  // literal
        Func func = Func::cos_fn;            // call
        std::shared_ptr<const Node> a, b;    // operands
    };
    using NodePtr = std::shared_ptr<const Node>;

public:
    static Expression parse(const std::string& text) {
        Parser p{text, 0};
        NodePtr root = p.parse_expr();
        p.skip_ws();
        if (p.pos != text.size())
            throw SyntaxError(p.pos, "unexpected trailing input");
        return Expression(std::move(root), text);
    }

    double evaluate(double x) const { return eval(*root_, x); }

    // Minimal-parentheses rendering; parses back to an equivalent tree.
    std::string to_string() const { return print(*root_, 0); }

    // Original text as given to parse(), kept for file round trips.
    const std::string& source() const { return source_; }

private:
    Expression(NodePtr root, std::string source)
        : root_(std::move(root)), source_(std::move(source)) {}

    struct Parser {
        const std::string& s;
        std::size_t pos;

        void skip_ws() {
            while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        }
        bool eat(char c) {
            skip_ws();
            if (pos < s.size() && s[pos] == c) { ++pos; return true; }
            return false;
        }

        NodePtr parse_expr() {
            NodePtr lhs = parse_term();
            for (;;) {
                if (eat('+')) lhs = binary(Kind::add, lhs, parse_term());
                else if (eat('-')) lhs = binary(Kind::sub, lhs, parse_term());
                else return lhs;
            }
        }

        NodePtr parse_term() {
            NodePtr lhs = parse_unary();
            for (;;) {
                if (eat('*')) lhs = binary(Kind::mul, lhs, parse_unary());
                else if (eat('/')) lhs = binary(Kind::div, lhs, parse_unary());
                else return lhs;
            }
        }

        NodePtr parse_unary() {
            if (eat('-')) {
                auto n = std::make_shared<Node>();
                n->kind = Kind::negate;
                n->a = parse_unary();
                return n;
            }
            return parse_power();
        }

        NodePtr parse_power() {
            NodePtr base = parse_primary();
            if (eat('^')) return binary(Kind::pow_op, base, parse_unary());
            return base;
        }

        NodePtr parse_primary() {
            skip_ws();
            if (pos >= s.size()) throw SyntaxError(pos, "expected expression");
            char c = s[pos];
            if (c == '(') {
                ++pos;
                NodePtr inner = parse_expr();
                if (!eat(')')) throw SyntaxError(pos, "expected ')'");
                return inner;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_name();
            throw SyntaxError(pos, std::string("unexpected character '") + c + "'");
        }

        NodePtr parse_number() {
            std::size_t start = pos;
            bool digits = false;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) { ++pos; digits = true; }
            if (pos < s.size() && s[pos] == '.') {
                ++pos;
                while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) { ++pos; digits = true; }
            }
            if (!digits) throw SyntaxError(start, "malformed number");
            if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
                std::size_t mark = pos++;
                if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
                if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
                    throw SyntaxError(mark, "malformed exponent");
                while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            }
            auto n = std::make_shared<Node>();
            n->kind = Kind::literal;
            try {
                n->value = std::stod(s.substr(start, pos - start));
            } catch (const std::out_of_range&) {
                throw SyntaxError(start, "number out of range");
            }
            return n;
        }

        NodePtr parse_name() {
            std::size_t start = pos;
            while (pos < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
                ++pos;
            std::string name = s.substr(start, pos - start);
            auto n = std::make_shared<Node>();
            if (name == "x") { n->kind = Kind::variable; return n; }
            if (name == "pi") { n->kind = Kind::pi_constant; return n; }
            Func f;
            if (name == "cos") f = Func::cos_fn;
            else if (name == "sin") f = Func::sin_fn;
            else if (name == "exp") f = Func::exp_fn;
            else if (name == "ln") f = Func::ln_fn;
            else if (name == "sqrt") f = Func::sqrt_fn;
            else if (name == "abs") f = Func::abs_fn;
            else throw SyntaxError(start, "unknown identifier '" + name + "'");
            if (!eat('(')) throw SyntaxError(pos, "expected '(' after function name");
            n->kind = Kind::call;
            n->func = f;
            n->a = parse_expr();
            if (!eat(')')) throw SyntaxError(pos, "expected ')'");
            return n;
        }

        static NodePtr binary(Kind k, NodePtr a, NodePtr b) {
            auto n = std::make_shared<Node>();
            n->kind = k;
            n->a = std::move(a);
            n->b = std::move(b);
            return n;
        }
    };

    static double checked(double v, const char* what) {
        if (!std::isfinite(v)) throw DomainError(std::string("non-finite result in ") + what);
        return v;
    }

    static double eval(const Node& n, double x) {
        switch (n.kind) {
            case Kind::literal: return n.value;
            case Kind::variable: return x;
            case Kind::pi_constant: return 3.14159265358979323846;
            case Kind::negate: return -eval(*n.a, x);
            case Kind::add: return checked(eval(*n.a, x) + eval(*n.b, x), "addition");
            case Kind::sub: return checked(eval(*n.a, x) - eval(*n.b, x), "subtraction");
            case Kind::mul: return checked(eval(*n.a, x) * eval(*n.b, x), "multiplication");
            case Kind::div: {
                double num = eval(*n.a, x), den = eval(*n.b, x);
                return checked(num / den, "division");
            }
            case Kind::pow_op: {
                double base = eval(*n.a, x), e = eval(*n.b, x);
                if (base < 0.0 && std::floor(e) != e)
                    throw DomainError("non-integer power of a negative base");
                return checked(std::pow(base, e), "power");
            }
            case Kind::call: {
                double v = eval(*n.a, x);
                switch (n.func) {
                    case Func::cos_fn: return std::cos(v);
                    case Func::sin_fn: return std::sin(v);
                    case Func::exp_fn: return checked(std::exp(v), "exp");
                    case Func::ln_fn:
                        if (v <= 0.0) throw DomainError("ln of a non-positive value");
                        return std::log(v);
                    case Func::sqrt_fn:
                        if (v < 0.0) throw DomainError("sqrt of a negative value");
                        return std::sqrt(v);
                    case Func::abs_fn: return std::abs(v);
                }
            }
        }
        throw std::logic_error("unreachable expression node");
    }

    // Precedence: add/sub 1, mul/div 2, negate 3, pow 4, atoms 5.
    static std::string print(const Node& n, int parent_prec) {
        auto wrap = [&](int prec, std::string body) {
            return prec < parent_prec ? "(" + std::move(body) + ")" : std::move(body);
        };
        switch (n.kind) {
            case Kind::literal: {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.17g", n.value);
                return std::string(buf);
            }
            case Kind::variable: return "x";
            case Kind::pi_constant: return "pi";
            case Kind::negate: return wrap(3, "-" + print(*n.a, 4));
            case Kind::add: return wrap(1, print(*n.a, 1) + "+" + print(*n.b, 2));
            case Kind::sub: return wrap(1, print(*n.a, 1) + "-" + print(*n.b, 2));
            case Kind::mul: return wrap(2, print(*n.a, 2) + "*" + print(*n.b, 3));
            case Kind::div: return wrap(2, print(*n.a, 2) + "/" + print(*n.b, 3));
            case Kind::pow_op: return wrap(4, print(*n.a, 5) + "^" + print(*n.b, 3));
            case Kind::call: {
                const char* name = "";
                switch (n.func) {
                    case Func::cos_fn: name = "cos"; break;
                    case Func::sin_fn: name = "sin"; break;
                    case Func::exp_fn: name = "exp"; break;
                    case Func::ln_fn: name = "ln"; break;
                    case Func::sqrt_fn: name = "sqrt"; break;
                    case Func::abs_fn: name = "abs"; break;
                }
                return std::string(name) + "(" + print(*n.a, 0) + ")";
            }
        }
        throw std::logic_error("unreachable expression node");
    }

    NodePtr root_;
    std::string source_;
};

inline Expression parse(const std::string& text) { return Expression::parse(text); }

inline double evaluate(const Expression& e, double x) { return e.evaluate(x); }

inline ScalarField sample(const Expression& e, const GridSpec& grid) {
    std::vector<double> v(grid.n_nodes());
    for (int i = 0; i < grid.n_nodes(); ++i) {
        try {
            v[i] = e.evaluate(grid.node(i));
        } catch (const DomainError& err) {
            throw DomainError(std::string(err.what()) + " at node " + std::to_string(i) +
                                  " (x = " + std::to_string(grid.node(i)) + ")",
                              i);
        }
    }
    return ScalarField(grid, std::move(v));
}

}  // namespace dispersal
