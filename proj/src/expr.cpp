#include "ppsolve/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <vector>

#include "ppsolve/quadrature.hpp"

namespace ppsolve {

namespace detail {

struct ExprNode {
    enum class Kind { Number, Pi, Time, Sin, Cos, Neg, Add, Sub, Mul, Div };
    Kind kind;
    double value = 0.0;
    std::shared_ptr<const ExprNode> a, b;
};

using NodePtr = std::shared_ptr<const ExprNode>;

namespace {

NodePtr make(ExprNode::Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodePtr make_number(double v) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::Number;
    n->value = v;
    return n;
}

double eval_node(const ExprNode& n, double t) {
    using K = ExprNode::Kind;
    switch (n.kind) {
        case K::Number: return n.value;
        case K::Pi: return M_PI;
        case K::Time: return t;
        case K::Sin: return std::sin(eval_node(*n.a, t));
        case K::Cos: return std::cos(eval_node(*n.a, t));
        case K::Neg: return -eval_node(*n.a, t);
        case K::Add: return eval_node(*n.a, t) + eval_node(*n.b, t);
        case K::Sub: return eval_node(*n.a, t) - eval_node(*n.b, t);
        case K::Mul: return eval_node(*n.a, t) * eval_node(*n.b, t);
        case K::Div: {
            const double num = eval_node(*n.a, t);
            const double den = eval_node(*n.b, t);
            if (den == 0.0) throw std::domain_error("division by zero while evaluating expression");
            return num / den;
        }
    }
    throw std::logic_error("unreachable expression kind");
}

bool depends_on_t(const ExprNode& n) {
    if (n.kind == ExprNode::Kind::Time) return true;
    if (n.a && depends_on_t(*n.a)) return true;
    if (n.b && depends_on_t(*n.b)) return true;
    return false;
}

// Shortest decimal form that reparses to the identical double.
std::string format_double(double v) {
    char buf[64];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

// Precedence levels: additive 1, multiplicative 2, unary minus 3, atoms 4.
int precedence(ExprNode::Kind k) {
    using K = ExprNode::Kind;
    switch (k) {
        case K::Add:
        case K::Sub: return 1;
        case K::Mul:
        case K::Div: return 2;
        case K::Neg: return 3;
        default: return 4;
    }
}

void print_node(const ExprNode& n, int min_prec, std::string& out) {
    using K = ExprNode::Kind;
    const int prec = precedence(n.kind);
    const bool parens = prec < min_prec;
    if (parens) out += '(';
    switch (n.kind) {
        case K::Number: out += format_double(n.value); break;
        case K::Pi: out += "pi"; break;
        case K::Time: out += 't'; break;
        case K::Sin:
        case K::Cos:
            out += (n.kind == K::Sin) ? "sin(" : "cos(";
            print_node(*n.a, 0, out);
            out += ')';
            break;
        case K::Neg:
            out += '-';
            print_node(*n.a, prec, out);
            break;
        case K::Add:
        case K::Sub:
        case K::Mul:
        case K::Div: {
            print_node(*n.a, prec, out);
            const char op = (n.kind == K::Add)   ? '+'
                            : (n.kind == K::Sub) ? '-'
                            : (n.kind == K::Mul) ? '*'
                                                 : '/';
            out += op;
            // Right operand always parenthesized at equal precedence so the
            // printed form reparses to the identical tree.
            print_node(*n.b, prec + 1, out);
            break;
        }
    }
    if (parens) out += ')';
}

class Parser {
  public:
    explicit Parser(std::string_view text) : s_(text) {}

    NodePtr parse() {
        NodePtr e = expr();
        skip_ws();
        if (pos_ != s_.size()) throw ParseError("unexpected trailing input", pos_);
        return e;
    }

  private:
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    bool consume(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    bool match_word(std::string_view w) {
        skip_ws();
        if (s_.substr(pos_, w.size()) != w) return false;
        // Reject identifier characters immediately after the keyword.
        const std::size_t after = pos_ + w.size();
        if (after < s_.size() && std::isalnum(static_cast<unsigned char>(s_[after]))) return false;
        pos_ = after;
        return true;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        while (true) {
            if (consume('+'))
                lhs = make(ExprNode::Kind::Add, lhs, term());
            else if (consume('-'))
                lhs = make(ExprNode::Kind::Sub, lhs, term());
            else
                return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = factor();
        while (true) {
            if (consume('*'))
                lhs = make(ExprNode::Kind::Mul, lhs, factor());
            else if (consume('/'))
                lhs = make(ExprNode::Kind::Div, lhs, factor());
            else
                return lhs;
        }
    }

    NodePtr factor() {
        skip_ws();
        if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
        const char c = s_[pos_];
        if (c == '-') {
            ++pos_;
            return make(ExprNode::Kind::Neg, factor());
        }
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!consume(')')) throw ParseError("expected ')'", pos_);
            return e;
        }
        if (match_word("sin")) return trig(ExprNode::Kind::Sin);
        if (match_word("cos")) return trig(ExprNode::Kind::Cos);
        if (match_word("pi")) return make(ExprNode::Kind::Pi);
        if (match_word("t")) return make(ExprNode::Kind::Time);
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    NodePtr trig(ExprNode::Kind kind) {
        if (!consume('(')) throw ParseError("expected '(' after function name", pos_);
        NodePtr arg = expr();
        if (!consume(')')) throw ParseError("expected ')'", pos_);
        return make(kind, arg);
    }

    NodePtr number() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        }
        if (pos_ == start || (pos_ == start + 1 && s_[start] == '.'))
            throw ParseError("malformed number", start);
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t mark = pos_++;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
            if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                pos_ = mark;  // not an exponent after all
            } else {
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            }
        }
        const std::string token(s_.substr(start, pos_ - start));
        return make_number(std::strtod(token.c_str(), nullptr));
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace
}  // namespace detail

PeriodicExpr PeriodicExpr::parse(std::string_view text, double omega) {
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw std::invalid_argument("period must be positive and finite");
    detail::Parser parser(text);
    PeriodicExpr e(parser.parse(), omega);

    // Periodicity and finiteness scan.
    constexpr int kSamples = 1024;
    double worst_t = 0.0, worst_rel = 0.0;
    for (int j = 0; j < kSamples; ++j) {
        const double t = omega * j / kSamples;
        const double v0 = e(t);
        const double v1 = e(t + omega);
        if (!std::isfinite(v0) || !std::isfinite(v1))
            throw PeriodicityError("expression is not finite on [0, omega]", t,
                                   std::numeric_limits<double>::infinity());
        const double rel = std::abs(v0 - v1) / (1.0 + std::abs(v0));
        if (rel > worst_rel) {
            worst_rel = rel;
            worst_t = t;
        }
    }
    if (worst_rel > 1e-10)
        throw PeriodicityError("declared period is not a period of the expression (worst at t=" +
                                   std::to_string(worst_t) + ", relative mismatch " +
                                   std::to_string(worst_rel) + ")",
                               worst_t, worst_rel);
    return e;
}

double PeriodicExpr::operator()(double t) const { return detail::eval_node(*root_, t); }

bool PeriodicExpr::is_constant() const { return !detail::depends_on_t(*root_); }

std::string PeriodicExpr::str() const {
    std::string out;
    detail::print_node(*root_, 0, out);
    return out;
}

double integrate_periodic(const std::function<double(double)>& f, double omega, double abs_tol) {
    const QuadratureRule& rule = gauss_legendre(12);
    auto composite = [&](int panels) {
        double sum = 0.0;
        const double h = omega / panels;
        for (int j = 0; j < panels; ++j) {
            const double a = j * h;
            for (int q = 0; q < rule.nodes.size(); ++q) {
                const double x = a + 0.5 * h * (rule.nodes[q] + 1.0);
                const double v = f(x);
                if (!std::isfinite(v)) throw std::domain_error("non-finite integrand");
                sum += 0.5 * h * rule.weights[q] * v;
            }
        }
        return sum;
    };
    double prev = composite(32);
    for (int panels = 64; panels <= 16384; panels *= 2) {
        const double cur = composite(panels);
        if (std::abs(cur - prev) <= abs_tol) return cur;
        prev = cur;
    }
    throw std::runtime_error("period integral did not converge to requested accuracy");
}

double mean_integral(const PeriodicExpr& expr) {
    return integrate_periodic([&](double t) { return expr(t); }, expr.period());
}

}  // namespace ppsolve
