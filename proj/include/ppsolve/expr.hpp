#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ppsolve {

namespace detail {
struct ExprNode;
}

/// Syntax error with the 0-based offset of the offending character.
struct ParseError : std::runtime_error {
    ParseError(const std::string& what, std::size_t pos)
        : std::runtime_error(what + " (at position " + std::to_string(pos) + ")"), position(pos) {}
    std::size_t position;
};

/// The declared period is not a period of the expression; reports the worst sample.
struct PeriodicityError : std::runtime_error {
    PeriodicityError(const std::string& what, double t, double violation)
        : std::runtime_error(what), worst_t(t), worst_violation(violation) {}
    double worst_t;
    double worst_violation;
};

// Closed-form omega-periodic scalar coefficient function.
//
// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := number | 't' | 'pi' | 'sin' '(' expr ')' | 'cos' '(' expr ')'
//           | '(' expr ')' | '-' factor
//
// Implicit multiplication is not allowed. Instances are immutable and safe
// to share across threads; evaluation is pure.
class PeriodicExpr {
  public:
    /// Parses `text` and checks that `omega` is a period: the expression is
    /// sampled at 1024 uniformly spaced points and |f(t) - f(t+omega)| must
    /// stay within 1e-10 * (1 + |f(t)|). Throws ParseError on bad syntax and
    /// PeriodicityError when the period check fails.
    static PeriodicExpr parse(std::string_view text, double omega);

    double operator()(double t) const;
    double period() const { return omega_; }

    /// True when the expression has no dependence on t.
    bool is_constant() const;

    /// Canonical textual form; parse(str(), period()) reproduces the tree.
    std::string str() const;

  private:
    PeriodicExpr(std::shared_ptr<const detail::ExprNode> root, double omega)
        : root_(std::move(root)), omega_(omega) {}

    std::shared_ptr<const detail::ExprNode> root_;
    double omega_ = 0.0;
};

inline double eval(const PeriodicExpr& e, double t) { return e(t); }

/// Integral of `f` over one period [0, omega], composite Gauss-Legendre with
/// panel doubling until the absolute change is below `abs_tol`.
double integrate_periodic(const std::function<double(double)>& f, double omega,
                          double abs_tol = 1e-13);

/// \int_0^omega expr dt to absolute accuracy better than 1e-12.
double mean_integral(const PeriodicExpr& expr);

}  // namespace ppsolve
