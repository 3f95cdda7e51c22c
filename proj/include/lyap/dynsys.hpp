#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lyap/errors.hpp"

namespace lyap {

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression tree over reals, variables x1..xn, arithmetic and a
/// fixed set of functions. Evaluation is reentrant and thread-safe.
class Expr {
public:
    enum class Kind {
        Number,
        Variable,
        Negate,
        Add,
        Subtract,
        Multiply,
        Divide,
        Power,
        Function,
    };

    enum class Fn { Sin, Cos, Tan, Exp, Ln, Sqrt, Abs };

    static ExprPtr number(double value);
    static ExprPtr variable(int index);  // 1-based, as written: x1, x2, ...
    static ExprPtr negate(ExprPtr operand);
    static ExprPtr binary(Kind kind, ExprPtr lhs, ExprPtr rhs);
    static ExprPtr function(Fn fn, ExprPtr argument);

    Kind kind() const { return kind_; }
    double number_value() const { return value_; }
    int variable_index() const { return var_index_; }
    Fn function_name() const { return fn_; }
    const ExprPtr& lhs() const { return lhs_; }
    const ExprPtr& rhs() const { return rhs_; }

    /// Evaluates at x (x[0] is x1). Throws EvalDomainError when the value
    /// leaves the real domain or is non-finite.
    double eval(std::span<const double> x) const;

    /// Parseable text form with minimal parentheses; parsing it rebuilds an
    /// identical tree, so evaluation round-trips bitwise.
    std::string to_string() const;

private:
    Expr() = default;

    Kind kind_ = Kind::Number;
    double value_ = 0.0;
    int var_index_ = 0;
    Fn fn_ = Fn::Sin;
    ExprPtr lhs_;
    ExprPtr rhs_;
};

/// Recursive-descent parser for the grammar
///   expr   := term (("+"|"-") term)*
///   term   := factor (("*"|"/") factor)*
///   factor := "-" factor | base ("^" factor)?
///   base   := number | var | func "(" expr ")" | "(" expr ")"
/// with "^" right-associative and binding tighter than unary minus.
/// Variables are x1..x<dimension>. Throws ParseError with a byte offset.
ExprPtr parse_expr(std::string_view text, int dimension);

/// The dynamics xdot = f(x) with a declared equilibrium. Construction
/// validates that the equilibrium actually is one: ||f(xbar)||_inf <= 1e-9.
class VectorField {
public:
    VectorField(std::vector<ExprPtr> components,
                std::vector<double> equilibrium, std::string name = "");

    int dimension() const { return static_cast<int>(components_.size()); }
    const std::vector<ExprPtr>& components() const { return components_; }
    std::span<const double> equilibrium() const { return equilibrium_; }
    const std::string& name() const { return name_; }

    /// Componentwise evaluation. Domain errors are rethrown with the
    /// offending component and point attached.
    std::vector<double> eval(std::span<const double> x) const;

private:
    std::vector<ExprPtr> components_;
    std::vector<double> equilibrium_;
    std::string name_;
};

/// Built-in example systems: "pendulum" = (x2, -sin(x1) - x2) and
/// "planar" = (-x1 + x1*x2, -x2), both with equilibrium at the origin.
VectorField builtin_system(std::string_view name);

const std::vector<std::string>& builtin_system_names();

}  // namespace lyap
