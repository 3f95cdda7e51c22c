#include "lyap/dynsys.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>
#include <utility>

#include "lyap/polyform.hpp"

namespace lyap {

ExprPtr Expr::number(double value) {
    auto node = std::shared_ptr<Expr>(new Expr());
    node->kind_ = Kind::Number;
    node->value_ = value;
    return node;
}

ExprPtr Expr::variable(int index) {
    if (index < 1) {
        throw std::invalid_argument("variable index must be >= 1");
    }
    auto node = std::shared_ptr<Expr>(new Expr());
    node->kind_ = Kind::Variable;
    node->var_index_ = index;
    return node;
}

ExprPtr Expr::negate(ExprPtr operand) {
    auto node = std::shared_ptr<Expr>(new Expr());
    node->kind_ = Kind::Negate;
    node->lhs_ = std::move(operand);
    return node;
}

ExprPtr Expr::binary(Kind kind, ExprPtr lhs, ExprPtr rhs) {
    switch (kind) {
        case Kind::Add:
        case Kind::Subtract:
        case Kind::Multiply:
        case Kind::Divide:
        case Kind::Power:
            break;
        default:
            throw std::invalid_argument("binary() requires a binary operator");
    }
    auto node = std::shared_ptr<Expr>(new Expr());
    node->kind_ = kind;
    node->lhs_ = std::move(lhs);
    node->rhs_ = std::move(rhs);
    return node;
}

ExprPtr Expr::function(Fn fn, ExprPtr argument) {
    auto node = std::shared_ptr<Expr>(new Expr());
    node->kind_ = Kind::Function;
    node->fn_ = fn;
    node->lhs_ = std::move(argument);
    return node;
}

namespace {

bool is_integral(double value) {
    return std::isfinite(value) && value == std::trunc(value);
}

double eval_node(const Expr& e, std::span<const double> x) {
    switch (e.kind()) {
        case Expr::Kind::Number:
            return e.number_value();
        case Expr::Kind::Variable: {
            const std::size_t i =
                static_cast<std::size_t>(e.variable_index() - 1);
            if (i >= x.size()) {
                throw EvalDomainError("variable x" +
                                      std::to_string(e.variable_index()) +
                                      " is beyond the point dimension");
            }
            return x[i];
        }
        case Expr::Kind::Negate:
            return -eval_node(*e.lhs(), x);
        case Expr::Kind::Add:
            return eval_node(*e.lhs(), x) + eval_node(*e.rhs(), x);
        case Expr::Kind::Subtract:
            return eval_node(*e.lhs(), x) - eval_node(*e.rhs(), x);
        case Expr::Kind::Multiply:
            return eval_node(*e.lhs(), x) * eval_node(*e.rhs(), x);
        case Expr::Kind::Divide: {
            const double numerator = eval_node(*e.lhs(), x);
            const double denominator = eval_node(*e.rhs(), x);
            if (denominator == 0.0) {
                throw EvalDomainError("division by zero");
            }
            return numerator / denominator;
        }
        case Expr::Kind::Power: {
            const double base = eval_node(*e.lhs(), x);
            const double exponent = eval_node(*e.rhs(), x);
            if (base < 0.0 && !is_integral(exponent)) {
                throw EvalDomainError(
                    "negative base raised to a non-integer power");
            }
            if (base == 0.0 && exponent < 0.0) {
                throw EvalDomainError("zero raised to a negative power");
            }
            return std::pow(base, exponent);
        }
        case Expr::Kind::Function: {
            const double a = eval_node(*e.lhs(), x);
            switch (e.function_name()) {
                case Expr::Fn::Sin:
                    return std::sin(a);
                case Expr::Fn::Cos:
                    return std::cos(a);
                case Expr::Fn::Tan:
                    return std::tan(a);
                case Expr::Fn::Exp:
                    return std::exp(a);
                case Expr::Fn::Ln:
                    if (a <= 0.0) {
                        throw EvalDomainError("ln of a non-positive value");
                    }
                    return std::log(a);
                case Expr::Fn::Sqrt:
                    if (a < 0.0) {
                        throw EvalDomainError("sqrt of a negative value");
                    }
                    return std::sqrt(a);
                case Expr::Fn::Abs:
                    return std::abs(a);
            }
            break;
        }
    }
    throw std::logic_error("unhandled expression node");
}

const char* fn_name(Expr::Fn fn) {
    switch (fn) {
        case Expr::Fn::Sin:
            return "sin";
        case Expr::Fn::Cos:
            return "cos";
        case Expr::Fn::Tan:
            return "tan";
        case Expr::Fn::Exp:
            return "exp";
        case Expr::Fn::Ln:
            return "ln";
        case Expr::Fn::Sqrt:
            return "sqrt";
        case Expr::Fn::Abs:
            return "abs";
    }
    return "?";
}

// Printing precedence; parenthesization compares these levels.
int precedence(const Expr& e) {
    switch (e.kind()) {
        case Expr::Kind::Add:
        case Expr::Kind::Subtract:
            return 1;
        case Expr::Kind::Multiply:
        case Expr::Kind::Divide:
            return 2;
        case Expr::Kind::Negate:
            return 3;
        case Expr::Kind::Number:
            // A negative literal prints with a leading '-', so it binds like
            // a negation when placed next to '^', '*' or '/'.
            return e.number_value() < 0.0 ? 3 : 5;
        case Expr::Kind::Power:
            return 4;
        case Expr::Kind::Variable:
        case Expr::Kind::Function:
            return 5;
    }
    return 5;
}

void print_node(const Expr& e, std::string& out);

void print_child(const Expr& child, int parent_prec, bool needs_higher,
                 std::string& out) {
    // needs_higher: the child must bind strictly tighter than the parent
    // (right side of left-associative ops, left side of '^').
    const int child_prec = precedence(child);
    const bool parens =
        needs_higher ? child_prec <= parent_prec : child_prec < parent_prec;
    if (parens) {
        out += '(';
        print_node(child, out);
        out += ')';
    } else {
        print_node(child, out);
    }
}

void print_node(const Expr& e, std::string& out) {
    switch (e.kind()) {
        case Expr::Kind::Number:
            out += format_double(e.number_value());
            return;
        case Expr::Kind::Variable:
            out += 'x';
            out += std::to_string(e.variable_index());
            return;
        case Expr::Kind::Negate:
            out += '-';
            print_child(*e.lhs(), 3, true, out);
            return;
        case Expr::Kind::Add:
            print_child(*e.lhs(), 1, false, out);
            out += " + ";
            print_child(*e.rhs(), 1, true, out);
            return;
        case Expr::Kind::Subtract:
            print_child(*e.lhs(), 1, false, out);
            out += " - ";
            print_child(*e.rhs(), 1, true, out);
            return;
        case Expr::Kind::Multiply:
            print_child(*e.lhs(), 2, false, out);
            out += '*';
            print_child(*e.rhs(), 2, true, out);
            return;
        case Expr::Kind::Divide:
            print_child(*e.lhs(), 2, false, out);
            out += '/';
            print_child(*e.rhs(), 2, true, out);
            return;
        case Expr::Kind::Power:
            print_child(*e.lhs(), 4, true, out);
            out += '^';
            print_child(*e.rhs(), 4, false, out);
            return;
        case Expr::Kind::Function:
            out += fn_name(e.function_name());
            out += '(';
            print_node(*e.lhs(), out);
            out += ')';
            return;
    }
}

}  // namespace

double Expr::eval(std::span<const double> x) const {
    const double value = eval_node(*this, x);
    if (!std::isfinite(value)) {
        throw EvalDomainError("expression evaluated to a non-finite value");
    }
    return value;
}

std::string Expr::to_string() const {
    std::string out;
    print_node(*this, out);
    return out;
}

namespace {

class ExprParser {
public:
    ExprParser(std::string_view text, int dimension)
        : text_(text), dimension_(dimension) {}

    ExprPtr parse() {
        skip_ws();
        ExprPtr e = parse_expr();
        skip_ws();
        if (!at_end()) {
            throw ParseError(std::string("unexpected character '") + peek() +
                                 "'",
                             pos_);
        }
        return e;
    }

private:
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }
    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) {
            ++pos_;
        }
    }

    ExprPtr parse_expr() {
        ExprPtr left = parse_term();
        skip_ws();
        while (!at_end() && (peek() == '+' || peek() == '-')) {
            const char op = peek();
            ++pos_;
            skip_ws();
            ExprPtr right = parse_term();
            left = Expr::binary(
                op == '+' ? Expr::Kind::Add : Expr::Kind::Subtract,
                std::move(left), std::move(right));
            skip_ws();
        }
        return left;
    }

    ExprPtr parse_term() {
        ExprPtr left = parse_factor();
        skip_ws();
        while (!at_end() && (peek() == '*' || peek() == '/')) {
            const char op = peek();
            ++pos_;
            skip_ws();
            ExprPtr right = parse_factor();
            left = Expr::binary(
                op == '*' ? Expr::Kind::Multiply : Expr::Kind::Divide,
                std::move(left), std::move(right));
            skip_ws();
        }
        return left;
    }

    // factor := "-" factor | base ("^" factor)?, so "^" binds tighter than
    // unary minus and is right-associative.
    ExprPtr parse_factor() {
        skip_ws();
        if (!at_end() && peek() == '-') {
            ++pos_;
            return Expr::negate(parse_factor());
        }
        ExprPtr base = parse_base();
        skip_ws();
        if (!at_end() && peek() == '^') {
            ++pos_;
            ExprPtr exponent = parse_factor();
            return Expr::binary(Expr::Kind::Power, std::move(base),
                                std::move(exponent));
        }
        return base;
    }

    ExprPtr parse_base() {
        skip_ws();
        if (at_end()) {
            throw ParseError("unexpected end of input", pos_);
        }
        const char c = peek();
        if (c == '(') {
            ++pos_;
            ExprPtr inner = parse_expr();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return parse_number();
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            return parse_identifier();
        }
        throw ParseError(std::string("unexpected character '") + c + "'",
                         pos_);
    }

    void expect(char c) {
        skip_ws();
        if (at_end() || peek() != c) {
            throw ParseError(std::string("expected '") + c + "'", pos_);
        }
        ++pos_;
    }

    ExprPtr parse_number() {
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        double value = 0.0;
        const auto result = std::from_chars(begin, end, value);
        if (result.ec != std::errc() || result.ptr == begin) {
            throw ParseError("malformed number", pos_);
        }
        pos_ = static_cast<std::size_t>(result.ptr - text_.data());
        return Expr::number(value);
    }

    ExprPtr parse_identifier() {
        const std::size_t at = pos_;
        while (!at_end() &&
               std::isalpha(static_cast<unsigned char>(peek()))) {
            ++pos_;
        }
        const std::string_view name = text_.substr(at, pos_ - at);
        if (name == "x") {
            return parse_variable(at);
        }
        static const std::pair<std::string_view, Expr::Fn> kFunctions[] = {
            {"sin", Expr::Fn::Sin}, {"cos", Expr::Fn::Cos},
            {"tan", Expr::Fn::Tan}, {"exp", Expr::Fn::Exp},
            {"ln", Expr::Fn::Ln},   {"sqrt", Expr::Fn::Sqrt},
            {"abs", Expr::Fn::Abs},
        };
        for (const auto& [fn_text, fn] : kFunctions) {
            if (name == fn_text) {
                expect('(');
                ExprPtr argument = parse_expr();
                expect(')');
                return Expr::function(fn, std::move(argument));
            }
        }
        throw ParseError("unknown identifier '" + std::string(name) + "'", at);
    }

    ExprPtr parse_variable(std::size_t at) {
        // pos_ sits right after the 'x'; the index digits follow.
        int index = 0;
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        const auto result = std::from_chars(begin, end, index);
        if (result.ec != std::errc() || result.ptr == begin) {
            throw ParseError("expected a variable index after 'x'", pos_);
        }
        pos_ = static_cast<std::size_t>(result.ptr - text_.data());
        if (index < 1 || index > dimension_) {
            throw ParseError("variable x" + std::to_string(index) +
                                 " exceeds dimension " +
                                 std::to_string(dimension_),
                             at);
        }
        return Expr::variable(index);
    }

    std::string_view text_;
    int dimension_;
    std::size_t pos_ = 0;
};

}  // namespace

ExprPtr parse_expr(std::string_view text, int dimension) {
    if (dimension < 1) {
        throw std::invalid_argument("dimension must be >= 1");
    }
    return ExprParser(text, dimension).parse();
}

VectorField::VectorField(std::vector<ExprPtr> components,
                         std::vector<double> equilibrium, std::string name)
    : components_(std::move(components)),
      equilibrium_(std::move(equilibrium)),
      name_(std::move(name)) {
    if (components_.empty()) {
        throw std::invalid_argument("vector field needs at least one component");
    }
    for (const auto& component : components_) {
        if (!component) {
            throw std::invalid_argument("vector field component is null");
        }
    }
    if (equilibrium_.size() != components_.size()) {
        throw std::invalid_argument(
            "equilibrium dimension does not match component count");
    }
    double norm = 0.0;
    const std::vector<double> residual = eval(equilibrium_);
    for (const double r : residual) {
        norm = std::max(norm, std::abs(r));
    }
    if (norm > 1e-9) {
        throw std::invalid_argument(
            "declared equilibrium is not an equilibrium: ||f(xbar)||_inf = " +
            format_double(norm));
    }
}

std::vector<double> VectorField::eval(std::span<const double> x) const {
    if (x.size() != components_.size()) {
        throw std::invalid_argument("point dimension mismatch");
    }
    std::vector<double> out(components_.size(), 0.0);
    for (std::size_t i = 0; i < components_.size(); ++i) {
        try {
            out[i] = components_[i]->eval(x);
        } catch (const EvalDomainError& e) {
            std::string point = "(";
            for (std::size_t k = 0; k < x.size(); ++k) {
                if (k > 0) {
                    point += ", ";
                }
                point += format_double(x[k]);
            }
            point += ")";
            throw EvalDomainError("component f" + std::to_string(i + 1) +
                                  " at " + point + ": " + e.what());
        }
    }
    return out;
}

VectorField builtin_system(std::string_view name) {
    if (name == "pendulum") {
        // Damped pendulum with g/l = 1, b = 1.
        return VectorField(
            {parse_expr("x2", 2), parse_expr("-sin(x1) - x2", 2)}, {0.0, 0.0},
            "pendulum");
    }
    if (name == "planar") {
        return VectorField({parse_expr("-x1 + x1*x2", 2), parse_expr("-x2", 2)},
                           {0.0, 0.0}, "planar");
    }
    std::string known;
    for (const auto& n : builtin_system_names()) {
        if (!known.empty()) {
            known += ", ";
        }
        known += n;
    }
    throw std::invalid_argument("unknown system '" + std::string(name) +
                                "' (known: " + known + ")");
}

const std::vector<std::string>& builtin_system_names() {
    static const std::vector<std::string> names = {"pendulum", "planar"};
    return names;
}

}  // namespace lyap
