#include "lyap/polyform.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <system_error>

namespace lyap {

int MultiIndex::degree() const {
    return std::accumulate(exponents.begin(), exponents.end(), 0);
}

namespace {

void append_indices_of_degree(int dimension, int degree, std::vector<int>& prefix,
                              Basis& out) {
    const int position = static_cast<int>(prefix.size());
    if (position == dimension - 1) {
        prefix.push_back(degree);
        out.push_back(MultiIndex{prefix});
        prefix.pop_back();
        return;
    }
    for (int e = degree; e >= 0; --e) {
        prefix.push_back(e);
        append_indices_of_degree(dimension, degree - e, prefix, out);
        prefix.pop_back();
    }
}

}  // namespace

Basis enumerate_basis(int dimension, int max_degree) {
    if (dimension < 1) {
        throw std::invalid_argument("basis requires dimension >= 1");
    }
    if (max_degree < 1) {
        throw std::invalid_argument("basis requires max_degree >= 1");
    }
    Basis basis;
    basis.reserve(basis_size(dimension, max_degree));
    std::vector<int> prefix;
    for (int degree = 1; degree <= max_degree; ++degree) {
        append_indices_of_degree(dimension, degree, prefix, basis);
    }
    return basis;
}

std::size_t basis_size(int dimension, int max_degree) {
    if (dimension < 1 || max_degree < 1) {
        throw std::invalid_argument("basis requires dimension and max_degree >= 1");
    }
    // C(n + N, N) via the multiplicative formula; exact for any practical
    // (dimension, degree) pair.
    std::size_t result = 1;
    for (int i = 1; i <= max_degree; ++i) {
        result = result * static_cast<std::size_t>(dimension + i) /
                 static_cast<std::size_t>(i);
    }
    return result - 1;
}

PowerTable make_power_table(std::span<const double> x,
                            std::span<const double> center, int max_degree) {
    PowerTable table(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - center[i];
        auto& row = table[i];
        row.resize(static_cast<std::size_t>(max_degree) + 1);
        row[0] = 1.0;
        for (int e = 1; e <= max_degree; ++e) {
            row[e] = row[e - 1] * d;
        }
    }
    return table;
}

double monomial_value(const PowerTable& table, const MultiIndex& mi) {
    double value = 1.0;
    for (std::size_t i = 0; i < mi.exponents.size(); ++i) {
        const int e = mi.exponents[i];
        if (e > 0) {
            value *= table[i][e];
        }
    }
    return value;
}

double monomial_partial(const PowerTable& table, const MultiIndex& mi,
                        std::size_t axis) {
    const int e_axis = mi.exponents[axis];
    if (e_axis == 0) {
        return 0.0;
    }
    double value = static_cast<double>(e_axis) * table[axis][e_axis - 1];
    for (std::size_t i = 0; i < mi.exponents.size(); ++i) {
        if (i == axis) {
            continue;
        }
        const int e = mi.exponents[i];
        if (e > 0) {
            value *= table[i][e];
        }
    }
    return value;
}

CandidatePolynomial::CandidatePolynomial(int dimension, int max_degree,
                                         std::vector<double> coefficients,
                                         std::vector<double> equilibrium)
    : dimension_(dimension),
      max_degree_(max_degree),
      basis_(enumerate_basis(dimension, max_degree)),
      coefficients_(std::move(coefficients)),
      equilibrium_(std::move(equilibrium)) {
    if (coefficients_.size() != basis_.size()) {
        throw std::invalid_argument(
            "coefficient count " + std::to_string(coefficients_.size()) +
            " does not match basis size " + std::to_string(basis_.size()));
    }
    if (equilibrium_.size() != static_cast<std::size_t>(dimension_)) {
        throw std::invalid_argument("equilibrium dimension mismatch");
    }
}

double CandidatePolynomial::evaluate(std::span<const double> x) const {
    if (x.size() != static_cast<std::size_t>(dimension_)) {
        throw std::invalid_argument("point dimension mismatch");
    }
    const PowerTable table = make_power_table(x, equilibrium_, max_degree_);
    double sum = 0.0;
    for (std::size_t j = 0; j < basis_.size(); ++j) {
        sum += coefficients_[j] * monomial_value(table, basis_[j]);
    }
    return sum;
}

std::vector<double> CandidatePolynomial::gradient(
    std::span<const double> x) const {
    if (x.size() != static_cast<std::size_t>(dimension_)) {
        throw std::invalid_argument("point dimension mismatch");
    }
    const PowerTable table = make_power_table(x, equilibrium_, max_degree_);
    std::vector<double> grad(static_cast<std::size_t>(dimension_), 0.0);
    for (std::size_t axis = 0; axis < grad.size(); ++axis) {
        double sum = 0.0;
        for (std::size_t j = 0; j < basis_.size(); ++j) {
            sum += coefficients_[j] * monomial_partial(table, basis_[j], axis);
        }
        grad[axis] = sum;
    }
    return grad;
}

namespace {

std::string format_monomial(const MultiIndex& mi) {
    std::string out;
    for (std::size_t i = 0; i < mi.exponents.size(); ++i) {
        const int e = mi.exponents[i];
        if (e == 0) {
            continue;
        }
        if (!out.empty()) {
            out += '*';
        }
        out += 'x';
        out += std::to_string(i + 1);
        if (e > 1) {
            out += '^';
            out += std::to_string(e);
        }
    }
    return out;
}

}  // namespace

std::string CandidatePolynomial::format() const {
    std::string out;
    for (std::size_t j = 0; j < basis_.size(); ++j) {
        const double c = coefficients_[j];
        if (c == 0.0) {
            continue;
        }
        const bool negative = std::signbit(c);
        if (out.empty()) {
            if (negative) {
                out += '-';
            }
        } else {
            out += negative ? " - " : " + ";
        }
        const double magnitude = std::abs(c);
        if (magnitude != 1.0) {
            out += format_double(magnitude);
            out += '*';
        }
        out += format_monomial(basis_[j]);
    }
    if (out.empty()) {
        out = "0";
    }
    return out;
}

namespace {

// Parser for the signed-term polynomial syntax emitted by format().
class PolynomialParser {
public:
    PolynomialParser(std::string_view text, int dimension, int max_degree)
        : text_(text),
          dimension_(dimension),
          max_degree_(max_degree),
          basis_(enumerate_basis(dimension, max_degree)),
          coefficients_(basis_.size(), 0.0) {
        for (std::size_t j = 0; j < basis_.size(); ++j) {
            index_of_[basis_[j].exponents] = j;
        }
    }

    std::vector<double> parse() {
        skip_ws();
        if (at_end()) {
            throw ParseError("empty polynomial", pos_);
        }
        bool negative = consume_sign();
        parse_term(negative);
        skip_ws();
        while (!at_end()) {
            const char c = peek();
            if (c != '+' && c != '-') {
                throw ParseError(std::string("expected '+' or '-', got '") + c +
                                     "'",
                                 pos_);
            }
            ++pos_;
            skip_ws();
            parse_term(c == '-');
            skip_ws();
        }
        return std::move(coefficients_);
    }

private:
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }
    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) {
            ++pos_;
        }
    }

    bool consume_sign() {
        bool negative = false;
        if (!at_end() && (peek() == '+' || peek() == '-')) {
            negative = peek() == '-';
            ++pos_;
            skip_ws();
        }
        return negative;
    }

    double parse_number() {
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        double value = 0.0;
        const auto result = std::from_chars(begin, end, value);
        if (result.ec != std::errc() || result.ptr == begin) {
            throw ParseError("expected a number", pos_);
        }
        pos_ = static_cast<std::size_t>(result.ptr - text_.data());
        return value;
    }

    int parse_exponent() {
        const std::size_t at = pos_;
        int value = 0;
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        const auto result = std::from_chars(begin, end, value);
        if (result.ec != std::errc() || result.ptr == begin || value < 1) {
            throw ParseError("exponent must be a positive integer", at);
        }
        pos_ = static_cast<std::size_t>(result.ptr - text_.data());
        return value;
    }

    // var ('^' int)?; adds into the term's exponent tuple.
    void parse_variable_power(std::vector<int>& exponents) {
        const std::size_t at = pos_;
        ++pos_;  // the 'x' checked by the caller
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
        int exponent = 1;
        skip_ws();
        if (!at_end() && peek() == '^') {
            ++pos_;
            skip_ws();
            exponent = parse_exponent();
        }
        exponents[static_cast<std::size_t>(index - 1)] += exponent;
    }

    void parse_term(bool negative) {
        const std::size_t term_start = pos_;
        double coefficient = 1.0;
        bool saw_number = false;
        if (at_end()) {
            throw ParseError("expected a term", pos_);
        }
        const char first = peek();
        if (std::isdigit(static_cast<unsigned char>(first)) || first == '.') {
            coefficient = parse_number();
            saw_number = true;
        } else if (first != 'x') {
            throw ParseError(std::string("expected a coefficient or 'x', got '") +
                                 first + "'",
                             pos_);
        }
        std::vector<int> exponents(static_cast<std::size_t>(dimension_), 0);
        bool saw_variable = false;
        if (!saw_number) {
            parse_variable_power(exponents);
            saw_variable = true;
        }
        skip_ws();
        while (!at_end() && peek() == '*') {
            ++pos_;
            skip_ws();
            if (at_end() || peek() != 'x') {
                throw ParseError("expected a variable after '*'", pos_);
            }
            parse_variable_power(exponents);
            saw_variable = true;
            skip_ws();
        }
        if (negative) {
            coefficient = -coefficient;
        }
        if (!saw_variable) {
            if (coefficient != 0.0) {
                throw ParseError("constant term is not allowed", term_start);
            }
            return;  // "0" contributes nothing
        }
        const int degree =
            std::accumulate(exponents.begin(), exponents.end(), 0);
        if (degree > max_degree_) {
            throw ParseError("term degree " + std::to_string(degree) +
                                 " exceeds max degree " +
                                 std::to_string(max_degree_),
                             term_start);
        }
        coefficients_[index_of_.at(exponents)] += coefficient;
    }

    std::string_view text_;
    int dimension_;
    int max_degree_;
    Basis basis_;
    std::vector<double> coefficients_;
    std::map<std::vector<int>, std::size_t> index_of_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<double> parse_polynomial(std::string_view text, int dimension,
                                     int max_degree) {
    return PolynomialParser(text, dimension, max_degree).parse();
}

std::string format_double(double value) {
    char buffer[32];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

}  // namespace lyap
