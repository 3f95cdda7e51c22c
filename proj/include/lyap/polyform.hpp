#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lyap/errors.hpp"

namespace lyap {

/// Exponent tuple (k1,...,kn) of one monomial; the total degree is the sum.
struct MultiIndex {
    std::vector<int> exponents;

    int degree() const;
    bool operator==(const MultiIndex&) const = default;
};

using Basis = std::vector<MultiIndex>;

/// All multi-indices with 1 <= total degree <= max_degree in graded
/// lexicographic order. The constant term is excluded, so any candidate
/// built on this basis vanishes at the equilibrium by construction.
/// Throws std::invalid_argument for dimension == 0 or max_degree == 0.
Basis enumerate_basis(int dimension, int max_degree);

/// C(dimension + max_degree, max_degree) - 1, the size of the basis above.
std::size_t basis_size(int dimension, int max_degree);

// All evaluation paths (direct and the verifier's cached tables) funnel
// through the three helpers below so that identical inputs give bitwise
// identical results regardless of the path taken.

/// table[i][e] = (x[i] - center[i])^e for e in 0..max_degree, built by
/// repeated multiplication.
using PowerTable = std::vector<std::vector<double>>;
PowerTable make_power_table(std::span<const double> x,
                            std::span<const double> center, int max_degree);

double monomial_value(const PowerTable& table, const MultiIndex& mi);

/// d/dx_axis of the monomial: k_axis * prod_i (x_i - c_i)^(k_i - [i==axis]).
/// Zero when the monomial does not depend on the axis.
double monomial_partial(const PowerTable& table, const MultiIndex& mi,
                        std::size_t axis);

/// A truncated Taylor candidate: coefficients over the graded monomial basis
/// in (x - equilibrium). Immutable after construction; all methods are pure.
class CandidatePolynomial {
public:
    CandidatePolynomial(int dimension, int max_degree,
                        std::vector<double> coefficients,
                        std::vector<double> equilibrium);

    int dimension() const { return dimension_; }
    int max_degree() const { return max_degree_; }
    const Basis& basis() const { return basis_; }
    std::span<const double> coefficients() const { return coefficients_; }
    std::span<const double> equilibrium() const { return equilibrium_; }

    /// sum_j p_j * prod_i (x_i - xbar_i)^(k_i); exactly 0.0 at the equilibrium.
    double evaluate(std::span<const double> x) const;

    /// Analytic gradient from the monomial representation.
    std::vector<double> gradient(std::span<const double> x) const;

    /// Human-readable signed-term form, e.g. "8*x1^2 + 8*x1*x2 - x2^3".
    /// Coefficients of magnitude one drop the "1*"; the all-zero candidate
    /// formats as "0". parse_polynomial() round-trips the output exactly.
    std::string format() const;

private:
    int dimension_;
    int max_degree_;
    Basis basis_;
    std::vector<double> coefficients_;
    std::vector<double> equilibrium_;
};

/// Parses the textual polynomial syntax produced by format(): terms joined
/// by '+'/'-', an optional leading coefficient, then '*'-separated variable
/// powers ("x2^3"). Returns coefficients in basis order. Repeated monomials
/// accumulate. Throws ParseError (with byte offset) on bad syntax, variables
/// beyond the dimension, term degree above max_degree, or a nonzero
/// constant term.
std::vector<double> parse_polynomial(std::string_view text, int dimension,
                                     int max_degree);

/// Shortest decimal form that parses back to exactly the same double
/// ("8", "0.05", "5.12e-07").
std::string format_double(double value);

}  // namespace lyap
