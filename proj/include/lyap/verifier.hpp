#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lyap/dynsys.hpp"
#include "lyap/polyform.hpp"

namespace lyap {

/// Axis-aligned box around `center`: prod_i [c_i - a_i/2, c_i + a_i/2].
struct Region {
    std::vector<double> center;
    std::vector<double> side_lengths;
};

/// Uniform verification lattice over a Region. Points strictly closer to
/// the center than exclusion_radius (inf-norm) are skipped, so radius 0
/// keeps the full lattice; by default the radius is half the smallest grid
/// step, which removes exactly the center point when points_per_axis is odd.
struct GridSpec {
    Region region;
    int points_per_axis = 51;
    std::optional<double> exclusion_radius;  // nullopt = half the min step

    double resolved_exclusion_radius() const;
    void validate() const;
};

/// All lattice points in row-major order (first axis slowest), excluded
/// points removed. Throws std::invalid_argument on an invalid spec or if
/// nothing survives the exclusion.
std::vector<std::vector<double>> build_grid(const GridSpec& spec);

enum class Verdict { Satisfied, ViolatedPositivity, ViolatedDecrease };

struct Violation {
    std::vector<double> point;
    double value;       // L at the point
    double derivative;  // Ldot at the point
    Verdict verdict;
};

struct CostReport {
    double cost = 0.0;  // |Y| / (|X| + |Y|)
    std::size_t satisfied_count = 0;
    std::size_t violated_count = 0;
    std::size_t total_points = 0;
    double min_value = 0.0;       // min L over the grid (positivity margin)
    double max_derivative = 0.0;  // max Ldot over the grid (decrease margin)
    std::vector<Violation> violations;  // full list, in grid order
};

/// Ldot(x) = gradient(c, x) . f(x).
double lie_derivative(const CandidatePolynomial& candidate,
                      const VectorField& field, std::span<const double> x);

/// Satisfied iff L(x) > 0 and Ldot(x) < 0, both strict; positivity is
/// checked first. Values exactly at zero count as violations.
Verdict classify_point(const CandidatePolynomial& candidate,
                       const VectorField& field, std::span<const double> x);

/// Precomputed per-point monomial, partial-derivative, and field-value
/// tables for one (field, basis, grid) triple. Lets a GA score thousands of
/// coefficient vectors against the same grid cheaply. Evaluation through the
/// cache is bitwise identical to the direct path through
/// CandidatePolynomial::evaluate / gradient and VectorField::eval.
class GridCache {
public:
    /// `center` is the expansion point of the candidate monomials (normally
    /// the field's equilibrium).
    GridCache(const VectorField& field, const Basis& basis,
              std::span<const double> center, const GridSpec& spec);

    std::size_t point_count() const { return point_count_; }
    int dimension() const { return dimension_; }
    std::span<const double> point(std::size_t index) const;

    /// {L, Ldot} at a cached grid point.
    std::pair<double, double> point_eval(std::span<const double> coefficients,
                                         std::size_t index) const;

    Verdict classify(std::span<const double> coefficients,
                     std::size_t index) const;

    /// J = violated / total over the cached grid. Counting only; no report.
    double cost_value(std::span<const double> coefficients) const;

private:
    int dimension_;
    std::size_t term_count_;
    std::size_t point_count_;
    std::vector<double> points_;      // point_count x n
    std::vector<double> monomials_;   // point_count x gamma
    std::vector<double> partials_;    // point_count x n x gamma
    std::vector<double> field_;       // point_count x n
};

/// Classifies every non-excluded grid point and assembles the full report,
/// including the min-L / max-Ldot margins. Deterministic: rerunning on the
/// same inputs gives bitwise identical results.
CostReport cost(const CandidatePolynomial& candidate, const VectorField& field,
                const GridSpec& spec);

}  // namespace lyap
