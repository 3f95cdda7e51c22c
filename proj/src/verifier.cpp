#include "lyap/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lyap {

double GridSpec::resolved_exclusion_radius() const {
    if (exclusion_radius.has_value()) {
        return *exclusion_radius;
    }
    double min_step = std::numeric_limits<double>::infinity();
    for (const double side : region.side_lengths) {
        min_step = std::min(min_step, side / (points_per_axis - 1));
    }
    return min_step / 2.0;
}

void GridSpec::validate() const {
    if (region.center.empty()) {
        throw std::invalid_argument("region center is empty");
    }
    if (region.side_lengths.size() != region.center.size()) {
        throw std::invalid_argument(
            "region side_lengths dimension does not match the center");
    }
    for (const double side : region.side_lengths) {
        if (!(side > 0.0)) {
            throw std::invalid_argument("region side lengths must be positive");
        }
    }
    if (points_per_axis < 3) {
        throw std::invalid_argument("points_per_axis must be at least 3");
    }
    const double radius = resolved_exclusion_radius();
    if (!(radius >= 0.0)) {
        throw std::invalid_argument("exclusion radius must be non-negative");
    }
    double min_half_side = std::numeric_limits<double>::infinity();
    for (const double side : region.side_lengths) {
        min_half_side = std::min(min_half_side, side / 2.0);
    }
    if (radius >= min_half_side) {
        throw std::invalid_argument(
            "exclusion radius must be smaller than half the smallest side");
    }
}

std::vector<std::vector<double>> build_grid(const GridSpec& spec) {
    spec.validate();
    const std::size_t n = spec.region.center.size();
    const int points = spec.points_per_axis;
    const double radius = spec.resolved_exclusion_radius();

    // coord(i, j) = lo_i + side_i * j / (points - 1); the j = points-1 corner
    // lands on the upper bound exactly and, for odd counts, the middle j on
    // the center exactly.
    std::vector<double> lo(n);
    for (std::size_t i = 0; i < n; ++i) {
        lo[i] = spec.region.center[i] - spec.region.side_lengths[i] / 2.0;
    }

    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        total *= static_cast<std::size_t>(points);
    }

    std::vector<std::vector<double>> grid;
    std::vector<int> index(n, 0);
    std::vector<double> point(n, 0.0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        double distance = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            point[i] = lo[i] + spec.region.side_lengths[i] * index[i] /
                                   (points - 1);
            distance =
                std::max(distance, std::abs(point[i] - spec.region.center[i]));
        }
        // Strictly-below-the-radius points are skipped, so radius 0 keeps
        // the full lattice.
        if (distance >= radius) {
            grid.push_back(point);
        }
        // Row-major increment: last axis fastest.
        for (std::size_t i = n; i-- > 0;) {
            if (++index[i] < points) {
                break;
            }
            index[i] = 0;
        }
    }
    if (grid.empty()) {
        throw std::invalid_argument("no grid points remain after exclusion");
    }
    return grid;
}

double lie_derivative(const CandidatePolynomial& candidate,
                      const VectorField& field, std::span<const double> x) {
    const std::vector<double> grad = candidate.gradient(x);
    const std::vector<double> f = field.eval(x);
    double dot = 0.0;
    for (std::size_t i = 0; i < grad.size(); ++i) {
        dot += grad[i] * f[i];
    }
    return dot;
}

namespace {

Verdict classify_values(double value, double derivative) {
    if (!(value > 0.0)) {
        return Verdict::ViolatedPositivity;
    }
    if (!(derivative < 0.0)) {
        return Verdict::ViolatedDecrease;
    }
    return Verdict::Satisfied;
}

}  // namespace

Verdict classify_point(const CandidatePolynomial& candidate,
                       const VectorField& field, std::span<const double> x) {
    const double value = candidate.evaluate(x);
    const double derivative = lie_derivative(candidate, field, x);
    return classify_values(value, derivative);
}

GridCache::GridCache(const VectorField& field, const Basis& basis,
                     std::span<const double> center, const GridSpec& spec)
    : dimension_(field.dimension()),
      term_count_(basis.size()),
      point_count_(0) {
    if (basis.empty()) {
        throw std::invalid_argument("basis is empty");
    }
    if (center.size() != static_cast<std::size_t>(dimension_)) {
        throw std::invalid_argument("center dimension mismatch");
    }
    const auto grid = build_grid(spec);
    point_count_ = grid.size();
    const std::size_t n = static_cast<std::size_t>(dimension_);

    int max_degree = 0;
    for (const auto& mi : basis) {
        max_degree = std::max(max_degree, mi.degree());
    }

    points_.resize(point_count_ * n);
    monomials_.resize(point_count_ * term_count_);
    partials_.resize(point_count_ * n * term_count_);
    field_.resize(point_count_ * n);

    for (std::size_t p = 0; p < point_count_; ++p) {
        const auto& x = grid[p];
        std::copy(x.begin(), x.end(), points_.begin() + p * n);

        const PowerTable table = make_power_table(x, center, max_degree);
        double* mono = monomials_.data() + p * term_count_;
        for (std::size_t j = 0; j < term_count_; ++j) {
            mono[j] = monomial_value(table, basis[j]);
        }
        for (std::size_t axis = 0; axis < n; ++axis) {
            double* part = partials_.data() + (p * n + axis) * term_count_;
            for (std::size_t j = 0; j < term_count_; ++j) {
                part[j] = monomial_partial(table, basis[j], axis);
            }
        }
        const std::vector<double> f = field.eval(x);
        std::copy(f.begin(), f.end(), field_.begin() + p * n);
    }
}

std::span<const double> GridCache::point(std::size_t index) const {
    const std::size_t n = static_cast<std::size_t>(dimension_);
    return {points_.data() + index * n, n};
}

std::pair<double, double> GridCache::point_eval(
    std::span<const double> coefficients, std::size_t index) const {
    const std::size_t n = static_cast<std::size_t>(dimension_);
    const double* mono = monomials_.data() + index * term_count_;
    double value = 0.0;
    for (std::size_t j = 0; j < term_count_; ++j) {
        value += coefficients[j] * mono[j];
    }
    const double* f = field_.data() + index * n;
    double derivative = 0.0;
    for (std::size_t axis = 0; axis < n; ++axis) {
        const double* part = partials_.data() + (index * n + axis) * term_count_;
        double g = 0.0;
        for (std::size_t j = 0; j < term_count_; ++j) {
            g += coefficients[j] * part[j];
        }
        derivative += g * f[axis];
    }
    return {value, derivative};
}

Verdict GridCache::classify(std::span<const double> coefficients,
                            std::size_t index) const {
    const auto [value, derivative] = point_eval(coefficients, index);
    return classify_values(value, derivative);
}

double GridCache::cost_value(std::span<const double> coefficients) const {
    std::size_t violated = 0;
    for (std::size_t p = 0; p < point_count_; ++p) {
        if (classify(coefficients, p) != Verdict::Satisfied) {
            ++violated;
        }
    }
    return static_cast<double>(violated) / static_cast<double>(point_count_);
}

CostReport cost(const CandidatePolynomial& candidate, const VectorField& field,
                const GridSpec& spec) {
    if (candidate.dimension() != field.dimension()) {
        throw std::invalid_argument(
            "candidate and field dimensions do not match");
    }
    const GridCache cache(field, candidate.basis(), candidate.equilibrium(),
                          spec);
    CostReport report;
    report.total_points = cache.point_count();
    report.min_value = std::numeric_limits<double>::infinity();
    report.max_derivative = -std::numeric_limits<double>::infinity();
    const auto coefficients = candidate.coefficients();
    for (std::size_t p = 0; p < cache.point_count(); ++p) {
        const auto [value, derivative] = cache.point_eval(coefficients, p);
        report.min_value = std::min(report.min_value, value);
        report.max_derivative = std::max(report.max_derivative, derivative);
        const Verdict verdict = classify_values(value, derivative);
        if (verdict == Verdict::Satisfied) {
            ++report.satisfied_count;
        } else {
            ++report.violated_count;
            const auto x = cache.point(p);
            report.violations.push_back(Violation{
                std::vector<double>(x.begin(), x.end()), value, derivative,
                verdict});
        }
    }
    report.cost = static_cast<double>(report.violated_count) /
                  static_cast<double>(report.total_points);
    return report;
}

}  // namespace lyap
