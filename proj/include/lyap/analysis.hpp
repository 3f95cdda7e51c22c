#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lyap/evolver.hpp"

namespace lyap {

struct ConvergenceParams {
    double p_conv = 0.8;        // target probability of at least one optimum
    double mutation_prob = 0.2; // per-gene mutation probability
    int parameter_count = 9;    // optimized parameters (basis size)
    int alphabet_size = 2;      // distinct values per parameter
    long long population = 1;

    void validate() const;  // throws std::invalid_argument
};

/// min[(1-mu)^(gamma-1) * mu/(K-1), (mu/(K-1))^gamma], the per-individual
/// probability floor of producing a specific optimum in one generation.
double convergence_inner_min(const ConvergenceParams& p);

/// Iterations needed to contain an optimal individual with probability at
/// least p_conv: trunc[ln(1-p_conv) / (n * ln(1 - inner_min))].
long long convergence_iterations(const ConvergenceParams& p);

/// Partial genome template: values pinned at `fixed` positions, wildcards
/// elsewhere.
struct Schema {
    std::size_t length = 0;
    std::map<std::size_t, double> fixed;  // position (0-based) -> value
};

struct SchemaStats {
    std::size_t order = 0;            // number of fixed positions
    std::size_t defining_length = 0;  // span between outermost fixed positions
};

SchemaStats schema_stats(const Schema& schema);  // throws on invalid schema

bool schema_matches(const Schema& schema, const Genome& genome);

struct SchemaTraceRow {
    std::size_t generation = 0;
    std::size_t count = 0;            // N(h,t)
    double schema_fitness = 0.0;      // mean 1-J over matching genomes
    double population_fitness = 0.0;  // mean 1-J over the population
    double bound = 0.0;               // growth bound for N(h,t+1)
    bool held = false;                // N(h,t+1) >= bound
};

struct SchemaTrace {
    std::vector<SchemaTraceRow> rows;  // one per generation with a successor
    double held_fraction = 0.0;
};

/// Checks the schema growth inequality against recorded population
/// snapshots (required every generation). Fitness is 1 - J so that better
/// genomes score higher. The inequality holds in expectation only; the
/// trace reports the empirical hold fraction.
SchemaTrace schema_trace(const RunTrace& trace, const Schema& schema,
                         const GaConfig& cfg);

enum class SweepParam { AlphabetRange, RegionSide, PopulationSize };

/// One GA run per (cell, seed), where a cell overrides a single parameter of
/// the base configuration: AlphabetRange d -> alphabet [-d, d] with the base
/// step; RegionSide s -> square region of side s (exclusion radius re-derived
/// when the base left it automatic); PopulationSize -> population size.
struct SweepPlan {
    VectorField system;
    int degree = 3;
    GridSpec grid;
    GaConfig ga;  // per-run seed comes from `seeds`
    SweepParam param = SweepParam::PopulationSize;
    std::vector<double> values;
    std::vector<std::uint64_t> seeds;
    bool record_traces = true;  // keep the first seed's trace per cell
};

struct SweepRow {
    std::size_t cell_id = 0;
    std::string varied_param;
    double value = 0.0;
    std::uint64_t seed = 0;
    bool success = false;
    std::size_t generations = 0;  // first generation with J = 0 if success
    double best_cost = 1.0;
    double elapsed_ms = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;          // cell-major, then seed order
    std::array<std::size_t, 5> bins{};   // successes per D1..D5
    std::vector<std::pair<std::size_t, RunTrace>> traces;  // (cell_id, trace)
};

/// Bins successful generation counts into D1..D5 = (0,200], (200,400], ...,
/// (800,1000]; counts beyond 1000 fall outside every bin.
std::array<std::size_t, 5> bin_generations(
    const std::vector<std::size_t>& success_generations);

const char* sweep_param_name(SweepParam param);

/// Runs the plan. Cells and seeds are independent; `threads` parallelizes
/// across runs while keeping row order and all results identical to the
/// sequential execution.
SweepResult run_sweep(const SweepPlan& plan, unsigned threads = 1);

}  // namespace lyap
