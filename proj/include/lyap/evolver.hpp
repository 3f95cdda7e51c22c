#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "lyap/verifier.hpp"

namespace lyap {

/// Discrete coefficient alphabet {lo, lo+step, ..., hi}.
struct Alphabet {
    double lo = -2.0;
    double hi = 2.0;
    double step = 1.0;
    std::vector<double> values;

    static Alphabet from_range(double lo, double hi, double step);

    std::size_t size() const { return values.size(); }

    /// Lattice index of an alphabet value. Throws std::invalid_argument for
    /// values off the lattice.
    std::size_t index_of(double value) const;
};

enum class ClampMode {
    Clamped,   // mutation replaces a gene with a different alphabet value
    InitOnly,  // alphabet bounds only the initial population; mutation
               // steps genes by +-step and may leave [lo, hi]
};

struct GaConfig {
    std::size_t population_size = 1000;
    double mutation_prob = 0.20;    // per gene
    double crossover_prob = 0.40;   // per mating pair
    double elite_fraction = 0.01;
    std::size_t max_generations = 200;
    Alphabet alphabet = Alphabet::from_range(-2.0, 2.0, 1.0);
    std::uint64_t rng_seed = 0;
    bool early_exit_on_zero = true;
    ClampMode clamp_mode = ClampMode::Clamped;

    void validate() const;  // throws std::invalid_argument
};

using Genome = std::vector<double>;
using Rng = std::mt19937_64;

/// ceil(elite_fraction * population_size), robust against the fraction not
/// being exactly representable (1% of 1000 is exactly 10 elites).
std::size_t elite_count(const GaConfig& cfg);

/// population_size genomes of genome_length genes drawn independently and
/// uniformly from the alphabet. The two-argument form seeds a fresh RNG from
/// cfg.rng_seed; run_search uses the explicit-RNG form to continue one stream.
std::vector<Genome> init_population(const GaConfig& cfg,
                                    std::size_t genome_length);
std::vector<Genome> init_population(const GaConfig& cfg,
                                    std::size_t genome_length, Rng& rng);

/// Per-gene mutation. Clamped: with probability mutation_prob the gene is
/// replaced by a uniformly chosen different alphabet value. InitOnly: with
/// the same probability the gene steps by +-step (uniform sign), unbounded.
Genome mutate(const Genome& genome, const GaConfig& cfg, Rng& rng);

/// Single-point crossover: with probability crossover_prob picks a cut in
/// 1..l-1 and swaps tails; otherwise returns copies. Throws for l < 2.
std::pair<Genome, Genome> crossover(const Genome& parent_a,
                                    const Genome& parent_b,
                                    const GaConfig& cfg, Rng& rng);

/// Elites (lowest cost, ties to the earlier index) copied unchanged, then
/// size-2 tournaments fill the rest: two draws with replacement, lower cost
/// wins, ties go to the first draw.
std::vector<Genome> select_parents(const std::vector<Genome>& population,
                                   const std::vector<double>& costs,
                                   const GaConfig& cfg, Rng& rng);

struct GenerationRecord {
    std::size_t generation = 0;  // 1-based
    double best_cost = 1.0;
    double mean_cost = 1.0;
    double elapsed_ms = 0.0;
    Genome best_genome;
};

struct PopulationSnapshot {
    std::size_t generation = 0;
    std::vector<Genome> genomes;
    std::vector<double> costs;
};

struct RunTrace {
    std::vector<GenerationRecord> generations;
    std::vector<PopulationSnapshot> snapshots;  // only when requested
};

struct RunResult {
    CandidatePolynomial best;
    double best_cost = 1.0;
    std::size_t generations = 0;
    bool success = false;  // best_cost == 0
    RunTrace trace;
};

struct RunOptions {
    unsigned threads = 1;            // workers for cost evaluation
    std::size_t snapshot_every = 0;  // 0 = no population snapshots
};

/// Algorithm: init, then per generation crossover -> mutate -> evaluate ->
/// record -> select, stopping at max_generations or (by default) as soon as
/// some genome reaches J = 0. Elites are exempt from variation, so the
/// per-generation best cost is non-increasing once elitism kicks in.
/// Deterministic for a fixed (config, seed) regardless of thread count:
/// cost evaluation is pure and the RNG is consumed only sequentially.
RunResult run_search(const VectorField& field, int degree,
                     const GridSpec& spec, const GaConfig& cfg,
                     const RunOptions& options = {});

}  // namespace lyap
