#include "lyap/evolver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "lyap/parallel.hpp"

namespace lyap {

Alphabet Alphabet::from_range(double lo, double hi, double step) {
    if (!(hi > lo)) {
        throw std::invalid_argument("alphabet needs hi > lo");
    }
    if (!(step > 0.0)) {
        throw std::invalid_argument("alphabet step must be positive");
    }
    const double span = (hi - lo) / step;
    const double rounded = std::round(span);
    if (std::abs(span - rounded) > 1e-9) {
        throw std::invalid_argument(
            "alphabet range is not an integer number of steps");
    }
    const std::size_t count = static_cast<std::size_t>(rounded) + 1;
    Alphabet a;
    a.lo = lo;
    a.hi = hi;
    a.step = step;
    a.values.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        a.values[i] = lo + step * static_cast<double>(i);
    }
    a.values.back() = hi;
    return a;
}

std::size_t Alphabet::index_of(double value) const {
    const double offset = (value - lo) / step;
    const double rounded = std::round(offset);
    if (rounded < 0.0 || rounded >= static_cast<double>(values.size()) ||
        std::abs(offset - rounded) > 1e-9) {
        throw std::invalid_argument("value is not on the alphabet lattice");
    }
    return static_cast<std::size_t>(rounded);
}

void GaConfig::validate() const {
    if (population_size < 2) {
        throw std::invalid_argument("population_size must be at least 2");
    }
    if (!(mutation_prob >= 0.0 && mutation_prob <= 1.0)) {
        throw std::invalid_argument("mutation_prob must be in [0, 1]");
    }
    if (!(crossover_prob >= 0.0 && crossover_prob <= 1.0)) {
        throw std::invalid_argument("crossover_prob must be in [0, 1]");
    }
    if (!(elite_fraction >= 0.0 && elite_fraction < 1.0)) {
        throw std::invalid_argument("elite_fraction must be in [0, 1)");
    }
    if (max_generations < 1) {
        throw std::invalid_argument("max_generations must be at least 1");
    }
    if (alphabet.values.size() < 2) {
        throw std::invalid_argument("alphabet needs at least two values");
    }
}

std::size_t elite_count(const GaConfig& cfg) {
    if (cfg.elite_fraction <= 0.0) {
        return 0;
    }
    // Nudge below the product so a fraction meant to be exact (0.01 * 1000)
    // is not pushed past its integer by representation error.
    const double product =
        cfg.elite_fraction * static_cast<double>(cfg.population_size);
    const std::size_t count =
        static_cast<std::size_t>(std::ceil(product * (1.0 - 1e-12)));
    return std::min<std::size_t>(std::max<std::size_t>(count, 1),
                                 cfg.population_size);
}

namespace {

double uniform01(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

std::size_t uniform_index(Rng& rng, std::size_t bound) {
    return std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng);
}

}  // namespace

std::vector<Genome> init_population(const GaConfig& cfg,
                                    std::size_t genome_length, Rng& rng) {
    cfg.validate();
    if (genome_length == 0) {
        throw std::invalid_argument("genome length must be positive");
    }
    const auto& values = cfg.alphabet.values;
    std::vector<Genome> population(cfg.population_size);
    for (auto& genome : population) {
        genome.resize(genome_length);
        for (auto& gene : genome) {
            gene = values[uniform_index(rng, values.size())];
        }
    }
    return population;
}

std::vector<Genome> init_population(const GaConfig& cfg,
                                    std::size_t genome_length) {
    Rng rng(cfg.rng_seed);
    return init_population(cfg, genome_length, rng);
}

Genome mutate(const Genome& genome, const GaConfig& cfg, Rng& rng) {
    Genome out = genome;
    const auto& values = cfg.alphabet.values;
    for (auto& gene : out) {
        if (uniform01(rng) >= cfg.mutation_prob) {
            continue;
        }
        if (cfg.clamp_mode == ClampMode::Clamped) {
            // Uniform over the K-1 values different from the current one.
            const std::size_t current = cfg.alphabet.index_of(gene);
            std::size_t pick = uniform_index(rng, values.size() - 1);
            if (pick >= current) {
                ++pick;
            }
            gene = values[pick];
        } else {
            // Additive creep: one lattice step in either direction, allowed
            // to leave [lo, hi].
            const double sign = uniform01(rng) < 0.5 ? -1.0 : 1.0;
            gene += sign * cfg.alphabet.step;
        }
    }
    return out;
}

std::pair<Genome, Genome> crossover(const Genome& parent_a,
                                    const Genome& parent_b,
                                    const GaConfig& cfg, Rng& rng) {
    if (parent_a.size() != parent_b.size()) {
        throw std::invalid_argument("parent genome lengths differ");
    }
    const std::size_t l = parent_a.size();
    if (l < 2) {
        throw std::invalid_argument(
            "crossover needs genomes of length at least 2");
    }
    Genome child_a = parent_a;
    Genome child_b = parent_b;
    if (uniform01(rng) < cfg.crossover_prob) {
        // Cut in 1..l-1: positions cut.. swap.
        const std::size_t cut = 1 + uniform_index(rng, l - 1);
        for (std::size_t i = cut; i < l; ++i) {
            std::swap(child_a[i], child_b[i]);
        }
    }
    return {std::move(child_a), std::move(child_b)};
}

std::vector<Genome> select_parents(const std::vector<Genome>& population,
                                   const std::vector<double>& costs,
                                   const GaConfig& cfg, Rng& rng) {
    const std::size_t n = population.size();
    if (n == 0 || costs.size() != n) {
        throw std::invalid_argument("population and cost sizes do not match");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                         return costs[a] < costs[b];
                     });

    const std::size_t elites = std::min(elite_count(cfg), n);
    std::vector<Genome> next;
    next.reserve(n);
    for (std::size_t e = 0; e < elites; ++e) {
        next.push_back(population[order[e]]);
    }
    while (next.size() < n) {
        const std::size_t first = uniform_index(rng, n);
        const std::size_t second = uniform_index(rng, n);
        // Strictly lower cost wins; a tie keeps the first draw.
        const std::size_t winner =
            costs[second] < costs[first] ? second : first;
        next.push_back(population[winner]);
    }
    return next;
}

RunResult run_search(const VectorField& field, int degree,
                     const GridSpec& spec, const GaConfig& cfg,
                     const RunOptions& options) {
    cfg.validate();
    const Basis basis = enumerate_basis(field.dimension(), degree);
    const std::size_t genome_length = basis.size();
    const std::vector<double> equilibrium(field.equilibrium().begin(),
                                          field.equilibrium().end());
    const GridCache cache(field, basis, equilibrium, spec);

    Rng rng(cfg.rng_seed);
    std::vector<Genome> population = init_population(cfg, genome_length, rng);
    const std::size_t n = population.size();
    const std::size_t elites = elite_count(cfg);

    RunTrace trace;
    Genome best_genome;
    double best_cost = std::numeric_limits<double>::infinity();
    std::vector<double> costs(n, 0.0);

    // Slots below this index hold elites copied by the previous selection;
    // they skip crossover and mutation so the best genome is never lost.
    std::size_t protected_prefix = 0;

    std::size_t generation = 0;
    while (generation < cfg.max_generations) {
        ++generation;
        const auto started = std::chrono::steady_clock::now();

        // Crossover adjacent non-elite pairs; tournament selection already
        // randomized the pairing.
        if (genome_length >= 2) {
            for (std::size_t i = protected_prefix; i + 1 < n; i += 2) {
                auto [a, b] = crossover(population[i], population[i + 1], cfg,
                                        rng);
                population[i] = std::move(a);
                population[i + 1] = std::move(b);
            }
        }
        for (std::size_t i = protected_prefix; i < n; ++i) {
            population[i] = mutate(population[i], cfg, rng);
        }

        parallel_chunks(n, options.threads,
                        [&](std::size_t begin, std::size_t end) {
                            for (std::size_t i = begin; i < end; ++i) {
                                costs[i] = cache.cost_value(population[i]);
                            }
                        });

        std::size_t gen_best = 0;
        double cost_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cost_sum += costs[i];
            if (costs[i] < costs[gen_best]) {
                gen_best = i;
            }
        }
        if (costs[gen_best] < best_cost) {
            best_cost = costs[gen_best];
            best_genome = population[gen_best];
        }

        const auto elapsed =
            std::chrono::duration<double, std::milli>(
                std::chrono::steady_clock::now() - started)
                .count();
        trace.generations.push_back(GenerationRecord{
            generation, costs[gen_best], cost_sum / static_cast<double>(n),
            elapsed, population[gen_best]});
        if (options.snapshot_every > 0 &&
            generation % options.snapshot_every == 0) {
            trace.snapshots.push_back(
                PopulationSnapshot{generation, population, costs});
        }

        if (cfg.early_exit_on_zero && best_cost == 0.0) {
            break;
        }
        if (generation == cfg.max_generations) {
            break;
        }
        population = select_parents(population, costs, cfg, rng);
        protected_prefix = elites;
    }

    RunResult result{
        CandidatePolynomial(field.dimension(), degree, best_genome,
                            equilibrium),
        best_cost, generation, best_cost == 0.0, std::move(trace)};
    return result;
}

}  // namespace lyap
