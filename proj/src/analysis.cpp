#include "lyap/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "lyap/parallel.hpp"

namespace lyap {

void ConvergenceParams::validate() const {
    if (!(p_conv > 0.0 && p_conv < 1.0)) {
        throw std::invalid_argument("p_conv must be in (0, 1)");
    }
    if (!(mutation_prob > 0.0 && mutation_prob < 1.0)) {
        throw std::invalid_argument("mutation_prob must be in (0, 1)");
    }
    if (parameter_count < 1) {
        throw std::invalid_argument("parameter_count must be at least 1");
    }
    if (alphabet_size < 2) {
        throw std::invalid_argument("alphabet_size must be at least 2");
    }
    if (population < 1) {
        throw std::invalid_argument("population must be at least 1");
    }
}

double convergence_inner_min(const ConvergenceParams& p) {
    p.validate();
    const double mu = p.mutation_prob;
    const double gamma = static_cast<double>(p.parameter_count);
    const double per_gene = mu / static_cast<double>(p.alphabet_size - 1);
    const double keep_then_hit =
        std::pow(1.0 - mu, gamma - 1.0) * per_gene;
    const double hit_all = std::pow(per_gene, gamma);
    return std::min(keep_then_hit, hit_all);
}

long long convergence_iterations(const ConvergenceParams& p) {
    const double q = convergence_inner_min(p);
    if (!(q > 0.0 && q < 1.0)) {
        throw std::invalid_argument(
            "per-individual probability is degenerate; cannot take the log");
    }
    // log1p keeps precision when q is tiny (e.g. (mu/(K-1))^gamma ~ 1e-8).
    const double numerator = std::log1p(-p.p_conv);
    const double denominator =
        static_cast<double>(p.population) * std::log1p(-q);
    return static_cast<long long>(std::trunc(numerator / denominator));
}

SchemaStats schema_stats(const Schema& schema) {
    if (schema.length == 0) {
        throw std::invalid_argument("schema length must be positive");
    }
    if (schema.fixed.empty()) {
        throw std::invalid_argument("schema must fix at least one position");
    }
    for (const auto& [position, value] : schema.fixed) {
        if (position >= schema.length) {
            throw std::invalid_argument("schema position out of range");
        }
    }
    SchemaStats stats;
    stats.order = schema.fixed.size();
    stats.defining_length =
        schema.fixed.rbegin()->first - schema.fixed.begin()->first;
    return stats;
}

bool schema_matches(const Schema& schema, const Genome& genome) {
    if (genome.size() != schema.length) {
        throw std::invalid_argument(
            "genome length does not match the schema length");
    }
    for (const auto& [position, value] : schema.fixed) {
        if (genome[position] != value) {
            return false;
        }
    }
    return true;
}

namespace {

std::pair<std::size_t, double> count_and_fitness(
    const PopulationSnapshot& snapshot, const Schema& schema) {
    std::size_t count = 0;
    double fitness_sum = 0.0;
    for (std::size_t i = 0; i < snapshot.genomes.size(); ++i) {
        if (schema_matches(schema, snapshot.genomes[i])) {
            ++count;
            fitness_sum += 1.0 - snapshot.costs[i];
        }
    }
    const double mean = count > 0 ? fitness_sum / count : 0.0;
    return {count, mean};
}

}  // namespace

SchemaTrace schema_trace(const RunTrace& trace, const Schema& schema,
                         const GaConfig& cfg) {
    const SchemaStats stats = schema_stats(schema);
    const auto& snapshots = trace.snapshots;
    if (snapshots.size() != trace.generations.size()) {
        throw std::invalid_argument(
            "schema trace needs a population snapshot for every generation");
    }
    for (std::size_t i = 0; i < snapshots.size(); ++i) {
        if (snapshots[i].generation != trace.generations[i].generation) {
            throw std::invalid_argument(
                "population snapshots do not line up with the generations");
        }
    }

    const double l = static_cast<double>(schema.length);
    const double disruption =
        l > 1.0 ? static_cast<double>(stats.defining_length) / (l - 1.0) *
                      cfg.crossover_prob
                : 0.0;
    const double survival =
        1.0 - disruption -
        static_cast<double>(stats.order) * cfg.mutation_prob;

    SchemaTrace result;
    std::size_t held = 0;
    for (std::size_t t = 0; t + 1 < snapshots.size(); ++t) {
        const auto [count, schema_fitness] =
            count_and_fitness(snapshots[t], schema);
        double population_fitness = 0.0;
        for (const double cost : snapshots[t].costs) {
            population_fitness += 1.0 - cost;
        }
        population_fitness /= static_cast<double>(snapshots[t].costs.size());

        const double ratio =
            population_fitness > 0.0 ? schema_fitness / population_fitness
                                     : 0.0;
        const double bound =
            static_cast<double>(count) * ratio * survival;

        const auto [next_count, next_fitness] =
            count_and_fitness(snapshots[t + 1], schema);
        (void)next_fitness;

        SchemaTraceRow row;
        row.generation = snapshots[t].generation;
        row.count = count;
        row.schema_fitness = schema_fitness;
        row.population_fitness = population_fitness;
        row.bound = bound;
        row.held = static_cast<double>(next_count) >= bound;
        if (row.held) {
            ++held;
        }
        result.rows.push_back(std::move(row));
    }
    result.held_fraction =
        result.rows.empty()
            ? 1.0
            : static_cast<double>(held) / static_cast<double>(result.rows.size());
    return result;
}

std::array<std::size_t, 5> bin_generations(
    const std::vector<std::size_t>& success_generations) {
    std::array<std::size_t, 5> bins{};
    for (const std::size_t g : success_generations) {
        if (g == 0 || g > 1000) {
            continue;
        }
        bins[(g - 1) / 200] += 1;
    }
    return bins;
}

const char* sweep_param_name(SweepParam param) {
    switch (param) {
        case SweepParam::AlphabetRange:
            return "alphabet_range";
        case SweepParam::RegionSide:
            return "region_side";
        case SweepParam::PopulationSize:
            return "population_size";
    }
    return "?";
}

namespace {

struct CellSetup {
    GridSpec grid;
    GaConfig ga;
};

CellSetup cell_setup(const SweepPlan& plan, double value) {
    CellSetup setup{plan.grid, plan.ga};
    switch (plan.param) {
        case SweepParam::AlphabetRange:
            setup.ga.alphabet =
                Alphabet::from_range(-value, value, plan.ga.alphabet.step);
            break;
        case SweepParam::RegionSide:
            for (auto& side : setup.grid.region.side_lengths) {
                side = value;
            }
            break;
        case SweepParam::PopulationSize: {
            const double rounded = std::round(value);
            if (rounded < 2.0 || std::abs(value - rounded) > 1e-9) {
                throw std::invalid_argument(
                    "population size values must be integers >= 2");
            }
            setup.ga.population_size = static_cast<std::size_t>(rounded);
            break;
        }
    }
    return setup;
}

}  // namespace

SweepResult run_sweep(const SweepPlan& plan, unsigned threads) {
    if (plan.values.empty()) {
        throw std::invalid_argument("sweep has no values to vary");
    }
    if (plan.seeds.empty()) {
        throw std::invalid_argument("sweep has no seeds");
    }
    plan.ga.validate();
    plan.grid.validate();

    // Validate every cell before spending time on any run.
    std::vector<CellSetup> setups;
    setups.reserve(plan.values.size());
    for (const double value : plan.values) {
        CellSetup setup = cell_setup(plan, value);
        setup.ga.validate();
        setup.grid.validate();
        setups.push_back(std::move(setup));
    }

    const std::size_t seeds = plan.seeds.size();
    const std::size_t total = plan.values.size() * seeds;
    SweepResult result;
    result.rows.resize(total);
    std::vector<RunTrace> first_traces(plan.values.size());

    parallel_chunks(total, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t run = begin; run < end; ++run) {
            const std::size_t cell = run / seeds;
            const std::size_t seed_index = run % seeds;
            GaConfig cfg = setups[cell].ga;
            cfg.rng_seed = plan.seeds[seed_index];

            const auto started = std::chrono::steady_clock::now();
            RunResult run_result = run_search(plan.system, plan.degree,
                                              setups[cell].grid, cfg);
            const double elapsed =
                std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - started)
                    .count();

            SweepRow row;
            row.cell_id = cell;
            row.varied_param = sweep_param_name(plan.param);
            row.value = plan.values[cell];
            row.seed = plan.seeds[seed_index];
            row.success = run_result.success;
            row.best_cost = run_result.best_cost;
            row.elapsed_ms = elapsed;
            if (run_result.success) {
                for (const auto& record : run_result.trace.generations) {
                    if (record.best_cost == 0.0) {
                        row.generations = record.generation;
                        break;
                    }
                }
            } else {
                row.generations = run_result.generations;
            }
            result.rows[run] = std::move(row);
            if (plan.record_traces && seed_index == 0) {
                first_traces[cell] = std::move(run_result.trace);
            }
        }
    });

    std::vector<std::size_t> success_generations;
    for (const auto& row : result.rows) {
        if (row.success) {
            success_generations.push_back(row.generations);
        }
    }
    result.bins = bin_generations(success_generations);

    if (plan.record_traces) {
        for (std::size_t cell = 0; cell < first_traces.size(); ++cell) {
            result.traces.emplace_back(cell, std::move(first_traces[cell]));
        }
    }
    return result;
}

}  // namespace lyap
