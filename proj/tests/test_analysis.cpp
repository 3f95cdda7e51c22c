#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "lyap/analysis.hpp"

using namespace lyap;

namespace {

ConvergenceParams reference_params(double mu) {
    ConvergenceParams p;
    p.p_conv = 0.8;
    p.mutation_prob = mu;
    p.parameter_count = 9;
    p.alphabet_size = 2;
    p.population = 10000;
    return p;
}

// 256-bit reference for the iteration count, rounding intermediates to
// nearest. The result is truncated toward zero exactly as the production
// formula does.
long long mpfr_iterations(const ConvergenceParams& p) {
    const int prec = 256;
    mpfr_t mu, base, a, b, q, num, den, tau;
    mpfr_inits2(prec, mu, base, a, b, q, num, den, tau, (mpfr_ptr)nullptr);

    mpfr_set_d(mu, p.mutation_prob, MPFR_RNDN);
    // a = (1-mu)^(gamma-1) * mu/(K-1)
    mpfr_d_sub(base, 1.0, mu, MPFR_RNDN);
    mpfr_pow_si(a, base, p.parameter_count - 1, MPFR_RNDN);
    mpfr_mul(a, a, mu, MPFR_RNDN);
    mpfr_div_si(a, a, p.alphabet_size - 1, MPFR_RNDN);
    // b = (mu/(K-1))^gamma
    mpfr_div_si(b, mu, p.alphabet_size - 1, MPFR_RNDN);
    mpfr_pow_si(b, b, p.parameter_count, MPFR_RNDN);
    mpfr_min(q, a, b, MPFR_RNDN);

    // tau = ln(1 - p_conv) / (n * ln(1 - q))
    mpfr_set_d(num, 1.0 - p.p_conv, MPFR_RNDN);
    mpfr_log(num, num, MPFR_RNDN);
    mpfr_d_sub(den, 1.0, q, MPFR_RNDN);
    mpfr_log(den, den, MPFR_RNDN);
    mpfr_mul_si(den, den, p.population, MPFR_RNDN);
    mpfr_div(tau, num, den, MPFR_RNDN);
    mpfr_trunc(tau, tau);
    long long out = mpfr_get_sj(tau, MPFR_RNDZ);
    mpfr_clears(mu, base, a, b, q, num, den, tau, (mpfr_ptr)nullptr);
    return out;
}

SweepPlan make_plan(const char* system) {
    return SweepPlan{builtin_system(system), 3,  GridSpec{},
                     GaConfig{},             SweepParam::PopulationSize,
                     {},                     {}, true};
}

RunTrace make_trace(const std::vector<std::vector<Genome>>& populations,
                    const std::vector<std::vector<double>>& costs) {
    RunTrace trace;
    for (std::size_t t = 0; t < populations.size(); ++t) {
        GenerationRecord rec;
        rec.generation = t + 1;
        trace.generations.push_back(rec);
        PopulationSnapshot snap;
        snap.generation = t + 1;
        snap.genomes = populations[t];
        snap.costs = costs[t];
        trace.snapshots.push_back(std::move(snap));
    }
    return trace;
}

}  // namespace

TEST_CASE("iteration bound matches the worked examples") {
    CHECK(convergence_iterations(reference_params(0.20)) == 314);
    CHECK(convergence_iterations(reference_params(0.17)) == 1357);
    CHECK(convergence_iterations(reference_params(0.15)) == 4186);
}

TEST_CASE("inner probability floor is tiny but positive") {
    const double q = convergence_inner_min(reference_params(0.20));
    CHECK(q == doctest::Approx(5.12e-07).epsilon(1e-6));
    CHECK(q > 0.0);
    // with K = 2 and small mu the all-genes branch dominates
    const double direct = std::min(
        std::pow(1.0 - 0.2, 8) * 0.2, std::pow(0.2, 9));
    CHECK(q == doctest::Approx(direct));
}

TEST_CASE("a vanishing confidence target needs zero iterations") {
    ConvergenceParams p = reference_params(0.20);
    p.p_conv = 1e-12;
    CHECK(convergence_iterations(p) == 0);
}

TEST_CASE("iteration bound agrees with a 256-bit reference") {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> mu_draw(0.1, 0.5);
    std::uniform_real_distribution<double> p_draw(0.1, 0.99);
    for (int rep = 0; rep < 100; ++rep) {
        ConvergenceParams p;
        p.p_conv = p_draw(rng);
        p.mutation_prob = mu_draw(rng);
        p.parameter_count = 1 + static_cast<int>(rng() % 9);
        p.alphabet_size = 2 + static_cast<int>(rng() % 5);
        p.population = 1 + static_cast<long long>(rng() % 1000000);
        CAPTURE(p.p_conv);
        CAPTURE(p.mutation_prob);
        CAPTURE(p.parameter_count);
        CAPTURE(p.alphabet_size);
        CAPTURE(p.population);
        const long long got = convergence_iterations(p);
        const long long want = mpfr_iterations(p);
        CHECK(std::abs(got - want) <= 1);
    }
}

TEST_CASE("iteration bound is monotone in the confidence and the population") {
    for (double mu : {0.15, 0.2, 0.3}) {
        ConvergenceParams p = reference_params(mu);
        long long prev = -1;
        for (double conf : {0.1, 0.3, 0.5, 0.8, 0.95, 0.999}) {
            p.p_conv = conf;
            const long long tau = convergence_iterations(p);
            CHECK(tau >= prev);
            prev = tau;
        }
        p.p_conv = 0.8;
        long long small_pop;
        {
            p.population = 100;
            small_pop = convergence_iterations(p);
        }
        p.population = 10000;
        CHECK(convergence_iterations(p) <= small_pop);
    }
}

TEST_CASE("degenerate convergence parameters are rejected") {
    ConvergenceParams p = reference_params(0.2);
    p.p_conv = 1.0;  // ln(0)
    CHECK_THROWS_AS(convergence_iterations(p), std::invalid_argument);
    p = reference_params(0.2);
    p.alphabet_size = 1;
    CHECK_THROWS_AS(convergence_iterations(p), std::invalid_argument);
    p = reference_params(0.0);
    CHECK_THROWS_AS(convergence_iterations(p), std::invalid_argument);
    p = reference_params(0.2);
    p.population = 0;
    CHECK_THROWS_AS(convergence_iterations(p), std::invalid_argument);
}

TEST_CASE("schema order and defining length") {
    Schema h;
    h.length = 9;
    h.fixed = {{1, 2.0}, {5, -1.0}};
    SchemaStats s = schema_stats(h);
    CHECK(s.order == 2);
    CHECK(s.defining_length == 4);

    Schema single;
    single.length = 9;
    single.fixed = {{4, 0.0}};
    CHECK(schema_stats(single).order == 1);
    CHECK(schema_stats(single).defining_length == 0);

    Schema wide;
    wide.length = 6;
    wide.fixed = {{0, 1.0}, {5, 1.0}};
    CHECK(schema_stats(wide).defining_length == 5);

    // the defining length needs outermost fixed positions, so a schema
    // fixing nothing is invalid
    Schema empty;
    empty.length = 5;
    CHECK_THROWS_AS(schema_stats(empty), std::invalid_argument);

    Schema bad;
    bad.length = 3;
    bad.fixed = {{3, 1.0}};  // position out of range
    CHECK_THROWS_AS(schema_stats(bad), std::invalid_argument);
}

TEST_CASE("schema matching is positionwise equality on fixed genes") {
    Schema h;
    h.length = 4;
    h.fixed = {{0, 1.0}, {2, -2.0}};
    CHECK(schema_matches(h, Genome{1, 0, -2, 5}));
    CHECK(schema_matches(h, Genome{1, 9, -2, -7}));
    CHECK_FALSE(schema_matches(h, Genome{0, 0, -2, 5}));
    CHECK_FALSE(schema_matches(h, Genome{1, 0, 2, 5}));
    // a genome of the wrong length is a caller bug, not a mismatch
    CHECK_THROWS_AS(schema_matches(h, Genome{1, 0, -2}),
                    std::invalid_argument);
}

TEST_CASE("schema counts in a trace match a brute-force scan") {
    std::mt19937_64 rng(53);
    GaConfig cfg;
    cfg.population_size = 40;
    cfg.alphabet = Alphabet::from_range(-2.0, 2.0, 1.0);
    const std::size_t T = 6, n = 40, l = 9;
    std::vector<std::vector<Genome>> pops(T);
    std::vector<std::vector<double>> costs(T);
    for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t i = 0; i < n; ++i) {
            Genome g(l);
            for (double& v : g)
                v = cfg.alphabet.values[rng() % cfg.alphabet.size()];
            pops[t].push_back(g);
            costs[t].push_back((rng() % 100) / 100.0);
        }
    }
    RunTrace trace = make_trace(pops, costs);
    for (int rep = 0; rep < 20; ++rep) {
        Schema h;
        h.length = l;
        const int order = 1 + static_cast<int>(rng() % 3);
        for (int k = 0; k < order; ++k)
            h.fixed[rng() % l] =
                cfg.alphabet.values[rng() % cfg.alphabet.size()];
        SchemaTrace st = schema_trace(trace, h, cfg);
        REQUIRE(st.rows.size() == T - 1);  // last generation has no successor
        for (std::size_t t = 0; t + 1 < T; ++t) {
            std::size_t naive = 0;
            for (const auto& g : pops[t])
                if (schema_matches(h, g)) ++naive;
            CHECK(st.rows[t].count == naive);
            CHECK(st.rows[t].generation == t + 1);
        }
        // held flags must agree with the reported bound and actual counts
        double held = 0.0;
        for (std::size_t t = 0; t + 1 < T; ++t) {
            std::size_t next = 0;
            for (const auto& g : pops[t + 1])
                if (schema_matches(h, g)) ++next;
            const bool expect =
                static_cast<double>(next) >= st.rows[t].bound;
            CHECK(st.rows[t].held == expect);
            if (expect) held += 1.0;
        }
        CHECK(st.held_fraction ==
              doctest::Approx(held / static_cast<double>(T - 1)));
    }
}

TEST_CASE("schema growth bound uses fitness ratio and disruption terms") {
    GaConfig cfg;
    cfg.population_size = 4;
    cfg.crossover_prob = 0.5;
    cfg.mutation_prob = 0.1;
    cfg.alphabet = Alphabet::from_range(-2.0, 2.0, 1.0);
    const std::size_t l = 5;
    // two matching genomes with fitness 0.9, 0.7; population mean 0.6
    std::vector<std::vector<Genome>> pops = {
        {{1, 0, 0, 0, 2}, {1, 3, 3, 3, 2}, {0, 0, 0, 0, 0}, {2, 2, 2, 2, 2}},
        {{1, 0, 0, 0, 2}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}},
    };
    std::vector<std::vector<double>> costs = {
        {0.1, 0.3, 0.8, 0.4},
        {0.5, 0.5, 0.5, 0.5},
    };
    Schema h;
    h.length = l;
    h.fixed = {{0, 1.0}, {4, 2.0}};  // order 2, defining length 4
    RunTrace trace = make_trace(pops, costs);
    SchemaTrace st = schema_trace(trace, h, cfg);
    REQUIRE(st.rows.size() == 1);
    const SchemaTraceRow& row = st.rows[0];
    CHECK(row.count == 2);
    CHECK(row.schema_fitness == doctest::Approx(0.8));
    CHECK(row.population_fitness == doctest::Approx(0.6));
    const double survival =
        1.0 - 0.5 * 4.0 / (l - 1.0) - 2.0 * 0.1;
    CHECK(row.bound ==
          doctest::Approx(2.0 * (0.8 / 0.6) * survival));
    // next generation holds one matching genome
    CHECK(row.held == (1.0 >= row.bound));
}

TEST_CASE("schema trace requires per-generation snapshots") {
    GaConfig cfg;
    cfg.population_size = 4;
    Schema h;
    h.length = 3;
    h.fixed = {{0, 1.0}};
    // a trace with no generations is vacuous, not an error
    RunTrace empty;
    SchemaTrace st = schema_trace(empty, h, cfg);
    CHECK(st.rows.empty());
    CHECK(st.held_fraction == 1.0);
    // snapshots thinner than the generation list are rejected
    std::vector<std::vector<Genome>> pops = {{{1, 0, 0}}, {{1, 0, 0}}};
    std::vector<std::vector<double>> costs = {{0.5}, {0.5}};
    RunTrace trace = make_trace(pops, costs);
    trace.snapshots.pop_back();
    CHECK_THROWS_AS(schema_trace(trace, h, cfg), std::invalid_argument);
}

TEST_CASE("under neutral selection the expected schema count is stationary") {
    // crossover and mutation off, all costs equal: tournament selection is
    // a uniform resample, so N(h,t) is a martingale and the growth bound
    // degenerates to N(h,t). Checked as a Monte-Carlo average over seeds.
    GaConfig cfg;
    cfg.population_size = 60;
    cfg.crossover_prob = 0.0;
    cfg.mutation_prob = 0.0;
    cfg.elite_fraction = 0.0;
    cfg.alphabet = Alphabet::from_range(0.0, 1.0, 1.0);
    const std::size_t l = 6, T = 20;
    Schema h;
    h.length = l;
    h.fixed = {{0, 1.0}, {3, 0.0}};
    double drift_sum = 0.0;
    double held_sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        Rng rng(seed);
        GaConfig seeded = cfg;
        seeded.rng_seed = seed;
        auto pop = init_population(seeded, l, rng);
        std::vector<double> costs(cfg.population_size, 0.5);
        std::vector<std::vector<Genome>> pops;
        std::vector<std::vector<double>> costs_t;
        for (std::size_t t = 0; t < T; ++t) {
            pops.push_back(pop);
            costs_t.push_back(costs);
            pop = select_parents(pop, costs, cfg, rng);
        }
        auto count = [&](const std::vector<Genome>& p) {
            std::size_t c = 0;
            for (const auto& g : p)
                if (schema_matches(h, g)) ++c;
            return static_cast<double>(c);
        };
        drift_sum += count(pops.back()) - count(pops.front());
        SchemaTrace st = schema_trace(make_trace(pops, costs_t), h, cfg);
        for (const auto& row : st.rows) {
            CHECK(row.bound == doctest::Approx(row.count));
            if (row.count > 0)
                CHECK(row.schema_fitness == doctest::Approx(0.5));
        }
        held_sum += st.held_fraction;
    }
    // E[drift] = 0; the empirical mean over 50 seeds stays well inside
    // +-4 genomes (sigma_mean is about 1.3 for this walk)
    CHECK(std::abs(drift_sum / 50.0) < 4.0);
    // with a tight (equality) bound the inequality still holds about half
    // the time under pure sampling noise
    CHECK(held_sum / 50.0 > 0.3);
    CHECK(held_sum / 50.0 < 0.85);
}

TEST_CASE("generation counts land in 200-wide bins") {
    auto bins = bin_generations({150, 250, 450});
    CHECK(bins == std::array<std::size_t, 5>{1, 1, 1, 0, 0});
    bins = bin_generations({1, 200, 201, 400, 401, 1000});
    CHECK(bins == std::array<std::size_t, 5>{2, 2, 1, 0, 1});
    bins = bin_generations({1001, 5000});
    CHECK(bins == std::array<std::size_t, 5>{0, 0, 0, 0, 0});
    CHECK(bin_generations({}) == std::array<std::size_t, 5>{0, 0, 0, 0, 0});
}

TEST_CASE("sweep runs every cell for every seed and is deterministic") {
    SweepPlan plan = make_plan("pendulum");
    plan.grid.region.center = {0.0, 0.0};
    plan.grid.region.side_lengths = {1.0, 1.0};
    plan.grid.points_per_axis = 51;
    plan.ga.population_size = 60;
    plan.ga.max_generations = 30;
    plan.param = SweepParam::PopulationSize;
    plan.values = {50.0, 200.0};
    plan.seeds = {1, 2, 3};
    SweepResult r = run_sweep(plan);
    REQUIRE(r.rows.size() == 6);
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        const SweepRow& row = r.rows[i];
        CHECK(row.cell_id == i / 3);
        CHECK(row.seed == plan.seeds[i % 3]);
        CHECK(row.varied_param == "population_size");
        CHECK(row.value == plan.values[i / 3]);
        if (row.success) CHECK(row.best_cost == 0.0);
    }
    // bins tally successes only
    std::vector<std::size_t> sg;
    for (const auto& row : r.rows)
        if (row.success) sg.push_back(row.generations);
    CHECK(r.bins == bin_generations(sg));
    // one trace per cell, from the first seed
    REQUIRE(r.traces.size() == 2);
    CHECK(r.traces[0].first == 0);
    CHECK(r.traces[1].first == 1);

    SweepResult again = run_sweep(plan);
    REQUIRE(again.rows.size() == r.rows.size());
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        CHECK(again.rows[i].success == r.rows[i].success);
        CHECK(again.rows[i].generations == r.rows[i].generations);
        CHECK(again.rows[i].best_cost == r.rows[i].best_cost);
    }

    // a parallel execution returns the same rows in the same order
    SweepResult par = run_sweep(plan, 4);
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        CHECK(par.rows[i].success == r.rows[i].success);
        CHECK(par.rows[i].generations == r.rows[i].generations);
        CHECK(par.rows[i].cell_id == r.rows[i].cell_id);
        CHECK(par.rows[i].seed == r.rows[i].seed);
    }
}

TEST_CASE("sweep cells override exactly one parameter") {
    SweepPlan plan = make_plan("pendulum");
    plan.grid.region.center = {0.0, 0.0};
    plan.grid.region.side_lengths = {1.0, 1.0};
    plan.grid.points_per_axis = 21;
    plan.ga.population_size = 40;
    plan.ga.max_generations = 5;
    plan.ga.alphabet = Alphabet::from_range(-2.0, 2.0, 1.0);
    plan.seeds = {1};
    plan.record_traces = false;

    plan.param = SweepParam::AlphabetRange;
    plan.values = {1.0, 3.0};
    SweepResult r = run_sweep(plan);
    CHECK(r.rows.size() == 2);
    CHECK(r.rows[0].varied_param == "alphabet_range");
    CHECK(r.traces.empty());

    plan.param = SweepParam::RegionSide;
    plan.values = {0.5, 2.0};
    CHECK(run_sweep(plan).rows[0].varied_param == "region_side");

    plan.param = SweepParam::PopulationSize;
    plan.values = {10.5};  // not an integer
    CHECK_THROWS_AS(run_sweep(plan), std::invalid_argument);
    plan.values = {};
    CHECK_THROWS_AS(run_sweep(plan), std::invalid_argument);
    plan.values = {40.0};
    plan.seeds = {};
    CHECK_THROWS_AS(run_sweep(plan), std::invalid_argument);
}
