#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "lyap/analysis.hpp"
#include "lyap/dynsys.hpp"
#include "lyap/errors.hpp"
#include "lyap/evolver.hpp"
#include "lyap/polyform.hpp"
#include "lyap/verifier.hpp"
#include "lyap/version.hpp"

namespace {

using nlohmann::json;

constexpr int kExitSuccess = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitNotFound = 3;
constexpr int kExitEvalError = 4;

// Config-level problem: bad JSON, unknown/missing keys, invalid values.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ConfigError("config error at " + path + ": " + message);
}

json load_json_file(const std::string& file) {
    std::ifstream in(file);
    if (!in) {
        throw ConfigError("cannot open '" + file + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON in '") + file +
                          "': " + e.what());
    }
}

void check_keys(const json& obj, const std::string& path,
                const std::set<std::string>& allowed) {
    if (!obj.is_object()) {
        fail(path, "expected an object");
    }
    for (const auto& item : obj.items()) {
        if (!allowed.contains(item.key())) {
            fail(path + "." + item.key(), "unknown key");
        }
    }
}

const json* member(const json& obj, const std::string& key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) {
        fail(path, "expected a number");
    }
    return v.get<double>();
}

std::int64_t as_integer(const json& v, const std::string& path) {
    if (!v.is_number_integer()) {
        fail(path, "expected an integer");
    }
    return v.get<std::int64_t>();
}

std::uint64_t as_seed(const json& v, const std::string& path) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() &&
                                     v.get<std::int64_t>() >= 0)) {
        fail(path, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

bool as_bool(const json& v, const std::string& path) {
    if (!v.is_boolean()) {
        fail(path, "expected a boolean");
    }
    return v.get<bool>();
}

std::string as_string(const json& v, const std::string& path) {
    if (!v.is_string()) {
        fail(path, "expected a string");
    }
    return v.get<std::string>();
}

struct SystemConfig {
    lyap::VectorField field;
    json echo;
};

SystemConfig load_system(const json& config) {
    const json* sys = member(config, "system");
    if (sys == nullptr) {
        fail("system", "missing required key");
    }
    if (!sys->is_object()) {
        fail("system", "expected an object");
    }
    if (member(*sys, "name") != nullptr) {
        check_keys(*sys, "system", {"name"});
        const std::string name = as_string((*sys)["name"], "system.name");
        try {
            lyap::VectorField field = lyap::builtin_system(name);
            return SystemConfig{std::move(field), json{{"name", name}}};
        } catch (const std::invalid_argument& e) {
            fail("system.name", e.what());
        }
    }
    check_keys(*sys, "system", {"equations", "equilibrium"});
    const json* equations = member(*sys, "equations");
    const json* equilibrium = member(*sys, "equilibrium");
    if (equations == nullptr || equilibrium == nullptr) {
        fail("system", "needs either 'name' or 'equations' + 'equilibrium'");
    }
    if (!equations->is_array() || equations->empty()) {
        fail("system.equations", "expected a non-empty array of strings");
    }
    if (!equilibrium->is_array() ||
        equilibrium->size() != equations->size()) {
        fail("system.equilibrium",
             "expected an array matching the equation count");
    }
    const int n = static_cast<int>(equations->size());
    std::vector<lyap::ExprPtr> components;
    std::vector<std::string> texts;
    for (int i = 0; i < n; ++i) {
        const std::string path =
            "system.equations[" + std::to_string(i) + "]";
        const std::string text = as_string((*equations)[i], path);
        try {
            components.push_back(lyap::parse_expr(text, n));
        } catch (const lyap::ParseError& e) {
            fail(path, e.what());
        }
        texts.push_back(text);
    }
    std::vector<double> point;
    for (int i = 0; i < n; ++i) {
        point.push_back(as_number(
            (*equilibrium)[i], "system.equilibrium[" + std::to_string(i) + "]"));
    }
    try {
        lyap::VectorField field(std::move(components), point);
        return SystemConfig{std::move(field),
                            json{{"equations", texts}, {"equilibrium", point}}};
    } catch (const std::exception& e) {
        fail("system", e.what());
    }
}

struct LoadedConfig {
    lyap::VectorField field;
    int degree = 3;
    lyap::GridSpec grid;
    lyap::GaConfig ga;
    std::uint64_t seed = 0;
    json echo;  // resolved values; re-running from it reproduces the run
};

lyap::GaConfig load_ga(const json& config) {
    lyap::GaConfig ga;
    const json* node = member(config, "ga");
    if (node == nullptr) {
        return ga;
    }
    check_keys(*node, "ga",
               {"population_size", "mutation_prob", "crossover_prob",
                "elite_fraction", "max_generations", "alphabet", "clamp_mode",
                "early_exit"});
    if (const json* v = member(*node, "population_size")) {
        const auto value = as_integer(*v, "ga.population_size");
        if (value < 2) {
            fail("ga.population_size", "must be at least 2");
        }
        ga.population_size = static_cast<std::size_t>(value);
    }
    if (const json* v = member(*node, "mutation_prob")) {
        ga.mutation_prob = as_number(*v, "ga.mutation_prob");
    }
    if (const json* v = member(*node, "crossover_prob")) {
        ga.crossover_prob = as_number(*v, "ga.crossover_prob");
    }
    if (const json* v = member(*node, "elite_fraction")) {
        ga.elite_fraction = as_number(*v, "ga.elite_fraction");
    }
    if (const json* v = member(*node, "max_generations")) {
        const auto value = as_integer(*v, "ga.max_generations");
        if (value < 1) {
            fail("ga.max_generations", "must be at least 1");
        }
        ga.max_generations = static_cast<std::size_t>(value);
    }
    if (const json* v = member(*node, "alphabet")) {
        check_keys(*v, "ga.alphabet", {"lo", "hi", "step"});
        double lo = -2.0;
        double hi = 2.0;
        double step = 1.0;
        if (const json* f = member(*v, "lo")) {
            lo = as_number(*f, "ga.alphabet.lo");
        }
        if (const json* f = member(*v, "hi")) {
            hi = as_number(*f, "ga.alphabet.hi");
        }
        if (const json* f = member(*v, "step")) {
            step = as_number(*f, "ga.alphabet.step");
        }
        try {
            ga.alphabet = lyap::Alphabet::from_range(lo, hi, step);
        } catch (const std::invalid_argument& e) {
            fail("ga.alphabet", e.what());
        }
    }
    if (const json* v = member(*node, "clamp_mode")) {
        const std::string mode = as_string(*v, "ga.clamp_mode");
        if (mode == "clamped") {
            ga.clamp_mode = lyap::ClampMode::Clamped;
        } else if (mode == "init-only" || mode == "init_only") {
            ga.clamp_mode = lyap::ClampMode::InitOnly;
        } else {
            fail("ga.clamp_mode", "expected 'clamped' or 'init-only'");
        }
    }
    if (const json* v = member(*node, "early_exit")) {
        ga.early_exit_on_zero = as_bool(*v, "ga.early_exit");
    }
    return ga;
}

json echo_ga(const lyap::GaConfig& ga) {
    return json{
        {"population_size", ga.population_size},
        {"mutation_prob", ga.mutation_prob},
        {"crossover_prob", ga.crossover_prob},
        {"elite_fraction", ga.elite_fraction},
        {"max_generations", ga.max_generations},
        {"alphabet",
         {{"lo", ga.alphabet.lo}, {"hi", ga.alphabet.hi},
          {"step", ga.alphabet.step}}},
        {"clamp_mode",
         ga.clamp_mode == lyap::ClampMode::Clamped ? "clamped" : "init-only"},
        {"early_exit", ga.early_exit_on_zero},
    };
}

// Shared loader for search/verify configs and the non-sweep part of plans.
LoadedConfig load_config(const json& config, bool seed_required,
                         const std::set<std::string>& extra_keys = {}) {
    std::set<std::string> allowed = {"system", "degree", "region",
                                     "grid",   "ga",     "seed"};
    allowed.insert(extra_keys.begin(), extra_keys.end());
    check_keys(config, "config", allowed);

    SystemConfig system = load_system(config);
    const int n = system.field.dimension();

    int degree = 3;
    if (const json* v = member(config, "degree")) {
        const auto value = as_integer(*v, "degree");
        if (value < 1) {
            fail("degree", "must be at least 1");
        }
        degree = static_cast<int>(value);
    }

    std::vector<double> sides(static_cast<std::size_t>(n), 1.0);
    if (const json* region = member(config, "region")) {
        check_keys(*region, "region", {"side_lengths"});
        if (const json* v = member(*region, "side_lengths")) {
            if (!v->is_array() ||
                v->size() != static_cast<std::size_t>(n)) {
                fail("region.side_lengths",
                     "expected an array of " + std::to_string(n) + " numbers");
            }
            for (std::size_t i = 0; i < sides.size(); ++i) {
                sides[i] = as_number(
                    (*v)[i],
                    "region.side_lengths[" + std::to_string(i) + "]");
            }
        }
    }

    lyap::GridSpec grid;
    grid.region.center.assign(system.field.equilibrium().begin(),
                              system.field.equilibrium().end());
    grid.region.side_lengths = sides;
    if (const json* node = member(config, "grid")) {
        check_keys(*node, "grid", {"points_per_axis", "exclusion_radius"});
        if (const json* v = member(*node, "points_per_axis")) {
            const auto value = as_integer(*v, "grid.points_per_axis");
            if (value < 3) {
                fail("grid.points_per_axis", "must be at least 3");
            }
            grid.points_per_axis = static_cast<int>(value);
        }
        if (const json* v = member(*node, "exclusion_radius")) {
            if (!v->is_null()) {
                grid.exclusion_radius = as_number(*v, "grid.exclusion_radius");
            }
        }
    }

    lyap::GaConfig ga = load_ga(config);

    std::uint64_t seed = 0;
    if (const json* v = member(config, "seed")) {
        seed = as_seed(*v, "seed");
        ga.rng_seed = seed;
    } else if (seed_required) {
        fail("seed", "missing required key (runs must be reproducible)");
    }

    try {
        grid.validate();
        ga.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config error: ") + e.what());
    }

    json echo = {
        {"system", system.echo},
        {"degree", degree},
        {"region", {{"side_lengths", sides}}},
        {"grid",
         {{"points_per_axis", grid.points_per_axis},
          {"exclusion_radius", grid.resolved_exclusion_radius()}}},
        {"ga", echo_ga(ga)},
    };
    if (seed_required) {
        echo["seed"] = seed;
    }
    return LoadedConfig{std::move(system.field), degree, std::move(grid),
                        std::move(ga), seed, std::move(echo)};
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::filesystem::path target(path);
    const std::filesystem::path temp =
        target.parent_path() / (target.filename().string() + ".tmp");
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write '" + temp.string() + "'");
        }
        out << content;
        if (!out.flush()) {
            throw std::runtime_error("write to '" + temp.string() + "' failed");
        }
    }
    std::filesystem::rename(temp, target);
}

std::string trace_csv(const lyap::RunTrace& trace) {
    std::string out = "generation,best_J,mean_J,elapsed_ms\n";
    for (const auto& record : trace.generations) {
        out += std::to_string(record.generation);
        out += ',';
        out += lyap::format_double(record.best_cost);
        out += ',';
        out += lyap::format_double(record.mean_cost);
        out += ',';
        out += lyap::format_double(record.elapsed_ms);
        out += '\n';
    }
    return out;
}

json verification_json(const lyap::CostReport& report,
                       std::size_t max_violations) {
    json violations = json::array();
    std::size_t count = 0;
    for (const auto& violation : report.violations) {
        if (count >= max_violations) {
            break;
        }
        violations.push_back(json{
            {"point", violation.point},
            {"value", violation.value},
            {"derivative", violation.derivative},
            {"failed", violation.verdict == lyap::Verdict::ViolatedPositivity
                           ? "positivity"
                           : "decrease"},
        });
        ++count;
    }
    return json{
        {"cost", report.cost},
        {"satisfied", report.satisfied_count},
        {"violated", report.violated_count},
        {"total_points", report.total_points},
        {"min_value", report.min_value},
        {"max_derivative", report.max_derivative},
        {"violations_total", report.violated_count},
        {"violations", std::move(violations)},
    };
}

void emit_report(const json& report, const std::string& path) {
    const std::string text = report.dump(2) + "\n";
    if (path.empty()) {
        std::cout << text;
    } else {
        write_file_atomic(path, text);
    }
}

json tool_json(const char* command) {
    return json{
        {"name", std::string(lyap::kToolName)},
        {"version", std::string(lyap::kToolVersion)},
        {"command", command},
    };
}

int cmd_search(const std::string& config_path, const std::string& report_path,
               const std::string& trace_path, unsigned threads,
               std::size_t max_violations) {
    LoadedConfig cfg = load_config(load_json_file(config_path), true);
    lyap::RunResult result = lyap::run_search(cfg.field, cfg.degree, cfg.grid,
                                              cfg.ga, lyap::RunOptions{threads, 0});
    const lyap::CostReport verification =
        lyap::cost(result.best, cfg.field, cfg.grid);

    if (!trace_path.empty()) {
        write_file_atomic(trace_path, trace_csv(result.trace));
    }

    json report = {
        {"tool", tool_json("search")},
        {"config", cfg.echo},
        {"seed", cfg.seed},
        {"outcome", result.success ? "found" : "not_found"},
        {"generations", result.generations},
        {"best",
         {{"coefficients", std::vector<double>(result.best.coefficients().begin(),
                                               result.best.coefficients().end())},
          {"polynomial", result.best.format()},
          {"cost", result.best_cost}}},
        {"verification", verification_json(verification, max_violations)},
        {"trace_file", trace_path.empty() ? json(nullptr) : json(trace_path)},
    };
    emit_report(report, report_path);
    return result.success ? kExitSuccess : kExitNotFound;
}

int cmd_verify(const std::string& config_path, const std::string& candidate,
               const std::string& coeff_list, const std::string& report_path,
               std::size_t max_violations) {
    LoadedConfig cfg = load_config(load_json_file(config_path), false);
    if (candidate.empty() == coeff_list.empty()) {
        throw ConfigError(
            "verify needs exactly one of --candidate or --coeffs");
    }

    std::vector<double> coefficients;
    if (!candidate.empty()) {
        try {
            coefficients = lyap::parse_polynomial(
                candidate, cfg.field.dimension(), cfg.degree);
        } catch (const lyap::ParseError& e) {
            throw ConfigError(std::string("candidate error: ") + e.what());
        }
    } else {
        const char* p = coeff_list.data();
        const char* end = p + coeff_list.size();
        while (p < end) {
            double value = 0.0;
            const auto r = std::from_chars(p, end, value);
            if (r.ec != std::errc() || r.ptr == p) {
                throw ConfigError("candidate error: malformed --coeffs list");
            }
            coefficients.push_back(value);
            p = r.ptr;
            if (p < end) {
                if (*p != ',') {
                    throw ConfigError(
                        "candidate error: expected ',' in --coeffs list");
                }
                ++p;
            }
        }
        const std::size_t expected =
            lyap::basis_size(cfg.field.dimension(), cfg.degree);
        if (coefficients.size() != expected) {
            throw ConfigError("candidate error: expected " +
                              std::to_string(expected) + " coefficients, got " +
                              std::to_string(coefficients.size()));
        }
    }

    const lyap::CandidatePolynomial poly(
        cfg.field.dimension(), cfg.degree, std::move(coefficients),
        std::vector<double>(cfg.field.equilibrium().begin(),
                            cfg.field.equilibrium().end()));
    const lyap::CostReport report = lyap::cost(poly, cfg.field, cfg.grid);

    json out = {
        {"tool", tool_json("verify")},
        {"config", cfg.echo},
        {"candidate",
         {{"coefficients", std::vector<double>(poly.coefficients().begin(),
                                               poly.coefficients().end())},
          {"polynomial", poly.format()}}},
        {"verification", verification_json(report, max_violations)},
    };
    emit_report(out, report_path);
    return report.cost == 0.0 ? kExitSuccess : kExitNotFound;
}

int cmd_bound(double pconv, double mu, int gamma, int alphabet, long long n) {
    lyap::ConvergenceParams params{pconv, mu, gamma, alphabet, n};
    long long tau = 0;
    double inner = 0.0;
    try {
        inner = lyap::convergence_inner_min(params);
        tau = lyap::convergence_iterations(params);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config error: ") + e.what());
    }
    json out = {
        {"tool", tool_json("bound")},
        {"params",
         {{"p_conv", pconv}, {"mu", mu}, {"gamma", gamma}, {"K", alphabet},
          {"n", n}}},
        {"inner_min", inner},
        {"tau", tau},
    };
    std::cout << out.dump(2) << "\n";
    return kExitSuccess;
}

std::string sweep_runs_csv(const lyap::SweepResult& result) {
    std::string out =
        "cell_id,varied_param,value,seed,success,generations,best_J,elapsed_ms\n";
    for (const auto& row : result.rows) {
        out += std::to_string(row.cell_id);
        out += ',';
        out += row.varied_param;
        out += ',';
        out += lyap::format_double(row.value);
        out += ',';
        out += std::to_string(row.seed);
        out += ',';
        out += row.success ? '1' : '0';
        out += ',';
        out += std::to_string(row.generations);
        out += ',';
        out += lyap::format_double(row.best_cost);
        out += ',';
        out += lyap::format_double(row.elapsed_ms);
        out += '\n';
    }
    return out;
}

std::string sweep_bins_csv(const lyap::SweepResult& result) {
    std::string out = "bin,successes\n";
    for (std::size_t i = 0; i < result.bins.size(); ++i) {
        out += 'D';
        out += std::to_string(i + 1);
        out += ',';
        out += std::to_string(result.bins[i]);
        out += '\n';
    }
    return out;
}

int cmd_sweep(const std::string& plan_path, const std::string& out_dir,
              unsigned threads) {
    const json plan_json = load_json_file(plan_path);
    LoadedConfig base = load_config(plan_json, false, {"sweep"});

    const json* sweep_node = member(plan_json, "sweep");
    if (sweep_node == nullptr) {
        fail("sweep", "missing required key");
    }
    check_keys(*sweep_node, "sweep",
               {"param", "values", "seeds", "record_traces"});

    lyap::SweepPlan plan{std::move(base.field), base.degree, base.grid,
                         base.ga,               {},          {},
                         {},                    true};
    const json* param = member(*sweep_node, "param");
    if (param == nullptr) {
        fail("sweep.param", "missing required key");
    }
    const std::string param_name = as_string(*param, "sweep.param");
    if (param_name == "alphabet_range") {
        plan.param = lyap::SweepParam::AlphabetRange;
    } else if (param_name == "region_side") {
        plan.param = lyap::SweepParam::RegionSide;
    } else if (param_name == "population_size") {
        plan.param = lyap::SweepParam::PopulationSize;
    } else {
        fail("sweep.param",
             "expected 'alphabet_range', 'region_side' or 'population_size'");
    }
    const json* values = member(*sweep_node, "values");
    if (values == nullptr || !values->is_array() || values->empty()) {
        fail("sweep.values", "expected a non-empty array of numbers");
    }
    for (std::size_t i = 0; i < values->size(); ++i) {
        plan.values.push_back(
            as_number((*values)[i], "sweep.values[" + std::to_string(i) + "]"));
    }
    const json* seeds = member(*sweep_node, "seeds");
    if (seeds == nullptr || !seeds->is_array() || seeds->empty()) {
        fail("sweep.seeds", "expected a non-empty array of seeds");
    }
    for (std::size_t i = 0; i < seeds->size(); ++i) {
        plan.seeds.push_back(
            as_seed((*seeds)[i], "sweep.seeds[" + std::to_string(i) + "]"));
    }
    if (const json* v = member(*sweep_node, "record_traces")) {
        plan.record_traces = as_bool(*v, "sweep.record_traces");
    }

    lyap::SweepResult result;
    try {
        result = lyap::run_sweep(plan, threads);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config error: ") + e.what());
    }

    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);
    write_file_atomic((dir / "runs.csv").string(), sweep_runs_csv(result));
    write_file_atomic((dir / "bins.csv").string(), sweep_bins_csv(result));
    json files = json::array({(dir / "runs.csv").string(),
                              (dir / "bins.csv").string()});
    for (const auto& [cell, trace] : result.traces) {
        const auto path =
            dir / ("trace_cell" + std::to_string(cell) + ".csv");
        write_file_atomic(path.string(), trace_csv(trace));
        files.push_back(path.string());
    }

    std::size_t successes = 0;
    for (const auto& row : result.rows) {
        successes += row.success ? 1 : 0;
    }
    json summary = {
        {"tool", tool_json("sweep")},
        {"runs", result.rows.size()},
        {"successes", successes},
        {"bins", result.bins},
        {"files", files},
    };
    std::cout << summary.dump(2) << "\n";
    return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lyapunov candidate search by genetic algorithm"};
    app.require_subcommand(1);

    std::string config_path;
    std::string report_path;
    std::string trace_path;
    std::string candidate;
    std::string coeff_list;
    std::string out_dir = ".";
    unsigned threads = 1;
    std::size_t max_violations = 100;

    CLI::App* search = app.add_subcommand(
        "search", "Evolve a Lyapunov candidate for a system");
    search->add_option("config", config_path, "JSON config file")->required();
    search->add_option("--report", report_path,
                       "write the JSON report here instead of stdout");
    search->add_option("--trace", trace_path, "write the per-generation CSV");
    search->add_option("--threads", threads, "worker threads for evaluation");
    search->add_option("--max-violations", max_violations,
                       "violations serialized into the report");

    CLI::App* verify = app.add_subcommand(
        "verify", "Score a given candidate on the configured grid");
    verify->add_option("config", config_path, "JSON config file")->required();
    verify->add_option("--candidate", candidate,
                       "polynomial text, e.g. \"2*x1^2 + x2^2\"");
    verify->add_option("--coeffs", coeff_list,
                       "comma-separated coefficients in basis order");
    verify->add_option("--report", report_path,
                       "write the JSON report here instead of stdout");
    verify->add_option("--max-violations", max_violations,
                       "violations serialized into the report");

    double pconv = 0.0;
    double mu = 0.0;
    int gamma = 0;
    int alphabet = 0;
    long long population = 0;
    CLI::App* bound = app.add_subcommand(
        "bound", "Iterations for an optimum at a given confidence");
    bound->add_option("--pconv", pconv, "target probability in (0,1)")
        ->required();
    bound->add_option("--mu", mu, "per-gene mutation probability")->required();
    bound->add_option("--gamma", gamma, "optimized parameter count")
        ->required();
    bound->add_option("--K", alphabet, "alphabet size")->required();
    bound->add_option("--n", population, "population size")->required();

    CLI::App* sweep = app.add_subcommand(
        "sweep", "Run a one-axis parameter sweep and write CSV results");
    sweep->add_option("plan", config_path, "JSON sweep plan")->required();
    sweep->add_option("--out-dir", out_dir, "directory for the CSV outputs");
    sweep->add_option("--threads", threads, "parallel GA runs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfigError;
    }

    try {
        if (search->parsed()) {
            return cmd_search(config_path, report_path, trace_path, threads,
                              max_violations);
        }
        if (verify->parsed()) {
            return cmd_verify(config_path, candidate, coeff_list, report_path,
                              max_violations);
        }
        if (bound->parsed()) {
            return cmd_bound(pconv, mu, gamma, alphabet, population);
        }
        if (sweep->parsed()) {
            return cmd_sweep(config_path, out_dir, threads);
        }
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfigError;
    } catch (const lyap::EvalDomainError& e) {
        std::cerr << "evaluation error: " << e.what() << "\n";
        return kExitEvalError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitConfigError;
}
