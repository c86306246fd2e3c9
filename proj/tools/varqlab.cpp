// Command-line front door: experiment orchestration, JSON reports, CSV traces
// and the scripted demo suite. Exit codes: 0 success, 2 config error, 3
// runtime error.

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <json.hpp>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "varqlab/bits.hpp"
#include "varqlab/io.hpp"
#include "varqlab/measurement.hpp"
#include "varqlab/mitigation.hpp"
#include "varqlab/objectives.hpp"
#include "varqlab/optimizers.hpp"
#include "varqlab/oracle.hpp"
#include "varqlab/pauli.hpp"
#include "varqlab/qaoa.hpp"
#include "varqlab/rng.hpp"
#include "varqlab/simulator.hpp"
#include "varqlab/version.hpp"
#include "varqlab/vqe.hpp"

using json = nlohmann::json;
using namespace varqlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Stopwatch {
  public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                         start_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

void emit_report(const json& report, const std::string& out_path) {
    std::cout << report.dump(2) << "\n";
    if (!out_path.empty()) write_file(out_path, report.dump(2) + "\n");
}

json provenance(std::uint64_t seed, const Stopwatch& watch) {
    return {{"seed", seed}, {"version", kVersion}, {"wall_time_ms", watch.ms()}};
}

// Aggregates config problems so a bad invocation reports everything at once.
class ConfigCheck {
  public:
    void require(bool ok, const std::string& message) {
        if (!ok) problems_.push_back(message);
    }
    void finish() const {
        if (problems_.empty()) return;
        std::string all = "invalid configuration:";
        for (const auto& p : problems_) all += "\n  - " + p;
        throw ConfigError(all);
    }

  private:
    std::vector<std::string> problems_;
};

Observable load_observable_or_config_error(const std::string& path, int n_qubits = 0) {
    try {
        return simplify(load_observable(path, n_qubits));
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

GroupingStrategy parse_grouping(const std::string& name) {
    if (name == "qwc_greedy") return GroupingStrategy::QwcGreedy;
    if (name == "one_per_term") return GroupingStrategy::OnePerTerm;
    throw ConfigError("unknown grouping strategy '" + name + "'");
}

AllocationStrategy parse_allocation(const std::string& name) {
    if (name == "uniform") return AllocationStrategy::Uniform;
    if (name == "proportional") return AllocationStrategy::Proportional;
    throw ConfigError("unknown allocation strategy '" + name + "'");
}

std::vector<double> parse_csv_doubles(const std::string& text) {
    std::vector<double> values;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) values.push_back(std::stod(item));
    }
    return values;
}

struct OptimizerFlags {
    std::string method = "gd";
    double step_size = 0.1;
    double fd_epsilon = 1e-3;
    long long max_evals = 2000;
    double tolerance = 1e-9;
    int restarts = 1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--optimizer", method, "gd or nm");
        cmd->add_option("--step-size", step_size, "gradient-descent step size");
        cmd->add_option("--fd-epsilon", fd_epsilon, "finite-difference epsilon");
        cmd->add_option("--max-evals", max_evals, "objective evaluation budget per restart");
        cmd->add_option("--tolerance", tolerance, "value stall tolerance");
        cmd->add_option("--restarts", restarts, "optimizer restarts");
    }

    OptimizerConfig build(std::uint64_t seed) const {
        OptimizerConfig config;
        if (method == "gd") config.method = OptimizerMethod::GradientDescent;
        else if (method == "nm") config.method = OptimizerMethod::NelderMead;
        else throw ConfigError("unknown optimizer '" + method + "', expected gd or nm");
        config.step_size = step_size;
        config.fd_epsilon = fd_epsilon;
        config.max_evaluations = max_evals;
        config.value_tolerance = tolerance;
        config.restarts = restarts;
        config.restart_seed = seed;
        return config;
    }
};

struct NoiseFlags {
    bool enabled = false;
    double p1 = -1.0;
    double p2 = -1.0;
    double readout0 = -1.0;
    double readout1 = -1.0;

    void attach(CLI::App* cmd) {
        cmd->add_flag("--noise", enabled, "enable the stochastic noise model");
        cmd->add_option("--p1", p1, "single-qubit gate fault probability");
        cmd->add_option("--p2", p2, "two-qubit gate fault probability");
        cmd->add_option("--readout0", readout0, "P(read 1 | true 0)");
        cmd->add_option("--readout1", readout1, "P(read 0 | true 1)");
    }

    std::optional<NoiseModel> build() const {
        if (!enabled && p1 < 0 && p2 < 0 && readout0 < 0 && readout1 < 0) return std::nullopt;
        NoiseModel model;  // defaults to the calibrated hardware figures
        if (p1 >= 0) model.p1 = p1;
        if (p2 >= 0) model.p2 = p2;
        if (readout0 >= 0) model.readout_flip0 = readout0;
        if (readout1 >= 0) model.readout_flip1 = readout1;
        model.validate();
        return model;
    }
};

json trace_summary(const OptimizationTrace& trace, const std::string& trace_path) {
    json out{{"iterations", trace.iterations.size()},
             {"evaluations", trace.total_evaluations},
             {"shots_total", trace.total_shots}};
    if (!trace_path.empty()) {
        write_file(trace_path, trace.to_csv());
        out["trace_path"] = trace_path;
    }
    return out;
}

struct DemoTable {
    bool all_passed = true;
    json rows = json::array();

    void check(const std::string& name, double expected, double measured, double tolerance) {
        const bool pass = std::abs(measured - expected) <= tolerance;
        all_passed &= pass;
        rows.push_back({{"quantity", name},
                        {"expected", expected},
                        {"measured", measured},
                        {"tolerance", tolerance},
                        {"pass", pass}});
        std::cout << (pass ? "[PASS] " : "[FAIL] ") << name << ": expected " << expected
                  << ", measured " << measured << " (tol " << tolerance << ")\n";
    }

    void check_in_band(const std::string& name, double low, double high, double measured) {
        const bool pass = measured >= low && measured <= high;
        all_passed &= pass;
        rows.push_back({{"quantity", name},
                        {"band", {low, high}},
                        {"measured", measured},
                        {"pass", pass}});
        std::cout << (pass ? "[PASS] " : "[FAIL] ") << name << ": measured " << measured
                  << " in [" << low << ", " << high << "]\n";
    }

    void check_true(const std::string& name, bool pass, const std::string& detail) {
        all_passed &= pass;
        rows.push_back({{"quantity", name}, {"detail", detail}, {"pass", pass}});
        std::cout << (pass ? "[PASS] " : "[FAIL] ") << name << ": " << detail << "\n";
    }
};

Observable worked_example_hamiltonian() {
    Observable obs(1);
    obs.add_term(2.0, PauliString::parse("Z0", 1));
    obs.add_term(1.0, PauliString::parse("X0", 1));
    obs.add_constant(1.0);
    return obs;
}

Observable allocation_example_hamiltonian() {
    Observable obs(2);
    obs.add_term(5.0, PauliString::parse("Z0", 2));
    obs.add_term(3.0, PauliString::parse("Z1", 2));
    obs.add_term(2.0, PauliString::parse("Z0*Z1", 2));
    return obs;
}

WeightedGraph triangle_graph() {
    WeightedGraph graph;
    graph.n_nodes = 3;
    graph.edges = {{0, 1, 10.0}, {0, 2, 10.0}, {1, 2, 1.0}};
    return graph;
}

Circuit allocation_example_circuit() {
    // cos(pi/6)|00> + sin(pi/6)|10>
    Circuit circuit(2);
    circuit.append(Gate::ry(0, std::numbers::pi / 3.0));
    return circuit;
}

double std_dev(const std::vector<double>& values) {
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double sq = 0.0;
    for (double v : values) sq += (v - mean) * (v - mean);
    return std::sqrt(sq / static_cast<double>(values.size() - 1));
}

// ---------------------------------------------------------------------------
// Subcommand payloads

int cmd_group(const std::string& path, const std::string& strategy_name,
              const std::string& out_path) {
    const Stopwatch watch;
    const GroupingStrategy strategy = parse_grouping(strategy_name);
    const Observable obs = load_observable_or_config_error(path);
    const auto groups = group_terms(obs, strategy);
    json group_list = json::array();
    for (const auto& group : groups) {
        json terms = json::array();
        for (const auto& term : group.terms) terms.push_back(term.string.to_string());
        group_list.push_back(terms);
    }
    const json report{{"command", "group"},
                      {"inputs", {{"hamiltonian", path}, {"strategy", strategy_name}}},
                      {"results",
                       {{"strategy", strategy_name},
                        {"n_groups", groups.size()},
                        {"groups", group_list}}},
                      {"provenance", provenance(0, watch)}};
    emit_report(report, out_path);
    return kExitOk;
}

int cmd_shots_plan(const std::string& path, long long budget, const std::string& strategy_name,
                   const std::string& grouping_name, const std::string& out_path) {
    const Stopwatch watch;
    const AllocationStrategy strategy = parse_allocation(strategy_name);
    const GroupingStrategy grouping = parse_grouping(grouping_name);
    const Observable obs = load_observable_or_config_error(path);
    const auto groups = group_terms(obs, grouping);
    const ShotPlan plan = allocate_shots(groups, budget, strategy);
    json allocations = json::array();
    for (const auto& alloc : plan.allocations) {
        allocations.push_back({{"group", alloc.group_index}, {"shots", alloc.shots}});
    }
    const json report{{"command", "shots plan"},
                      {"inputs",
                       {{"hamiltonian", path},
                        {"strategy", strategy_name},
                        {"grouping", grouping_name},
                        {"budget", budget}}},
                      {"results",
                       {{"strategy", strategy_name},
                        {"budget", budget},
                        {"allocations", allocations}}},
                      {"provenance", provenance(0, watch)}};
    emit_report(report, out_path);
    return kExitOk;
}

int cmd_spectrum(const std::string& path, const std::string& out_path) {
    const Stopwatch watch;
    const Observable obs = load_observable_or_config_error(path);
    const double ground = exact_ground_energy(obs);
    const json report{{"command", "spectrum"},
                      {"inputs", {{"hamiltonian", path}}},
                      {"results",
                       {{"ground_energy", ground},
                        {"n_qubits", obs.n_qubits()},
                        {"n_terms", obs.terms().size()},
                        {"one_norm", obs.one_norm()}}},
                      {"provenance", provenance(0, watch)}};
    emit_report(report, out_path);
    return kExitOk;
}

int cmd_vqe_run(const std::string& ham_path, const std::string& ansatz_name,
                const std::string& shots_text, const std::string& objective_text,
                std::uint64_t seed, bool seed_given, const OptimizerFlags& opt_flags,
                const NoiseFlags& noise_flags, const std::string& grouping_name,
                const std::string& allocation_name, const std::string& out_path,
                const std::string& trace_path) {
    const Stopwatch watch;
    ConfigCheck check;

    const bool exact = shots_text == "exact";
    long long shots = 0;
    if (!exact) {
        try {
            shots = std::stoll(shots_text);
        } catch (const std::exception&) {
            check.require(false, "--shots must be an integer or 'exact'");
        }
        check.require(shots > 0 || shots_text == "exact", "--shots must be positive");
        check.require(seed_given, "--seed is required for sampled runs");
    }
    AnsatzSpec ansatz;
    if (ansatz_name == "single_ry") {
        ansatz.kind = AnsatzSpec::Kind::SingleRy;
    } else if (ansatz_name.rfind("layered", 0) == 0) {
        ansatz.kind = AnsatzSpec::Kind::Layered;
        const auto colon = ansatz_name.find(':');
        ansatz.layers = colon == std::string::npos ? 1 : std::stoi(ansatz_name.substr(colon + 1));
        check.require(ansatz.layers >= 1, "layered ansatz needs at least one layer");
    } else {
        check.require(false, "unknown ansatz '" + ansatz_name + "'");
    }
    ObjectiveSpec objective;
    try {
        objective = ObjectiveSpec::parse(objective_text);
    } catch (const std::exception& e) {
        check.require(false, e.what());
    }
    check.require(!(exact && objective.kind != ObjectiveKind::Expectation),
                  "cvar/gibbs objectives need a sampled estimator (--shots N)");
    Observable obs(1);
    try {
        obs = simplify(load_observable(ham_path));
    } catch (const std::exception& e) {
        check.require(false, e.what());
    }
    check.finish();
    ansatz.n_qubits = obs.n_qubits();

    EstimatorSpec estimator = exact ? EstimatorSpec::exact_estimator()
                                    : EstimatorSpec::sampled(shots, seed, noise_flags.build());
    if (!exact) {
        estimator.grouping = parse_grouping(grouping_name);
        estimator.allocation = parse_allocation(allocation_name);
    }
    const OptimizerConfig opt = opt_flags.build(seed);
    const VqeResult result = run_vqe(obs, ansatz, opt, estimator, objective);

    json results{{"best_energy", result.best_energy},
                 {"best_params", result.best_params},
                 {"evaluations", result.trace.total_evaluations},
                 {"shots_total", result.trace.total_shots}};
    if (result.exact_ground) {
        results["exact_ground"] = *result.exact_ground;
        results["gap"] = *result.gap_to_exact;
    }
    results["trace"] = trace_summary(result.trace, trace_path);
    const json report{{"command", "vqe run"},
                      {"inputs",
                       {{"hamiltonian", ham_path},
                        {"ansatz", ansatz_name},
                        {"optimizer", opt_flags.method},
                        {"shots", shots_text},
                        {"objective", objective_text}}},
                      {"results", results},
                      {"provenance", provenance(seed, watch)}};
    emit_report(report, out_path);
    return kExitOk;
}

int cmd_qaoa_run(const std::string& graph_path, int p, const std::string& init_text,
                 const std::string& objective_text, long long shots, std::uint64_t seed,
                 bool seed_given, const OptimizerFlags& opt_flags,
                 const std::string& warm_start_text, const std::string& constraint_text,
                 const std::string& out_path, const std::string& trace_path) {
    const Stopwatch watch;
    ConfigCheck check;
    check.require(p >= 1, "--p must be >= 1");
    check.require(shots >= 1, "--shots must be >= 1");
    check.require(seed_given, "--seed is required for sampled runs");

    QaoaConfig config;
    config.p = p;
    config.shots = shots;
    config.seed = seed;
    try {
        config.objective = ObjectiveSpec::parse(objective_text);
    } catch (const std::exception& e) {
        check.require(false, e.what());
    }
    const auto colon = init_text.find(':');
    const std::string init_name = init_text.substr(0, colon);
    if (colon != std::string::npos) config.init.delta = std::stod(init_text.substr(colon + 1));
    if (init_name == "schedule") config.init.kind = InitStrategy::Kind::Schedule;
    else if (init_name == "random") config.init.kind = InitStrategy::Kind::Random;
    else if (init_name == "interp") config.init.kind = InitStrategy::Kind::Interp;
    else if (init_name == "lbl") config.init.kind = InitStrategy::Kind::Lbl;
    else check.require(false, "unknown init strategy '" + init_text + "'");

    WeightedGraph graph;
    try {
        graph = WeightedGraph::parse(read_file(graph_path));
    } catch (const std::exception& e) {
        check.require(false, e.what());
    }
    if (!warm_start_text.empty()) {
        try {
            config.warm_start = parse_csv_doubles(warm_start_text);
        } catch (const std::exception&) {
            check.require(false, "--warm-start must be a comma-separated list of fractions");
        }
    }

    std::optional<LinearConstraint> constraint;
    if (!constraint_text.empty()) {
        LinearConstraint parsed;
        bool ok = true;
        std::stringstream in(constraint_text);
        std::string field;
        while (std::getline(in, field, ',')) {
            const auto eq = field.find('=');
            if (eq == std::string::npos) {
                ok = false;
                break;
            }
            const std::string key = field.substr(0, eq);
            const std::string value = field.substr(eq + 1);
            try {
                if (key == "k") {
                    parsed.target = std::stoi(value);
                } else if (key == "qubits") {
                    std::stringstream qs(value);
                    std::string q;
                    while (std::getline(qs, q, '+')) parsed.qubits.push_back(std::stoi(q));
                } else if (key == "weight") {
                    parsed.penalty_weight = std::stod(value);
                } else {
                    ok = false;
                }
            } catch (const std::exception&) {
                ok = false;
            }
        }
        check.require(ok && !parsed.qubits.empty(),
                      "--constraint expects k=K,qubits=a+b+c,weight=W");
        constraint = parsed;
    }
    check.finish();

    IsingProblem problem = maxcut_to_ising(graph);
    if (constraint) {
        Observable combined = problem.hamiltonian;
        const Observable penalty = penalty_observable(*constraint, graph.n_nodes);
        combined.add_constant(penalty.constant());
        for (const auto& term : penalty.terms()) combined.add_term(term.coefficient, term.string);
        problem.hamiltonian = simplify(combined);
    }
    config.optimizer = opt_flags.build(seed);

    const QaoaResult result = run_qaoa(problem, config);

    json results{{"best_objective", result.best_objective},
                 {"solution_bitstring", result.solution_bitstring},
                 {"solution_energy", result.solution_energy},
                 {"cut_value", result.solution_cut_value},
                 {"gammas", result.best_params.gammas},
                 {"betas", result.best_params.betas}};
    if (graph.n_nodes <= 20 && !graph.edges.empty() && !constraint) {
        const double max_cut = -exact_ground_energy(problem.hamiltonian);
        results["max_cut"] = max_cut;
        results["approximation_ratio"] =
            max_cut == 0.0 ? 1.0 : result.solution_cut_value / max_cut;
    }
    results["trace"] = trace_summary(result.trace, trace_path);
    if (!trace_path.empty()) results["trace_path"] = trace_path;
    const json report{{"command", "qaoa run"},
                      {"inputs",
                       {{"graph", graph_path},
                        {"p", p},
                        {"init", init_text},
                        {"objective", objective_text},
                        {"shots", shots},
                        {"warm_start", warm_start_text},
                        {"constraint", constraint_text}}},
                      {"results", results},
                      {"provenance", provenance(seed, watch)}};
    emit_report(report, out_path);
    return kExitOk;
}

int cmd_zne_run(const std::string& circuit_path, const std::string& obs_path,
                const std::string& scales_text, const std::string& fit_name,
                long long trajectories, long long shots, std::uint64_t seed, bool seed_given,
                const NoiseFlags& noise_flags, const std::string& out_path) {
    const Stopwatch watch;
    ConfigCheck check;
    check.require(seed_given, "--seed is required for zne runs");
    ZneConfig config;
    config.trajectories = trajectories;
    config.shots_per_trajectory = shots;
    config.scales.clear();
    try {
        std::stringstream in(scales_text);
        std::string item;
        while (std::getline(in, item, ',')) config.scales.push_back(std::stoi(item));
    } catch (const std::exception&) {
        check.require(false, "--scales must be a comma-separated list of odd integers");
    }
    if (fit_name == "linear") config.fit = ZneFit::Linear;
    else if (fit_name == "quadratic") config.fit = ZneFit::Quadratic;
    else check.require(false, "--fit must be linear or quadratic");

    Circuit circuit(1);
    Observable obs(1);
    try {
        circuit = load_circuit(circuit_path);
        obs = simplify(load_observable(obs_path, 0));
    } catch (const std::exception& e) {
        check.require(false, e.what());
    }
    try {
        config.validate();
    } catch (const std::exception& e) {
        check.require(false, e.what());
    }
    check.finish();
    if (obs.n_qubits() < circuit.n_qubits) {
        obs = simplify(load_observable(obs_path, circuit.n_qubits));
    }

    const NoiseModel noise = noise_flags.build().value_or(NoiseModel{});
    const ZneResult result = zne_estimate(circuit, obs, noise, config, seed);

    json per_scale = json::array();
    for (const auto& entry : result.per_scale) {
        per_scale.push_back(
            {{"scale", entry.scale}, {"mean", entry.mean}, {"std", entry.std_dev}});
    }
    const json report{{"command", "zne run"},
                      {"inputs",
                       {{"circuit", circuit_path},
                        {"observable", obs_path},
                        {"scales", scales_text},
                        {"fit", fit_name},
                        {"trajectories", trajectories}}},
                      {"results",
                       {{"per_scale", per_scale},
                        {"extrapolated", result.extrapolated},
                        {"raw", result.raw}}},
                      {"provenance", provenance(seed, watch)}};
    emit_report(report, out_path);
    return kExitOk;
}

int demo_measurement_cost(DemoTable& table) {
    table.check("M = K/eps^2 for K=8000, eps=5e-4", 3.2e10, shots_required(8000.0, 5e-4), 0.0);
    table.check("M at chemical accuracy eps=1.6e-3", 3.125e9, shots_required(8000.0, 1.6e-3),
                1e3);
    return kExitOk;
}

int demo_vqe_worked_example(DemoTable& table) {
    const Observable obs = worked_example_hamiltonian();
    const AnsatzSpec ansatz{AnsatzSpec::Kind::SingleRy, 1, 1};
    const StateVector at_zero = run(build_ansatz(ansatz, {0.0}));
    const StateVector at_pi = run(build_ansatz(ansatz, {std::numbers::pi}));
    table.check("energy at theta=0", 3.0, exact_expectation(obs, at_zero.amps()), 1e-12);
    table.check("energy at theta=pi", -1.0, exact_expectation(obs, at_pi.amps()), 1e-12);

    OptimizerConfig opt;
    opt.method = OptimizerMethod::GradientDescent;
    opt.step_size = 0.1;
    opt.max_evaluations = 2000;
    const VqeResult result = run_vqe(obs, ansatz, opt, EstimatorSpec::exact_estimator());
    const double exact = 1.0 - std::sqrt(5.0);
    table.check("optimized energy", exact, result.best_energy, 1e-4);
    table.check("exact ground energy", exact, result.exact_ground.value(), 1e-9);
    return kExitOk;
}

int demo_shot_allocation(DemoTable& table, std::uint64_t seed) {
    const Observable obs = allocation_example_hamiltonian();
    const Circuit circuit = allocation_example_circuit();
    const auto groups = group_terms(obs, GroupingStrategy::OnePerTerm);
    const EnergyEstimate exact = estimate_observable_exact(circuit, obs, groups);
    table.check("exact expectation", 6.5, exact.value, 1e-12);

    constexpr int kRepetitions = 10000;
    constexpr long long kBudget = 300;
    std::vector<double> uniform_values;
    std::vector<double> proportional_values;
    const ShotPlan uniform = allocate_shots(groups, kBudget, AllocationStrategy::Uniform);
    const ShotPlan proportional =
        allocate_shots(groups, kBudget, AllocationStrategy::Proportional);
    for (int r = 0; r < kRepetitions; ++r) {
        const std::uint64_t rep_seed = derive_seed(seed, static_cast<std::uint64_t>(r));
        uniform_values.push_back(
            estimate_observable(circuit, obs, uniform, groups, rep_seed).value);
        proportional_values.push_back(
            estimate_observable(circuit, obs, proportional, groups, derive_seed(rep_seed, 77))
                .value);
    }
    const double uniform_std = std_dev(uniform_values);
    const double proportional_std = std_dev(proportional_values);
    table.check_in_band("uniform allocation std (reference 0.469 +- 0.05)", 0.419, 0.519,
                        uniform_std);
    table.check_in_band("proportional allocation std (reference 0.420 +- 0.05)", 0.370, 0.470,
                        proportional_std);
    table.check_true("proportional beats uniform", proportional_std < uniform_std,
                     "proportional std " + std::to_string(proportional_std) + " < uniform std " +
                         std::to_string(uniform_std));
    return kExitOk;
}

int demo_triangle_maxcut(DemoTable& table, std::uint64_t seed) {
    const WeightedGraph graph = triangle_graph();
    const IsingProblem problem = maxcut_to_ising(graph);
    const DiagonalEvaluator evaluator(problem.hamiltonian);
    const double ground = exact_ground_energy(problem.hamiltonian);
    table.check("minimum energy", -20.0, ground, 1e-12);
    std::vector<std::string> argmins;
    for (std::uint64_t b = 0; b < 8; ++b) {
        if (evaluator.eval(b) == ground) argmins.push_back(index_to_bitstring(b, 3));
    }
    const bool partition_ok =
        argmins == std::vector<std::string>{"011", "100"};
    table.check_true("optimal partition {0} vs {1,2}", partition_ok,
                     "argmin bitstrings: " + argmins.front() + ", " + argmins.back());

    QaoaConfig config;
    config.p = 2;
    config.init = {InitStrategy::Kind::Schedule, 0.5};
    config.optimizer.method = OptimizerMethod::NelderMead;
    config.optimizer.max_evaluations = 400;
    config.optimizer.restarts = 3;
    config.shots = 2000;
    config.seed = seed;
    const QaoaResult result = run_qaoa(problem, config);
    const bool found = result.solution_bitstring == "100" || result.solution_bitstring == "011";
    table.check_true("qaoa finds the optimal cut", found,
                     "solution " + result.solution_bitstring + " with cut value " +
                         std::to_string(result.solution_cut_value));
    table.check("solution cut value", 20.0, result.solution_cut_value, 1e-12);
    return kExitOk;
}

int cmd_demo(const std::string& name, std::uint64_t seed, const std::string& out_path) {
    const Stopwatch watch;
    DemoTable table;
    if (name == "measurement-cost") demo_measurement_cost(table);
    else if (name == "vqe-worked-example") demo_vqe_worked_example(table);
    else if (name == "shot-allocation") demo_shot_allocation(table, seed);
    else if (name == "triangle-maxcut") demo_triangle_maxcut(table, seed);
    else {
        throw ConfigError("unknown demo '" + name +
                          "'; available: shot-allocation, vqe-worked-example, triangle-maxcut, "
                          "measurement-cost");
    }
    const json report{{"command", "demo"},
                      {"inputs", {{"name", name}}},
                      {"results", {{"rows", table.rows}, {"all_passed", table.all_passed}}},
                      {"provenance", provenance(seed, watch)}};
    emit_report(report, out_path);
    return table.all_passed ? kExitOk : kExitRuntime;
}

int cmd_verify() {
    // Oracle spot checks, printed for manual inspection.
    const IsingProblem triangle = maxcut_to_ising(triangle_graph());
    const auto brute = oracle::brute_force_min(triangle.hamiltonian);
    std::cout << "brute_force_min(triangle): energy " << brute.energy << ", argmins";
    for (const auto& bits : brute.argmin_bitstrings) std::cout << " " << bits;
    std::cout << "\n";

    Rng rng(20250809);
    const PauliString a = PauliString::parse("X0*Z1", 2);
    const PauliString b = PauliString::parse("Y0*Z1", 2);
    const PhasedString product = multiply(a, b);
    const oracle::DenseMatrix lhs = [&] {
        Observable wrapped(2);
        wrapped.add_term(1.0, product.string);
        return product.phase() * oracle::dense_observable(wrapped);
    }();
    Observable oa(2);
    oa.add_term(1.0, a);
    Observable ob(2);
    ob.add_term(1.0, b);
    const oracle::DenseMatrix rhs =
        oracle::dense_apply(oracle::dense_observable(oa), oracle::dense_observable(ob));
    std::cout << "pauli closure (X0*Z1)(Y0*Z1): max deviation "
              << (lhs - rhs).cwiseAbs().maxCoeff() << "\n";

    const double theta = 2.0 * std::numbers::pi * rand_u01(rng);
    const double beta = 2.0 * std::numbers::pi * rand_u01(rng);
    Observable mixer(1);
    mixer.add_term(-std::sin(theta), PauliString::parse("X0", 1));
    mixer.add_term(-std::cos(theta), PauliString::parse("Z0", 1));
    const oracle::DenseMatrix expm = oracle::dense_expm_1q(mixer, beta);
    std::cout << "warm-start mixer exponential at random (theta, beta): unitary residual "
              << (expm * expm.adjoint() - oracle::DenseMatrix::Identity(2, 2)).cwiseAbs().maxCoeff()
              << "\n";

    Observable zz(2);
    zz.add_term(1.0, PauliString::parse("Z0*Z1", 2));
    const oracle::DenseMatrix identity = oracle::dense_expm_diagonal(zz, 0.0);
    std::cout << "diagonal exponential at t=0: identity residual "
              << (identity - oracle::DenseMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() << "\n";
    std::cout << "verify done\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"varqlab: a desk-scale laboratory for variational quantum algorithms"};
    app.require_subcommand(1);

    // group
    auto* group_cmd = app.add_subcommand("group", "partition an observable into QWC groups");
    std::string group_path;
    std::string group_strategy = "qwc_greedy";
    std::string group_out;
    group_cmd->add_option("hamiltonian", group_path, "observable file")->required();
    group_cmd->add_option("--strategy", group_strategy, "qwc_greedy or one_per_term");
    group_cmd->add_option("--out", group_out, "report path");

    // shots plan
    auto* shots_cmd = app.add_subcommand("shots", "measurement budget tools");
    auto* plan_cmd = shots_cmd->add_subcommand("plan", "allocate a shot budget across groups");
    std::string plan_path;
    long long plan_budget = 0;
    std::string plan_strategy = "proportional";
    std::string plan_grouping = "one_per_term";
    std::string plan_out;
    plan_cmd->add_option("hamiltonian", plan_path, "observable file")->required();
    plan_cmd->add_option("--budget", plan_budget, "total shots")->required();
    plan_cmd->add_option("--strategy", plan_strategy, "uniform or proportional");
    plan_cmd->add_option("--grouping", plan_grouping, "qwc_greedy or one_per_term");
    plan_cmd->add_option("--out", plan_out, "report path");

    // spectrum
    auto* spectrum_cmd = app.add_subcommand("spectrum", "exact ground energy of an observable");
    std::string spectrum_path;
    std::string spectrum_out;
    spectrum_cmd->add_option("hamiltonian", spectrum_path, "observable file")->required();
    spectrum_cmd->add_option("--out", spectrum_out, "report path");

    // vqe run
    auto* vqe_cmd = app.add_subcommand("vqe", "variational eigensolver");
    auto* vqe_run_cmd = vqe_cmd->add_subcommand("run", "run the hybrid VQE loop");
    std::string vqe_ham;
    std::string vqe_ansatz = "single_ry";
    std::string vqe_shots = "exact";
    std::string vqe_objective = "expectation";
    std::uint64_t vqe_seed = 0;
    std::string vqe_grouping = "qwc_greedy";
    std::string vqe_allocation = "proportional";
    std::string vqe_out;
    std::string vqe_trace;
    OptimizerFlags vqe_opt;
    NoiseFlags vqe_noise;
    vqe_run_cmd->add_option("--hamiltonian", vqe_ham, "observable file")->required();
    vqe_run_cmd->add_option("--ansatz", vqe_ansatz, "single_ry or layered:L");
    vqe_run_cmd->add_option("--shots", vqe_shots, "shots per evaluation, or 'exact'");
    vqe_run_cmd->add_option("--objective", vqe_objective, "expectation, cvar:a or gibbs:eta");
    auto* vqe_seed_opt = vqe_run_cmd->add_option("--seed", vqe_seed, "rng seed");
    vqe_run_cmd->add_option("--grouping", vqe_grouping, "qwc_greedy or one_per_term");
    vqe_run_cmd->add_option("--allocation", vqe_allocation, "uniform or proportional");
    vqe_run_cmd->add_option("--out", vqe_out, "report path");
    vqe_run_cmd->add_option("--trace", vqe_trace, "trace CSV path");
    vqe_opt.attach(vqe_run_cmd);
    vqe_noise.attach(vqe_run_cmd);

    // qaoa run
    auto* qaoa_cmd = app.add_subcommand("qaoa", "quantum approximate optimization");
    auto* qaoa_run_cmd = qaoa_cmd->add_subcommand("run", "run the QAOA loop on a MaxCut graph");
    std::string qaoa_graph;
    int qaoa_p = 1;
    std::string qaoa_init = "schedule:0.5";
    std::string qaoa_objective = "expectation";
    long long qaoa_shots = 1000;
    std::uint64_t qaoa_seed = 0;
    std::string qaoa_warm;
    std::string qaoa_constraint;
    std::string qaoa_out;
    std::string qaoa_trace;
    OptimizerFlags qaoa_opt;
    qaoa_opt.method = "nm";
    qaoa_run_cmd->add_option("--graph", qaoa_graph, "graph file")->required();
    qaoa_run_cmd->add_option("--p", qaoa_p, "layer count");
    qaoa_run_cmd->add_option("--init", qaoa_init, "schedule:D, random, interp or lbl");
    qaoa_run_cmd->add_option("--objective", qaoa_objective, "expectation, cvar:a or gibbs:eta");
    qaoa_run_cmd->add_option("--shots", qaoa_shots, "shots per evaluation");
    auto* qaoa_seed_opt = qaoa_run_cmd->add_option("--seed", qaoa_seed, "rng seed");
    qaoa_run_cmd->add_option("--warm-start", qaoa_warm, "comma-separated relaxed fractions");
    qaoa_run_cmd->add_option("--constraint", qaoa_constraint, "k=K,qubits=a+b+c,weight=W");
    qaoa_run_cmd->add_option("--out", qaoa_out, "report path");
    qaoa_run_cmd->add_option("--trace", qaoa_trace, "trace CSV path");
    qaoa_opt.attach(qaoa_run_cmd);

    // zne run
    auto* zne_cmd = app.add_subcommand("zne", "zero-noise extrapolation");
    auto* zne_run_cmd = zne_cmd->add_subcommand("run", "extrapolate an observable to zero noise");
    std::string zne_circuit;
    std::string zne_obs;
    std::string zne_scales = "1,3,5";
    std::string zne_fit = "linear";
    long long zne_trajectories = 200;
    long long zne_shots = 0;
    std::uint64_t zne_seed = 0;
    std::string zne_out;
    NoiseFlags zne_noise;
    zne_run_cmd->add_option("--circuit", zne_circuit, "circuit file")->required();
    zne_run_cmd->add_option("--observable", zne_obs, "observable file")->required();
    zne_run_cmd->add_option("--scales", zne_scales, "comma-separated odd scales");
    zne_run_cmd->add_option("--fit", zne_fit, "linear or quadratic");
    zne_run_cmd->add_option("--trajectories", zne_trajectories, "noisy repetitions per scale");
    zne_run_cmd->add_option("--shots", zne_shots, "shots per trajectory (0 = exact)");
    auto* zne_seed_opt = zne_run_cmd->add_option("--seed", zne_seed, "rng seed");
    zne_run_cmd->add_option("--out", zne_out, "report path");
    zne_noise.attach(zne_run_cmd);

    // demo
    auto* demo_cmd = app.add_subcommand("demo", "scripted experiments pinned to known numbers");
    std::string demo_name;
    std::uint64_t demo_seed = 7;
    std::string demo_out;
    demo_cmd
        ->add_option("name", demo_name,
                     "shot-allocation | vqe-worked-example | triangle-maxcut | measurement-cost")
        ->required();
    demo_cmd->add_option("--seed", demo_seed, "rng seed");
    demo_cmd->add_option("--out", demo_out, "report path");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "oracle spot checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (group_cmd->parsed()) return cmd_group(group_path, group_strategy, group_out);
        if (shots_cmd->parsed() && plan_cmd->parsed()) {
            return cmd_shots_plan(plan_path, plan_budget, plan_strategy, plan_grouping, plan_out);
        }
        if (spectrum_cmd->parsed()) return cmd_spectrum(spectrum_path, spectrum_out);
        if (vqe_cmd->parsed() && vqe_run_cmd->parsed()) {
            return cmd_vqe_run(vqe_ham, vqe_ansatz, vqe_shots, vqe_objective, vqe_seed,
                               vqe_seed_opt->count() > 0, vqe_opt, vqe_noise, vqe_grouping,
                               vqe_allocation, vqe_out, vqe_trace);
        }
        if (qaoa_cmd->parsed() && qaoa_run_cmd->parsed()) {
            return cmd_qaoa_run(qaoa_graph, qaoa_p, qaoa_init, qaoa_objective, qaoa_shots,
                                qaoa_seed, qaoa_seed_opt->count() > 0, qaoa_opt, qaoa_warm,
                                qaoa_constraint, qaoa_out, qaoa_trace);
        }
        if (zne_cmd->parsed() && zne_run_cmd->parsed()) {
            return cmd_zne_run(zne_circuit, zne_obs, zne_scales, zne_fit, zne_trajectories,
                               zne_shots, zne_seed, zne_seed_opt->count() > 0, zne_noise,
                               zne_out);
        }
        if (demo_cmd->parsed()) return cmd_demo(demo_name, demo_seed, demo_out);
        if (verify_cmd->parsed()) return cmd_verify();
        std::cerr << "no subcommand given; see --help\n";
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
