#include "varqlab/qaoa.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include "varqlab/bits.hpp"
#include "varqlab/rng.hpp"
#include "varqlab/threading.hpp"
#include "varqlab/vqe.hpp"

namespace varqlab {

namespace {

ParameterVector flatten(const QaoaParams& params) {
    ParameterVector flat = params.gammas;
    flat.insert(flat.end(), params.betas.begin(), params.betas.end());
    return flat;
}

QaoaParams unflatten(int p, const ParameterVector& flat) {
    QaoaParams params;
    params.p = p;
    params.gammas.assign(flat.begin(), flat.begin() + p);
    params.betas.assign(flat.begin() + p, flat.end());
    return params;
}

void append_cost_layer(Circuit& circuit, const Observable& hamiltonian, double gamma) {
    for (const auto& term : hamiltonian.terms()) {
        const std::vector<int> support = term.string.support();
        const double angle = 2.0 * term.coefficient * gamma;
        if (support.size() == 1) {
            circuit.append(Gate::rz(support[0], angle));
            continue;
        }
        for (std::size_t k = 0; k + 1 < support.size(); ++k) {
            circuit.append(Gate::cnot(support[k], support[k + 1]));
        }
        circuit.append(Gate::rz(support.back(), angle));
        for (std::size_t k = support.size() - 1; k-- > 0;) {
            circuit.append(Gate::cnot(support[k], support[k + 1]));
        }
    }
}

void append_mixer_layer(Circuit& circuit, double beta) {
    for (int q = 0; q < circuit.n_qubits; ++q) circuit.append(Gate::rx(q, 2.0 * beta));
}

void check_warm_start(const std::vector<double>& c_star) {
    for (double c : c_star) {
        if (!(c >= 0.0 && c <= 1.0)) {
            throw std::invalid_argument("warm-start fractions must lie in [0, 1]");
        }
    }
}

double warm_theta(double c) { return 2.0 * std::asin(std::sqrt(c)); }

// Interpolates the (0,0)-anchored polyline through (k/(q+1), v_k) at f,
// extrapolating past the last node with the final segment's slope.
double resample_at(const std::vector<double>& values, double f) {
    const auto q = static_cast<int>(values.size());
    const auto position = [&](int k) {
        return static_cast<double>(k) / static_cast<double>(q + 1);
    };
    const auto value = [&](int k) { return k == 0 ? 0.0 : values[static_cast<std::size_t>(k - 1)]; };
    int right = 1;
    while (right < q && position(right) < f) ++right;
    const double f0 = position(right - 1);
    const double f1 = position(right);
    const double v0 = value(right - 1);
    const double v1 = value(right);
    return v0 + (f - f0) * (v1 - v0) / (f1 - f0);
}

struct StageOutcome {
    QaoaParams params;
    double objective = 0.0;
};

}  // namespace

void WeightedGraph::validate() const {
    if (n_nodes < 0) throw std::invalid_argument("graph needs a nonnegative node count");
    std::set<std::pair<int, int>> seen;
    for (const auto& edge : edges) {
        if (edge.i < 0 || edge.j < 0 || edge.i >= n_nodes || edge.j >= n_nodes) {
            throw std::invalid_argument("edge (" + std::to_string(edge.i) + ", " +
                                        std::to_string(edge.j) + ") is out of range");
        }
        if (edge.i >= edge.j) {
            throw std::invalid_argument("edges must satisfy i < j");
        }
        if (!std::isfinite(edge.weight)) throw std::invalid_argument("edge weight must be finite");
        if (!seen.insert({edge.i, edge.j}).second) {
            throw std::invalid_argument("duplicate edge (" + std::to_string(edge.i) + ", " +
                                        std::to_string(edge.j) + ")");
        }
    }
}

double WeightedGraph::cut_value(const std::string& bits) const {
    if (static_cast<int>(bits.size()) != n_nodes) {
        throw std::invalid_argument("assignment must have one bit per node");
    }
    double cut = 0.0;
    for (const auto& edge : edges) {
        if (bits[static_cast<std::size_t>(edge.i)] != bits[static_cast<std::size_t>(edge.j)]) {
            cut += edge.weight;
        }
    }
    return cut;
}

double WeightedGraph::max_abs_weight() const {
    double best = 0.0;
    for (const auto& edge : edges) best = std::max(best, std::abs(edge.weight));
    return best;
}

WeightedGraph WeightedGraph::parse(const std::string& text) {
    std::istringstream in(text);
    WeightedGraph graph;
    if (!(in >> graph.n_nodes)) throw std::invalid_argument("graph text must start with n_nodes");
    Edge edge;
    while (in >> edge.i >> edge.j >> edge.weight) {
        if (edge.i > edge.j) std::swap(edge.i, edge.j);
        graph.edges.push_back(edge);
    }
    if (!in.eof()) throw std::invalid_argument("trailing content in graph text");
    graph.validate();
    return graph;
}

std::string WeightedGraph::format() const {
    std::ostringstream out;
    out.precision(17);
    out << n_nodes << "\n";
    for (const auto& edge : edges) {
        out << edge.i << " " << edge.j << " " << edge.weight << "\n";
    }
    return out.str();
}

IsingProblem maxcut_to_ising(const WeightedGraph& graph) {
    graph.validate();
    Observable hamiltonian(std::max(1, graph.n_nodes));
    for (const auto& edge : graph.edges) {
        hamiltonian.add_constant(-0.5 * edge.weight);
        hamiltonian.add_term(0.5 * edge.weight,
                             PauliString(graph.n_nodes,
                                         {{edge.i, PauliAxis::Z}, {edge.j, PauliAxis::Z}}));
    }
    return IsingProblem{simplify(hamiltonian)};
}

Observable penalty_observable(const LinearConstraint& constraint, int n_qubits) {
    if (!(constraint.penalty_weight > 0.0)) {
        throw std::invalid_argument("penalty weight must be positive");
    }
    for (int q : constraint.qubits) {
        if (q < 0 || q >= n_qubits) {
            throw std::invalid_argument("constraint qubit " + std::to_string(q) +
                                        " is out of range");
        }
    }
    // k - sum x_q = (k - m/2) + (1/2) sum Z_q
    const auto m = static_cast<double>(constraint.qubits.size());
    const double offset = static_cast<double>(constraint.target) - m / 2.0;
    Observable linear(n_qubits);
    linear.add_constant(offset);
    for (int q : constraint.qubits) {
        linear.add_term(0.5, PauliString(n_qubits, {{q, PauliAxis::Z}}));
    }
    // Square it with the string algebra.
    Observable square(n_qubits);
    square.add_constant(linear.constant() * linear.constant());
    for (const auto& term : linear.terms()) {
        square.add_term(2.0 * linear.constant() * term.coefficient, term.string);
    }
    for (const auto& a : linear.terms()) {
        for (const auto& b : linear.terms()) {
            const PhasedString product = multiply(a.string, b.string);
            if (product.phase_exponent % 2 != 0) {
                throw std::logic_error("diagonal product produced an imaginary phase");
            }
            const double sign = product.phase_exponent == 0 ? 1.0 : -1.0;
            square.add_term(sign * a.coefficient * b.coefficient, product.string);
        }
    }
    Observable scaled(n_qubits);
    scaled.add_constant(constraint.penalty_weight * square.constant());
    for (const auto& term : square.terms()) {
        scaled.add_term(constraint.penalty_weight * term.coefficient, term.string);
    }
    return simplify(scaled);
}

void QaoaParams::validate() const {
    if (p < 1) throw std::invalid_argument("qaoa needs at least one layer");
    if (static_cast<int>(gammas.size()) != p || static_cast<int>(betas.size()) != p) {
        throw std::invalid_argument("qaoa parameter lengths must equal p");
    }
}

Circuit build_qaoa_circuit(const IsingProblem& problem, const QaoaParams& params) {
    params.validate();
    if (!problem.hamiltonian.is_diagonal()) {
        throw std::invalid_argument("qaoa cost hamiltonian must be diagonal (Z/I only)");
    }
    Circuit circuit(problem.hamiltonian.n_qubits());
    for (int q = 0; q < circuit.n_qubits; ++q) circuit.append(Gate::h(q));
    for (int layer = 0; layer < params.p; ++layer) {
        append_cost_layer(circuit, problem.hamiltonian,
                          params.gammas[static_cast<std::size_t>(layer)]);
        append_mixer_layer(circuit, params.betas[static_cast<std::size_t>(layer)]);
    }
    return circuit;
}

Circuit warm_start_state_prep(const std::vector<double>& c_star) {
    check_warm_start(c_star);
    Circuit circuit(static_cast<int>(c_star.size()));
    for (int q = 0; q < circuit.n_qubits; ++q) {
        circuit.append(Gate::ry(q, warm_theta(c_star[static_cast<std::size_t>(q)])));
    }
    return circuit;
}

Circuit warm_start_mixer_layer(const std::vector<double>& c_star, double beta) {
    check_warm_start(c_star);
    Circuit circuit(static_cast<int>(c_star.size()));
    for (int q = 0; q < circuit.n_qubits; ++q) {
        const double theta = warm_theta(c_star[static_cast<std::size_t>(q)]);
        circuit.append(Gate::ry(q, -theta));
        circuit.append(Gate::rz(q, -2.0 * beta));
        circuit.append(Gate::ry(q, theta));
    }
    return circuit;
}

Circuit build_warm_start_qaoa_circuit(const IsingProblem& problem, const QaoaParams& params,
                                      const std::vector<double>& c_star) {
    params.validate();
    if (static_cast<int>(c_star.size()) != problem.hamiltonian.n_qubits()) {
        throw std::invalid_argument("warm-start vector must have one fraction per qubit");
    }
    Circuit circuit = warm_start_state_prep(c_star);
    for (int layer = 0; layer < params.p; ++layer) {
        append_cost_layer(circuit, problem.hamiltonian,
                          params.gammas[static_cast<std::size_t>(layer)]);
        circuit.extend(
            warm_start_mixer_layer(c_star, params.betas[static_cast<std::size_t>(layer)]));
    }
    return circuit;
}

QaoaParams init_random(int p, std::uint64_t seed) {
    if (p < 1) throw std::invalid_argument("qaoa needs at least one layer");
    Rng rng(seed);
    QaoaParams params;
    params.p = p;
    for (int j = 0; j < p; ++j) params.gammas.push_back(2.0 * std::numbers::pi * rand_u01(rng));
    for (int j = 0; j < p; ++j) params.betas.push_back(2.0 * std::numbers::pi * rand_u01(rng));
    return params;
}

QaoaParams init_schedule(double delta, int p) {
    if (p < 1) throw std::invalid_argument("qaoa needs at least one layer");
    QaoaParams params;
    params.p = p;
    for (int j = 1; j <= p; ++j) {
        const double f = static_cast<double>(j) / static_cast<double>(p + 1);
        params.gammas.push_back(delta * f);
        params.betas.push_back((1.0 - delta) * f);
    }
    return params;
}

QaoaParams init_interp(const QaoaParams& previous) {
    previous.validate();
    const int p = previous.p + 1;
    QaoaParams params;
    params.p = p;
    for (int j = 1; j <= p; ++j) {
        const double f = static_cast<double>(j) / static_cast<double>(p + 1);
        params.gammas.push_back(resample_at(previous.gammas, f));
        params.betas.push_back(resample_at(previous.betas, f));
    }
    return params;
}

QaoaResult run_qaoa(const IsingProblem& problem, const QaoaConfig& config) {
    if (config.p < 1) throw std::invalid_argument("qaoa needs at least one layer");
    if (config.shots < 1) throw std::invalid_argument("qaoa needs at least one shot");
    config.objective.validate();
    config.optimizer.validate();
    if (!problem.hamiltonian.is_diagonal()) {
        throw std::invalid_argument("qaoa cost hamiltonian must be diagonal (Z/I only)");
    }
    if (config.warm_start) {
        check_warm_start(*config.warm_start);
        if (static_cast<int>(config.warm_start->size()) != problem.hamiltonian.n_qubits()) {
            throw std::invalid_argument("warm-start vector must have one fraction per qubit");
        }
    }

    const DiagonalEvaluator evaluator(problem.hamiltonian);
    QaoaResult result;
    bool have_solution = false;
    std::uint64_t evaluation_counter = 0;

    const auto make_objective = [&](int depth) {
        return [&, depth](const ParameterVector& flat) {
            const QaoaParams params = unflatten(depth, flat);
            const Circuit circuit =
                config.warm_start
                    ? build_warm_start_qaoa_circuit(problem, params, *config.warm_start)
                    : build_qaoa_circuit(problem, params);
            const StateVector state = run(circuit);
            const SampleCounts counts = sample(state, config.shots, std::nullopt,
                                               derive_seed(config.seed, evaluation_counter++));
            SampleSet samples;
            for (const auto& [bits, count] : counts.counts) {
                const double energy = evaluator.eval(bitstring_to_index(bits));
                samples.entries.push_back({bits, energy, count});
                if (!have_solution || energy < result.solution_energy) {
                    have_solution = true;
                    result.solution_energy = energy;
                    result.solution_bitstring = bits;
                }
            }
            return evaluate_objective(samples, config.objective);
        };
    };

    // Ladder schedule: Interp and Lbl climb from depth 1 to the target depth,
    // reoptimising every parameter after each extension.
    std::vector<int> depths;
    QaoaParams initial;
    switch (config.init.kind) {
        case InitStrategy::Kind::Random:
            depths = {config.p};
            initial = init_random(config.p, config.seed);
            break;
        case InitStrategy::Kind::Schedule:
            depths = {config.p};
            initial = init_schedule(config.init.delta, config.p);
            break;
        case InitStrategy::Kind::Interp:
        case InitStrategy::Kind::Lbl:
            for (int depth = 1; depth <= config.p; ++depth) depths.push_back(depth);
            initial = init_schedule(config.init.delta, 1);
            break;
    }

    OptimizationTrace combined;
    QaoaParams stage_params = initial;
    double stage_best = 0.0;
    for (std::size_t stage = 0; stage < depths.size(); ++stage) {
        const int depth = depths[stage];
        OptimizerConfig opt = config.optimizer;
        opt.shots_per_evaluation = config.shots;
        opt.restart_seed = derive_seed(config.seed, 0xabcd00 + stage);
        const OptimizationTrace trace = optimize(make_objective(depth), flatten(stage_params), opt);

        const long long eval_offset = combined.total_evaluations;
        const long long shot_offset = combined.total_shots;
        for (const auto& it : trace.iterations) {
            combined.iterations.push_back({it.params, it.value,
                                           it.cumulative_evaluations + eval_offset,
                                           it.cumulative_shots + shot_offset});
        }
        combined.total_evaluations += trace.total_evaluations;
        combined.total_shots += trace.total_shots;

        stage_params = unflatten(depth, trace.best_params);
        stage_best = trace.best_value;
        if (stage + 1 < depths.size()) {
            if (config.init.kind == InitStrategy::Kind::Interp) {
                stage_params = init_interp(stage_params);
            } else {
                // Lbl: keep the optimised layers, append a schedule-initialised one.
                const QaoaParams fresh = init_schedule(config.init.delta, depth + 1);
                stage_params.p = depth + 1;
                stage_params.gammas.push_back(fresh.gammas.back());
                stage_params.betas.push_back(fresh.betas.back());
            }
        }
    }
    combined.best_params = flatten(stage_params);
    combined.best_value = stage_best;

    result.best_params = stage_params;
    result.best_objective = stage_best;
    result.trace = std::move(combined);
    result.solution_cut_value = -result.solution_energy;
    return result;
}

std::vector<double> evaluate_transfer(const QaoaParams& params,
                                      const std::vector<WeightedGraph>& graphs, long long shots,
                                      std::uint64_t seed) {
    params.validate();
    if (shots < 1) throw std::invalid_argument("transfer evaluation needs at least one shot");
    for (const auto& graph : graphs) {
        graph.validate();
        if (graph.n_nodes > 20) {
            throw std::invalid_argument("brute-force max cut supports at most 20 nodes");
        }
    }
    std::vector<double> ratios(graphs.size(), 0.0);
    const auto body = [&](std::size_t g) {
        const WeightedGraph& graph = graphs[g];
        const IsingProblem problem = maxcut_to_ising(graph);
        if (graph.edges.empty()) {
            ratios[g] = 1.0;  // degenerate: every assignment cuts nothing
            return;
        }
        const double max_cut = -exact_ground_energy(problem.hamiltonian);
        const Circuit circuit = build_qaoa_circuit(problem, params);
        const StateVector state = run(circuit);
        const SampleCounts counts =
            sample(state, shots, std::nullopt, derive_seed(seed, static_cast<std::uint64_t>(g)));
        const DiagonalEvaluator evaluator(problem.hamiltonian);
        double mean_energy = 0.0;
        for (const auto& [bits, count] : counts.counts) {
            mean_energy += static_cast<double>(count) * evaluator.eval(bitstring_to_index(bits));
        }
        mean_energy /= static_cast<double>(shots);
        const double expected_cut = -mean_energy;
        ratios[g] = max_cut == 0.0 ? 1.0 : expected_cut / max_cut;
    };
#ifdef _OPENMP
#pragma omp parallel for num_threads(thread_count()) schedule(dynamic)
#endif
    for (std::size_t g = 0; g < graphs.size(); ++g) body(g);
    return ratios;
}

}  // namespace varqlab
