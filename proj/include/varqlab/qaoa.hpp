#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "varqlab/objectives.hpp"
#include "varqlab/optimizers.hpp"
#include "varqlab/pauli.hpp"
#include "varqlab/simulator.hpp"

namespace varqlab {

struct WeightedGraph {
    struct Edge {
        int i = 0;
        int j = 0;
        double weight = 0.0;
    };
    int n_nodes = 0;
    std::vector<Edge> edges;

    void validate() const;  // i < j, indices in range, no duplicate edges
    /// Total weight of edges whose endpoints land in different groups.
    double cut_value(const std::string& bits) const;
    double max_abs_weight() const;

    /// First line "n_nodes", then one "i j weight" triple per line.
    static WeightedGraph parse(const std::string& text);
    std::string format() const;
};

/// Diagonal minimisation problem; the MaxCut offset lives in the constant.
struct IsingProblem {
    Observable hamiltonian;
};

/// Cut maximisation as minimisation of -C: constant -w/2 per edge, +w/2 Z_iZ_j.
IsingProblem maxcut_to_ising(const WeightedGraph& graph);

struct LinearConstraint {
    int target = 0;            // required number of ones over the qubit set
    std::vector<int> qubits;
    double penalty_weight = 1.0;
};

/// P1 (k - sum x_q)^2 with x_q = (1 - Z_q)/2, expanded and simplified.
Observable penalty_observable(const LinearConstraint& constraint, int n_qubits);

struct QaoaParams {
    int p = 1;
    std::vector<double> gammas;
    std::vector<double> betas;

    void validate() const;
};

/// H on every qubit, then per layer e^{-i gamma H_C} as RZ/CNOT ladders and
/// e^{-i beta H_B} as RX(2 beta) on every qubit.
Circuit build_qaoa_circuit(const IsingProblem& problem, const QaoaParams& params);

/// RY(theta_i) per qubit with theta_i = 2 asin(sqrt(c_i*)).
Circuit warm_start_state_prep(const std::vector<double>& c_star);

/// e^{-i beta (-sin(theta) X - cos(theta) Z)} per qubit, realised as
/// RY(-theta) RZ(-2 beta) RY(theta) in circuit order.
Circuit warm_start_mixer_layer(const std::vector<double>& c_star, double beta);

/// Warm-start variant: RY prep instead of the H layer, warm mixer layers.
Circuit build_warm_start_qaoa_circuit(const IsingProblem& problem, const QaoaParams& params,
                                      const std::vector<double>& c_star);

QaoaParams init_random(int p, std::uint64_t seed);
/// gamma_j = delta * j/(p+1), beta_j = (1 - delta) * j/(p+1).
QaoaParams init_schedule(double delta, int p);
/// Piecewise-linear resample of a depth-(p-1) optimum onto p layers over the
/// normalised index j/(p+1), anchored at the origin.
QaoaParams init_interp(const QaoaParams& previous);

struct InitStrategy {
    enum class Kind { Random, Schedule, Interp, Lbl };
    Kind kind = Kind::Schedule;
    double delta = 0.5;  // schedule slope; also seeds the Interp/Lbl ladders
};

struct QaoaConfig {
    int p = 1;
    InitStrategy init;
    OptimizerConfig optimizer;
    ObjectiveSpec objective;
    long long shots = 1000;
    std::uint64_t seed = 0;
    std::optional<std::vector<double>> warm_start;
};

struct QaoaResult {
    QaoaParams best_params;
    double best_objective = 0.0;
    std::string solution_bitstring;   // lowest-energy bitstring observed
    double solution_energy = 0.0;     // in problem units
    double solution_cut_value = 0.0;  // -energy, the cut for MaxCut problems
    OptimizationTrace trace;
};

/// Hybrid QAOA loop: sample bitstrings, label them with their diagonal
/// energies, feed the chosen objective to the optimizer. Interp and Lbl run a
/// ladder of optimisations from p=1 up to the target depth.
QaoaResult run_qaoa(const IsingProblem& problem, const QaoaConfig& config);

/// Approximation ratio (expected cut / brute-force max cut) of fixed
/// parameters on each graph; the empty-graph ratio is 1 by convention.
/// Brute force limits graphs to 20 nodes.
std::vector<double> evaluate_transfer(const QaoaParams& params,
                                      const std::vector<WeightedGraph>& graphs, long long shots,
                                      std::uint64_t seed);

}  // namespace varqlab
