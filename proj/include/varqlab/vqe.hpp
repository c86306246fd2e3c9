#pragma once

#include <cstdint>
#include <optional>

#include "varqlab/measurement.hpp"
#include "varqlab/objectives.hpp"
#include "varqlab/optimizers.hpp"
#include "varqlab/pauli.hpp"
#include "varqlab/simulator.hpp"

namespace varqlab {

struct AnsatzSpec {
    enum class Kind { SingleRy, Layered };
    Kind kind = Kind::SingleRy;
    int n_qubits = 1;
    int layers = 1;  // Layered only: RY then RZ on every qubit, then a CNOT chain

    int parameter_count() const;
    void validate() const;
};

Circuit build_ansatz(const AnsatzSpec& spec, const ParameterVector& params);

/// How the energy of a prepared state is obtained.
struct EstimatorSpec {
    bool exact = true;
    // Sampled-estimator knobs (ignored when exact):
    long long shots_budget = 1000;  // per energy evaluation
    GroupingStrategy grouping = GroupingStrategy::QwcGreedy;
    AllocationStrategy allocation = AllocationStrategy::Proportional;
    std::uint64_t seed = 0;
    std::optional<NoiseModel> noise;

    static EstimatorSpec exact_estimator() { return {}; }
    static EstimatorSpec sampled(long long shots, std::uint64_t seed,
                                 std::optional<NoiseModel> noise = std::nullopt) {
        EstimatorSpec spec;
        spec.exact = false;
        spec.shots_budget = shots;
        spec.seed = seed;
        spec.noise = std::move(noise);
        return spec;
    }
};

struct VqeResult {
    double best_energy = 0.0;
    ParameterVector best_params;
    OptimizationTrace trace;
    std::optional<double> exact_ground;
    std::optional<double> gap_to_exact;  // best_energy - exact_ground; with the
                                         // exact estimator this is >= -1e-9 by
                                         // the variational principle, sampled
                                         // runs carry shot noise on top
};

/// Hybrid loop: the optimizer minimises the chosen objective of the estimated
/// energy. CVaR/Gibbs need per-shot energies and therefore a sampled
/// estimator; requesting them with the exact one is an error. The search
/// starts from all-zero parameters unless initial_params is given.
VqeResult run_vqe(const Observable& obs, const AnsatzSpec& ansatz, const OptimizerConfig& opt,
                  const EstimatorSpec& estimator,
                  const ObjectiveSpec& objective = ObjectiveSpec{},
                  const std::optional<ParameterVector>& initial_params = std::nullopt);

/// Lowest eigenvalue: exhaustive scan for diagonal observables (n <= 22),
/// shifted power iteration on one_norm*I - H otherwise (n <= 10).
double exact_ground_energy(const Observable& obs);

/// The power-iteration path, exposed so tests can run it on diagonal inputs.
double ground_energy_power_iteration(const Observable& obs);

}  // namespace varqlab
