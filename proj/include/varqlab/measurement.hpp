#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "varqlab/pauli.hpp"
#include "varqlab/simulator.hpp"

namespace varqlab {

/// Mutually qubit-wise commuting terms plus the per-qubit measurement basis
/// they share (I on unused qubits).
struct MeasurementGroup {
    std::vector<PauliTerm> terms;
    std::vector<PauliAxis> basis;

    int n_qubits() const { return static_cast<int>(basis.size()); }
};

enum class GroupingStrategy { OnePerTerm, QwcGreedy };

/// Partitions the observable's terms (constant excluded) into co-measurable
/// groups. QwcGreedy is first-fit over terms in descending |coefficient|.
std::vector<MeasurementGroup> group_terms(const Observable& obs, GroupingStrategy strategy);

/// Pre-measurement rotations: RY(-pi/2) for X, RX(pi/2) for Y, nothing for Z/I.
Circuit basis_rotation_circuit(const MeasurementGroup& group, int n_qubits);

/// Group energy of one measured basis state: sum of c_t * prod_(support) +-1.
double group_energy(const MeasurementGroup& group, std::uint64_t index);

struct GroupEstimate {
    std::vector<double> term_means;
    double contribution = 0.0;  // sum over terms of c_t * mean_t
    double variance = 0.0;      // per-shot variance of the group energy
    long long shots = 0;
};

GroupEstimate estimate_from_counts(const MeasurementGroup& group, const SampleCounts& counts);
/// Same estimator fed with exact basis-state probabilities; variance reported
/// for reference, the caller treats the result as noise-free.
GroupEstimate estimate_from_probabilities(const MeasurementGroup& group,
                                          std::span<const double> probabilities);

enum class AllocationStrategy { Uniform, Proportional };

struct ShotAllocation {
    int group_index = 0;
    long long shots = 0;
};

struct ShotPlan {
    std::vector<ShotAllocation> allocations;
    long long total_budget = 0;
};

/// Splits the budget across groups. Uniform gives the remainder to the
/// earliest groups; Proportional weighs by group one-norm and rounds by
/// largest remainder so the total is exact.
ShotPlan allocate_shots(const std::vector<MeasurementGroup>& groups, long long budget,
                        AllocationStrategy strategy);

struct EnergyEstimate {
    double value = 0.0;
    double std_error = 0.0;
    struct PerGroup {
        int group_index = 0;
        double contribution = 0.0;
        long long shots = 0;
    };
    std::vector<PerGroup> per_group;
};

/// Runs circuit + basis rotation per group, samples the allocated shots and
/// combines contributions; per-group standard errors add in quadrature.
/// Group g uses seeds derived from seed + g, so groups are independent.
EnergyEstimate estimate_observable(const Circuit& circuit, const Observable& obs,
                                   const ShotPlan& plan,
                                   const std::vector<MeasurementGroup>& groups,
                                   std::uint64_t seed,
                                   const std::optional<NoiseModel>& noise = std::nullopt);

/// Shot-free variant using analytic probabilities; std_error is zero.
EnergyEstimate estimate_observable_exact(const Circuit& circuit, const Observable& obs,
                                         const std::vector<MeasurementGroup>& groups);

/// Per-shot energy samples for one group (bitstring, group energy, count),
/// the raw material for risk-aware objectives.
struct EnergySample {
    std::string bitstring;
    double energy = 0.0;
    long long count = 0;
};
std::vector<EnergySample> group_energy_samples(const MeasurementGroup& group,
                                               const SampleCounts& counts);

/// M = K / epsilon^2.
double shots_required(double k, double epsilon);

struct ThreeStageSchedule {
    struct Stage {
        long long shots_per_evaluation = 0;
        double fraction = 0.0;
        long long evaluations = 0;
    };
    std::array<Stage, 3> stages;
    long long total_evaluations = 0;
};

/// Splits an evaluation budget across three stages with fixed shot levels,
/// largest-remainder rounded. Every stage must end up with >= 1 evaluation.
ThreeStageSchedule three_stage_plan(long long total_evaluations,
                                    std::array<long long, 3> shots_per_stage = {100, 1000, 10000},
                                    std::array<long long, 3> ratio = {10, 3, 1});

/// Largest-remainder split of an integer budget proportional to weights.
std::vector<long long> largest_remainder_split(std::span<const double> weights, long long budget);

}  // namespace varqlab
