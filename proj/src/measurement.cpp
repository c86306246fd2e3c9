#include "varqlab/measurement.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "varqlab/bits.hpp"
#include "varqlab/rng.hpp"

namespace varqlab {

namespace {

std::vector<PauliAxis> basis_of(const std::vector<PauliTerm>& terms, int n_qubits) {
    std::vector<PauliAxis> basis(static_cast<std::size_t>(n_qubits), PauliAxis::I);
    for (const auto& term : terms) {
        for (int q : term.string.support()) {
            const PauliAxis axis = term.string.axis(q);
            auto& slot = basis[static_cast<std::size_t>(q)];
            if (slot == PauliAxis::I) {
                slot = axis;
            } else if (slot != axis) {
                throw std::logic_error("terms in a group disagree on qubit " + std::to_string(q));
            }
        }
    }
    return basis;
}

std::uint64_t support_mask(const PauliString& s) {
    std::uint64_t mask = 0;
    for (int q : s.support()) mask |= qubit_mask(q, s.n_qubits());
    return mask;
}

GroupEstimate estimate_weighted(const MeasurementGroup& group,
                                std::span<const std::uint64_t> indices,
                                std::span<const double> weights, double total_weight,
                                long long shots) {
    std::vector<std::uint64_t> masks;
    masks.reserve(group.terms.size());
    for (const auto& term : group.terms) masks.push_back(support_mask(term.string));

    GroupEstimate est;
    est.shots = shots;
    est.term_means.assign(group.terms.size(), 0.0);
    double second_moment = 0.0;
    for (std::size_t k = 0; k < indices.size(); ++k) {
        const double w = weights[k] / total_weight;
        double energy = 0.0;
        for (std::size_t t = 0; t < masks.size(); ++t) {
            const double sign = (std::popcount(indices[k] & masks[t]) & 1) ? -1.0 : 1.0;
            est.term_means[t] += w * sign;
            energy += group.terms[t].coefficient * sign;
        }
        second_moment += w * energy * energy;
    }
    for (std::size_t t = 0; t < group.terms.size(); ++t) {
        est.contribution += group.terms[t].coefficient * est.term_means[t];
    }
    est.variance = std::max(0.0, second_moment - est.contribution * est.contribution);
    return est;
}

void check_plan(const ShotPlan& plan, std::size_t n_groups) {
    std::vector<bool> covered(n_groups, false);
    for (const auto& alloc : plan.allocations) {
        if (alloc.group_index < 0 || alloc.group_index >= static_cast<int>(n_groups)) {
            throw std::invalid_argument("shot plan references unknown group " +
                                        std::to_string(alloc.group_index));
        }
        if (alloc.shots < 1) {
            throw std::invalid_argument("group " + std::to_string(alloc.group_index) +
                                        " has no shots allocated; cannot estimate it");
        }
        covered[static_cast<std::size_t>(alloc.group_index)] = true;
    }
    for (std::size_t g = 0; g < n_groups; ++g) {
        if (!covered[g]) {
            throw std::invalid_argument("shot plan does not cover group " + std::to_string(g));
        }
    }
}

}  // namespace

std::vector<MeasurementGroup> group_terms(const Observable& obs, GroupingStrategy strategy) {
    const int n = obs.n_qubits();
    std::vector<MeasurementGroup> groups;
    if (strategy == GroupingStrategy::OnePerTerm) {
        for (const auto& term : obs.terms()) {
            groups.push_back(MeasurementGroup{{term}, basis_of({term}, n)});
        }
        return groups;
    }
    // First fit in descending |coefficient|; stable so equal weights keep
    // their input order.
    std::vector<PauliTerm> ordered = obs.terms();
    std::stable_sort(ordered.begin(), ordered.end(), [](const PauliTerm& a, const PauliTerm& b) {
        return std::abs(a.coefficient) > std::abs(b.coefficient);
    });
    std::vector<std::vector<PauliTerm>> buckets;
    for (const auto& term : ordered) {
        bool placed = false;
        for (auto& bucket : buckets) {
            const bool compatible =
                std::all_of(bucket.begin(), bucket.end(), [&](const PauliTerm& member) {
                    return qubitwise_commutes(member.string, term.string);
                });
            if (compatible) {
                bucket.push_back(term);
                placed = true;
                break;
            }
        }
        if (!placed) buckets.push_back({term});
    }
    for (auto& bucket : buckets) {
        MeasurementGroup group{std::move(bucket), {}};
        group.basis = basis_of(group.terms, n);
        groups.push_back(std::move(group));
    }
    return groups;
}

Circuit basis_rotation_circuit(const MeasurementGroup& group, int n_qubits) {
    Circuit circuit(n_qubits);
    for (int q = 0; q < n_qubits; ++q) {
        switch (group.basis[static_cast<std::size_t>(q)]) {
            case PauliAxis::X:
                circuit.append(Gate::ry(q, -std::numbers::pi / 2.0));
                break;
            case PauliAxis::Y:
                circuit.append(Gate::rx(q, std::numbers::pi / 2.0));
                break;
            default:
                break;
        }
    }
    return circuit;
}

double group_energy(const MeasurementGroup& group, std::uint64_t index) {
    double energy = 0.0;
    for (const auto& term : group.terms) {
        const double sign = (std::popcount(index & support_mask(term.string)) & 1) ? -1.0 : 1.0;
        energy += term.coefficient * sign;
    }
    return energy;
}

GroupEstimate estimate_from_counts(const MeasurementGroup& group, const SampleCounts& counts) {
    if (counts.counts.empty()) throw std::invalid_argument("empty sample counts");
    const int n = group.n_qubits();
    std::vector<std::uint64_t> indices;
    std::vector<double> weights;
    for (const auto& [bits, count] : counts.counts) {
        if (static_cast<int>(bits.size()) != n) {
            throw std::invalid_argument("count bitstring '" + bits + "' does not have " +
                                        std::to_string(n) + " bits");
        }
        indices.push_back(bitstring_to_index(bits));
        weights.push_back(static_cast<double>(count));
    }
    return estimate_weighted(group, indices, weights, static_cast<double>(counts.shots),
                             counts.shots);
}

GroupEstimate estimate_from_probabilities(const MeasurementGroup& group,
                                          std::span<const double> probabilities) {
    std::vector<std::uint64_t> indices(probabilities.size());
    std::iota(indices.begin(), indices.end(), std::uint64_t{0});
    GroupEstimate est = estimate_weighted(group, indices, probabilities, 1.0, 0);
    return est;
}

ShotPlan allocate_shots(const std::vector<MeasurementGroup>& groups, long long budget,
                        AllocationStrategy strategy) {
    const auto n_groups = static_cast<long long>(groups.size());
    if (n_groups == 0) throw std::invalid_argument("no groups to allocate shots to");
    if (budget < n_groups) {
        throw std::invalid_argument("budget " + std::to_string(budget) +
                                    " is smaller than the group count " +
                                    std::to_string(n_groups));
    }
    ShotPlan plan;
    plan.total_budget = budget;
    if (strategy == AllocationStrategy::Uniform) {
        const long long base = budget / n_groups;
        const long long remainder = budget % n_groups;
        for (long long g = 0; g < n_groups; ++g) {
            plan.allocations.push_back({static_cast<int>(g), base + (g < remainder ? 1 : 0)});
        }
        return plan;
    }
    std::vector<double> weights;
    weights.reserve(groups.size());
    for (const auto& group : groups) {
        double norm = 0.0;
        for (const auto& term : group.terms) norm += std::abs(term.coefficient);
        weights.push_back(norm);
    }
    if (std::accumulate(weights.begin(), weights.end(), 0.0) <= 0.0) {
        weights.assign(weights.size(), 1.0);
    }
    const auto shots = largest_remainder_split(weights, budget);
    for (long long g = 0; g < n_groups; ++g) {
        plan.allocations.push_back({static_cast<int>(g), shots[static_cast<std::size_t>(g)]});
    }
    return plan;
}

EnergyEstimate estimate_observable(const Circuit& circuit, const Observable& obs,
                                   const ShotPlan& plan,
                                   const std::vector<MeasurementGroup>& groups,
                                   std::uint64_t seed, const std::optional<NoiseModel>& noise) {
    check_plan(plan, groups.size());
    EnergyEstimate estimate;
    estimate.value = obs.constant();
    double variance_of_value = 0.0;
    for (const auto& alloc : plan.allocations) {
        const auto& group = groups[static_cast<std::size_t>(alloc.group_index)];
        Circuit measured = circuit;
        measured.extend(basis_rotation_circuit(group, circuit.n_qubits));
        const std::uint64_t group_seed = seed + static_cast<std::uint64_t>(alloc.group_index);
        StateVector state = noise ? run_noisy(measured, *noise, derive_seed(group_seed, 0))
                                  : run(measured);
        const SampleCounts counts = sample(state, alloc.shots, noise, derive_seed(group_seed, 1));
        const GroupEstimate group_estimate = estimate_from_counts(group, counts);
        estimate.value += group_estimate.contribution;
        variance_of_value += group_estimate.variance / static_cast<double>(alloc.shots);
        estimate.per_group.push_back(
            {alloc.group_index, group_estimate.contribution, alloc.shots});
    }
    estimate.std_error = std::sqrt(variance_of_value);
    return estimate;
}

EnergyEstimate estimate_observable_exact(const Circuit& circuit, const Observable& obs,
                                         const std::vector<MeasurementGroup>& groups) {
    EnergyEstimate estimate;
    estimate.value = obs.constant();
    estimate.std_error = 0.0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        Circuit measured = circuit;
        measured.extend(basis_rotation_circuit(groups[g], circuit.n_qubits));
        const StateVector state = run(measured);
        const std::vector<double> probs = state.probabilities();
        const GroupEstimate group_estimate = estimate_from_probabilities(groups[g], probs);
        estimate.value += group_estimate.contribution;
        estimate.per_group.push_back({static_cast<int>(g), group_estimate.contribution, 0});
    }
    return estimate;
}

std::vector<EnergySample> group_energy_samples(const MeasurementGroup& group,
                                               const SampleCounts& counts) {
    std::vector<EnergySample> samples;
    samples.reserve(counts.counts.size());
    for (const auto& [bits, count] : counts.counts) {
        samples.push_back({bits, group_energy(group, bitstring_to_index(bits)), count});
    }
    return samples;
}

double shots_required(double k, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    return k / (epsilon * epsilon);
}

ThreeStageSchedule three_stage_plan(long long total_evaluations,
                                    std::array<long long, 3> shots_per_stage,
                                    std::array<long long, 3> ratio) {
    const long long ratio_sum = ratio[0] + ratio[1] + ratio[2];
    if (ratio_sum <= 0 || ratio[0] <= 0 || ratio[1] <= 0 || ratio[2] <= 0) {
        throw std::invalid_argument("stage ratio entries must be positive");
    }
    if (total_evaluations < ratio_sum) {
        throw std::invalid_argument("need at least " + std::to_string(ratio_sum) +
                                    " evaluations for the stage ratio, got " +
                                    std::to_string(total_evaluations));
    }
    const std::vector<double> weights{static_cast<double>(ratio[0]),
                                      static_cast<double>(ratio[1]),
                                      static_cast<double>(ratio[2])};
    const auto evaluations = largest_remainder_split(weights, total_evaluations);
    ThreeStageSchedule schedule;
    schedule.total_evaluations = total_evaluations;
    for (std::size_t s = 0; s < 3; ++s) {
        if (evaluations[s] < 1) {
            throw std::invalid_argument("evaluation budget too small to give stage " +
                                        std::to_string(s + 1) + " at least one evaluation");
        }
        schedule.stages[s] = {shots_per_stage[s],
                              static_cast<double>(ratio[s]) / static_cast<double>(ratio_sum),
                              evaluations[s]};
    }
    return schedule;
}

std::vector<long long> largest_remainder_split(std::span<const double> weights, long long budget) {
    const double total_weight = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(total_weight > 0.0)) throw std::invalid_argument("weights must sum to a positive value");
    std::vector<long long> shares(weights.size(), 0);
    std::vector<std::pair<double, std::size_t>> remainders;
    long long assigned = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double exact = static_cast<double>(budget) * weights[i] / total_weight;
        shares[i] = static_cast<long long>(std::floor(exact));
        assigned += shares[i];
        remainders.emplace_back(exact - std::floor(exact), i);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (long long left = budget - assigned; left > 0; --left) {
        shares[remainders[static_cast<std::size_t>(budget - assigned - left)].second] += 1;
    }
    return shares;
}

}  // namespace varqlab
