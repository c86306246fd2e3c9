#include "varqlab/vqe.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <stdexcept>

#include "varqlab/rng.hpp"
#include "varqlab/threading.hpp"

namespace varqlab {

namespace {

double diagonal_minimum(const Observable& obs) {
    const DiagonalEvaluator evaluator(obs);
    const std::uint64_t dim = std::uint64_t{1} << obs.n_qubits();
    const std::uint64_t n_chunks = std::min<std::uint64_t>(256, dim);
    const std::uint64_t chunk = dim / n_chunks;
    std::vector<double> chunk_min(n_chunks);
    const auto body = [&](std::uint64_t c) {
        const std::uint64_t begin = c * chunk;
        const std::uint64_t end = (c + 1 == n_chunks) ? dim : begin + chunk;
        double best = evaluator.eval(begin);
        for (std::uint64_t b = begin + 1; b < end; ++b) {
            best = std::min(best, evaluator.eval(b));
        }
        chunk_min[c] = best;
    };
    if (use_parallel(dim)) {
#ifdef _OPENMP
#pragma omp parallel for num_threads(thread_count()) schedule(static)
#endif
        for (std::uint64_t c = 0; c < n_chunks; ++c) body(c);
    } else {
        for (std::uint64_t c = 0; c < n_chunks; ++c) body(c);
    }
    double best = chunk_min[0];
    for (double m : chunk_min) best = std::min(best, m);
    return best;
}

}  // namespace

int AnsatzSpec::parameter_count() const {
    return kind == Kind::SingleRy ? 1 : 2 * n_qubits * layers;
}

void AnsatzSpec::validate() const {
    if (n_qubits < 1) throw std::invalid_argument("ansatz needs at least one qubit");
    if (kind == Kind::Layered && layers < 1) {
        throw std::invalid_argument("layered ansatz needs at least one layer");
    }
}

Circuit build_ansatz(const AnsatzSpec& spec, const ParameterVector& params) {
    spec.validate();
    if (static_cast<int>(params.size()) != spec.parameter_count()) {
        throw std::invalid_argument("ansatz expects " + std::to_string(spec.parameter_count()) +
                                    " parameters, got " + std::to_string(params.size()));
    }
    Circuit circuit(spec.n_qubits);
    if (spec.kind == AnsatzSpec::Kind::SingleRy) {
        circuit.append(Gate::ry(0, params[0]));
        return circuit;
    }
    const int n = spec.n_qubits;
    for (int layer = 0; layer < spec.layers; ++layer) {
        const std::size_t base = static_cast<std::size_t>(layer) * 2 * n;
        for (int q = 0; q < n; ++q) {
            circuit.append(Gate::ry(q, params[base + static_cast<std::size_t>(q)]));
        }
        for (int q = 0; q < n; ++q) {
            circuit.append(Gate::rz(q, params[base + static_cast<std::size_t>(n + q)]));
        }
        for (int q = 0; q + 1 < n; ++q) circuit.append(Gate::cnot(q, q + 1));
    }
    return circuit;
}

VqeResult run_vqe(const Observable& obs, const AnsatzSpec& ansatz, const OptimizerConfig& opt,
                  const EstimatorSpec& estimator, const ObjectiveSpec& objective,
                  const std::optional<ParameterVector>& initial_params) {
    ansatz.validate();
    objective.validate();
    if (obs.n_qubits() != ansatz.n_qubits) {
        throw std::invalid_argument("observable acts on " + std::to_string(obs.n_qubits()) +
                                    " qubits but the ansatz has " +
                                    std::to_string(ansatz.n_qubits));
    }
    if (estimator.exact && objective.kind != ObjectiveKind::Expectation) {
        throw std::invalid_argument(
            "cvar/gibbs objectives need per-shot energies; use a sampled estimator");
    }

    ObjectiveFunction f;
    OptimizerConfig config = opt;
    if (estimator.exact) {
        f = [&obs, &ansatz](const ParameterVector& params) {
            const StateVector state = run(build_ansatz(ansatz, params));
            return exact_expectation(obs, state.amps());
        };
    } else {
        if (estimator.shots_budget < 1) {
            throw std::invalid_argument("sampled estimator needs a positive shot budget");
        }
        const Observable reduced = simplify(obs);
        if (reduced.terms().empty()) {
            // Constant-only observables need no measurements at all.
            f = [reduced](const ParameterVector&) { return reduced.constant(); };
            const ParameterVector start = initial_params.value_or(
                ParameterVector(static_cast<std::size_t>(ansatz.parameter_count()), 0.0));
            VqeResult result;
            result.trace = optimize(f, start, config);
            result.best_energy = result.trace.best_value;
            result.best_params = result.trace.best_params;
            result.exact_ground = reduced.constant();
            result.gap_to_exact = 0.0;
            return result;
        }
        auto groups = std::make_shared<std::vector<MeasurementGroup>>(
            group_terms(reduced, estimator.grouping));
        auto plan = std::make_shared<ShotPlan>(
            allocate_shots(*groups, estimator.shots_budget, estimator.allocation));
        auto evaluation_counter = std::make_shared<std::uint64_t>(0);
        config.shots_per_evaluation = estimator.shots_budget;
        const ObjectiveSpec spec = objective;
        const EstimatorSpec est = estimator;
        f = [&obs, &ansatz, reduced, groups, plan, evaluation_counter, spec,
             est](const ParameterVector& params) {
            const Circuit circuit = build_ansatz(ansatz, params);
            const std::uint64_t eval_seed = derive_seed(est.seed, (*evaluation_counter)++);
            if (spec.kind == ObjectiveKind::Expectation) {
                return estimate_observable(circuit, reduced, *plan, *groups, eval_seed, est.noise)
                    .value;
            }
            // Risk objectives: apply the objective to each group's per-shot
            // energy samples, then sum; the constant shifts the total.
            double value = reduced.constant();
            for (const auto& alloc : plan->allocations) {
                const auto& group = (*groups)[static_cast<std::size_t>(alloc.group_index)];
                Circuit measured = circuit;
                measured.extend(basis_rotation_circuit(group, circuit.n_qubits));
                const std::uint64_t group_seed =
                    eval_seed + static_cast<std::uint64_t>(alloc.group_index);
                const StateVector state =
                    est.noise ? run_noisy(measured, *est.noise, derive_seed(group_seed, 0))
                              : run(measured);
                const SampleCounts counts =
                    sample(state, alloc.shots, est.noise, derive_seed(group_seed, 1));
                SampleSet samples;
                for (const auto& s : group_energy_samples(group, counts)) {
                    samples.entries.push_back(SampleSet::Entry{s.bitstring, s.energy, s.count});
                }
                value += evaluate_objective(samples, spec);
            }
            return value;
        };
    }

    const ParameterVector x0 = initial_params.value_or(
        ParameterVector(static_cast<std::size_t>(ansatz.parameter_count()), 0.0));
    if (static_cast<int>(x0.size()) != ansatz.parameter_count()) {
        throw std::invalid_argument("initial parameter count does not match the ansatz");
    }
    VqeResult result;
    result.trace = optimize(f, x0, config);
    result.best_energy = result.trace.best_value;
    result.best_params = result.trace.best_params;

    const bool ground_feasible =
        (obs.is_diagonal() && obs.n_qubits() <= 22) || obs.n_qubits() <= 10;
    if (ground_feasible) {
        result.exact_ground = exact_ground_energy(obs);
        result.gap_to_exact = result.best_energy - *result.exact_ground;
    }
    return result;
}

double exact_ground_energy(const Observable& obs) {
    if (obs.is_diagonal()) {
        if (obs.n_qubits() > 22) {
            throw std::invalid_argument("diagonal ground-energy scan supports at most 22 qubits");
        }
        return diagonal_minimum(obs);
    }
    return ground_energy_power_iteration(obs);
}

double ground_energy_power_iteration(const Observable& obs) {
    if (obs.n_qubits() > 10) {
        throw std::invalid_argument("power iteration supports at most 10 qubits");
    }
    const std::uint64_t dim = std::uint64_t{1} << obs.n_qubits();
    const double shift = obs.one_norm();

    // Deterministic start vector; a random direction has zero probability of
    // being orthogonal to the top eigenspace.
    Rng rng(0x5eedULL);
    std::vector<std::complex<double>> x(dim);
    double norm2 = 0.0;
    for (auto& entry : x) {
        entry = {rand_u01(rng) - 0.5, rand_u01(rng) - 0.5};
        norm2 += std::norm(entry);
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& entry : x) entry *= inv;

    double lambda_prev = 0.0;
    int stall = 0;
    for (long long iter = 0; iter < 200000; ++iter) {
        std::vector<std::complex<double>> hx = apply_observable(obs, x);
        double lambda = 0.0;
        double ynorm2 = 0.0;
        for (std::uint64_t b = 0; b < dim; ++b) {
            const std::complex<double> y = shift * x[b] - hx[b];
            lambda += (std::conj(x[b]) * y).real();
            hx[b] = y;  // reuse hx as y
            ynorm2 += std::norm(y);
        }
        if (ynorm2 < 1e-280) return shift;  // shift*I - H vanishes: H = shift*I
        const double scale = 1.0 / std::sqrt(ynorm2);
        for (auto& entry : hx) entry *= scale;
        x = std::move(hx);
        stall = (iter > 0 && std::abs(lambda - lambda_prev) < 1e-13) ? stall + 1 : 0;
        lambda_prev = lambda;
        if (stall >= 4) break;
    }
    return shift - lambda_prev;
}

}  // namespace varqlab
