#include "varqlab/mitigation.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "varqlab/bits.hpp"
#include "varqlab/rng.hpp"

namespace varqlab {

void ZneConfig::validate() const {
    if (scales.size() < 2) throw std::invalid_argument("zne needs at least two noise scales");
    for (std::size_t i = 0; i < scales.size(); ++i) {
        if (scales[i] < 1 || scales[i] % 2 == 0) {
            throw std::invalid_argument("noise scales must be odd and >= 1");
        }
        if (i > 0 && scales[i] <= scales[i - 1]) {
            throw std::invalid_argument("noise scales must be distinct and ascending");
        }
    }
    if (trajectories < 1) throw std::invalid_argument("zne needs at least one trajectory");
    if (shots_per_trajectory < 0) throw std::invalid_argument("shots must be >= 0");
    const int degree = fit == ZneFit::Linear ? 1 : 2;
    if (static_cast<int>(scales.size()) < degree + 1) {
        throw std::invalid_argument("zne needs at least fit degree + 1 scales");
    }
}

Circuit fold_circuit(const Circuit& circuit, int scale) {
    if (scale < 1 || scale % 2 == 0) {
        throw std::invalid_argument("fold scale must be an odd positive integer");
    }
    Circuit folded(circuit.n_qubits);
    const int repeats = (scale - 1) / 2;
    for (const auto& gate : circuit.gates) {
        folded.append(gate);
        for (int r = 0; r < repeats; ++r) {
            folded.append(gate.inverse());
            folded.append(gate);
        }
    }
    return folded;
}

double extrapolate_to_zero(const std::vector<double>& xs, const std::vector<double>& ys,
                           int degree) {
    if (xs.size() != ys.size() || static_cast<int>(xs.size()) < degree + 1) {
        throw std::invalid_argument("polynomial fit needs at least degree + 1 points");
    }
    Eigen::MatrixXd vandermonde(xs.size(), degree + 1);
    Eigen::VectorXd rhs(xs.size());
    for (std::size_t r = 0; r < xs.size(); ++r) {
        double power = 1.0;
        for (int c = 0; c <= degree; ++c) {
            vandermonde(static_cast<Eigen::Index>(r), c) = power;
            power *= xs[r];
        }
        rhs(static_cast<Eigen::Index>(r)) = ys[r];
    }
    const Eigen::VectorXd coeffs = vandermonde.colPivHouseholderQr().solve(rhs);
    return coeffs(0);
}

ZneResult zne_estimate(const Circuit& circuit, const Observable& obs, const NoiseModel& noise,
                       const ZneConfig& config, std::uint64_t seed) {
    config.validate();
    noise.validate();
    if (obs.n_qubits() != circuit.n_qubits) {
        throw std::invalid_argument("observable and circuit qubit counts differ");
    }
    const bool sampled = config.shots_per_trajectory > 0;
    if (sampled && !obs.is_diagonal()) {
        throw std::invalid_argument(
            "sampled zne estimation supports diagonal observables; use exact trajectories");
    }
    const std::optional<DiagonalEvaluator> evaluator =
        sampled ? std::optional<DiagonalEvaluator>(obs) : std::nullopt;

    ZneResult result;
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t si = 0; si < config.scales.size(); ++si) {
        const int scale = config.scales[si];
        const Circuit folded = fold_circuit(circuit, scale);
        const std::uint64_t scale_seed = derive_seed(seed, si);
        double sum = 0.0;
        double sum_sq = 0.0;
        for (long long t = 0; t < config.trajectories; ++t) {
            const std::uint64_t trajectory_seed =
                derive_seed(scale_seed, static_cast<std::uint64_t>(t));
            const StateVector state = run_noisy(folded, noise, trajectory_seed);
            double value;
            if (!sampled) {
                value = exact_expectation(obs, state.amps());
            } else {
                const SampleCounts counts = sample(state, config.shots_per_trajectory, noise,
                                                   derive_seed(trajectory_seed, 1));
                double energy = 0.0;
                for (const auto& [bits, count] : counts.counts) {
                    energy +=
                        static_cast<double>(count) * evaluator->eval(bitstring_to_index(bits));
                }
                value = energy / static_cast<double>(counts.shots);
            }
            sum += value;
            sum_sq += value * value;
        }
        const double n = static_cast<double>(config.trajectories);
        const double mean = sum / n;
        const double variance =
            config.trajectories > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) : 0.0;
        result.per_scale.push_back({scale, mean, std::sqrt(variance)});
        xs.push_back(static_cast<double>(scale));
        ys.push_back(mean);
    }
    result.raw = result.per_scale.front().mean;
    result.extrapolated = extrapolate_to_zero(xs, ys, config.fit == ZneFit::Linear ? 1 : 2);
    return result;
}

}  // namespace varqlab
