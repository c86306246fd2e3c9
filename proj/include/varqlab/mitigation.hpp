#pragma once

#include <cstdint>
#include <vector>

#include "varqlab/pauli.hpp"
#include "varqlab/simulator.hpp"

namespace varqlab {

enum class ZneFit { Linear, Quadratic };

struct ZneConfig {
    std::vector<int> scales = {1, 3, 5};  // odd, ascending, distinct
    ZneFit fit = ZneFit::Linear;
    long long trajectories = 200;       // noisy repetitions per scale
    long long shots_per_trajectory = 0; // 0 = exact expectation per trajectory

    void validate() const;
};

/// Every gate G becomes G (G^-1 G)^((scale-1)/2); the noiseless unitary is
/// unchanged while the gate count grows by the scale factor.
Circuit fold_circuit(const Circuit& circuit, int scale);

struct ZneResult {
    struct PerScale {
        int scale = 0;
        double mean = 0.0;
        double std_dev = 0.0;
    };
    std::vector<PerScale> per_scale;
    double extrapolated = 0.0;  // polynomial fit evaluated at scale 0
    double raw = 0.0;           // the scale-1 mean, for comparison
};

/// Zero-noise extrapolation: average the observable over noisy trajectories
/// of each folded circuit, fit mean vs scale, report the fit at zero.
/// Readout error is not scaled; folding amplifies gate noise only.
ZneResult zne_estimate(const Circuit& circuit, const Observable& obs, const NoiseModel& noise,
                       const ZneConfig& config, std::uint64_t seed);

/// Least-squares polynomial fit evaluated at x = 0.
double extrapolate_to_zero(const std::vector<double>& xs, const std::vector<double>& ys,
                           int degree);

}  // namespace varqlab
