#include <doctest.h>

#include <cmath>
#include <numbers>

#include "test_support.hpp"
#include "varqlab/mitigation.hpp"
#include "varqlab/oracle.hpp"
#include "varqlab/pauli.hpp"

using namespace varqlab;

namespace {

Circuit x_circuit() {
    Circuit circuit(1);
    circuit.append(Gate::x(0));
    return circuit;
}

Observable z_observable() {
    Observable z(1);
    z.add_term(1.0, PauliString::parse("Z0", 1));
    return z;
}

Circuit random_circuit(Rng& rng, int n, int gates) {
    Circuit circuit(n);
    for (int g = 0; g < gates; ++g) {
        const int q = static_cast<int>(rand_index(rng, static_cast<std::uint64_t>(n)));
        switch (rand_index(rng, 4)) {
            case 0: circuit.append(Gate::h(q)); break;
            case 1: circuit.append(Gate::ry(q, 2.0 * rand_u01(rng))); break;
            case 2: circuit.append(Gate::rz(q, 2.0 * rand_u01(rng))); break;
            default:
                if (n > 1) {
                    int r = q;
                    while (r == q) {
                        r = static_cast<int>(rand_index(rng, static_cast<std::uint64_t>(n)));
                    }
                    circuit.append(Gate::cnot(q, r));
                } else {
                    circuit.append(Gate::x(q));
                }
        }
    }
    return circuit;
}

}  // namespace

TEST_CASE("folding at scale 1 is the identity transformation") {
    Rng rng(2424);
    const Circuit circuit = random_circuit(rng, 2, 10);
    const Circuit folded = fold_circuit(circuit, 1);
    REQUIRE(folded.gates.size() == circuit.gates.size());
}

TEST_CASE("folding multiplies the gate count by the scale") {
    Rng rng(2525);
    const Circuit circuit = random_circuit(rng, 2, 4);
    CHECK(fold_circuit(circuit, 3).gates.size() == 12);
    CHECK(fold_circuit(circuit, 5).gates.size() == 20);
    CHECK_THROWS_AS(fold_circuit(circuit, 2), std::invalid_argument);
    CHECK_THROWS_AS(fold_circuit(circuit, 0), std::invalid_argument);
}

TEST_CASE("folded circuits preserve the noiseless state") {
    Rng rng(2626);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 1 + static_cast<int>(rand_index(rng, 4));
        const Circuit circuit = random_circuit(rng, n, 12);
        const StateVector original = run(circuit);
        for (int scale : {3, 5}) {
            const StateVector folded = run(fold_circuit(circuit, scale));
            REQUIRE(varqlab::testing::overlap_up_to_phase(original.amplitudes,
                                                          folded.amplitudes) >= 1.0 - 1e-10);
        }
    }
}

TEST_CASE("noiseless extrapolation reproduces the exact expectation") {
    Rng rng(2727);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + static_cast<int>(rand_index(rng, 4));
        const Circuit circuit = random_circuit(rng, n, 8);
        const Observable obs = simplify(varqlab::testing::random_observable(rng, n, 4));
        ZneConfig config;
        config.trajectories = 1;
        const ZneResult result =
            zne_estimate(circuit, obs, NoiseModel::ideal(), config, 17);
        const double exact = exact_expectation(obs, run(circuit).amps());
        REQUIRE(std::abs(result.extrapolated - exact) < 1e-9);
    }
}

TEST_CASE("constant observables extrapolate to the constant") {
    Observable constant(1);
    constant.add_constant(2.5);
    ZneConfig config;
    config.trajectories = 20;
    const ZneResult result = zne_estimate(x_circuit(), constant, NoiseModel{}, config, 3);
    CHECK(result.extrapolated == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("per-scale true means degrade monotonically toward zero") {
    // Density-matrix oracle on the folded [X] circuit.
    const double p1 = 0.05;
    double previous = -1.0;
    for (int scale : {1, 3, 5, 7}) {
        const Circuit folded = fold_circuit(x_circuit(), scale);
        const double mean =
            oracle::z_expectation(oracle::density_1q_depolarized(folded, p1));
        CHECK(mean < 0.0);
        CHECK(mean > previous);  // moving up toward zero
        previous = mean;
    }
}

TEST_CASE("trajectory means track the density oracle per scale") {
    NoiseModel noise = NoiseModel::ideal();
    noise.p1 = 0.05;
    ZneConfig config;
    config.trajectories = 4000;
    const ZneResult result = zne_estimate(x_circuit(), z_observable(), noise, config, 29);
    for (const auto& per_scale : result.per_scale) {
        const Circuit folded = fold_circuit(x_circuit(), per_scale.scale);
        const double expected =
            oracle::z_expectation(oracle::density_1q_depolarized(folded, noise.p1));
        const double sigma = 1.0 / std::sqrt(static_cast<double>(config.trajectories));
        REQUIRE(std::abs(per_scale.mean - expected) < 4.0 * sigma);
    }
}

TEST_CASE("sampled zne estimates diagonal observables") {
    NoiseModel noise = NoiseModel::ideal();
    noise.p1 = 0.01;
    ZneConfig config;
    config.trajectories = 50;
    config.shots_per_trajectory = 200;
    const ZneResult result = zne_estimate(x_circuit(), z_observable(), noise, config, 5);
    CHECK(std::isfinite(result.extrapolated));
    CHECK(result.raw < 0.0);

    Observable x_obs(1);
    x_obs.add_term(1.0, PauliString::parse("X0", 1));
    CHECK_THROWS_AS(zne_estimate(x_circuit(), x_obs, noise, config, 5), std::invalid_argument);
}

TEST_CASE("zne config validation") {
    ZneConfig config;
    config.scales = {1};
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config.scales = {1, 2};
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config.scales = {3, 1};
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config.scales = {1, 3};
    config.fit = ZneFit::Quadratic;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);  // needs 3 points
    config.scales = {1, 3, 5};
    config.validate();
}

TEST_CASE("quadratic fits recover quadratic data") {
    const std::vector<double> xs{1.0, 3.0, 5.0};
    const std::vector<double> ys{1.0 + 2.0 + 3.0, 1.0 + 6.0 + 27.0, 1.0 + 10.0 + 75.0};
    // y = 1 + 2x + 3x^2
    CHECK(extrapolate_to_zero(xs, ys, 2) == doctest::Approx(1.0).epsilon(1e-9));
}
