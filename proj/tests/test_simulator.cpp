#include <doctest.h>

#include <cmath>
#include <numbers>

#include "test_support.hpp"
#include "varqlab/bits.hpp"
#include "varqlab/kernels.hpp"
#include "varqlab/oracle.hpp"
#include "varqlab/pauli.hpp"
#include "varqlab/simulator.hpp"

using namespace varqlab;
using varqlab::testing::Matrix;
using varqlab::testing::Vector;
using cxd = std::complex<double>;

namespace {

// 0.001-significance chi-square critical values for the dof we use.
double chi_square_critical(int dof) {
    switch (dof) {
        case 3: return 16.266;
        case 7: return 24.322;
        case 15: return 37.697;
        default: REQUIRE(false); return 0.0;
    }
}

Gate random_gate(Rng& rng, int n_qubits) {
    const auto kind = static_cast<GateKind>(rand_index(rng, 11));
    const double angle = 2.0 * std::numbers::pi * rand_u01(rng) - std::numbers::pi;
    const int a = static_cast<int>(rand_index(rng, static_cast<std::uint64_t>(n_qubits)));
    if (!gate_kind_is_two_qubit(kind)) return Gate{kind, {a, -1}, angle};
    int b = a;
    while (b == a) b = static_cast<int>(rand_index(rng, static_cast<std::uint64_t>(n_qubits)));
    return Gate{kind, {a, b}, angle};
}

}  // namespace

TEST_CASE("half-angle RY flips |0> to |1> at pi") {
    StateVector state(1);
    apply_gate(state, Gate::ry(0, std::numbers::pi));
    CHECK(std::abs(state.amplitudes[0]) < 1e-15);
    CHECK(std::abs(state.amplitudes[1] - cxd{1.0, 0.0}) < 1e-15);
}

TEST_CASE("H creates the equal superposition") {
    StateVector state(1);
    apply_gate(state, Gate::h(0));
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    CHECK(std::abs(state.amplitudes[0] - inv_sqrt2) < 1e-15);
    CHECK(std::abs(state.amplitudes[1] - inv_sqrt2) < 1e-15);
}

TEST_CASE("RY(-pi/2) rotates |+> onto |0> up to sign") {
    StateVector state(1);
    apply_gate(state, Gate::h(0));
    apply_gate(state, Gate::ry(0, -std::numbers::pi / 2.0));
    CHECK(std::abs(state.amplitudes[0]) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(state.amplitudes[1]) < 1e-12);
}

TEST_CASE("every gate kind matches its dense reference matrix") {
    Rng rng(505);
    for (int trial = 0; trial < 120; ++trial) {
        const int n = 2 + static_cast<int>(rand_index(rng, 2));
        const Gate gate = random_gate(rng, n);
        const auto amps = varqlab::testing::random_state(rng, n);
        StateVector state(n, amps);
        apply_gate(state, gate);
        const Vector expected =
            varqlab::testing::embed_gate(gate, n) * varqlab::testing::to_eigen(amps);
        for (std::size_t k = 0; k < state.dim(); ++k) {
            REQUIRE(std::abs(state.amplitudes[k] - expected(static_cast<Eigen::Index>(k))) <
                    1e-12);
        }
    }
}

TEST_CASE("apply_gate validates targets") {
    StateVector state(2);
    CHECK_THROWS_AS(apply_gate(state, Gate::ry(2, 0.1)), std::invalid_argument);
    Circuit circuit(2);
    CHECK_THROWS_AS(circuit.append(Gate::cnot(1, 1)), std::invalid_argument);
    CHECK_THROWS_AS(circuit.append(Gate::h(5)), std::invalid_argument);
}

TEST_CASE("run basics") {
    SUBCASE("empty circuit returns the initial state") {
        Circuit circuit(2);
        StateVector initial(2);
        apply_gate(initial, Gate::ry(0, 0.7));
        const StateVector out = run(circuit, initial);
        for (std::size_t k = 0; k < out.dim(); ++k) {
            CHECK(out.amplitudes[k] == initial.amplitudes[k]);
        }
    }
    SUBCASE("three hadamards give uniform 1/sqrt(8) amplitudes") {
        Circuit circuit(3);
        for (int q = 0; q < 3; ++q) circuit.append(Gate::h(q));
        const StateVector out = run(circuit);
        for (const auto& amp : out.amplitudes) {
            CHECK(std::abs(amp - cxd{1.0 / std::sqrt(8.0), 0.0}) < 1e-14);
        }
    }
    SUBCASE("RY(0) leaves |0>") {
        Circuit circuit(1);
        circuit.append(Gate::ry(0, 0.0));
        const StateVector out = run(circuit);
        CHECK(out.amplitudes[0] == cxd{1.0, 0.0});
    }
}

TEST_CASE("norm is preserved over long random circuits") {
    Rng rng(606);
    for (int trial = 0; trial < 5; ++trial) {
        const int n = 2 + static_cast<int>(rand_index(rng, 5));
        Circuit circuit(n);
        for (int g = 0; g < 200; ++g) circuit.append(random_gate(rng, n));
        const StateVector out = run(circuit);
        REQUIRE(std::abs(out.norm() - 1.0) < 1e-10);
    }
}

TEST_CASE("noisy run with zero noise equals the clean run") {
    Rng rng(707);
    Circuit circuit(2);
    for (int g = 0; g < 20; ++g) circuit.append(random_gate(rng, 2));
    const StateVector clean = run(circuit);
    const StateVector noisy = run_noisy(circuit, NoiseModel::ideal(), 99);
    for (std::size_t k = 0; k < clean.dim(); ++k) {
        CHECK(clean.amplitudes[k] == noisy.amplitudes[k]);
    }
}

TEST_CASE("p1=1 forces a fault after every single-qubit gate") {
    Circuit circuit(1);
    circuit.append(Gate::x(0));
    NoiseModel noise = NoiseModel::ideal();
    noise.p1 = 1.0;
    Observable z(1);
    z.add_term(1.0, PauliString::parse("Z0", 1));
    int flipped = 0;
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const StateVector state = run_noisy(circuit, noise, seed);
        const double expectation = exact_expectation(z, state.amps());
        // The fault Pauli either flips the qubit back (X or Y) or leaves it (Z).
        REQUIRE(std::abs(std::abs(expectation) - 1.0) < 1e-12);
        if (expectation > 0.0) ++flipped;
    }
    CHECK(flipped > 20);  // expect about two thirds
    CHECK(flipped < 60);
}

TEST_CASE("trajectory average matches the density-matrix oracle") {
    Circuit circuit(1);
    for (int k = 0; k < 4; ++k) circuit.append(Gate::x(0));
    NoiseModel noise = NoiseModel::ideal();
    noise.p1 = 0.1;
    Observable z(1);
    z.add_term(1.0, PauliString::parse("Z0", 1));

    const double expected = oracle::z_expectation(oracle::density_1q_depolarized(circuit, 0.1));
    constexpr int kTrajectories = 20000;
    double sum = 0.0;
    for (int t = 0; t < kTrajectories; ++t) {
        const StateVector state = run_noisy(circuit, noise, derive_seed(31337, t));
        sum += exact_expectation(z, state.amps());
    }
    const double mean = sum / kTrajectories;
    // Per-trajectory values are +-1, so the standard error is at most 1/sqrt(N).
    const double four_sigma = 4.0 / std::sqrt(static_cast<double>(kTrajectories));
    CHECK(std::abs(mean - expected) < four_sigma);
}

TEST_CASE("sampling a deterministic state") {
    StateVector state(1);
    apply_gate(state, Gate::x(0));
    const SampleCounts counts = sample(state, 100, std::nullopt, 5);
    REQUIRE(counts.counts.size() == 1);
    CHECK(counts.counts.at("1") == 100);
    CHECK_THROWS_AS(sample(state, 0, std::nullopt, 5), std::invalid_argument);
}

TEST_CASE("sampling frequencies follow the amplitudes") {
    Circuit circuit(2);
    circuit.append(Gate::ry(0, std::numbers::pi / 3.0));
    const StateVector state = run(circuit);
    const SampleCounts counts = sample(state, 100000, std::nullopt, 11);
    const double freq = static_cast<double>(counts.counts.at("10")) / 100000.0;
    const double sigma = std::sqrt(0.25 * 0.75 / 100000.0);
    CHECK(std::abs(freq - 0.25) < 3.0 * sigma);
}

TEST_CASE("readout error flips bits at the configured rate") {
    StateVector state(1);  // |0>
    NoiseModel noise = NoiseModel::ideal();
    noise.readout_flip0 = 0.038;
    const SampleCounts counts = sample(state, 100000, noise, 13);
    const double freq = static_cast<double>(counts.counts.at("1")) / 100000.0;
    const double sigma = std::sqrt(0.038 * 0.962 / 100000.0);
    CHECK(std::abs(freq - 0.038) < 3.0 * sigma);
}

TEST_CASE("sampling is deterministic for a fixed seed") {
    Circuit circuit(3);
    for (int q = 0; q < 3; ++q) circuit.append(Gate::h(q));
    circuit.append(Gate::cnot(0, 1));
    const StateVector state = run(circuit);
    const SampleCounts a = sample(state, 5000, std::nullopt, 12345);
    const SampleCounts b = sample(state, 5000, std::nullopt, 12345);
    CHECK(a.counts == b.counts);
    const SampleCounts c = sample(state, 5000, std::nullopt, 54321);
    CHECK(a.counts != c.counts);
}

TEST_CASE("chi-square goodness of fit on a fixed-seed corpus") {
    struct Case {
        Circuit circuit;
        std::uint64_t seed;
    };
    std::vector<Case> corpus;
    {
        Circuit uniform2(2);
        uniform2.append(Gate::h(0));
        uniform2.append(Gate::h(1));
        corpus.push_back({uniform2, 21});
        Circuit skewed2(2);
        skewed2.append(Gate::ry(0, 1.234));
        skewed2.append(Gate::ry(1, 2.345));
        corpus.push_back({skewed2, 22});
        Circuit entangled3(3);
        entangled3.append(Gate::h(0));
        entangled3.append(Gate::cnot(0, 1));
        entangled3.append(Gate::ry(2, 0.789));
        entangled3.append(Gate::h(2));
        corpus.push_back({entangled3, 23});
    }
    for (const auto& test_case : corpus) {
        const StateVector state = run(test_case.circuit);
        const long long shots = 20000;
        const SampleCounts counts = sample(state, shots, std::nullopt, test_case.seed);
        const auto probs = state.probabilities();
        double statistic = 0.0;
        int dof = -1;
        for (std::size_t b = 0; b < probs.size(); ++b) {
            const double expected = probs[b] * static_cast<double>(shots);
            if (expected < 1e-9) continue;
            const std::string bits = index_to_bitstring(b, state.n_qubits);
            const auto it = counts.counts.find(bits);
            const double observed = it == counts.counts.end() ? 0.0 : double(it->second);
            statistic += (observed - expected) * (observed - expected) / expected;
            ++dof;
        }
        REQUIRE(statistic < chi_square_critical(dof));
    }
}

TEST_CASE("parallel kernels agree with their serial references") {
    Rng rng(4242);
    const int n = 16;
    const std::size_t dim = std::size_t{1} << n;
    auto reference = varqlab::testing::random_state(rng, n);
    auto parallel = reference;

    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    const cxd h_matrix[4] = {inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2};
    const cxd phases[4] = {std::exp(cxd{0, -0.2}), std::exp(cxd{0, 0.2}), std::exp(cxd{0, 0.2}),
                           std::exp(cxd{0, -0.2})};
    for (int q = 0; q < n; ++q) {
        kernels::apply_1q_serial(reference.data(), dim, qubit_mask(q, n), h_matrix);
        kernels::apply_1q_parallel(parallel.data(), dim, qubit_mask(q, n), h_matrix);
    }
    for (int q = 0; q + 1 < n; ++q) {
        kernels::apply_cnot_serial(reference.data(), dim, qubit_mask(q, n), qubit_mask(q + 1, n));
        kernels::apply_cnot_parallel(parallel.data(), dim, qubit_mask(q, n),
                                     qubit_mask(q + 1, n));
        kernels::apply_diag2_serial(reference.data(), dim, qubit_mask(q, n),
                                    qubit_mask(q + 1, n), phases);
        kernels::apply_diag2_parallel(parallel.data(), dim, qubit_mask(q, n),
                                      qubit_mask(q + 1, n), phases);
    }
    // Elementwise updates are identical work per amplitude: bit-exact match.
    for (std::size_t b = 0; b < dim; ++b) {
        REQUIRE(reference[b] == parallel[b]);
    }
    const double serial_norm = kernels::norm_squared_serial(reference.data(), dim);
    const double parallel_norm = kernels::norm_squared_parallel(parallel.data(), dim);
    CHECK(std::abs(serial_norm - parallel_norm) < 1e-13);
}

TEST_CASE("circuit dump format") {
    Circuit circuit(2);
    circuit.append(Gate::ry(0, 1.5708));
    circuit.append(Gate::cnot(0, 1));
    CHECK(circuit.gates[0].to_string() == "RY(1.5708) q0");
    CHECK(circuit.gates[1].to_string() == "CNOT q0 q1");
}
