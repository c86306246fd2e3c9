#include "varqlab/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "varqlab/bits.hpp"
#include "varqlab/kernels.hpp"
#include "varqlab/rng.hpp"

namespace varqlab {

namespace {

using cxd = std::complex<double>;
constexpr cxd kI{0.0, 1.0};

void gate_matrix_1q(const Gate& gate, cxd out[4]) {
    const double half = gate.angle / 2.0;
    switch (gate.kind) {
        case GateKind::H: {
            const double s = 1.0 / std::numbers::sqrt2;
            out[0] = s; out[1] = s; out[2] = s; out[3] = -s;
            return;
        }
        case GateKind::X: out[0] = 0; out[1] = 1; out[2] = 1; out[3] = 0; return;
        case GateKind::Y: out[0] = 0; out[1] = -kI; out[2] = kI; out[3] = 0; return;
        case GateKind::Z: out[0] = 1; out[1] = 0; out[2] = 0; out[3] = -1; return;
        case GateKind::RX:
            out[0] = std::cos(half); out[1] = -kI * std::sin(half);
            out[2] = -kI * std::sin(half); out[3] = std::cos(half);
            return;
        case GateKind::RY:
            out[0] = std::cos(half); out[1] = -std::sin(half);
            out[2] = std::sin(half); out[3] = std::cos(half);
            return;
        case GateKind::RZ:
            out[0] = std::exp(-kI * half); out[1] = 0;
            out[2] = 0; out[3] = std::exp(kI * half);
            return;
        case GateKind::Phase:
            out[0] = 1; out[1] = 0; out[2] = 0; out[3] = std::exp(kI * gate.angle);
            return;
        default:
            throw std::logic_error("not a single-qubit gate");
    }
}

void check_targets(const Circuit& circuit, const Gate& gate) {
    for (int k = 0; k < gate.n_targets(); ++k) {
        const int q = gate.targets[static_cast<std::size_t>(k)];
        if (q < 0 || q >= circuit.n_qubits) {
            throw std::invalid_argument("gate " + gate.to_string() + " targets qubit " +
                                        std::to_string(q) + " outside 0.." +
                                        std::to_string(circuit.n_qubits - 1));
        }
    }
    if (gate.is_two_qubit() && gate.targets[0] == gate.targets[1]) {
        throw std::invalid_argument("two-qubit gate needs distinct targets, got q" +
                                    std::to_string(gate.targets[0]) + " twice");
    }
}

void apply_fault(StateVector& state, Rng& rng, const Gate& gate) {
    static constexpr GateKind kPaulis[3] = {GateKind::X, GateKind::Y, GateKind::Z};
    if (gate.is_two_qubit()) {
        // Uniform over the 15 non-identity two-qubit Paulis: index 1..15 in
        // base-4 digits (I,X,Y,Z) over the two targets.
        const auto code = static_cast<int>(rand_index(rng, 15)) + 1;
        const int first = code / 4;
        const int second = code % 4;
        if (first != 0) {
            apply_gate(state, Gate{kPaulis[first - 1], {gate.targets[0], -1}, 0.0});
        }
        if (second != 0) {
            apply_gate(state, Gate{kPaulis[second - 1], {gate.targets[1], -1}, 0.0});
        }
    } else {
        const auto code = static_cast<int>(rand_index(rng, 3));
        apply_gate(state, Gate{kPaulis[code], {gate.targets[0], -1}, 0.0});
    }
}

}  // namespace

bool gate_kind_is_two_qubit(GateKind kind) {
    return kind == GateKind::CNOT || kind == GateKind::CZ || kind == GateKind::RZZ;
}

bool gate_kind_has_angle(GateKind kind) {
    switch (kind) {
        case GateKind::RX:
        case GateKind::RY:
        case GateKind::RZ:
        case GateKind::Phase:
        case GateKind::RZZ:
            return true;
        default:
            return false;
    }
}

std::string gate_kind_name(GateKind kind) {
    switch (kind) {
        case GateKind::H: return "H";
        case GateKind::X: return "X";
        case GateKind::Y: return "Y";
        case GateKind::Z: return "Z";
        case GateKind::RX: return "RX";
        case GateKind::RY: return "RY";
        case GateKind::RZ: return "RZ";
        case GateKind::Phase: return "PHASE";
        case GateKind::CNOT: return "CNOT";
        case GateKind::CZ: return "CZ";
        case GateKind::RZZ: return "RZZ";
    }
    return "?";
}

Gate Gate::inverse() const {
    Gate inv = *this;
    if (gate_kind_has_angle(kind)) inv.angle = -angle;
    return inv;  // H, X, Y, Z, CNOT, CZ are self-inverse
}

std::string Gate::to_string() const {
    std::ostringstream out;
    out << gate_kind_name(kind);
    if (gate_kind_has_angle(kind)) {
        out.precision(17);
        out << "(" << angle << ")";
    }
    out << " q" << targets[0];
    if (is_two_qubit()) out << " q" << targets[1];
    return out.str();
}

void Circuit::append(const Gate& gate) {
    check_targets(*this, gate);
    gates.push_back(gate);
}

void Circuit::extend(const Circuit& other) {
    if (other.n_qubits != n_qubits) {
        throw std::invalid_argument("cannot extend a circuit with a different qubit count");
    }
    for (const auto& gate : other.gates) append(gate);
}

StateVector::StateVector(int n) : n_qubits(n) {
    if (n <= 0 || n > 30) {
        throw std::invalid_argument("state vector supports 1..30 qubits, got " +
                                    std::to_string(n));
    }
    amplitudes.assign(std::size_t{1} << n, cxd{0.0, 0.0});
    amplitudes[0] = 1.0;
}

StateVector::StateVector(int n, std::vector<std::complex<double>> amps)
    : n_qubits(n), amplitudes(std::move(amps)) {
    if (amplitudes.size() != (std::size_t{1} << n)) {
        throw std::invalid_argument("amplitude count does not match qubit count");
    }
}

double StateVector::norm() const {
    return std::sqrt(kernels::norm_squared(amplitudes.data(), amplitudes.size()));
}

std::vector<double> StateVector::probabilities() const {
    std::vector<double> probs(amplitudes.size());
    for (std::size_t b = 0; b < amplitudes.size(); ++b) probs[b] = std::norm(amplitudes[b]);
    return probs;
}

bool NoiseModel::is_ideal() const {
    return p1 == 0.0 && p2 == 0.0 && readout_flip0 == 0.0 && readout_flip1 == 0.0;
}

void NoiseModel::validate() const {
    for (double p : {p1, p2, readout_flip0, readout_flip1}) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::invalid_argument("noise probabilities must lie in [0, 1]");
        }
    }
}

void apply_gate(StateVector& state, const Gate& gate) {
    const int n = state.n_qubits;
    for (int k = 0; k < gate.n_targets(); ++k) {
        const int q = gate.targets[static_cast<std::size_t>(k)];
        if (q < 0 || q >= n) {
            throw std::invalid_argument("gate " + gate.to_string() + " targets qubit " +
                                        std::to_string(q) + " outside 0.." + std::to_string(n - 1));
        }
    }
    cxd* amps = state.amplitudes.data();
    const std::size_t dim = state.dim();
    switch (gate.kind) {
        case GateKind::CNOT:
            kernels::apply_cnot(amps, dim, qubit_mask(gate.targets[0], n),
                                qubit_mask(gate.targets[1], n));
            return;
        case GateKind::CZ: {
            const cxd phases[4] = {1.0, 1.0, 1.0, -1.0};
            kernels::apply_diag2(amps, dim, qubit_mask(gate.targets[0], n),
                                 qubit_mask(gate.targets[1], n), phases);
            return;
        }
        case GateKind::RZZ: {
            const cxd lo = std::exp(-kI * (gate.angle / 2.0));
            const cxd hi = std::exp(kI * (gate.angle / 2.0));
            const cxd phases[4] = {lo, hi, hi, lo};
            kernels::apply_diag2(amps, dim, qubit_mask(gate.targets[0], n),
                                 qubit_mask(gate.targets[1], n), phases);
            return;
        }
        default: {
            if (gate.is_two_qubit()) {
                throw std::logic_error("unhandled two-qubit gate");
            }
            cxd matrix[4];
            gate_matrix_1q(gate, matrix);
            kernels::apply_1q(amps, dim, qubit_mask(gate.targets[0], n), matrix);
            return;
        }
    }
}

StateVector run(const Circuit& circuit, const std::optional<StateVector>& initial) {
    StateVector state = initial.value_or(StateVector(circuit.n_qubits));
    if (state.n_qubits != circuit.n_qubits) {
        throw std::invalid_argument("initial state qubit count does not match circuit");
    }
    for (const auto& gate : circuit.gates) apply_gate(state, gate);
    return state;
}

StateVector run_noisy(const Circuit& circuit, const NoiseModel& noise, std::uint64_t seed,
                      const std::optional<StateVector>& initial) {
    noise.validate();
    StateVector state = initial.value_or(StateVector(circuit.n_qubits));
    if (state.n_qubits != circuit.n_qubits) {
        throw std::invalid_argument("initial state qubit count does not match circuit");
    }
    Rng rng(seed);
    for (const auto& gate : circuit.gates) {
        apply_gate(state, gate);
        const double p = gate.is_two_qubit() ? noise.p2 : noise.p1;
        if (p > 0.0 && rand_u01(rng) < p) apply_fault(state, rng, gate);
    }
    return state;
}

SampleCounts sample(const StateVector& state, long long shots,
                    const std::optional<NoiseModel>& noise, std::uint64_t seed) {
    if (shots < 1) throw std::invalid_argument("sampling needs at least one shot");
    if (noise) noise->validate();

    std::vector<double> cdf(state.dim());
    double acc = 0.0;
    for (std::size_t b = 0; b < state.dim(); ++b) {
        acc += std::norm(state.amplitudes[b]);
        cdf[b] = acc;
    }
    const double total = acc;

    Rng rng(seed);
    const int n = state.n_qubits;
    SampleCounts result;
    result.shots = shots;
    for (long long s = 0; s < shots; ++s) {
        const double u = rand_u01(rng) * total;
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        auto index = static_cast<std::uint64_t>(std::distance(cdf.begin(), it));
        if (index >= state.dim()) index = state.dim() - 1;
        if (noise && (noise->readout_flip0 > 0.0 || noise->readout_flip1 > 0.0)) {
            for (int q = 0; q < n; ++q) {
                const bool one = bit_of(index, q, n) != 0;
                const double flip = one ? noise->readout_flip1 : noise->readout_flip0;
                if (flip > 0.0 && rand_u01(rng) < flip) index ^= qubit_mask(q, n);
            }
        }
        ++result.counts[index_to_bitstring(index, n)];
    }
    return result;
}

}  // namespace varqlab
