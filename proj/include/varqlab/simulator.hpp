#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace varqlab {

enum class GateKind : std::uint8_t { H, X, Y, Z, RX, RY, RZ, Phase, CNOT, CZ, RZZ };

bool gate_kind_is_two_qubit(GateKind kind);
bool gate_kind_has_angle(GateKind kind);
std::string gate_kind_name(GateKind kind);

/// One gate application. Angle conventions:
///   RY(theta)|0> = cos(theta/2)|0> + sin(theta/2)|1>   (half-angle, likewise RX/RZ)
///   Phase(lambda) = diag(1, e^{i lambda})
///   RZZ(phi) = e^{-i phi (Z@Z)/2}
/// For CNOT, targets = {control, target}.
struct Gate {
    GateKind kind;
    std::array<int, 2> targets{-1, -1};
    double angle = 0.0;

    static Gate h(int q) { return {GateKind::H, {q, -1}, 0.0}; }
    static Gate x(int q) { return {GateKind::X, {q, -1}, 0.0}; }
    static Gate y(int q) { return {GateKind::Y, {q, -1}, 0.0}; }
    static Gate z(int q) { return {GateKind::Z, {q, -1}, 0.0}; }
    static Gate rx(int q, double theta) { return {GateKind::RX, {q, -1}, theta}; }
    static Gate ry(int q, double theta) { return {GateKind::RY, {q, -1}, theta}; }
    static Gate rz(int q, double theta) { return {GateKind::RZ, {q, -1}, theta}; }
    static Gate phase(int q, double lambda) { return {GateKind::Phase, {q, -1}, lambda}; }
    static Gate cnot(int control, int target) { return {GateKind::CNOT, {control, target}, 0.0}; }
    static Gate cz(int a, int b) { return {GateKind::CZ, {a, b}, 0.0}; }
    static Gate rzz(int a, int b, double phi) { return {GateKind::RZZ, {a, b}, phi}; }

    bool is_two_qubit() const { return gate_kind_is_two_qubit(kind); }
    int n_targets() const { return is_two_qubit() ? 2 : 1; }
    Gate inverse() const;
    /// Debug-dump form, e.g. "RY(1.5708) q0" or "CNOT q0 q1".
    std::string to_string() const;
};

struct Circuit {
    int n_qubits = 0;
    std::vector<Gate> gates;

    explicit Circuit(int n) : n_qubits(n) {}
    /// Validates target indices before appending.
    void append(const Gate& gate);
    void extend(const Circuit& other);
};

struct StateVector {
    int n_qubits = 0;
    std::vector<std::complex<double>> amplitudes;

    /// |0...0>
    explicit StateVector(int n);
    StateVector(int n, std::vector<std::complex<double>> amps);

    std::size_t dim() const { return amplitudes.size(); }
    std::span<const std::complex<double>> amps() const { return amplitudes; }
    double norm() const;
    std::vector<double> probabilities() const;
};

/// Stochastic Pauli fault model. p1/p2 are per-gate fault probabilities (a
/// uniformly random non-identity Pauli on the gate's targets), the readout
/// entries are classical bit-flip probabilities applied at sampling time.
/// Defaults are the hardware figures the model is calibrated to.
struct NoiseModel {
    double p1 = 0.0018;
    double p2 = 0.017;
    double readout_flip0 = 0.038;  // P(read 1 | true 0)
    double readout_flip1 = 0.038;  // P(read 0 | true 1)

    static NoiseModel ideal() { return {0.0, 0.0, 0.0, 0.0}; }
    bool is_ideal() const;
    void validate() const;
};

struct SampleCounts {
    long long shots = 0;
    std::map<std::string, long long> counts;
};

/// In-place gate application; preserves the norm.
void apply_gate(StateVector& state, const Gate& gate);

/// Runs the circuit on |0...0> or on the given initial state.
StateVector run(const Circuit& circuit,
                const std::optional<StateVector>& initial = std::nullopt);

/// One stochastic noise trajectory: after each gate, with probability p1/p2,
/// a uniformly random fault Pauli is applied to the gate's targets.
/// Deterministic for a fixed seed.
StateVector run_noisy(const Circuit& circuit, const NoiseModel& noise, std::uint64_t seed,
                      const std::optional<StateVector>& initial = std::nullopt);

/// Multinomial draw from |amplitudes|^2; with a noise model, each bit is then
/// independently flipped with the readout probabilities. Deterministic for a
/// fixed seed.
SampleCounts sample(const StateVector& state, long long shots,
                    const std::optional<NoiseModel>& noise, std::uint64_t seed);

}  // namespace varqlab
