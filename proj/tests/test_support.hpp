#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "varqlab/pauli.hpp"
#include "varqlab/rng.hpp"
#include "varqlab/simulator.hpp"

namespace varqlab::testing {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using cxd = std::complex<double>;

inline PauliString random_pauli_string(Rng& rng, int n_qubits, bool allow_identity = true) {
    for (;;) {
        PauliString s(n_qubits);
        for (int q = 0; q < n_qubits; ++q) {
            s.set_axis(q, static_cast<PauliAxis>(rand_index(rng, 4)));
        }
        if (allow_identity || !s.is_identity()) return s;
    }
}

inline Observable random_observable(Rng& rng, int n_qubits, int max_terms,
                                    bool diagonal = false) {
    Observable obs(n_qubits);
    obs.add_constant(2.0 * rand_u01(rng) - 1.0);
    const int n_terms = 1 + static_cast<int>(rand_index(rng, static_cast<std::uint64_t>(max_terms)));
    for (int t = 0; t < n_terms; ++t) {
        PauliString s(n_qubits);
        for (int q = 0; q < n_qubits; ++q) {
            if (diagonal) {
                s.set_axis(q, rand_index(rng, 2) ? PauliAxis::Z : PauliAxis::I);
            } else {
                s.set_axis(q, static_cast<PauliAxis>(rand_index(rng, 4)));
            }
        }
        if (s.is_identity()) continue;
        obs.add_term(4.0 * rand_u01(rng) - 2.0, s);
    }
    return obs;
}

inline std::vector<cxd> random_state(Rng& rng, int n_qubits) {
    std::vector<cxd> amps(std::size_t{1} << n_qubits);
    double norm2 = 0.0;
    for (auto& a : amps) {
        a = {2.0 * rand_u01(rng) - 1.0, 2.0 * rand_u01(rng) - 1.0};
        norm2 += std::norm(a);
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& a : amps) a *= inv;
    return amps;
}

inline Vector to_eigen(const std::vector<cxd>& amps) {
    Vector v(static_cast<Eigen::Index>(amps.size()));
    for (std::size_t i = 0; i < amps.size(); ++i) v(static_cast<Eigen::Index>(i)) = amps[i];
    return v;
}

// Reference gate matrices written out from the standard definitions, kept
// separate from the simulator's internal tables on purpose.
inline Matrix reference_gate_matrix(const Gate& gate) {
    const cxd i{0.0, 1.0};
    const double half = gate.angle / 2.0;
    Matrix m;
    switch (gate.kind) {
        case GateKind::H:
            m = Matrix(2, 2);
            m << 1, 1, 1, -1;
            return m / std::numbers::sqrt2;
        case GateKind::X:
            m = Matrix(2, 2);
            m << 0, 1, 1, 0;
            return m;
        case GateKind::Y:
            m = Matrix(2, 2);
            m << 0, -i, i, 0;
            return m;
        case GateKind::Z:
            m = Matrix(2, 2);
            m << 1, 0, 0, -1;
            return m;
        case GateKind::RX:
            m = Matrix(2, 2);
            m << std::cos(half), -i * std::sin(half), -i * std::sin(half), std::cos(half);
            return m;
        case GateKind::RY:
            m = Matrix(2, 2);
            m << std::cos(half), -std::sin(half), std::sin(half), std::cos(half);
            return m;
        case GateKind::RZ:
            m = Matrix(2, 2);
            m << std::exp(-i * half), 0, 0, std::exp(i * half);
            return m;
        case GateKind::Phase:
            m = Matrix(2, 2);
            m << 1, 0, 0, std::exp(i * gate.angle);
            return m;
        case GateKind::CNOT:
            m = Matrix::Zero(4, 4);
            m(0, 0) = 1;
            m(1, 1) = 1;
            m(2, 3) = 1;
            m(3, 2) = 1;
            return m;
        case GateKind::CZ:
            m = Matrix::Identity(4, 4);
            m(3, 3) = -1;
            return m;
        case GateKind::RZZ:
            m = Matrix::Zero(4, 4);
            m(0, 0) = std::exp(-i * half);
            m(1, 1) = std::exp(i * half);
            m(2, 2) = std::exp(i * half);
            m(3, 3) = std::exp(-i * half);
            return m;
    }
    return Matrix::Identity(2, 2);
}

// Embeds a 1- or 2-qubit gate into the full 2^n unitary, indexing qubits the
// same way as the statevector (qubit 0 is the top bit).
inline Matrix embed_gate(const Gate& gate, int n_qubits) {
    const Matrix local = reference_gate_matrix(gate);
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n_qubits);
    Matrix full = Matrix::Zero(dim, dim);
    const auto bit = [&](Eigen::Index index, int qubit) {
        return static_cast<int>((static_cast<std::uint64_t>(index) >> (n_qubits - 1 - qubit)) & 1u);
    };
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) {
            std::uint64_t other_r = static_cast<std::uint64_t>(r);
            std::uint64_t other_c = static_cast<std::uint64_t>(c);
            int sub_r = 0;
            int sub_c = 0;
            if (gate.is_two_qubit()) {
                sub_r = 2 * bit(r, gate.targets[0]) + bit(r, gate.targets[1]);
                sub_c = 2 * bit(c, gate.targets[0]) + bit(c, gate.targets[1]);
                const std::uint64_t clear =
                    ~((std::uint64_t{1} << (n_qubits - 1 - gate.targets[0])) |
                      (std::uint64_t{1} << (n_qubits - 1 - gate.targets[1])));
                other_r &= clear;
                other_c &= clear;
            } else {
                sub_r = bit(r, gate.targets[0]);
                sub_c = bit(c, gate.targets[0]);
                const std::uint64_t clear =
                    ~(std::uint64_t{1} << (n_qubits - 1 - gate.targets[0]));
                other_r &= clear;
                other_c &= clear;
            }
            if (other_r == other_c) full(r, c) = local(sub_r, sub_c);
        }
    }
    return full;
}

inline double overlap_up_to_phase(const std::vector<cxd>& a, const std::vector<cxd>& b) {
    cxd inner{0.0, 0.0};
    for (std::size_t k = 0; k < a.size(); ++k) inner += std::conj(a[k]) * b[k];
    return std::abs(inner);
}

}  // namespace varqlab::testing
