#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "varqlab/pauli.hpp"
#include "varqlab/simulator.hpp"

namespace varqlab::oracle {

// Brute-force reference implementations used by tests, the acceptance suite
// and the `verify` subcommand. Nothing here calls into the pauli/simulator
// fast paths: energies, matrices and exponentials are rebuilt from first
// principles so that agreement with the main code is actual evidence.

using DenseMatrix = Eigen::MatrixXcd;

struct BruteForceResult {
    double energy = 0.0;
    std::vector<std::string> argmin_bitstrings;  // all ties, lexicographic
};

/// Exhaustive scan of a diagonal observable, n_qubits <= 22.
BruteForceResult brute_force_min(const Observable& obs);
BruteForceResult brute_force_min_serial(const Observable& obs);
BruteForceResult brute_force_min_parallel(const Observable& obs);

/// Diagonal energy of one basis state, evaluated the oracle's way.
double diagonal_energy(const Observable& obs, std::uint64_t index);

/// 2x2 Pauli matrix for one axis.
DenseMatrix pauli_matrix(PauliAxis axis);

DenseMatrix kronecker(const DenseMatrix& a, const DenseMatrix& b);

/// Dense matrix of an observable built from explicit Kronecker products.
/// Requires 2^n <= 1024.
DenseMatrix dense_observable(const Observable& obs);

/// A |-> M A for dense matrices (sanity wrapper so verify can print shapes).
DenseMatrix dense_apply(const DenseMatrix& m, const DenseMatrix& a);

/// e^{-i t H} for a diagonal observable: elementwise on the diagonal.
DenseMatrix dense_expm_diagonal(const Observable& obs, double t);

/// e^{-i t H} for a single-qubit observable via the closed form
/// e^{-i t (a I + n.sigma)} = e^{-i t a} (cos(t|n|) I - i sin(t|n|) n_hat.sigma).
DenseMatrix dense_expm_1q(const Observable& obs, double t);

/// Trajectory-averaged single-qubit evolution: after every gate the state is
/// mixed with the three Pauli conjugations with total weight p1.
DenseMatrix density_1q_depolarized(const Circuit& circuit, double p1);

double z_expectation(const DenseMatrix& density);

}  // namespace varqlab::oracle
