#include "varqlab/oracle.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "varqlab/bits.hpp"
#include "varqlab/threading.hpp"

namespace varqlab::oracle {

namespace {

using cxd = std::complex<double>;
constexpr cxd kI{0.0, 1.0};

void require_diagonal(const Observable& obs) {
    if (!obs.is_diagonal()) {
        throw std::invalid_argument("oracle needs a diagonal (Z/I) observable");
    }
}

DenseMatrix gate_matrix(const Gate& gate) {
    DenseMatrix m(2, 2);
    const double half = gate.angle / 2.0;
    switch (gate.kind) {
        case GateKind::H:
            m << 1, 1, 1, -1;
            m /= std::numbers::sqrt2;
            return m;
        case GateKind::X: m << 0, 1, 1, 0; return m;
        case GateKind::Y: m << 0, -kI, kI, 0; return m;
        case GateKind::Z: m << 1, 0, 0, -1; return m;
        case GateKind::RX:
            m << std::cos(half), -kI * std::sin(half), -kI * std::sin(half), std::cos(half);
            return m;
        case GateKind::RY:
            m << std::cos(half), -std::sin(half), std::sin(half), std::cos(half);
            return m;
        case GateKind::RZ:
            m << std::exp(-kI * half), 0, 0, std::exp(kI * half);
            return m;
        case GateKind::Phase:
            m << 1, 0, 0, std::exp(kI * gate.angle);
            return m;
        default:
            throw std::invalid_argument("density oracle handles single-qubit gates only");
    }
}

}  // namespace

double diagonal_energy(const Observable& obs, std::uint64_t index) {
    const int n = obs.n_qubits();
    double energy = obs.constant();
    for (const auto& term : obs.terms()) {
        double sign = 1.0;
        for (int q = 0; q < n; ++q) {
            if (term.string.axis(q) == PauliAxis::Z) {
                sign *= 1.0 - 2.0 * bit_of(index, q, n);
            }
        }
        energy += term.coefficient * sign;
    }
    return energy;
}

BruteForceResult brute_force_min_serial(const Observable& obs) {
    require_diagonal(obs);
    const int n = obs.n_qubits();
    if (n > 22) throw std::invalid_argument("brute force supports at most 22 qubits");
    const std::uint64_t dim = std::uint64_t{1} << n;

    double best = diagonal_energy(obs, 0);
    for (std::uint64_t b = 1; b < dim; ++b) {
        best = std::min(best, diagonal_energy(obs, b));
    }
    BruteForceResult result;
    result.energy = best;
    for (std::uint64_t b = 0; b < dim; ++b) {
        if (diagonal_energy(obs, b) == best) {
            result.argmin_bitstrings.push_back(index_to_bitstring(b, n));
        }
    }
    return result;
}

BruteForceResult brute_force_min_parallel(const Observable& obs) {
    require_diagonal(obs);
    const int n = obs.n_qubits();
    if (n > 22) throw std::invalid_argument("brute force supports at most 22 qubits");
    const std::uint64_t dim = std::uint64_t{1} << n;

    const std::uint64_t n_chunks = std::min<std::uint64_t>(256, dim);
    const std::uint64_t chunk = dim / n_chunks;
    std::vector<double> chunk_min(n_chunks);
#ifdef _OPENMP
#pragma omp parallel for num_threads(thread_count()) schedule(static)
#endif
    for (std::uint64_t c = 0; c < n_chunks; ++c) {
        const std::uint64_t begin = c * chunk;
        const std::uint64_t end = (c + 1 == n_chunks) ? dim : begin + chunk;
        double best = diagonal_energy(obs, begin);
        for (std::uint64_t b = begin + 1; b < end; ++b) {
            best = std::min(best, diagonal_energy(obs, b));
        }
        chunk_min[c] = best;
    }
    double best = chunk_min[0];
    for (double m : chunk_min) best = std::min(best, m);

    std::vector<std::vector<std::string>> chunk_ties(n_chunks);
#ifdef _OPENMP
#pragma omp parallel for num_threads(thread_count()) schedule(static)
#endif
    for (std::uint64_t c = 0; c < n_chunks; ++c) {
        const std::uint64_t begin = c * chunk;
        const std::uint64_t end = (c + 1 == n_chunks) ? dim : begin + chunk;
        for (std::uint64_t b = begin; b < end; ++b) {
            if (diagonal_energy(obs, b) == best) {
                chunk_ties[c].push_back(index_to_bitstring(b, n));
            }
        }
    }
    BruteForceResult result;
    result.energy = best;
    for (const auto& ties : chunk_ties) {
        result.argmin_bitstrings.insert(result.argmin_bitstrings.end(), ties.begin(), ties.end());
    }
    return result;
}

BruteForceResult brute_force_min(const Observable& obs) {
    const std::uint64_t dim = std::uint64_t{1} << obs.n_qubits();
    return use_parallel(dim) ? brute_force_min_parallel(obs) : brute_force_min_serial(obs);
}

DenseMatrix pauli_matrix(PauliAxis axis) {
    DenseMatrix m(2, 2);
    switch (axis) {
        case PauliAxis::I: m << 1, 0, 0, 1; break;
        case PauliAxis::X: m << 0, 1, 1, 0; break;
        case PauliAxis::Y: m << 0, -kI, kI, 0; break;
        case PauliAxis::Z: m << 1, 0, 0, -1; break;
    }
    return m;
}

DenseMatrix kronecker(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

DenseMatrix dense_observable(const Observable& obs) {
    const int n = obs.n_qubits();
    const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << n);
    if (dim > 1024) throw std::invalid_argument("dense oracle supports at most 2^10 dimensions");
    DenseMatrix total = obs.constant() * DenseMatrix::Identity(dim, dim);
    for (const auto& term : obs.terms()) {
        // Qubit 0 is the leftmost Kronecker factor, matching the bit order.
        DenseMatrix product = pauli_matrix(term.string.axis(0));
        for (int q = 1; q < n; ++q) {
            product = kronecker(product, pauli_matrix(term.string.axis(q)));
        }
        total += term.coefficient * product;
    }
    return total;
}

DenseMatrix dense_apply(const DenseMatrix& m, const DenseMatrix& a) { return m * a; }

DenseMatrix dense_expm_diagonal(const Observable& obs, double t) {
    require_diagonal(obs);
    const int n = obs.n_qubits();
    const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << n);
    if (dim > 1024) throw std::invalid_argument("dense oracle supports at most 2^10 dimensions");
    DenseMatrix out = DenseMatrix::Zero(dim, dim);
    for (Eigen::Index b = 0; b < dim; ++b) {
        out(b, b) = std::exp(-kI * t * diagonal_energy(obs, static_cast<std::uint64_t>(b)));
    }
    return out;
}

DenseMatrix dense_expm_1q(const Observable& obs, double t) {
    if (obs.n_qubits() != 1) {
        throw std::invalid_argument("closed-form exponential needs a single-qubit observable");
    }
    double a = obs.constant();
    double nx = 0.0;
    double ny = 0.0;
    double nz = 0.0;
    for (const auto& term : obs.terms()) {
        switch (term.string.axis(0)) {
            case PauliAxis::X: nx += term.coefficient; break;
            case PauliAxis::Y: ny += term.coefficient; break;
            case PauliAxis::Z: nz += term.coefficient; break;
            case PauliAxis::I: a += term.coefficient; break;
        }
    }
    const double len = std::sqrt(nx * nx + ny * ny + nz * nz);
    DenseMatrix out = std::cos(t * len) * DenseMatrix::Identity(2, 2);
    if (len > 0.0) {
        const DenseMatrix axis = (nx * pauli_matrix(PauliAxis::X) +
                                  ny * pauli_matrix(PauliAxis::Y) +
                                  nz * pauli_matrix(PauliAxis::Z)) /
                                 len;
        out -= kI * std::sin(t * len) * axis;
    }
    return std::exp(-kI * t * a) * out;
}

DenseMatrix density_1q_depolarized(const Circuit& circuit, double p1) {
    if (circuit.n_qubits != 1) {
        throw std::invalid_argument("density oracle handles single-qubit circuits only");
    }
    DenseMatrix rho = DenseMatrix::Zero(2, 2);
    rho(0, 0) = 1.0;
    const DenseMatrix px = pauli_matrix(PauliAxis::X);
    const DenseMatrix py = pauli_matrix(PauliAxis::Y);
    const DenseMatrix pz = pauli_matrix(PauliAxis::Z);
    for (const auto& gate : circuit.gates) {
        const DenseMatrix u = gate_matrix(gate);
        const DenseMatrix after = u * rho * u.adjoint();
        rho = (1.0 - p1) * after +
              (p1 / 3.0) * (px * after * px + py * after * py + pz * after * pz);
    }
    return rho;
}

double z_expectation(const DenseMatrix& density) {
    return (density(0, 0) - density(1, 1)).real();
}

}  // namespace varqlab::oracle
