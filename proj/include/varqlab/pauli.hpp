#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace varqlab {

enum class PauliAxis : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char axis_to_char(PauliAxis axis);
PauliAxis axis_from_char(char c);

/// Tensor product of single-qubit Pauli operators, one axis per qubit.
class PauliString {
  public:
    explicit PauliString(int n_qubits);
    PauliString(int n_qubits, std::initializer_list<std::pair<int, PauliAxis>> axes);

    int n_qubits() const { return static_cast<int>(axes_.size()); }
    PauliAxis axis(int qubit) const { return axes_[static_cast<std::size_t>(qubit)]; }
    void set_axis(int qubit, PauliAxis axis);

    bool is_identity() const;
    /// Qubits carrying a non-identity axis.
    std::vector<int> support() const;
    /// True iff every axis is I or Z.
    bool is_diagonal() const;

    /// "Z0*X1" style; the identity string renders as "I".
    std::string to_string() const;
    /// Inverse of to_string. If n_qubits is 0 the width is inferred from the
    /// highest qubit index mentioned.
    static PauliString parse(const std::string& text, int n_qubits = 0);

    bool operator==(const PauliString&) const = default;

  private:
    std::vector<PauliAxis> axes_;
};

/// A PauliString together with a fourth-root-of-unity phase, stored as the
/// exponent k of i^k so products stay exact.
struct PhasedString {
    int phase_exponent = 0;  // phase = i^phase_exponent, exponent in {0,1,2,3}
    PauliString string;

    std::complex<double> phase() const;
};

struct PauliTerm {
    double coefficient = 0.0;
    PauliString string;
};

/// Weighted sum of Pauli strings plus a constant (the all-identity weight).
class Observable {
  public:
    explicit Observable(int n_qubits);

    int n_qubits() const { return n_qubits_; }
    double constant() const { return constant_; }
    const std::vector<PauliTerm>& terms() const { return terms_; }

    /// Adds coefficient * string; an identity string folds into the constant.
    void add_term(double coefficient, PauliString string);
    void add_constant(double value) { constant_ += value; }

    double one_norm() const;
    bool is_diagonal() const;

    std::string to_string() const;

  private:
    int n_qubits_;
    double constant_ = 0.0;
    std::vector<PauliTerm> terms_;
};

/// Qubit-wise product a*b with the accumulated phase.
PhasedString multiply(const PauliString& a, const PauliString& b);

/// Merges like terms, drops |coefficient| < 1e-12, folds identity weight into
/// the constant. Surviving terms keep first-appearance order.
Observable simplify(const Observable& obs);

/// Dense 2^n x 2^n matrix, row-major. Requires n_qubits <= 10.
std::vector<std::complex<double>> dense_matrix(const Observable& obs);

/// True iff on every qubit the axes agree or at least one is I.
bool qubitwise_commutes(const PauliString& a, const PauliString& b);

/// Energy of a computational basis state under a diagonal (Z/I) observable.
double eval_bitstring(const Observable& obs, const std::string& bits);

/// Precomputed Z-masks for evaluating a diagonal observable on many indices.
class DiagonalEvaluator {
  public:
    explicit DiagonalEvaluator(const Observable& obs);
    double eval(std::uint64_t index) const;
    int n_qubits() const { return n_qubits_; }

  private:
    int n_qubits_;
    double constant_;
    std::vector<std::uint64_t> masks_;
    std::vector<double> coefficients_;
};

/// <psi|H|psi> computed term by term, never materialising the dense matrix.
/// The imaginary residue (tiny for real coefficients) is discarded.
double exact_expectation(const Observable& obs, std::span<const std::complex<double>> amplitudes);

/// y = H x, term by term. Used by the power-iteration ground-energy search.
std::vector<std::complex<double>> apply_observable(const Observable& obs,
                                                   std::span<const std::complex<double>> x);

}  // namespace varqlab
