#include "varqlab/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "varqlab/bits.hpp"
#include "varqlab/threading.hpp"

namespace varqlab {

namespace {

constexpr double kSimplifyThreshold = 1e-12;

void check_same_width(const PauliString& a, const PauliString& b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw std::invalid_argument("pauli strings act on different qubit counts: " +
                                    std::to_string(a.n_qubits()) + " vs " +
                                    std::to_string(b.n_qubits()));
    }
}

// Single-qubit products: axes_product[a][b] is the resulting axis and
// phase_product[a][b] the exponent k of the phase i^k, e.g. X*Y = i Z.
constexpr PauliAxis kAxisProduct[4][4] = {
    {PauliAxis::I, PauliAxis::X, PauliAxis::Y, PauliAxis::Z},
    {PauliAxis::X, PauliAxis::I, PauliAxis::Z, PauliAxis::Y},
    {PauliAxis::Y, PauliAxis::Z, PauliAxis::I, PauliAxis::X},
    {PauliAxis::Z, PauliAxis::Y, PauliAxis::X, PauliAxis::I},
};
constexpr int kPhaseProduct[4][4] = {
    {0, 0, 0, 0},
    {0, 0, 1, 3},
    {0, 3, 0, 1},
    {0, 1, 3, 0},
};

struct TermMasks {
    std::uint64_t flip = 0;   // X and Y qubits
    std::uint64_t phase = 0;  // Y and Z qubits
    int y_count = 0;
};

TermMasks masks_of(const PauliString& s) {
    TermMasks m;
    const int n = s.n_qubits();
    for (int q = 0; q < n; ++q) {
        switch (s.axis(q)) {
            case PauliAxis::I:
                break;
            case PauliAxis::X:
                m.flip |= qubit_mask(q, n);
                break;
            case PauliAxis::Y:
                m.flip |= qubit_mask(q, n);
                m.phase |= qubit_mask(q, n);
                ++m.y_count;
                break;
            case PauliAxis::Z:
                m.phase |= qubit_mask(q, n);
                break;
        }
    }
    return m;
}

std::complex<double> unit_phase(int exponent) {
    switch (exponent & 3) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

}  // namespace

char axis_to_char(PauliAxis axis) {
    switch (axis) {
        case PauliAxis::I: return 'I';
        case PauliAxis::X: return 'X';
        case PauliAxis::Y: return 'Y';
        case PauliAxis::Z: return 'Z';
    }
    return '?';
}

PauliAxis axis_from_char(char c) {
    switch (std::toupper(static_cast<unsigned char>(c))) {
        case 'I': return PauliAxis::I;
        case 'X': return PauliAxis::X;
        case 'Y': return PauliAxis::Y;
        case 'Z': return PauliAxis::Z;
    }
    throw std::invalid_argument(std::string("unknown pauli axis '") + c + "'");
}

PauliString::PauliString(int n_qubits) {
    if (n_qubits <= 0) throw std::invalid_argument("pauli string needs at least one qubit");
    axes_.assign(static_cast<std::size_t>(n_qubits), PauliAxis::I);
}

PauliString::PauliString(int n_qubits, std::initializer_list<std::pair<int, PauliAxis>> axes)
    : PauliString(n_qubits) {
    for (const auto& [qubit, axis] : axes) set_axis(qubit, axis);
}

void PauliString::set_axis(int qubit, PauliAxis axis) {
    if (qubit < 0 || qubit >= n_qubits()) {
        throw std::out_of_range("qubit index " + std::to_string(qubit) + " out of range for " +
                                std::to_string(n_qubits()) + " qubits");
    }
    axes_[static_cast<std::size_t>(qubit)] = axis;
}

bool PauliString::is_identity() const {
    return std::all_of(axes_.begin(), axes_.end(),
                       [](PauliAxis a) { return a == PauliAxis::I; });
}

std::vector<int> PauliString::support() const {
    std::vector<int> qubits;
    for (int q = 0; q < n_qubits(); ++q) {
        if (axis(q) != PauliAxis::I) qubits.push_back(q);
    }
    return qubits;
}

bool PauliString::is_diagonal() const {
    return std::all_of(axes_.begin(), axes_.end(), [](PauliAxis a) {
        return a == PauliAxis::I || a == PauliAxis::Z;
    });
}

std::string PauliString::to_string() const {
    std::string out;
    for (int q = 0; q < n_qubits(); ++q) {
        if (axis(q) == PauliAxis::I) continue;
        if (!out.empty()) out += '*';
        out += axis_to_char(axis(q));
        out += std::to_string(q);
    }
    return out.empty() ? "I" : out;
}

PauliString PauliString::parse(const std::string& text, int n_qubits) {
    std::vector<std::pair<int, PauliAxis>> factors;
    int max_qubit = -1;
    std::size_t pos = 0;
    while (pos < text.size()) {
        while (pos < text.size() && (text[pos] == '*' || std::isspace(static_cast<unsigned char>(text[pos])))) ++pos;
        if (pos >= text.size()) break;
        PauliAxis axis = axis_from_char(text[pos]);
        ++pos;
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (start == pos) {
            if (axis == PauliAxis::I) continue;  // bare "I" means the identity string
            throw std::invalid_argument("pauli factor missing qubit index in '" + text + "'");
        }
        int qubit = std::stoi(text.substr(start, pos - start));
        factors.emplace_back(qubit, axis);
        max_qubit = std::max(max_qubit, qubit);
    }
    if (n_qubits == 0) n_qubits = max_qubit + 1;
    if (n_qubits <= 0) n_qubits = 1;
    if (max_qubit >= n_qubits) {
        throw std::invalid_argument("qubit index " + std::to_string(max_qubit) +
                                    " exceeds string width " + std::to_string(n_qubits));
    }
    PauliString result(n_qubits);
    for (const auto& [qubit, axis] : factors) {
        if (result.axis(qubit) != PauliAxis::I) {
            throw std::invalid_argument("qubit " + std::to_string(qubit) +
                                        " appears twice in '" + text + "'");
        }
        result.set_axis(qubit, axis);
    }
    return result;
}

std::complex<double> PhasedString::phase() const { return unit_phase(phase_exponent); }

Observable::Observable(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits <= 0) throw std::invalid_argument("observable needs at least one qubit");
}

void Observable::add_term(double coefficient, PauliString string) {
    if (string.n_qubits() != n_qubits_) {
        throw std::invalid_argument("term width " + std::to_string(string.n_qubits()) +
                                    " does not match observable width " +
                                    std::to_string(n_qubits_));
    }
    if (!std::isfinite(coefficient)) throw std::invalid_argument("coefficient must be finite");
    if (string.is_identity()) {
        constant_ += coefficient;
        return;
    }
    terms_.push_back(PauliTerm{coefficient, std::move(string)});
}

double Observable::one_norm() const {
    double norm = std::abs(constant_);
    for (const auto& term : terms_) norm += std::abs(term.coefficient);
    return norm;
}

bool Observable::is_diagonal() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const PauliTerm& t) { return t.string.is_diagonal(); });
}

std::string Observable::to_string() const {
    std::ostringstream out;
    bool first = true;
    for (const auto& term : terms_) {
        if (!first) out << " + ";
        out << term.coefficient << " " << term.string.to_string();
        first = false;
    }
    if (constant_ != 0.0 || first) {
        if (!first) out << " + ";
        out << constant_ << " I";
    }
    return out.str();
}

PhasedString multiply(const PauliString& a, const PauliString& b) {
    check_same_width(a, b);
    PhasedString result{0, PauliString(a.n_qubits())};
    for (int q = 0; q < a.n_qubits(); ++q) {
        const auto ai = static_cast<int>(a.axis(q));
        const auto bi = static_cast<int>(b.axis(q));
        result.string.set_axis(q, kAxisProduct[ai][bi]);
        result.phase_exponent = (result.phase_exponent + kPhaseProduct[ai][bi]) & 3;
    }
    return result;
}

Observable simplify(const Observable& obs) {
    Observable out(obs.n_qubits());
    out.add_constant(obs.constant());
    std::vector<PauliTerm> merged;
    for (const auto& term : obs.terms()) {
        auto same = std::find_if(merged.begin(), merged.end(), [&](const PauliTerm& t) {
            return t.string == term.string;
        });
        if (same == merged.end()) {
            merged.push_back(term);
        } else {
            same->coefficient += term.coefficient;
        }
    }
    for (auto& term : merged) {
        if (std::abs(term.coefficient) < kSimplifyThreshold) continue;
        if (term.string.is_identity()) {
            out.add_constant(term.coefficient);
        } else {
            out.add_term(term.coefficient, std::move(term.string));
        }
    }
    return out;
}

std::vector<std::complex<double>> dense_matrix(const Observable& obs) {
    const int n = obs.n_qubits();
    if (n > 10) {
        throw std::invalid_argument("dense_matrix supports at most 10 qubits, got " +
                                    std::to_string(n));
    }
    const std::uint64_t dim = std::uint64_t{1} << n;
    std::vector<std::complex<double>> matrix(dim * dim, {0.0, 0.0});
    for (std::uint64_t d = 0; d < dim; ++d) matrix[d * dim + d] = obs.constant();
    for (const auto& term : obs.terms()) {
        const TermMasks m = masks_of(term.string);
        const std::complex<double> base = term.coefficient * unit_phase(m.y_count);
        for (std::uint64_t col = 0; col < dim; ++col) {
            const std::uint64_t row = col ^ m.flip;
            const double sign = (std::popcount(col & m.phase) & 1) ? -1.0 : 1.0;
            matrix[row * dim + col] += base * sign;
        }
    }
    return matrix;
}

bool qubitwise_commutes(const PauliString& a, const PauliString& b) {
    check_same_width(a, b);
    for (int q = 0; q < a.n_qubits(); ++q) {
        const PauliAxis pa = a.axis(q);
        const PauliAxis pb = b.axis(q);
        if (pa != PauliAxis::I && pb != PauliAxis::I && pa != pb) return false;
    }
    return true;
}

DiagonalEvaluator::DiagonalEvaluator(const Observable& obs)
    : n_qubits_(obs.n_qubits()), constant_(obs.constant()) {
    for (const auto& term : obs.terms()) {
        if (!term.string.is_diagonal()) {
            throw std::invalid_argument("observable is not diagonal: term " +
                                        term.string.to_string() + " has X/Y axes");
        }
        std::uint64_t mask = 0;
        for (int q : term.string.support()) mask |= qubit_mask(q, n_qubits_);
        masks_.push_back(mask);
        coefficients_.push_back(term.coefficient);
    }
}

double DiagonalEvaluator::eval(std::uint64_t index) const {
    double energy = constant_;
    for (std::size_t t = 0; t < masks_.size(); ++t) {
        const double sign = (std::popcount(index & masks_[t]) & 1) ? -1.0 : 1.0;
        energy += coefficients_[t] * sign;
    }
    return energy;
}

double eval_bitstring(const Observable& obs, const std::string& bits) {
    if (static_cast<int>(bits.size()) != obs.n_qubits()) {
        throw std::invalid_argument("bitstring length " + std::to_string(bits.size()) +
                                    " does not match observable width " +
                                    std::to_string(obs.n_qubits()));
    }
    return DiagonalEvaluator(obs).eval(bitstring_to_index(bits));
}

namespace {

// Deterministic chunked reduction: the combine order depends only on the
// chunk grid, not on the thread count.
std::complex<double> pauli_expectation(std::span<const std::complex<double>> amps,
                                       const TermMasks& m) {
    const std::size_t dim = amps.size();
    const std::size_t n_chunks = std::min<std::size_t>(256, dim);
    const std::size_t chunk = dim / n_chunks;
    std::vector<std::complex<double>> partial(n_chunks);
    const auto body = [&](std::size_t c) {
        const std::size_t begin = c * chunk;
        const std::size_t end = (c + 1 == n_chunks) ? dim : begin + chunk;
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t b = begin; b < end; ++b) {
            const double sign = (std::popcount(b & m.phase) & 1) ? -1.0 : 1.0;
            acc += std::conj(amps[b ^ m.flip]) * (sign * amps[b]);
        }
        partial[c] = acc;
    };
    if (use_parallel(dim)) {
#ifdef _OPENMP
#pragma omp parallel for num_threads(thread_count()) schedule(static)
#endif
        for (std::size_t c = 0; c < n_chunks; ++c) body(c);
    } else {
        for (std::size_t c = 0; c < n_chunks; ++c) body(c);
    }
    std::complex<double> total{0.0, 0.0};
    for (const auto& p : partial) total += p;
    return unit_phase(m.y_count) * total;
}

}  // namespace

double exact_expectation(const Observable& obs, std::span<const std::complex<double>> amplitudes) {
    const std::uint64_t dim = std::uint64_t{1} << obs.n_qubits();
    if (amplitudes.size() != dim) {
        throw std::invalid_argument("state dimension " + std::to_string(amplitudes.size()) +
                                    " does not match observable width " +
                                    std::to_string(obs.n_qubits()));
    }
    std::complex<double> value = obs.constant();
    for (const auto& term : obs.terms()) {
        value += term.coefficient * pauli_expectation(amplitudes, masks_of(term.string));
    }
    return value.real();
}

std::vector<std::complex<double>> apply_observable(const Observable& obs,
                                                   std::span<const std::complex<double>> x) {
    const std::uint64_t dim = std::uint64_t{1} << obs.n_qubits();
    if (x.size() != dim) {
        throw std::invalid_argument("state dimension does not match observable width");
    }
    std::vector<std::complex<double>> y(dim, {0.0, 0.0});
    for (std::uint64_t b = 0; b < dim; ++b) y[b] = obs.constant() * x[b];
    for (const auto& term : obs.terms()) {
        const TermMasks m = masks_of(term.string);
        const std::complex<double> base = term.coefficient * unit_phase(m.y_count);
        for (std::uint64_t b = 0; b < dim; ++b) {
            const double sign = (std::popcount(b & m.phase) & 1) ? -1.0 : 1.0;
            y[b ^ m.flip] += base * sign * x[b];
        }
    }
    return y;
}

}  // namespace varqlab
