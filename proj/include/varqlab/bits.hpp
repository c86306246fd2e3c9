#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace varqlab {

// Bit/qubit convention used throughout: the character at position 0 of a
// bitstring (the leftmost one) is qubit 0. Inside an amplitude index qubit q
// therefore occupies bit (n - 1 - q), so that the index written in binary,
// most significant bit first, reads the same as the bitstring.

inline std::uint64_t qubit_mask(int qubit, int n_qubits) {
    return std::uint64_t{1} << (n_qubits - 1 - qubit);
}

inline int bit_of(std::uint64_t index, int qubit, int n_qubits) {
    return static_cast<int>((index >> (n_qubits - 1 - qubit)) & 1u);
}

inline std::string index_to_bitstring(std::uint64_t index, int n_qubits) {
    std::string bits(static_cast<std::size_t>(n_qubits), '0');
    for (int q = 0; q < n_qubits; ++q) {
        if (bit_of(index, q, n_qubits)) bits[static_cast<std::size_t>(q)] = '1';
    }
    return bits;
}

inline std::uint64_t bitstring_to_index(const std::string& bits) {
    std::uint64_t index = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument("bitstring must contain only 0/1, got '" + bits + "'");
        }
        index = (index << 1) | static_cast<std::uint64_t>(c - '0');
    }
    return index;
}

}  // namespace varqlab
