#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>

namespace varqlab::kernels {

using cxd = std::complex<double>;

// Statevector update kernels. Every kernel comes in a _serial and a _parallel
// flavour; the unsuffixed entry point dispatches on state size and available
// threads. The serial versions are the reference the parallel ones are tested
// against, and both are exercised by the benchmark tool.

// Generic single-qubit gate: 2x2 row-major matrix on the qubit with bit mask.
void apply_1q_serial(cxd* amps, std::size_t dim, std::uint64_t mask, const cxd matrix[4]);
void apply_1q_parallel(cxd* amps, std::size_t dim, std::uint64_t mask, const cxd matrix[4]);
void apply_1q(cxd* amps, std::size_t dim, std::uint64_t mask, const cxd matrix[4]);

// Generic two-qubit gate: 4x4 row-major matrix; mask_high is the first gate
// qubit's bit, mask_low the second's (row/column index = 2*bit_high + bit_low).
void apply_2q_serial(cxd* amps, std::size_t dim, std::uint64_t mask_high, std::uint64_t mask_low,
                     const cxd matrix[16]);
void apply_2q_parallel(cxd* amps, std::size_t dim, std::uint64_t mask_high, std::uint64_t mask_low,
                       const cxd matrix[16]);
void apply_2q(cxd* amps, std::size_t dim, std::uint64_t mask_high, std::uint64_t mask_low,
              const cxd matrix[16]);

// CNOT specialisation: swaps the target pair where the control bit is set.
void apply_cnot_serial(cxd* amps, std::size_t dim, std::uint64_t control_mask,
                       std::uint64_t target_mask);
void apply_cnot_parallel(cxd* amps, std::size_t dim, std::uint64_t control_mask,
                         std::uint64_t target_mask);
void apply_cnot(cxd* amps, std::size_t dim, std::uint64_t control_mask, std::uint64_t target_mask);

// Diagonal two-qubit gate (CZ, RZZ): one phase per (bit_high, bit_low) pair.
void apply_diag2_serial(cxd* amps, std::size_t dim, std::uint64_t mask_high,
                        std::uint64_t mask_low, const cxd phases[4]);
void apply_diag2_parallel(cxd* amps, std::size_t dim, std::uint64_t mask_high,
                          std::uint64_t mask_low, const cxd phases[4]);
void apply_diag2(cxd* amps, std::size_t dim, std::uint64_t mask_high, std::uint64_t mask_low,
                 const cxd phases[4]);

// Sum of |amplitude|^2, with a thread-count-independent combine order.
double norm_squared_serial(const cxd* amps, std::size_t dim);
double norm_squared_parallel(const cxd* amps, std::size_t dim);
double norm_squared(const cxd* amps, std::size_t dim);

}  // namespace varqlab::kernels
