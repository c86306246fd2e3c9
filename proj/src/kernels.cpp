#include "varqlab/kernels.hpp"

#include <algorithm>
#include <vector>

#include "varqlab/threading.hpp"

namespace varqlab::kernels {

namespace {

// Expands the compact pair index i in [0, dim/2) into the amplitude index
// whose `mask` bit is zero.
inline std::uint64_t insert_zero_bit(std::uint64_t i, std::uint64_t mask) {
    const std::uint64_t low = mask - 1;
    return ((i & ~low) << 1) | (i & low);
}

inline std::uint64_t insert_two_zero_bits(std::uint64_t i, std::uint64_t min_mask,
                                          std::uint64_t max_mask) {
    const std::uint64_t low = min_mask - 1;
    const std::uint64_t mid = (max_mask >> 1) - 1;
    return ((i & ~mid) << 2) | (((i & mid) & ~low) << 1) | (i & low);
}

inline void rotate_pair(cxd* amps, std::uint64_t i0, std::uint64_t i1, const cxd m[4]) {
    const cxd a0 = amps[i0];
    const cxd a1 = amps[i1];
    amps[i0] = m[0] * a0 + m[1] * a1;
    amps[i1] = m[2] * a0 + m[3] * a1;
}

inline void rotate_quad(cxd* amps, const std::uint64_t idx[4], const cxd m[16]) {
    cxd a[4];
    for (int k = 0; k < 4; ++k) a[k] = amps[idx[k]];
    for (int r = 0; r < 4; ++r) {
        amps[idx[r]] = m[4 * r + 0] * a[0] + m[4 * r + 1] * a[1] + m[4 * r + 2] * a[2] +
                       m[4 * r + 3] * a[3];
    }
}

}  // namespace

void apply_1q_serial(cxd* amps, std::size_t dim, std::uint64_t mask, const cxd matrix[4]) {
    const std::uint64_t pairs = dim >> 1;
    for (std::uint64_t i = 0; i < pairs; ++i) {
        const std::uint64_t i0 = insert_zero_bit(i, mask);
        rotate_pair(amps, i0, i0 | mask, matrix);
    }
}

void apply_1q_parallel(cxd* amps, std::size_t dim, std::uint64_t mask, const cxd matrix[4]) {
#ifdef _OPENMP
    const std::uint64_t pairs = dim >> 1;
#pragma omp parallel for num_threads(thread_count()) schedule(static)
    for (std::uint64_t i = 0; i < pairs; ++i) {
        const std::uint64_t i0 = insert_zero_bit(i, mask);
        rotate_pair(amps, i0, i0 | mask, matrix);
    }
#else
    apply_1q_serial(amps, dim, mask, matrix);
#endif
}

void apply_1q(cxd* amps, std::size_t dim, std::uint64_t mask, const cxd matrix[4]) {
    if (use_parallel(dim)) {
        apply_1q_parallel(amps, dim, mask, matrix);
    } else {
        apply_1q_serial(amps, dim, mask, matrix);
    }
}

void apply_2q_serial(cxd* amps, std::size_t dim, std::uint64_t mask_high, std::uint64_t mask_low,
                     const cxd matrix[16]) {
    const std::uint64_t min_mask = std::min(mask_high, mask_low);
    const std::uint64_t max_mask = std::max(mask_high, mask_low);
    const std::uint64_t quads = dim >> 2;
    for (std::uint64_t i = 0; i < quads; ++i) {
        const std::uint64_t base = insert_two_zero_bits(i, min_mask, max_mask);
        const std::uint64_t idx[4] = {base, base | mask_low, base | mask_high,
                                      base | mask_high | mask_low};
        rotate_quad(amps, idx, matrix);
    }
}

void apply_2q_parallel(cxd* amps, std::size_t dim, std::uint64_t mask_high, std::uint64_t mask_low,
                       const cxd matrix[16]) {
#ifdef _OPENMP
    const std::uint64_t min_mask = std::min(mask_high, mask_low);
    const std::uint64_t max_mask = std::max(mask_high, mask_low);
    const std::uint64_t quads = dim >> 2;
#pragma omp parallel for num_threads(thread_count()) schedule(static)
    for (std::uint64_t i = 0; i < quads; ++i) {
        const std::uint64_t base = insert_two_zero_bits(i, min_mask, max_mask);
        const std::uint64_t idx[4] = {base, base | mask_low, base | mask_high,
                                      base | mask_high | mask_low};
        rotate_quad(amps, idx, matrix);
    }
#else
    apply_2q_serial(amps, dim, mask_high, mask_low, matrix);
#endif
}

void apply_2q(cxd* amps, std::size_t dim, std::uint64_t mask_high, std::uint64_t mask_low,
              const cxd matrix[16]) {
    if (use_parallel(dim)) {
        apply_2q_parallel(amps, dim, mask_high, mask_low, matrix);
    } else {
        apply_2q_serial(amps, dim, mask_high, mask_low, matrix);
    }
}

void apply_cnot_serial(cxd* amps, std::size_t dim, std::uint64_t control_mask,
                       std::uint64_t target_mask) {
    const std::uint64_t min_mask = std::min(control_mask, target_mask);
    const std::uint64_t max_mask = std::max(control_mask, target_mask);
    const std::uint64_t quads = dim >> 2;
    for (std::uint64_t i = 0; i < quads; ++i) {
        const std::uint64_t base = insert_two_zero_bits(i, min_mask, max_mask) | control_mask;
        std::swap(amps[base], amps[base | target_mask]);
    }
}

void apply_cnot_parallel(cxd* amps, std::size_t dim, std::uint64_t control_mask,
                         std::uint64_t target_mask) {
#ifdef _OPENMP
    const std::uint64_t min_mask = std::min(control_mask, target_mask);
    const std::uint64_t max_mask = std::max(control_mask, target_mask);
    const std::uint64_t quads = dim >> 2;
#pragma omp parallel for num_threads(thread_count()) schedule(static)
    for (std::uint64_t i = 0; i < quads; ++i) {
        const std::uint64_t base = insert_two_zero_bits(i, min_mask, max_mask) | control_mask;
        std::swap(amps[base], amps[base | target_mask]);
    }
#else
    apply_cnot_serial(amps, dim, control_mask, target_mask);
#endif
}

void apply_cnot(cxd* amps, std::size_t dim, std::uint64_t control_mask,
                std::uint64_t target_mask) {
    if (use_parallel(dim)) {
        apply_cnot_parallel(amps, dim, control_mask, target_mask);
    } else {
        apply_cnot_serial(amps, dim, control_mask, target_mask);
    }
}

void apply_diag2_serial(cxd* amps, std::size_t dim, std::uint64_t mask_high,
                        std::uint64_t mask_low, const cxd phases[4]) {
    for (std::uint64_t b = 0; b < dim; ++b) {
        const int sub = 2 * ((b & mask_high) != 0) + ((b & mask_low) != 0);
        amps[b] *= phases[sub];
    }
}

void apply_diag2_parallel(cxd* amps, std::size_t dim, std::uint64_t mask_high,
                          std::uint64_t mask_low, const cxd phases[4]) {
#ifdef _OPENMP
#pragma omp parallel for num_threads(thread_count()) schedule(static)
    for (std::uint64_t b = 0; b < dim; ++b) {
        const int sub = 2 * ((b & mask_high) != 0) + ((b & mask_low) != 0);
        amps[b] *= phases[sub];
    }
#else
    apply_diag2_serial(amps, dim, mask_high, mask_low, phases);
#endif
}

void apply_diag2(cxd* amps, std::size_t dim, std::uint64_t mask_high, std::uint64_t mask_low,
                 const cxd phases[4]) {
    if (use_parallel(dim)) {
        apply_diag2_parallel(amps, dim, mask_high, mask_low, phases);
    } else {
        apply_diag2_serial(amps, dim, mask_high, mask_low, phases);
    }
}

double norm_squared_serial(const cxd* amps, std::size_t dim) {
    double total = 0.0;
    for (std::size_t b = 0; b < dim; ++b) total += std::norm(amps[b]);
    return total;
}

double norm_squared_parallel(const cxd* amps, std::size_t dim) {
#ifdef _OPENMP
    const std::size_t n_chunks = std::min<std::size_t>(256, dim);
    const std::size_t chunk = dim / n_chunks;
    std::vector<double> partial(n_chunks);
#pragma omp parallel for num_threads(thread_count()) schedule(static)
    for (std::size_t c = 0; c < n_chunks; ++c) {
        const std::size_t begin = c * chunk;
        const std::size_t end = (c + 1 == n_chunks) ? dim : begin + chunk;
        double acc = 0.0;
        for (std::size_t b = begin; b < end; ++b) acc += std::norm(amps[b]);
        partial[c] = acc;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
#else
    return norm_squared_serial(amps, dim);
#endif
}

double norm_squared(const cxd* amps, std::size_t dim) {
    return use_parallel(dim) ? norm_squared_parallel(amps, dim) : norm_squared_serial(amps, dim);
}

}  // namespace varqlab::kernels
