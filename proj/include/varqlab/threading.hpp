#pragma once

#include <cstddef>

namespace varqlab {

// Number of threads the parallel kernels may use. Defaults to the OpenMP
// maximum and can be capped with the VARQLAB_THREADS environment variable
// (read once, on first use).
int thread_count();

// Statevectors below this size are not worth a parallel region.
inline constexpr std::size_t kParallelThreshold = std::size_t{1} << 14;

inline bool use_parallel(std::size_t dim) {
    return dim >= kParallelThreshold && thread_count() > 1;
}

}  // namespace varqlab
