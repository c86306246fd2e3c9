#include "varqlab/threading.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace varqlab {

namespace {

int detect_thread_count() {
#ifdef _OPENMP
    int count = omp_get_max_threads();
#else
    int count = 1;
#endif
    if (const char* env = std::getenv("VARQLAB_THREADS")) {
        try {
            count = std::min(count, std::max(1, std::stoi(env)));
        } catch (const std::exception&) {
            // Unparseable cap is ignored.
        }
    }
    return std::max(1, count);
}

}  // namespace

int thread_count() {
    static const int count = detect_thread_count();
    return count;
}

}  // namespace varqlab
