// Benchmarks the OpenMP kernels against their serial reference: single- and
// two-qubit gate application, expectation reduction and the brute-force
// diagonal scan. Run with VARQLAB_THREADS=1 to sanity-check the dispatcher.

#include <chrono>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <vector>

#include "varqlab/bits.hpp"
#include "varqlab/kernels.hpp"
#include "varqlab/oracle.hpp"
#include "varqlab/pauli.hpp"
#include "varqlab/rng.hpp"
#include "varqlab/simulator.hpp"
#include "varqlab/threading.hpp"
#include "varqlab/vqe.hpp"

using namespace varqlab;
using cxd = std::complex<double>;

namespace {

double time_ms(const std::function<void()>& body, int repeats) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto start = std::chrono::steady_clock::now();
        body();
        const auto stop = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(stop - start).count());
    }
    return best;
}

std::vector<cxd> random_state(int n_qubits, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<cxd> amps(std::size_t{1} << n_qubits);
    double norm2 = 0.0;
    for (auto& a : amps) {
        a = {rand_u01(rng) - 0.5, rand_u01(rng) - 0.5};
        norm2 += std::norm(a);
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& a : amps) a *= inv;
    return amps;
}

void row(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-28s %10.3f %10.3f %9.2fx\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms);
}

}  // namespace

int main() {
    const int n = 20;
    const std::size_t dim = std::size_t{1} << n;
    std::printf("statevector qubits: %d (dim %zu), threads: %d\n", n, dim, thread_count());
    std::printf("%-28s %10s %10s %9s\n", "kernel", "serial/ms", "omp/ms", "speedup");

    auto amps = random_state(n, 42);
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    const cxd h_matrix[4] = {inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2};

    row("apply_1q (H, 20 gates)",
        time_ms(
            [&] {
                for (int q = 0; q < n; ++q) {
                    kernels::apply_1q_serial(amps.data(), dim, qubit_mask(q, n), h_matrix);
                }
            },
            3),
        time_ms(
            [&] {
                for (int q = 0; q < n; ++q) {
                    kernels::apply_1q_parallel(amps.data(), dim, qubit_mask(q, n), h_matrix);
                }
            },
            3));

    row("apply_cnot (19 gates)",
        time_ms(
            [&] {
                for (int q = 0; q + 1 < n; ++q) {
                    kernels::apply_cnot_serial(amps.data(), dim, qubit_mask(q, n),
                                               qubit_mask(q + 1, n));
                }
            },
            3),
        time_ms(
            [&] {
                for (int q = 0; q + 1 < n; ++q) {
                    kernels::apply_cnot_parallel(amps.data(), dim, qubit_mask(q, n),
                                                 qubit_mask(q + 1, n));
                }
            },
            3));

    const cxd rzz_phases[4] = {std::exp(cxd{0, -0.15}), std::exp(cxd{0, 0.15}),
                               std::exp(cxd{0, 0.15}), std::exp(cxd{0, -0.15})};
    row("apply_diag2 (19 gates)",
        time_ms(
            [&] {
                for (int q = 0; q + 1 < n; ++q) {
                    kernels::apply_diag2_serial(amps.data(), dim, qubit_mask(q, n),
                                                qubit_mask(q + 1, n), rzz_phases);
                }
            },
            3),
        time_ms(
            [&] {
                for (int q = 0; q + 1 < n; ++q) {
                    kernels::apply_diag2_parallel(amps.data(), dim, qubit_mask(q, n),
                                                  qubit_mask(q + 1, n), rzz_phases);
                }
            },
            3));

    volatile double sink = 0.0;
    row("norm_squared",
        time_ms([&] { sink = kernels::norm_squared_serial(amps.data(), dim); }, 5),
        time_ms([&] { sink = kernels::norm_squared_parallel(amps.data(), dim); }, 5));

    // Ring of ZZ couplings plus fields, the brute-force scan workload.
    Observable ring(n);
    for (int q = 0; q < n; ++q) {
        ring.add_term(0.3 + 0.01 * q, PauliString(n, {{q, PauliAxis::Z}}));
        ring.add_term(1.0, PauliString(n, {{q, PauliAxis::Z}, {(q + 1) % n, PauliAxis::Z}}));
    }
    oracle::BruteForceResult serial_result;
    oracle::BruteForceResult parallel_result;
    row("brute_force_min (n=20)",
        time_ms([&] { serial_result = oracle::brute_force_min_serial(ring); }, 1),
        time_ms([&] { parallel_result = oracle::brute_force_min_parallel(ring); }, 1));
    std::printf("brute force agreement: %s (energy %.6f)\n",
                serial_result.energy == parallel_result.energy ? "yes" : "NO",
                serial_result.energy);
    (void)sink;
    return 0;
}
