#include "qgan/kernels.hpp"

#include <cmath>
#include <cstdint>

namespace qgan::qsim::kernels {

// Pair enumeration: i runs over dim/2 compressed indices, expanded to the
// index with the target bit clear; the partner has it set.
void ry_kernel(std::complex<double>* amps, std::size_t dim, int qubit, double angle,
               bool parallel) {
    const double c = std::cos(0.5 * angle);
    const double s = std::sin(0.5 * angle);
    const std::size_t mask = std::size_t{1} << qubit;
    const std::size_t lo_mask = mask - 1;
    const std::size_t hi_mask = ~lo_mask;
    const std::int64_t pairs = static_cast<std::int64_t>(dim >> 1);

#pragma omp parallel for if (parallel) schedule(static)
    for (std::int64_t p = 0; p < pairs; ++p) {
        const std::size_t i = static_cast<std::size_t>(p);
        const std::size_t i0 = ((i & hi_mask) << 1) | (i & lo_mask);
        const std::size_t i1 = i0 | mask;
        const std::complex<double> a0 = amps[i0];
        const std::complex<double> a1 = amps[i1];
        amps[i0] = c * a0 - s * a1;
        amps[i1] = s * a0 + c * a1;
    }
}

void h_kernel(std::complex<double>* amps, std::size_t dim, int qubit, bool parallel) {
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    const std::size_t mask = std::size_t{1} << qubit;
    const std::size_t lo_mask = mask - 1;
    const std::size_t hi_mask = ~lo_mask;
    const std::int64_t pairs = static_cast<std::int64_t>(dim >> 1);

#pragma omp parallel for if (parallel) schedule(static)
    for (std::int64_t p = 0; p < pairs; ++p) {
        const std::size_t i = static_cast<std::size_t>(p);
        const std::size_t i0 = ((i & hi_mask) << 1) | (i & lo_mask);
        const std::size_t i1 = i0 | mask;
        const std::complex<double> a0 = amps[i0];
        const std::complex<double> a1 = amps[i1];
        amps[i0] = inv_sqrt2 * (a0 + a1);
        amps[i1] = inv_sqrt2 * (a0 - a1);
    }
}

void cz_kernel(std::complex<double>* amps, std::size_t dim, int qubit_a, int qubit_b,
               bool parallel) {
    const std::size_t mask = (std::size_t{1} << qubit_a) | (std::size_t{1} << qubit_b);
    const std::int64_t count = static_cast<std::int64_t>(dim);

#pragma omp parallel for if (parallel) schedule(static)
    for (std::int64_t i = 0; i < count; ++i) {
        if ((static_cast<std::size_t>(i) & mask) == mask) {
            amps[i] = -amps[i];
        }
    }
}

void probs_kernel(const std::complex<double>* amps, std::size_t dim, double* out,
                  bool parallel) {
    const std::int64_t count = static_cast<std::int64_t>(dim);

#pragma omp parallel for if (parallel) schedule(static)
    for (std::int64_t i = 0; i < count; ++i) {
        out[i] = std::norm(amps[i]);
    }
}

} // namespace qgan::qsim::kernels
