#pragma once

#include <complex>
#include <cstddef>

namespace qgan::qsim::kernels {

// States below this dimension are updated in the calling thread; the OpenMP
// fork costs more than the loop for small registers.
constexpr std::size_t kParallelCutoff = std::size_t{1} << 10;

// In-place gate kernels over a 2^n amplitude array. `parallel` selects the
// OpenMP path; callers pass dim >= kParallelCutoff unless benchmarking.
void ry_kernel(std::complex<double>* amps, std::size_t dim, int qubit, double angle,
               bool parallel);
void h_kernel(std::complex<double>* amps, std::size_t dim, int qubit, bool parallel);
void cz_kernel(std::complex<double>* amps, std::size_t dim, int qubit_a, int qubit_b,
               bool parallel);
void probs_kernel(const std::complex<double>* amps, std::size_t dim, double* out,
                  bool parallel);

} // namespace qgan::qsim::kernels
