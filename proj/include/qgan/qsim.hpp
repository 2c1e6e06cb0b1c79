#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace qgan::qsim {

using cplx = std::complex<double>;

constexpr int kMaxQubits = 12;

// Basis-index convention used everywhere in this project: qubit 0 is the
// least significant bit of the basis index. Every module that touches
// outcome labels goes through these helpers.
inline std::size_t dim_for(int n_qubits) { return std::size_t{1} << n_qubits; }
inline int bit_of(std::size_t index, int qubit) { return static_cast<int>((index >> qubit) & 1u); }

// Pure n-qubit state; amplitudes has length 2^n_qubits and unit norm.
struct StateVector {
    int n_qubits = 0;
    std::vector<cplx> amplitudes;

    std::size_t dim() const { return amplitudes.size(); }
};

// Discrete distribution over the 2^n integer labels.
struct Pmf {
    std::vector<double> probs;

    std::size_t size() const { return probs.size(); }
    double operator[](std::size_t i) const { return probs[i]; }

    static constexpr double kSumTol = 1e-9;
    // Throws std::invalid_argument on negative entries, bad normalization,
    // or a length that is not a power of two.
    void validate() const;
};

StateVector new_zero_state(int n_qubits);

StateVector apply_ry(StateVector state, int qubit, double angle);
StateVector apply_h(StateVector state, int qubit);
StateVector apply_cz(StateVector state, int qubit_a, int qubit_b);

Pmf measure_probs(const StateVector& state);

// Multinomial counts over the 2^n labels, drawn i.i.d. from measure_probs.
std::vector<std::int64_t> sample(const StateVector& state, std::int64_t shots,
                                 std::uint64_t rng_seed);

} // namespace qgan::qsim
