#include "qgan/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qgan/kernels.hpp"
#include "qgan/rng.hpp"

namespace qgan::qsim {

namespace {

bool use_parallel(std::size_t dim) { return dim >= kernels::kParallelCutoff; }

void check_qubit(const StateVector& state, int qubit) {
    if (qubit < 0 || qubit >= state.n_qubits) {
        throw std::out_of_range("qubit index " + std::to_string(qubit) +
                                " out of range for " + std::to_string(state.n_qubits) +
                                " qubits");
    }
}

} // namespace

void Pmf::validate() const {
    if (probs.empty() || (probs.size() & (probs.size() - 1)) != 0) {
        throw std::invalid_argument("pmf length must be a power of two, got " +
                                    std::to_string(probs.size()));
    }
    double sum = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0)) {
            throw std::invalid_argument("pmf entry negative or NaN");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > kSumTol) {
        throw std::invalid_argument("pmf does not sum to 1 (sum = " + std::to_string(sum) + ")");
    }
}

StateVector new_zero_state(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw std::invalid_argument("n_qubits must be in [1, " + std::to_string(kMaxQubits) +
                                    "], got " + std::to_string(n_qubits));
    }
    StateVector state;
    state.n_qubits = n_qubits;
    state.amplitudes.assign(dim_for(n_qubits), cplx{0.0, 0.0});
    state.amplitudes[0] = cplx{1.0, 0.0};
    return state;
}

StateVector apply_ry(StateVector state, int qubit, double angle) {
    check_qubit(state, qubit);
    if (!std::isfinite(angle)) {
        throw std::invalid_argument("rotation angle must be finite");
    }
    kernels::ry_kernel(state.amplitudes.data(), state.dim(), qubit, angle,
                       use_parallel(state.dim()));
    return state;
}

StateVector apply_h(StateVector state, int qubit) {
    check_qubit(state, qubit);
    kernels::h_kernel(state.amplitudes.data(), state.dim(), qubit, use_parallel(state.dim()));
    return state;
}

StateVector apply_cz(StateVector state, int qubit_a, int qubit_b) {
    check_qubit(state, qubit_a);
    check_qubit(state, qubit_b);
    if (qubit_a == qubit_b) {
        throw std::invalid_argument("cz requires two distinct qubits");
    }
    kernels::cz_kernel(state.amplitudes.data(), state.dim(), qubit_a, qubit_b,
                       use_parallel(state.dim()));
    return state;
}

Pmf measure_probs(const StateVector& state) {
    Pmf pmf;
    pmf.probs.resize(state.dim());
    kernels::probs_kernel(state.amplitudes.data(), state.dim(), pmf.probs.data(),
                          use_parallel(state.dim()));
    return pmf;
}

std::vector<std::int64_t> sample(const StateVector& state, std::int64_t shots,
                                 std::uint64_t rng_seed) {
    if (shots < 1) {
        throw std::invalid_argument("shots must be >= 1");
    }
    const Pmf pmf = measure_probs(state);
    const std::vector<double> cdf = cumulative_distribution(pmf.probs);
    Rng rng(rng_seed);
    std::vector<std::int64_t> counts(state.dim(), 0);
    for (std::int64_t s = 0; s < shots; ++s) {
        ++counts[sample_index(cdf, rng)];
    }
    return counts;
}

} // namespace qgan::qsim
