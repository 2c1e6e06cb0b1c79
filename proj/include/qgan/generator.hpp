#pragma once

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "qgan/qsim.hpp"

namespace qgan::generator {

// Bijective relabeling of measurement outcomes; mapping[m] is the output
// label emitted when the circuit measures outcome m.
struct LabelPermutation {
    std::vector<int> mapping;

    static LabelPermutation identity(std::size_t n_labels);
    bool is_identity() const;
    // Throws std::invalid_argument unless mapping is a permutation of 0..N-1.
    void validate() const;
};

// Initialization stage variants, each acting on |0...0> before the trainable
// layers.
struct OurMethodInit {
    // Fitted rotation angles; angles[i] rotates qubit i, so bit i of the
    // outcome has probability cos^2(angles[i]/2) of reading 0.
    std::vector<double> angles;
};
struct UniformHInit {};
struct UniformRyInit {};
struct NormalFixedInit {
    // Two rotation columns indexed by qubit, separated by CZ gates along the
    // open chain (i, i+1).
    std::vector<double> column0;
    std::vector<double> column1;
};
struct FoldedInit {};

using InitMode = std::variant<OurMethodInit, UniformHInit, UniformRyInit, NormalFixedInit,
                              FoldedInit>;

// Ansatz: Init -> Ry column (params layer 0) -> [CZ block -> Ry column] x k,
// with a classical relabeling applied at readout.
struct GeneratorCircuit {
    int n_qubits = 0;
    int reps = 0; // k
    InitMode init;
    std::vector<double> params; // length n_qubits * (reps + 1)
    LabelPermutation permutation;

    int n_params() const { return n_qubits * (reps + 1); }
};

// Entangler wiring: {(0,1)} for two qubits, the ring {(i, i+1 mod n)}
// otherwise; for n = 3 this is {(0,1),(1,2),(0,2)}.
std::vector<std::pair<int, int>> cz_block(int n_qubits);

GeneratorCircuit build_circuit(int n_qubits, int reps, InitMode init,
                               std::vector<double> params,
                               LabelPermutation permutation = {});

// Runs the circuit on |0...0>.
qsim::StateVector evaluate_state(const GeneratorCircuit& circuit);

// Measurement distribution after relabeling: out[mapping[m]] = raw[m].
qsim::Pmf generator_pmf(const GeneratorCircuit& circuit);

// Output labels for `shots` measurements, relabeled per sample. The
// permutation is applied classically; no extra gates are involved.
std::vector<int> generator_sample(const GeneratorCircuit& circuit, std::int64_t shots,
                                  std::uint64_t rng_seed);

// Merges a pure-Ry init column into params layer 0 (Ry(a)Ry(b) = Ry(a+b)).
// Only OurMethodInit and UniformRyInit are foldable.
GeneratorCircuit fold_init(GeneratorCircuit circuit);

} // namespace qgan::generator
