#include "qgan/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qgan/rng.hpp"

namespace qgan::generator {

namespace {

void apply_ry_column(qsim::StateVector& state, const std::vector<double>& angles_by_qubit) {
    for (int q = 0; q < state.n_qubits; ++q) {
        state = qsim::apply_ry(std::move(state), q, angles_by_qubit[q]);
    }
}

void apply_cz_block(qsim::StateVector& state) {
    for (const auto& [a, b] : cz_block(state.n_qubits)) {
        state = qsim::apply_cz(std::move(state), a, b);
    }
}

// The fixed init circuit entangles along the open chain only, one rung
// fewer than the trainable block.
void apply_cz_line(qsim::StateVector& state) {
    for (int q = 0; q + 1 < state.n_qubits; ++q) {
        state = qsim::apply_cz(std::move(state), q, q + 1);
    }
}

void apply_init(qsim::StateVector& state, const InitMode& init) {
    const int n = state.n_qubits;
    std::visit(
        [&](const auto& mode) {
            using T = std::decay_t<decltype(mode)>;
            if constexpr (std::is_same_v<T, OurMethodInit>) {
                if (static_cast<int>(mode.angles.size()) != n) {
                    throw std::invalid_argument("init angle count does not match qubit count");
                }
                for (int q = 0; q < n; ++q) {
                    state = qsim::apply_ry(std::move(state), q, mode.angles[q]);
                }
            } else if constexpr (std::is_same_v<T, UniformHInit>) {
                for (int q = 0; q < n; ++q) {
                    state = qsim::apply_h(std::move(state), q);
                }
            } else if constexpr (std::is_same_v<T, UniformRyInit>) {
                for (int q = 0; q < n; ++q) {
                    state = qsim::apply_ry(std::move(state), q, std::numbers::pi / 2.0);
                }
            } else if constexpr (std::is_same_v<T, NormalFixedInit>) {
                if (static_cast<int>(mode.column0.size()) != n ||
                    static_cast<int>(mode.column1.size()) != n) {
                    throw std::invalid_argument("init column length does not match qubit count");
                }
                apply_ry_column(state, mode.column0);
                apply_cz_line(state);
                apply_ry_column(state, mode.column1);
            } else {
                static_assert(std::is_same_v<T, FoldedInit>);
            }
        },
        init);
}

} // namespace

LabelPermutation LabelPermutation::identity(std::size_t n_labels) {
    LabelPermutation perm;
    perm.mapping.resize(n_labels);
    for (std::size_t i = 0; i < n_labels; ++i) {
        perm.mapping[i] = static_cast<int>(i);
    }
    return perm;
}

bool LabelPermutation::is_identity() const {
    for (std::size_t i = 0; i < mapping.size(); ++i) {
        if (mapping[i] != static_cast<int>(i)) {
            return false;
        }
    }
    return true;
}

void LabelPermutation::validate() const {
    std::vector<char> seen(mapping.size(), 0);
    for (int label : mapping) {
        if (label < 0 || label >= static_cast<int>(mapping.size()) || seen[label]) {
            throw std::invalid_argument("label mapping is not a permutation");
        }
        seen[label] = 1;
    }
}

std::vector<std::pair<int, int>> cz_block(int n_qubits) {
    std::vector<std::pair<int, int>> pairs;
    if (n_qubits == 2) {
        pairs.emplace_back(0, 1);
    } else if (n_qubits >= 3) {
        for (int i = 0; i < n_qubits; ++i) {
            pairs.emplace_back(i, (i + 1) % n_qubits);
        }
    }
    return pairs;
}

GeneratorCircuit build_circuit(int n_qubits, int reps, InitMode init,
                               std::vector<double> params, LabelPermutation permutation) {
    if (reps < 0) {
        throw std::invalid_argument("repetition count must be >= 0");
    }
    const int expected = n_qubits * (reps + 1);
    if (static_cast<int>(params.size()) != expected) {
        throw std::invalid_argument("expected " + std::to_string(expected) +
                                    " parameters, got " + std::to_string(params.size()));
    }
    GeneratorCircuit circuit;
    circuit.n_qubits = n_qubits;
    circuit.reps = reps;
    circuit.init = std::move(init);
    circuit.params = std::move(params);
    if (permutation.mapping.empty()) {
        permutation = LabelPermutation::identity(qsim::dim_for(n_qubits));
    }
    permutation.validate();
    if (permutation.mapping.size() != qsim::dim_for(n_qubits)) {
        throw std::invalid_argument("permutation length does not match label count");
    }
    circuit.permutation = std::move(permutation);
    return circuit;
}

qsim::StateVector evaluate_state(const GeneratorCircuit& circuit) {
    qsim::StateVector state = qsim::new_zero_state(circuit.n_qubits);
    apply_init(state, circuit.init);
    const int n = circuit.n_qubits;
    for (int q = 0; q < n; ++q) {
        state = qsim::apply_ry(std::move(state), q, circuit.params[q]);
    }
    for (int rep = 1; rep <= circuit.reps; ++rep) {
        apply_cz_block(state);
        for (int q = 0; q < n; ++q) {
            state = qsim::apply_ry(std::move(state), q, circuit.params[rep * n + q]);
        }
    }
    return state;
}

qsim::Pmf generator_pmf(const GeneratorCircuit& circuit) {
    const qsim::Pmf raw = measure_probs(evaluate_state(circuit));
    qsim::Pmf out;
    out.probs.resize(raw.size());
    for (std::size_t m = 0; m < raw.size(); ++m) {
        out.probs[circuit.permutation.mapping[m]] = raw.probs[m];
    }
    return out;
}

std::vector<int> generator_sample(const GeneratorCircuit& circuit, std::int64_t shots,
                                  std::uint64_t rng_seed) {
    if (shots < 1) {
        throw std::invalid_argument("shots must be >= 1");
    }
    const qsim::Pmf raw = measure_probs(evaluate_state(circuit));
    const std::vector<double> cdf = cumulative_distribution(raw.probs);
    Rng rng(rng_seed);
    std::vector<int> labels(static_cast<std::size_t>(shots));
    for (auto& label : labels) {
        label = circuit.permutation.mapping[sample_index(cdf, rng)];
    }
    return labels;
}

GeneratorCircuit fold_init(GeneratorCircuit circuit) {
    const int n = circuit.n_qubits;
    if (const auto* our = std::get_if<OurMethodInit>(&circuit.init)) {
        for (int q = 0; q < n; ++q) {
            circuit.params[q] += our->angles[q];
        }
    } else if (std::holds_alternative<UniformRyInit>(circuit.init)) {
        for (int q = 0; q < n; ++q) {
            circuit.params[q] += std::numbers::pi / 2.0;
        }
    } else {
        throw std::invalid_argument("init stage is not a single rotation column; cannot fold");
    }
    circuit.init = FoldedInit{};
    return circuit;
}

} // namespace qgan::generator
