#pragma once

#include <vector>

#include "qgan/generator.hpp"
#include "qgan/qsim.hpp"

namespace qgan::initfit {

enum class AngleFormula {
    Sqrt,    // theta = 2*acos(sqrt(r)); makes P(|0>) equal the mass ratio r
    Literal, // theta = 2*acos(r); kept for comparison experiments
};

// One rotation angle per qubit plus the readout relabeling.
struct InitSpec {
    std::vector<double> angles; // computation order, each in [0, pi/2] for Sqrt
    generator::LabelPermutation permutation;
};

// Intermediate quantities of the fit: target probabilities sorted descending,
// nested top-half sums u_i (u_0 = 1), and the ratios r_i = u_i / u_{i-1}.
struct SortedMass {
    std::vector<double> sorted_probs;
    std::vector<double> half_sums;
    std::vector<double> ratios;
};

SortedMass sorted_mass(const qsim::Pmf& target);

// Per-qubit rotation angles such that at split i the measured probability of
// |0> equals the ratio of the top-half mass to the previous level's mass.
std::vector<double> fit_angles(const qsim::Pmf& target,
                               AngleFormula formula = AngleFormula::Sqrt);

// Product distribution the fitted angles induce over outcome indices:
// P(bit_i of outcome = 0) = cos^2(angles[i]/2) under the qsim bit order.
qsim::Pmf induced_product_pmf(const std::vector<double>& angles);

// Aligns the ranked product distribution with the ranked target: the outcome
// of rank j is sent to the label of rank j (ties broken by ascending index in
// both orders).
generator::LabelPermutation build_permutation(const qsim::Pmf& target,
                                              const std::vector<double>& angles);

// fit_angles + build_permutation. The induced initial distribution places its
// largest entry on the target's argmax label.
InitSpec make_init_spec(const qsim::Pmf& target,
                        AngleFormula formula = AngleFormula::Sqrt);

// Initial distribution the fitted stage produces before any training: the
// induced product masses re-indexed through the permutation.
qsim::Pmf init_distribution(const InitSpec& spec);

} // namespace qgan::initfit
