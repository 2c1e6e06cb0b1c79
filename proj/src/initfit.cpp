#include "qgan/initfit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qgan::initfit {

namespace {

// Indices ordered by descending value, ties by ascending index.
std::vector<int> rank_descending(const std::vector<double>& values) {
    std::vector<int> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return values[a] > values[b]; });
    return order;
}

int qubits_for(const qsim::Pmf& pmf) {
    int n = 0;
    while ((std::size_t{1} << n) < pmf.size()) {
        ++n;
    }
    return n;
}

} // namespace

SortedMass sorted_mass(const qsim::Pmf& target) {
    target.validate();
    SortedMass out;
    out.sorted_probs = target.probs;
    std::sort(out.sorted_probs.begin(), out.sorted_probs.end(), std::greater<>());

    const int n = qubits_for(target);
    out.half_sums.resize(n + 1);
    out.ratios.resize(n);
    out.half_sums[0] = 1.0; // u_0 convention
    for (int i = 1; i <= n; ++i) {
        const std::size_t top = target.size() >> i;
        out.half_sums[i] =
            std::accumulate(out.sorted_probs.begin(), out.sorted_probs.begin() + top, 0.0);
        // u_{i-1} > 0 always holds for a valid pmf (the top set contains the
        // maximum); the guard covers denormal edge cases only.
        out.ratios[i - 1] =
            out.half_sums[i - 1] > 0.0 ? out.half_sums[i] / out.half_sums[i - 1] : 1.0;
    }
    return out;
}

std::vector<double> fit_angles(const qsim::Pmf& target, AngleFormula formula) {
    const SortedMass mass = sorted_mass(target);
    std::vector<double> angles(mass.ratios.size());
    for (std::size_t i = 0; i < mass.ratios.size(); ++i) {
        const double r = std::clamp(mass.ratios[i], 0.0, 1.0);
        const double arg = formula == AngleFormula::Sqrt ? std::sqrt(r) : r;
        angles[i] = 2.0 * std::acos(arg);
    }
    return angles;
}

qsim::Pmf induced_product_pmf(const std::vector<double>& angles) {
    const int n = static_cast<int>(angles.size());
    std::vector<double> p_zero(n);
    for (int i = 0; i < n; ++i) {
        // half-angle form: exact 1/2 at pi/2, exact 0/1 at the endpoints
        p_zero[i] = 0.5 * (1.0 + std::cos(angles[i]));
    }
    qsim::Pmf pmf;
    pmf.probs.assign(qsim::dim_for(n), 1.0);
    for (std::size_t m = 0; m < pmf.size(); ++m) {
        for (int i = 0; i < n; ++i) {
            pmf.probs[m] *= qsim::bit_of(m, i) == 0 ? p_zero[i] : 1.0 - p_zero[i];
        }
    }
    return pmf;
}

generator::LabelPermutation build_permutation(const qsim::Pmf& target,
                                              const std::vector<double>& angles) {
    target.validate();
    if (qsim::dim_for(static_cast<int>(angles.size())) != target.size()) {
        throw std::invalid_argument("angle count does not match target label count");
    }
    const qsim::Pmf product = induced_product_pmf(angles);
    const std::vector<int> outcome_rank = rank_descending(product.probs);
    const std::vector<int> label_rank = rank_descending(target.probs);

    generator::LabelPermutation perm;
    perm.mapping.resize(target.size());
    for (std::size_t j = 0; j < target.size(); ++j) {
        perm.mapping[outcome_rank[j]] = label_rank[j];
    }
    return perm;
}

InitSpec make_init_spec(const qsim::Pmf& target, AngleFormula formula) {
    InitSpec spec;
    spec.angles = fit_angles(target, formula);
    spec.permutation = build_permutation(target, spec.angles);
    return spec;
}

qsim::Pmf init_distribution(const InitSpec& spec) {
    const qsim::Pmf product = induced_product_pmf(spec.angles);
    qsim::Pmf out;
    out.probs.resize(product.size());
    for (std::size_t m = 0; m < product.size(); ++m) {
        out.probs[spec.permutation.mapping[m]] = product.probs[m];
    }
    return out;
}

} // namespace qgan::initfit
