#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "qgan/initfit.hpp"
#include "qgan/rng.hpp"

#include "test_util.hpp"

using namespace qgan;
using namespace qgan::initfit;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent oracle: pick theta on a fine grid minimizing |cos^2(theta/2) - r|.
double grid_search_angle(double ratio) {
    double best = 0.0;
    double best_err = 1e9;
    for (int i = 0; i <= 2000000; ++i) {
        const double theta = kPi / 2.0 * i / 2000000.0;
        const double c = std::cos(theta / 2.0);
        const double err = std::abs(c * c - ratio);
        if (err < best_err) {
            best_err = err;
            best = theta;
        }
    }
    return best;
}

qsim::Pmf make_pmf(std::vector<double> probs) {
    qsim::Pmf pmf;
    pmf.probs = std::move(probs);
    return pmf;
}

std::vector<int> rank_desc(const std::vector<double>& v) {
    std::vector<int> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return v[a] > v[b]; });
    return order;
}

// Random product target with super-increasing odds so ranked half-sets are
// exactly the bit slices: the fit must reproduce it bit-for-bit.
std::vector<double> separated_bit_probs(Rng& rng, int n) {
    std::vector<double> p(n);
    double odds_product = 1.0; // product of odds over already-assigned bits
    for (int i = n - 1; i >= 0; --i) {
        const double odds = odds_product * rng.uniform(1.3, 2.0);
        p[i] = odds / (1.0 + odds);
        odds_product *= odds;
    }
    return p;
}

} // namespace

TEST_SUITE("initfit") {

TEST_CASE("fit_angles anchors") {
    const auto uniform = fit_angles(make_pmf(std::vector<double>(8, 0.125)));
    REQUIRE(uniform.size() == 3);
    for (double a : uniform) {
        CHECK(std::abs(a - kPi / 2.0) <= 1e-12);
    }

    auto point = std::vector<double>(8, 0.0);
    point[5] = 1.0;
    for (double a : fit_angles(make_pmf(point))) {
        CHECK(a == 0.0);
    }
}

TEST_CASE("fit_angles two-qubit hand value and grid-search oracle") {
    const auto angles = fit_angles(make_pmf({0.4, 0.3, 0.2, 0.1}));
    REQUIRE(angles.size() == 2);
    CHECK(angles[0] == doctest::Approx(1.1593).epsilon(1e-4));
    CHECK(angles[1] == doctest::Approx(1.4274).epsilon(1e-4));

    // ratios are 0.7 and 4/7; the grid oracle must land on the same angles
    CHECK(std::abs(angles[0] - grid_search_angle(0.7)) < 1e-5);
    CHECK(std::abs(angles[1] - grid_search_angle(4.0 / 7.0)) < 1e-5);
}

TEST_CASE("sorted_mass structure") {
    const SortedMass mass = sorted_mass(make_pmf({0.1, 0.4, 0.3, 0.2}));
    CHECK(mass.sorted_probs == std::vector<double>{0.4, 0.3, 0.2, 0.1});
    CHECK(mass.half_sums[0] == 1.0);
    CHECK(mass.half_sums[1] == doctest::Approx(0.7));
    CHECK(mass.half_sums[2] == doctest::Approx(0.4));
    CHECK(mass.ratios[0] == doctest::Approx(0.7));
    CHECK(mass.ratios[1] == doctest::Approx(4.0 / 7.0));
}

TEST_CASE("literal angle formula exposed for comparison") {
    const auto literal = fit_angles(make_pmf(std::vector<double>(8, 0.125)),
                                    AngleFormula::Literal);
    // 2*acos(1/2) = 2pi/3, outside [0, pi/2]; the sqrt form is the default.
    for (double a : literal) {
        CHECK(a == doctest::Approx(2.0 * kPi / 3.0));
    }
}

TEST_CASE("angle range on random distributions") {
    Rng rng(31);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + static_cast<int>(rng.next_u64() % 4);
        const auto pmf = test_util::random_pmf(rng, std::size_t{1} << n);
        for (double a : fit_angles(pmf)) {
            CHECK(a >= 0.0);
            CHECK(a <= kPi / 2.0 + 1e-12);
        }
    }
}

TEST_CASE("fit_angles rejects invalid input") {
    CHECK_THROWS_AS(fit_angles(make_pmf({0.5, 0.6})), std::invalid_argument);
    CHECK_THROWS_AS(fit_angles(make_pmf({1.5, -0.5})), std::invalid_argument);
}

TEST_CASE("build_permutation worked example") {
    // Exhaustive rank computation oracle for the 2-qubit target
    // [0.1, 0.4, 0.3, 0.2] with angles fitted above: per-bit |0> probabilities
    // are 0.7 (bit 0) and 4/7 (bit 1), so the product over outcome indices is
    // [0.4, 0.1714, 0.3, 0.1286]; ranks align outcomes (0,2,1,3) with labels
    // (1,2,3,0).
    const qsim::Pmf target = make_pmf({0.1, 0.4, 0.3, 0.2});
    const auto angles = fit_angles(make_pmf({0.4, 0.3, 0.2, 0.1}));
    const qsim::Pmf product = induced_product_pmf(angles);
    CHECK(product.probs[0] == doctest::Approx(0.4));
    CHECK(product.probs[1] == doctest::Approx(0.3 * 4.0 / 7.0)); // 0.1714
    CHECK(product.probs[2] == doctest::Approx(0.3));
    CHECK(product.probs[3] == doctest::Approx(0.3 * 3.0 / 7.0)); // 0.1286

    const auto perm = build_permutation(target, angles);
    CHECK(perm.mapping == std::vector<int>{1, 3, 2, 0});
}

TEST_CASE("build_permutation of a uniform target is the identity") {
    const auto target = make_pmf(std::vector<double>(8, 0.125));
    const auto perm = build_permutation(target, fit_angles(target));
    CHECK(perm.is_identity());
}

TEST_CASE("build_permutation dimension mismatch") {
    CHECK_THROWS_AS(build_permutation(make_pmf({0.5, 0.5}), {0.3, 0.4, 0.5}),
                    std::invalid_argument);
}

TEST_CASE("make_init_spec worked example") {
    const InitSpec spec = make_init_spec(make_pmf({0.4, 0.3, 0.2, 0.1}));
    const qsim::Pmf induced = init_distribution(spec);
    CHECK(induced.probs[0] == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(induced.probs[1] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(induced.probs[2] == doctest::Approx(0.3 * 4.0 / 7.0).epsilon(1e-10));
    CHECK(induced.probs[3] == doctest::Approx(0.3 * 3.0 / 7.0).epsilon(1e-10));
}

TEST_CASE("make_init_spec of uniform target") {
    const InitSpec spec = make_init_spec(make_pmf(std::vector<double>(8, 0.125)));
    CHECK(spec.permutation.is_identity());
    const qsim::Pmf induced = init_distribution(spec);
    for (double p : induced.probs) {
        CHECK(p == doctest::Approx(0.125).epsilon(1e-12));
    }
}

TEST_CASE("mass matching at nested splits") {
    Rng rng(47);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 3);
        const auto target = test_util::random_pmf(rng, std::size_t{1} << n);
        const SortedMass mass = sorted_mass(target);
        const qsim::Pmf product = induced_product_pmf(fit_angles(target));
        for (int i = 1; i <= n; ++i) {
            // outcomes whose first i split bits are all zero
            const std::size_t low_mask = (std::size_t{1} << i) - 1;
            double got = 0.0;
            for (std::size_t m = 0; m < product.size(); ++m) {
                if ((m & low_mask) == 0) {
                    got += product.probs[m];
                }
            }
            CHECK(std::abs(got - mass.half_sums[i]) <= 1e-12);
        }
    }
}

TEST_CASE("rank alignment on random targets") {
    Rng rng(53);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + static_cast<int>(rng.next_u64() % 3);
        const auto target = test_util::random_pmf(rng, std::size_t{1} << n);
        const InitSpec spec = make_init_spec(target);
        const qsim::Pmf induced = init_distribution(spec);
        CHECK(rank_desc(induced.probs) == rank_desc(target.probs));
    }
}

TEST_CASE("exact reproduction of rank-separated product targets") {
    Rng rng(61);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 3);
        const auto bit_probs = separated_bit_probs(rng, n);
        qsim::Pmf target;
        target.probs.resize(std::size_t{1} << n);
        for (std::size_t m = 0; m < target.size(); ++m) {
            double p = 1.0;
            for (int i = 0; i < n; ++i) {
                p *= qsim::bit_of(m, i) == 0 ? bit_probs[i] : 1.0 - bit_probs[i];
            }
            target.probs[m] = p;
        }
        // scramble the labels; the fit must still reproduce the distribution
        std::vector<int> shuffle(target.size());
        std::iota(shuffle.begin(), shuffle.end(), 0);
        for (std::size_t i = shuffle.size(); i > 1; --i) {
            std::swap(shuffle[i - 1], shuffle[rng.next_u64() % i]);
        }
        qsim::Pmf relabeled;
        relabeled.probs.resize(target.size());
        for (std::size_t m = 0; m < target.size(); ++m) {
            relabeled.probs[shuffle[m]] = target.probs[m];
        }

        const InitSpec spec = make_init_spec(relabeled);
        const qsim::Pmf induced = init_distribution(spec);
        CHECK(test_util::max_abs_diff(induced.probs, relabeled.probs) <= 1e-12);
    }
}

TEST_CASE("argmax value preserved on arbitrary product targets") {
    Rng rng(67);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 3);
        std::vector<double> bit_probs(n);
        for (double& p : bit_probs) {
            p = rng.uniform(0.5, 1.0);
        }
        qsim::Pmf target;
        target.probs.resize(std::size_t{1} << n);
        for (std::size_t m = 0; m < target.size(); ++m) {
            double p = 1.0;
            for (int i = 0; i < n; ++i) {
                p *= qsim::bit_of(m, i) == 0 ? bit_probs[i] : 1.0 - bit_probs[i];
            }
            target.probs[m] = p;
        }
        const InitSpec spec = make_init_spec(target);
        const qsim::Pmf induced = init_distribution(spec);
        const auto target_order = rank_desc(target.probs);
        CHECK(rank_desc(induced.probs) == target_order);
        // the top product is always reproduced exactly
        CHECK(induced.probs[target_order[0]] ==
              doctest::Approx(target.probs[target_order[0]]).epsilon(1e-12));
    }
}

TEST_CASE("large zero regions fit without division errors") {
    const auto spec = make_init_spec(make_pmf({0.5, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0}));
    for (double a : spec.angles) {
        CHECK(std::isfinite(a));
        CHECK(a >= 0.0);
        CHECK(a <= kPi / 2.0 + 1e-12);
    }
    const qsim::Pmf induced = init_distribution(spec);
    CHECK(induced.probs[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(induced.probs[1] == doctest::Approx(0.5).epsilon(1e-12));
}

} // TEST_SUITE
