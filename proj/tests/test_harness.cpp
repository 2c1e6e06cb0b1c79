#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>

#include "qgan/harness.hpp"
#include "qgan/rng.hpp"

#include "test_util.hpp"

using namespace qgan;
using namespace qgan::harness;

namespace {

constexpr double kPi = std::numbers::pi;

qsim::Pmf make_pmf(std::vector<double> probs) {
    qsim::Pmf pmf;
    pmf.probs = std::move(probs);
    return pmf;
}

adversary::Discriminator random_disc(std::uint64_t seed) {
    adversary::Discriminator disc;
    disc.params.resize(adversary::Discriminator::kParamCount);
    Rng rng(seed);
    for (double& p : disc.params) {
        p = rng.uniform(-0.3, 0.3);
    }
    return disc;
}

generator::GeneratorCircuit random_circuit(Rng& rng, int n, int k) {
    std::vector<double> params(static_cast<std::size_t>(n) * (k + 1));
    for (double& p : params) {
        p = rng.uniform(-kPi, kPi);
    }
    generator::LabelPermutation perm;
    perm.mapping.resize(qsim::dim_for(n));
    std::iota(perm.mapping.begin(), perm.mapping.end(), 0);
    for (std::size_t i = perm.mapping.size(); i > 1; --i) {
        std::swap(perm.mapping[i - 1], perm.mapping[rng.next_u64() % i]);
    }
    return generator::build_circuit(n, k, generator::UniformRyInit{}, std::move(params),
                                    std::move(perm));
}

TrainConfig desk_config(InitKind kind) {
    TrainConfig config;
    config.n_qubits = 3;
    config.k = 2;
    config.init_kind = kind;
    config.target = {targets::LogNormal{1.0, 1.0}, 8};
    config.epochs = 500;
    config.grad_mode = GradMode::Exact;
    config.runs = 5;
    config.base_seed = 20240901;
    return config;
}

} // namespace

TEST_SUITE("harness") {

TEST_CASE("relative entropy hand values") {
    CHECK(relative_entropy(make_pmf({0.5, 0.5}), make_pmf({0.5, 0.5})) == 0.0);

    const double two_term = relative_entropy(make_pmf({0.5, 0.5}), make_pmf({0.25, 0.75}));
    CHECK(std::abs(two_term - (0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0))) <= 1e-15);
    CHECK(two_term == doctest::Approx(0.1438).epsilon(1e-3));

    const double one_term = relative_entropy(make_pmf({1.0, 0.0}), make_pmf({0.5, 0.5}));
    CHECK(std::abs(one_term - std::log(2.0)) <= 1e-15);

    CHECK_THROWS_AS(relative_entropy(make_pmf({1.0}), make_pmf({0.5, 0.5})),
                    std::invalid_argument);
}

TEST_CASE("relative entropy is non-negative and zero only at equality") {
    Rng rng(71);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto p = test_util::random_pmf(rng, 8);
        const auto q = test_util::random_pmf(rng, 8);
        CHECK(relative_entropy(p, q) >= 0.0);
        CHECK(relative_entropy(p, p) <= 1e-12);
    }
    // zero-mass target entries contribute nothing even against zero support
    CHECK(relative_entropy(make_pmf({1.0, 0.0}), make_pmf({1.0, 0.0})) == 0.0);
}

TEST_CASE("parameter shift vanishes under a constant discriminator") {
    Rng circuit_rng(11);
    const auto circuit = random_circuit(circuit_rng, 3, 2);
    adversary::Discriminator half;
    half.params.assign(adversary::Discriminator::kParamCount, 0.0);
    Rng rng(1);
    const auto grad = param_shift_gradient(circuit, half, GradMode::Exact, 100, rng);
    for (double g : grad) {
        CHECK(std::abs(g) <= 1e-12);
    }
}

TEST_CASE("exact parameter shift matches finite differences") {
    Rng rng(2025);
    for (int trial = 0; trial < 20; ++trial) {
        const auto circuit = random_circuit(rng, 3, 1);
        const auto disc = random_disc(3000 + trial);
        Rng shift_rng(1);
        const auto grad =
            param_shift_gradient(circuit, disc, GradMode::Exact, 100, shift_rng);

        for (std::size_t j = 0; j < circuit.params.size(); ++j) {
            auto probe = circuit;
            probe.params[j] = circuit.params[j] + 1e-6;
            const double up = adversary::gen_loss_from_pmf(disc, generator::generator_pmf(probe));
            probe.params[j] = circuit.params[j] - 1e-6;
            const double down =
                adversary::gen_loss_from_pmf(disc, generator::generator_pmf(probe));
            const double fd = (up - down) / 2e-6;
            CHECK(std::abs(fd - grad[j]) <= 1e-6);
        }
    }
}

TEST_CASE("sampled parameter shift stays within three standard errors") {
    Rng rng(909);
    const auto circuit = random_circuit(rng, 3, 1);
    const auto disc = random_disc(17);

    Rng exact_rng(1);
    const auto exact = param_shift_gradient(circuit, disc, GradMode::Exact, 0, exact_rng);

    const int shots = 1000000;
    Rng shots_rng(2);
    const auto sampled = param_shift_gradient(circuit, disc, GradMode::Shots, shots, shots_rng);

    // multinomial variance of sum_m c_m p_hat(m):
    //   (sum c^2 p - (sum c p)^2) / shots, for each of the +/- evaluations
    std::vector<double> log_d(8);
    for (int m = 0; m < 8; ++m) {
        log_d[m] = std::log(adversary::forward(disc, m));
    }
    for (std::size_t j = 0; j < circuit.params.size(); ++j) {
        double variance = 0.0;
        for (double sign : {1.0, -1.0}) {
            auto probe = circuit;
            probe.params[j] += sign * kPi / 2.0;
            const qsim::Pmf pmf = generator::generator_pmf(probe);
            double first = 0.0;
            double second = 0.0;
            for (int m = 0; m < 8; ++m) {
                const double c = 0.5 * log_d[m];
                first += c * pmf.probs[m];
                second += c * c * pmf.probs[m];
            }
            variance += (second - first * first) / shots;
        }
        const double se = std::sqrt(variance);
        CHECK(std::abs(sampled[j] - exact[j]) <= 3.0 * se + 1e-12);
    }
}

TEST_CASE("train_run with zero epochs reports the initial distribution") {
    TrainConfig config = desk_config(InitKind::OurMethod);
    config.epochs = 0;
    config.gen_init_weight_lo = 0.0;
    config.gen_init_weight_hi = 0.0;
    const RunRecord record = train_run(config, 99);
    REQUIRE(record.rel_entropy.size() == 1);

    const qsim::Pmf target = targets::discretize(config.target, config.tail_mode);
    const auto spec = initfit::make_init_spec(target);
    const double expected = relative_entropy(target, initfit::init_distribution(spec));
    CHECK(record.rel_entropy[0] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("fitted init starts closer than uniform") {
    TrainConfig ours = desk_config(InitKind::OurMethod);
    TrainConfig uniform = desk_config(InitKind::Uniform);
    ours.epochs = 0;
    uniform.epochs = 0;
    const RunRecord a = train_run(ours, 5);
    const RunRecord b = train_run(uniform, 5);
    CHECK(a.rel_entropy[0] < b.rel_entropy[0]);
}

TEST_CASE("train_run is deterministic") {
    TrainConfig config = desk_config(InitKind::OurMethod);
    config.epochs = 25;
    const RunRecord a = train_run(config, 31415);
    const RunRecord b = train_run(config, 31415);
    CHECK(a.rel_entropy == b.rel_entropy);
    CHECK(a.loss_g == b.loss_g);
    CHECK(a.loss_d == b.loss_d);
    CHECK(a.final_params == b.final_params);
    CHECK(a.final_pmf.probs == b.final_pmf.probs);

    const RunRecord c = train_run(config, 27182);
    CHECK(a.rel_entropy != c.rel_entropy);
}

TEST_CASE("shots mode is deterministic too") {
    TrainConfig config = desk_config(InitKind::Uniform);
    config.epochs = 5;
    config.grad_mode = GradMode::Shots;
    const RunRecord a = train_run(config, 7);
    const RunRecord b = train_run(config, 7);
    CHECK(a.final_params == b.final_params);
    CHECK(a.loss_g == b.loss_g);
}

TEST_CASE("traces cover every epoch and stay valid") {
    TrainConfig config = desk_config(InitKind::Uniform);
    config.epochs = 40;
    const RunRecord record = train_run(config, 8);
    REQUIRE(record.rel_entropy.size() == 41);
    REQUIRE(record.loss_g.size() == 41);
    REQUIRE(record.loss_d.size() == 41);
    for (double h : record.rel_entropy) {
        CHECK(std::isfinite(h));
        CHECK(h >= 0.0);
    }
    record.final_pmf.validate();
    CHECK(record.min_rel_entropy <= record.rel_entropy[0]);
    CHECK(record.min_rel_entropy == record.rel_entropy[record.min_rel_entropy_epoch]);
}

TEST_CASE("sweep with a single run collapses mean and min") {
    TrainConfig config = desk_config(InitKind::OurMethod);
    config.epochs = 10;
    config.runs = 1;
    const SweepSummary summary = sweep({config});
    REQUIRE(summary.cells.size() == 1);
    CHECK(summary.cells[0].mean == summary.cells[0].min);
    CHECK(summary.cells[0].stddev == 0.0);
    CHECK(summary.cells[0].runs_ok == 1);
}

TEST_CASE("sweep results do not depend on the worker count") {
    TrainConfig config = desk_config(InitKind::OurMethod);
    config.epochs = 15;
    config.runs = 4;
    TrainConfig other = desk_config(InitKind::Uniform);
    other.epochs = 15;
    other.runs = 4;

    const SweepSummary serial = sweep({config, other}, 1);
    const SweepSummary parallel = sweep({config, other}, 4);
    REQUIRE(serial.cells.size() == parallel.cells.size());
    for (std::size_t i = 0; i < serial.cells.size(); ++i) {
        CHECK(serial.cells[i].mean == parallel.cells[i].mean);
        CHECK(serial.cells[i].stddev == parallel.cells[i].stddev);
        CHECK(serial.cells[i].min == parallel.cells[i].min);
    }
    for (std::size_t ci = 0; ci < serial.records.size(); ++ci) {
        for (std::size_t ri = 0; ri < serial.records[ci].size(); ++ri) {
            CHECK(serial.records[ci][ri].final_params ==
                  parallel.records[ci][ri].final_params);
        }
    }
}

TEST_CASE("failed runs are flagged and excluded") {
    // point-mass target has zero spread, so the normal baseline cannot be fit
    TrainConfig config;
    config.n_qubits = 3;
    config.k = 1;
    config.init_kind = InitKind::Normal;
    std::vector<double> point(8, 0.0);
    point[2] = 1.0;
    config.target = {targets::CustomPmf{point}, 8};
    config.epochs = 1;
    config.runs = 2;
    const SweepSummary summary = sweep({config});
    CHECK(summary.cells[0].runs_ok == 0);
    CHECK(summary.cells[0].runs_total == 2);
    for (const auto& record : summary.records[0]) {
        CHECK_FALSE(record.ok);
        CHECK_FALSE(record.error.empty());
    }
}

TEST_CASE("normal init uses the fixed constants for the three-qubit log-normal") {
    TrainConfig config = desk_config(InitKind::Normal);
    const auto init = resolve_normal_init(config);
    CHECK(init.column0 == std::vector<double>{0.3580, 1.0903, 1.5255});
    CHECK(init.column1 == std::vector<double>{1.3651, 1.4932, -0.9092});
}

TEST_CASE("normal init prefit approximates the normal baseline") {
    TrainConfig config = desk_config(InitKind::Normal);
    config.target = {targets::Triangular{0.0, 2.0, 7.0}, 8};
    const auto init = resolve_normal_init(config);

    const auto [mean, stddev] = targets::moments(config.target);
    const qsim::Pmf normal_pmf =
        targets::discretize_normal(mean, stddev, 8, config.tail_mode);
    const auto circuit = generator::build_circuit(
        3, 0, init, std::vector<double>(3, 0.0));
    const double h = relative_entropy(normal_pmf, generator::generator_pmf(circuit));
    CHECK(h < 0.05);
}

TEST_CASE("normal init prefit round-trips through the cache") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "qgan_normal_cache_test";
    fs::remove_all(dir);

    TrainConfig config = desk_config(InitKind::Normal);
    config.target = {targets::Bimodal{}, 8};
    config.normal_init_cache_dir = dir.string();
    const auto first = resolve_normal_init(config);
    CHECK(fs::exists(dir));
    const auto second = resolve_normal_init(config);
    CHECK(first.column0 == second.column0);
    CHECK(first.column1 == second.column1);
    fs::remove_all(dir);
}

TEST_CASE("median relative entropy drops over the desk run" * doctest::timeout(300)) {
    TrainConfig config = desk_config(InitKind::Uniform);
    config.runs = 10;
    std::vector<double> initial;
    std::vector<double> final_values;
    const SweepSummary summary = sweep({config});
    for (const auto& record : summary.records[0]) {
        REQUIRE(record.ok);
        initial.push_back(record.rel_entropy.front());
        final_values.push_back(record.rel_entropy.back());
    }
    auto median = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        return 0.5 * (v[v.size() / 2] + v[(v.size() - 1) / 2]);
    };
    CHECK(median(final_values) < median(initial));
}

TEST_CASE("config validation") {
    TrainConfig config = desk_config(InitKind::OurMethod);
    config.batch_size = config.data_count + 1;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = desk_config(InitKind::OurMethod);
    config.n_qubits = 2; // grid no longer matches
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = desk_config(InitKind::OurMethod);
    config.runs = 0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}

} // TEST_SUITE
