#include "qgan/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include <omp.h>

#include "qgan/rng.hpp"

namespace qgan::harness {

namespace {

constexpr double kProbFloor = 1e-12;

// Fixed two-column init that loads the normal baseline for the 3-qubit
// log-normal target.
constexpr double kLogNormalInitColumn0[3] = {0.3580, 1.0903, 1.5255};
constexpr double kLogNormalInitColumn1[3] = {1.3651, 1.4932, -0.9092};

qsim::Pmf two_column_pmf(const std::vector<double>& col0, const std::vector<double>& col1) {
    const int n = static_cast<int>(col0.size());
    generator::GeneratorCircuit circuit = generator::build_circuit(
        n, 0, generator::NormalFixedInit{col0, col1}, std::vector<double>(n, 0.0));
    return generator::generator_pmf(circuit);
}

// Derivative-free fit of the two-column init against a discretized normal:
// cyclic coordinate search with step halving, multistart, bounded evaluation
// budget. Deterministic for a fixed seed.
std::pair<std::vector<double>, std::vector<double>>
fit_two_column_init(const qsim::Pmf& normal_pmf, int n_qubits, std::uint64_t seed,
                    int max_evals = 10000) {
    const int dims = 2 * n_qubits;
    Rng rng(seed);
    int evals = 0;

    auto objective = [&](const std::vector<double>& x) {
        ++evals;
        std::vector<double> col0(x.begin(), x.begin() + n_qubits);
        std::vector<double> col1(x.begin() + n_qubits, x.end());
        return relative_entropy(normal_pmf, two_column_pmf(col0, col1));
    };

    std::vector<double> best;
    double best_value = std::numeric_limits<double>::infinity();
    const int starts = 4;
    for (int s = 0; s < starts && evals < max_evals; ++s) {
        std::vector<double> x(dims);
        for (double& v : x) {
            v = rng.uniform(-std::numbers::pi, std::numbers::pi);
        }
        double value = objective(x);
        double step = 0.8;
        while (step > 1e-4 && evals + 2 * dims < max_evals / starts * (s + 1)) {
            bool improved = false;
            for (int d = 0; d < dims; ++d) {
                for (double delta : {step, -step}) {
                    std::vector<double> trial = x;
                    trial[d] += delta;
                    const double trial_value = objective(trial);
                    if (trial_value < value) {
                        x = std::move(trial);
                        value = trial_value;
                        improved = true;
                        break;
                    }
                }
            }
            if (!improved) {
                step *= 0.5;
            }
        }
        if (value < best_value) {
            best_value = value;
            best = x;
        }
    }
    return {std::vector<double>(best.begin(), best.begin() + n_qubits),
            std::vector<double>(best.begin() + n_qubits, best.end())};
}

std::string normal_cache_path(const TrainConfig& config) {
    return (std::filesystem::path(config.normal_init_cache_dir) /
            ("normal_init_" + targets::target_name(config.target) + "_" +
             std::to_string(config.n_qubits) + "q.json"))
        .string();
}

qsim::Pmf exact_or_sampled_pmf(const generator::GeneratorCircuit& circuit, GradMode mode,
                               int shots, Rng& rng) {
    if (mode == GradMode::Exact) {
        return generator::generator_pmf(circuit);
    }
    const qsim::StateVector state = generator::evaluate_state(circuit);
    const qsim::Pmf raw = qsim::measure_probs(state);
    const std::vector<double> cdf = cumulative_distribution(raw.probs);
    std::vector<double> counts(raw.size(), 0.0);
    for (int s = 0; s < shots; ++s) {
        counts[sample_index(cdf, rng)] += 1.0;
    }
    qsim::Pmf pmf;
    pmf.probs.resize(raw.size());
    for (std::size_t m = 0; m < raw.size(); ++m) {
        pmf.probs[circuit.permutation.mapping[m]] = counts[m] / shots;
    }
    return pmf;
}

double population_stddev(const std::vector<double>& values, double mean) {
    if (values.size() < 2) {
        return 0.0;
    }
    double acc = 0.0;
    for (double v : values) {
        acc += (v - mean) * (v - mean);
    }
    return std::sqrt(acc / values.size());
}

} // namespace

void TrainConfig::validate() const {
    target.validate();
    if (n_qubits < 1 || n_qubits > qsim::kMaxQubits) {
        throw std::invalid_argument("n_qubits out of simulator range");
    }
    if (target.grid_points != static_cast<int>(qsim::dim_for(n_qubits))) {
        throw std::invalid_argument("target grid does not match 2^n_qubits");
    }
    if (k < 0) {
        throw std::invalid_argument("k must be >= 0");
    }
    if (epochs < 0) {
        throw std::invalid_argument("epochs must be >= 0");
    }
    if (data_count < 1 || batch_size < 1 || gen_shots < 1 || shift_shots < 1) {
        throw std::invalid_argument("all sample counts must be >= 1");
    }
    if (batch_size > data_count) {
        throw std::invalid_argument("batch_size must not exceed data_count");
    }
    if (runs < 1) {
        throw std::invalid_argument("runs must be >= 1");
    }
    if (!(gen_init_weight_lo <= gen_init_weight_hi)) {
        throw std::invalid_argument("invalid initial-weight range");
    }
}

double relative_entropy(const qsim::Pmf& p, const qsim::Pmf& q) {
    if (p.size() != q.size()) {
        throw std::invalid_argument("relative entropy requires equal-length distributions");
    }
    double h = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p.probs[i] <= 0.0) {
            continue;
        }
        h += p.probs[i] * std::log(p.probs[i] / std::max(q.probs[i], kProbFloor));
    }
    return h;
}

std::vector<double> param_shift_gradient(const generator::GeneratorCircuit& circuit,
                                         const adversary::Discriminator& disc,
                                         GradMode grad_mode, int shift_shots, Rng& rng) {
    const std::size_t n_labels = qsim::dim_for(circuit.n_qubits);
    std::vector<double> log_d(n_labels);
    for (std::size_t m = 0; m < n_labels; ++m) {
        log_d[m] = std::log(
            std::max(adversary::forward(disc, static_cast<double>(m)), kProbFloor));
    }

    std::vector<double> grad(circuit.params.size(), 0.0);
    generator::GeneratorCircuit shifted = circuit;
    for (std::size_t j = 0; j < circuit.params.size(); ++j) {
        shifted.params[j] = circuit.params[j] + std::numbers::pi / 2.0;
        const qsim::Pmf plus = exact_or_sampled_pmf(shifted, grad_mode, shift_shots, rng);
        shifted.params[j] = circuit.params[j] - std::numbers::pi / 2.0;
        const qsim::Pmf minus = exact_or_sampled_pmf(shifted, grad_mode, shift_shots, rng);
        shifted.params[j] = circuit.params[j];

        double g = 0.0;
        for (std::size_t m = 0; m < n_labels; ++m) {
            g -= 0.5 * (plus.probs[m] - minus.probs[m]) * log_d[m];
        }
        grad[j] = g;
    }
    return grad;
}

generator::NormalFixedInit resolve_normal_init(const TrainConfig& config) {
    const auto* ln = std::get_if<targets::LogNormal>(&config.target.kind);
    if (ln != nullptr && config.n_qubits == 3 && ln->mu == 1.0 && ln->sigma == 1.0) {
        return generator::NormalFixedInit{
            {kLogNormalInitColumn0[0], kLogNormalInitColumn0[1], kLogNormalInitColumn0[2]},
            {kLogNormalInitColumn1[0], kLogNormalInitColumn1[1], kLogNormalInitColumn1[2]}};
    }

    const auto [mean, stddev] = targets::moments(config.target);
    if (!(stddev > 0.0)) {
        throw std::invalid_argument("normal init undefined: target has zero spread");
    }

    std::string cache_file;
    if (!config.normal_init_cache_dir.empty()) {
        cache_file = normal_cache_path(config);
        std::ifstream in(cache_file);
        if (in) {
            const auto parsed = nlohmann::json::parse(in);
            if (parsed.value("mean", 0.0) == mean && parsed.value("stddev", 0.0) == stddev) {
                return generator::NormalFixedInit{
                    parsed.at("column0").get<std::vector<double>>(),
                    parsed.at("column1").get<std::vector<double>>()};
            }
        }
    }

    const qsim::Pmf normal_pmf =
        targets::discretize_normal(mean, stddev, config.target.grid_points, config.tail_mode);

    auto [col0, col1] = fit_two_column_init(normal_pmf, config.n_qubits,
                                            config.base_seed ^ 0x6e6f726dULL);
    if (!cache_file.empty()) {
        std::filesystem::create_directories(config.normal_init_cache_dir);
        nlohmann::json out{{"mean", mean},
                           {"stddev", stddev},
                           {"column0", col0},
                           {"column1", col1}};
        // temp-and-rename so concurrent workers never see a torn file
        const std::string tmp = cache_file + "." + std::to_string(omp_get_thread_num()) +
                                ".tmp";
        std::ofstream(tmp) << out.dump(2) << "\n";
        std::filesystem::rename(tmp, cache_file);
    }
    return generator::NormalFixedInit{std::move(col0), std::move(col1)};
}

std::pair<generator::InitMode, generator::LabelPermutation>
make_initial_stage(const TrainConfig& config, const qsim::Pmf& target_pmf) {
    const std::size_t n_labels = qsim::dim_for(config.n_qubits);
    switch (config.init_kind) {
    case InitKind::OurMethod: {
        const initfit::InitSpec spec = initfit::make_init_spec(target_pmf, config.angle_formula);
        return {generator::OurMethodInit{spec.angles}, spec.permutation};
    }
    case InitKind::Uniform:
        return {generator::UniformHInit{}, generator::LabelPermutation::identity(n_labels)};
    case InitKind::Normal:
        return {resolve_normal_init(config), generator::LabelPermutation::identity(n_labels)};
    }
    throw std::logic_error("unknown init kind");
}

RunRecord train_run(const TrainConfig& config, std::uint64_t run_seed) {
    config.validate();
    const auto start_time = std::chrono::steady_clock::now();

    SplitMix64 seeds(run_seed);
    const std::uint64_t data_seed = seeds.next();
    const std::uint64_t disc_seed = seeds.next();
    const std::uint64_t gen_seed = seeds.next();
    const std::uint64_t epoch_seed = seeds.next();

    const qsim::Pmf target_pmf = targets::discretize(config.target, config.tail_mode);
    const targets::TrainingSet training =
        targets::sample_training_data(config.target, config.data_count, data_seed,
                                      config.tail_mode);

    auto [init_mode, permutation] = make_initial_stage(config, target_pmf);
    Rng gen_rng(gen_seed);
    std::vector<double> params(static_cast<std::size_t>(config.n_qubits) * (config.k + 1));
    for (double& p : params) {
        p = gen_rng.uniform(config.gen_init_weight_lo, config.gen_init_weight_hi);
    }
    generator::GeneratorCircuit circuit = generator::build_circuit(
        config.n_qubits, config.k, std::move(init_mode), std::move(params),
        std::move(permutation));

    adversary::Discriminator disc =
        adversary::init_discriminator(disc_seed, 0.2, config.input_scale);
    adversary::AmsgradState disc_opt(disc.params.size(), config.lr, config.beta1, config.beta2);
    adversary::AmsgradState gen_opt(circuit.params.size(), config.lr, config.beta1,
                                    config.beta2);
    disc_opt.bias_correction = config.bias_correction;
    gen_opt.bias_correction = config.bias_correction;

    Rng epoch_rng(epoch_seed);
    RunRecord record;
    record.seed = run_seed;
    record.loss_g.reserve(config.epochs + 1);
    record.loss_d.reserve(config.epochs + 1);
    record.rel_entropy.reserve(config.epochs + 1);

    // The real batch is the full training set (batch_size = data_count in the
    // reference protocol); a prefix is taken when a smaller batch is asked for.
    const std::vector<int> real_batch(training.samples.begin(),
                                      training.samples.begin() + config.batch_size);

    auto record_epoch = [&](double loss_g, double loss_d) {
        record.loss_g.push_back(loss_g);
        record.loss_d.push_back(loss_d);
        record.rel_entropy.push_back(
            relative_entropy(target_pmf, generator::generator_pmf(circuit)));
    };

    {
        // Pre-training baseline (epoch 0).
        const qsim::Pmf gen_pmf = generator::generator_pmf(circuit);
        const std::vector<int> fake =
            generator::generator_sample(circuit, config.gen_shots, epoch_rng.next_u64());
        const adversary::DiscStep step = adversary::disc_grad(disc, real_batch, fake);
        record_epoch(adversary::gen_loss_from_pmf(disc, gen_pmf), step.loss_d);
    }

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        const std::vector<int> fake =
            generator::generator_sample(circuit, config.gen_shots, epoch_rng.next_u64());

        const adversary::DiscStep disc_step = adversary::disc_grad(disc, real_batch, fake);
        adversary::amsgrad_step(disc_opt, disc.params, disc_step.grad);

        const std::vector<double> gen_grad = param_shift_gradient(
            circuit, disc, config.grad_mode, config.shift_shots, epoch_rng);
        double loss_g;
        if (config.grad_mode == GradMode::Exact) {
            loss_g = adversary::gen_loss_from_pmf(disc, generator::generator_pmf(circuit));
        } else {
            qsim::Pmf fake_hist;
            fake_hist.probs.assign(qsim::dim_for(config.n_qubits), 0.0);
            for (int label : fake) {
                fake_hist.probs[label] += 1.0 / fake.size();
            }
            loss_g = adversary::gen_loss_from_pmf(disc, fake_hist);
        }
        adversary::amsgrad_step(gen_opt, circuit.params, gen_grad);

        record_epoch(loss_g, disc_step.loss_d);
    }

    record.final_pmf = generator::generator_pmf(circuit);
    record.final_params = circuit.params;
    const auto min_it = std::min_element(record.rel_entropy.begin(), record.rel_entropy.end());
    record.min_rel_entropy = *min_it;
    record.min_rel_entropy_epoch = static_cast<int>(min_it - record.rel_entropy.begin());
    record.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
    return record;
}

SweepSummary sweep(const std::vector<TrainConfig>& configs, int workers) {
    for (const auto& config : configs) {
        config.validate();
    }
    SweepSummary summary;
    summary.records.resize(configs.size());
    std::vector<std::pair<int, int>> jobs;
    for (std::size_t ci = 0; ci < configs.size(); ++ci) {
        summary.records[ci].resize(configs[ci].runs);
        for (int ri = 0; ri < configs[ci].runs; ++ri) {
            jobs.emplace_back(static_cast<int>(ci), ri);
        }
    }

    const int threads = std::max(1, workers);
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (threads > 1)
    for (std::int64_t idx = 0; idx < static_cast<std::int64_t>(jobs.size()); ++idx) {
        const auto [ci, ri] = jobs[idx];
        const TrainConfig& config = configs[ci];
        const std::uint64_t run_seed = config.base_seed + static_cast<std::uint64_t>(ri);
        RunRecord record;
        try {
            record = train_run(config, run_seed);
        } catch (const std::exception& e) {
            record.ok = false;
            record.error = e.what();
            record.seed = run_seed;
        }
        summary.records[ci][ri] = std::move(record);
    }

    for (std::size_t ci = 0; ci < configs.size(); ++ci) {
        const TrainConfig& config = configs[ci];
        SweepCell cell;
        cell.target = targets::target_name(config.target);
        cell.init_kind = config.init_kind;
        cell.k = config.k;
        cell.runs_total = config.runs;
        std::vector<double> finals;
        std::vector<double> mins;
        for (const RunRecord& record : summary.records[ci]) {
            if (!record.ok) {
                continue;
            }
            finals.push_back(record.rel_entropy.back());
            mins.push_back(record.min_rel_entropy);
        }
        cell.runs_ok = static_cast<int>(finals.size());
        if (!finals.empty()) {
            cell.mean = std::accumulate(finals.begin(), finals.end(), 0.0) / finals.size();
            cell.stddev = population_stddev(finals, cell.mean);
            cell.min = *std::min_element(finals.begin(), finals.end());
            cell.mean_min_over_epochs =
                std::accumulate(mins.begin(), mins.end(), 0.0) / mins.size();
        }
        summary.cells.push_back(std::move(cell));
    }
    return summary;
}

std::string init_kind_name(InitKind kind) {
    switch (kind) {
    case InitKind::OurMethod:
        return "our_method";
    case InitKind::Uniform:
        return "uniform";
    case InitKind::Normal:
        return "normal";
    }
    return "unknown";
}

std::string grad_mode_name(GradMode mode) {
    return mode == GradMode::Shots ? "shots" : "exact";
}

} // namespace qgan::harness
