#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qgan/adversary.hpp"
#include "qgan/generator.hpp"
#include "qgan/initfit.hpp"
#include "qgan/qsim.hpp"
#include "qgan/rng.hpp"
#include "qgan/targets.hpp"

namespace qgan::harness {

enum class InitKind { OurMethod, Uniform, Normal };
enum class GradMode { Shots, Exact };

struct TrainConfig {
    int n_qubits = 3;
    int k = 2;
    InitKind init_kind = InitKind::OurMethod;
    targets::TargetSpec target;
    int epochs = 2000;
    int data_count = 2000;
    int batch_size = 2000;
    int gen_shots = 2000;
    int shift_shots = 8000;
    GradMode grad_mode = GradMode::Shots;
    double gen_init_weight_lo = -0.1;
    double gen_init_weight_hi = 0.1;
    double lr = 1e-4;
    double beta1 = 0.7;
    double beta2 = 0.99;
    int runs = 10;
    std::uint64_t base_seed = 20240901;
    targets::TailMode tail_mode = targets::TailMode::Clip;
    initfit::AngleFormula angle_formula = initfit::AngleFormula::Sqrt;
    double input_scale = 1.0;
    bool bias_correction = false;
    std::string normal_init_cache_dir; // empty = fit fresh, no cache

    void validate() const;
};

struct RunRecord {
    // Index 0 holds the pre-training state; entries 1..epochs follow each
    // epoch's update pair.
    std::vector<double> loss_g;
    std::vector<double> loss_d;
    std::vector<double> rel_entropy;
    qsim::Pmf final_pmf;
    std::vector<double> final_params;
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;
    double min_rel_entropy = 0.0;
    int min_rel_entropy_epoch = 0;
    bool ok = true;
    std::string error;
};

struct SweepCell {
    std::string target;
    InitKind init_kind = InitKind::OurMethod;
    int k = 0;
    double mean = 0.0;
    double stddev = 0.0;
    double min = 0.0;
    double mean_min_over_epochs = 0.0;
    int runs_ok = 0;
    int runs_total = 0;
};

struct SweepSummary {
    std::vector<SweepCell> cells;
    std::vector<std::vector<RunRecord>> records; // per config, per run
};

// H(P|Q) = sum_x P(x) log(P(x)/Q(x)), natural log. P is the target, Q the
// generated distribution floored at 1e-12; P(x) = 0 terms contribute 0.
double relative_entropy(const qsim::Pmf& p, const qsim::Pmf& q);

// dL_G/dtheta_j via circuit evaluations at theta_j +- pi/2. Exact mode uses
// statevector distributions; shots mode estimates each shifted distribution
// from shift_shots samples.
std::vector<double> param_shift_gradient(const generator::GeneratorCircuit& circuit,
                                         const adversary::Discriminator& disc,
                                         GradMode grad_mode, int shift_shots, Rng& rng);

// Angles of the two-column init circuit that loads the normal baseline for
// the given target; fixed constants for the 3-qubit log-normal case, a seeded
// coordinate-search fit elsewhere (cached when a cache dir is set).
generator::NormalFixedInit resolve_normal_init(const TrainConfig& config);

// Init stage + readout permutation for the configured initial distribution.
std::pair<generator::InitMode, generator::LabelPermutation>
make_initial_stage(const TrainConfig& config, const qsim::Pmf& target_pmf);

RunRecord train_run(const TrainConfig& config, std::uint64_t run_seed);

// config.runs seeded runs per configuration (seeds base_seed + run index),
// optionally spread over `workers` threads; aggregates the final-epoch
// relative entropies. Failed runs are excluded and flagged in the cell.
SweepSummary sweep(const std::vector<TrainConfig>& configs, int workers = 1);

std::string init_kind_name(InitKind kind);
std::string grad_mode_name(GradMode mode);

} // namespace qgan::harness
