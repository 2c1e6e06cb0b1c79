#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "qgan/qsim.hpp"

namespace qgan::targets {

struct LogNormal {
    // Parameters of the underlying normal law: X = exp(Y), Y ~ N(mu, sigma^2).
    double mu = 1.0;
    double sigma = 1.0;
};

struct Triangular {
    double lower = 0.0;
    double mode = 2.0;
    double upper = 7.0;
};

struct Bimodal {
    double mu1 = 0.5;
    double sigma1 = 1.0;
    double mu2 = 3.5;
    double sigma2 = 0.5;
    double mix = 0.5; // weight of the first component
};

struct CustomPmf {
    std::vector<double> probs;
};

using TargetKind = std::variant<LogNormal, Triangular, Bimodal, CustomPmf>;

struct TargetSpec {
    TargetKind kind = LogNormal{};
    int grid_points = 8; // 2^n integer labels

    void validate() const;
};

enum class TailMode {
    Clip,                // mass beyond the grid folded into the boundary bins
    TruncateRenormalize, // strict unit bins, renormalized over the grid
};

struct TrainingSet {
    std::vector<int> samples;
    qsim::Pmf empirical;
};

// Standard normal CDF.
double normal_cdf(double z);

// Unit-width probability-mass binning: entry i covers (i-0.5, i+0.5], with
// the boundary bins extended to the tails under TailMode::Clip.
qsim::Pmf discretize(const TargetSpec& spec, TailMode tail_mode = TailMode::Clip);

// Same binning applied to a plain normal law; used by the normal-init
// baseline.
qsim::Pmf discretize_normal(double mean, double stddev, int grid_points,
                            TailMode tail_mode = TailMode::Clip);

// Labels drawn i.i.d. from the discretized law with a seeded generator.
TrainingSet sample_training_data(const TargetSpec& spec, int count, std::uint64_t rng_seed,
                                 TailMode tail_mode = TailMode::Clip);

// Mean and standard deviation of the continuous law (of the discrete pmf for
// CustomPmf); parameterizes the normal-init baseline.
std::pair<double, double> moments(const TargetSpec& spec);

// 2^n non-negative reals, plain text or a JSON array. Sums off by less than
// 1e-6 are renormalized with a warning on stderr; larger errors throw.
// expected_size <= 0 accepts any power-of-two entry count.
CustomPmf load_custom_pmf(const std::string& path, int expected_size);

std::string target_name(const TargetSpec& spec);

} // namespace qgan::targets
