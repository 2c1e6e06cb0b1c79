#include "qgan/targets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "qgan/rng.hpp"

namespace qgan::targets {

namespace {

double lognormal_cdf(const LogNormal& ln, double x) {
    if (x <= 0.0) {
        return 0.0;
    }
    return normal_cdf((std::log(x) - ln.mu) / ln.sigma);
}

double triangular_cdf(const Triangular& tri, double x) {
    const double l = tri.lower, m = tri.mode, u = tri.upper;
    if (x <= l) {
        return 0.0;
    }
    if (x >= u) {
        return 1.0;
    }
    if (x <= m) {
        return (x - l) * (x - l) / ((u - l) * (m - l));
    }
    return 1.0 - (u - x) * (u - x) / ((u - l) * (u - m));
}

double bimodal_cdf(const Bimodal& bi, double x) {
    return bi.mix * normal_cdf((x - bi.mu1) / bi.sigma1) +
           (1.0 - bi.mix) * normal_cdf((x - bi.mu2) / bi.sigma2);
}

double cdf_of(const TargetKind& kind, double x) {
    return std::visit(
        [x](const auto& k) -> double {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, LogNormal>) {
                return lognormal_cdf(k, x);
            } else if constexpr (std::is_same_v<T, Triangular>) {
                return triangular_cdf(k, x);
            } else if constexpr (std::is_same_v<T, Bimodal>) {
                return bimodal_cdf(k, x);
            } else {
                throw std::logic_error("custom pmf has no continuous cdf");
            }
        },
        kind);
}

} // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

void TargetSpec::validate() const {
    if (grid_points < 2 || (grid_points & (grid_points - 1)) != 0) {
        throw std::invalid_argument("grid_points must be a power of two >= 2");
    }
    std::visit(
        [&](const auto& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, LogNormal>) {
                if (!(k.sigma > 0.0)) {
                    throw std::invalid_argument("log-normal sigma must be positive");
                }
            } else if constexpr (std::is_same_v<T, Triangular>) {
                if (!(k.lower <= k.mode && k.mode <= k.upper && k.lower < k.upper)) {
                    throw std::invalid_argument("triangular requires l <= m <= u and l < u");
                }
            } else if constexpr (std::is_same_v<T, Bimodal>) {
                if (!(k.sigma1 > 0.0 && k.sigma2 > 0.0)) {
                    throw std::invalid_argument("bimodal sigmas must be positive");
                }
                if (!(k.mix >= 0.0 && k.mix <= 1.0)) {
                    throw std::invalid_argument("bimodal mix must be in [0, 1]");
                }
            } else if constexpr (std::is_same_v<T, CustomPmf>) {
                if (static_cast<int>(k.probs.size()) != grid_points) {
                    throw std::invalid_argument("custom pmf length does not match grid");
                }
            }
        },
        kind);
}

qsim::Pmf discretize(const TargetSpec& spec, TailMode tail_mode) {
    spec.validate();
    if (const auto* custom = std::get_if<CustomPmf>(&spec.kind)) {
        qsim::Pmf pmf;
        pmf.probs = custom->probs;
        pmf.validate();
        return pmf;
    }

    const int n = spec.grid_points;
    qsim::Pmf pmf;
    pmf.probs.resize(n);
    for (int i = 0; i < n; ++i) {
        double lo = cdf_of(spec.kind, i - 0.5);
        double hi = cdf_of(spec.kind, i + 0.5);
        if (tail_mode == TailMode::Clip) {
            if (i == 0) {
                lo = 0.0;
            }
            if (i == n - 1) {
                hi = 1.0;
            }
        }
        pmf.probs[i] = std::max(hi - lo, 0.0);
    }
    const double total = std::accumulate(pmf.probs.begin(), pmf.probs.end(), 0.0);
    if (!(total > 0.0)) {
        throw std::invalid_argument("target law has no mass on the grid");
    }
    for (double& p : pmf.probs) {
        p /= total;
    }
    return pmf;
}

qsim::Pmf discretize_normal(double mean, double stddev, int grid_points, TailMode tail_mode) {
    if (!(stddev > 0.0)) {
        throw std::invalid_argument("normal stddev must be positive");
    }
    TargetSpec spec;
    spec.kind = Bimodal{mean, stddev, mean, stddev, 0.5}; // equal mix of one law
    spec.grid_points = grid_points;
    return discretize(spec, tail_mode);
}

TrainingSet sample_training_data(const TargetSpec& spec, int count, std::uint64_t rng_seed,
                                 TailMode tail_mode) {
    if (count < 1) {
        throw std::invalid_argument("sample count must be >= 1");
    }
    const qsim::Pmf pmf = discretize(spec, tail_mode);
    const std::vector<double> cdf = cumulative_distribution(pmf.probs);
    Rng rng(rng_seed);

    TrainingSet set;
    set.samples.resize(count);
    std::vector<double> counts(pmf.size(), 0.0);
    for (auto& label : set.samples) {
        label = sample_index(cdf, rng);
        counts[label] += 1.0;
    }
    set.empirical.probs.resize(pmf.size());
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        set.empirical.probs[i] = counts[i] / count;
    }
    return set;
}

std::pair<double, double> moments(const TargetSpec& spec) {
    spec.validate();
    return std::visit(
        [&](const auto& k) -> std::pair<double, double> {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, LogNormal>) {
                const double s2 = k.sigma * k.sigma;
                const double mean = std::exp(k.mu + 0.5 * s2);
                const double var = (std::exp(s2) - 1.0) * std::exp(2.0 * k.mu + s2);
                return {mean, std::sqrt(var)};
            } else if constexpr (std::is_same_v<T, Triangular>) {
                const double l = k.lower, m = k.mode, u = k.upper;
                const double mean = (l + m + u) / 3.0;
                const double var =
                    (l * l + m * m + u * u - l * m - l * u - m * u) / 18.0;
                return {mean, std::sqrt(var)};
            } else if constexpr (std::is_same_v<T, Bimodal>) {
                const double w = k.mix;
                const double mean = w * k.mu1 + (1.0 - w) * k.mu2;
                const double second = w * (k.sigma1 * k.sigma1 + k.mu1 * k.mu1) +
                                      (1.0 - w) * (k.sigma2 * k.sigma2 + k.mu2 * k.mu2);
                return {mean, std::sqrt(second - mean * mean)};
            } else {
                double mean = 0.0;
                double second = 0.0;
                for (std::size_t i = 0; i < k.probs.size(); ++i) {
                    mean += static_cast<double>(i) * k.probs[i];
                    second += static_cast<double>(i) * static_cast<double>(i) * k.probs[i];
                }
                return {mean, std::sqrt(std::max(second - mean * mean, 0.0))};
            }
        },
        spec.kind);
}

CustomPmf load_custom_pmf(const std::string& path, int expected_size) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open pmf file: " + path);
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    std::vector<double> probs;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '[') {
        const auto parsed = nlohmann::json::parse(text);
        if (!parsed.is_array()) {
            throw std::runtime_error("pmf file must hold a JSON array or plain numbers");
        }
        for (const auto& v : parsed) {
            probs.push_back(v.get<double>());
        }
    } else {
        std::istringstream stream(text);
        double value;
        while (stream >> value) {
            probs.push_back(value);
        }
    }

    if (expected_size > 0 && static_cast<int>(probs.size()) != expected_size) {
        throw std::runtime_error("pmf file holds " + std::to_string(probs.size()) +
                                 " entries, expected " + std::to_string(expected_size));
    }
    if (probs.empty() || (probs.size() & (probs.size() - 1)) != 0) {
        throw std::runtime_error("pmf file must hold a power-of-two entry count");
    }
    double sum = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0)) {
            throw std::runtime_error("pmf file entry negative or NaN");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) >= 1e-6) {
        throw std::runtime_error("pmf file sums to " + std::to_string(sum) +
                                 "; expected 1 within 1e-6");
    }
    if (std::abs(sum - 1.0) > 1e-12) { // beyond accumulated rounding
        std::cerr << "warning: pmf file sums to " << sum << "; renormalizing\n";
        for (double& p : probs) {
            p /= sum;
        }
    }
    return CustomPmf{std::move(probs)};
}

std::string target_name(const TargetSpec& spec) {
    return std::visit(
        [](const auto& k) -> std::string {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, LogNormal>) {
                return "log-normal";
            } else if constexpr (std::is_same_v<T, Triangular>) {
                return "triangular";
            } else if constexpr (std::is_same_v<T, Bimodal>) {
                return "bimodal";
            } else {
                return "custom";
            }
        },
        spec.kind);
}

} // namespace qgan::targets
