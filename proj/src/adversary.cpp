#include "qgan/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "qgan/rng.hpp"

namespace qgan::adversary {

namespace {

constexpr int kH1 = Discriminator::kHidden1;
constexpr int kH2 = Discriminator::kHidden2;

// Packed-parameter offsets.
constexpr int kW1 = 0;
constexpr int kB1 = kW1 + kH1;
constexpr int kW2 = kB1 + kH1;
constexpr int kB2 = kW2 + kH2 * kH1;
constexpr int kW3 = kB2 + kH2;
constexpr int kB3 = kW3 + kH2;
static_assert(kB3 + 1 == Discriminator::kParamCount);

double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

struct ForwardCache {
    double x = 0.0;
    std::vector<double> z1, h1; // kH1
    std::vector<double> z2, h2; // kH2
    double z3 = 0.0;
    double y = 0.0;
};

ForwardCache forward_cached(const Discriminator& disc, double input) {
    if (!std::isfinite(input)) {
        throw std::invalid_argument("discriminator input must be finite");
    }
    const auto& p = disc.params;
    const double slope = disc.leaky_slope;
    ForwardCache c;
    c.x = input * disc.input_scale;
    c.z1.resize(kH1);
    c.h1.resize(kH1);
    for (int i = 0; i < kH1; ++i) {
        c.z1[i] = p[kW1 + i] * c.x + p[kB1 + i];
        c.h1[i] = c.z1[i] > 0.0 ? c.z1[i] : slope * c.z1[i];
    }
    c.z2.resize(kH2);
    c.h2.resize(kH2);
    for (int j = 0; j < kH2; ++j) {
        double z = p[kB2 + j];
        const double* w = &p[kW2 + j * kH1];
        for (int i = 0; i < kH1; ++i) {
            z += w[i] * c.h1[i];
        }
        c.z2[j] = z;
        c.h2[j] = z > 0.0 ? z : slope * z;
    }
    c.z3 = p[kB3];
    for (int j = 0; j < kH2; ++j) {
        c.z3 += p[kW3 + j] * c.h2[j];
    }
    c.y = sigmoid(c.z3);
    return c;
}

// Accumulates weight * (gradient of z3 with respect to every parameter).
// `weight` already contains dLoss/dz3 for this input.
void backprop(const Discriminator& disc, const ForwardCache& c, double weight,
              std::vector<double>& grad, double* input_grad = nullptr) {
    const auto& p = disc.params;
    const double slope = disc.leaky_slope;

    std::vector<double> delta2(kH2);
    for (int j = 0; j < kH2; ++j) {
        grad[kW3 + j] += weight * c.h2[j];
        delta2[j] = weight * p[kW3 + j] * (c.z2[j] > 0.0 ? 1.0 : slope);
    }
    grad[kB3] += weight;

    std::vector<double> delta1(kH1, 0.0);
    for (int j = 0; j < kH2; ++j) {
        const double d = delta2[j];
        double* gw = &grad[kW2 + j * kH1];
        const double* w = &p[kW2 + j * kH1];
        for (int i = 0; i < kH1; ++i) {
            gw[i] += d * c.h1[i];
            delta1[i] += d * w[i];
        }
        grad[kB2 + j] += d;
    }

    double dx = 0.0;
    for (int i = 0; i < kH1; ++i) {
        const double d = delta1[i] * (c.z1[i] > 0.0 ? 1.0 : slope);
        grad[kW1 + i] += d * c.x;
        grad[kB1 + i] += d;
        dx += d * p[kW1 + i];
    }
    if (input_grad != nullptr) {
        *input_grad += dx * disc.input_scale;
    }
}

// (value, count) pairs for a label batch; batch means become count-weighted
// sums over at most 2^n distinct inputs.
std::map<int, int> histogram(const std::vector<int>& batch) {
    std::map<int, int> counts;
    for (int label : batch) {
        ++counts[label];
    }
    return counts;
}

} // namespace

Discriminator init_discriminator(std::uint64_t rng_seed, double leaky_slope,
                                 double input_scale) {
    Discriminator disc;
    disc.leaky_slope = leaky_slope;
    disc.input_scale = input_scale;
    disc.params.resize(Discriminator::kParamCount);
    Rng rng(rng_seed);
    const double b1 = 1.0;                  // fan_in 1
    const double b2 = 1.0 / std::sqrt(50.0); // fan_in 50
    const double b3 = 1.0 / std::sqrt(20.0); // fan_in 20
    for (int i = kW1; i < kW2; ++i) {
        disc.params[i] = rng.uniform(-b1, b1);
    }
    for (int i = kW2; i < kW3; ++i) {
        disc.params[i] = rng.uniform(-b2, b2);
    }
    for (int i = kW3; i < Discriminator::kParamCount; ++i) {
        disc.params[i] = rng.uniform(-b3, b3);
    }
    return disc;
}

double forward(const Discriminator& disc, double x) { return forward_cached(disc, x).y; }

double forward_input_grad(const Discriminator& disc, double x) {
    const ForwardCache c = forward_cached(disc, x);
    std::vector<double> grad(Discriminator::kParamCount, 0.0);
    double dx = 0.0;
    // weight = dy/dz3 = y(1-y)
    backprop(disc, c, c.y * (1.0 - c.y), grad, &dx);
    return dx;
}

DiscStep disc_grad(const Discriminator& disc, const std::vector<int>& real_batch,
                   const std::vector<int>& fake_batch) {
    if (real_batch.empty() || fake_batch.empty()) {
        throw std::invalid_argument("discriminator batches must be non-empty");
    }
    DiscStep step;
    step.grad.assign(Discriminator::kParamCount, 0.0);

    // L_D = E_real[log y] + E_fake[log(1-y)]; we accumulate grad of -L_D.
    // d(-log y)/dz3 = y - 1,  d(-log(1-y))/dz3 = y.
    for (const auto& [label, count] : histogram(real_batch)) {
        const ForwardCache c = forward_cached(disc, static_cast<double>(label));
        const double w = static_cast<double>(count) / real_batch.size();
        step.loss_d += w * std::log(std::max(c.y, 1e-12));
        backprop(disc, c, w * (c.y - 1.0), step.grad);
    }
    for (const auto& [label, count] : histogram(fake_batch)) {
        const ForwardCache c = forward_cached(disc, static_cast<double>(label));
        const double w = static_cast<double>(count) / fake_batch.size();
        step.loss_d += w * std::log(std::max(1.0 - c.y, 1e-12));
        backprop(disc, c, w * c.y, step.grad);
    }
    return step;
}

double gen_loss_from_pmf(const Discriminator& disc, const qsim::Pmf& gen_pmf) {
    double loss = 0.0;
    for (std::size_t m = 0; m < gen_pmf.size(); ++m) {
        if (gen_pmf.probs[m] == 0.0) {
            continue;
        }
        const double d = forward(disc, static_cast<double>(m));
        loss -= gen_pmf.probs[m] * std::log(std::max(d, 1e-12));
    }
    return loss;
}

void amsgrad_step(AmsgradState& state, std::vector<double>& params,
                  const std::vector<double>& grads) {
    if (params.size() != state.m.size() || grads.size() != state.m.size()) {
        throw std::invalid_argument("optimizer state does not match parameter shape");
    }
    ++state.step;
    double m_scale = 1.0;
    double v_scale = 1.0;
    if (state.bias_correction) {
        m_scale = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
        v_scale = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g;
        state.v_hat[i] = std::max(state.v_hat[i], state.v[i]);
        const double m_hat = state.m[i] / m_scale;
        const double v_hat = state.v_hat[i] / v_scale;
        params[i] -= state.lr * m_hat / (std::sqrt(v_hat) + state.eps);
    }
}

} // namespace qgan::adversary
