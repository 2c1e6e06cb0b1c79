#pragma once

#include <cstdint>
#include <vector>

#include "qgan/qsim.hpp"

namespace qgan::adversary {

// 1 -> 50 -> 20 -> 1 perceptron with leaky rectifier hidden units and a
// sigmoid output. Parameters live in one packed vector so the optimizer can
// treat the network as a flat array:
//   [w1 (50) | b1 (50) | w2 (20x50) | b2 (20) | w3 (20) | b3 (1)]  = 1141.
struct Discriminator {
    static constexpr int kHidden1 = 50;
    static constexpr int kHidden2 = 20;
    static constexpr int kParamCount =
        (kHidden1 + kHidden1) + (kHidden2 * kHidden1 + kHidden2) + (kHidden2 + 1);

    std::vector<double> params;
    double leaky_slope = 0.2;
    double input_scale = 1.0;
};

// All weights and biases uniform in +-1/sqrt(fan_in), seeded.
Discriminator init_discriminator(std::uint64_t rng_seed, double leaky_slope = 0.2,
                                 double input_scale = 1.0);

// D(x) in (0, 1) for a finite scalar input.
double forward(const Discriminator& disc, double x);

// dD/dx at the given input; used by gradient cross-checks.
double forward_input_grad(const Discriminator& disc, double x);

struct DiscStep {
    std::vector<double> grad; // gradient of -L_D over the packed parameters
    double loss_d = 0.0;      // L_D = E_real[log D] + E_fake[log(1 - D)]
};

// Exact backpropagated gradient of the negated discriminator objective;
// expectations are batch means over the integer-label batches.
DiscStep disc_grad(const Discriminator& disc, const std::vector<int>& real_batch,
                   const std::vector<int>& fake_batch);

// L_G = -sum_m pmf[m] * log D(m), with D floored at 1e-12 inside the log.
double gen_loss_from_pmf(const Discriminator& disc, const qsim::Pmf& gen_pmf);

struct AmsgradState {
    std::vector<double> m;
    std::vector<double> v;
    std::vector<double> v_hat;
    std::int64_t step = 0;
    double lr = 1e-4;
    double beta1 = 0.7;
    double beta2 = 0.99;
    double eps = 1e-8;
    bool bias_correction = false;

    explicit AmsgradState(std::size_t size, double lr_ = 1e-4, double beta1_ = 0.7,
                          double beta2_ = 0.99)
        : m(size, 0.0), v(size, 0.0), v_hat(size, 0.0), lr(lr_), beta1(beta1_), beta2(beta2_) {}
};

// Canonical update: the running maximum of the second moment bounds the
// effective step size. Bias correction is off unless requested.
void amsgrad_step(AmsgradState& state, std::vector<double>& params,
                  const std::vector<double>& grads);

} // namespace qgan::adversary
