#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vitalguard/rng.hpp"

namespace vitalguard {

// Three-layer feedforward net: n_in inputs, sigmoid hidden layer, one
// linear output.
struct NetConfig {
    std::size_t n_in = 8;
    std::size_t n_hidden = 25;
};

struct NetParams {
    std::size_t n_in = 0;
    std::size_t n_hidden = 0;
    std::vector<double> w1;  // n_hidden x n_in, row-major
    std::vector<double> b1;  // n_hidden
    std::vector<double> w2;  // n_hidden, single output row
    double b2 = 0.0;

    static NetParams zeros(const NetConfig& config);
    std::size_t parameter_count() const { return w1.size() + b1.size() + w2.size() + 1; }
};

// Parameters drawn uniform in [lo, hi], in w1 row-major, b1, w2, b2 order.
NetParams random_params(const NetConfig& config, Rng& rng, double lo = -0.5, double hi = 0.5);

double logsig(double z);  // 1 / (1 + e^-z), safe for large |z|

struct Sample {
    std::vector<double> input;
    double target = 0.0;
};

struct ForwardResult {
    double output = 0.0;
    std::vector<double> hidden;
};

ForwardResult forward(const NetParams& params, std::span<const double> input);

// Sum of squared residuals over the set.
double sse_loss(const NetParams& params, std::span<const Sample> samples);

// Exact gradient of sse_loss with respect to every parameter, returned in
// the same shape as the parameters.
NetParams backprop_grads(const NetParams& params, std::span<const Sample> samples);

// Stop-criterion error: error_scale * mean(|target - output|).
double error_rate(const NetParams& params, std::span<const Sample> samples, double error_scale);

struct TrainConfig {
    double lr_start = 0.1;
    double lr_end = 0.01;
    double momentum = 0.9;
    std::size_t max_epochs = 10000;
    // Stop once the scaled error reaches the quantization noise of integer-
    // valued recordings; pushing training further overfits small window sets.
    double target_error_rate = 0.03;
    double error_scale = 1.0;
    std::uint64_t rng_seed = 0;
};

struct TrainResult {
    NetParams params;
    std::vector<double> loss_history;  // per evaluated epoch, including the last
    std::size_t epochs_run = 0;
    double final_error_rate = 0.0;
    bool reached_target = false;
};

// Full-batch gradient descent with momentum on the per-sample mean gradient,
// learning rate decaying geometrically from lr_start to lr_end across
// max_epochs. The stop criterion is evaluated before each update, so a net
// already at target trains zero epochs. Throws DivergenceError if the loss
// goes non-finite.
TrainResult train(const TrainConfig& config, NetParams initial, std::span<const Sample> samples);

}  // namespace vitalguard
