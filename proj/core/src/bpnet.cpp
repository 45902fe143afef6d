#include "vitalguard/bpnet.hpp"

#include <cmath>
#include <string>

#include "vitalguard/errors.hpp"

namespace vitalguard {

NetParams NetParams::zeros(const NetConfig& config) {
    NetParams p;
    p.n_in = config.n_in;
    p.n_hidden = config.n_hidden;
    p.w1.assign(config.n_hidden * config.n_in, 0.0);
    p.b1.assign(config.n_hidden, 0.0);
    p.w2.assign(config.n_hidden, 0.0);
    p.b2 = 0.0;
    return p;
}

NetParams random_params(const NetConfig& config, Rng& rng, double lo, double hi) {
    NetParams p = NetParams::zeros(config);
    for (auto& v : p.w1) v = rng.uniform(lo, hi);
    for (auto& v : p.b1) v = rng.uniform(lo, hi);
    for (auto& v : p.w2) v = rng.uniform(lo, hi);
    p.b2 = rng.uniform(lo, hi);
    return p;
}

double logsig(double z) {
    if (z >= 0.0)
        return 1.0 / (1.0 + std::exp(-z));
    double ez = std::exp(z);
    return ez / (1.0 + ez);
}

namespace {

void check_shapes(const NetParams& p) {
    if (p.n_in == 0 || p.n_hidden == 0 || p.w1.size() != p.n_hidden * p.n_in ||
        p.b1.size() != p.n_hidden || p.w2.size() != p.n_hidden)
        throw DataError("network parameter shapes are inconsistent");
}

void check_input(const NetParams& p, std::size_t got) {
    if (got != p.n_in)
        throw DataError("input size " + std::to_string(got) + " does not match network inputs " +
                        std::to_string(p.n_in));
}

}  // namespace

ForwardResult forward(const NetParams& params, std::span<const double> input) {
    check_shapes(params);
    check_input(params, input.size());
    ForwardResult r;
    r.hidden.resize(params.n_hidden);
    for (std::size_t j = 0; j < params.n_hidden; ++j) {
        double z = params.b1[j];
        const double* row = params.w1.data() + j * params.n_in;
        for (std::size_t i = 0; i < params.n_in; ++i)
            z += row[i] * input[i];
        r.hidden[j] = logsig(z);
        r.output += params.w2[j] * r.hidden[j];
    }
    r.output += params.b2;
    return r;
}

double sse_loss(const NetParams& params, std::span<const Sample> samples) {
    double loss = 0.0;
    for (const auto& s : samples) {
        double residual = s.target - forward(params, s.input).output;
        loss += residual * residual;
    }
    return loss;
}

NetParams backprop_grads(const NetParams& params, std::span<const Sample> samples) {
    check_shapes(params);
    NetParams g = NetParams::zeros({params.n_in, params.n_hidden});
    for (const auto& s : samples) {
        ForwardResult f = forward(params, s.input);
        // d(sse)/d(output) for this sample
        double go = -2.0 * (s.target - f.output);
        g.b2 += go;
        for (std::size_t j = 0; j < params.n_hidden; ++j) {
            double h = f.hidden[j];
            g.w2[j] += go * h;
            double gz = go * params.w2[j] * h * (1.0 - h);
            g.b1[j] += gz;
            double* grow = g.w1.data() + j * params.n_in;
            for (std::size_t i = 0; i < params.n_in; ++i)
                grow[i] += gz * s.input[i];
        }
    }
    return g;
}

double error_rate(const NetParams& params, std::span<const Sample> samples, double error_scale) {
    if (samples.empty())
        throw DataError("cannot compute error rate over an empty sample set");
    double sum = 0.0;
    for (const auto& s : samples)
        sum += std::abs(s.target - forward(params, s.input).output);
    return error_scale * sum / static_cast<double>(samples.size());
}

TrainResult train(const TrainConfig& config, NetParams initial, std::span<const Sample> samples) {
    check_shapes(initial);
    if (samples.empty())
        throw DataError("cannot train on an empty sample set");
    for (const auto& s : samples) check_input(initial, s.input.size());
    if (config.lr_end < 0.0 || config.lr_start < config.lr_end)
        throw DataError("learning rate schedule: need lr_start >= lr_end >= 0");
    if (config.momentum < 0.0 || config.momentum >= 1.0)
        throw DataError("momentum: must be in [0, 1)");

    TrainResult result;
    result.params = std::move(initial);
    NetParams delta = NetParams::zeros({result.params.n_in, result.params.n_hidden});
    const double n = static_cast<double>(samples.size());
    const double lr_ratio = config.lr_start > 0.0 ? config.lr_end / config.lr_start : 0.0;

    for (std::size_t epoch = 0;; ++epoch) {
        double loss = sse_loss(result.params, samples);
        if (!std::isfinite(loss))
            throw DivergenceError("training loss went non-finite at epoch " + std::to_string(epoch));
        result.loss_history.push_back(loss);
        result.final_error_rate = error_rate(result.params, samples, config.error_scale);
        result.epochs_run = epoch;
        if (result.final_error_rate <= config.target_error_rate) {
            result.reached_target = true;
            break;
        }
        if (epoch == config.max_epochs)
            break;

        double lr = 0.0;
        if (config.lr_start > 0.0)
            lr = config.lr_start *
                 std::pow(lr_ratio, static_cast<double>(epoch) / static_cast<double>(config.max_epochs));

        NetParams grad = backprop_grads(result.params, samples);
        auto step = [&](double& param, double& vel, double g) {
            vel = config.momentum * vel - lr * g / n;
            param += vel;
        };
        for (std::size_t i = 0; i < grad.w1.size(); ++i) step(result.params.w1[i], delta.w1[i], grad.w1[i]);
        for (std::size_t i = 0; i < grad.b1.size(); ++i) step(result.params.b1[i], delta.b1[i], grad.b1[i]);
        for (std::size_t i = 0; i < grad.w2.size(); ++i) step(result.params.w2[i], delta.w2[i], grad.w2[i]);
        step(result.params.b2, delta.b2, grad.b2);
    }
    return result;
}

}  // namespace vitalguard
