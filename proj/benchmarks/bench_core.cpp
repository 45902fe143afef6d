#include <benchmark/benchmark.h>

#include <vector>

#include "vitalguard/bpnet.hpp"
#include "vitalguard/ews.hpp"
#include "vitalguard/ga.hpp"
#include "vitalguard/lms.hpp"
#include "vitalguard/predictor.hpp"
#include "vitalguard/rng.hpp"
#include "vitalguard/signals.hpp"

using namespace vitalguard;

namespace {

std::vector<Sample> bench_samples(std::size_t count) {
    Rng rng(7);
    std::vector<Sample> samples;
    for (std::size_t k = 0; k < count; ++k) {
        Sample s;
        for (int i = 0; i < 8; ++i) s.input.push_back(rng.uniform(0, 1));
        s.target = rng.uniform(0, 1);
        samples.push_back(s);
    }
    return samples;
}

void BM_FilterStep(benchmark::State& state) {
    FilterConfig config;
    config.order = 8;
    FilterState filter = lms_init(config);
    Rng rng(1);
    double x = rng.uniform(-1, 1);
    for (auto _ : state) {
        auto r = lms_step(filter, x, x * 0.9, 0.01);
        benchmark::DoNotOptimize(r.error);
        x = r.error * 0.5 + 0.1;  // keep the loop data-dependent
    }
}
BENCHMARK(BM_FilterStep);

void BM_Forward(benchmark::State& state) {
    NetConfig config{8, static_cast<std::size_t>(state.range(0))};
    Rng rng(2);
    NetParams params = random_params(config, rng, -0.5, 0.5);
    std::vector<double> input;
    for (int i = 0; i < 8; ++i) input.push_back(rng.uniform(0, 1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(forward(params, input).output);
    }
}
BENCHMARK(BM_Forward)->Arg(5)->Arg(25);

void BM_BackpropEpoch(benchmark::State& state) {
    NetConfig config{8, 25};
    Rng rng(3);
    NetParams params = random_params(config, rng, -0.5, 0.5);
    auto samples = bench_samples(30);
    for (auto _ : state) {
        benchmark::DoNotOptimize(backprop_grads(params, samples).b2);
    }
}
BENCHMARK(BM_BackpropEpoch);

void BM_EvolveGeneration(benchmark::State& state) {
    NetConfig net{8, 6};
    auto samples = bench_samples(30);
    GaConfig config;
    config.population_size = 20;
    config.max_generations = 1;
    std::uint64_t seed = 1;
    for (auto _ : state) {
        config.rng_seed = seed++;
        benchmark::DoNotOptimize(evolve(net, config, samples).best_fitness);
    }
}
BENCHMARK(BM_EvolveGeneration);

void BM_ScoreValue(benchmark::State& state) {
    double v = 40.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(score_value(VitalChannel::HR, v));
        v = v < 200.0 ? v + 0.37 : 40.0;
    }
}
BENCHMARK(BM_ScoreValue);

void BM_PredictNext(benchmark::State& state) {
    Rng rng(4);
    Model model;
    model.channel = VitalChannel::HR;
    model.normalizer = Normalizer{60.0, 120.0};
    model.net = random_params({8, 25}, rng, -0.5, 0.5);
    std::vector<double> window;
    for (int i = 0; i < 8; ++i) window.push_back(rng.uniform(70, 110));
    for (auto _ : state) {
        benchmark::DoNotOptimize(predict_next(model, window));
    }
}
BENCHMARK(BM_PredictNext);

}  // namespace

BENCHMARK_MAIN();
