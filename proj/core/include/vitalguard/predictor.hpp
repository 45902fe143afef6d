#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vitalguard/bpnet.hpp"
#include "vitalguard/ga.hpp"
#include "vitalguard/signals.hpp"

namespace vitalguard {

inline constexpr std::size_t kLookback = 8;

struct Normalizer {
    double min = 0.0;
    double max = 1.0;
    double normalize(double x) const { return (x - min) / (max - min); }
    double denormalize(double z) const { return min + z * (max - min); }
};

// Fits on all values; requires at least two distinct ones.
Normalizer fit_normalizer(std::span<const double> values);

struct WindowPair {
    std::vector<double> input;  // lookback consecutive values
    double target = 0.0;        // the value right after them
};

// A length-L series yields L - lookback pairs of consecutive values. The
// series must come from one contiguous run (no gaps beyond 2x cadence);
// see contiguous_runs.
std::vector<WindowPair> make_windows(std::span<const double> series,
                                     std::size_t lookback = kLookback);

struct ModelMeta {
    std::size_t hidden_nodes = 0;
    std::uint64_t seed = 0;
    std::size_t epochs_run = 0;
    double final_error_rate = 0.0;
    std::int64_t trained_at_ms = 0;  // informational; left 0 for reproducible files
};

// Everything needed to turn 8 raw channel values into the next raw value.
struct Model {
    VitalChannel channel = VitalChannel::HR;
    NetParams net;
    Normalizer normalizer;
    ModelMeta meta;
};

// Dimensionless stop-criterion scale: one unit of normalized error maps to
// (normalizer range / channel normal-range width) so the trained error rate
// reads as raw error over the normal band.
double error_scale_for(VitalChannel channel, const Normalizer& normalizer);

// Windows each series, fits one shared normalizer over every value, seeds
// the net with the GA winner, then refines with momentum backprop. Setting
// ga_config.max_generations to 0 disables the GA: the net starts from a
// random draw over the gene bounds instead.
Model train_model(VitalChannel channel, std::span<const std::vector<double>> series_set,
                  const NetConfig& net_config, const GaConfig& ga_config,
                  const TrainConfig& train_config);

// Inference inputs are normalized and clamped to [-0.2, 1.2]; *clamped is
// set when any input fell outside. Returns the raw-unit prediction.
double predict_next(const Model& model, std::span<const double> last8, bool* clamped = nullptr);

// Multi-step rollout feeding predictions back in. Anything past the first
// step is extrapolation beyond what the one-step model was fitted for.
std::vector<double> predict_horizon(const Model& model, std::span<const double> last8,
                                    std::size_t steps);

struct SweepRow {
    std::size_t hidden = 0;
    double error_rate = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::size_t selected_hidden = 0;
    Model selected_model;
};

// Trains one model per candidate H with identical seeds/configs; selects the
// first H whose training error rate meets the target, else the argmin.
SweepResult sweep_hidden_nodes(std::span<const std::size_t> candidates, VitalChannel channel,
                               std::span<const std::vector<double>> series_set,
                               const GaConfig& ga_config, const TrainConfig& train_config);

// Versioned text format with an integrity checksum; loading verifies
// version, shape and checksum. Identical models produce identical bytes.
void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);

}  // namespace vitalguard
