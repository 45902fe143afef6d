#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vitalguard {

enum class VitalChannel { HR = 0, RR = 1, T = 2, SPO2 = 3 };

inline constexpr std::array<VitalChannel, 4> kAllChannels = {
    VitalChannel::HR, VitalChannel::RR, VitalChannel::T, VitalChannel::SPO2};

inline constexpr std::size_t channel_index(VitalChannel c) {
    return static_cast<std::size_t>(c);
}

const char* channel_name(VitalChannel c);  // "hr", "rr", "t", "spo2"
std::optional<VitalChannel> channel_from_name(std::string_view name);

// Values a live sensor could plausibly emit; wider than any alarm band.
struct PlausibilityRange {
    double lo;
    double hi;
    bool contains(double v) const { return v >= lo && v <= hi; }
};
PlausibilityRange plausibility_range(VitalChannel c);

// Nominal sampling cadence of the upstream acquisition hardware.
inline constexpr std::int64_t kCadenceMs = 3000;

struct VitalSample {
    std::string driver_id;
    std::int64_t timestamp_ms = 0;
    double hr = 0.0;
    double rr = 0.0;
    double t = 0.0;
    double spo2 = 0.0;

    double value(VitalChannel c) const;
    void set_value(VitalChannel c, double v);
};

// CSV record: driver_id,timestamp_ms,hr,rr,t,spo2. Tolerates surrounding
// whitespace per field; rejects wrong field counts, non-numeric values and
// out-of-plausibility vitals, naming the field and offending text.
VitalSample parse_record(std::string_view line);

// Inverse of parse_record; vitals rendered with at most two fraction digits,
// trailing zeros trimmed. parse_record(format_record(s)) == s for samples on
// a 0.01 grid.
std::string format_record(const VitalSample& s);

void validate_sample(const VitalSample& s);

// Reference heart-rate recordings: 15 training rows and 5 evaluation rows of
// 10 samples each, taken at 3 s cadence.
struct FixtureSet {
    std::vector<std::vector<double>> training_rows;
    std::vector<std::vector<double>> test_rows;
};
const FixtureSet& load_fixtures();

// Synthetic trace generation: per-channel baseline + slow sinusoidal drift +
// gaussian noise, with optional injected abnormal episodes.
struct ChannelSynth {
    double baseline = 0.0;
    double drift_amplitude = 0.0;
    double drift_period_s = 600.0;
    double noise_sigma = 0.0;
};

struct AnomalySpec {
    VitalChannel channel = VitalChannel::HR;
    std::int64_t onset_ms = 0;
    std::int64_t duration_ms = 0;
    double target = 0.0;  // level the channel is pulled to while active
};

struct SynthConfig {
    std::string driver_id = "synth";
    std::uint64_t rng_seed = 0;
    std::array<ChannelSynth, 4> channels{};
    std::vector<AnomalySpec> anomalies;

    static SynthConfig defaults();  // resting-adult baselines, mild drift/noise
};

// Ground-truth abnormal episode, [start_ms, end_ms).
struct AbnormalInterval {
    VitalChannel channel = VitalChannel::HR;
    std::int64_t start_ms = 0;
    std::int64_t end_ms = 0;
};

struct SynthTrace {
    std::vector<VitalSample> samples;
    std::vector<AbnormalInterval> truth;
};

// Deterministic for a given config; samples every kCadenceMs from t=0 up to
// but excluding duration_s. All emitted values are clamped to plausibility.
SynthTrace synth_generate(const SynthConfig& config, double duration_s);

// Series extraction helpers for trace files.
std::vector<VitalSample> load_trace(const std::string& path);
std::vector<double> channel_series(const std::vector<VitalSample>& samples, VitalChannel c);

// Splits one channel into contiguous per-driver runs, breaking wherever
// consecutive samples of a driver are more than max_gap_ms apart. Timestamps
// must be non-decreasing per driver.
std::vector<std::vector<double>> contiguous_runs(const std::vector<VitalSample>& samples,
                                                 VitalChannel c,
                                                 std::int64_t max_gap_ms = 2 * kCadenceMs);

}  // namespace vitalguard
