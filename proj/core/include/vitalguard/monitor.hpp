#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vitalguard/ews.hpp"
#include "vitalguard/lms.hpp"
#include "vitalguard/predictor.hpp"
#include "vitalguard/signals.hpp"

namespace vitalguard {

struct MonitorConfig {
    // order/mu for the per-channel input filters; empty initial_weights here
    // selects the pass-through start [1, 0, ..., 0] so early output tracks
    // the raw signal instead of ramping up from zero.
    FilterConfig filter{};
    SeverityConfig severity{};
    ScoreBands bands = ScoreBands::defaults();
};

// One trained model per channel.
struct ModelSet {
    std::array<Model, 4> by_channel;

    const Model& at(VitalChannel c) const { return by_channel[channel_index(c)]; }
    // Loads <dir>/hr.vgm, rr.vgm, t.vgm, spo2.vgm.
    static ModelSet load_dir(const std::string& dir);
};

struct WarningEvent {
    std::string driver_id;
    std::int64_t timestamp_ms = 0;
    std::string channel;  // channel name, or "severity"
    std::optional<double> predicted;
    int score = 0;  // channel score; assessment total on severity rows
    Severity severity = Severity::Normal;
    std::string message;
};

std::string event_csv_line(const WarningEvent& event);

struct ProcessResult {
    std::vector<WarningEvent> events;
    // Forecasts for the next instant, present once the 8-sample window is
    // full; absent during warm-up and after quarantine.
    std::optional<std::array<double, 4>> forecasts;
    std::optional<WarningAssessment> assessment;
    std::array<bool, 4> input_clamped{};
};

// Per-driver lane: filter each channel, window the filtered values, forecast
// one step ahead, score, and track severity. Single-writer.
class DriverPipeline {
public:
    DriverPipeline(std::string driver_id, const ModelSet& models, const MonitorConfig& config);

    ProcessResult process(const VitalSample& sample);

    bool quarantined() const { return quarantined_; }
    const std::string& driver_id() const { return driver_id_; }

private:
    struct ChannelLane {
        FilterState filter;
        double prev_norm = 0.0;
        bool has_prev = false;
        std::vector<double> window;  // filtered raw-unit values, oldest first
    };

    std::string driver_id_;
    const ModelSet* models_;
    const MonitorConfig* config_;
    std::array<ChannelLane, 4> lanes_;
    SeverityTracker tracker_;
    std::optional<std::int64_t> last_ts_;
    bool quarantined_ = false;
};

// Driver registry routing samples to pipelines; safe for concurrent callers.
class MonitorEngine {
public:
    MonitorEngine(ModelSet models, MonitorConfig config);

    ProcessResult process_sample(const VitalSample& sample);
    // Parses one CSV record line and processes it.
    ProcessResult process_line(std::string_view line);

    const ModelSet& models() const { return models_; }
    const MonitorConfig& config() const { return config_; }

private:
    ModelSet models_;
    MonitorConfig config_;
    std::mutex mutex_;
    std::map<std::string, std::unique_ptr<DriverPipeline>> drivers_;
};

// Offline replay: reads record lines from a trace file, writes event CSV
// lines to `events_out`. Deterministic: same file and models, same bytes.
void run_monitor_file(const std::string& trace_path, MonitorEngine& engine,
                      std::ostream& events_out);

// Replays a single-driver trace and returns per-channel forecast warning
// scores keyed by the instant each forecast targets (the next sample's
// timestamp). The final forecast targets nothing in the trace and is dropped.
std::array<std::vector<std::pair<std::int64_t, int>>, 4> forecast_score_series(
    MonitorEngine& engine, std::span<const VitalSample> samples);

// Newline-delimited CSV over TCP. Malformed or out-of-contract lines are
// answered on the connection with an "ERR ..." line and skipped; valid
// records feed the engine and events go to the sink stream.
class LineServer {
public:
    // address is "host:port"; port 0 binds an ephemeral port.
    explicit LineServer(const std::string& address);
    ~LineServer();

    LineServer(const LineServer&) = delete;
    LineServer& operator=(const LineServer&) = delete;

    std::uint16_t bound_port() const { return port_; }

    // Blocks until stop(); flushes the sink before returning.
    void serve(MonitorEngine& engine, std::ostream& events_sink);
    void stop();

private:
    int listen_fd_ = -1;
    int stop_pipe_[2] = {-1, -1};
    std::uint16_t port_ = 0;
};

}  // namespace vitalguard
