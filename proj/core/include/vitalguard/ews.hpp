#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vitalguard/signals.hpp"

namespace vitalguard {

// Textbook resting-adult normal range for a channel; used for validation
// context and as the denominator of dimensionless error rates.
struct NormalRange {
    double lo;
    double hi;
    double width() const { return hi - lo; }
};
NormalRange normal_range(VitalChannel c);

// One scoring band: closed interval [lo, hi], edges may be infinite.
struct ScoreBand {
    double lo;
    double hi;
    int score;
};

struct BandRow {
    VitalChannel channel;
    double lo;
    double hi;
    int score;
};

// Per-channel ordered warning-score bands. The printed integer bands leave
// gaps (e.g. heart rate (104,105)); values falling in a gap take the MAX of
// the two adjacent bands' scores, so continuous predictions always resolve
// to the more abnormal side.
class ScoreBands {
public:
    static const ScoreBands& defaults();
    static ScoreBands from_rows(std::span<const BandRow> rows);
    static ScoreBands load(const std::string& path);  // "channel lo hi score" lines

    int score(VitalChannel c, double value) const;
    std::span<const ScoreBand> bands(VitalChannel c) const;
    ScoreBand score0_band(VitalChannel c) const;

private:
    ScoreBands() = default;
    void validate() const;
    std::vector<ScoreBand> by_channel_[4];
};

// Score against the compiled-in default bands.
int score_value(VitalChannel c, double value);

struct WarningAssessment {
    std::array<int, 4> scores{};  // indexed by channel_index
    int total = 0;
    std::int64_t timestamp_ms = 0;
};

WarningAssessment score_sample(const ScoreBands& bands, const VitalSample& sample);
WarningAssessment score_values(const ScoreBands& bands, const std::array<double, 4>& values,
                               std::int64_t timestamp_ms);

enum class Severity { Normal, General, Emergency };
const char* severity_name(Severity s);

struct SeverityConfig {
    std::int64_t t_threshold_ms = 60000;
    // false: abnormal means total >= 1; true: any single channel score >= 1
    bool per_channel_trigger = false;
};

struct SeverityEvent {
    Severity from;
    Severity to;
    std::int64_t timestamp_ms;
};

// Per-driver escalation state machine. Abnormality becomes General on the
// first abnormal assessment and Emergency once it has persisted continuously
// for more than the threshold; any normal assessment resets to Normal. The
// abnormal span is measured from the last normal sample seen (or from the
// first sample of the stream when none was).
class SeverityTracker {
public:
    explicit SeverityTracker(SeverityConfig config = {});

    std::optional<SeverityEvent> update(const WarningAssessment& assessment);

    Severity state() const { return state_; }
    std::optional<std::int64_t> abnormal_since() const { return abnormal_since_; }

private:
    SeverityConfig config_;
    Severity state_ = Severity::Normal;
    std::optional<std::int64_t> abnormal_since_;
    std::optional<std::int64_t> last_normal_ts_;
    std::optional<std::int64_t> last_ts_;
};

}  // namespace vitalguard
