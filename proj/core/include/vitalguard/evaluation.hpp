#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vitalguard/ews.hpp"
#include "vitalguard/predictor.hpp"
#include "vitalguard/signals.hpp"

namespace vitalguard {

// Half-open time window [start_ms, end_ms).
struct Interval {
    std::int64_t start_ms = 0;
    std::int64_t end_ms = 0;
};

// A trace with per-channel ground-truth abnormal windows.
struct LabeledTrace {
    std::vector<VitalSample> samples;
    std::array<std::vector<Interval>, 4> abnormal_intervals;

    static LabeledTrace from_synth(const SynthTrace& trace);

    bool in_interval(VitalChannel c, std::int64_t timestamp_ms) const;
    void validate() const;  // intervals sorted, disjoint, inside the trace span
};

struct ErrorRow {
    std::size_t row = 0;       // 1-based input row
    std::size_t position = 0;  // 1-based predicted position within the row
    double predicted = 0.0;
    double measured = 0.0;
    double error = 0.0;  // predicted - measured
};

struct ErrorReport {
    std::vector<ErrorRow> rows;
    double mae = 0.0;
};

// Predicts positions 9 and 10 of each row from the preceding eight values.
ErrorReport abs_error_report(const Model& model,
                             std::span<const std::vector<double>> test_rows);

struct ConfusionCounts {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

    std::size_t total() const { return tp + fp + tn + fn; }
    // Absent (not zero) when the denominator is empty.
    std::optional<double> tp_rate() const;
    std::optional<double> fp_rate() const;
};

// Per-sample confusion against ground truth; a predicted score >= 1 counts
// as abnormal. predicted_scores must be a timestamp-aligned subsequence of
// the trace samples (warm-up samples may be missing from the front).
ConfusionCounts classify_samples(
    std::span<const std::pair<std::int64_t, int>> predicted_scores,
    const LabeledTrace& ground_truth, VitalChannel channel);

struct AssessmentRow {
    VitalChannel channel = VitalChannel::HR;
    std::int64_t timestamp_ms = 0;
    double predicted = 0.0;
    double measured = 0.0;
    int assessment_score = 0;  // score of the predicted value
    int actual_score = 0;      // score of the measured value
    bool miscalculation = false;
};

// One-step predictions along the trace for each model's channel, scored on
// both the predicted and the measured value; rows where the two scores
// differ are flagged.
std::vector<AssessmentRow> assessment_report(std::span<const Model> models,
                                             std::span<const VitalSample> trace,
                                             const ScoreBands& bands = ScoreBands::defaults());

// Report renderers: machine CSV and aligned text.
std::string error_report_csv(const ErrorReport& report);
std::string error_report_table(const ErrorReport& report);
std::string confusion_csv(std::span<const std::pair<VitalChannel, ConfusionCounts>> rows);
std::string confusion_table(std::span<const std::pair<VitalChannel, ConfusionCounts>> rows);
std::string assessment_csv(std::span<const AssessmentRow> rows);
std::string assessment_table(std::span<const AssessmentRow> rows);

}  // namespace vitalguard
