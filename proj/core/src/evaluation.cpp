#include "vitalguard/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include "vitalguard/errors.hpp"
#include "vitalguard/textio.hpp"

namespace vitalguard {

LabeledTrace LabeledTrace::from_synth(const SynthTrace& trace) {
    LabeledTrace out;
    out.samples = trace.samples;
    for (const auto& t : trace.truth)
        out.abnormal_intervals[channel_index(t.channel)].push_back({t.start_ms, t.end_ms});
    for (auto& intervals : out.abnormal_intervals) {
        std::sort(intervals.begin(), intervals.end(),
                  [](const Interval& a, const Interval& b) { return a.start_ms < b.start_ms; });
        // merge touching or overlapping windows so intervals stay disjoint
        std::vector<Interval> merged;
        for (const auto& iv : intervals) {
            if (!merged.empty() && iv.start_ms <= merged.back().end_ms)
                merged.back().end_ms = std::max(merged.back().end_ms, iv.end_ms);
            else
                merged.push_back(iv);
        }
        intervals = std::move(merged);
    }
    out.validate();
    return out;
}

void LabeledTrace::validate() const {
    if (samples.empty())
        throw DataError("labeled trace has no samples");
    const std::int64_t first = samples.front().timestamp_ms;
    const std::int64_t last = samples.back().timestamp_ms + kCadenceMs;
    for (VitalChannel c : kAllChannels) {
        const auto& intervals = abnormal_intervals[channel_index(c)];
        for (std::size_t i = 0; i < intervals.size(); ++i) {
            const auto& iv = intervals[i];
            if (!(iv.start_ms < iv.end_ms))
                throw DataError("empty ground-truth interval");
            if (iv.start_ms < first || iv.end_ms > last)
                throw DataError("ground-truth interval outside the trace time span");
            if (i > 0 && intervals[i - 1].end_ms > iv.start_ms)
                throw DataError("ground-truth intervals overlap");
        }
    }
}

bool LabeledTrace::in_interval(VitalChannel c, std::int64_t timestamp_ms) const {
    for (const auto& iv : abnormal_intervals[channel_index(c)])
        if (timestamp_ms >= iv.start_ms && timestamp_ms < iv.end_ms) return true;
    return false;
}

ErrorReport abs_error_report(const Model& model,
                             std::span<const std::vector<double>> test_rows) {
    ErrorReport report;
    double abs_sum = 0.0;
    for (std::size_t r = 0; r < test_rows.size(); ++r) {
        const auto& row = test_rows[r];
        if (row.size() < kLookback + 1)
            throw DataError("test row " + std::to_string(r + 1) + " too short: need at least " +
                            std::to_string(kLookback + 1) + " values");
        for (std::size_t pos = kLookback; pos < row.size() && pos < kLookback + 2; ++pos) {
            std::span<const double> window(row.data() + (pos - kLookback), kLookback);
            ErrorRow er;
            er.row = r + 1;
            er.position = pos + 1;
            er.predicted = predict_next(model, window);
            er.measured = row[pos];
            er.error = er.predicted - er.measured;
            abs_sum += std::abs(er.error);
            report.rows.push_back(er);
        }
    }
    if (!report.rows.empty())
        report.mae = abs_sum / static_cast<double>(report.rows.size());
    return report;
}

std::optional<double> ConfusionCounts::tp_rate() const {
    if (tp + fn == 0) return std::nullopt;
    return static_cast<double>(tp) / static_cast<double>(tp + fn);
}

std::optional<double> ConfusionCounts::fp_rate() const {
    if (fp + tn == 0) return std::nullopt;
    return static_cast<double>(fp) / static_cast<double>(fp + tn);
}

ConfusionCounts classify_samples(
    std::span<const std::pair<std::int64_t, int>> predicted_scores,
    const LabeledTrace& ground_truth, VitalChannel channel) {
    ConfusionCounts counts;
    std::size_t trace_idx = 0;
    std::int64_t prev_ts = 0;
    bool first = true;
    for (const auto& [ts, score] : predicted_scores) {
        if (!first && ts <= prev_ts)
            throw DataError("predicted scores are not strictly increasing in time");
        first = false;
        prev_ts = ts;
        while (trace_idx < ground_truth.samples.size() &&
               ground_truth.samples[trace_idx].timestamp_ms < ts)
            ++trace_idx;
        if (trace_idx >= ground_truth.samples.size() ||
            ground_truth.samples[trace_idx].timestamp_ms != ts)
            throw DataError("predicted score at " + std::to_string(ts) +
                            " has no matching trace sample");
        bool truth = ground_truth.in_interval(channel, ts);
        bool predicted_abnormal = score >= 1;
        if (predicted_abnormal && truth)
            ++counts.tp;
        else if (predicted_abnormal && !truth)
            ++counts.fp;
        else if (!predicted_abnormal && truth)
            ++counts.fn;
        else
            ++counts.tn;
    }
    return counts;
}

std::vector<AssessmentRow> assessment_report(std::span<const Model> models,
                                             std::span<const VitalSample> trace,
                                             const ScoreBands& bands) {
    std::vector<AssessmentRow> rows;
    for (const auto& model : models) {
        std::vector<double> series;
        series.reserve(trace.size());
        for (const auto& s : trace) series.push_back(s.value(model.channel));
        for (std::size_t k = kLookback; k < series.size(); ++k) {
            std::span<const double> window(series.data() + (k - kLookback), kLookback);
            AssessmentRow row;
            row.channel = model.channel;
            row.timestamp_ms = trace[k].timestamp_ms;
            row.predicted = predict_next(model, window);
            row.measured = series[k];
            row.assessment_score = bands.score(model.channel, row.predicted);
            row.actual_score = bands.score(model.channel, row.measured);
            row.miscalculation = row.assessment_score != row.actual_score;
            rows.push_back(row);
        }
    }
    return rows;
}

namespace {

std::string format_rate(const std::optional<double>& rate) {
    if (!rate) return "absent";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", *rate);
    return buf;
}

}  // namespace

std::string error_report_csv(const ErrorReport& report) {
    std::string out = "row,position,predicted,measured,error\n";
    for (const auto& r : report.rows) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%zu,%zu,%.2f,%s,%.2f\n", r.row, r.position, r.predicted,
                      format_trimmed(r.measured, 2).c_str(), r.error);
        out += buf;
    }
    return out;
}

std::string error_report_table(const ErrorReport& report) {
    std::string out = "row  pos  predicted  measured  error\n";
    for (const auto& r : report.rows) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%-4zu %-4zu %9.2f  %8s  %+6.2f\n", r.row, r.position,
                      r.predicted, format_trimmed(r.measured, 2).c_str(), r.error);
        out += buf;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "MAE %.3f over %zu predictions\n", report.mae,
                  report.rows.size());
    out += buf;
    return out;
}

std::string confusion_csv(std::span<const std::pair<VitalChannel, ConfusionCounts>> rows) {
    std::string out = "channel,tp,fp,tn,fn,tp_rate,fp_rate\n";
    for (const auto& [channel, c] : rows) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s,%zu,%zu,%zu,%zu,%s,%s\n", channel_name(channel), c.tp,
                      c.fp, c.tn, c.fn, format_rate(c.tp_rate()).c_str(),
                      format_rate(c.fp_rate()).c_str());
        out += buf;
    }
    return out;
}

std::string confusion_table(std::span<const std::pair<VitalChannel, ConfusionCounts>> rows) {
    std::string out = "channel  tp     fp     tn     fn     tp_rate  fp_rate\n";
    for (const auto& [channel, c] : rows) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%-8s %-6zu %-6zu %-6zu %-6zu %-8s %-8s\n",
                      channel_name(channel), c.tp, c.fp, c.tn, c.fn,
                      format_rate(c.tp_rate()).c_str(), format_rate(c.fp_rate()).c_str());
        out += buf;
    }
    return out;
}

std::string assessment_csv(std::span<const AssessmentRow> rows) {
    std::string out = "channel,timestamp_ms,predicted,measured,assessment_score,actual_score,flag\n";
    for (const auto& r : rows) {
        char buf[192];
        std::snprintf(buf, sizeof buf, "%s,%lld,%.2f,%s,%d,%d,%s\n", channel_name(r.channel),
                      static_cast<long long>(r.timestamp_ms), r.predicted,
                      format_trimmed(r.measured, 2).c_str(), r.assessment_score, r.actual_score,
                      r.miscalculation ? "*" : "");
        out += buf;
    }
    return out;
}

std::string assessment_table(std::span<const AssessmentRow> rows) {
    std::string out = "channel  timestamp_ms  predicted  measured  assess  actual  flag\n";
    for (const auto& r : rows) {
        char buf[192];
        std::snprintf(buf, sizeof buf, "%-8s %-13lld %9.2f  %8s  %-7d %-7d %s\n",
                      channel_name(r.channel), static_cast<long long>(r.timestamp_ms), r.predicted,
                      format_trimmed(r.measured, 2).c_str(), r.assessment_score, r.actual_score,
                      r.miscalculation ? "*" : "");
        out += buf;
    }
    return out;
}

}  // namespace vitalguard
