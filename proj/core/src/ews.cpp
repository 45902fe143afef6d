#include "vitalguard/ews.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "vitalguard/errors.hpp"
#include "vitalguard/textio.hpp"

namespace vitalguard {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

NormalRange normal_range(VitalChannel c) {
    switch (c) {
        case VitalChannel::HR: return {60.0, 100.0};
        case VitalChannel::RR: return {12.0, 17.0};
        case VitalChannel::T: return {36.0, 37.3};
        case VitalChannel::SPO2: return {93.0, 100.0};
    }
    return {0.0, 1.0};
}

const ScoreBands& ScoreBands::defaults() {
    static const ScoreBands instance = [] {
        ScoreBands b;
        b.by_channel_[channel_index(VitalChannel::HR)] = {
            {-kInf, 50.0, 3}, {51.0, 58.0, 2}, {59.0, 63.0, 1}, {64.0, 104.0, 0},
            {105.0, 112.0, 1}, {113.0, 127.0, 2}, {128.0, kInf, 3}};
        b.by_channel_[channel_index(VitalChannel::RR)] = {
            {-kInf, 7.0, 3}, {8.0, 10.0, 2}, {11.0, 13.0, 1}, {14.0, 25.0, 0},
            {26.0, 28.0, 1}, {29.0, 33.0, 2}, {34.0, kInf, 3}};
        b.by_channel_[channel_index(VitalChannel::T)] = {
            {-kInf, 35.4, 3}, {35.5, 35.9, 1}, {36.0, 37.3, 0}, {37.4, 38.3, 1},
            {38.4, kInf, 3}};
        b.by_channel_[channel_index(VitalChannel::SPO2)] = {
            {-kInf, 84.0, 3}, {85.0, 90.0, 2}, {91.0, 93.0, 1}, {94.0, kInf, 0}};
        b.validate();
        return b;
    }();
    return instance;
}

ScoreBands ScoreBands::from_rows(std::span<const BandRow> rows) {
    ScoreBands b;
    for (const auto& row : rows)
        b.by_channel_[channel_index(row.channel)].push_back({row.lo, row.hi, row.score});
    for (auto& bands : b.by_channel_)
        std::sort(bands.begin(), bands.end(),
                  [](const ScoreBand& x, const ScoreBand& y) { return x.lo < y.lo; });
    b.validate();
    return b;
}

ScoreBands ScoreBands::load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open bands file: " + path);
    auto parse_edge = [](std::string_view tok, std::string_view what) {
        std::string_view t = trim(tok);
        if (t == "inf" || t == "+inf") return kInf;
        if (t == "-inf") return -kInf;
        return parse_double(t, what);
    };
    std::vector<BandRow> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = trim(line);
        if (sv.empty() || sv.front() == '#') continue;
        std::vector<std::string_view> tokens;
        for (auto tok : split(sv, ' '))
            if (!trim(tok).empty()) tokens.push_back(trim(tok));
        if (tokens.size() != 4)
            throw ParseError(path + ":" + std::to_string(line_no) +
                             ": expected \"channel lo hi score\"");
        auto channel = channel_from_name(tokens[0]);
        if (!channel)
            throw ParseError(path + ":" + std::to_string(line_no) + ": unknown channel \"" +
                             std::string(tokens[0]) + "\"");
        BandRow row;
        row.channel = *channel;
        row.lo = parse_edge(tokens[1], "lo");
        row.hi = parse_edge(tokens[2], "hi");
        row.score = static_cast<int>(parse_i64(tokens[3], "score"));
        rows.push_back(row);
    }
    return from_rows(rows);
}

void ScoreBands::validate() const {
    for (VitalChannel c : kAllChannels) {
        const auto& bands = by_channel_[channel_index(c)];
        if (bands.empty())
            throw DataError(std::string("no score bands for channel ") + channel_name(c));
        int zero_bands = 0;
        for (std::size_t i = 0; i < bands.size(); ++i) {
            const auto& band = bands[i];
            if (!(band.lo <= band.hi))
                throw DataError(std::string("band with lo > hi for channel ") + channel_name(c));
            if (band.score < 0 || band.score > 3)
                throw DataError(std::string("band score outside 0..3 for channel ") +
                                channel_name(c));
            if (band.score == 0) ++zero_bands;
            if (i > 0 && !(bands[i - 1].hi < band.lo))
                throw DataError(std::string("bands overlap or are unordered for channel ") +
                                channel_name(c));
        }
        if (bands.front().lo != -kInf || bands.back().hi != kInf)
            throw DataError(std::string("bands must cover the whole line for channel ") +
                            channel_name(c));
        if (zero_bands != 1)
            throw DataError(std::string("expected exactly one score-0 band for channel ") +
                            channel_name(c));
    }
}

int ScoreBands::score(VitalChannel c, double value) const {
    if (!std::isfinite(value))
        throw DataError(std::string("cannot score non-finite value for channel ") +
                        channel_name(c));
    const auto& bands = by_channel_[channel_index(c)];
    for (std::size_t i = 0; i < bands.size(); ++i) {
        if (value >= bands[i].lo && value <= bands[i].hi)
            return bands[i].score;
        // gap between this band and the next: more abnormal side wins
        if (i + 1 < bands.size() && value > bands[i].hi && value < bands[i + 1].lo)
            return std::max(bands[i].score, bands[i + 1].score);
    }
    return bands.back().score;  // unreachable with validated coverage
}

std::span<const ScoreBand> ScoreBands::bands(VitalChannel c) const {
    return by_channel_[channel_index(c)];
}

ScoreBand ScoreBands::score0_band(VitalChannel c) const {
    for (const auto& band : by_channel_[channel_index(c)])
        if (band.score == 0) return band;
    throw DataError("no score-0 band");  // unreachable after validate()
}

int score_value(VitalChannel c, double value) {
    return ScoreBands::defaults().score(c, value);
}

WarningAssessment score_values(const ScoreBands& bands, const std::array<double, 4>& values,
                               std::int64_t timestamp_ms) {
    WarningAssessment a;
    a.timestamp_ms = timestamp_ms;
    for (VitalChannel c : kAllChannels) {
        int s = bands.score(c, values[channel_index(c)]);
        a.scores[channel_index(c)] = s;
        a.total += s;
    }
    return a;
}

WarningAssessment score_sample(const ScoreBands& bands, const VitalSample& sample) {
    return score_values(bands, {sample.hr, sample.rr, sample.t, sample.spo2},
                        sample.timestamp_ms);
}

const char* severity_name(Severity s) {
    switch (s) {
        case Severity::Normal: return "normal";
        case Severity::General: return "general";
        case Severity::Emergency: return "emergency";
    }
    return "?";
}

SeverityTracker::SeverityTracker(SeverityConfig config) : config_(config) {}

std::optional<SeverityEvent> SeverityTracker::update(const WarningAssessment& assessment) {
    const std::int64_t ts = assessment.timestamp_ms;
    if (last_ts_ && ts <= *last_ts_)
        throw DataError("timestamps must be strictly increasing: " + std::to_string(ts) +
                        " after " + std::to_string(*last_ts_));
    last_ts_ = ts;

    bool abnormal;
    if (config_.per_channel_trigger) {
        abnormal = false;
        for (int s : assessment.scores) abnormal = abnormal || s >= 1;
    } else {
        abnormal = assessment.total >= 1;
    }

    Severity before = state_;
    if (!abnormal) {
        state_ = Severity::Normal;
        abnormal_since_.reset();
        last_normal_ts_ = ts;
    } else if (state_ == Severity::Normal) {
        abnormal_since_ = last_normal_ts_.value_or(ts);
        state_ = Severity::General;
    } else if (state_ == Severity::General && ts - *abnormal_since_ > config_.t_threshold_ms) {
        state_ = Severity::Emergency;
    }

    if (state_ != before)
        return SeverityEvent{before, state_, ts};
    return std::nullopt;
}

}  // namespace vitalguard
