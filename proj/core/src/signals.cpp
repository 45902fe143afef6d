#include "vitalguard/signals.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>

#include "vitalguard/errors.hpp"
#include "vitalguard/rng.hpp"
#include "vitalguard/textio.hpp"

namespace vitalguard {

const char* channel_name(VitalChannel c) {
    switch (c) {
        case VitalChannel::HR: return "hr";
        case VitalChannel::RR: return "rr";
        case VitalChannel::T: return "t";
        case VitalChannel::SPO2: return "spo2";
    }
    return "?";
}

std::optional<VitalChannel> channel_from_name(std::string_view name) {
    std::string folded(name);
    for (char& c : folded) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (folded == "hr") return VitalChannel::HR;
    if (folded == "rr") return VitalChannel::RR;
    if (folded == "t") return VitalChannel::T;
    if (folded == "spo2") return VitalChannel::SPO2;
    return std::nullopt;
}

PlausibilityRange plausibility_range(VitalChannel c) {
    switch (c) {
        case VitalChannel::HR: return {20.0, 250.0};
        case VitalChannel::RR: return {2.0, 60.0};
        case VitalChannel::T: return {30.0, 43.0};
        case VitalChannel::SPO2: return {50.0, 100.0};
    }
    return {0.0, 0.0};
}

double VitalSample::value(VitalChannel c) const {
    switch (c) {
        case VitalChannel::HR: return hr;
        case VitalChannel::RR: return rr;
        case VitalChannel::T: return t;
        case VitalChannel::SPO2: return spo2;
    }
    return 0.0;
}

void VitalSample::set_value(VitalChannel c, double v) {
    switch (c) {
        case VitalChannel::HR: hr = v; break;
        case VitalChannel::RR: rr = v; break;
        case VitalChannel::T: t = v; break;
        case VitalChannel::SPO2: spo2 = v; break;
    }
}

void validate_sample(const VitalSample& s) {
    if (s.driver_id.empty())
        throw DataError("driver_id: must not be empty");
    for (VitalChannel c : kAllChannels) {
        double v = s.value(c);
        if (!std::isfinite(v) || !plausibility_range(c).contains(v))
            throw DataError(std::string(channel_name(c)) + ": value out of plausible range: \"" +
                            format_trimmed(v, 6) + "\"");
    }
}

VitalSample parse_record(std::string_view line) {
    auto fields = split(line, ',');
    if (fields.size() != 6)
        throw ParseError("record: expected 6 fields, got " + std::to_string(fields.size()) +
                         ": \"" + std::string(line) + "\"");
    VitalSample s;
    s.driver_id = std::string(trim(fields[0]));
    if (s.driver_id.empty())
        throw ParseError("driver_id: must not be empty: \"" + std::string(line) + "\"");
    s.timestamp_ms = parse_i64(fields[1], "timestamp_ms");
    s.hr = parse_double(fields[2], "hr");
    s.rr = parse_double(fields[3], "rr");
    s.t = parse_double(fields[4], "t");
    s.spo2 = parse_double(fields[5], "spo2");
    for (VitalChannel c : kAllChannels) {
        double v = s.value(c);
        if (!plausibility_range(c).contains(v))
            throw ParseError(std::string(channel_name(c)) + ": value out of plausible range: \"" +
                             std::string(trim(fields[2 + channel_index(c)])) + "\"");
    }
    return s;
}

std::string format_record(const VitalSample& s) {
    std::string out = s.driver_id;
    out += ',';
    out += std::to_string(s.timestamp_ms);
    for (VitalChannel c : kAllChannels) {
        out += ',';
        out += format_trimmed(s.value(c), 2);
    }
    return out;
}

namespace {

// Heart-rate reference recordings, one row per 30 s session.
constexpr double kTrainingRows[15][10] = {
    {79, 80, 80, 81, 82, 80, 81, 80, 81, 81},
    {96, 98, 98, 97, 95, 91, 90, 90, 89, 90},
    {93, 92, 88, 86, 83, 79, 75, 72, 73, 73},
    {80, 84, 85, 85, 84, 83, 83, 82, 81, 82},
    {89, 88, 88, 91, 92, 92, 89, 87, 84, 86},
    {79, 81, 83, 84, 86, 86, 84, 82, 78, 79},
    {97, 95, 94, 95, 95, 94, 94, 93, 92, 91},
    {86, 87, 87, 86, 85, 82, 81, 79, 79, 80},
    {84, 85, 86, 86, 87, 87, 87, 85, 82, 83},
    {93, 95, 96, 98, 97, 96, 95, 94, 92, 93},
    {90, 93, 95, 93, 90, 87, 84, 81, 77, 80},
    {83, 81, 81, 80, 79, 80, 81, 83, 84, 83},
    {87, 90, 91, 90, 89, 88, 86, 85, 85, 86},
    {84, 86, 88, 89, 90, 89, 88, 86, 86, 88},
    {94, 95, 96, 98, 97, 95, 94, 94, 93, 93},
};

constexpr double kTestRows[5][10] = {
    {82, 80, 79, 80, 81, 82, 84, 86, 88, 86},
    {80, 79, 78, 77, 77, 78, 79, 79, 80, 80},
    {91, 90, 88, 87, 86, 84, 85, 84, 85, 87},
    {93, 91, 91, 90, 90, 91, 92, 94, 95, 93},
    {73, 74, 73, 74, 74, 73, 72, 71, 71, 72},
};

FixtureSet build_fixtures() {
    FixtureSet f;
    for (const auto& row : kTrainingRows)
        f.training_rows.emplace_back(row, row + 10);
    for (const auto& row : kTestRows)
        f.test_rows.emplace_back(row, row + 10);
    return f;
}

}  // namespace

const FixtureSet& load_fixtures() {
    static const FixtureSet fixtures = build_fixtures();
    return fixtures;
}

SynthConfig SynthConfig::defaults() {
    SynthConfig c;
    c.channels[channel_index(VitalChannel::HR)] = {82.0, 4.0, 600.0, 0.8};
    c.channels[channel_index(VitalChannel::RR)] = {16.0, 1.0, 700.0, 0.3};
    c.channels[channel_index(VitalChannel::T)] = {36.6, 0.15, 900.0, 0.05};
    c.channels[channel_index(VitalChannel::SPO2)] = {97.0, 0.5, 800.0, 0.3};
    return c;
}

SynthTrace synth_generate(const SynthConfig& config, double duration_s) {
    if (duration_s <= 0.0)
        throw DataError("duration_s: must be positive");
    if (config.driver_id.empty())
        throw DataError("driver_id: must not be empty");
    const std::int64_t duration_ms = static_cast<std::int64_t>(duration_s * 1000.0);
    for (const auto& a : config.anomalies) {
        if (a.duration_ms <= 0)
            throw DataError("anomaly duration_ms: must be positive");
        if (a.onset_ms < 0 || a.onset_ms + a.duration_ms > duration_ms)
            throw DataError("anomaly window outside trace duration");
        if (!plausibility_range(a.channel).contains(a.target))
            throw DataError(std::string("anomaly target out of plausible range for ") +
                            channel_name(a.channel));
    }

    SynthTrace trace;
    Rng rng(config.rng_seed);
    constexpr double kTau = 6.283185307179586476925286766559;
    for (std::int64_t ts = 0; ts < duration_ms; ts += kCadenceMs) {
        VitalSample s;
        s.driver_id = config.driver_id;
        s.timestamp_ms = ts;
        double t_s = static_cast<double>(ts) / 1000.0;
        for (VitalChannel c : kAllChannels) {
            const ChannelSynth& ch = config.channels[channel_index(c)];
            double v = ch.baseline;
            if (ch.drift_amplitude != 0.0 && ch.drift_period_s > 0.0)
                v += ch.drift_amplitude * std::sin(kTau * t_s / ch.drift_period_s);
            for (const auto& a : config.anomalies) {
                if (a.channel == c && ts >= a.onset_ms && ts < a.onset_ms + a.duration_ms)
                    v = a.target;
            }
            if (ch.noise_sigma > 0.0)
                v += ch.noise_sigma * rng.gaussian();
            auto range = plausibility_range(c);
            s.set_value(c, std::clamp(v, range.lo, range.hi));
        }
        trace.samples.push_back(std::move(s));
    }
    for (const auto& a : config.anomalies)
        trace.truth.push_back({a.channel, a.onset_ms, a.onset_ms + a.duration_ms});
    return trace;
}

std::vector<VitalSample> load_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open trace file: " + path);
    std::vector<VitalSample> samples;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        try {
            samples.push_back(parse_record(line));
        } catch (const ParseError& e) {
            throw ParseError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return samples;
}

std::vector<double> channel_series(const std::vector<VitalSample>& samples, VitalChannel c) {
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(s.value(c));
    return out;
}

std::vector<std::vector<double>> contiguous_runs(const std::vector<VitalSample>& samples,
                                                 VitalChannel c, std::int64_t max_gap_ms) {
    // Output order is deterministic: drivers sorted by id, each driver's runs in time order.
    struct DriverRuns {
        std::int64_t last_ts = 0;
        std::vector<std::vector<double>> runs;
    };
    std::map<std::string, DriverRuns> by_driver;
    for (const auto& s : samples) {
        auto [it, inserted] = by_driver.try_emplace(s.driver_id);
        DriverRuns& d = it->second;
        if (!inserted) {
            if (s.timestamp_ms < d.last_ts)
                throw DataError("timestamp regression for driver " + s.driver_id);
            if (s.timestamp_ms - d.last_ts > max_gap_ms) d.runs.emplace_back();
        } else {
            d.runs.emplace_back();
        }
        d.last_ts = s.timestamp_ms;
        d.runs.back().push_back(s.value(c));
    }
    std::vector<std::vector<double>> runs;
    for (auto& [id, d] : by_driver)
        for (auto& r : d.runs) runs.push_back(std::move(r));
    return runs;
}

}  // namespace vitalguard
