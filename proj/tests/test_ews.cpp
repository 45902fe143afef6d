#include <doctest.h>

#include <cmath>
#include <vector>

#include "test_support.hpp"
#include "vitalguard/errors.hpp"
#include "vitalguard/ews.hpp"

using namespace vitalguard;

namespace {

struct Probe {
    VitalChannel channel;
    double value;
    int expected;
};

WarningAssessment assess(int hr_score_value_like_total, std::int64_t ts) {
    WarningAssessment a;
    a.total = hr_score_value_like_total;
    a.timestamp_ms = ts;
    return a;
}

}  // namespace

TEST_SUITE("ews") {

TEST_CASE("printed band table reproduces exactly") {
    // independently transcribed band probes: edges and interior points
    const std::vector<Probe> probes = {
        {VitalChannel::HR, 20, 3},    {VitalChannel::HR, 50, 3},
        {VitalChannel::HR, 51, 2},    {VitalChannel::HR, 58, 2},
        {VitalChannel::HR, 59, 1},    {VitalChannel::HR, 63, 1},
        {VitalChannel::HR, 64, 0},    {VitalChannel::HR, 80, 0},
        {VitalChannel::HR, 104, 0},   {VitalChannel::HR, 105, 1},
        {VitalChannel::HR, 112, 1},   {VitalChannel::HR, 113, 2},
        {VitalChannel::HR, 127, 2},   {VitalChannel::HR, 128, 3},
        {VitalChannel::HR, 250, 3},

        {VitalChannel::RR, 2, 3},     {VitalChannel::RR, 7, 3},
        {VitalChannel::RR, 8, 2},     {VitalChannel::RR, 10, 2},
        {VitalChannel::RR, 11, 1},    {VitalChannel::RR, 13, 1},
        {VitalChannel::RR, 14, 0},    {VitalChannel::RR, 25, 0},
        {VitalChannel::RR, 26, 1},    {VitalChannel::RR, 28, 1},
        {VitalChannel::RR, 29, 2},    {VitalChannel::RR, 33, 2},
        {VitalChannel::RR, 34, 3},    {VitalChannel::RR, 60, 3},

        {VitalChannel::T, 30.0, 3},   {VitalChannel::T, 35.4, 3},
        {VitalChannel::T, 35.5, 1},   {VitalChannel::T, 35.9, 1},
        {VitalChannel::T, 36.0, 0},   {VitalChannel::T, 37.3, 0},
        {VitalChannel::T, 37.4, 1},   {VitalChannel::T, 38.3, 1},
        {VitalChannel::T, 38.4, 3},   {VitalChannel::T, 43.0, 3},

        {VitalChannel::SPO2, 50, 3},  {VitalChannel::SPO2, 84, 3},
        {VitalChannel::SPO2, 85, 2},  {VitalChannel::SPO2, 90, 2},
        {VitalChannel::SPO2, 91, 1},  {VitalChannel::SPO2, 93, 1},
        {VitalChannel::SPO2, 94, 0},  {VitalChannel::SPO2, 100, 0},
    };
    for (const auto& p : probes) {
        CAPTURE(channel_name(p.channel));
        CAPTURE(p.value);
        CHECK(score_value(p.channel, p.value) == p.expected);
    }
}

TEST_CASE("gap values take the more abnormal neighbor score") {
    CHECK(score_value(VitalChannel::HR, 104.49) == 1);
    CHECK(score_value(VitalChannel::SPO2, 90.51) == 2);
    CHECK(score_value(VitalChannel::HR, 50.5) == 3);
    CHECK(score_value(VitalChannel::HR, 58.5) == 2);
    CHECK(score_value(VitalChannel::HR, 63.5) == 1);
    CHECK(score_value(VitalChannel::HR, 112.5) == 2);
    CHECK(score_value(VitalChannel::HR, 127.5) == 3);
    CHECK(score_value(VitalChannel::RR, 7.5) == 3);
    CHECK(score_value(VitalChannel::RR, 10.5) == 2);
    CHECK(score_value(VitalChannel::RR, 13.5) == 1);
    CHECK(score_value(VitalChannel::RR, 25.5) == 1);
    CHECK(score_value(VitalChannel::RR, 28.5) == 2);
    CHECK(score_value(VitalChannel::RR, 33.5) == 3);
    CHECK(score_value(VitalChannel::T, 35.45) == 3);
    CHECK(score_value(VitalChannel::T, 35.95) == 1);
    CHECK(score_value(VitalChannel::T, 37.35) == 1);
    CHECK(score_value(VitalChannel::T, 38.35) == 3);
    CHECK(score_value(VitalChannel::SPO2, 84.5) == 3);
    CHECK(score_value(VitalChannel::SPO2, 93.5) == 1);
    // interior of a printed band, not a gap
    CHECK(score_value(VitalChannel::T, 35.89) == 1);
}

TEST_CASE("every plausible value gets a score without throwing") {
    for (VitalChannel c : kAllChannels) {
        PlausibilityRange range = plausibility_range(c);
        for (double v = range.lo; v <= range.hi + 1e-9; v += 0.01) {
            int s = score_value(c, v);
            CHECK(s >= 0);
            CHECK(s <= 3);
        }
    }
    // the bands extend beyond plausibility on both sides
    CHECK(score_value(VitalChannel::HR, 1.0) == 3);
    CHECK(score_value(VitalChannel::HR, 400.0) == 3);
    CHECK_THROWS_AS(score_value(VitalChannel::HR, std::nan("")), DataError);
}

TEST_CASE("scores fall toward the normal band and rise past it") {
    for (VitalChannel c : kAllChannels) {
        ScoreBand normal = ScoreBands::defaults().score0_band(c);
        PlausibilityRange range = plausibility_range(c);
        int prev = score_value(c, range.lo);
        for (double v = range.lo; v < normal.lo; v += 0.01) {
            int s = score_value(c, v);
            CHECK(s <= prev);
            prev = s;
        }
        if (std::isfinite(normal.hi)) {
            prev = score_value(c, normal.hi);
            for (double v = normal.hi; v <= range.hi; v += 0.01) {
                int s = score_value(c, v);
                CHECK(s >= prev);
                prev = s;
            }
        }
    }
}

TEST_CASE("published assessment rows reproduce") {
    struct Row {
        VitalChannel channel;
        double predicted, measured;
        int predicted_score, measured_score;
    };
    const std::vector<Row> rows = {
        {VitalChannel::SPO2, 97.33, 97, 0, 0}, {VitalChannel::HR, 81.64, 82, 0, 0},
        {VitalChannel::RR, 17.83, 18, 0, 0},   {VitalChannel::T, 35.89, 36.20, 1, 0},
        {VitalChannel::SPO2, 90.51, 91, 2, 1}, {VitalChannel::HR, 88.75, 89, 0, 0},
        {VitalChannel::RR, 17.32, 17, 0, 0},   {VitalChannel::T, 36.21, 36.0, 0, 0},
        {VitalChannel::SPO2, 94.33, 94, 0, 0}, {VitalChannel::HR, 104.49, 104, 1, 0},
        {VitalChannel::RR, 22.84, 23, 0, 0},   {VitalChannel::T, 35.81, 35.6, 1, 1},
    };
    for (const auto& r : rows) {
        CAPTURE(channel_name(r.channel));
        CAPTURE(r.predicted);
        CHECK(score_value(r.channel, r.predicted) == r.predicted_score);
        CHECK(score_value(r.channel, r.measured) == r.measured_score);
    }
}

TEST_CASE("normal ranges used for error scaling") {
    CHECK(normal_range(VitalChannel::HR).lo == 60);
    CHECK(normal_range(VitalChannel::HR).hi == 100);
    CHECK(normal_range(VitalChannel::RR).lo == 12);
    CHECK(normal_range(VitalChannel::RR).hi == 17);
    CHECK(normal_range(VitalChannel::T).width() == doctest::Approx(1.3).epsilon(1e-12));
    CHECK(normal_range(VitalChannel::SPO2).lo == 93);
    CHECK(normal_range(VitalChannel::SPO2).hi == 100);
}

TEST_CASE("sample and vector scoring aggregate per-channel scores") {
    VitalSample s;
    s.driver_id = "d";
    s.timestamp_ms = 9000;
    s.hr = 110;   // 1
    s.rr = 30;    // 2
    s.t = 36.5;   // 0
    s.spo2 = 84;  // 3
    WarningAssessment a = score_sample(ScoreBands::defaults(), s);
    CHECK(a.scores[channel_index(VitalChannel::HR)] == 1);
    CHECK(a.scores[channel_index(VitalChannel::RR)] == 2);
    CHECK(a.scores[channel_index(VitalChannel::T)] == 0);
    CHECK(a.scores[channel_index(VitalChannel::SPO2)] == 3);
    CHECK(a.total == 6);
    CHECK(a.timestamp_ms == 9000);

    WarningAssessment b =
        score_values(ScoreBands::defaults(), {110.0, 30.0, 36.5, 84.0}, 9000);
    CHECK(b.total == a.total);
    CHECK(b.scores == a.scores);
}

TEST_CASE("band files load, score identically, and are validated") {
    test_support::TempDir dir;
    std::string path = dir.file("bands.txt");
    test_support::write_file(path,
                             "# heart rate only differs nowhere; full default table\n"
                             "hr -inf 50 3\nhr 51 58 2\nhr 59 63 1\nhr 64 104 0\n"
                             "hr 105 112 1\nhr 113 127 2\nhr 128 inf 3\n"
                             "rr -inf 7 3\nrr 8 10 2\nrr 11 13 1\nrr 14 25 0\n"
                             "rr 26 28 1\nrr 29 33 2\nrr 34 inf 3\n"
                             "t -inf 35.4 3\nt 35.5 35.9 1\nt 36.0 37.3 0\n"
                             "t 37.4 38.3 1\nt 38.4 inf 3\n"
                             "spo2 -inf 84 3\nspo2 85 90 2\nspo2 91 93 1\nspo2 94 inf 0\n");
    ScoreBands loaded = ScoreBands::load(path);
    for (VitalChannel c : kAllChannels) {
        PlausibilityRange range = plausibility_range(c);
        for (double v = range.lo; v <= range.hi + 1e-9; v += 0.05)
            CHECK(loaded.score(c, v) == score_value(c, v));
    }

    test_support::write_file(path, "hr -inf 104 0\nhr 90 inf 1\n");  // overlap
    CHECK_THROWS_AS(ScoreBands::load(path), DataError);
    test_support::write_file(path, "hr -inf 50 3\nhr 51 inf 1\n");  // no normal band
    CHECK_THROWS_AS(ScoreBands::load(path), DataError);
    test_support::write_file(path, "hr 0 104 0\nhr 105 inf 1\n");  // open left edge
    CHECK_THROWS_AS(ScoreBands::load(path), DataError);
    test_support::write_file(path, "hr -inf 104 0\nhr 105 inf 4\n");  // score 4
    CHECK_THROWS_AS(ScoreBands::load(path), DataError);
    test_support::write_file(path, "hr -inf 104 0\nbad line\n");
    CHECK_THROWS_AS(ScoreBands::load(path), ParseError);
}

TEST_CASE("escalation after one minute of continuous abnormality") {
    // one normal sample, then abnormal every 3 s: the span since the last
    // normal sample first exceeds 60 s at the 21st abnormal sample
    SeverityTracker tracker;
    CHECK_FALSE(tracker.update(assess(0, 0)).has_value());
    std::vector<SeverityEvent> events;
    for (int k = 1; k <= 21; ++k) {
        auto e = tracker.update(assess(2, k * 3000));
        if (e) events.push_back(*e);
    }
    REQUIRE(events.size() == 2);
    CHECK(events[0].from == Severity::Normal);
    CHECK(events[0].to == Severity::General);
    CHECK(events[0].timestamp_ms == 3000);
    CHECK(events[1].from == Severity::General);
    CHECK(events[1].to == Severity::Emergency);
    CHECK(events[1].timestamp_ms == 63000);  // 63000 - 0 > 60000, first time over
    CHECK(tracker.state() == Severity::Emergency);
}

TEST_CASE("a normal assessment resets the escalation") {
    SeverityTracker tracker;
    tracker.update(assess(0, 0));
    tracker.update(assess(1, 3000));
    CHECK(tracker.state() == Severity::General);
    auto e = tracker.update(assess(0, 6000));
    REQUIRE(e.has_value());
    CHECK(e->from == Severity::General);
    CHECK(e->to == Severity::Normal);
    CHECK_FALSE(tracker.abnormal_since().has_value());
    // the reset moves the anchor: 60 s must elapse from the new normal mark
    tracker.update(assess(2, 9000));
    CHECK(tracker.state() == Severity::General);
    auto none = tracker.update(assess(2, 66000));  // 66000 - 6000 = 60000, not over
    CHECK_FALSE(none.has_value());
    auto esc = tracker.update(assess(2, 69000));
    REQUIRE(esc.has_value());
    CHECK(esc->to == Severity::Emergency);
}

TEST_CASE("abnormal stream with no prior normal anchors at the first sample") {
    SeverityTracker tracker;
    auto e = tracker.update(assess(3, 12000));
    REQUIRE(e.has_value());
    CHECK(e->to == Severity::General);
    CHECK(tracker.abnormal_since() == 12000);
    CHECK_FALSE(tracker.update(assess(3, 72000)).has_value());  // 60000, not over
    auto esc = tracker.update(assess(3, 75000));
    REQUIRE(esc.has_value());
    CHECK(esc->to == Severity::Emergency);
}

TEST_CASE("per-channel trigger escalates on any single abnormal channel") {
    SeverityConfig config;
    config.per_channel_trigger = true;
    SeverityTracker tracker(config);
    WarningAssessment a;
    a.scores = {0, 1, 0, 0};
    a.total = 1;
    a.timestamp_ms = 0;
    auto e = tracker.update(a);
    REQUIRE(e.has_value());
    CHECK(e->to == Severity::General);
}

TEST_CASE("timestamps must advance") {
    SeverityTracker tracker;
    tracker.update(assess(0, 3000));
    CHECK_THROWS_AS(tracker.update(assess(0, 3000)), DataError);
    CHECK_THROWS_AS(tracker.update(assess(0, 0)), DataError);
}

TEST_CASE("random walks agree with a direct re-simulation") {
    Rng rng(2024);
    for (int trial = 0; trial < 30; ++trial) {
        SeverityConfig config;
        config.t_threshold_ms = 30000;
        SeverityTracker tracker(config);

        Severity expect = Severity::Normal;
        std::optional<std::int64_t> last_normal, since;
        std::int64_t ts = 0;
        for (int k = 0; k < 120; ++k) {
            ts += 3000;
            int total = rng.uniform01() < 0.4 ? 1 + int(rng.index(5)) : 0;
            auto event = tracker.update(assess(total, ts));

            Severity before = expect;
            if (total >= 1) {
                if (!since) since = last_normal.value_or(ts);
                if (expect == Severity::Normal) expect = Severity::General;
                else if (expect == Severity::General && ts - *since > 30000)
                    expect = Severity::Emergency;
            } else {
                last_normal = ts;
                since.reset();
                expect = Severity::Normal;
            }
            CHECK(tracker.state() == expect);
            CHECK(event.has_value() == (expect != before));
            if (event) {
                CHECK(event->from == before);
                CHECK(event->to == expect);
                CHECK(event->timestamp_ms == ts);
            }
        }
    }
}

}  // TEST_SUITE
