#include "vitalguard/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "vitalguard/errors.hpp"
#include "vitalguard/ews.hpp"
#include "vitalguard/textio.hpp"

namespace vitalguard {

Normalizer fit_normalizer(std::span<const double> values) {
    if (values.size() < 2)
        throw DataError("normalizer needs at least two values");
    double lo = values[0], hi = values[0];
    for (double v : values) {
        if (!std::isfinite(v))
            throw DataError("normalizer input contains a non-finite value");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(hi > lo))
        throw DataError("normalizer input is constant");
    return {lo, hi};
}

std::vector<WindowPair> make_windows(std::span<const double> series, std::size_t lookback) {
    if (lookback == 0)
        throw DataError("lookback must be positive");
    if (series.size() < lookback + 1)
        throw DataError("series too short: need at least " + std::to_string(lookback + 1) +
                        " values, got " + std::to_string(series.size()));
    std::vector<WindowPair> out;
    out.reserve(series.size() - lookback);
    for (std::size_t i = 0; i + lookback < series.size(); ++i) {
        WindowPair p;
        p.input.assign(series.begin() + static_cast<std::ptrdiff_t>(i),
                       series.begin() + static_cast<std::ptrdiff_t>(i + lookback));
        p.target = series[i + lookback];
        out.push_back(std::move(p));
    }
    return out;
}

double error_scale_for(VitalChannel channel, const Normalizer& normalizer) {
    return (normalizer.max - normalizer.min) / normal_range(channel).width();
}

Model train_model(VitalChannel channel, std::span<const std::vector<double>> series_set,
                  const NetConfig& net_config, const GaConfig& ga_config,
                  const TrainConfig& train_config) {
    if (net_config.n_in != kLookback)
        throw DataError("model input width must be " + std::to_string(kLookback));

    std::vector<double> pool;
    std::vector<WindowPair> windows;
    for (const auto& series : series_set) {
        for (auto& w : make_windows(series)) windows.push_back(std::move(w));
        pool.insert(pool.end(), series.begin(), series.end());
    }
    if (windows.size() < 10)
        throw DataError("insufficient training data: need at least 10 windows, got " +
                        std::to_string(windows.size()));

    Normalizer norm = fit_normalizer(pool);
    std::vector<Sample> samples;
    samples.reserve(windows.size());
    for (const auto& w : windows) {
        Sample s;
        s.input.reserve(kLookback);
        for (double v : w.input) s.input.push_back(norm.normalize(v));
        s.target = norm.normalize(w.target);
        samples.push_back(std::move(s));
    }

    TrainConfig tc = train_config;
    tc.error_scale = error_scale_for(channel, norm);

    NetParams initial;
    if (ga_config.max_generations > 0) {
        initial = evolve(net_config, ga_config, samples).best;
    } else {
        Rng rng(train_config.rng_seed);
        initial = random_params(net_config, rng, ga_config.gene_min, ga_config.gene_max);
    }

    TrainResult trained = train(tc, std::move(initial), samples);

    Model model;
    model.channel = channel;
    model.net = std::move(trained.params);
    model.normalizer = norm;
    model.meta.hidden_nodes = net_config.n_hidden;
    model.meta.seed = ga_config.max_generations > 0 ? ga_config.rng_seed : train_config.rng_seed;
    model.meta.epochs_run = trained.epochs_run;
    model.meta.final_error_rate = trained.final_error_rate;
    model.meta.trained_at_ms = 0;
    return model;
}

double predict_next(const Model& model, std::span<const double> last8, bool* clamped) {
    if (last8.size() != kLookback)
        throw DataError("prediction window must hold " + std::to_string(kLookback) + " values");
    bool hit = false;
    std::vector<double> input;
    input.reserve(kLookback);
    for (double v : last8) {
        if (!std::isfinite(v))
            throw DataError("prediction window contains a non-finite value");
        double z = model.normalizer.normalize(v);
        double zc = std::clamp(z, -0.2, 1.2);
        hit = hit || zc != z;
        input.push_back(zc);
    }
    if (clamped) *clamped = hit;
    return model.normalizer.denormalize(forward(model.net, input).output);
}

std::vector<double> predict_horizon(const Model& model, std::span<const double> last8,
                                    std::size_t steps) {
    if (steps == 0)
        throw DataError("horizon must be at least one step");
    std::vector<double> window(last8.begin(), last8.end());
    std::vector<double> out;
    out.reserve(steps);
    for (std::size_t k = 0; k < steps; ++k) {
        double p = predict_next(model, window);
        out.push_back(p);
        window.erase(window.begin());
        window.push_back(p);
    }
    return out;
}

SweepResult sweep_hidden_nodes(std::span<const std::size_t> candidates, VitalChannel channel,
                               std::span<const std::vector<double>> series_set,
                               const GaConfig& ga_config, const TrainConfig& train_config) {
    if (candidates.empty())
        throw DataError("hidden-node sweep needs at least one candidate");
    SweepResult result;
    std::size_t best = 0;
    bool picked = false;
    std::vector<Model> models;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (candidates[i] == 0)
            throw DataError("hidden-node count must be positive");
        NetConfig nc{kLookback, candidates[i]};
        Model m = train_model(channel, series_set, nc, ga_config, train_config);
        result.rows.push_back({candidates[i], m.meta.final_error_rate});
        models.push_back(std::move(m));
        if (!picked && result.rows[i].error_rate <= train_config.target_error_rate) {
            best = i;
            picked = true;
        }
    }
    if (!picked) {
        best = 0;
        for (std::size_t i = 1; i < result.rows.size(); ++i)
            if (result.rows[i].error_rate < result.rows[best].error_rate) best = i;
    }
    result.selected_hidden = result.rows[best].hidden;
    result.selected_model = std::move(models[best]);
    return result;
}

namespace {

constexpr const char* kMagic = "vitalguard-model";
constexpr const char* kVersion = "v1";

void append_values(std::string& out, const char* label, std::span<const double> values) {
    out += label;
    for (double v : values) {
        out += ' ';
        out += format_exact(v);
    }
    out += '\n';
}

std::string serialize(const Model& model) {
    std::string out;
    out += kMagic;
    out += ' ';
    out += kVersion;
    out += ' ';
    out += channel_name(model.channel);
    out += ' ';
    out += std::to_string(model.net.n_hidden);
    out += '\n';
    out += "normalizer ";
    out += format_exact(model.normalizer.min);
    out += ' ';
    out += format_exact(model.normalizer.max);
    out += '\n';
    append_values(out, "w1", model.net.w1);
    append_values(out, "b1", model.net.b1);
    append_values(out, "w2", model.net.w2);
    out += "b2 ";
    out += format_exact(model.net.b2);
    out += '\n';
    out += "meta seed " + std::to_string(model.meta.seed) +
           " epochs " + std::to_string(model.meta.epochs_run) +
           " error_rate " + format_exact(model.meta.final_error_rate) +
           " trained_at " + std::to_string(model.meta.trained_at_ms) + '\n';
    char checksum[32];
    std::snprintf(checksum, sizeof checksum, "checksum %016llx\n",
                  static_cast<unsigned long long>(fnv1a64(out)));
    out += checksum;
    return out;
}

std::vector<double> parse_values(std::string_view line, const char* label, std::size_t expect) {
    auto tokens = split(trim(line), ' ');
    if (tokens.empty() || tokens[0] != label)
        throw ModelIoError(std::string("model file: expected ") + label + " line");
    if (tokens.size() != expect + 1)
        throw ModelIoError(std::string("model file: ") + label + " dimension mismatch");
    std::vector<double> out;
    out.reserve(expect);
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        try {
            out.push_back(parse_double(tokens[i], label));
        } catch (const ParseError& e) {
            throw ModelIoError(std::string("model file: ") + e.what());
        }
    }
    return out;
}

}  // namespace

void save_model(const Model& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ModelIoError("cannot write model file: " + path);
    out << serialize(model);
    if (!out)
        throw ModelIoError("failed writing model file: " + path);
}

Model load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ModelIoError("cannot open model file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string content = buf.str();

    std::vector<std::string_view> lines = split(content, '\n');
    if (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.size() < 8)
        throw ModelIoError("model file is truncated: " + path);

    // integrity first: checksum covers every byte before its own line
    std::string_view checksum_line = lines.back();
    auto ck = split(trim(checksum_line), ' ');
    if (ck.size() != 2 || ck[0] != "checksum")
        throw ModelIoError("model file is corrupt (missing checksum): " + path);
    std::size_t payload_len = content.rfind("checksum ");
    char expect[17];
    std::snprintf(expect, sizeof expect, "%016llx",
                  static_cast<unsigned long long>(
                      fnv1a64(std::string_view(content).substr(0, payload_len))));
    if (ck[1] != expect)
        throw ModelIoError("model file is corrupt (checksum mismatch): " + path);

    auto header = split(trim(lines[0]), ' ');
    if (header.size() != 4 || header[0] != kMagic)
        throw ModelIoError("not a model file: " + path);
    if (header[1] != kVersion)
        throw ModelIoError("unsupported model version \"" + std::string(header[1]) + "\": " + path);
    auto channel = channel_from_name(header[2]);
    if (!channel)
        throw ModelIoError("model file names unknown channel \"" + std::string(header[2]) +
                           "\": " + path);
    std::size_t hidden = 0;
    try {
        hidden = static_cast<std::size_t>(parse_i64(header[3], "hidden"));
    } catch (const ParseError&) {
        throw ModelIoError("model file: bad hidden-node count: " + path);
    }
    if (hidden == 0)
        throw ModelIoError("model file: bad hidden-node count: " + path);

    Model model;
    model.channel = *channel;
    auto norm = parse_values(lines[1], "normalizer", 2);
    model.normalizer = {norm[0], norm[1]};
    if (!(model.normalizer.max > model.normalizer.min))
        throw ModelIoError("model file: normalizer range is empty: " + path);
    model.net.n_in = kLookback;
    model.net.n_hidden = hidden;
    model.net.w1 = parse_values(lines[2], "w1", hidden * kLookback);
    model.net.b1 = parse_values(lines[3], "b1", hidden);
    model.net.w2 = parse_values(lines[4], "w2", hidden);
    model.net.b2 = parse_values(lines[5], "b2", 1)[0];

    auto meta = split(trim(lines[6]), ' ');
    if (meta.size() != 9 || meta[0] != "meta" || meta[1] != "seed" || meta[3] != "epochs" ||
        meta[5] != "error_rate" || meta[7] != "trained_at")
        throw ModelIoError("model file: malformed meta line: " + path);
    try {
        model.meta.seed = parse_u64(meta[2], "seed");
        model.meta.epochs_run = static_cast<std::size_t>(parse_i64(meta[4], "epochs"));
        model.meta.final_error_rate = parse_double(meta[6], "error_rate");
        model.meta.trained_at_ms = parse_i64(meta[8], "trained_at");
    } catch (const ParseError& e) {
        throw ModelIoError(std::string("model file: ") + e.what());
    }
    model.meta.hidden_nodes = hidden;
    return model;
}

}  // namespace vitalguard
