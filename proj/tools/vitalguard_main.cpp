// vitalguard command-line front end: fixture export, synthetic traces,
// filtering, model training and inference, scoring, offline monitoring and
// the TCP ingestion service.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vitalguard/errors.hpp"
#include "vitalguard/evaluation.hpp"
#include "vitalguard/ews.hpp"
#include "vitalguard/lms.hpp"
#include "vitalguard/monitor.hpp"
#include "vitalguard/predictor.hpp"
#include "vitalguard/signals.hpp"
#include "vitalguard/textio.hpp"

namespace vg = vitalguard;

namespace {

struct ConfigError : vg::Error {
    using Error::Error;
};

// `key = value` lines, # comments. Loaded before CLI parsing; command-line
// flags override whatever the file sets.
std::map<std::string, std::string> load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = vg::trim(line);
        if (sv.empty() || sv.front() == '#') continue;
        auto eq = sv.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(path + ":" + std::to_string(line_no) +
                              ": expected key = value");
        std::string key(vg::trim(sv.substr(0, eq)));
        std::string value(vg::trim(sv.substr(eq + 1)));
        if (key.empty())
            throw ConfigError(path + ":" + std::to_string(line_no) + ": empty key");
        kv[key] = value;
    }
    return kv;
}

// Registry mapping config keys onto the variables CLI options bind to, so a
// config file can pre-set any tunable and flags still win.
class ConfigBinder {
public:
    void bind(const std::string& key, double* target) {
        appliers_[key].push_back([target, key](const std::string& v) {
            *target = vg::parse_double(v, key);
        });
    }
    void bind(const std::string& key, std::size_t* target) {
        appliers_[key].push_back([target, key](const std::string& v) {
            *target = static_cast<std::size_t>(vg::parse_u64(v, key));
        });
    }
    void bind(const std::string& key, std::int64_t* target) {
        appliers_[key].push_back([target, key](const std::string& v) {
            *target = vg::parse_i64(v, key);
        });
    }
    void bind(const std::string& key, std::string* target) {
        appliers_[key].push_back([target](const std::string& v) { *target = v; });
    }
    void bind(const std::string& key, bool* target) {
        appliers_[key].push_back([target, key](const std::string& v) {
            if (v == "true" || v == "1")
                *target = true;
            else if (v == "false" || v == "0")
                *target = false;
            else
                throw ConfigError(key + ": expected true/false, got \"" + v + "\"");
        });
    }

    void apply(const std::map<std::string, std::string>& kv) const {
        for (const auto& [key, value] : kv) {
            auto it = appliers_.find(key);
            if (it == appliers_.end())
                throw ConfigError("unknown config key \"" + key + "\"");
            try {
                for (const auto& apply : it->second) apply(value);
            } catch (const vg::ParseError& e) {
                throw ConfigError(std::string("config: ") + e.what());
            }
        }
    }

private:
    std::map<std::string, std::vector<std::function<void(const std::string&)>>> appliers_;
};

// Shared tunable bundles bound to both CLI flags and config keys.
struct TrainFlags {
    std::size_t hidden = 25;
    std::uint64_t seed = 0;
    std::size_t pop = 50;
    std::size_t gens = 80;
    double pc = 0.5;
    double pm = 0.06;
    std::string bounds = "-0.5,0.5";
    bool elitism = true;
    std::string mutation_variant = "paper";
    double lr_start = 0.1;
    double lr_end = 0.01;
    double momentum = 0.9;
    std::size_t max_epochs = 10000;
    double target_error = 0.03;

    std::pair<vg::GaConfig, vg::TrainConfig> build() const {
        vg::GaConfig ga;
        ga.population_size = pop;
        ga.max_generations = gens;
        ga.p_crossover = pc;
        ga.p_mutation = pm;
        auto parts = vg::split(bounds, ',');
        if (parts.size() != 2)
            throw ConfigError("bounds: expected \"lo,hi\", got \"" + bounds + "\"");
        ga.gene_min = vg::parse_double(parts[0], "bounds lo");
        ga.gene_max = vg::parse_double(parts[1], "bounds hi");
        ga.elitism = elitism;
        if (mutation_variant == "paper")
            ga.mutation_variant = vg::MutationVariant::Paper;
        else if (mutation_variant == "symmetric")
            ga.mutation_variant = vg::MutationVariant::Symmetric;
        else
            throw ConfigError("mutation-variant: expected paper|symmetric, got \"" +
                              mutation_variant + "\"");
        ga.rng_seed = seed;

        vg::TrainConfig tc;
        tc.lr_start = lr_start;
        tc.lr_end = lr_end;
        tc.momentum = momentum;
        tc.max_epochs = max_epochs;
        tc.target_error_rate = target_error;
        tc.rng_seed = seed;
        return {ga, tc};
    }

    void add_to(CLI::App* cmd, ConfigBinder& binder) {
        cmd->add_option("--hidden", hidden, "Hidden-layer node count");
        cmd->add_option("--seed", seed, "Seed for weight search and training");
        cmd->add_option("--pop", pop, "Population size");
        cmd->add_option("--gens", gens, "Generations (0 disables the weight search)");
        cmd->add_option("--pc", pc, "Crossover probability");
        cmd->add_option("--pm", pm, "Per-gene mutation probability");
        cmd->add_option("--bounds", bounds, "Gene bounds as lo,hi");
        cmd->add_option("--elitism", elitism, "Keep the best individual unchanged");
        cmd->add_option("--mutation-variant", mutation_variant, "paper|symmetric");
        cmd->add_option("--lr-start", lr_start, "Initial learning rate");
        cmd->add_option("--lr-end", lr_end, "Final learning rate");
        cmd->add_option("--momentum", momentum, "Momentum coefficient");
        cmd->add_option("--max-epochs", max_epochs, "Training epoch cap");
        cmd->add_option("--target-error", target_error, "Stop when error rate reaches this");
        binder.bind("hidden", &hidden);
        binder.bind("seed", &seed);
        binder.bind("pop", &pop);
        binder.bind("gens", &gens);
        binder.bind("pc", &pc);
        binder.bind("pm", &pm);
        binder.bind("bounds", &bounds);
        binder.bind("elitism", &elitism);
        binder.bind("mutation-variant", &mutation_variant);
        binder.bind("lr-start", &lr_start);
        binder.bind("lr-end", &lr_end);
        binder.bind("momentum", &momentum);
        binder.bind("max-epochs", &max_epochs);
        binder.bind("target-error", &target_error);
    }
};

struct MonitorFlags {
    std::size_t order = 8;
    double mu = 0.01;
    std::int64_t t_threshold = 60000;
    bool per_channel_trigger = false;
    std::string bands_path;

    vg::MonitorConfig build() const {
        vg::MonitorConfig mc;
        mc.filter.order = order;
        mc.filter.mu = mu;
        mc.severity.t_threshold_ms = t_threshold;
        mc.severity.per_channel_trigger = per_channel_trigger;
        if (!bands_path.empty()) mc.bands = vg::ScoreBands::load(bands_path);
        return mc;
    }

    void add_to(CLI::App* cmd, ConfigBinder& binder) {
        cmd->add_option("--order", order, "Input filter order");
        cmd->add_option("--mu", mu, "Input filter step size");
        cmd->add_option("--t-threshold", t_threshold,
                        "Continuous-abnormality threshold for escalation, ms");
        cmd->add_flag("--per-channel-trigger", per_channel_trigger,
                      "Escalate on any single abnormal channel instead of the total");
        cmd->add_option("--bands", bands_path, "Score-band override file");
        binder.bind("order", &order);
        binder.bind("mu", &mu);
        binder.bind("t-threshold", &t_threshold);
        binder.bind("per-channel-trigger", &per_channel_trigger);
        binder.bind("bands", &bands_path);
    }
};

vg::VitalChannel parse_channel(const std::string& name) {
    auto c = vg::channel_from_name(name);
    if (!c)
        throw vg::DataError("unknown channel \"" + name + "\" (use hr|rr|t|spo2)");
    return *c;
}

std::vector<std::vector<double>> load_series_set(const std::string& data,
                                                 vg::VitalChannel channel, bool test_rows) {
    if (data == "fixtures") {
        const auto& f = vg::load_fixtures();
        if (channel != vg::VitalChannel::HR)
            throw vg::DataError("fixture data covers the hr channel only");
        return test_rows ? f.test_rows : f.training_rows;
    }
    auto samples = vg::load_trace(data);
    auto runs = vg::contiguous_runs(samples, channel);
    std::vector<std::vector<double>> usable;
    for (auto& run : runs)
        if (run.size() >= vg::kLookback + 1) usable.push_back(std::move(run));
    if (usable.empty())
        throw vg::DataError("no contiguous runs of at least " +
                            std::to_string(vg::kLookback + 1) + " samples in " + data);
    return usable;
}

std::ostream& open_sink(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path, std::ios::binary);
    if (!file)
        throw vg::DataError("cannot write to " + path);
    return file;
}

void require_single_driver(const std::vector<vg::VitalSample>& samples) {
    for (const auto& s : samples)
        if (s.driver_id != samples.front().driver_id)
            throw vg::DataError("expected a single-driver trace, found drivers \"" +
                                samples.front().driver_id + "\" and \"" + s.driver_id + "\"");
}

vg::LabeledTrace load_labeled(const std::string& trace_path, const std::string& labels_path) {
    vg::LabeledTrace trace;
    trace.samples = vg::load_trace(trace_path);
    if (trace.samples.empty())
        throw vg::DataError("trace is empty: " + trace_path);
    require_single_driver(trace.samples);
    std::ifstream in(labels_path);
    if (!in)
        throw vg::DataError("cannot open labels file: " + labels_path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = vg::trim(line);
        if (sv.empty() || sv.front() == '#') continue;
        auto fields = vg::split(sv, ',');
        if (fields.size() != 3)
            throw vg::ParseError(labels_path + ":" + std::to_string(line_no) +
                                 ": expected channel,start_ms,end_ms");
        auto channel = parse_channel(std::string(vg::trim(fields[0])));
        trace.abnormal_intervals[vg::channel_index(channel)].push_back(
            {vg::parse_i64(fields[1], "start_ms"), vg::parse_i64(fields[2], "end_ms")});
    }
    for (auto& intervals : trace.abnormal_intervals)
        std::sort(intervals.begin(), intervals.end(),
                  [](const vg::Interval& a, const vg::Interval& b) {
                      return a.start_ms < b.start_ms;
                  });
    trace.validate();
    return trace;
}

vg::LineServer* g_server = nullptr;

void handle_signal(int) {
    if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vital-signs monitoring and early-warning toolkit"};
    app.require_subcommand(1);

    ConfigBinder binder;
    std::string config_path;
    app.add_option("--config", config_path,
                   "key = value config file (default: $VITALGUARD_CONFIG)");

    // fixtures
    auto* fixtures_cmd = app.add_subcommand("fixtures", "Write the embedded reference recordings");
    std::string fixtures_out;
    fixtures_cmd->add_option("--out", fixtures_out, "Output CSV path")->required();

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic labeled trace");
    std::string synth_out, synth_labels, synth_driver = "synth";
    double synth_duration = 1800.0;
    std::uint64_t synth_seed = 0;
    std::vector<std::string> synth_baseline, synth_noise, synth_drift, synth_anomaly;
    synth_cmd->add_option("--out", synth_out, "Trace CSV path")->required();
    synth_cmd->add_option("--labels", synth_labels, "Ground-truth intervals CSV path");
    synth_cmd->add_option("--duration", synth_duration, "Trace length, seconds");
    synth_cmd->add_option("--seed", synth_seed, "Noise seed");
    synth_cmd->add_option("--driver", synth_driver, "Driver id");
    synth_cmd->add_option("--baseline", synth_baseline, "channel=value, repeatable");
    synth_cmd->add_option("--noise", synth_noise, "channel=sigma, repeatable");
    synth_cmd->add_option("--drift", synth_drift, "channel=amplitude:period_s, repeatable");
    synth_cmd->add_option("--anomaly", synth_anomaly,
                          "channel:onset_s:duration_s:target, repeatable");

    // filter
    auto* filter_cmd = app.add_subcommand("filter", "Run the adaptive filter over one channel");
    std::string filter_in, filter_channel, filter_out;
    std::size_t filter_order = 8;
    double filter_mu = 0.01;
    filter_cmd->add_option("--in", filter_in, "Trace CSV path")->required();
    filter_cmd->add_option("--channel", filter_channel, "hr|rr|t|spo2")->required();
    filter_cmd->add_option("--order", filter_order, "Filter order");
    filter_cmd->add_option("--mu", filter_mu, "Step size");
    filter_cmd->add_option("--out", filter_out, "Output CSV path (default stdout)");
    binder.bind("order", &filter_order);
    binder.bind("mu", &filter_mu);

    // train
    auto* train_cmd = app.add_subcommand("train", "Train a forecasting model");
    std::string train_channel = "hr", train_data, train_out;
    TrainFlags train_flags;
    train_cmd->add_option("--channel", train_channel, "hr|rr|t|spo2");
    train_cmd->add_option("--data", train_data, "Trace CSV path or \"fixtures\"")->required();
    train_cmd->add_option("--out", train_out, "Model file path")->required();
    train_flags.add_to(train_cmd, binder);

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Hidden-node sweep");
    std::string sweep_channel = "hr", sweep_data = "fixtures", sweep_candidates, sweep_out;
    TrainFlags sweep_flags;
    sweep_cmd->add_option("--candidates", sweep_candidates, "Comma list of H values")->required();
    sweep_cmd->add_option("--channel", sweep_channel, "hr|rr|t|spo2");
    sweep_cmd->add_option("--data", sweep_data, "Trace CSV path or \"fixtures\"");
    sweep_cmd->add_option("--out", sweep_out, "Save the selected model here");
    sweep_flags.add_to(sweep_cmd, binder);

    // predict
    auto* predict_cmd = app.add_subcommand("predict", "Forecast from a model");
    std::string predict_model, predict_window;
    std::size_t predict_steps = 1;
    predict_cmd->add_option("--model", predict_model, "Model file path")->required();
    predict_cmd->add_option("--window", predict_window, "8 comma-separated raw values")
        ->required();
    predict_cmd->add_option("--steps", predict_steps, "Rollout length (1 = one step ahead)");

    // score
    auto* score_cmd = app.add_subcommand("score", "Warning score for given vitals");
    std::optional<double> score_hr, score_rr, score_t, score_spo2;
    std::string score_bands;
    score_cmd->add_option("--hr", score_hr, "Heart rate");
    score_cmd->add_option("--rr", score_rr, "Respiratory rate");
    score_cmd->add_option("--t", score_t, "Body temperature");
    score_cmd->add_option("--spo2", score_spo2, "Blood oxygen saturation");
    score_cmd->add_option("--bands", score_bands, "Score-band override file");
    binder.bind("bands", &score_bands);

    // monitor
    auto* monitor_cmd = app.add_subcommand("monitor", "Replay a trace file through the pipeline");
    std::string monitor_in, monitor_models, monitor_events;
    MonitorFlags monitor_flags;
    monitor_cmd->add_option("--in", monitor_in, "Trace CSV path")->required();
    monitor_cmd->add_option("--models", monitor_models, "Directory of per-channel models")
        ->required();
    monitor_cmd->add_option("--events", monitor_events, "Event CSV path (default stdout)");
    monitor_flags.add_to(monitor_cmd, binder);

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "Error, confusion or assessment reports");
    std::string eval_report, eval_format = "table", eval_model, eval_models, eval_data = "fixtures";
    std::string eval_in, eval_labels, eval_channel;
    eval_cmd->add_option("--report", eval_report, "error|confusion|assessment")->required();
    eval_cmd->add_option("--format", eval_format, "table|csv");
    eval_cmd->add_option("--model", eval_model, "Model file (error report)");
    eval_cmd->add_option("--models", eval_models, "Model directory (confusion/assessment)");
    eval_cmd->add_option("--data", eval_data, "Test rows: trace CSV or \"fixtures\"");
    eval_cmd->add_option("--in", eval_in, "Trace CSV (confusion/assessment)");
    eval_cmd->add_option("--labels", eval_labels, "Ground-truth intervals CSV (confusion)");
    eval_cmd->add_option("--channel", eval_channel, "Restrict confusion report to one channel");

    // serve
    auto* serve_cmd = app.add_subcommand("serve", "TCP ingestion service");
    std::string serve_bind = "127.0.0.1:7920", serve_models, serve_events;
    MonitorFlags serve_flags;
    serve_cmd->add_option("--bind", serve_bind, "host:port");
    serve_cmd->add_option("--models", serve_models, "Directory of per-channel models")
        ->required();
    serve_cmd->add_option("--events", serve_events, "Event CSV path (default stdout)");
    serve_flags.add_to(serve_cmd, binder);
    binder.bind("bind", &serve_bind);

    try {
        // config before flags: pre-scan argv so flag values still override
        for (int i = 1; i < argc; ++i) {
            std::string_view arg = argv[i];
            if (arg == "--config" && i + 1 < argc)
                config_path = argv[i + 1];
            else if (arg.rfind("--config=", 0) == 0)
                config_path = std::string(arg.substr(9));
        }
        if (config_path.empty()) {
            if (const char* env = std::getenv("VITALGUARD_CONFIG")) config_path = env;
        }
        if (!config_path.empty()) binder.apply(load_config_file(config_path));

        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);  // usage errors -> 1, --help -> 0
    } catch (const vg::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*fixtures_cmd) {
            std::ofstream out(fixtures_out, std::ios::binary);
            if (!out)
                throw vg::DataError("cannot write to " + fixtures_out);
            const auto& f = vg::load_fixtures();
            auto write_rows = [&](const char* kind, const std::vector<std::vector<double>>& rows) {
                for (const auto& row : rows) {
                    out << kind;
                    for (double v : row) out << ',' << vg::format_trimmed(v, 2);
                    out << '\n';
                }
            };
            write_rows("train", f.training_rows);
            write_rows("test", f.test_rows);
        } else if (*synth_cmd) {
            vg::SynthConfig config = vg::SynthConfig::defaults();
            config.driver_id = synth_driver;
            config.rng_seed = synth_seed;
            auto channel_of = [&](std::string_view token) {
                return parse_channel(std::string(vg::trim(token)));
            };
            for (const auto& spec : synth_baseline) {
                auto parts = vg::split(spec, '=');
                if (parts.size() != 2)
                    throw vg::DataError("baseline: expected channel=value, got \"" + spec + "\"");
                config.channels[vg::channel_index(channel_of(parts[0]))].baseline =
                    vg::parse_double(parts[1], "baseline");
            }
            for (const auto& spec : synth_noise) {
                auto parts = vg::split(spec, '=');
                if (parts.size() != 2)
                    throw vg::DataError("noise: expected channel=sigma, got \"" + spec + "\"");
                config.channels[vg::channel_index(channel_of(parts[0]))].noise_sigma =
                    vg::parse_double(parts[1], "noise");
            }
            for (const auto& spec : synth_drift) {
                auto parts = vg::split(spec, '=');
                if (parts.size() != 2)
                    throw vg::DataError("drift: expected channel=amplitude:period_s, got \"" +
                                        spec + "\"");
                auto ap = vg::split(parts[1], ':');
                if (ap.size() != 2)
                    throw vg::DataError("drift: expected amplitude:period_s in \"" + spec + "\"");
                auto& ch = config.channels[vg::channel_index(channel_of(parts[0]))];
                ch.drift_amplitude = vg::parse_double(ap[0], "drift amplitude");
                ch.drift_period_s = vg::parse_double(ap[1], "drift period");
            }
            for (const auto& spec : synth_anomaly) {
                auto parts = vg::split(spec, ':');
                if (parts.size() != 4)
                    throw vg::DataError(
                        "anomaly: expected channel:onset_s:duration_s:target, got \"" + spec +
                        "\"");
                vg::AnomalySpec a;
                a.channel = channel_of(parts[0]);
                a.onset_ms = static_cast<std::int64_t>(
                    vg::parse_double(parts[1], "anomaly onset") * 1000.0);
                a.duration_ms = static_cast<std::int64_t>(
                    vg::parse_double(parts[2], "anomaly duration") * 1000.0);
                a.target = vg::parse_double(parts[3], "anomaly target");
                config.anomalies.push_back(a);
            }
            vg::SynthTrace trace = vg::synth_generate(config, synth_duration);
            std::ofstream out(synth_out, std::ios::binary);
            if (!out)
                throw vg::DataError("cannot write to " + synth_out);
            for (const auto& s : trace.samples) out << vg::format_record(s) << '\n';
            if (!synth_labels.empty()) {
                std::ofstream labels(synth_labels, std::ios::binary);
                if (!labels)
                    throw vg::DataError("cannot write to " + synth_labels);
                for (const auto& t : trace.truth)
                    labels << vg::channel_name(t.channel) << ',' << t.start_ms << ','
                           << t.end_ms << '\n';
            }
        } else if (*filter_cmd) {
            auto samples = vg::load_trace(filter_in);
            require_single_driver(samples);
            auto series = vg::channel_series(samples, parse_channel(filter_channel));
            if (series.size() < 2)
                throw vg::DataError("need at least 2 samples to filter");
            vg::Normalizer norm = vg::fit_normalizer(series);
            std::vector<double> desired, delayed;
            desired.reserve(series.size());
            for (double v : series) desired.push_back(norm.normalize(v));
            delayed.push_back(desired.front());  // self-reference on the first step
            delayed.insert(delayed.end(), desired.begin(), desired.end() - 1);
            vg::FilterConfig fc;
            fc.order = filter_order;
            fc.mu = filter_mu;
            fc.initial_weights.assign(fc.order, 0.0);
            fc.initial_weights[0] = 1.0;
            vg::LmsRun run = vg::lms_run(fc, delayed, desired);
            std::ofstream file;
            std::ostream& out = open_sink(filter_out, file);
            out << "raw,filtered,error\n";
            for (std::size_t k = 0; k < series.size(); ++k) {
                double filtered = norm.denormalize(run.output[k]);
                out << vg::format_trimmed(series[k], 6) << ','
                    << vg::format_trimmed(filtered, 6) << ','
                    << vg::format_trimmed(series[k] - filtered, 6) << '\n';
            }
        } else if (*train_cmd) {
            auto channel = parse_channel(train_channel);
            auto series_set = load_series_set(train_data, channel, false);
            auto [ga, tc] = train_flags.build();
            vg::NetConfig nc{vg::kLookback, train_flags.hidden};
            vg::Model model = vg::train_model(channel, series_set, nc, ga, tc);
            vg::save_model(model, train_out);
            std::cout << "trained " << vg::channel_name(channel) << " model: hidden="
                      << model.meta.hidden_nodes << " epochs=" << model.meta.epochs_run
                      << " error_rate=" << vg::format_trimmed(model.meta.final_error_rate * 100.0, 4)
                      << "%\n";
        } else if (*sweep_cmd) {
            auto channel = parse_channel(sweep_channel);
            auto series_set = load_series_set(sweep_data, channel, false);
            auto [ga, tc] = sweep_flags.build();
            std::vector<std::size_t> candidates;
            for (auto tok : vg::split(sweep_candidates, ','))
                candidates.push_back(
                    static_cast<std::size_t>(vg::parse_i64(tok, "candidates")));
            vg::SweepResult result =
                vg::sweep_hidden_nodes(candidates, channel, series_set, ga, tc);
            std::cout << "hidden  error_rate\n";
            for (const auto& row : result.rows)
                std::cout << row.hidden << "       "
                          << vg::format_trimmed(row.error_rate * 100.0, 4) << "%\n";
            std::cout << "selected hidden=" << result.selected_hidden << "\n";
            if (!sweep_out.empty()) vg::save_model(result.selected_model, sweep_out);
        } else if (*predict_cmd) {
            vg::Model model = vg::load_model(predict_model);
            std::vector<double> window;
            for (auto tok : vg::split(predict_window, ','))
                window.push_back(vg::parse_double(tok, "window"));
            if (window.size() != vg::kLookback)
                throw vg::DataError("window: expected " + std::to_string(vg::kLookback) +
                                    " values, got " + std::to_string(window.size()));
            if (predict_steps == 1) {
                bool clamped = false;
                double p = vg::predict_next(model, window, &clamped);
                if (clamped)
                    std::cerr << "warning: input outside the training range was clamped\n";
                std::printf("%.2f\n", p);
            } else {
                for (double p : vg::predict_horizon(model, window, predict_steps))
                    std::printf("%.2f\n", p);
            }
        } else if (*score_cmd) {
            const vg::ScoreBands& bands = score_bands.empty()
                                              ? vg::ScoreBands::defaults()
                                              : [&]() -> const vg::ScoreBands& {
                static vg::ScoreBands loaded = vg::ScoreBands::load(score_bands);
                return loaded;
            }();
            std::vector<std::pair<vg::VitalChannel, double>> given;
            if (score_hr) given.emplace_back(vg::VitalChannel::HR, *score_hr);
            if (score_rr) given.emplace_back(vg::VitalChannel::RR, *score_rr);
            if (score_t) given.emplace_back(vg::VitalChannel::T, *score_t);
            if (score_spo2) given.emplace_back(vg::VitalChannel::SPO2, *score_spo2);
            if (given.empty()) {
                std::cerr << "score: provide at least one of --hr --rr --t --spo2\n";
                return 1;
            }
            if (given.size() == 1) {
                std::cout << bands.score(given[0].first, given[0].second) << "\n";
            } else {
                int total = 0;
                for (const auto& [channel, value] : given) {
                    int s = bands.score(channel, value);
                    total += s;
                    std::cout << vg::channel_name(channel) << " " << s << "\n";
                }
                std::cout << "total " << total << "\n";
            }
        } else if (*monitor_cmd) {
            vg::MonitorEngine engine(vg::ModelSet::load_dir(monitor_models),
                                     monitor_flags.build());
            std::ofstream file;
            std::ostream& out = open_sink(monitor_events, file);
            vg::run_monitor_file(monitor_in, engine, out);
        } else if (*eval_cmd) {
            bool csv = eval_format == "csv";
            if (!csv && eval_format != "table")
                throw vg::DataError("format: expected table|csv, got \"" + eval_format + "\"");
            if (eval_report == "error") {
                if (eval_model.empty())
                    throw vg::DataError("error report needs --model");
                vg::Model model = vg::load_model(eval_model);
                auto rows = load_series_set(eval_data, model.channel, true);
                vg::ErrorReport report = vg::abs_error_report(model, rows);
                std::cout << (csv ? vg::error_report_csv(report)
                                  : vg::error_report_table(report));
            } else if (eval_report == "confusion") {
                if (eval_models.empty() || eval_in.empty() || eval_labels.empty())
                    throw vg::DataError("confusion report needs --models, --in and --labels");
                vg::LabeledTrace trace = load_labeled(eval_in, eval_labels);
                vg::MonitorEngine engine(vg::ModelSet::load_dir(eval_models),
                                         vg::MonitorConfig{});
                auto by_channel = vg::forecast_score_series(engine, trace.samples);
                std::vector<std::pair<vg::VitalChannel, vg::ConfusionCounts>> rows;
                for (vg::VitalChannel c : vg::kAllChannels) {
                    if (!eval_channel.empty() && parse_channel(eval_channel) != c) continue;
                    rows.emplace_back(c, vg::classify_samples(
                                             by_channel[vg::channel_index(c)], trace, c));
                }
                std::cout << (csv ? vg::confusion_csv(rows) : vg::confusion_table(rows));
            } else if (eval_report == "assessment") {
                if (eval_models.empty() || eval_in.empty())
                    throw vg::DataError("assessment report needs --models and --in");
                auto samples = vg::load_trace(eval_in);
                require_single_driver(samples);
                vg::ModelSet set = vg::ModelSet::load_dir(eval_models);
                std::vector<vg::Model> models(set.by_channel.begin(), set.by_channel.end());
                auto rows = vg::assessment_report(models, samples);
                std::cout << (csv ? vg::assessment_csv(rows) : vg::assessment_table(rows));
            } else {
                throw vg::DataError("report: expected error|confusion|assessment, got \"" +
                                    eval_report + "\"");
            }
        } else if (*serve_cmd) {
            vg::MonitorEngine engine(vg::ModelSet::load_dir(serve_models), serve_flags.build());
            vg::LineServer server(serve_bind);
            g_server = &server;
            std::signal(SIGINT, handle_signal);
            std::signal(SIGTERM, handle_signal);
            std::ofstream file;
            std::ostream& out = open_sink(serve_events, file);
            std::cerr << "listening on port " << server.bound_port() << "\n";
            server.serve(engine, out);
            g_server = nullptr;
        }
    } catch (const vg::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
