#include "vitalguard/monitor.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cstring>
#include <fstream>

#include "vitalguard/errors.hpp"
#include "vitalguard/textio.hpp"

namespace vitalguard {

ModelSet ModelSet::load_dir(const std::string& dir) {
    ModelSet set;
    for (VitalChannel c : kAllChannels) {
        std::string path = dir + "/" + channel_name(c) + ".vgm";
        Model m = load_model(path);
        if (m.channel != c)
            throw ModelIoError("model file " + path + " holds channel " +
                               channel_name(m.channel));
        set.by_channel[channel_index(c)] = std::move(m);
    }
    return set;
}

std::string event_csv_line(const WarningEvent& event) {
    char predicted[32] = "";
    if (event.predicted)
        std::snprintf(predicted, sizeof predicted, "%.2f", *event.predicted);
    std::string out = event.driver_id;
    out += ',';
    out += std::to_string(event.timestamp_ms);
    out += ',';
    out += event.channel;
    out += ',';
    out += predicted;
    out += ',';
    out += std::to_string(event.score);
    out += ',';
    out += severity_name(event.severity);
    out += ',';
    out += event.message;
    return out;
}

DriverPipeline::DriverPipeline(std::string driver_id, const ModelSet& models,
                               const MonitorConfig& config)
    : driver_id_(std::move(driver_id)), models_(&models), config_(&config) {
    FilterConfig fc = config.filter;
    if (fc.initial_weights.empty()) {
        fc.initial_weights.assign(fc.order, 0.0);
        fc.initial_weights[0] = 1.0;
    }
    for (auto& lane : lanes_) {
        lane.filter = lms_init(fc);
        lane.window.reserve(kLookback);
    }
    tracker_ = SeverityTracker(config.severity);
}

ProcessResult DriverPipeline::process(const VitalSample& sample) {
    ProcessResult result;
    if (quarantined_) return result;
    if (sample.driver_id != driver_id_)
        throw DataError("sample for driver " + sample.driver_id + " routed to " + driver_id_);
    if (last_ts_ && sample.timestamp_ms <= *last_ts_)
        throw DataError("timestamp regression for driver " + driver_id_ + ": " +
                        std::to_string(sample.timestamp_ms) + " after " +
                        std::to_string(*last_ts_));
    last_ts_ = sample.timestamp_ms;

    // filter every channel in the model's normalized domain
    for (VitalChannel c : kAllChannels) {
        ChannelLane& lane = lanes_[channel_index(c)];
        const Model& model = models_->at(c);
        double raw = sample.value(c);
        double norm = model.normalizer.normalize(raw);
        double filtered_norm;
        if (!lane.has_prev) {
            // nothing to correlate against yet, pass the first sample through
            filtered_norm = norm;
            lane.has_prev = true;
        } else {
            LmsStepResult step;
            try {
                step = lms_step(lane.filter, lane.prev_norm, norm, config_->filter.mu);
            } catch (const DivergenceError&) {
                quarantined_ = true;
                WarningEvent e;
                e.driver_id = driver_id_;
                e.timestamp_ms = sample.timestamp_ms;
                e.channel = channel_name(c);
                e.score = 0;
                e.severity = tracker_.state();
                e.message = "filter diverged; stream quarantined";
                result.events.push_back(std::move(e));
                return result;
            }
            filtered_norm = step.output;
        }
        lane.prev_norm = norm;
        if (lane.window.size() == kLookback)
            lane.window.erase(lane.window.begin());
        lane.window.push_back(model.normalizer.denormalize(filtered_norm));
    }

    if (lanes_[0].window.size() < kLookback)
        return result;  // warm-up

    std::array<double, 4> forecasts{};
    for (VitalChannel c : kAllChannels) {
        const ChannelLane& lane = lanes_[channel_index(c)];
        bool clamped = false;
        forecasts[channel_index(c)] =
            predict_next(models_->at(c), lane.window, &clamped);
        result.input_clamped[channel_index(c)] = clamped;
    }
    result.forecasts = forecasts;

    WarningAssessment assessment =
        score_values(config_->bands, forecasts, sample.timestamp_ms);
    result.assessment = assessment;
    std::optional<SeverityEvent> transition = tracker_.update(assessment);

    for (VitalChannel c : kAllChannels) {
        int score = assessment.scores[channel_index(c)];
        if (score < 1) continue;
        WarningEvent e;
        e.driver_id = driver_id_;
        e.timestamp_ms = sample.timestamp_ms;
        e.channel = channel_name(c);
        e.predicted = forecasts[channel_index(c)];
        e.score = score;
        e.severity = tracker_.state();
        e.message = "abnormal forecast";
        if (result.input_clamped[channel_index(c)]) e.message += "; input clamped";
        result.events.push_back(std::move(e));
    }
    if (transition) {
        WarningEvent e;
        e.driver_id = driver_id_;
        e.timestamp_ms = sample.timestamp_ms;
        e.channel = "severity";
        e.score = assessment.total;
        e.severity = transition->to;
        e.message = std::string("severity ") + severity_name(transition->from) + " -> " +
                    severity_name(transition->to);
        result.events.push_back(std::move(e));
    }
    return result;
}

MonitorEngine::MonitorEngine(ModelSet models, MonitorConfig config)
    : models_(std::move(models)), config_(std::move(config)) {}

ProcessResult MonitorEngine::process_sample(const VitalSample& sample) {
    DriverPipeline* pipeline;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = drivers_.find(sample.driver_id);
        if (it == drivers_.end())
            it = drivers_
                     .emplace(sample.driver_id, std::make_unique<DriverPipeline>(
                                                    sample.driver_id, models_, config_))
                     .first;
        pipeline = it->second.get();
    }
    // per-driver single-writer: records for one driver arrive in order
    return pipeline->process(sample);
}

ProcessResult MonitorEngine::process_line(std::string_view line) {
    return process_sample(parse_record(line));
}

void run_monitor_file(const std::string& trace_path, MonitorEngine& engine,
                      std::ostream& events_out) {
    std::ifstream in(trace_path);
    if (!in)
        throw DataError("cannot open trace file: " + trace_path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        ProcessResult r;
        try {
            r = engine.process_line(line);
        } catch (const Error& e) {
            throw DataError(trace_path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        for (const auto& event : r.events)
            events_out << event_csv_line(event) << '\n';
    }
    events_out.flush();
}

std::array<std::vector<std::pair<std::int64_t, int>>, 4> forecast_score_series(
    MonitorEngine& engine, std::span<const VitalSample> samples) {
    std::array<std::vector<std::pair<std::int64_t, int>>, 4> out;
    std::optional<WarningAssessment> pending;
    for (const auto& sample : samples) {
        if (pending)
            for (std::size_t i = 0; i < 4; ++i)
                out[i].emplace_back(sample.timestamp_ms, pending->scores[i]);
        pending = engine.process_sample(sample).assessment;
    }
    return out;
}

LineServer::LineServer(const std::string& address) {
    auto colon = address.rfind(':');
    if (colon == std::string::npos)
        throw DataError("bind address must be host:port, got \"" + address + "\"");
    std::string host = address.substr(0, colon);
    std::uint16_t port =
        static_cast<std::uint16_t>(parse_i64(address.substr(colon + 1), "port"));

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (host.empty() || host == "*")
        addr.sin_addr.s_addr = htonl(INADDR_ANY);
    else if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
        throw DataError("cannot parse bind host \"" + host + "\"");

    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0)
        throw Error("socket: " + std::string(std::strerror(errno)));
    int yes = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) {
        std::string err = std::strerror(errno);
        ::close(listen_fd_);
        listen_fd_ = -1;
        throw Error("bind " + address + ": " + err);
    }
    if (::listen(listen_fd_, 16) < 0) {
        std::string err = std::strerror(errno);
        ::close(listen_fd_);
        listen_fd_ = -1;
        throw Error("listen: " + err);
    }
    sockaddr_in bound{};
    socklen_t len = sizeof bound;
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
    port_ = ntohs(bound.sin_port);
    if (::pipe(stop_pipe_) < 0) {
        std::string err = std::strerror(errno);
        ::close(listen_fd_);
        listen_fd_ = -1;
        throw Error("pipe: " + err);
    }
    ::fcntl(stop_pipe_[0], F_SETFL, O_NONBLOCK);
}

LineServer::~LineServer() {
    if (listen_fd_ >= 0) ::close(listen_fd_);
    if (stop_pipe_[0] >= 0) ::close(stop_pipe_[0]);
    if (stop_pipe_[1] >= 0) ::close(stop_pipe_[1]);
}

void LineServer::stop() {
    if (stop_pipe_[1] >= 0) {
        char byte = 1;
        [[maybe_unused]] ssize_t n = ::write(stop_pipe_[1], &byte, 1);
    }
}

void LineServer::serve(MonitorEngine& engine, std::ostream& events_sink) {
    struct Connection {
        int fd;
        std::string buffer;
    };
    std::vector<Connection> connections;

    auto respond = [](int fd, const std::string& text) {
        std::size_t off = 0;
        while (off < text.size()) {
            ssize_t n = ::send(fd, text.data() + off, text.size() - off, MSG_NOSIGNAL);
            if (n <= 0) break;
            off += static_cast<std::size_t>(n);
        }
    };

    bool running = true;
    while (running) {
        std::vector<pollfd> fds;
        fds.push_back({stop_pipe_[0], POLLIN, 0});
        fds.push_back({listen_fd_, POLLIN, 0});
        for (const auto& c : connections) fds.push_back({c.fd, POLLIN, 0});

        int ready = ::poll(fds.data(), fds.size(), -1);
        if (ready < 0) {
            if (errno == EINTR) continue;
            break;
        }
        if (fds[0].revents & POLLIN) {
            running = false;
            break;
        }
        if (fds[1].revents & POLLIN) {
            int fd = ::accept(listen_fd_, nullptr, nullptr);
            if (fd >= 0) connections.push_back({fd, {}});
        }
        for (std::size_t i = 0; i < connections.size();) {
            pollfd& p = fds[2 + i];
            if (!(p.revents & (POLLIN | POLLHUP | POLLERR))) {
                ++i;
                continue;
            }
            char chunk[4096];
            ssize_t n = ::recv(connections[i].fd, chunk, sizeof chunk, 0);
            if (n <= 0) {
                ::close(connections[i].fd);
                connections.erase(connections.begin() + static_cast<std::ptrdiff_t>(i));
                continue;
            }
            connections[i].buffer.append(chunk, static_cast<std::size_t>(n));
            std::size_t start = 0;
            for (std::size_t pos;
                 (pos = connections[i].buffer.find('\n', start)) != std::string::npos;
                 start = pos + 1) {
                std::string_view line(connections[i].buffer.data() + start, pos - start);
                line = trim(line);
                if (line.empty()) continue;
                try {
                    ProcessResult r = engine.process_line(line);
                    for (const auto& event : r.events)
                        events_sink << event_csv_line(event) << '\n';
                    events_sink.flush();
                } catch (const Error& e) {
                    respond(connections[i].fd, std::string("ERR ") + e.what() + "\n");
                }
            }
            connections[i].buffer.erase(0, start);
            ++i;
        }
    }
    for (const auto& c : connections) ::close(c.fd);
    events_sink.flush();
    // drain stop bytes so a later serve() call does not exit immediately
    char byte;
    while (::read(stop_pipe_[0], &byte, 1) > 0) {}
}

}  // namespace vitalguard
