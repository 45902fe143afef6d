#include "vitalguard/lms.hpp"

#include <cmath>
#include <string>

#include "vitalguard/errors.hpp"

namespace vitalguard {

FilterState lms_init(const FilterConfig& config) {
    if (config.order == 0)
        throw DataError("filter order: must be positive");
    if (!config.initial_weights.empty() && config.initial_weights.size() != config.order)
        throw DataError("initial_weights: expected " + std::to_string(config.order) +
                        " entries, got " + std::to_string(config.initial_weights.size()));
    FilterState s;
    s.weights = config.initial_weights.empty() ? std::vector<double>(config.order, 0.0)
                                               : config.initial_weights;
    s.delay_line.assign(config.order, 0.0);
    return s;
}

LmsStepResult lms_step(FilterState& state, double x_new, double desired, double mu) {
    const std::size_t n = state.weights.size();
    for (std::size_t i = n - 1; i > 0; --i)
        state.delay_line[i] = state.delay_line[i - 1];
    state.delay_line[0] = x_new;

    double y = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        y += state.weights[i] * state.delay_line[i];
    double e = desired - y;

    bool finite = std::isfinite(y) && std::isfinite(e);
    if (finite) {
        double scale = mu * e;
        for (std::size_t i = 0; i < n; ++i) {
            state.weights[i] += scale * state.delay_line[i];
            if (!std::isfinite(state.weights[i])) finite = false;
        }
    }
    if (!finite)
        throw DivergenceError("filter state went non-finite");
    return {y, e};
}

LmsRun lms_run(const FilterConfig& config, std::span<const double> x, std::span<const double> d) {
    if (x.size() != d.size())
        throw DataError("input and desired series differ in length: " +
                        std::to_string(x.size()) + " vs " + std::to_string(d.size()));
    FilterState state = lms_init(config);
    LmsRun run;
    run.output.reserve(x.size());
    run.error.reserve(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        LmsStepResult r;
        try {
            r = lms_step(state, x[k], d[k], config.mu);
        } catch (const DivergenceError&) {
            throw DivergenceError("filter state went non-finite at step " + std::to_string(k));
        }
        run.output.push_back(r.output);
        run.error.push_back(r.error);
    }
    return run;
}

double estimate_mu_bound(std::span<const double> x, std::size_t order) {
    if (order == 0)
        throw DataError("filter order: must be positive");
    if (x.size() < order)
        throw DataError("series shorter than filter order: " + std::to_string(x.size()) +
                        " < " + std::to_string(order));
    double power = 0.0;
    for (double v : x) power += v * v;
    power /= static_cast<double>(x.size());
    if (power <= 0.0)
        throw DataError("cannot estimate step bound from all-zero series");
    return 1.0 / (static_cast<double>(order) * power);
}

}  // namespace vitalguard
