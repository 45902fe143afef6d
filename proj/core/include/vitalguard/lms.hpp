#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vitalguard {

struct FilterConfig {
    std::size_t order = 8;
    double mu = 0.01;
    // Empty means all-zero start; otherwise must have `order` entries.
    std::vector<double> initial_weights;
};

// Weights and delay line of one adaptive FIR stage. Delay line is most
// recent first: delay_line[0] is the newest input.
struct FilterState {
    std::vector<double> weights;
    std::vector<double> delay_line;
};

struct LmsStepResult {
    double output;
    double error;
};

FilterState lms_init(const FilterConfig& config);

// One adaptation step: shift x_new in, y = w.x, e = d - y, w += mu*e*x.
// The error identity e + y == d holds to rounding. Throws DivergenceError
// when any of y, e or the weights goes non-finite.
LmsStepResult lms_step(FilterState& state, double x_new, double desired, double mu);

struct LmsRun {
    std::vector<double> output;
    std::vector<double> error;
};

// Runs the filter over paired input/desired series of equal length.
LmsRun lms_run(const FilterConfig& config, std::span<const double> x, std::span<const double> d);

// Step-size stability ceiling surrogate: 1 / (order * mean(x^2)).
// Steps well below this keep adaptation stable for stationary input.
double estimate_mu_bound(std::span<const double> x, std::size_t order);

}  // namespace vitalguard
