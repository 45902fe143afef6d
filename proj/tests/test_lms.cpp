#include <doctest.h>

#include <cmath>
#include <vector>

#include "vitalguard/errors.hpp"
#include "vitalguard/lms.hpp"
#include "vitalguard/rng.hpp"

using namespace vitalguard;

TEST_SUITE("lms") {

TEST_CASE("init honors explicit weights and rejects bad shapes") {
    FilterConfig config;
    config.order = 3;
    FilterState s = lms_init(config);
    CHECK(s.weights == std::vector<double>{0, 0, 0});
    CHECK(s.delay_line == std::vector<double>{0, 0, 0});

    config.initial_weights = {1, 0, 0};
    CHECK(lms_init(config).weights == std::vector<double>{1, 0, 0});

    config.initial_weights = {1, 0};
    CHECK_THROWS_AS(lms_init(config), DataError);
    config.initial_weights.clear();
    config.order = 0;
    CHECK_THROWS_AS(lms_init(config), DataError);
}

TEST_CASE("zero weights pass nothing through") {
    FilterConfig config;
    config.order = 4;
    FilterState s = lms_init(config);
    auto r = lms_step(s, 3.0, 5.0, 0.0);
    CHECK(r.output == 0.0);
    CHECK(r.error == 5.0);
}

TEST_CASE("hand-evaluated adaptation step") {
    // order 2, w=(0.5,0.5), delay line becomes (1,2) after the shift,
    // d=2, mu=0.1: y=1.5, e=0.5, w'=(0.55,0.60)
    FilterConfig config;
    config.order = 2;
    config.initial_weights = {0.5, 0.5};
    FilterState s = lms_init(config);
    s.delay_line = {2.0, 9.0};  // 9 shifts out
    auto r = lms_step(s, 1.0, 2.0, 0.1);
    CHECK(r.output == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(r.error == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s.delay_line == std::vector<double>{1.0, 2.0});
    CHECK(s.weights[0] == doctest::Approx(0.55).epsilon(1e-15));
    CHECK(s.weights[1] == doctest::Approx(0.60).epsilon(1e-15));
}

TEST_CASE("error identity e + y == d over random steps") {
    Rng rng(11);
    FilterConfig config;
    config.order = 8;
    FilterState s = lms_init(config);
    for (int k = 0; k < 20000; ++k) {
        double x = rng.uniform(-2, 2);
        double d = rng.uniform(-2, 2);
        auto r = lms_step(s, x, d, 0.002);
        // identity holds by construction; allow 4 ulp of the largest operand
        double scale = std::max({std::abs(d), std::abs(r.output), std::abs(r.error)});
        CHECK(std::abs(r.error + r.output - d) <= 4 * scale * 0x1.0p-52 + 1e-300);
    }
}

TEST_CASE("zero excitation leaves weights bitwise unchanged") {
    FilterConfig config;
    config.order = 3;
    config.initial_weights = {0.3, -0.2, 0.7};
    FilterState s = lms_init(config);
    auto before = s.weights;
    lms_step(s, 0.0, 1.0, 0.5);  // delay line still all zero after shift
    CHECK(s.weights == before);
}

TEST_CASE("output is linear in the delay line for frozen weights") {
    FilterConfig config;
    config.order = 4;
    config.initial_weights = {0.4, -0.1, 0.2, 0.05};
    double alpha = 3.5;
    FilterState a = lms_init(config);
    FilterState b = lms_init(config);
    std::vector<double> xs = {1.0, -0.5, 0.25, 2.0, -1.5};
    for (double x : xs) {
        auto ra = lms_step(a, x, 0.0, 0.0);  // mu=0 freezes weights
        auto rb = lms_step(b, alpha * x, 0.0, 0.0);
        CHECK(rb.output == doctest::Approx(alpha * ra.output).epsilon(1e-12));
    }
}

TEST_CASE("identifies an unknown FIR system") {
    std::vector<double> w_star = {0.4, -0.3, 0.2, 0.1};
    Rng rng(5);
    std::size_t n = 6000;
    std::vector<double> x(n), d(n);
    std::vector<double> line(4, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        x[k] = rng.uniform(-1, 1);
        line.insert(line.begin(), x[k]);
        line.pop_back();
        d[k] = 0;
        for (std::size_t i = 0; i < 4; ++i) d[k] += w_star[i] * line[i];
    }
    FilterConfig config;
    config.order = 4;
    config.mu = 0.05;
    LmsRun run = lms_run(config, x, d);
    // rebuild terminal weights by replaying: cheaper to just re-run statefully
    FilterState s = lms_init(config);
    for (std::size_t k = 0; k < n; ++k) lms_step(s, x[k], d[k], config.mu);
    double dist = 0;
    for (std::size_t i = 0; i < 4; ++i)
        dist += (s.weights[i] - w_star[i]) * (s.weights[i] - w_star[i]);
    CHECK(std::sqrt(dist) < 1e-3);
    CHECK(std::abs(run.error.back()) < 1e-3);
}

TEST_CASE("noisy convergence approaches the oracle error floor") {
    std::vector<double> w_star = {0.5, 0.25, -0.25, 0.1};
    Rng rng(17);
    std::size_t n = 10000;
    std::vector<double> x(n), d(n), oracle_e(n);
    std::vector<double> line(4, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        x[k] = rng.uniform(-1, 1);
        line.insert(line.begin(), x[k]);
        line.pop_back();
        double clean = 0;
        for (std::size_t i = 0; i < 4; ++i) clean += w_star[i] * line[i];
        double noise = 0.005 * rng.gaussian();
        d[k] = clean + noise;
        oracle_e[k] = noise;  // error of the fixed-at-w* filter
    }
    FilterConfig config;
    config.order = 4;
    config.mu = 0.5 * estimate_mu_bound(x, 4);
    LmsRun run = lms_run(config, x, d);
    double tail_mse = 0, oracle_mse = 0;
    std::size_t tail = n / 10;
    for (std::size_t k = n - tail; k < n; ++k) {
        tail_mse += run.error[k] * run.error[k];
        oracle_mse += oracle_e[k] * oracle_e[k];
    }
    CHECK(tail_mse / tail <= 2.0 * (oracle_mse / tail));
}

TEST_CASE("divergence raises a typed error") {
    Rng rng(3);
    FilterConfig config;
    config.order = 4;
    FilterState s = lms_init(config);
    bool threw = false;
    try {
        for (int k = 0; k < 1000; ++k)
            lms_step(s, rng.uniform(-1, 1), rng.uniform(-1, 1), 10.0);
    } catch (const DivergenceError&) {
        threw = true;
    }
    CHECK(threw);
}

TEST_CASE("run-level divergence reports the failing step") {
    Rng rng(3);
    std::size_t n = 1000;
    std::vector<double> x(n), d(n);
    for (std::size_t k = 0; k < n; ++k) {
        x[k] = rng.uniform(-1, 1);
        d[k] = rng.uniform(-1, 1);
    }
    FilterConfig config;
    config.order = 4;
    config.mu = 10.0;  // far above the bound, guaranteed blow-up
    CHECK_THROWS_WITH_AS(lms_run(config, x, d), doctest::Contains("at step"),
                         DivergenceError);
}

TEST_CASE("run rejects mismatched lengths") {
    FilterConfig config;
    std::vector<double> x = {1, 2, 3}, d = {1, 2};
    CHECK_THROWS_AS(lms_run(config, x, d), DataError);
}

TEST_CASE("step-size bound surrogate") {
    std::vector<double> pm1 = {1, -1, 1, -1, 1, -1};
    CHECK(estimate_mu_bound(pm1, 4) == doctest::Approx(0.25).epsilon(1e-15));
    std::vector<double> c2 = {2, 2, 2, 2};
    CHECK(estimate_mu_bound(c2, 2) == doctest::Approx(1.0 / 8.0).epsilon(1e-15));
    std::vector<double> zeros = {0, 0, 0, 0};
    CHECK_THROWS_AS(estimate_mu_bound(zeros, 2), DataError);
    CHECK_THROWS_AS(estimate_mu_bound(std::vector<double>{1.0}, 2), DataError);
}

}  // TEST_SUITE
