#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "vitalguard/errors.hpp"
#include "vitalguard/ga.hpp"
#include "vitalguard/signals.hpp"
#include "vitalguard/predictor.hpp"

using namespace vitalguard;

namespace {

std::vector<Sample> toy_samples() {
    // zero-output net scores SSE 1 + 4 = 5 on these
    return {{{0.0, 0.0}, 1.0}, {{1.0, 1.0}, 2.0}};
}

std::vector<Sample> fixture_task() {
    const FixtureSet& f = load_fixtures();
    std::vector<Sample> samples;
    Normalizer norm{72, 98};
    for (const auto& row : f.training_rows)
        for (const auto& w : make_windows(row)) {
            Sample s;
            for (double v : w.input) s.input.push_back(norm.normalize(v));
            s.target = norm.normalize(w.target);
            samples.push_back(s);
        }
    return samples;
}

}  // namespace

TEST_SUITE("ga") {

TEST_CASE("chromosome length counts every weight and bias") {
    CHECK(chromosome_length({2, 2}) == 9);
    CHECK(chromosome_length({8, 25}) == 251);
}

TEST_CASE("decode lays out w1, b1, w2, b2 in order") {
    Chromosome c = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    NetParams p = decode(c, {2, 2});
    CHECK(p.w1 == std::vector<double>{1, 2, 3, 4});
    CHECK(p.b1 == std::vector<double>{5, 6});
    CHECK(p.w2 == std::vector<double>{7, 8});
    CHECK(p.b2 == 9);
    CHECK(encode(p) == c);
    CHECK_THROWS_AS(decode(Chromosome{1, 2, 3}, NetConfig{2, 2}), DataError);
}

TEST_CASE("fitness is the scaled squared-error sum") {
    Chromosome zero(chromosome_length({2, 2}), 0.0);
    CHECK(fitness(zero, {2, 2}, toy_samples()) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(fitness(zero, {2, 2}, toy_samples(), 2.0) == doctest::Approx(10.0).epsilon(1e-15));
}

TEST_CASE("selection favors lower objective values") {
    std::vector<double> f = {1.0, 2.0, 2.0};
    auto p = selection_probabilities(f, 1.0, 0.0);
    REQUIRE(p.size() == 3);
    CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(p[2] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(p[0] + p[1] + p[2] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("selection handles a perfect individual via epsilon") {
    std::vector<double> f = {0.0, 1.0};
    auto p = selection_probabilities(f);  // epsilon keeps the ratio finite
    CHECK(p[0] > 0.999);
    CHECK(p[0] + p[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("roulette empirical frequencies match the probabilities") {
    std::vector<double> p = {0.5, 0.25, 0.25};
    Rng rng(23);
    std::vector<int> hits(3, 0);
    int n = 20000;
    for (int i = 0; i < n; ++i) ++hits[roulette_select(p, rng)];
    CHECK(std::abs(hits[0] / double(n) - 0.5) < 0.02);
    CHECK(std::abs(hits[1] / double(n) - 0.25) < 0.02);
    CHECK(std::abs(hits[2] / double(n) - 0.25) < 0.02);
}

TEST_CASE("roulette requires normalized probabilities") {
    Rng rng(1);
    std::vector<double> bad = {0.5, 0.2};
    CHECK_THROWS_AS(roulette_select(bad, rng), DataError);
}

TEST_CASE("arithmetic crossover blends from the original parents") {
    Chromosome a = {0.0, 1.0}, b = {1.0, -1.0};
    auto [c1, c2] = crossover(a, b, 0.0, true);
    CHECK(c1 == a);
    CHECK(c2 == b);
    auto [d1, d2] = crossover(a, b, 1.0, true);
    CHECK(d1 == b);
    CHECK(d2 == a);
    auto [m1, m2] = crossover(a, b, 0.5, true);
    CHECK(m1 == Chromosome{0.5, 0.0});
    CHECK(m2 == Chromosome{0.5, 0.0});
    auto [u1, u2] = crossover(a, b, 0.7, false);
    CHECK(u1 == a);
    CHECK(u2 == b);
    CHECK_THROWS_AS(crossover(a, Chromosome{1.0}, 0.5, true), DataError);
}

TEST_CASE("crossover children are convex combinations, simultaneously computed") {
    Chromosome a = {0.2, -0.4, 0.1}, b = {-0.3, 0.5, 0.0};
    auto [c1, c2] = crossover(a, b, 0.25, true);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(c1[i] == doctest::Approx(0.25 * b[i] + 0.75 * a[i]).epsilon(1e-15));
        CHECK(c2[i] == doctest::Approx(0.25 * a[i] + 0.75 * b[i]).epsilon(1e-15));
        // pairwise sum preserved: blend uses originals, not partly overwritten ones
        CHECK(c1[i] + c2[i] == doctest::Approx(a[i] + b[i]).epsilon(1e-14));
    }
}

TEST_CASE("hand-evaluated mutation steps") {
    GaConfig config;
    config.gene_min = -1.0;
    config.gene_max = 1.0;
    config.max_generations = 2;
    config.mutation_variant = MutationVariant::Paper;
    // r > 0.5 branch at generation 0: shrink f = 0.5*(1-0) = 0.5,
    // b' = 0.5 + 0.5*(0.5 - 1.0) = 0.25
    CHECK(mutate_gene(0.5, 0.75, 0.5, 0, config) == doctest::Approx(0.25).epsilon(1e-15));
    // r <= 0.5 branch: b' = 0.5 + 0.5*(-1.0 - 0.5) = -0.25
    CHECK(mutate_gene(0.5, 0.25, 0.5, 0, config) == doctest::Approx(-0.25).epsilon(1e-15));
    // final generation: shrink factor zero, gene unchanged
    CHECK(mutate_gene(0.5, 0.75, 0.9, 2, config) == 0.5);
    CHECK(mutate_gene(0.5, 0.25, 0.9, 2, config) == 0.5);
}

TEST_CASE("both mutation branches of the default variant never raise the gene") {
    GaConfig config;
    config.gene_min = -1.0;
    config.gene_max = 1.0;
    config.max_generations = 10;
    Rng rng(31);
    for (int i = 0; i < 2000; ++i) {
        double gene = rng.uniform(-1, 1);
        double r = rng.uniform01(), rp = rng.uniform01();
        std::size_t g = rng.index(10);
        double out = mutate_gene(gene, r, rp, g, config);
        CHECK(out <= gene + 1e-15);
        CHECK(out >= config.gene_min);
        CHECK(out <= config.gene_max);
    }
}

TEST_CASE("symmetric variant moves up when r exceeds one half") {
    GaConfig config;
    config.gene_min = -1.0;
    config.gene_max = 1.0;
    config.max_generations = 10;
    config.mutation_variant = MutationVariant::Symmetric;
    CHECK(mutate_gene(0.5, 0.75, 0.5, 0, config) ==
          doctest::Approx(0.5 + 0.5 * (1.0 - 0.5)).epsilon(1e-15));
    CHECK(mutate_gene(0.5, 0.25, 0.5, 0, config) ==
          doctest::Approx(0.5 + 0.5 * (-1.0 - 0.5)).epsilon(1e-15));
    Rng rng(32);
    for (int i = 0; i < 500; ++i) {
        double gene = rng.uniform(-1, 1);
        double out = mutate_gene(gene, rng.uniform01(), rng.uniform01(), rng.index(10), config);
        CHECK(out >= config.gene_min);
        CHECK(out <= config.gene_max);
    }
}

TEST_CASE("whole-chromosome mutation is seed deterministic") {
    GaConfig config;
    config.p_mutation = 0.5;
    config.max_generations = 5;
    Chromosome c(20, 0.1);
    Rng a(77), b(77);
    CHECK(mutate(c, 1, config, a) == mutate(c, 1, config, b));
}

TEST_CASE("evolution invariants observed at every generation") {
    GaConfig config;
    config.population_size = 12;
    config.max_generations = 8;
    config.rng_seed = 3;
    std::size_t calls = 0;
    double prev_best = 0;
    evolve({2, 2}, config, toy_samples(),
           [&](std::size_t gen, const std::vector<Chromosome>& pop,
               const std::vector<double>& fit) {
               CHECK(pop.size() == 12);
               REQUIRE(fit.size() == 12);
               for (const auto& chrom : pop) {
                   REQUIRE(chrom.size() == chromosome_length({2, 2}));
                   for (double gene : chrom) {
                       CHECK(gene >= config.gene_min);
                       CHECK(gene <= config.gene_max);
                   }
               }
               double best = *std::min_element(fit.begin(), fit.end());
               if (gen > 0)
                   CHECK(best <= prev_best + 1e-12);  // elitism never loses the best
               prev_best = best;
               ++calls;
           });
    CHECK(calls == 9);  // initial population plus eight generations
}

TEST_CASE("no variation operators means the best passes through exactly") {
    GaConfig config;
    config.population_size = 10;
    config.max_generations = 6;
    config.p_crossover = 0.0;
    config.p_mutation = 0.0;
    config.rng_seed = 11;
    EvolveResult r = evolve({2, 2}, config, toy_samples());
    REQUIRE(r.best_fitness_trace.size() == 7);
    CHECK(r.best_fitness_trace.back() == r.best_fitness_trace.front());
    CHECK(r.best_fitness == r.best_fitness_trace.front());
}

TEST_CASE("elitist best trace never worsens") {
    GaConfig config;
    config.population_size = 16;
    config.max_generations = 12;
    config.rng_seed = 5;
    EvolveResult r = evolve({2, 3}, config, toy_samples());
    for (std::size_t i = 1; i < r.best_fitness_trace.size(); ++i)
        CHECK(r.best_fitness_trace[i] <= r.best_fitness_trace[i - 1] + 1e-12);
    CHECK(r.best_fitness == r.best_fitness_trace.back());
    CHECK(fitness(r.best_chromosome, {2, 3}, toy_samples()) ==
          doctest::Approx(r.best_fitness).epsilon(1e-12));
}

TEST_CASE("search makes real progress on the recorded-signal task") {
    auto samples = fixture_task();
    GaConfig config;
    config.population_size = 20;
    config.max_generations = 15;
    config.rng_seed = 1;
    NetConfig net{8, 6};
    EvolveResult r = evolve(net, config, samples);
    CHECK(r.best_fitness < r.best_fitness_trace.front());
    CHECK(r.best_fitness_trace.back() <= r.best_fitness_trace.front());
}

TEST_CASE("evolution is reproducible per seed") {
    GaConfig config;
    config.population_size = 10;
    config.max_generations = 5;
    config.rng_seed = 99;
    EvolveResult a = evolve({2, 2}, config, toy_samples());
    EvolveResult b = evolve({2, 2}, config, toy_samples());
    CHECK(a.best_chromosome == b.best_chromosome);
    CHECK(a.best_fitness_trace == b.best_fitness_trace);
}

TEST_CASE("config validation") {
    GaConfig config;
    config.population_size = 1;
    CHECK_THROWS_AS(evolve({2, 2}, config, toy_samples()), DataError);
    config = {};
    config.max_generations = 0;
    CHECK_THROWS_AS(evolve({2, 2}, config, toy_samples()), DataError);
    config = {};
    config.gene_min = 0.5;
    config.gene_max = -0.5;
    CHECK_THROWS_AS(evolve({2, 2}, config, toy_samples()), DataError);
}

}  // TEST_SUITE
