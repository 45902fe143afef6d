#include "vitalguard/ga.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vitalguard/errors.hpp"

namespace vitalguard {

std::size_t chromosome_length(const NetConfig& config) {
    return config.n_hidden * config.n_in + config.n_hidden + config.n_hidden + 1;
}

Chromosome encode(const NetParams& params) {
    Chromosome c;
    c.reserve(params.parameter_count());
    c.insert(c.end(), params.w1.begin(), params.w1.end());
    c.insert(c.end(), params.b1.begin(), params.b1.end());
    c.insert(c.end(), params.w2.begin(), params.w2.end());
    c.push_back(params.b2);
    return c;
}

NetParams decode(const Chromosome& chromosome, const NetConfig& config) {
    if (chromosome.size() != chromosome_length(config))
        throw DataError("chromosome length " + std::to_string(chromosome.size()) +
                        " does not match network layout " +
                        std::to_string(chromosome_length(config)));
    NetParams p = NetParams::zeros(config);
    auto it = chromosome.begin();
    std::copy_n(it, p.w1.size(), p.w1.begin());
    it += static_cast<std::ptrdiff_t>(p.w1.size());
    std::copy_n(it, p.b1.size(), p.b1.begin());
    it += static_cast<std::ptrdiff_t>(p.b1.size());
    std::copy_n(it, p.w2.size(), p.w2.begin());
    it += static_cast<std::ptrdiff_t>(p.w2.size());
    p.b2 = *it;
    return p;
}

double fitness(const Chromosome& chromosome, const NetConfig& config,
               std::span<const Sample> samples, double k) {
    return k * sse_loss(decode(chromosome, config), samples);
}

std::vector<double> selection_probabilities(std::span<const double> fitness_values,
                                            double k, double epsilon) {
    if (fitness_values.empty())
        throw DataError("cannot build selection probabilities from no fitness values");
    std::vector<double> p(fitness_values.size());
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        double f = fitness_values[i];
        if (!std::isfinite(f) || f < 0.0)
            throw DataError("fitness values must be finite and non-negative");
        p[i] = k / (f + epsilon);
        total += p[i];
    }
    for (auto& v : p) v /= total;
    return p;
}

std::size_t roulette_select(std::span<const double> probabilities, Rng& rng) {
    if (probabilities.empty())
        throw DataError("cannot select from empty probabilities");
    double total = 0.0;
    for (double p : probabilities) {
        if (!(p >= 0.0))
            throw DataError("selection probabilities must be non-negative");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw DataError("selection probabilities must sum to 1");
    double u = rng.uniform01();
    double cum = 0.0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        cum += probabilities[i];
        if (u < cum) return i;
    }
    return probabilities.size() - 1;
}

std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b,
                                            double blend, bool apply) {
    if (a.size() != b.size())
        throw DataError("crossover parents differ in length");
    if (!apply) return {a, b};
    Chromosome c1(a.size()), c2(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        c1[i] = blend * b[i] + (1.0 - blend) * a[i];
        c2[i] = blend * a[i] + (1.0 - blend) * b[i];
    }
    return {std::move(c1), std::move(c2)};
}

double mutate_gene(double gene, double r, double r_prime, std::size_t generation,
                   const GaConfig& config) {
    double shrink = 1.0 - static_cast<double>(generation) /
                              static_cast<double>(config.max_generations);
    double f = r_prime * shrink;
    double b = gene;
    if (config.mutation_variant == MutationVariant::Paper) {
        if (r > 0.5)
            b += f * (gene - config.gene_max);
        else
            b += f * (config.gene_min - gene);
    } else {
        if (r > 0.5)
            b += f * (config.gene_max - gene);
        else
            b -= f * (gene - config.gene_min);
    }
    return std::clamp(b, config.gene_min, config.gene_max);
}

Chromosome mutate(const Chromosome& chromosome, std::size_t generation, const GaConfig& config,
                  Rng& rng) {
    Chromosome out = chromosome;
    for (auto& gene : out) {
        if (rng.uniform01() < config.p_mutation) {
            double r = rng.uniform01();
            double r_prime = rng.uniform01();
            gene = mutate_gene(gene, r, r_prime, generation, config);
        }
    }
    return out;
}

namespace {

void check_config(const GaConfig& config) {
    if (config.population_size < 2)
        throw DataError("population size: must be at least 2");
    if (config.max_generations == 0)
        throw DataError("max generations: must be positive");
    if (config.p_crossover < 0.0 || config.p_crossover > 1.0 ||
        config.p_mutation < 0.0 || config.p_mutation > 1.0)
        throw DataError("crossover/mutation probabilities must be in [0, 1]");
    if (!(config.gene_min < config.gene_max))
        throw DataError("gene bounds: need gene_min < gene_max");
}

std::size_t best_index(const std::vector<double>& f) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < f.size(); ++i)
        if (f[i] < f[best]) best = i;
    return best;
}

}  // namespace

EvolveResult evolve(const NetConfig& net_config, const GaConfig& config,
                    std::span<const Sample> samples, const EvolveObserver& observer) {
    check_config(config);
    if (samples.empty())
        throw DataError("cannot evolve against an empty sample set");

    Rng rng(config.rng_seed);
    const std::size_t len = chromosome_length(net_config);

    std::vector<Chromosome> population(config.population_size);
    for (auto& c : population) {
        c.resize(len);
        for (auto& gene : c) gene = rng.uniform(config.gene_min, config.gene_max);
    }

    auto evaluate = [&](const std::vector<Chromosome>& pop) {
        std::vector<double> f(pop.size());
        for (std::size_t i = 0; i < pop.size(); ++i)
            f[i] = fitness(pop[i], net_config, samples, config.fitness_k);
        return f;
    };

    std::vector<double> fit = evaluate(population);
    EvolveResult result;
    result.best_fitness_trace.reserve(config.max_generations + 1);
    result.best_fitness_trace.push_back(fit[best_index(fit)]);
    if (observer) observer(0, population, fit);

    for (std::size_t gen = 1; gen <= config.max_generations; ++gen) {
        std::vector<double> probs = selection_probabilities(fit, config.fitness_k,
                                                            config.fitness_epsilon);
        std::vector<Chromosome> next;
        next.reserve(config.population_size);
        std::size_t elite = best_index(fit);
        if (config.elitism) next.push_back(population[elite]);

        while (next.size() < config.population_size) {
            std::size_t k = roulette_select(probs, rng);
            std::size_t l = roulette_select(probs, rng);
            bool apply = rng.uniform01() < config.p_crossover;
            double blend = rng.uniform01();
            auto [c1, c2] = crossover(population[k], population[l], blend, apply);
            next.push_back(std::move(c1));
            if (next.size() < config.population_size) next.push_back(std::move(c2));
        }

        // slot 0 holds the untouched elite when elitism is on
        for (std::size_t i = config.elitism ? 1 : 0; i < next.size(); ++i)
            next[i] = mutate(next[i], gen, config, rng);

        population = std::move(next);
        fit = evaluate(population);
        result.best_fitness_trace.push_back(fit[best_index(fit)]);
        if (observer) observer(gen, population, fit);
    }

    std::size_t final_best = best_index(fit);
    result.best_chromosome = population[final_best];
    result.best_fitness = fit[final_best];
    result.best = decode(result.best_chromosome, net_config);
    return result;
}

}  // namespace vitalguard
