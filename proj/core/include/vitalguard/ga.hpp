#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "vitalguard/bpnet.hpp"
#include "vitalguard/rng.hpp"

namespace vitalguard {

// Flat network encoding: w1 row-major, then b1, then w2, then b2.
using Chromosome = std::vector<double>;

enum class MutationVariant {
    Paper,      // both branches pull the gene toward the lower bound side
    Symmetric,  // r > 0.5 moves up toward gene_max, otherwise down toward gene_min
};

struct GaConfig {
    std::size_t population_size = 50;
    std::size_t max_generations = 80;
    double p_crossover = 0.5;
    double p_mutation = 0.06;
    double gene_min = -0.5;
    double gene_max = 0.5;
    double fitness_k = 1.0;
    double fitness_epsilon = 1e-12;
    bool elitism = true;
    MutationVariant mutation_variant = MutationVariant::Paper;
    std::uint64_t rng_seed = 0;
};

std::size_t chromosome_length(const NetConfig& config);
Chromosome encode(const NetParams& params);
NetParams decode(const Chromosome& chromosome, const NetConfig& config);

// Raw objective: k * sum of squared residuals. Lower is better.
double fitness(const Chromosome& chromosome, const NetConfig& config,
               std::span<const Sample> samples, double k = 1.0);

// P_i proportional to k / (F_i + epsilon). Sums to 1.
std::vector<double> selection_probabilities(std::span<const double> fitness_values,
                                            double k = 1.0, double epsilon = 1e-12);

// Cumulative-sum inversion; returns the selected index.
std::size_t roulette_select(std::span<const double> probabilities, Rng& rng);

// Arithmetic blend computed from the original parents simultaneously:
// first child = blend*b + (1-blend)*a, second child = blend*a + (1-blend)*b.
// apply=false returns unmodified copies.
std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b,
                                            double blend, bool apply);

// Single-gene mutation rule at generation g of G_max total, with fresh draws
// r and r_prime in [0,1). The shrink factor r_prime*(1 - g/G_max) vanishes at
// the final generation. Result is clamped to the gene bounds.
double mutate_gene(double gene, double r, double r_prime, std::size_t generation,
                   const GaConfig& config);

// Applies mutate_gene to each gene with probability p_mutation.
Chromosome mutate(const Chromosome& chromosome, std::size_t generation, const GaConfig& config,
                  Rng& rng);

struct EvolveResult {
    NetParams best;
    Chromosome best_chromosome;
    double best_fitness = 0.0;
    // Best raw fitness per generation; entry 0 is the initial population.
    std::vector<double> best_fitness_trace;
};

// Inspection hook for every evaluated generation (0 = initial population).
using EvolveObserver =
    std::function<void(std::size_t generation, const std::vector<Chromosome>& population,
                       const std::vector<double>& fitness_values)>;

// Roulette selection, pairwise arithmetic crossover, bounded mutation, and
// optional single-elite preservation, all driven by one seeded generator.
EvolveResult evolve(const NetConfig& net_config, const GaConfig& config,
                    std::span<const Sample> samples, const EvolveObserver& observer = {});

}  // namespace vitalguard
