#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

#include "synaudit/knn.hpp"
#include "synaudit/predictor.hpp"
#include "synaudit/rng.hpp"
#include "synaudit/selection.hpp"
#include "synaudit/tabular.hpp"

namespace synaudit {

// Decision variables of one candidate reconstruction: per feature either a
// continuous gene in [0,1] (the min-max-encoded value) or a category index.
// Crossover cuts at feature boundaries, so offspring are always valid.
struct Genotype {
    std::vector<Cell> genes;  // schema feature order

    bool operator==(const Genotype& other) const = default;
};

Genotype genotype_from_encoded(const Encoder& encoder, std::span<const double> encoded);
std::vector<double> genotype_to_encoded(const Encoder& encoder, const Genotype& genotype);

using Objectives = std::array<double, 2>;  // {f1 density, f2 prediction loss}

struct Individual {
    Genotype genotype;
    Objectives objectives{0.0, 0.0};
    std::size_t front_rank = 0;
    double crowding = 0.0;
};

using Population = std::vector<Individual>;

struct EvolutionConfig {
    std::size_t n_gen = 50;
    std::size_t pop_size = 100;  // must be even
    double crossover_prob = 0.9;
    double mutation_prob = -1.0;  // < 0 means 1 / #features
    double eta_m = 20.0;
    std::uint64_t seed = 0;

    void validate(std::size_t num_features) const;
    double effective_mutation_prob(std::size_t num_features) const;
};

// Everything needed to score a genotype: the synthetic neighborhood (with the
// query row excluded so the optimizer cannot collapse onto its own index
// entry), the prediction oracle, and the query's target label.
struct ObjectiveContext {
    const Encoder* encoder = nullptr;
    const NeighborIndex* index = nullptr;
    std::size_t k = 5;
    const PredictionOracle* oracle = nullptr;
    double target = 0.0;
    LossKind loss_kind = LossKind::CrossEntropy;
};

Objectives evaluate_objectives(const ObjectiveContext& ctx, const Genotype& genotype);

// a dominates b under minimization.
bool dominates(const Objectives& a, const Objectives& b);

// Fast non-dominated sort; fronts partition the population indices.
std::vector<std::vector<std::size_t>> non_dominated_sort(const Population& pop);

// Crowding distance of each member of one front (indices into pop).
std::vector<double> crowding_distance(const Population& pop, const std::vector<std::size_t>& front);

// Assigns front_rank and crowding to every individual; returns the fronts.
std::vector<std::vector<std::size_t>> assign_ranks(Population& pop);

Population init_population(const Genotype& query, std::size_t pop_size);

std::vector<std::size_t> binary_tournament(const Population& pop, std::size_t count, Rng& rng);

std::pair<Genotype, Genotype> two_point_crossover(const Genotype& p1, const Genotype& p2,
                                                  double prob, Rng& rng);

Genotype mutate(const Encoder& encoder, const Genotype& g, double prob, double eta_m, Rng& rng);

struct GenerationStats {
    double min_f1 = 0.0;
    double min_f2 = 0.0;
};

struct EvolutionResult {
    Population population;  // final P (survivors plus the last mutant batch)
    std::vector<GenerationStats> history;
};

// Full generational loop: survive -> tournament -> crossover -> mutate ->
// union, repeated n_gen times.
EvolutionResult evolve(const Genotype& query, const EvolutionConfig& config,
                       const ObjectiveContext& ctx);

// ASF decision making over the first front of `pop`: objectives normalized by
// the front's ideal/nadir, zero-weight objectives excluded, argmin of the
// weighted max. Returns an index into `pop`.
std::size_t asf_select(const Population& pop, WeightVector weights);

}  // namespace synaudit
