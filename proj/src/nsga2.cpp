#include "synaudit/nsga2.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "synaudit/errors.hpp"

namespace synaudit {

void EvolutionConfig::validate(std::size_t num_features) const {
    if (n_gen < 1) throw ConfigError("n_gen must be >= 1");
    if (pop_size < 2) throw ConfigError("population size must be >= 2");
    if (pop_size % 2 != 0) throw ConfigError("population size must be even");
    if (crossover_prob < 0.0 || crossover_prob > 1.0)
        throw ConfigError("crossover_prob must be in [0, 1]");
    if (mutation_prob > 1.0) throw ConfigError("mutation_prob must be in [0, 1]");
    if (eta_m <= 0.0) throw ConfigError("eta_m must be positive");
    if (num_features == 0) throw ConfigError("genotype needs at least one feature");
}

double EvolutionConfig::effective_mutation_prob(std::size_t num_features) const {
    if (mutation_prob >= 0.0) return mutation_prob;
    return 1.0 / static_cast<double>(num_features);
}

Genotype genotype_from_encoded(const Encoder& encoder, std::span<const double> encoded) {
    if (encoded.size() != encoder.encoded_width())
        throw DataError("genotype_from_encoded: width mismatch");
    Genotype g;
    const auto& specs = encoder.fitted_features();
    g.genes.reserve(specs.size());
    for (std::size_t f = 0; f < specs.size(); ++f) {
        const std::size_t off = encoder.feature_offset(f);
        if (specs[f].kind == FeatureKind::Continuous) {
            g.genes.emplace_back(std::clamp(encoded[off], 0.0, 1.0));
        } else {
            std::size_t best = 0;
            for (std::size_t c = 1; c < specs[f].categories.size(); ++c)
                if (encoded[off + c] > encoded[off + best]) best = c;
            g.genes.emplace_back(best);
        }
    }
    return g;
}

std::vector<double> genotype_to_encoded(const Encoder& encoder, const Genotype& genotype) {
    const auto& specs = encoder.fitted_features();
    if (genotype.genes.size() != specs.size())
        throw DataError("genotype_to_encoded: feature count mismatch");
    std::vector<double> out(encoder.encoded_width(), 0.0);
    for (std::size_t f = 0; f < specs.size(); ++f) {
        const std::size_t off = encoder.feature_offset(f);
        if (specs[f].kind == FeatureKind::Continuous) {
            out[off] = std::get<double>(genotype.genes[f]);
        } else {
            out[off + std::get<std::size_t>(genotype.genes[f])] = 1.0;
        }
    }
    return out;
}

Objectives evaluate_objectives(const ObjectiveContext& ctx, const Genotype& genotype) {
    const auto encoded = genotype_to_encoded(*ctx.encoder, genotype);
    const auto neighbors = ctx.index->query(encoded, ctx.k);
    std::vector<double> dists;
    dists.reserve(neighbors.size());
    for (const auto& nb : neighbors) dists.push_back(nb.sq_dist);
    const double f1 = harmonic_mean(dists);
    const double f2 = ctx.oracle->loss_for(encoded, ctx.target, ctx.loss_kind);
    return {f1, f2};
}

bool dominates(const Objectives& a, const Objectives& b) {
    bool strictly_better = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strictly_better = true;
    }
    return strictly_better;
}

std::vector<std::vector<std::size_t>> non_dominated_sort(const Population& pop) {
    if (pop.empty()) throw DataError("non_dominated_sort on an empty population");
    const std::size_t n = pop.size();
    std::vector<std::vector<std::size_t>> dominated(n);
    std::vector<std::size_t> dominating_count(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dominates(pop[i].objectives, pop[j].objectives)) {
                dominated[i].push_back(j);
                ++dominating_count[j];
            } else if (dominates(pop[j].objectives, pop[i].objectives)) {
                dominated[j].push_back(i);
                ++dominating_count[i];
            }
        }
    }
    std::vector<std::vector<std::size_t>> fronts;
    std::vector<std::size_t> current;
    for (std::size_t i = 0; i < n; ++i)
        if (dominating_count[i] == 0) current.push_back(i);
    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (std::size_t i : current) {
            for (std::size_t j : dominated[i]) {
                if (--dominating_count[j] == 0) next.push_back(j);
            }
        }
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(current));
        current = std::move(next);
    }
    return fronts;
}

std::vector<double> crowding_distance(const Population& pop,
                                      const std::vector<std::size_t>& front) {
    if (front.empty()) throw DataError("crowding_distance on an empty front");
    const std::size_t n = front.size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (n <= 2) return std::vector<double>(n, inf);

    std::vector<double> dist(n, 0.0);
    std::vector<std::size_t> order(n);
    for (std::size_t m = 0; m < 2; ++m) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return pop[front[a]].objectives[m] < pop[front[b]].objectives[m];
        });
        const double lo = pop[front[order.front()]].objectives[m];
        const double hi = pop[front[order.back()]].objectives[m];
        dist[order.front()] = inf;
        dist[order.back()] = inf;
        if (hi <= lo) continue;  // degenerate range contributes nothing
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double gap = pop[front[order[i + 1]]].objectives[m] -
                               pop[front[order[i - 1]]].objectives[m];
            dist[order[i]] += gap / (hi - lo);
        }
    }
    return dist;
}

std::vector<std::vector<std::size_t>> assign_ranks(Population& pop) {
    auto fronts = non_dominated_sort(pop);
    for (std::size_t r = 0; r < fronts.size(); ++r) {
        const auto crowding = crowding_distance(pop, fronts[r]);
        for (std::size_t i = 0; i < fronts[r].size(); ++i) {
            pop[fronts[r][i]].front_rank = r;
            pop[fronts[r][i]].crowding = crowding[i];
        }
    }
    return fronts;
}

Population init_population(const Genotype& query, std::size_t pop_size) {
    if (pop_size < 2) throw ConfigError("population size must be >= 2");
    Population pop(pop_size);
    for (auto& ind : pop) ind.genotype = query;
    return pop;
}

std::vector<std::size_t> binary_tournament(const Population& pop, std::size_t count, Rng& rng) {
    std::vector<std::size_t> parents;
    parents.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t a = rng.uniform_int(pop.size());
        const std::size_t b = rng.uniform_int(pop.size());
        std::size_t winner;
        if (pop[a].front_rank != pop[b].front_rank) {
            winner = pop[a].front_rank < pop[b].front_rank ? a : b;
        } else if (pop[a].crowding != pop[b].crowding) {
            winner = pop[a].crowding > pop[b].crowding ? a : b;
        } else {
            winner = rng.uniform() < 0.5 ? a : b;
        }
        parents.push_back(winner);
    }
    return parents;
}

std::pair<Genotype, Genotype> two_point_crossover(const Genotype& p1, const Genotype& p2,
                                                  double prob, Rng& rng) {
    if (p1.genes.size() != p2.genes.size())
        throw DataError("crossover: genotype length mismatch");
    Genotype c1 = p1;
    Genotype c2 = p2;
    const std::size_t m = p1.genes.size();
    if (m == 0 || rng.uniform() >= prob) return {std::move(c1), std::move(c2)};
    // two distinct cut positions on feature boundaries, middle segment swapped
    std::size_t cut1 = rng.uniform_int(m + 1);
    std::size_t cut2 = rng.uniform_int(m + 1);
    while (cut2 == cut1) cut2 = rng.uniform_int(m + 1);
    if (cut1 > cut2) std::swap(cut1, cut2);
    for (std::size_t i = cut1; i < cut2; ++i) std::swap(c1.genes[i], c2.genes[i]);
    return {std::move(c1), std::move(c2)};
}

namespace {

// Deb & Agrawal polynomial mutation on [0, 1].
double polynomial_mutate(double x, double eta_m, Rng& rng) {
    const double u = rng.uniform();
    const double mpow = 1.0 / (eta_m + 1.0);
    double dq;
    if (u <= 0.5) {
        const double xy = 1.0 - x;
        const double val = 2.0 * u + (1.0 - 2.0 * u) * std::pow(xy, eta_m + 1.0);
        dq = std::pow(val, mpow) - 1.0;
    } else {
        const double xy = x;
        const double val = 2.0 * (1.0 - u) + (2.0 * u - 1.0) * std::pow(xy, eta_m + 1.0);
        dq = 1.0 - std::pow(val, mpow);
    }
    return std::clamp(x + dq, 0.0, 1.0);
}

}  // namespace

Genotype mutate(const Encoder& encoder, const Genotype& g, double prob, double eta_m, Rng& rng) {
    const auto& specs = encoder.fitted_features();
    if (g.genes.size() != specs.size()) throw DataError("mutate: genotype length mismatch");
    Genotype out = g;
    for (std::size_t f = 0; f < specs.size(); ++f) {
        if (rng.uniform() >= prob) continue;
        if (specs[f].kind == FeatureKind::Continuous) {
            out.genes[f] = polynomial_mutate(std::get<double>(out.genes[f]), eta_m, rng);
        } else {
            out.genes[f] = rng.uniform_int(specs[f].categories.size());
        }
    }
    return out;
}

namespace {

// Truncate a ranked population to `count` survivors: front rank ascending,
// crowding descending, index ascending.
Population survive(const Population& pop, std::size_t count) {
    std::vector<std::size_t> order(pop.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (pop[a].front_rank != pop[b].front_rank) return pop[a].front_rank < pop[b].front_rank;
        if (pop[a].crowding != pop[b].crowding) return pop[a].crowding > pop[b].crowding;
        return a < b;
    });
    Population survivors;
    survivors.reserve(count);
    for (std::size_t i = 0; i < count; ++i) survivors.push_back(pop[order[i]]);
    return survivors;
}

GenerationStats stats_of(const Population& pop) {
    GenerationStats s{std::numeric_limits<double>::infinity(),
                      std::numeric_limits<double>::infinity()};
    for (const auto& ind : pop) {
        s.min_f1 = std::min(s.min_f1, ind.objectives[0]);
        s.min_f2 = std::min(s.min_f2, ind.objectives[1]);
    }
    return s;
}

}  // namespace

EvolutionResult evolve(const Genotype& query, const EvolutionConfig& config,
                       const ObjectiveContext& ctx) {
    const std::size_t m = query.genes.size();
    config.validate(m);
    const double mut_prob = config.effective_mutation_prob(m);
    Rng rng(config.seed);

    Population pop = init_population(query, config.pop_size);
    const Objectives initial = evaluate_objectives(ctx, query);
    for (auto& ind : pop) ind.objectives = initial;

    EvolutionResult result;
    result.history.push_back(stats_of(pop));

    for (std::size_t gen = 0; gen < config.n_gen; ++gen) {
        assign_ranks(pop);
        Population survivors = survive(pop, config.pop_size);
        assign_ranks(survivors);

        const auto parents = binary_tournament(survivors, config.pop_size, rng);
        Population mutants;
        mutants.reserve(config.pop_size);
        for (std::size_t i = 0; i + 1 < parents.size(); i += 2) {
            auto [c1, c2] = two_point_crossover(survivors[parents[i]].genotype,
                                                survivors[parents[i + 1]].genotype,
                                                config.crossover_prob, rng);
            Individual m1, m2;
            m1.genotype = mutate(*ctx.encoder, c1, mut_prob, config.eta_m, rng);
            m2.genotype = mutate(*ctx.encoder, c2, mut_prob, config.eta_m, rng);
            mutants.push_back(std::move(m1));
            mutants.push_back(std::move(m2));
        }
#pragma omp parallel for schedule(dynamic, 8)
        for (long long i = 0; i < static_cast<long long>(mutants.size()); ++i)
            mutants[i].objectives = evaluate_objectives(ctx, mutants[i].genotype);

        pop = std::move(survivors);
        pop.insert(pop.end(), std::make_move_iterator(mutants.begin()),
                   std::make_move_iterator(mutants.end()));
        result.history.push_back(stats_of(pop));
    }
    result.population = std::move(pop);
    return result;
}

std::size_t asf_select(const Population& pop, WeightVector weights) {
    if (pop.empty()) throw DataError("asf_select on an empty population");
    if (weights.distance < 0.0 || weights.loss < 0.0 ||
        std::abs(weights.distance + weights.loss - 1.0) > 1e-9)
        throw DataError("asf_select: weights must be non-negative and sum to 1");

    const auto fronts = non_dominated_sort(pop);
    const auto& front = fronts.front();

    Objectives ideal{std::numeric_limits<double>::infinity(),
                     std::numeric_limits<double>::infinity()};
    Objectives nadir{-std::numeric_limits<double>::infinity(),
                     -std::numeric_limits<double>::infinity()};
    for (std::size_t i : front) {
        for (std::size_t m = 0; m < 2; ++m) {
            ideal[m] = std::min(ideal[m], pop[i].objectives[m]);
            nadir[m] = std::max(nadir[m], pop[i].objectives[m]);
        }
    }
    const std::array<double, 2> w{weights.distance, weights.loss};

    std::size_t best = front.front();
    double best_score = std::numeric_limits<double>::infinity();
    bool have_score = false;
    for (std::size_t i : front) {
        double score = -std::numeric_limits<double>::infinity();
        bool included = false;
        for (std::size_t m = 0; m < 2; ++m) {
            if (w[m] <= 0.0) continue;               // zero-weight objective excluded
            if (nadir[m] <= ideal[m]) continue;      // degenerate range dropped
            const double normalized = (pop[i].objectives[m] - ideal[m]) / (nadir[m] - ideal[m]);
            score = std::max(score, normalized / w[m]);
            included = true;
        }
        if (!included) score = 0.0;  // all objectives dropped: every member ties
        auto better = [&]() {
            if (!have_score) return true;
            if (score != best_score) return score < best_score;
            if (pop[i].objectives[0] != pop[best].objectives[0])
                return pop[i].objectives[0] < pop[best].objectives[0];
            return false;  // front indices ascend, keep the earlier one
        };
        if (better()) {
            best = i;
            best_score = score;
            have_score = true;
        }
    }
    return best;
}

}  // namespace synaudit
