#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "synaudit/knn.hpp"
#include "synaudit/tabular.hpp"

namespace synaudit {

// Distances at or below this are treated as exact duplicates: the harmonic
// mean collapses to 0 instead of blowing up on the 1/r term.
inline constexpr double kZeroDistanceTolerance = 1e-12;

// |r| / sum(1/r) over the neighbor distances; 0 if any distance is ~0.
double harmonic_mean(const std::vector<double>& distances);

struct Candidate {
    std::size_t row_id = 0;
    std::vector<std::size_t> neighbor_ids;
    std::vector<double> neighbor_sq_dists;
    double harmonic = 0.0;
    std::optional<double> loss;
    double score = 0.0;  // ranking key: harmonic, or the weighted combination
};

// Synthetic rows ordered ascending by score, ties broken by ascending row id.
struct CandidateRanking {
    std::size_t k = 0;
    std::vector<Candidate> ordered;
};

struct RecoveredSample {
    std::size_t row_id = 0;
    std::vector<std::size_t> neighbor_ids;
    double score = 0.0;
};

struct RecoveredSet {
    std::vector<RecoveredSample> samples;
    std::size_t k = 0;
    double tau = 0.0;
    std::size_t requested = 0;  // ceil(n_train * tau)
    bool exhausted = false;     // ranking ran out before `requested` selections
};

// Score every synthetic row by the harmonic mean of its k neighbor distances
// (self excluded) and sort ascending. Parallel over rows.
CandidateRanking rank_by_density(const EncodedMatrix& matrix, std::size_t k);

struct WeightVector {
    double distance = 1.0;  // weight on the harmonic-mean term
    double loss = 0.0;      // weight on the prediction-loss term
};

// Re-rank candidates by w1 * normalized harmonic mean + w2 * normalized loss.
// Both terms are min-max normalized over the candidate set first.
CandidateRanking weighted_rank(const CandidateRanking& ranking,
                               const std::vector<double>& losses, WeightVector weights);

// Greedy walk down the ranking, skipping rows already seen as neighbors of
// earlier selections; stops after ceil(n_train * tau) picks.
RecoveredSet select_recovered(const CandidateRanking& ranking, std::size_t n_train, double tau);

std::size_t recovery_budget(std::size_t n_train, double tau);

}  // namespace synaudit
