#include "synaudit/selection.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "synaudit/errors.hpp"

namespace synaudit {

double harmonic_mean(const std::vector<double>& distances) {
    if (distances.empty()) throw DataError("harmonic_mean of an empty list");
    double inv_sum = 0.0;
    for (double d : distances) {
        if (d <= kZeroDistanceTolerance) return 0.0;
        inv_sum += 1.0 / d;
    }
    return static_cast<double>(distances.size()) / inv_sum;
}

namespace {

void sort_by_score(std::vector<Candidate>& candidates) {
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.score != b.score) return a.score < b.score;
        return a.row_id < b.row_id;
    });
}

}  // namespace

CandidateRanking rank_by_density(const EncodedMatrix& matrix, std::size_t k) {
    if (k == 0 || k >= matrix.rows)
        throw DataError("rank_by_density: need 0 < k < n, got k=" + std::to_string(k) +
                        ", n=" + std::to_string(matrix.rows));
    NeighborIndex index(matrix);
    const auto neighbors = index.self_neighbors(k);

    CandidateRanking ranking;
    ranking.k = k;
    ranking.ordered.resize(matrix.rows);
    for (std::size_t i = 0; i < matrix.rows; ++i) {
        Candidate& c = ranking.ordered[i];
        c.row_id = i;
        c.neighbor_ids.reserve(k);
        c.neighbor_sq_dists.reserve(k);
        for (const auto& nb : neighbors[i]) {
            c.neighbor_ids.push_back(nb.id);
            c.neighbor_sq_dists.push_back(nb.sq_dist);
        }
        c.harmonic = harmonic_mean(c.neighbor_sq_dists);
        c.score = c.harmonic;
    }
    sort_by_score(ranking.ordered);
    return ranking;
}

CandidateRanking weighted_rank(const CandidateRanking& ranking, const std::vector<double>& losses,
                               WeightVector weights) {
    if (losses.size() != ranking.ordered.size())
        throw DataError("weighted_rank: loss column length mismatch");
    if (weights.distance < 0.0 || weights.loss < 0.0 ||
        std::abs(weights.distance + weights.loss - 1.0) > 1e-9)
        throw DataError("weighted_rank: weights must be non-negative and sum to 1");

    // losses arrive indexed by row id; candidates are already sorted
    auto min_max = [](const std::vector<double>& v) {
        auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        return std::pair<double, double>{*lo, *hi};
    };
    std::vector<double> harmonics;
    harmonics.reserve(ranking.ordered.size());
    for (const auto& c : ranking.ordered) harmonics.push_back(c.harmonic);
    const auto [h_lo, h_hi] = min_max(harmonics);
    const auto [l_lo, l_hi] = min_max(losses);
    auto normalize = [](double v, double lo, double hi) {
        return hi > lo ? (v - lo) / (hi - lo) : 0.0;
    };

    CandidateRanking out;
    out.k = ranking.k;
    out.ordered = ranking.ordered;
    for (auto& c : out.ordered) {
        const double loss = losses[c.row_id];
        c.loss = loss;
        c.score = weights.distance * normalize(c.harmonic, h_lo, h_hi) +
                  weights.loss * normalize(loss, l_lo, l_hi);
    }
    sort_by_score(out.ordered);
    return out;
}

std::size_t recovery_budget(std::size_t n_train, double tau) {
    if (tau <= 0.0 || tau > 1.0) throw DataError("tau must be in (0, 1]");
    return static_cast<std::size_t>(std::ceil(static_cast<double>(n_train) * tau));
}

RecoveredSet select_recovered(const CandidateRanking& ranking, std::size_t n_train, double tau) {
    RecoveredSet result;
    result.k = ranking.k;
    result.tau = tau;
    result.requested = recovery_budget(n_train, tau);

    std::unordered_set<std::size_t> discarded;
    for (const auto& c : ranking.ordered) {
        if (result.samples.size() == result.requested) break;
        if (discarded.count(c.row_id)) continue;
        discarded.insert(c.neighbor_ids.begin(), c.neighbor_ids.end());
        result.samples.push_back({c.row_id, c.neighbor_ids, c.score});
    }
    result.exhausted = result.samples.size() < result.requested;
    return result;
}

}  // namespace synaudit
