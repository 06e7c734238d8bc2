#include "synaudit/baselines.hpp"

#include <algorithm>
#include <numeric>

#include "synaudit/errors.hpp"
#include "synaudit/rng.hpp"

namespace synaudit {

RecoveredSet ganleaks_rank(const EncodedMatrix& matrix, std::size_t n_train, double tau) {
    if (matrix.rows < 2) throw DataError("ganleaks_rank needs at least 2 rows");
    // harmonic mean of a single distance is that distance, so the k=1 density
    // ranking gives exactly the 1-nearest-neighbor ordering
    const CandidateRanking ranking = rank_by_density(matrix, 1);
    RecoveredSet result;
    result.k = 1;
    result.tau = tau;
    result.requested = recovery_budget(n_train, tau);
    for (const auto& c : ranking.ordered) {
        if (result.samples.size() == result.requested) break;
        result.samples.push_back({c.row_id, c.neighbor_ids, c.score});
    }
    result.exhausted = result.samples.size() < result.requested;
    return result;
}

RecoveredSet random_select(std::size_t num_rows, std::size_t n_train, double tau,
                           std::uint64_t seed) {
    RecoveredSet result;
    result.k = 0;
    result.tau = tau;
    result.requested = recovery_budget(n_train, tau);
    if (result.requested > num_rows)
        throw DataError("random_select: request exceeds available rows");

    // partial Fisher-Yates
    Rng rng(seed);
    std::vector<std::size_t> ids(num_rows);
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    for (std::size_t i = 0; i < result.requested; ++i) {
        const std::size_t j = i + rng.uniform_int(num_rows - i);
        std::swap(ids[i], ids[j]);
        result.samples.push_back({ids[i], {}, 0.0});
    }
    return result;
}

}  // namespace synaudit
