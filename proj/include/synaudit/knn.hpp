#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "synaudit/tabular.hpp"

namespace synaudit {

struct Neighbor {
    std::size_t id = 0;
    double sq_dist = 0.0;
};

// Exact k-nearest-neighbor index over an encoded matrix (squared Euclidean).
// The index never owns the matrix; the matrix must outlive it. Queries are
// brute-force exact: results match a full scan by construction.
class NeighborIndex {
public:
    explicit NeighborIndex(const EncodedMatrix& matrix,
                           std::vector<std::size_t> excluded_ids = {});

    std::size_t size() const { return matrix_->rows; }

    // k nearest rows to `query`, ascending squared distance, ties broken by
    // lower row id. `exclude_self` additionally drops that row id.
    std::vector<Neighbor> query(std::span<const double> query, std::size_t k,
                                std::size_t exclude_self = kNoExclusion) const;

    // k nearest neighbors of every row of the index's own matrix, with each
    // row excluded from its own neighbor list. OpenMP-parallel over rows.
    std::vector<std::vector<Neighbor>> self_neighbors(std::size_t k) const;

    static constexpr std::size_t kNoExclusion = static_cast<std::size_t>(-1);

private:
    const EncodedMatrix* matrix_;
    std::vector<bool> excluded_;
    std::size_t usable_rows_;
};

// Serial reference kernel: full distance scan plus a complete sort. Kept as
// the oracle the parallel index is tested and benchmarked against.
std::vector<Neighbor> knn_scan_serial(const EncodedMatrix& matrix,
                                      std::span<const double> query, std::size_t k,
                                      std::size_t exclude_self = NeighborIndex::kNoExclusion);

}  // namespace synaudit
