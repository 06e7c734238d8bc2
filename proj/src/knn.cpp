#include "synaudit/knn.hpp"

#include <algorithm>

#include "synaudit/errors.hpp"

namespace synaudit {

namespace {

bool neighbor_less(const Neighbor& a, const Neighbor& b) {
    if (a.sq_dist != b.sq_dist) return a.sq_dist < b.sq_dist;
    return a.id < b.id;
}

}  // namespace

NeighborIndex::NeighborIndex(const EncodedMatrix& matrix, std::vector<std::size_t> excluded_ids)
    : matrix_(&matrix), excluded_(matrix.rows, false), usable_rows_(matrix.rows) {
    if (matrix.rows == 0) throw DataError("cannot build a neighbor index on an empty matrix");
    for (std::size_t id : excluded_ids) {
        if (id >= matrix.rows) throw DataError("excluded id out of range");
        if (!excluded_[id]) {
            excluded_[id] = true;
            --usable_rows_;
        }
    }
}

std::vector<Neighbor> NeighborIndex::query(std::span<const double> query, std::size_t k,
                                           std::size_t exclude_self) const {
    std::size_t available = usable_rows_;
    if (exclude_self != kNoExclusion && exclude_self < matrix_->rows && !excluded_[exclude_self])
        --available;
    if (k == 0 || k > available)
        throw DataError("knn query: k=" + std::to_string(k) + " but only " +
                        std::to_string(available) + " rows available");

    // bounded max-heap of the k best seen so far
    std::vector<Neighbor> heap;
    heap.reserve(k + 1);
    for (std::size_t i = 0; i < matrix_->rows; ++i) {
        if (excluded_[i] || i == exclude_self) continue;
        const double d = sq_distance(matrix_->row(i), query);
        Neighbor cand{i, d};
        if (heap.size() < k) {
            heap.push_back(cand);
            std::push_heap(heap.begin(), heap.end(), neighbor_less);
        } else if (neighbor_less(cand, heap.front())) {
            std::pop_heap(heap.begin(), heap.end(), neighbor_less);
            heap.back() = cand;
            std::push_heap(heap.begin(), heap.end(), neighbor_less);
        }
    }
    std::sort_heap(heap.begin(), heap.end(), neighbor_less);
    return heap;
}

std::vector<std::vector<Neighbor>> NeighborIndex::self_neighbors(std::size_t k) const {
    const std::size_t n = matrix_->rows;
    std::vector<std::vector<Neighbor>> result(n);
#pragma omp parallel for schedule(dynamic, 16)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        const auto idx = static_cast<std::size_t>(i);
        if (excluded_[idx]) continue;
        result[idx] = query(matrix_->row(idx), k, idx);
    }
    return result;
}

std::vector<Neighbor> knn_scan_serial(const EncodedMatrix& matrix, std::span<const double> query,
                                      std::size_t k, std::size_t exclude_self) {
    std::vector<Neighbor> all;
    all.reserve(matrix.rows);
    for (std::size_t i = 0; i < matrix.rows; ++i) {
        if (i == exclude_self) continue;
        all.push_back({i, sq_distance(matrix.row(i), query)});
    }
    if (k > all.size()) throw DataError("knn_scan_serial: k exceeds available rows");
    std::sort(all.begin(), all.end(), neighbor_less);
    all.resize(k);
    return all;
}

}  // namespace synaudit
