#pragma once

// Independent brute-force oracles the implementation is checked against.
// These deliberately share no code with the library kernels: plain all-pairs
// scans, full sorts, and literal traces of the selection walk.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <set>
#include <vector>

#include "synaudit/nsga2.hpp"
#include "synaudit/tabular.hpp"

namespace synaudit::testing {

struct RefNeighbor {
    std::size_t id;
    double sq_dist;
};

inline std::vector<RefNeighbor> ref_knn(const EncodedMatrix& m, std::span<const double> query,
                                        std::size_t k, std::size_t exclude) {
    std::vector<RefNeighbor> all;
    for (std::size_t i = 0; i < m.rows; ++i) {
        if (i == exclude) continue;
        double d = 0.0;
        for (std::size_t j = 0; j < m.width; ++j) {
            const double t = m.data[i * m.width + j] - query[j];
            d += t * t;
        }
        all.push_back({i, d});
    }
    std::sort(all.begin(), all.end(), [](const RefNeighbor& a, const RefNeighbor& b) {
        if (a.sq_dist != b.sq_dist) return a.sq_dist < b.sq_dist;
        return a.id < b.id;
    });
    all.resize(k);
    return all;
}

inline double ref_harmonic(const std::vector<double>& r) {
    for (double d : r)
        if (d <= 1e-12) return 0.0;
    double s = 0.0;
    for (double d : r) s += 1.0 / d;
    return static_cast<double>(r.size()) / s;
}

struct RefCandidate {
    std::size_t id;
    double score;
    std::vector<std::size_t> neighbor_ids;
};

inline std::vector<RefCandidate> ref_density_ranking(const EncodedMatrix& m, std::size_t k) {
    std::vector<RefCandidate> out;
    for (std::size_t i = 0; i < m.rows; ++i) {
        const auto nbs = ref_knn(m, m.row(i), k, i);
        std::vector<double> dists;
        RefCandidate c;
        c.id = i;
        for (const auto& nb : nbs) {
            dists.push_back(nb.sq_dist);
            c.neighbor_ids.push_back(nb.id);
        }
        c.score = ref_harmonic(dists);
        out.push_back(std::move(c));
    }
    std::stable_sort(out.begin(), out.end(), [](const RefCandidate& a, const RefCandidate& b) {
        if (a.score != b.score) return a.score < b.score;
        return a.id < b.id;
    });
    return out;
}

// Literal trace of the greedy selection walk over a sorted candidate list.
inline std::vector<std::size_t> ref_select(const std::vector<RefCandidate>& ranked,
                                           std::size_t n_recon) {
    std::set<std::size_t> discarded;
    std::vector<std::size_t> selected;
    for (const auto& c : ranked) {
        if (selected.size() == n_recon) break;
        if (discarded.count(c.id)) continue;
        for (std::size_t nb : c.neighbor_ids) discarded.insert(nb);
        selected.push_back(c.id);
    }
    return selected;
}

inline bool ref_dominates(const Objectives& a, const Objectives& b) {
    return (a[0] <= b[0] && a[1] <= b[1]) && (a[0] < b[0] || a[1] < b[1]);
}

// Repeated extraction of the non-dominated subset of what remains.
inline std::vector<std::vector<std::size_t>> ref_fronts(const Population& pop) {
    std::vector<std::size_t> remaining(pop.size());
    std::iota(remaining.begin(), remaining.end(), std::size_t{0});
    std::vector<std::vector<std::size_t>> fronts;
    while (!remaining.empty()) {
        std::vector<std::size_t> front, rest;
        for (std::size_t i : remaining) {
            bool dominated = false;
            for (std::size_t j : remaining) {
                if (i != j && ref_dominates(pop[j].objectives, pop[i].objectives)) {
                    dominated = true;
                    break;
                }
            }
            (dominated ? rest : front).push_back(i);
        }
        fronts.push_back(std::move(front));
        remaining = std::move(rest);
    }
    return fronts;
}

}  // namespace synaudit::testing
