#pragma once

// Shared fixtures for the test suites: small schemas, deterministic random
// tables, and the planted-memorization benchmark used by the acceptance runs.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "synaudit/provider.hpp"
#include "synaudit/rng.hpp"
#include "synaudit/tabular.hpp"

namespace synaudit::testing {

// 4 continuous + 3 categorical features, binary target.
inline Schema mixed_schema() {
    Schema schema;
    for (int i = 0; i < 4; ++i) {
        FeatureSpec f;
        f.name = "c" + std::to_string(i);
        f.kind = FeatureKind::Continuous;
        schema.features.push_back(f);
    }
    const std::vector<std::vector<std::string>> cats = {
        {"a", "b", "c"}, {"x", "y"}, {"p", "q", "r", "s"}};
    for (int i = 0; i < 3; ++i) {
        FeatureSpec f;
        f.name = "g" + std::to_string(i);
        f.kind = FeatureKind::Categorical;
        f.categories = cats[i];
        schema.features.push_back(f);
    }
    schema.target.name = "label";
    schema.target.kind = FeatureKind::Categorical;
    schema.target.categories = {"neg", "pos"};
    return schema;
}

inline Table random_mixed_table(const Schema& schema, std::size_t n, Rng& rng) {
    Table table;
    table.schema = &schema;
    for (std::size_t i = 0; i < n; ++i) {
        Row row;
        for (const auto& spec : schema.features) {
            if (spec.kind == FeatureKind::Continuous)
                row.values.emplace_back(rng.uniform());
            else
                row.values.emplace_back(rng.uniform_int(spec.categories.size()));
        }
        row.target = Cell{rng.uniform_int(2)};
        table.rows.push_back(std::move(row));
    }
    return table;
}

// Purely continuous matrix with uniform entries in [0,1).
inline EncodedMatrix random_matrix(std::size_t rows, std::size_t width, Rng& rng) {
    EncodedMatrix m;
    m.rows = rows;
    m.width = width;
    m.data.resize(rows * width);
    for (auto& v : m.data) v = rng.uniform();
    m.targets.assign(rows, Cell{std::size_t{0}});
    return m;
}

struct PlantedBenchmark {
    Table train;
    Table synthetic;
    std::vector<std::size_t> planted_train_ids;  // the memorized training rows
};

// Training set of `n_train` mixed rows; the synthetic set contains
// `n_planted` training rows each spawning `replicas` near-duplicates
// (continuous noise sigma in encoded space, categoricals copied), padded to
// `n_train` rows with independent copula samples.
inline PlantedBenchmark make_planted_benchmark(const Schema& schema, std::size_t n_train,
                                               std::size_t n_planted, std::size_t replicas,
                                               double sigma, std::uint64_t seed) {
    Rng rng(seed);
    PlantedBenchmark bench;
    bench.train = random_mixed_table(schema, n_train, rng);

    for (std::size_t i = 0; i < n_planted; ++i)
        bench.planted_train_ids.push_back(rng.uniform_int(n_train));
    std::sort(bench.planted_train_ids.begin(), bench.planted_train_ids.end());
    bench.planted_train_ids.erase(
        std::unique(bench.planted_train_ids.begin(), bench.planted_train_ids.end()),
        bench.planted_train_ids.end());
    while (bench.planted_train_ids.size() < n_planted) {
        const std::size_t id = rng.uniform_int(n_train);
        if (!std::binary_search(bench.planted_train_ids.begin(), bench.planted_train_ids.end(), id))
            bench.planted_train_ids.insert(
                std::upper_bound(bench.planted_train_ids.begin(), bench.planted_train_ids.end(), id),
                id);
    }

    bench.synthetic.schema = &schema;
    const Encoder encoder = Encoder::fit(bench.train);
    for (std::size_t id : bench.planted_train_ids) {
        for (std::size_t r = 0; r < replicas; ++r) {
            Row row = bench.train.rows[id];
            for (std::size_t f = 0; f < schema.features.size(); ++f) {
                if (schema.features[f].kind != FeatureKind::Continuous) continue;
                const auto& spec = encoder.fitted_features()[f];
                const double scale = spec.hi > spec.lo ? spec.hi - spec.lo : 1.0;
                double v = std::get<double>(row.values[f]) + sigma * scale * rng.normal();
                v = std::clamp(v, spec.lo, spec.hi);
                row.values[f] = v;
            }
            bench.synthetic.rows.push_back(std::move(row));
        }
    }
    const std::size_t noise_rows = n_train - bench.synthetic.rows.size();
    const CopulaModel copula = CopulaModel::fit(bench.train);
    Table noise = copula.sample(noise_rows, rng.next_u64());
    for (auto& row : noise.rows) bench.synthetic.rows.push_back(std::move(row));
    return bench;
}

}  // namespace synaudit::testing
