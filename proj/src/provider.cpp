#include "synaudit/provider.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

#include <Eigen/Dense>

#include "synaudit/errors.hpp"
#include "synaudit/rng.hpp"

namespace synaudit {

AttackLevel parse_attack_level(const std::string& text) {
    if (text == "1" || text == "level-1") return AttackLevel::Level1;
    if (text == "2" || text == "level-2") return AttackLevel::Level2;
    if (text == "3" || text == "level-3") return AttackLevel::Level3;
    throw ConfigError("unknown attack level '" + text + "' (expected level-1/level-2/level-3)");
}

std::string attack_level_name(AttackLevel level) {
    switch (level) {
        case AttackLevel::Level1: return "level-1";
        case AttackLevel::Level2: return "level-2";
        case AttackLevel::Level3: return "level-3";
    }
    throw InternalError("unreachable attack level");
}

namespace {

constexpr double kEigenvalueFloor = 1e-10;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Average ranks in [0, n-1], ties averaged.
std::vector<double> average_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j));
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
        i = j + 1;
    }
    return ranks;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    const auto ra = average_ranks(a);
    const auto rb = average_ranks(b);
    const std::size_t n = ra.size();
    double mean = (static_cast<double>(n) - 1.0) / 2.0;
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = ra[i] - mean;
        const double db = rb[i] - mean;
        cov += da * db;
        va += da * da;
        vb += db * db;
    }
    if (va <= 0.0 || vb <= 0.0) return 0.0;  // constant column
    return cov / std::sqrt(va * vb);
}

// Numeric score of one cell for rank correlation; categorical cells map to the
// cumulative-frequency midpoint of their category.
std::vector<double> latent_scores(const Table& table, std::size_t col,
                                  const std::vector<std::vector<double>>& frequencies) {
    const std::size_t num_features = table.schema->features.size();
    const bool is_target = col == num_features;
    const FeatureSpec& spec = is_target ? table.schema->target : table.schema->features[col];
    std::vector<double> scores;
    scores.reserve(table.rows.size());
    std::vector<double> midpoints;
    if (spec.kind == FeatureKind::Categorical) {
        double cum = 0.0;
        for (double f : frequencies[col]) {
            midpoints.push_back(cum + 0.5 * f);
            cum += f;
        }
    }
    for (const auto& row : table.rows) {
        const Cell& cell = is_target ? row.target : row.values[col];
        if (spec.kind == FeatureKind::Continuous) {
            scores.push_back(std::get<double>(cell));
        } else {
            scores.push_back(midpoints[std::get<std::size_t>(cell)]);
        }
    }
    return scores;
}

}  // namespace

const std::vector<double>& CopulaModel::category_frequencies(std::size_t col) const {
    if (col >= num_cols_ || frequencies_[col].empty())
        throw DataError("column has no category frequencies");
    return frequencies_[col];
}

CopulaModel CopulaModel::fit(const Table& table) {
    if (table.rows.size() < 10) throw DataError("copula fitting needs at least 10 rows");
    CopulaModel model;
    model.schema_ = table.schema;
    const std::size_t num_features = table.schema->features.size();
    model.num_cols_ = num_features + 1;  // target is the last column
    model.sorted_values_.resize(model.num_cols_);
    model.frequencies_.resize(model.num_cols_);

    const double n = static_cast<double>(table.rows.size());
    for (std::size_t col = 0; col < model.num_cols_; ++col) {
        const bool is_target = col == num_features;
        const FeatureSpec& spec = is_target ? table.schema->target : table.schema->features[col];
        if (spec.kind == FeatureKind::Continuous) {
            auto& vals = model.sorted_values_[col];
            vals.reserve(table.rows.size());
            for (const auto& row : table.rows)
                vals.push_back(std::get<double>(is_target ? row.target : row.values[col]));
            std::sort(vals.begin(), vals.end());
        } else {
            auto& freq = model.frequencies_[col];
            freq.assign(spec.categories.size(), 0.0);
            for (const auto& row : table.rows)
                freq[std::get<std::size_t>(is_target ? row.target : row.values[col])] += 1.0;
            for (auto& f : freq) f /= n;
        }
    }

    // latent correlation from rank correlations
    std::vector<std::vector<double>> scores(model.num_cols_);
    for (std::size_t col = 0; col < model.num_cols_; ++col)
        scores[col] = latent_scores(table, col, model.frequencies_);
    const auto d = static_cast<Eigen::Index>(model.num_cols_);
    Eigen::MatrixXd corr = Eigen::MatrixXd::Identity(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = i + 1; j < d; ++j) {
            const double rho_s = spearman(scores[i], scores[j]);
            const double rho = 2.0 * std::sin(M_PI * rho_s / 6.0);
            corr(i, j) = rho;
            corr(j, i) = rho;
        }
    }

    // PSD projection by eigenvalue clipping, diagonal rescaled back to 1
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(corr);
    Eigen::VectorXd lambda = eig.eigenvalues().cwiseMax(kEigenvalueFloor);
    Eigen::MatrixXd projected = eig.eigenvectors() * lambda.asDiagonal() *
                                eig.eigenvectors().transpose();
    Eigen::VectorXd scale = projected.diagonal().cwiseSqrt().cwiseInverse();
    projected = scale.asDiagonal() * projected * scale.asDiagonal();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig2(projected);
    Eigen::MatrixXd transform = eig2.eigenvectors() *
                                eig2.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();

    model.correlation_.assign(model.num_cols_, std::vector<double>(model.num_cols_));
    model.transform_.assign(model.num_cols_, std::vector<double>(model.num_cols_));
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            model.correlation_[i][j] = projected(i, j);
            model.transform_[i][j] = transform(i, j);
        }
    }
    return model;
}

Table CopulaModel::sample(std::size_t n, std::uint64_t seed) const {
    if (n == 0) throw DataError("copula sample count must be positive");
    Rng rng(seed);
    Table table;
    table.schema = schema_;
    table.rows.reserve(n);
    const std::size_t num_features = schema_->features.size();
    std::vector<double> eps(num_cols_);
    for (std::size_t s = 0; s < n; ++s) {
        for (auto& e : eps) e = rng.normal();
        Row row;
        row.values.reserve(num_features);
        for (std::size_t col = 0; col < num_cols_; ++col) {
            double z = 0.0;
            for (std::size_t j = 0; j < num_cols_; ++j) z += transform_[col][j] * eps[j];
            const double u = normal_cdf(z);
            const bool is_target = col == num_features;
            const FeatureSpec& spec = is_target ? schema_->target : schema_->features[col];
            Cell cell;
            if (spec.kind == FeatureKind::Continuous) {
                // inverse empirical CDF with linear interpolation
                const auto& vals = sorted_values_[col];
                const double pos = u * (static_cast<double>(vals.size()) - 1.0);
                const auto lo = static_cast<std::size_t>(std::floor(pos));
                const std::size_t hi = std::min(lo + 1, vals.size() - 1);
                const double frac = pos - static_cast<double>(lo);
                cell = vals[lo] + frac * (vals[hi] - vals[lo]);
            } else {
                const auto& freq = frequencies_[col];
                double cum = 0.0;
                std::size_t choice = freq.size() - 1;
                for (std::size_t c = 0; c < freq.size(); ++c) {
                    cum += freq[c];
                    if (u <= cum) {
                        choice = c;
                        break;
                    }
                }
                cell = choice;
            }
            if (is_target)
                row.target = cell;
            else
                row.values.push_back(cell);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

Table scenario_dataset(AttackLevel level, const Table& synthetic,
                       const std::optional<std::string>& external_path, std::size_t multiplier,
                       std::uint64_t seed) {
    switch (level) {
        case AttackLevel::Level1:
            return synthetic;
        case AttackLevel::Level2: {
            const auto model = CopulaModel::fit(synthetic);
            return model.sample(multiplier * synthetic.size(), seed);
        }
        case AttackLevel::Level3: {
            if (!external_path)
                throw ConfigError("level-3 attack requires an external sample file");
            Table external = load_table(*external_path, *synthetic.schema);
            const std::size_t expected = multiplier * synthetic.size();
            if (external.size() != expected) {
                std::cerr << "warning: external table has " << external.size()
                          << " rows, expected " << expected << "\n";
            }
            return external;
        }
    }
    throw InternalError("unreachable attack level");
}

}  // namespace synaudit
