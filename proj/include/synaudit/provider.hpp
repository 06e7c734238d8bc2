#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "synaudit/tabular.hpp"

namespace synaudit {

enum class AttackLevel { Level1, Level2, Level3 };

AttackLevel parse_attack_level(const std::string& text);
std::string attack_level_name(AttackLevel level);

// Gaussian copula over all columns of a table (features plus target):
// empirical marginals coupled through a latent normal with a rank-correlation
// matrix projected to PSD. Desk-scale stand-in for retraining a tabular GAN.
class CopulaModel {
public:
    static CopulaModel fit(const Table& table);

    Table sample(std::size_t n, std::uint64_t seed) const;

    const std::vector<std::vector<double>>& latent_correlation() const { return correlation_; }
    // Frequencies of column `col` (features in schema order, target last).
    const std::vector<double>& category_frequencies(std::size_t col) const;

private:
    const Schema* schema_ = nullptr;
    // one entry per column; continuous columns keep sorted values, categorical
    // columns keep per-category frequencies
    std::vector<std::vector<double>> sorted_values_;
    std::vector<std::vector<double>> frequencies_;
    std::vector<std::vector<double>> correlation_;  // after PSD projection
    std::vector<std::vector<double>> transform_;    // V * sqrt(clipped eigenvalues)
    std::size_t num_cols_ = 0;
};

// Scenario plumbing for the three access levels: level 1 passes the synthetic
// table through, level 2 fits the copula and oversamples, level 3 loads an
// externally generated table.
Table scenario_dataset(AttackLevel level, const Table& synthetic,
                       const std::optional<std::string>& external_path, std::size_t multiplier,
                       std::uint64_t seed);

}  // namespace synaudit
