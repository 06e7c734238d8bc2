#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "synaudit/tabular.hpp"

namespace synaudit {

enum class LossKind { CrossEntropy, Rmse };

struct TrainConfig {
    double learning_rate = 0.1;
    std::size_t epochs = 500;
    double l2 = 1e-4;
    std::uint64_t seed = 0;
};

// Prediction oracle backing the f2 objective and the weighted re-ranking:
// either a linear model trained here (logistic for binary targets, least
// squares for continuous ones) or a file-backed id -> prediction table that
// stands in for a black-box model API.
class PredictionOracle {
public:
    // Gradient-descent training on the encoded features. Deterministic for a
    // fixed seed.
    static PredictionOracle train_builtin(const EncodedMatrix& matrix, const Encoder& encoder,
                                          const TrainConfig& config);

    // Two-column CSV: row_id,prediction.
    static PredictionOracle load_external(const std::string& path);
    static PredictionOracle from_table(std::unordered_map<std::size_t, double> predictions,
                                       bool classification);

    bool is_builtin() const { return builtin_; }
    bool classification() const { return classification_; }

    // Builtin oracle: prediction for an encoded row. Classification returns
    // the positive-class probability in (0, 1).
    double predict(std::span<const double> x) const;
    // External oracle: prediction recorded for a row id.
    double predict_id(std::size_t row_id) const;

    double loss_for(std::span<const double> x, double y, LossKind kind) const;
    double loss_for_id(std::size_t row_id, double y, LossKind kind) const;

    const std::vector<double>& weights() const { return weights_; }
    double bias() const { return bias_; }
    const std::vector<double>& training_loss_curve() const { return loss_curve_; }

private:
    bool builtin_ = true;
    bool classification_ = true;
    std::vector<double> weights_;
    double bias_ = 0.0;
    std::unordered_map<std::size_t, double> table_;
    std::vector<double> loss_curve_;
};

// Per-sample loss between a prediction and a target. Cross-entropy clamps the
// probability to [1e-12, 1 - 1e-12]; single-sample RMSE reduces to |yhat - y|.
double prediction_loss(double prediction, double y, LossKind kind);

}  // namespace synaudit
