#include "synaudit/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "synaudit/errors.hpp"
#include "synaudit/rng.hpp"

namespace synaudit {

namespace {

constexpr double kProbClamp = 1e-12;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

double prediction_loss(double prediction, double y, LossKind kind) {
    if (kind == LossKind::CrossEntropy) {
        const double p = std::clamp(prediction, kProbClamp, 1.0 - kProbClamp);
        return -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
    }
    return std::abs(prediction - y);
}

PredictionOracle PredictionOracle::train_builtin(const EncodedMatrix& matrix,
                                                 const Encoder& encoder,
                                                 const TrainConfig& config) {
    if (matrix.rows < 2) throw DataError("builtin training needs at least 2 samples");
    const bool classification = encoder.schema().target.kind == FeatureKind::Categorical;

    std::vector<double> targets(matrix.rows);
    for (std::size_t i = 0; i < matrix.rows; ++i)
        targets[i] = encoder.target_value(matrix.targets[i]);

    if (classification) {
        if (encoder.schema().target.categories.size() != 2)
            throw DataError("builtin classifier requires a binary target");
        const double first = targets[0];
        if (std::all_of(targets.begin(), targets.end(), [&](double t) { return t == first; }))
            throw DataError(
                "target column has a single class; train on data with both classes "
                "or supply a constant external oracle instead");
    }

    PredictionOracle oracle;
    oracle.builtin_ = true;
    oracle.classification_ = classification;
    oracle.weights_.assign(matrix.width, 0.0);
    oracle.bias_ = 0.0;

    Rng rng(config.seed);
    for (auto& w : oracle.weights_) w = 0.01 * (rng.uniform() - 0.5);

    const double n = static_cast<double>(matrix.rows);
    std::vector<double> grad(matrix.width);
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        std::fill(grad.begin(), grad.end(), 0.0);
        double grad_bias = 0.0;
        double epoch_loss = 0.0;
        for (std::size_t i = 0; i < matrix.rows; ++i) {
            const auto x = matrix.row(i);
            double z = oracle.bias_;
            for (std::size_t j = 0; j < matrix.width; ++j) z += oracle.weights_[j] * x[j];
            const double pred = classification ? sigmoid(z) : z;
            const double err = pred - targets[i];  // gradient of both losses
            for (std::size_t j = 0; j < matrix.width; ++j) grad[j] += err * x[j];
            grad_bias += err;
            epoch_loss += classification
                              ? prediction_loss(pred, targets[i], LossKind::CrossEntropy)
                              : 0.5 * err * err;
        }
        for (std::size_t j = 0; j < matrix.width; ++j) {
            grad[j] = grad[j] / n + config.l2 * oracle.weights_[j];
            oracle.weights_[j] -= config.learning_rate * grad[j];
        }
        oracle.bias_ -= config.learning_rate * grad_bias / n;
        epoch_loss /= n;
        for (double w : oracle.weights_) epoch_loss += 0.5 * config.l2 * w * w;
        oracle.loss_curve_.push_back(epoch_loss);
    }
    return oracle;
}

PredictionOracle PredictionOracle::load_external(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open oracle file '" + path + "'");
    std::unordered_map<std::size_t, double> table;
    std::string line;
    bool first = true;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        std::stringstream ss(line);
        std::string id_field, value_field;
        if (!std::getline(ss, id_field, ',') || !std::getline(ss, value_field)) {
            throw DataError(path + ": line " + std::to_string(line_no) + ": expected 'id,value'");
        }
        if (first) {
            first = false;
            // optional header row
            if (id_field.find_first_not_of("0123456789 \t") != std::string::npos) continue;
        }
        try {
            table[std::stoull(id_field)] = std::stod(value_field);
        } catch (const std::exception&) {
            throw DataError(path + ": line " + std::to_string(line_no) + ": parse error");
        }
    }
    if (table.empty()) throw DataError(path + ": oracle table is empty");
    return from_table(std::move(table), true);
}

PredictionOracle PredictionOracle::from_table(std::unordered_map<std::size_t, double> predictions,
                                              bool classification) {
    PredictionOracle oracle;
    oracle.builtin_ = false;
    oracle.classification_ = classification;
    oracle.table_ = std::move(predictions);
    return oracle;
}

double PredictionOracle::predict(std::span<const double> x) const {
    if (!builtin_) throw DataError("external oracle requires a row id, not a feature vector");
    if (x.size() != weights_.size()) throw DataError("predict: width mismatch");
    double z = bias_;
    for (std::size_t j = 0; j < weights_.size(); ++j) z += weights_[j] * x[j];
    return classification_ ? sigmoid(z) : z;
}

double PredictionOracle::predict_id(std::size_t row_id) const {
    if (builtin_) throw DataError("builtin oracle requires a feature vector, not a row id");
    auto it = table_.find(row_id);
    if (it == table_.end())
        throw DataError("external oracle has no prediction for row " + std::to_string(row_id));
    return it->second;
}

double PredictionOracle::loss_for(std::span<const double> x, double y, LossKind kind) const {
    return prediction_loss(predict(x), y, kind);
}

double PredictionOracle::loss_for_id(std::size_t row_id, double y, LossKind kind) const {
    return prediction_loss(predict_id(row_id), y, kind);
}

}  // namespace synaudit
