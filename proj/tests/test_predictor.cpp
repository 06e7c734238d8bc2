#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>

#include "helpers.hpp"
#include "synaudit/predictor.hpp"
#include "synaudit/rng.hpp"

using namespace synaudit;
using namespace synaudit::testing;

namespace {

// Two clouds around (0.2, 0.2) and (0.8, 0.8), labels 0/1.
struct ToySet {
    Schema schema;
    Table table;
    Encoder encoder;
    EncodedMatrix matrix;
};

ToySet separable_set(std::size_t n, std::uint64_t seed) {
    ToySet toy;
    toy.schema.features = {FeatureSpec{"u", FeatureKind::Continuous, {}, 0, 0},
                           FeatureSpec{"v", FeatureKind::Continuous, {}, 0, 0}};
    toy.schema.target = FeatureSpec{"label", FeatureKind::Categorical, {"neg", "pos"}, 0, 0};
    toy.table.schema = &toy.schema;
    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const bool positive = i % 2 == 0;
        const double base = positive ? 0.8 : 0.2;
        Row row;
        row.values = {Cell{base + 0.1 * (rng.uniform() - 0.5)},
                      Cell{base + 0.1 * (rng.uniform() - 0.5)}};
        row.target = Cell{std::size_t{positive ? 1u : 0u}};
        toy.table.rows.push_back(std::move(row));
    }
    toy.encoder = Encoder::fit(toy.table);
    toy.matrix = encode_table(toy.encoder, toy.table);
    return toy;
}

}  // namespace

TEST_CASE("prediction losses") {
    CHECK(prediction_loss(1.0 - 1e-12, 1.0, LossKind::CrossEntropy) ==
          doctest::Approx(0.0).epsilon(1e-9));
    CHECK(prediction_loss(0.5, 1.0, LossKind::CrossEntropy) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(prediction_loss(3.0, 5.0, LossKind::Rmse) == 2.0);
    // clamp keeps the loss finite at the boundary
    CHECK(std::isfinite(prediction_loss(0.0, 1.0, LossKind::CrossEntropy)));
    CHECK(std::isfinite(prediction_loss(1.0, 0.0, LossKind::CrossEntropy)));
}

TEST_CASE("cross-entropy is strictly decreasing in p for y=1") {
    double prev = prediction_loss(0.05, 1.0, LossKind::CrossEntropy);
    for (double p = 0.1; p < 1.0; p += 0.05) {
        const double cur = prediction_loss(p, 1.0, LossKind::CrossEntropy);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("builtin training") {
    SUBCASE("separable set reaches training accuracy 1.0") {
        const ToySet toy = separable_set(60, 5);
        TrainConfig config;
        config.epochs = 500;
        config.learning_rate = 1.0;
        const auto oracle = PredictionOracle::train_builtin(toy.matrix, toy.encoder, config);
        std::size_t correct = 0;
        for (std::size_t i = 0; i < toy.matrix.rows; ++i) {
            const double p = oracle.predict(toy.matrix.row(i));
            const double y = toy.encoder.target_value(toy.matrix.targets[i]);
            if ((p >= 0.5) == (y >= 0.5)) ++correct;
        }
        CHECK(correct == toy.matrix.rows);
    }
    SUBCASE("training loss is non-increasing") {
        const ToySet toy = separable_set(40, 6);
        TrainConfig config;
        config.epochs = 200;
        const auto oracle = PredictionOracle::train_builtin(toy.matrix, toy.encoder, config);
        const auto& curve = oracle.training_loss_curve();
        for (std::size_t e = 1; e < curve.size(); ++e) CHECK(curve[e] <= curve[e - 1] + 1e-9);
    }
    SUBCASE("fixed seed gives identical weights") {
        const ToySet toy = separable_set(40, 6);
        TrainConfig config;
        config.epochs = 50;
        config.seed = 99;
        const auto a = PredictionOracle::train_builtin(toy.matrix, toy.encoder, config);
        const auto b = PredictionOracle::train_builtin(toy.matrix, toy.encoder, config);
        CHECK(a.weights() == b.weights());
        CHECK(a.bias() == b.bias());
    }
    SUBCASE("single-class target rejected") {
        ToySet toy = separable_set(20, 7);
        for (auto& cell : toy.matrix.targets) cell = Cell{std::size_t{1}};
        CHECK_THROWS_WITH_AS(
            PredictionOracle::train_builtin(toy.matrix, toy.encoder, TrainConfig{}),
            doctest::Contains("single class"), DataError);
    }
}

TEST_CASE("training gradient matches finite differences") {
    // check d(loss)/dw via central differences at random weight points
    const ToySet toy = separable_set(30, 8);
    Rng rng(12);
    const double h = 1e-6;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> w(toy.matrix.width);
        for (auto& x : w) x = 2.0 * rng.uniform() - 1.0;
        const double bias = 2.0 * rng.uniform() - 1.0;

        auto loss_at = [&](const std::vector<double>& weights) {
            double total = 0.0;
            for (std::size_t i = 0; i < toy.matrix.rows; ++i) {
                const auto x = toy.matrix.row(i);
                double z = bias;
                for (std::size_t j = 0; j < x.size(); ++j) z += weights[j] * x[j];
                const double p = 1.0 / (1.0 + std::exp(-z));
                const double y = toy.encoder.target_value(toy.matrix.targets[i]);
                total += prediction_loss(p, y, LossKind::CrossEntropy);
            }
            return total / static_cast<double>(toy.matrix.rows);
        };
        // analytic gradient of mean BCE: (1/n) sum (p - y) x
        std::vector<double> grad(toy.matrix.width, 0.0);
        for (std::size_t i = 0; i < toy.matrix.rows; ++i) {
            const auto x = toy.matrix.row(i);
            double z = bias;
            for (std::size_t j = 0; j < x.size(); ++j) z += w[j] * x[j];
            const double p = 1.0 / (1.0 + std::exp(-z));
            const double y = toy.encoder.target_value(toy.matrix.targets[i]);
            for (std::size_t j = 0; j < x.size(); ++j) grad[j] += (p - y) * x[j];
        }
        for (auto& g : grad) g /= static_cast<double>(toy.matrix.rows);

        for (std::size_t j = 0; j < w.size(); ++j) {
            auto wp = w, wm = w;
            wp[j] += h;
            wm[j] -= h;
            const double numeric = (loss_at(wp) - loss_at(wm)) / (2.0 * h);
            CHECK(grad[j] == doctest::Approx(numeric).epsilon(1e-5));
        }
    }
}

TEST_CASE("external oracle") {
    SUBCASE("lookup and purity") {
        auto oracle = PredictionOracle::from_table({{7, 0.83}}, true);
        CHECK(oracle.predict_id(7) == 0.83);
        CHECK(oracle.predict_id(7) == 0.83);
        CHECK_THROWS_AS(oracle.predict_id(3), DataError);
    }
    SUBCASE("file loading") {
        const std::string path = "oracle_test.csv";
        {
            std::ofstream out(path);
            out << "row_id,prediction\n0,0.25\n1,0.75\n";
        }
        const auto oracle = PredictionOracle::load_external(path);
        CHECK(oracle.predict_id(0) == 0.25);
        CHECK(oracle.predict_id(1) == 0.75);
        std::remove(path.c_str());
    }
}

TEST_CASE("zero-weight model predicts 0.5") {
    auto toy = separable_set(10, 9);
    TrainConfig config;
    config.epochs = 0;  // no updates, weights stay at the tiny init
    const auto oracle = PredictionOracle::train_builtin(toy.matrix, toy.encoder, config);
    for (std::size_t i = 0; i < toy.matrix.rows; ++i)
        CHECK(oracle.predict(toy.matrix.row(i)) == doctest::Approx(0.5).epsilon(0.05));
}
