#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "synaudit/provider.hpp"

using namespace synaudit;
using namespace synaudit::testing;

namespace {

// Two-sample Kolmogorov-Smirnov distance between empirical CDFs.
double ks_distance(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        const double fa = static_cast<double>(i) / static_cast<double>(a.size());
        const double fb = static_cast<double>(j) / static_cast<double>(b.size());
        d = std::max(d, std::abs(fa - fb));
    }
    return d;
}

std::vector<double> continuous_column(const Table& table, std::size_t f) {
    std::vector<double> out;
    for (const auto& row : table.rows) out.push_back(std::get<double>(row.values[f]));
    return out;
}

}  // namespace

TEST_CASE("attack level parsing") {
    CHECK(parse_attack_level("level-1") == AttackLevel::Level1);
    CHECK(parse_attack_level("2") == AttackLevel::Level2);
    CHECK_THROWS_AS(parse_attack_level("level-9"), ConfigError);
}

TEST_CASE("copula fitting") {
    const Schema schema = mixed_schema();
    Rng rng(100);

    SUBCASE("too few rows rejected") {
        const Table tiny = random_mixed_table(schema, 5, rng);
        CHECK_THROWS_AS(CopulaModel::fit(tiny), DataError);
    }
    SUBCASE("categorical frequencies are counted") {
        Table table = random_mixed_table(schema, 100, rng);
        // force feature g1 (index 5, categories {x,y}) to 30/70
        for (std::size_t i = 0; i < 100; ++i)
            table.rows[i].values[5] = Cell{std::size_t{i < 30 ? 0u : 1u}};
        const auto model = CopulaModel::fit(table);
        const auto& freq = model.category_frequencies(5);
        CHECK(freq[0] == doctest::Approx(0.3));
        CHECK(freq[1] == doctest::Approx(0.7));
    }
    SUBCASE("independent features have near-zero latent correlation") {
        const Table table = random_mixed_table(schema, 5000, rng);
        const auto model = CopulaModel::fit(table);
        // features c0 and c1 were drawn independently
        CHECK(std::abs(model.latent_correlation()[0][1]) < 0.1);
    }
    SUBCASE("duplicated feature has correlation near 1") {
        Table table = random_mixed_table(schema, 1000, rng);
        for (auto& row : table.rows) row.values[1] = row.values[0];
        const auto model = CopulaModel::fit(table);
        CHECK(model.latent_correlation()[0][1] >= 0.99);
    }
    SUBCASE("correlation matrix is symmetric with unit diagonal") {
        const Table table = random_mixed_table(schema, 200, rng);
        const auto model = CopulaModel::fit(table);
        const auto& c = model.latent_correlation();
        for (std::size_t i = 0; i < c.size(); ++i) {
            CHECK(c[i][i] == doctest::Approx(1.0));
            for (std::size_t j = 0; j < c.size(); ++j)
                CHECK(c[i][j] == doctest::Approx(c[j][i]));
        }
    }
}

TEST_CASE("copula sampling") {
    const Schema schema = mixed_schema();
    Rng rng(101);
    const Table table = random_mixed_table(schema, 800, rng);
    const auto model = CopulaModel::fit(table);

    SUBCASE("deterministic per seed") {
        const Table a = model.sample(50, 7);
        const Table b = model.sample(50, 7);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a.rows[i].values == b.rows[i].values);
            CHECK(a.rows[i].target == b.rows[i].target);
        }
    }
    SUBCASE("zero samples rejected") { CHECK_THROWS_AS(model.sample(0, 1), DataError); }
    SUBCASE("continuous samples stay within the fitted range") {
        const auto fitted = continuous_column(table, 0);
        const auto [lo, hi] = std::minmax_element(fitted.begin(), fitted.end());
        const Table sampled = model.sample(2000, 8);
        for (const auto& row : sampled.rows) {
            const double v = std::get<double>(row.values[0]);
            CHECK(v >= *lo);
            CHECK(v <= *hi);
        }
    }
    SUBCASE("marginal fidelity: KS distance and category frequencies") {
        const Table sampled = model.sample(10000, 9);
        for (std::size_t f = 0; f < 4; ++f) {
            CHECK(ks_distance(continuous_column(table, f), continuous_column(sampled, f)) <= 0.05);
        }
        for (std::size_t f = 4; f < 7; ++f) {
            const auto& freq = model.category_frequencies(f);
            std::vector<double> observed(freq.size(), 0.0);
            for (const auto& row : sampled.rows)
                observed[std::get<std::size_t>(row.values[f])] += 1.0;
            for (auto& o : observed) o /= static_cast<double>(sampled.size());
            for (std::size_t c = 0; c < freq.size(); ++c)
                CHECK(std::abs(observed[c] - freq[c]) <= 0.02);
        }
    }
}

TEST_CASE("scenario datasets") {
    const Schema schema = mixed_schema();
    Rng rng(102);
    const Table synthetic = random_mixed_table(schema, 120, rng);

    SUBCASE("level 1 is a pure pass-through") {
        const Table out = scenario_dataset(AttackLevel::Level1, synthetic, {}, 10, 1);
        REQUIRE(out.size() == synthetic.size());
        for (std::size_t i = 0; i < out.size(); ++i)
            CHECK(out.rows[i].values == synthetic.rows[i].values);
    }
    SUBCASE("level 2 oversamples by the multiplier") {
        const Table out = scenario_dataset(AttackLevel::Level2, synthetic, {}, 10, 1);
        CHECK(out.size() == 1200);
    }
    SUBCASE("level 3 without a file is an error") {
        CHECK_THROWS_AS(scenario_dataset(AttackLevel::Level3, synthetic, {}, 10, 1), ConfigError);
    }
    SUBCASE("level 3 loads the external file") {
        const std::string path = "provider_external.csv";
        save_table(synthetic, path);
        const Table out = scenario_dataset(AttackLevel::Level3, synthetic, path, 1, 1);
        CHECK(out.size() == synthetic.size());
        std::remove(path.c_str());
    }
}
