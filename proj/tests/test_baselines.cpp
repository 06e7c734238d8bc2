#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "helpers.hpp"
#include "synaudit/baselines.hpp"

using namespace synaudit;
using namespace synaudit::testing;

TEST_CASE("ganleaks_rank") {
    Rng rng(200);
    const auto m = random_matrix(120, 4, rng);

    SUBCASE("ordering equals the density ranking at k=1") {
        const auto base = rank_by_density(m, 1);
        const auto got = ganleaks_rank(m, 120, 0.1);
        REQUIRE(got.samples.size() == recovery_budget(120, 0.1));
        for (std::size_t i = 0; i < got.samples.size(); ++i) {
            CHECK(got.samples[i].row_id == base.ordered[i].row_id);
            CHECK(got.samples[i].score == doctest::Approx(base.ordered[i].score));
        }
        CHECK(got.k == 1);
        CHECK_FALSE(got.exhausted);
    }
    SUBCASE("no neighbor exclusion: adjacent duplicates may both be selected") {
        EncodedMatrix dup;
        dup.rows = 6;
        dup.width = 1;
        dup.data = {0.5, 0.5, 0.1, 0.9, 0.3, 0.7};
        dup.targets.assign(6, Cell{std::size_t{0}});
        const auto got = ganleaks_rank(dup, 6, 0.34);  // budget 3
        REQUIRE(got.samples.size() == 3);
        // rows 0 and 1 are exact copies of each other; both are kept
        CHECK(got.samples[0].row_id == 0);
        CHECK(got.samples[1].row_id == 1);
    }
    SUBCASE("budget larger than the dataset sets the exhausted flag") {
        EncodedMatrix tiny;
        tiny.rows = 3;
        tiny.width = 1;
        tiny.data = {0.1, 0.5, 0.9};
        tiny.targets.assign(3, Cell{std::size_t{0}});
        const auto got = ganleaks_rank(tiny, 100, 0.1);  // budget 10
        CHECK(got.exhausted);
        CHECK(got.samples.size() == 3);
    }
}

TEST_CASE("random_select") {
    SUBCASE("deterministic per seed, distinct across seeds") {
        const auto a = random_select(500, 500, 0.05, 42);
        const auto b = random_select(500, 500, 0.05, 42);
        const auto c = random_select(500, 500, 0.05, 43);
        REQUIRE(a.samples.size() == 25);
        bool same = true, differs = false;
        for (std::size_t i = 0; i < 25; ++i) {
            same = same && a.samples[i].row_id == b.samples[i].row_id;
            differs = differs || a.samples[i].row_id != c.samples[i].row_id;
        }
        CHECK(same);
        CHECK(differs);
    }
    SUBCASE("no repeats within a draw") {
        const auto got = random_select(100, 100, 0.3, 7);
        std::set<std::size_t> ids;
        for (const auto& s : got.samples) ids.insert(s.row_id);
        CHECK(ids.size() == got.samples.size());
        for (std::size_t id : ids) CHECK(id < 100);
    }
    SUBCASE("selection frequency is near-uniform across seeds") {
        const std::size_t rows = 50;
        const std::size_t draws = 4000;
        std::vector<double> counts(rows, 0.0);
        for (std::size_t seed = 0; seed < draws; ++seed) {
            const auto got = random_select(rows, rows, 0.2, seed);  // 10 of 50
            for (const auto& s : got.samples) counts[s.row_id] += 1.0;
        }
        const double expected = 0.2;
        // binomial sd of a per-row frequency is ~0.0063; 4 sd covers the worst
        // of the 50 rows comfortably
        for (double c : counts) CHECK(std::abs(c / draws - expected) <= 0.025);
    }
    SUBCASE("budget beyond the number of rows is rejected") {
        CHECK_THROWS_AS(random_select(5, 100, 0.1, 1), DataError);
    }
}
