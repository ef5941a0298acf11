#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "crewpair/harness.hpp"
#include "crewpair/oracle.hpp"
#include "test_support.hpp"

using namespace crewpair;
using namespace testutil;

namespace {

RunRecord record(const std::string& config, std::uint64_t seed, Cents cost,
                 std::int64_t dhd) {
    RunRecord r;
    r.config = config;
    r.seed = seed;
    r.best_cost = cost;
    r.best_fitness = cost;
    r.best_deadheads = dhd;
    return r;
}

}  // namespace

TEST_CASE("run_experiment: configs x seeds records, deterministic rerun") {
    Instance inst = small_synthetic(12, 300);
    AllPairs all = enumerate_all(inst);
    ExperimentPlan plan;
    plan.configurations = {GaVariant::GA1, GaVariant::GA2};
    plan.seeds = {1, 2, 3};
    plan.budget_generations = 3;
    plan.population_size = 6;
    plan.dhd_penalty = 1000;

    ExperimentOutcome a = run_experiment(all, plan);
    REQUIRE(a.records.size() == 6);
    CHECK(a.failures.empty());

    ExperimentOutcome b = run_experiment(all, plan, /*workers=*/3);
    REQUIRE(b.records.size() == 6);
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].config == b.records[i].config);
        CHECK(a.records[i].seed == b.records[i].seed);
        CHECK(a.records[i].best_cost == b.records[i].best_cost);
        CHECK(a.records[i].best_pairing_ids == b.records[i].best_pairing_ids);
    }
}

TEST_CASE("dhd-min initial populations carry fewer deadheads than random") {
    Instance inst = small_synthetic(30, 310);
    AllPairs all = enumerate_all(inst);
    ExperimentPlan plan;
    plan.configurations = {GaVariant::GA1, GaVariant::GA2};
    plan.seeds = {10, 11, 12, 13, 14};
    plan.budget_generations = 0;  // initial population only
    plan.population_size = 8;
    plan.dhd_penalty = 1000;
    ExperimentOutcome out = run_experiment(all, plan);
    double dhd[2] = {0, 0};
    for (const RunRecord& r : out.records) {
        int idx = r.config == "GA1" ? 0 : 1;
        dhd[idx] += static_cast<double>(r.early_snapshot.best_deadheads);
    }
    CHECK(dhd[1] < dhd[0]);
}

TEST_CASE("summarize: single record degenerates to that record") {
    auto rows = summarize({record("GA1", 1, 5000, 3)});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].runs == 1);
    CHECK(rows[0].cost_mean == 5000.0);
    CHECK(rows[0].cost_stddev == 0.0);
    CHECK(rows[0].cost_best == 5000);
    CHECK(rows[0].cost_worst == 5000);
    CHECK(rows[0].dhd_best == 3);
    CHECK(rows[0].dhd_worst == 3);
}

TEST_CASE("summarize matches hand-computed statistics") {
    // Fixture of 10 known values; mean 550, sample stddev ~302.7650.
    std::vector<Cents> costs{100, 200, 300, 400, 500, 600, 700, 800, 900, 1000};
    std::vector<RunRecord> records;
    for (std::size_t i = 0; i < costs.size(); ++i)
        records.push_back(record("GA3", i, costs[i], static_cast<int>(i)));
    auto rows = summarize(records);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].cost_mean == doctest::Approx(550.0));
    CHECK(rows[0].cost_stddev == doctest::Approx(302.7650354));
    CHECK(rows[0].cost_best == 100);
    CHECK(rows[0].cost_worst == 1000);
    CHECK(rows[0].dhd_mean == doctest::Approx(4.5));
    CHECK(rows[0].dhd_best == 0);
    CHECK(rows[0].dhd_worst == 9);
}

TEST_CASE("summaries are permutation invariant") {
    std::vector<RunRecord> records;
    for (int i = 0; i < 8; ++i)
        records.push_back(record(i % 2 ? "GA1" : "GA4", i, 1000 + 37 * i, i));
    auto before = summarize(records);
    std::mt19937 shuffler(99);
    std::shuffle(records.begin(), records.end(), shuffler);
    auto after = summarize(records);
    REQUIRE(before.size() == after.size());
    for (std::size_t i = 0; i < before.size(); ++i) {
        CHECK(before[i].config == after[i].config);
        CHECK(before[i].cost_mean == after[i].cost_mean);
        CHECK(before[i].cost_stddev == after[i].cost_stddev);
        CHECK(before[i].cost_best == after[i].cost_best);
        CHECK(before[i].dhd_worst == after[i].dhd_worst);
    }
}

TEST_CASE("gap arithmetic reproduces the published comparison") {
    CHECK(gap_percent(964858, 850303) == doctest::Approx(13.47).epsilon(1e-9));
    CHECK(gap_percent(957833, 850303) == doctest::Approx(12.65).epsilon(1e-9));
    CHECK(gap_percent(949592, 850303) == doctest::Approx(11.68).epsilon(1e-9));
    CHECK(gap_percent(987639, 850303) == doctest::Approx(16.15).epsilon(1e-9));
    CHECK(gap_percent(850303, 850303) == 0.0);
    CHECK_THROWS_AS(gap_percent(1, 0), std::invalid_argument);
}

TEST_CASE("gap_report uses the per-config best cost") {
    std::vector<RunRecord> records{record("GA1", 1, 964858, 0),
                                   record("GA1", 2, 999999, 0),
                                   record("GA3", 1, 949592, 0)};
    auto rows = gap_report(records, 850303);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].config == "GA1");
    CHECK(rows[0].best_cost == 964858);
    CHECK(rows[0].gap_percent == doctest::Approx(13.47));
    CHECK(rows[1].config == "GA3");
    CHECK(rows[1].gap_percent == doctest::Approx(11.68));
    CHECK_THROWS_AS(gap_report(records, 0), std::invalid_argument);
}

TEST_CASE("csv outputs carry the pinned headers") {
    auto rows = summarize({record("GA1", 1, 5000, 3)});
    std::string csv = summary_to_csv(rows);
    CHECK(csv.rfind("config,runs,cost_mean_cents,cost_stddev_cents,", 0) == 0);
    auto gaps = gap_report({record("GA1", 1, 5000, 0)}, 4000);
    std::string gcsv = gaps_to_csv(gaps, 4000, "greedy");
    CHECK(gcsv.rfind(
              "config,best_cost_cents,reference_cost_cents,reference,"
              "gap_percent",
              0) == 0);
}
