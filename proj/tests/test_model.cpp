#include "doctest.h"

#include <stdexcept>

#include "crewpair/model.hpp"
#include "crewpair/rng.hpp"
#include "test_support.hpp"

using namespace crewpair;
using namespace testutil;

TEST_CASE("deadhead_count arithmetic") {
    CHECK(deadhead_count({1, 1, 1, 1}) == 0);
    CHECK(deadhead_count({1, 1, 2, 3}) == 3);
    CHECK(deadhead_count({}) == 0);
    // Diagnostic use with uncovered flights counts only over-coverage.
    CHECK(deadhead_count({0, 2, 1}) == 1);
}

TEST_CASE("deadhead_count is permutation invariant") {
    Rng rng(7);
    for (int t = 0; t < 50; ++t) {
        std::vector<int> counts;
        for (int i = 0; i < 20; ++i)
            counts.push_back(1 + static_cast<int>(rng.uniform_index(4)));
        auto dhd = deadhead_count(counts);
        for (int s = 0; s < 5; ++s) {
            std::size_t a = rng.uniform_index(counts.size());
            std::size_t b = rng.uniform_index(counts.size());
            std::swap(counts[a], counts[b]);
        }
        CHECK(deadhead_count(counts) == dhd);
    }
}

TEST_CASE("pairing_cost formula") {
    CostModel m{/*per_flying_minute=*/2, /*per_duty_fixed=*/100,
                /*hotel_night=*/50, /*pairing_guarantee_minimum=*/0};
    CHECK(pairing_cost(120, 1, m) == 340);  // 240 flying + 100 fixed

    CostModel g = m;
    g.pairing_guarantee_minimum = 500;
    CHECK(pairing_cost(0, 2, g) == 500);  // guarantee floor binds over 250
}

TEST_CASE("pairing_cost matches independent re-derivation on random input") {
    Rng rng(99);
    for (int t = 0; t < 200; ++t) {
        CostModel m;
        m.per_flying_minute = static_cast<Cents>(rng.uniform_index(500));
        m.per_duty_fixed = static_cast<Cents>(rng.uniform_index(20000));
        m.hotel_night = static_cast<Cents>(rng.uniform_index(15000));
        m.pairing_guarantee_minimum = static_cast<Cents>(rng.uniform_index(60000));
        Minutes flying = static_cast<Minutes>(rng.uniform_index(2000));
        int duties = 1 + static_cast<int>(rng.uniform_index(4));
        Cents expected = m.per_flying_minute * flying +
                         m.per_duty_fixed * duties +
                         m.hotel_night * (duties - 1);
        if (expected < m.pairing_guarantee_minimum)
            expected = m.pairing_guarantee_minimum;
        CHECK(pairing_cost(flying, duties, m) == expected);
    }
}

TEST_CASE("instance validation rejects broken invariants") {
    Instance inst = out_and_back();
    CHECK_NOTHROW(inst.validate());

    Instance bad = inst;
    bad.flights[0].arrival = bad.flights[0].departure;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = inst;
    bad.flights[1].origin = bad.flights[1].destination;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = inst;
    bad.flights[1].id = 5;  // not dense
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = inst;
    bad.bases = {"JFK"};  // base absent from schedule
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = inst;
    bad.bases.clear();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("duty legality checks") {
    Instance inst = out_and_back();
    Duty both;
    both.flights = {0, 1};
    CHECK(check_duty(inst, both).empty());

    // Sit below minimum: B departs 15 min after A arrives.
    Instance tight = inst;
    tight.flights[1].departure = 555;
    CHECK(check_duty(tight, both) == "sit below minimum");

    // Airport discontinuity.
    Instance disc = inst;
    disc.flights[1].origin = "AUS";
    CHECK(check_duty(disc, both) == "airport discontinuity in duty");
}

TEST_CASE("pairing legality recheck from raw fields") {
    Instance inst = out_and_back();
    Pairing p;
    p.base = "DAL";
    Duty d;
    d.flights = {0, 1};
    p.duties = {d};
    p.coverage = {0, 1};
    p.cost = pairing_cost(inst, p);
    CHECK(check_pairing(inst, p).empty());
    CHECK(p.cost == 100 * 120 + 10000);  // 120 flying min, one duty

    Pairing wrong_cost = p;
    wrong_cost.cost += 1;
    CHECK(check_pairing(inst, wrong_cost) == "cost inconsistent");

    Pairing wrong_cov = p;
    wrong_cov.coverage = {0};
    CHECK(check_pairing(inst, wrong_cov) == "coverage set inconsistent");
}
