#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "crewpair/ga.hpp"
#include "crewpair/oracle.hpp"
#include "test_support.hpp"

using namespace crewpair;
using namespace testutil;

namespace {

// Hand-built AllPairs: coverage/cost columns only, no flight table needed.
AllPairs make_allpairs(int flights,
                       std::vector<std::pair<Cents, std::vector<int>>> cols) {
    AllPairs all;
    all.flight_count = flights;
    for (auto& [cost, cov] : cols) {
        Pairing p;
        p.id = all.pairing_count();
        p.cost = cost;
        std::sort(cov.begin(), cov.end());
        p.coverage = cov;
        all.pairings.push_back(std::move(p));
    }
    all.build_index();
    return all;
}

Chromosome chrom(int length, std::vector<std::pair<bool, int>> expressed,
                 int fill_pid = 0) {
    Chromosome c;
    c.expressed_len = static_cast<int>(expressed.size());
    for (auto [b1, pid] : expressed) c.genes.push_back(Gene{b1, pid});
    while (c.length() < length) c.genes.push_back(Gene{false, fill_pid});
    return c;
}

// Exact-cover existence by complete backtracking over the given columns.
bool has_exact_cover(const AllPairs& all, const std::vector<int>& ids) {
    std::vector<int> covered(all.flight_count, 0);
    auto rec = [&](auto&& self, int need) -> bool {
        if (need == 0) return true;
        int branch = -1;
        for (int fid = 0; fid < all.flight_count; ++fid)
            if (!covered[fid]) { branch = fid; break; }
        for (int pid : ids) {
            const auto& cov = all.pairings[pid].coverage;
            if (!std::binary_search(cov.begin(), cov.end(), branch)) continue;
            bool disjoint = true;
            for (int fid : cov)
                if (covered[fid]) { disjoint = false; break; }
            if (!disjoint) continue;
            for (int fid : cov) covered[fid] = 1;
            if (self(self, need - static_cast<int>(cov.size()))) return true;
            for (int fid : cov) covered[fid] = 0;
        }
        return false;
    };
    return rec(rec, all.flight_count);
}

Cents recompute_fitness(const Chromosome& c, const AllPairs& all,
                        Cents penalty) {
    Cents cost = 0;
    std::vector<int> counts(all.flight_count, 0);
    for (int k = 0; k < c.expressed_len; ++k) {
        if (!c.genes[k].selected) continue;
        cost += all.pairings[c.genes[k].pairing_id].cost;
        for (int fid : all.pairings[c.genes[k].pairing_id].coverage)
            ++counts[fid];
    }
    std::int64_t coverings = 0;
    for (int cnt : counts) coverings += cnt;
    return cost + (coverings - all.flight_count) * penalty;
}

}  // namespace

TEST_CASE("evaluate arithmetic") {
    AllPairs all = make_allpairs(4, {{400, {0, 1}}, {600, {2, 3}},
                                     {300, {1, 2}}});
    FitnessConfig cfg{100};

    Chromosome exact = chrom(5, {{true, 0}, {true, 1}});
    CHECK(evaluate(exact, all, cfg) == 1000);  // exact cover, no penalty term

    Chromosome over = chrom(5, {{true, 0}, {true, 1}, {true, 2}});
    CHECK(evaluate(over, all, cfg) == 1500);  // 1300 + 2 deadheads * 100

    Chromosome infeasible = chrom(5, {{true, 0}});
    CHECK_THROWS_AS(evaluate(infeasible, all, cfg), std::logic_error);
}

TEST_CASE("evaluate matches independent recomputation on random chromosomes") {
    Instance inst = small_synthetic(16, 21);
    AllPairs all = enumerate_all(inst);
    Rng rng(4);
    FitnessConfig cfg{777};
    for (int t = 0; t < 200; ++t) {
        Chromosome c = random_chromosome(all, 40, 30, rng);
        repair(c, all);
        CHECK(evaluate(c, all, cfg) == recompute_fitness(c, all, 777));
    }
}

TEST_CASE("repair picks the minimum quality index pairing") {
    AllPairs all = make_allpairs(2, {{500, {0, 1}}, {300, {0}}});
    Chromosome c = chrom(4, {});
    repair(c, all);
    // QI 250 vs 300: the two-flight pairing wins despite higher cost.
    CHECK(c.active_pairings() == std::vector<int>{0});
}

TEST_CASE("repair makes random chromosomes feasible and is idempotent") {
    Instance inst = small_synthetic(20, 31);
    AllPairs all = enumerate_all(inst);
    Rng rng(9);
    for (int t = 0; t < 300; ++t) {
        Chromosome c = random_chromosome(all, 50, 35, rng);
        repair(c, all);
        CHECK(c.feasible(all));
        Chromosome again = c;
        repair(again, all);
        CHECK(again == c);
    }
}

TEST_CASE("repair keeps feasible input unchanged up to redundant removal") {
    AllPairs all = make_allpairs(3, {{100, {0}}, {100, {1}}, {100, {2}}});
    Chromosome c = chrom(5, {{true, 0}, {true, 1}, {true, 2}});
    Chromosome before = c;
    repair(c, all);
    CHECK(c == before);
}

TEST_CASE("redundant pairing removal") {
    AllPairs all = make_allpairs(4, {{100, {0, 1}}, {100, {2, 3}},
                                     {50, {1, 2}}});

    // Exact partition: every pairing essential.
    Chromosome exact = chrom(5, {{true, 0}, {true, 1}});
    redundant_pairing_removal(exact, all);
    CHECK(exact.active_pairings() == std::vector<int>{0, 1});

    // The middle pairing is fully dominated by the other two.
    Chromosome over = chrom(5, {{true, 2}, {true, 0}, {true, 1}});
    redundant_pairing_removal(over, all);
    CHECK(over.active_pairings() == std::vector<int>{0, 1});
}

TEST_CASE("redundant removal yields 1-minimal solutions, fitness never rises") {
    Instance inst = small_synthetic(18, 41);
    AllPairs all = enumerate_all(inst);
    Rng rng(12);
    FitnessConfig cfg{500};
    for (int t = 0; t < 200; ++t) {
        Chromosome c = random_chromosome(all, 45, 30, rng);
        repair(c, all);
        Cents before = evaluate(c, all, cfg);
        redundant_pairing_removal(c, all);
        CHECK(evaluate(c, all, cfg) <= before);
        // No single active pairing can still be dropped.
        auto counts = c.coverage_counts(all);
        for (int pid : c.active_pairings()) {
            bool removable = true;
            for (int fid : all.pairings[pid].coverage)
                if (counts[fid] < 2) { removable = false; break; }
            CHECK(!removable);
        }
    }
}

TEST_CASE("binary tournament selection") {
    AllPairs all = make_allpairs(1, {{100, {0}}, {200, {0}}});
    FitnessConfig cfg{0};
    Population pop;
    for (int i = 0; i < 4; ++i) {
        Chromosome c = chrom(3, {{true, i % 2}});
        evaluate(c, all, cfg);
        pop.push_back(c);
    }
    // Fitness pattern: 100, 200, 100, 200. Lower fitness must win each
    // pair; ties go to the lower index.
    Rng rng(5);
    int wins_low = 0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        auto [a, b] = tournament_select(pop, rng);
        CHECK(pop[a].fitness.value() <= 200);
        if (pop[a].fitness == 100) ++wins_low;
        if (pop[b].fitness == 100) ++wins_low;
    }
    // Uniform picking would give the 100-fitness pair 50% of wins; the
    // tournament must select them clearly more often.
    double frac = static_cast<double>(wins_low) / (2 * trials);
    CHECK(frac > 0.70);
}

TEST_CASE("tournament ties break to the lower population index") {
    AllPairs all = make_allpairs(1, {{100, {0}}});
    FitnessConfig cfg{0};
    Population pop;
    for (int i = 0; i < 2; ++i) {
        Chromosome c = chrom(3, {{true, 0}});
        evaluate(c, all, cfg);
        pop.push_back(c);
    }
    Rng rng(1);
    for (int t = 0; t < 100; ++t) {
        auto [a, b] = tournament_select(pop, rng);
        CHECK(a == 0);
        CHECK(b == 0);
    }
}

TEST_CASE("crossover1: identical parents reproduce themselves") {
    AllPairs all = make_allpairs(2, {{100, {0}}, {100, {1}}});
    FitnessConfig cfg{0};
    Chromosome p = chrom(6, {{true, 0}, {true, 1}});
    evaluate(p, all, cfg);
    Rng rng(3);
    auto [c1, c2] = crossover1_fusion(p, p, rng);
    CHECK(c1 == p);
    CHECK(c2 == p);
}

TEST_CASE("crossover1 gene-origin frequency follows the fitness ratio") {
    AllPairs all = make_allpairs(2, {{100, {0, 1}}, {300, {0, 1}}});
    FitnessConfig cfg{0};
    Chromosome p1 = chrom(50, {{true, 0}}, 0);
    Chromosome p2 = chrom(50, {{true, 1}}, 1);
    evaluate(p1, all, cfg);  // fitness 100
    evaluate(p2, all, cfg);  // fitness 300
    Rng rng(8);
    // Expected: child takes p1's gene with probability 300/400 = 0.75.
    long from_p1 = 0, total = 0;
    for (int t = 0; t < 10000; ++t) {
        auto [c1, c2] = crossover1_fusion(p1, p2, rng);
        for (const Chromosome* c : {&c1, &c2})
            for (int k = 0; k < c->length(); ++k) {
                ++total;
                if (c->genes[k] == p1.genes[k]) ++from_p1;
            }
    }
    double frac = static_cast<double>(from_p1) / static_cast<double>(total);
    CHECK(frac == doctest::Approx(0.75).epsilon(0.02));
}

TEST_CASE("crossover1 with equal fitness is a fair coin per gene") {
    AllPairs all = make_allpairs(2, {{100, {0, 1}}, {100, {0, 1}}});
    FitnessConfig cfg{0};
    Chromosome p1 = chrom(50, {{true, 0}}, 0);
    Chromosome p2 = chrom(50, {{true, 1}}, 1);
    evaluate(p1, all, cfg);
    evaluate(p2, all, cfg);
    Rng rng(15);
    long from_p1 = 0, total = 0;
    for (int t = 0; t < 10000; ++t) {
        auto [c1, c2] = crossover1_fusion(p1, p2, rng);
        for (int k = 0; k < c1.length(); ++k) {
            ++total;
            if (c1.genes[k] == p1.genes[k]) ++from_p1;
        }
    }
    double frac = static_cast<double>(from_p1) / static_cast<double>(total);
    CHECK(frac == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("crossover2: parents holding an exact partition give 0 deadheads") {
    AllPairs all = make_allpairs(
        4, {{100, {0, 1}}, {100, {2, 3}}, {90, {1, 2}}, {500, {0, 1, 2, 3}}});
    FitnessConfig cfg{50};
    Chromosome p1 = chrom(6, {{true, 0}, {true, 2}, {true, 3}}, 0);
    Chromosome p2 = chrom(6, {{true, 1}, {true, 3}}, 1);
    repair(p1, all);
    repair(p2, all);
    evaluate(p1, all, cfg);
    evaluate(p2, all, cfg);
    Rng rng(2);
    for (int t = 0; t < 50; ++t) {
        auto [c1, c2] = crossover2_dhd_min(p1, p2, all, rng);
        for (const Chromosome* c : {&c1, &c2}) {
            CHECK(c->feasible(all));
            CHECK(deadhead_count(c->coverage_counts(all)) == 0);
        }
    }
}

TEST_CASE("crossover2 finds zero deadheads whenever combined pairs allow it") {
    Instance inst = small_synthetic(10, 51);
    AllPairs all = enumerate_all(inst);
    Rng rng(6);
    FitnessConfig cfg{100};
    Population pop = dhd_min_initialize(all, 8, rng);
    for (Chromosome& c : pop) evaluate(c, all, cfg);
    for (int t = 0; t < 30; ++t) {
        auto [i, j] = tournament_select(pop, rng);
        std::vector<int> combined;
        for (const Gene& g : pop[i].genes) combined.push_back(g.pairing_id);
        for (const Gene& g : pop[j].genes) combined.push_back(g.pairing_id);
        std::sort(combined.begin(), combined.end());
        combined.erase(std::unique(combined.begin(), combined.end()),
                       combined.end());
        auto [c1, c2] = crossover2_dhd_min(pop[i], pop[j], all, rng);
        if (has_exact_cover(all, combined)) {
            CHECK(deadhead_count(c1.coverage_counts(all)) == 0);
            CHECK(deadhead_count(c2.coverage_counts(all)) == 0);
        }
        CHECK(c1.feasible(all));
        CHECK(c2.feasible(all));
    }
}

TEST_CASE("mutation1 edge rates and b2 preservation") {
    AllPairs all = make_allpairs(2, {{100, {0}}, {100, {1}}});
    Rng rng(7);
    Chromosome c = chrom(10, {{true, 0}, {false, 1}});
    Chromosome before = c;

    Chromosome zero = c;
    mutation1_bitflip(zero, 0.0, rng);
    CHECK(zero.genes == before.genes);

    Chromosome one = c;
    mutation1_bitflip(one, 1.0, rng);
    for (int k = 0; k < c.length(); ++k) {
        CHECK(one.genes[k].selected == !before.genes[k].selected);
        CHECK(one.genes[k].pairing_id == before.genes[k].pairing_id);
    }
}

TEST_CASE("mutation1 mean flip count matches the configured rate") {
    AllPairs all = make_allpairs(1, {{100, {0}}});
    Rng rng(19);
    const int length = 120;
    const double rate = 3.0 / length;
    long flips = 0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        Chromosome c = chrom(length, {}, 0);
        Chromosome before = c;
        mutation1_bitflip(c, rate, rng);
        for (int k = 0; k < length; ++k)
            if (c.genes[k].selected != before.genes[k].selected) ++flips;
    }
    double mean = static_cast<double>(flips) / trials;
    CHECK(mean == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("mutation2 follows the fittest individual's bit density") {
    AllPairs all = make_allpairs(1, {{100, {0}}});
    Rng rng(23);

    Chromosome dense = chrom(10, {}, 0);
    for (Gene& g : dense.genes) g.selected = true;  // d = 1
    Chromosome c = chrom(10, {}, 0);
    mutation2_density(c, 1.0, dense, rng);
    for (const Gene& g : c.genes) CHECK(g.selected);  // 0 -> 1 with certainty

    // d = 0.3: selected zero-genes flip with probability 0.3.
    Chromosome fittest = chrom(10, {}, 0);
    for (int k = 0; k < 3; ++k) fittest.genes[k].selected = true;
    long flips = 0;
    const int trials = 20000;
    for (int t = 0; t < trials; ++t) {
        Chromosome z = chrom(10, {}, 0);
        mutation2_density(z, 1.0, fittest, rng);
        for (const Gene& g : z.genes)
            if (g.selected) ++flips;
    }
    double frac = static_cast<double>(flips) / (10.0 * trials);
    CHECK(frac == doctest::Approx(0.3).epsilon(0.03));
}

TEST_CASE("dhd-min initialization yields feasible chromosomes, pop size 24") {
    Instance inst = small_synthetic(20, 61);
    AllPairs all = enumerate_all(inst);
    Rng rng(10);
    Population pop = dhd_min_initialize(all, 24, rng);
    REQUIRE(pop.size() == 24);
    int length = pop.front().length();
    for (const Chromosome& c : pop) {
        CHECK(c.feasible(all));
        CHECK(c.length() == length);  // 100 + maxLength(initial_pop)
        CHECK(c.expressed_len + 100 <= length);
    }
}

TEST_CASE("dhd-min init beats random init on mean deadheads") {
    Instance inst = small_synthetic(30, 71);
    AllPairs all = enumerate_all(inst);
    double dhd_smart = 0, dhd_random = 0;
    const int seeds = 6, pop_size = 8;
    for (int s = 0; s < seeds; ++s) {
        Rng r1(100 + s), r2(100 + s);
        for (const Chromosome& c : dhd_min_initialize(all, pop_size, r1))
            dhd_smart += static_cast<double>(
                deadhead_count(c.coverage_counts(all)));
        for (const Chromosome& c : random_initialize(all, pop_size, r2))
            dhd_random += static_cast<double>(
                deadhead_count(c.coverage_counts(all)));
    }
    CHECK(dhd_smart / (seeds * pop_size) < dhd_random / (seeds * pop_size));
}

TEST_CASE("random initialization is deterministic per seed and feasible") {
    Instance inst = small_synthetic(15, 81);
    AllPairs all = enumerate_all(inst);
    Rng r1(42), r2(42);
    Population a = random_initialize(all, 24, r1);
    Population b = random_initialize(all, 24, r2);
    REQUIRE(a.size() == 24);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].feasible(all));
        CHECK(a[i] == b[i]);
    }
}

TEST_CASE("raw random chromosomes have b1 density near one half") {
    Instance inst = small_synthetic(12, 91);
    AllPairs all = enumerate_all(inst);
    Rng rng(33);
    long ones = 0, total = 0;
    for (int t = 0; t < 2000; ++t) {
        Chromosome c = random_chromosome(all, 60, 40, rng);
        for (const Gene& g : c.genes) {
            ++total;
            if (g.selected) ++ones;
        }
    }
    double frac = static_cast<double>(ones) / static_cast<double>(total);
    CHECK(frac == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("generational replacement keeps the best n") {
    AllPairs all = make_allpairs(1, {{100, {0}}});
    FitnessConfig cfg{0};
    auto make = [&](Cents cost_scale) {
        Chromosome c = chrom(3, {{true, 0}});
        c.fitness = cost_scale;
        return c;
    };
    Population parents{make(100), make(200)};
    Population worse_children{make(300), make(400)};
    Population p1 = replace_generational(parents, worse_children);
    CHECK(p1[0].fitness == 100);
    CHECK(p1[1].fitness == 200);

    Population better_children{make(10), make(20)};
    Population p2 = replace_generational(parents, better_children);
    CHECK(p2[0].fitness == 10);
    CHECK(p2[1].fitness == 20);
}

TEST_CASE("run: generation cap 0 returns the initial best") {
    Instance inst = small_synthetic(12, 101);
    AllPairs all = enumerate_all(inst);
    GaConfig cfg;
    cfg.variant = GaVariant::GA2;
    cfg.population_size = 8;
    cfg.budget_generations = 0;
    RunRecord rec = run(all, cfg, 5);
    CHECK(rec.generations == 0);
    REQUIRE(rec.trace.size() == 1);
    CHECK(rec.trace[0].best_cost == rec.best_cost);
    CHECK(rec.early_snapshot.best_cost == rec.best_cost);
}

TEST_CASE("run: fixed seed reproduces an identical record") {
    Instance inst = small_synthetic(14, 111);
    AllPairs all = enumerate_all(inst);
    for (GaVariant v : {GaVariant::GA1, GaVariant::GA4}) {
        GaConfig cfg;
        cfg.variant = v;
        cfg.population_size = 8;
        cfg.budget_generations = 6;
        cfg.dhd_penalty = 200;
        RunRecord a = run(all, cfg, 77);
        RunRecord b = run(all, cfg, 77);
        CHECK(a.best_fitness == b.best_fitness);
        CHECK(a.best_pairing_ids == b.best_pairing_ids);
        REQUIRE(a.trace.size() == b.trace.size());
        for (std::size_t i = 0; i < a.trace.size(); ++i) {
            CHECK(a.trace[i].best_cost == b.trace[i].best_cost);
            CHECK(a.trace[i].best_deadheads == b.trace[i].best_deadheads);
        }
    }
}

TEST_CASE("run: best fitness trace is monotone for every variant") {
    Instance inst = small_synthetic(16, 121);
    AllPairs all = enumerate_all(inst);
    FitnessConfig fcfg{300};
    for (GaVariant v : {GaVariant::GA1, GaVariant::GA2, GaVariant::GA3,
                        GaVariant::GA4}) {
        GaConfig cfg;
        cfg.variant = v;
        cfg.population_size = 8;
        cfg.budget_generations = 8;
        cfg.dhd_penalty = 300;
        RunRecord rec = run(all, cfg, 13);
        for (std::size_t i = 1; i < rec.trace.size(); ++i) {
            Cents prev = rec.trace[i - 1].best_cost +
                         rec.trace[i - 1].best_deadheads * 300;
            Cents cur = rec.trace[i].best_cost +
                        rec.trace[i].best_deadheads * 300;
            CHECK(cur <= prev);
        }
    }
}
