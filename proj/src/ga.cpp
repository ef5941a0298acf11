#include "crewpair/ga.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <numeric>
#include <stdexcept>

namespace crewpair {

std::string to_string(GaVariant v) {
    switch (v) {
        case GaVariant::GA1: return "GA1";
        case GaVariant::GA2: return "GA2";
        case GaVariant::GA3: return "GA3";
        case GaVariant::GA4: return "GA4";
    }
    return "GA?";
}

GaVariant ga_variant_from_string(const std::string& s) {
    if (s == "GA1") return GaVariant::GA1;
    if (s == "GA2") return GaVariant::GA2;
    if (s == "GA3") return GaVariant::GA3;
    if (s == "GA4") return GaVariant::GA4;
    throw std::invalid_argument("unknown GA configuration: " + s);
}

std::vector<int> Chromosome::active_pairings() const {
    std::vector<int> out;
    for (int k = 0; k < expressed_len; ++k)
        if (genes[k].selected) out.push_back(genes[k].pairing_id);
    return out;
}

std::vector<int> Chromosome::coverage_counts(const AllPairs& all) const {
    std::vector<int> counts(all.flight_count, 0);
    for (int k = 0; k < expressed_len; ++k)
        if (genes[k].selected)
            for (int fid : all.pairings[genes[k].pairing_id].coverage)
                ++counts[fid];
    return counts;
}

bool Chromosome::feasible(const AllPairs& all) const {
    auto counts = coverage_counts(all);
    return std::all_of(counts.begin(), counts.end(),
                       [](int c) { return c >= 1; });
}

bool qi_less(Cents cost_a, int newly_a, Cents cost_b, int newly_b) {
    // cost_a/newly_a < cost_b/newly_b in exact integer arithmetic.
    return cost_a * static_cast<Cents>(newly_b) <
           cost_b * static_cast<Cents>(newly_a);
}

namespace {

int count_newly(const Pairing& p, const std::vector<int>& counts) {
    int n = 0;
    for (int fid : p.coverage)
        if (counts[fid] == 0) ++n;
    return n;
}

void cover_with(const Pairing& p, std::vector<int>& counts, int& uncovered) {
    for (int fid : p.coverage) {
        if (counts[fid] == 0) --uncovered;
        ++counts[fid];
    }
}

// Expressed-part construction shared by the deadhead-minimizing
// initializer and Crossover2: draw uniformly among zero-deadhead
// candidates while any exist, then greedily take the pairing adding the
// fewest deadheads (ties by lower cost, then lower id). Stops early if
// the pool cannot cover the remaining flights.
std::vector<int> build_dhd_min_expressed(const AllPairs& all,
                                         const std::vector<int>& pool,
                                         Rng& rng) {
    std::vector<int> counts(all.flight_count, 0);
    int uncovered = all.flight_count;
    std::vector<int> chosen;
    std::vector<char> used(all.pairings.size(), 0);
    while (uncovered > 0) {
        std::vector<int> zero_dhd;
        for (int pid : pool) {
            if (used[pid]) continue;
            const Pairing& p = all.pairings[pid];
            int newly = count_newly(p, counts);
            if (newly == static_cast<int>(p.coverage.size()) && newly > 0)
                zero_dhd.push_back(pid);
        }
        int pick = -1;
        if (!zero_dhd.empty()) {
            pick = zero_dhd[rng.uniform_index(zero_dhd.size())];
        } else {
            std::int64_t best_added = -1;
            for (int pid : pool) {
                if (used[pid]) continue;
                const Pairing& p = all.pairings[pid];
                int newly = count_newly(p, counts);
                if (newly == 0) continue;
                std::int64_t added =
                    static_cast<std::int64_t>(p.coverage.size()) - newly;
                if (pick < 0 || added < best_added ||
                    (added == best_added &&
                     (p.cost < all.pairings[pick].cost ||
                      (p.cost == all.pairings[pick].cost && pid < pick)))) {
                    pick = pid;
                    best_added = added;
                }
            }
            if (pick < 0) break;  // pool exhausted; caller repairs from AllPairs
        }
        used[pick] = 1;
        chosen.push_back(pick);
        cover_with(all.pairings[pick], counts, uncovered);
    }
    return chosen;
}

// Randomized backtracking search for a zero-deadhead solution (an exact
// cover) within the pool. Branches on the lowest uncovered flight with
// candidates in random order; bounded by a node budget so that proving
// absence on large pools cannot stall a generation. Returns an empty
// vector when no exact cover is found.
std::vector<int> find_zero_dhd_solution(const AllPairs& all,
                                        const std::vector<int>& pool,
                                        Rng& rng) {
    std::vector<std::vector<int>> by_flight(all.flight_count);
    for (int pid : pool)
        for (int fid : all.pairings[pid].coverage) by_flight[fid].push_back(pid);
    for (int fid = 0; fid < all.flight_count; ++fid)
        if (by_flight[fid].empty()) return {};

    std::vector<char> covered(all.flight_count, 0);
    std::vector<int> chosen;
    long nodes = 0;
    const long node_budget = 50000;
    auto rec = [&](auto&& self, int need) -> bool {
        if (need == 0) return true;
        if (++nodes > node_budget) return false;
        int branch = -1;
        for (int fid = 0; fid < all.flight_count; ++fid)
            if (!covered[fid]) { branch = fid; break; }
        std::vector<int> cands = by_flight[branch];
        // Fisher-Yates for a random candidate order.
        for (std::size_t i = cands.size(); i > 1; --i)
            std::swap(cands[i - 1], cands[rng.uniform_index(i)]);
        for (int pid : cands) {
            const Pairing& p = all.pairings[pid];
            bool disjoint = true;
            for (int fid : p.coverage)
                if (covered[fid]) { disjoint = false; break; }
            if (!disjoint) continue;
            for (int fid : p.coverage) covered[fid] = 1;
            chosen.push_back(pid);
            if (self(self, need - static_cast<int>(p.coverage.size())))
                return true;
            chosen.pop_back();
            for (int fid : p.coverage) covered[fid] = 0;
            if (nodes > node_budget) return false;
        }
        return false;
    };
    if (rec(rec, all.flight_count)) return chosen;
    return {};
}

// Fill genes[from..length) with random pairings without replacement
// relative to the whole chromosome; falls back to with-replacement draws
// once every pairing is present.
void fill_unexpressed_random(Chromosome& c, const AllPairs& all, int from,
                             Rng& rng) {
    std::vector<char> in_chrom(all.pairings.size(), 0);
    for (int k = 0; k < from; ++k) in_chrom[c.genes[k].pairing_id] = 1;
    std::vector<int> unused;
    for (int pid = 0; pid < all.pairing_count(); ++pid)
        if (!in_chrom[pid]) unused.push_back(pid);
    for (int k = from; k < c.length(); ++k) {
        int pid;
        if (!unused.empty()) {
            std::size_t j = rng.uniform_index(unused.size());
            pid = unused[j];
            unused[j] = unused.back();
            unused.pop_back();
        } else {
            pid = static_cast<int>(rng.uniform_index(all.pairings.size()));
        }
        c.genes[k] = Gene{false, pid};
    }
}

void require_coverable(const AllPairs& all) {
    if (!all.fully_coverable())
        throw std::runtime_error("AllPairs cannot cover all flights");
}

// Size of the deterministic minimum-quality-index greedy cover; used as
// the cover-size scale for random initialization.
int greedy_cover_size(const AllPairs& all) {
    std::vector<int> counts(all.flight_count, 0);
    int uncovered = all.flight_count;
    int picks = 0;
    while (uncovered > 0) {
        int pick = -1, pick_newly = 0;
        for (int pid = 0; pid < all.pairing_count(); ++pid) {
            const Pairing& p = all.pairings[pid];
            int newly = count_newly(p, counts);
            if (newly == 0) continue;
            if (pick < 0 ||
                qi_less(p.cost, newly, all.pairings[pick].cost, pick_newly)) {
                pick = pid;
                pick_newly = newly;
            }
        }
        if (pick < 0)
            throw std::runtime_error("AllPairs cannot cover all flights");
        cover_with(all.pairings[pick], counts, uncovered);
        ++picks;
    }
    return picks;
}

int fittest_index(const Population& pop) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(pop.size()); ++i)
        if (pop[i].fitness.value() < pop[best].fitness.value()) best = i;
    return best;
}

}  // namespace

Population dhd_min_initialize(const AllPairs& all, int pop_size, Rng& rng) {
    require_coverable(all);
    std::vector<int> pool(all.pairing_count());
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<std::vector<int>> expressed(pop_size);
    int max_len = 0;
    for (int i = 0; i < pop_size; ++i) {
        expressed[i] = build_dhd_min_expressed(all, pool, rng);
        max_len = std::max(max_len, static_cast<int>(expressed[i].size()));
    }
    const int length = 100 + max_len;
    Population pop(pop_size);
    for (int i = 0; i < pop_size; ++i) {
        Chromosome& c = pop[i];
        c.genes.resize(length);
        c.expressed_len = static_cast<int>(expressed[i].size());
        for (int k = 0; k < c.expressed_len; ++k)
            c.genes[k] = Gene{true, expressed[i][k]};
        fill_unexpressed_random(c, all, c.expressed_len, rng);
    }
    return pop;
}

Chromosome random_chromosome(const AllPairs& all, int length,
                             int expressed_len, Rng& rng) {
    Chromosome c;
    c.genes.resize(length);
    c.expressed_len = expressed_len;
    for (int k = 0; k < length; ++k) {
        bool b1 = rng.bernoulli(0.5);
        int pid = static_cast<int>(rng.uniform_index(all.pairings.size()));
        c.genes[k] = Gene{b1, pid};
    }
    return c;
}

Population random_initialize(const AllPairs& all, int pop_size, Rng& rng) {
    require_coverable(all);
    // The cover-size scale sets the initial expressed length; the greedy
    // quality-index cover provides it deterministically.
    int ghat = greedy_cover_size(all);
    int e0 = std::min(all.pairing_count(), std::max(1, 2 * ghat));
    const int length = 100 + e0;
    Population pop;
    pop.reserve(pop_size);
    for (int i = 0; i < pop_size; ++i) {
        Chromosome c = random_chromosome(all, length, e0, rng);
        repair(c, all);
        pop.push_back(std::move(c));
    }
    return pop;
}

std::pair<int, int> tournament_select(const Population& pop, Rng& rng) {
    const std::size_t n = pop.size();
    auto one = [&]() -> int {
        std::size_t i = rng.uniform_index(n);
        std::size_t j = i;
        if (n > 1)
            while (j == i) j = rng.uniform_index(n);
        Cents fi = pop[i].fitness.value();
        Cents fj = pop[j].fitness.value();
        if (fi < fj) return static_cast<int>(i);
        if (fj < fi) return static_cast<int>(j);
        return static_cast<int>(std::min(i, j));
    };
    int a = one();
    int b = one();
    return {a, b};
}

std::pair<Chromosome, Chromosome> crossover1_fusion(const Chromosome& p1,
                                                    const Chromosome& p2,
                                                    Rng& rng) {
    assert(p1.length() == p2.length());
    const Cents f1 = p1.fitness.value();
    const Cents f2 = p2.fitness.value();
    // Minimization: the fitter (lower) parent contributes more genes.
    double take_p1 =
        (f1 + f2 > 0) ? static_cast<double>(f2) / static_cast<double>(f1 + f2)
                      : 0.5;
    auto make_child = [&]() {
        Chromosome c;
        c.genes.resize(p1.length());
        int from1 = 0, from2 = 0;
        for (int k = 0; k < p1.length(); ++k) {
            if (p1.genes[k] == p2.genes[k]) {
                c.genes[k] = p1.genes[k];
            } else if (rng.bernoulli(take_p1)) {
                c.genes[k] = p1.genes[k];
                ++from1;
            } else {
                c.genes[k] = p2.genes[k];
                ++from2;
            }
        }
        c.expressed_len = (from2 > from1) ? p2.expressed_len : p1.expressed_len;
        return c;
    };
    return {make_child(), make_child()};
}

std::pair<Chromosome, Chromosome> crossover2_dhd_min(const Chromosome& p1,
                                                     const Chromosome& p2,
                                                     const AllPairs& all,
                                                     Rng& rng) {
    assert(p1.length() == p2.length());
    std::vector<int> combined;
    combined.reserve(p1.length() + p2.length());
    for (const Gene& g : p1.genes) combined.push_back(g.pairing_id);
    for (const Gene& g : p2.genes) combined.push_back(g.pairing_id);
    std::sort(combined.begin(), combined.end());
    combined.erase(std::unique(combined.begin(), combined.end()),
                   combined.end());

    auto make_child = [&]() {
        std::vector<int> expressed = find_zero_dhd_solution(all, combined, rng);
        if (expressed.empty())
            expressed = build_dhd_min_expressed(all, combined, rng);
        Chromosome c;
        c.genes.resize(p1.length());
        if (static_cast<int>(expressed.size()) > c.length())
            throw std::logic_error("expressed part exceeds chromosome length");
        c.expressed_len = static_cast<int>(expressed.size());
        for (int k = 0; k < c.expressed_len; ++k)
            c.genes[k] = Gene{true, expressed[k]};

        // Unexpressed part: remaining combined pairings ordered by
        // dissimilarity with the expressed part (count of flights not
        // covered by it), larger first, ties by lower id.
        std::vector<int> counts = c.coverage_counts(all);
        std::vector<char> in_expr(all.pairings.size(), 0);
        for (int pid : expressed) in_expr[pid] = 1;
        std::vector<std::pair<int, int>> rest;  // (dissimilarity, id)
        for (int pid : combined) {
            if (in_expr[pid]) continue;
            rest.emplace_back(count_newly(all.pairings[pid], counts), pid);
        }
        std::sort(rest.begin(), rest.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        int k = c.expressed_len;
        for (const auto& [dis, pid] : rest) {
            if (k >= c.length()) break;
            c.genes[k++] = Gene{false, pid};
        }
        if (k < c.length()) fill_unexpressed_random(c, all, k, rng);
        // CombinedPairs may not cover every flight; finish from AllPairs.
        if (!c.feasible(all)) repair(c, all);
        return c;
    };
    return {make_child(), make_child()};
}

void mutation1_bitflip(Chromosome& c, double rate, Rng& rng) {
    for (Gene& g : c.genes)
        if (rng.bernoulli(rate)) g.selected = !g.selected;
    c.fitness.reset();
}

void mutation2_density(Chromosome& c, double rate, const Chromosome& fittest,
                       Rng& rng) {
    int ones = 0;
    for (const Gene& g : fittest.genes) ones += g.selected ? 1 : 0;
    double d = fittest.length() > 0
                   ? static_cast<double>(ones) / fittest.length()
                   : 0.0;
    for (Gene& g : c.genes) {
        if (!rng.bernoulli(rate)) continue;
        if (!g.selected) {
            if (rng.bernoulli(d)) g.selected = true;
        } else {
            if (rng.bernoulli(1.0 - d)) g.selected = false;
        }
    }
    c.fitness.reset();
}

void repair(Chromosome& c, const AllPairs& all) {
    std::vector<int> counts = c.coverage_counts(all);
    int uncovered = 0;
    for (int cnt : counts)
        if (cnt == 0) ++uncovered;

    while (uncovered > 0) {
        // Candidate pairings covering at least one uncovered flight,
        // visited in id order for determinism.
        std::vector<char> seen(all.pairings.size(), 0);
        int pick = -1, pick_newly = 0;
        for (int fid = 0; fid < all.flight_count; ++fid) {
            if (counts[fid] > 0) continue;
            for (int pid : all.covering[fid]) {
                if (seen[pid]) continue;
                seen[pid] = 1;
                const Pairing& p = all.pairings[pid];
                int newly = count_newly(p, counts);
                if (newly == 0) continue;
                if (pick < 0 ||
                    qi_less(p.cost, newly, all.pairings[pick].cost,
                            pick_newly) ||
                    (!qi_less(all.pairings[pick].cost, pick_newly, p.cost,
                              newly) &&
                     (p.cost < all.pairings[pick].cost ||
                      (p.cost == all.pairings[pick].cost && pid < pick)))) {
                    pick = pid;
                    pick_newly = newly;
                }
            }
        }
        if (pick < 0)
            throw std::runtime_error("repair: flights uncoverable by AllPairs");

        // Activate: an existing expressed gene with this pairing, else the
        // first unexpressed gene, else the worst inactive expressed gene.
        bool placed = false;
        for (int k = 0; k < c.expressed_len && !placed; ++k) {
            if (c.genes[k].pairing_id == pick && !c.genes[k].selected) {
                c.genes[k].selected = true;
                placed = true;
            }
        }
        if (!placed && c.expressed_len < c.length()) {
            c.genes[c.expressed_len] = Gene{true, pick};
            ++c.expressed_len;
            placed = true;
        }
        if (!placed) {
            // No room: overwrite the inactive expressed gene whose pairing
            // has the highest quality index against the uncovered set
            // (pairings covering nothing uncovered rank worst of all).
            int victim = -1;
            auto worse = [&](int ka, int kb) {  // is ka worse than kb
                const Pairing& a = all.pairings[c.genes[ka].pairing_id];
                const Pairing& b = all.pairings[c.genes[kb].pairing_id];
                int na = count_newly(a, counts), nb = count_newly(b, counts);
                if ((na == 0) != (nb == 0)) return na == 0;
                if (na == 0) return a.cost > b.cost;
                if (qi_less(b.cost, nb, a.cost, na)) return true;
                if (qi_less(a.cost, na, b.cost, nb)) return false;
                return a.cost > b.cost;
            };
            for (int k = 0; k < c.expressed_len; ++k) {
                if (c.genes[k].selected) continue;
                if (victim < 0 || worse(k, victim)) victim = k;
            }
            if (victim < 0)
                throw std::logic_error("repair: no gene available to overwrite");
            c.genes[victim] = Gene{true, pick};
        }
        cover_with(all.pairings[pick], counts, uncovered);
    }
    c.fitness.reset();
    redundant_pairing_removal(c, all);
}

void redundant_pairing_removal(Chromosome& c, const AllPairs& all) {
    std::vector<int> counts = c.coverage_counts(all);
    for (int k = 0; k < c.expressed_len; ++k) {
        if (!c.genes[k].selected) continue;
        const Pairing& p = all.pairings[c.genes[k].pairing_id];
        bool removable = true;
        for (int fid : p.coverage)
            if (counts[fid] < 2) { removable = false; break; }
        if (removable) {
            c.genes[k].selected = false;
            for (int fid : p.coverage) --counts[fid];
            c.fitness.reset();
        }
    }
}

Cents evaluate(Chromosome& c, const AllPairs& all, const FitnessConfig& cfg) {
    if (c.fitness) return *c.fitness;
    std::vector<int> counts = c.coverage_counts(all);
    for (int cnt : counts)
        if (cnt == 0)
            throw std::logic_error("evaluate called on infeasible chromosome");
    Cents cost = 0;
    for (int pid : c.active_pairings()) cost += all.pairings[pid].cost;
    Cents fit = cost + deadhead_count(counts) * cfg.dhd_penalty;
    c.fitness = fit;
    return fit;
}

Population replace_generational(const Population& parents,
                                const Population& children) {
    assert(parents.size() == children.size());
    std::vector<int> order(parents.size() + children.size());
    std::iota(order.begin(), order.end(), 0);
    auto fit = [&](int i) -> Cents {
        return i < static_cast<int>(parents.size())
                   ? parents[i].fitness.value()
                   : children[i - parents.size()].fitness.value();
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return fit(a) < fit(b); });
    Population next;
    next.reserve(parents.size());
    for (std::size_t r = 0; r < parents.size(); ++r) {
        int i = order[r];
        next.push_back(i < static_cast<int>(parents.size())
                           ? parents[i]
                           : children[i - parents.size()]);
    }
    return next;
}

namespace {

TracePoint snapshot(const Population& pop, const AllPairs& all,
                    double elapsed, int generation) {
    int b = fittest_index(pop);
    const Chromosome& best = pop[b];
    TracePoint tp;
    tp.elapsed_sec = elapsed;
    tp.generation = generation;
    tp.best_cost = 0;
    for (int pid : best.active_pairings()) tp.best_cost += all.pairings[pid].cost;
    tp.best_deadheads = deadhead_count(best.coverage_counts(all));
    return tp;
}

}  // namespace

RunRecord run(const AllPairs& all, const GaConfig& cfg, std::uint64_t seed) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    // Pure generation-cap runs report zero elapsed times so outputs are
    // byte-identical across reruns.
    const bool timed = cfg.budget_seconds.has_value();
    auto elapsed = [&]() -> double {
        if (!timed) return 0.0;
        return std::chrono::duration<double>(clock::now() - t0).count();
    };

    Rng rng(seed);
    FitnessConfig fc{cfg.dhd_penalty};
    Population pop = (cfg.variant == GaVariant::GA1)
                         ? random_initialize(all, cfg.population_size, rng)
                         : dhd_min_initialize(all, cfg.population_size, rng);
    for (Chromosome& c : pop) evaluate(c, all, fc);

    RunRecord rec;
    rec.config = to_string(cfg.variant);
    rec.seed = seed;
    rec.trace.push_back(snapshot(pop, all, elapsed(), 0));
    rec.early_snapshot = rec.trace.front();

    const int length = pop.front().length();
    const double mut_rate = cfg.mutation_rate_factor / length;
    int gen = 0;
    while (true) {
        if (cfg.budget_generations && gen >= *cfg.budget_generations) break;
        if (cfg.budget_seconds && elapsed() >= *cfg.budget_seconds) break;
        if (cfg.target_fitness &&
            pop[fittest_index(pop)].fitness.value() <= *cfg.target_fitness)
            break;
        if (!cfg.budget_generations && !cfg.budget_seconds) break;

        const int fit_idx = fittest_index(pop);
        Population children;
        children.reserve(cfg.population_size);
        while (static_cast<int>(children.size()) < cfg.population_size) {
            auto [i, j] = tournament_select(pop, rng);
            Chromosome c1, c2;
            if (rng.bernoulli(cfg.crossover_rate)) {
                if (cfg.variant == GaVariant::GA4)
                    std::tie(c1, c2) = crossover2_dhd_min(pop[i], pop[j], all, rng);
                else
                    std::tie(c1, c2) = crossover1_fusion(pop[i], pop[j], rng);
            } else {
                c1 = pop[i];
                c2 = pop[j];
            }
            for (Chromosome* c : {&c1, &c2}) {
                if (cfg.variant == GaVariant::GA1 ||
                    cfg.variant == GaVariant::GA2)
                    mutation1_bitflip(*c, mut_rate, rng);
                else
                    mutation2_density(*c, mut_rate, pop[fit_idx], rng);
                repair(*c, all);
                evaluate(*c, all, fc);
                if (static_cast<int>(children.size()) < cfg.population_size)
                    children.push_back(std::move(*c));
            }
        }
        pop = replace_generational(pop, children);
        ++gen;
        rec.trace.push_back(snapshot(pop, all, elapsed(), gen));
    }

    rec.generations = gen;
    const Chromosome& best = pop[fittest_index(pop)];
    rec.best_fitness = best.fitness.value();
    rec.best_pairing_ids = best.active_pairings();
    std::sort(rec.best_pairing_ids.begin(), rec.best_pairing_ids.end());
    rec.best_num_pairings = static_cast<int>(rec.best_pairing_ids.size());
    rec.best_cost = 0;
    for (int pid : rec.best_pairing_ids) rec.best_cost += all.pairings[pid].cost;
    rec.best_deadheads = deadhead_count(best.coverage_counts(all));
    return rec;
}

}  // namespace crewpair
