#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crewpair/model.hpp"
#include "crewpair/pairing_gen.hpp"
#include "crewpair/rng.hpp"

namespace crewpair {

// 2-bit gene: b1 decides participation, b2 references a pairing in AllPairs.
struct Gene {
    bool selected = false;
    int pairing_id = -1;

    bool operator==(const Gene&) const = default;
};

// Fixed-length chromosome split into an expressed prefix (the first
// expressed_len genes, which define the solution) and an unexpressed
// remainder kept for diversity.
struct Chromosome {
    std::vector<Gene> genes;
    int expressed_len = 0;
    std::optional<Cents> fitness;  // cache, cleared on any change

    int length() const { return static_cast<int>(genes.size()); }

    // Active pairing ids: expressed genes with b1 = 1.
    std::vector<int> active_pairings() const;
    // Per-flight cover multiplicities of the active pairings.
    std::vector<int> coverage_counts(const AllPairs& all) const;
    bool feasible(const AllPairs& all) const;

    bool operator==(const Chromosome& o) const {
        return genes == o.genes && expressed_len == o.expressed_len;
    }
};

using Population = std::vector<Chromosome>;

struct FitnessConfig {
    Cents dhd_penalty = 0;
};

enum class GaVariant { GA1, GA2, GA3, GA4 };

std::string to_string(GaVariant v);
GaVariant ga_variant_from_string(const std::string& s);

struct GaConfig {
    GaVariant variant = GaVariant::GA4;
    int population_size = 24;
    double crossover_rate = 0.9;
    double mutation_rate_factor = 3.0;  // rate = factor / chromosome length
    Cents dhd_penalty = 0;
    // Termination: whichever bound is set and reached first.
    std::optional<double> budget_seconds;
    std::optional<int> budget_generations;
    // Optional early stop once best fitness <= target (elitism keeps the
    // outcome unchanged versus running out the budget).
    std::optional<Cents> target_fitness;
};

struct TracePoint {
    double elapsed_sec = 0;
    int generation = 0;
    Cents best_cost = 0;  // raw pairing-cost sum of the best individual
    std::int64_t best_deadheads = 0;
};

struct RunRecord {
    std::string config;
    std::uint64_t seed = 0;
    Cents best_fitness = 0;  // objective incl. deadhead penalty
    Cents best_cost = 0;     // sum of selected pairing costs
    std::int64_t best_deadheads = 0;
    int best_num_pairings = 0;
    std::vector<int> best_pairing_ids;
    int generations = 0;
    std::vector<TracePoint> trace;
    TracePoint early_snapshot;  // initial-population best
};

// --- GA operator building blocks ---

// Deadhead-minimizing initialization: expressed parts grown from
// zero-deadhead picks, falling back to min-added-deadhead greedy;
// unexpressed parts filled with random pairings without replacement.
// Chromosome length is 100 + max expressed length over the population.
Population dhd_min_initialize(const AllPairs& all, int pop_size, Rng& rng);

// Baseline random initialization followed by repair.
Population random_initialize(const AllPairs& all, int pop_size, Rng& rng);

// One fully random chromosome (fair-coin b1, uniform b2), not repaired.
Chromosome random_chromosome(const AllPairs& all, int length,
                             int expressed_len, Rng& rng);

// Binary tournament: two random pairs, lower fitness wins each, ties to
// the lower population index. Returns the two winners' indices.
std::pair<int, int> tournament_select(const Population& pop, Rng& rng);

// Fusion crossover: per gene, the child inherits from a parent with
// probability proportional to the other parent's fitness.
std::pair<Chromosome, Chromosome> crossover1_fusion(const Chromosome& p1,
                                                    const Chromosome& p2,
                                                    Rng& rng);

// Deadhead-minimizing crossover: child expressed parts are zero-deadhead
// selections from the parents' combined pairings; unexpressed parts filled
// by maximal dissimilarity with the expressed part.
std::pair<Chromosome, Chromosome> crossover2_dhd_min(const Chromosome& p1,
                                                     const Chromosome& p2,
                                                     const AllPairs& all,
                                                     Rng& rng);

// Bit-flip mutation on b1; b2 untouched.
void mutation1_bitflip(Chromosome& c, double rate, Rng& rng);

// Density mutation: selected genes drift toward the b1 density of the
// fittest individual.
void mutation2_density(Chromosome& c, double rate, const Chromosome& fittest,
                       Rng& rng);

// Quality index of a pairing against the current uncovered set:
// cost / number of uncovered flights it covers. Exposed for the greedy
// baseline; comparisons are done in exact integer arithmetic.
bool qi_less(Cents cost_a, int newly_a, Cents cost_b, int newly_b);

// Feasibility repair: activate minimum-quality-index pairings until every
// flight is covered, then strip redundant pairings.
void repair(Chromosome& c, const AllPairs& all);

// Deactivate expressed pairings whose flights stay covered without them;
// result is 1-minimal. Requires a feasible chromosome.
void redundant_pairing_removal(Chromosome& c, const AllPairs& all);

// Objective: sum of active costs + deadheads * penalty.
// Throws std::logic_error on an infeasible chromosome.
Cents evaluate(Chromosome& c, const AllPairs& all, const FitnessConfig& cfg);

// Elitist generational replacement: best n of parents + children, ties
// favoring parents then lower index.
Population replace_generational(const Population& parents,
                                const Population& children);

RunRecord run(const AllPairs& all, const GaConfig& cfg, std::uint64_t seed);

}  // namespace crewpair
