#pragma once

#include <cstdint>
#include <vector>

#include "crewpair/model.hpp"
#include "crewpair/pairing_gen.hpp"

namespace crewpair {

struct SyntheticSpec {
    int num_flights = 20;
    int num_airports = 5;
    int num_bases = 1;
    int time_horizon_days = 3;
    double hub_factor = 0.5;  // probability an off-base leg targets a base
    std::uint64_t seed = 0;
};

// Deterministic per seed. Flights are built as base-anchored rotations
// (each a legal pairing on its own), so full coverage is guaranteed.
// Throws std::runtime_error when 1000 attempts produce no coverable
// instance under the default rules.
Instance generate_instance(const SyntheticSpec& spec);

struct SolveResult {
    Cents objective = 0;  // cost sum + deadheads * penalty
    Cents cost = 0;
    std::int64_t deadheads = 0;
    std::vector<int> selection;  // pairing ids, ascending
};

// Provably optimal set cover under the deadhead-penalized objective.
// Branch-and-bound; guarded to P <= 5000 unless `override_guard`.
SolveResult solve_exact(const AllPairs& all, Cents penalty,
                        bool override_guard = false);

// Constructive baseline: repeatedly take the minimum-quality-index
// pairing, then strip redundant picks.
SolveResult solve_greedy(const AllPairs& all, Cents penalty);

}  // namespace crewpair
