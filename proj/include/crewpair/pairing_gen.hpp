#pragma once

#include <vector>

#include "crewpair/model.hpp"

namespace crewpair {

// Duty network: legal duties as nodes, legal rest connections as arcs.
// Arcs respect airport continuity and the [min_rest, max layover] window,
// so the graph is a DAG under time ordering.
struct ConnectionGraph {
    std::vector<Duty> duty_nodes;
    std::vector<std::vector<int>> rest_arcs;  // duty index -> successor indices
    std::vector<int> base_sources;            // duties departing a base
    std::vector<int> base_sinks;              // duties arriving at a base
};

// All flight sequences satisfying the duty invariants, in canonical order:
// first flight id, then length, then lexicographic flight ids.
std::vector<Duty> enumerate_duties(const Instance& inst);

ConnectionGraph build_connection_graph(const Instance& inst,
                                       std::vector<Duty> duties);

struct AllPairs {
    int flight_count = 0;
    std::vector<Pairing> pairings;           // dense ids 0..P-1
    std::vector<std::vector<int>> covering;  // flight id -> pairing ids
    std::vector<int> uncoverable;            // flights in no pairing

    int pairing_count() const { return static_cast<int>(pairings.size()); }
    bool fully_coverable() const { return uncoverable.empty(); }
    void build_index();
};

// All base-to-base duty paths satisfying the pairing invariants, costed
// via the instance's cost model. Pairings with identical flight sequences
// are deduplicated to the cheapest duty construction. Output order is
// canonical (lexicographic flight-id sequence) and deterministic.
AllPairs enumerate_pairings(const Instance& inst, const ConnectionGraph& graph);

// Convenience: duties + graph + pairings in one call.
AllPairs enumerate_all(const Instance& inst);

}  // namespace crewpair
