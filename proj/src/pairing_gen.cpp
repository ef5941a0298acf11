#include "crewpair/pairing_gen.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace crewpair {

namespace {

void extend_duty(const Instance& inst, std::vector<int>& seq,
                 std::vector<Duty>& out) {
    Duty d;
    d.flights = seq;
    if (check_duty(inst, d).empty()) out.push_back(d);

    const Flight& last = inst.flights[seq.back()];
    for (int fid = 0; fid < inst.flight_count(); ++fid) {
        const Flight& f = inst.flights[fid];
        if (f.origin != last.destination) continue;
        Minutes sit = f.departure - last.arrival;
        if (sit < inst.rules.min_sit || sit > inst.rules.max_sit) continue;
        // Prune on the duty-level limits before recursing.
        Duty probe;
        probe.flights = seq;
        probe.flights.push_back(fid);
        if (duty_flying(inst, probe) > inst.rules.max_duty_flying) continue;
        if (duty_end(inst, probe) - duty_start(inst, probe) >
            inst.rules.max_duty_span)
            continue;
        seq.push_back(fid);
        extend_duty(inst, seq, out);
        seq.pop_back();
    }
}

}  // namespace

std::vector<Duty> enumerate_duties(const Instance& inst) {
    std::vector<Duty> out;
    for (int fid = 0; fid < inst.flight_count(); ++fid) {
        std::vector<int> seq{fid};
        extend_duty(inst, seq, out);
    }
    std::sort(out.begin(), out.end(), [](const Duty& a, const Duty& b) {
        if (a.flights.front() != b.flights.front())
            return a.flights.front() < b.flights.front();
        if (a.flights.size() != b.flights.size())
            return a.flights.size() < b.flights.size();
        return a.flights < b.flights;
    });
    return out;
}

ConnectionGraph build_connection_graph(const Instance& inst,
                                       std::vector<Duty> duties) {
    ConnectionGraph g;
    g.duty_nodes = std::move(duties);
    const int n = static_cast<int>(g.duty_nodes.size());
    g.rest_arcs.assign(n, {});
    for (int u = 0; u < n; ++u) {
        const Duty& du = g.duty_nodes[u];
        const Flight& lu = inst.flights[du.flights.back()];
        if (inst.is_base(inst.flights[du.flights.front()].origin))
            g.base_sources.push_back(u);
        if (inst.is_base(lu.destination)) g.base_sinks.push_back(u);
        for (int v = 0; v < n; ++v) {
            const Duty& dv = g.duty_nodes[v];
            if (inst.flights[dv.flights.front()].origin != lu.destination)
                continue;
            Minutes rest = duty_start(inst, dv) - duty_end(inst, du);
            if (rest < inst.rules.min_rest || rest > kMaxLayoverMinutes)
                continue;
            g.rest_arcs[u].push_back(v);
        }
    }
    return g;
}

void AllPairs::build_index() {
    covering.assign(flight_count, {});
    for (const Pairing& p : pairings)
        for (int fid : p.coverage) covering[fid].push_back(p.id);
    uncoverable.clear();
    for (int fid = 0; fid < flight_count; ++fid)
        if (covering[fid].empty()) uncoverable.push_back(fid);
}

namespace {

struct PathState {
    const Instance* inst;
    const ConnectionGraph* graph;
    const std::string* base;
    std::vector<int> path;  // duty indices
    // flight sequence -> cheapest construction
    std::map<std::vector<int>, Pairing>* best;
};

void emit_if_better(PathState& st) {
    Pairing p;
    p.base = *st.base;
    for (int di : st.path) p.duties.push_back(st.graph->duty_nodes[di]);
    for (const Duty& d : p.duties)
        for (int fid : d.flights) p.coverage.push_back(fid);
    std::vector<int> seq = p.coverage;  // flying order
    std::sort(p.coverage.begin(), p.coverage.end());
    p.cost = pairing_cost(*st.inst, p);
    if (!check_pairing(*st.inst, p).empty()) return;
    auto it = st.best->find(seq);
    if (it == st.best->end() || p.cost < it->second.cost)
        (*st.best)[seq] = std::move(p);
}

void extend_path(PathState& st) {
    const Instance& inst = *st.inst;
    const ConnectionGraph& g = *st.graph;
    int u = st.path.back();
    if (inst.flights[g.duty_nodes[u].flights.back()].destination == *st.base)
        emit_if_better(st);
    if (static_cast<int>(st.path.size()) >= inst.rules.max_duties_per_pairing)
        return;
    Minutes start = duty_start(inst, g.duty_nodes[st.path.front()]);
    Minutes span_cap = static_cast<Minutes>(inst.rules.max_pairing_days) * 1440;
    for (int v : g.rest_arcs[u]) {
        if (duty_end(inst, g.duty_nodes[v]) - start > span_cap) continue;
        st.path.push_back(v);
        extend_path(st);
        st.path.pop_back();
    }
}

}  // namespace

AllPairs enumerate_pairings(const Instance& inst, const ConnectionGraph& graph) {
    std::map<std::vector<int>, Pairing> best;
    for (const std::string& base : inst.bases) {
        for (int s : graph.base_sources) {
            if (inst.flights[graph.duty_nodes[s].flights.front()].origin !=
                base)
                continue;
            PathState st{&inst, &graph, &base, {s}, &best};
            extend_path(st);
        }
    }
    AllPairs all;
    all.flight_count = inst.flight_count();
    all.pairings.reserve(best.size());
    for (auto& [seq, p] : best) {
        p.id = static_cast<int>(all.pairings.size());
        all.pairings.push_back(std::move(p));
    }
    all.build_index();
    return all;
}

AllPairs enumerate_all(const Instance& inst) {
    return enumerate_pairings(inst,
                              build_connection_graph(inst, enumerate_duties(inst)));
}

}  // namespace crewpair
