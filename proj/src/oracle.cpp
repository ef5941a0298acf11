#include "crewpair/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "crewpair/ga.hpp"
#include "crewpair/rng.hpp"

namespace crewpair {

namespace {

std::string airport_code(int i) {
    std::string s = "AAA";
    s[0] = static_cast<char>('A' + (i / 676) % 26);
    s[1] = static_cast<char>('A' + (i / 26) % 26);
    s[2] = static_cast<char>('A' + i % 26);
    return s;
}

struct RawFlight {
    std::string origin, destination;
    Minutes dep, arr;
};

// One base-anchored rotation of `legs` flights, returning to base. Legs
// and sits are sized so the whole rotation fits a single legal duty.
void add_rotation(std::vector<RawFlight>& out, const std::string& base,
                  const std::vector<std::string>& airports,
                  const std::vector<std::string>& bases, int legs,
                  Minutes horizon, double hub_factor, Rng& rng) {
    Minutes t = 60 + static_cast<Minutes>(rng.uniform_index(
                         static_cast<std::size_t>(std::max<Minutes>(
                             1, horizon - 12 * 60))));
    std::string here = base;
    for (int k = 0; k < legs; ++k) {
        std::string next;
        if (k == legs - 1) {
            next = base;
        } else {
            // Penultimate stops must differ from the base so the closing
            // leg is a real flight.
            std::vector<std::string> cands;
            auto collect = [&](const std::vector<std::string>& pool) {
                cands.clear();
                for (const auto& a : pool)
                    if (a != here && !(k == legs - 2 && a == base))
                        cands.push_back(a);
            };
            if (rng.bernoulli(hub_factor)) collect(bases);
            if (cands.empty()) collect(airports);
            next = cands[rng.uniform_index(cands.size())];
        }
        Minutes block = 60 + static_cast<Minutes>(rng.uniform_index(51));
        out.push_back(RawFlight{here, next, t, t + block});
        t += block + 35 + static_cast<Minutes>(rng.uniform_index(26));
        here = next;
    }
}

}  // namespace

Instance generate_instance(const SyntheticSpec& spec) {
    if (spec.num_flights < 2 || spec.num_airports < 2 || spec.num_bases < 1 ||
        spec.num_bases > spec.num_airports || spec.time_horizon_days < 1)
        throw std::invalid_argument("invalid synthetic spec");

    std::vector<std::string> airports, bases;
    for (int i = 0; i < spec.num_airports; ++i)
        airports.push_back(airport_code(i));
    for (int i = 0; i < spec.num_bases; ++i) bases.push_back(airports[i]);

    for (int attempt = 0; attempt < 1000; ++attempt) {
        Rng rng(spec.seed + 0x9E3779B97F4A7C15ULL * attempt);
        std::vector<RawFlight> raw;
        int remaining = spec.num_flights;
        int rotation = 0;
        const Minutes horizon =
            static_cast<Minutes>(spec.time_horizon_days) * 1440;
        while (remaining > 0) {
            int legs;
            if (remaining == 2 || remaining == 4) legs = 2;
            else if (remaining == 3) legs = 3;
            else legs = rng.bernoulli(0.5) ? 2 : 3;
            // Triangles need two distinct non-base stops.
            if (legs == 3 && spec.num_airports - 1 < 2) legs = 2;
            if (legs == 3 && remaining == 4) legs = 2;
            // First rotations visit each base in turn so no base is left
            // without flights; later ones pick freely.
            const std::string& base =
                rotation < static_cast<int>(bases.size())
                    ? bases[rotation]
                    : bases[rng.uniform_index(bases.size())];
            add_rotation(raw, base, airports, bases, legs, horizon,
                         spec.hub_factor, rng);
            remaining -= legs;
            ++rotation;
        }
        std::sort(raw.begin(), raw.end(), [](const RawFlight& a,
                                             const RawFlight& b) {
            if (a.dep != b.dep) return a.dep < b.dep;
            if (a.arr != b.arr) return a.arr < b.arr;
            if (a.origin != b.origin) return a.origin < b.origin;
            return a.destination < b.destination;
        });

        Instance inst;
        inst.bases = bases;
        for (std::size_t i = 0; i < raw.size(); ++i)
            inst.flights.push_back(Flight{static_cast<int>(i), raw[i].origin,
                                          raw[i].destination, raw[i].dep,
                                          raw[i].arr});
        // Synthetic price book: $1.50/flying-minute, $120 per duty,
        // $90 hotel night, $300 pairing minimum.
        inst.cost_model =
            CostModel{/*per_flying_minute=*/150, /*per_duty_fixed=*/12000,
                      /*hotel_night=*/9000, /*pairing_guarantee_minimum=*/30000};
        try {
            inst.validate();
        } catch (const std::invalid_argument&) {
            continue;  // e.g. an unlucky draw left a base unused
        }
        if (enumerate_all(inst).fully_coverable()) return inst;
    }
    throw std::runtime_error("no coverable instance after 1000 attempts");
}

SolveResult solve_greedy(const AllPairs& all, Cents penalty) {
    std::vector<int> counts(all.flight_count, 0);
    int uncovered = all.flight_count;
    std::vector<int> picks;
    auto newly_of = [&](int pid) {
        int n = 0;
        for (int fid : all.pairings[pid].coverage)
            if (counts[fid] == 0) ++n;
        return n;
    };
    while (uncovered > 0) {
        int pick = -1, pick_newly = 0;
        for (int pid = 0; pid < all.pairing_count(); ++pid) {
            int newly = newly_of(pid);
            if (newly == 0) continue;
            const Pairing& p = all.pairings[pid];
            if (pick < 0 ||
                qi_less(p.cost, newly, all.pairings[pick].cost, pick_newly) ||
                (!qi_less(all.pairings[pick].cost, pick_newly, p.cost, newly) &&
                 p.cost < all.pairings[pick].cost)) {
                pick = pid;
                pick_newly = newly;
            }
        }
        if (pick < 0) throw std::runtime_error("greedy: uncoverable flight");
        picks.push_back(pick);
        for (int fid : all.pairings[pick].coverage) {
            if (counts[fid] == 0) --uncovered;
            ++counts[fid];
        }
    }
    // Redundant removal, first-pick order.
    std::vector<int> kept;
    for (int pid : picks) {
        bool removable = true;
        for (int fid : all.pairings[pid].coverage)
            if (counts[fid] < 2) { removable = false; break; }
        if (removable) {
            for (int fid : all.pairings[pid].coverage) --counts[fid];
        } else {
            kept.push_back(pid);
        }
    }
    SolveResult res;
    res.selection = kept;
    std::sort(res.selection.begin(), res.selection.end());
    for (int pid : res.selection) res.cost += all.pairings[pid].cost;
    res.deadheads = deadhead_count(counts);
    res.objective = res.cost + res.deadheads * penalty;
    return res;
}

namespace {

struct BnB {
    const AllPairs* all;
    Cents penalty;
    std::vector<std::vector<int>> candidates;  // per flight, QI-ordered
    std::vector<double> minfrac;               // per flight cheapest share
    std::vector<int> counts;
    std::vector<char> banned;
    std::vector<int> chosen;
    Cents best_obj = 0;
    std::vector<int> best_sel;

    void search(Cents cost, std::int64_t coverings, int covered,
                double frac_uncovered) {
        const int F = all->flight_count;
        if (covered == F) {
            Cents obj = cost + penalty * (coverings - F);
            if (obj < best_obj) {
                best_obj = obj;
                best_sel = chosen;
            }
            return;
        }
        // Each uncovered flight needs one more covering; its cheapest
        // fractional share bounds the extra cost from below.
        double lb = static_cast<double>(cost) +
                    static_cast<double>(penalty) *
                        static_cast<double>(coverings - covered) +
                    frac_uncovered;
        if (lb >= static_cast<double>(best_obj) - 0.5) return;

        int branch = -1;
        for (int fid = 0; fid < F; ++fid)
            if (counts[fid] == 0) { branch = fid; break; }

        std::vector<int> tried;
        for (int pid : candidates[branch]) {
            if (banned[pid]) continue;
            const Pairing& p = all->pairings[pid];
            Cents ncost = cost + p.cost;
            std::int64_t ncov = coverings + static_cast<std::int64_t>(
                                                p.coverage.size());
            int ncovered = covered;
            double nfrac = frac_uncovered;
            for (int fid : p.coverage) {
                if (counts[fid] == 0) {
                    ++ncovered;
                    nfrac -= minfrac[fid];
                }
                ++counts[fid];
            }
            chosen.push_back(pid);
            search(ncost, ncov, ncovered, nfrac);
            chosen.pop_back();
            for (int fid : p.coverage) --counts[fid];
            banned[pid] = 1;
            tried.push_back(pid);
        }
        for (int pid : tried) banned[pid] = 0;
    }
};

}  // namespace

SolveResult solve_exact(const AllPairs& all, Cents penalty,
                        bool override_guard) {
    if (!override_guard && all.pairing_count() > 5000)
        throw std::runtime_error("solve_exact: instance too large (P > 5000)");
    if (!all.fully_coverable())
        throw std::runtime_error("solve_exact: uncoverable flights");

    BnB bnb;
    bnb.all = &all;
    bnb.penalty = penalty;
    bnb.counts.assign(all.flight_count, 0);
    bnb.banned.assign(all.pairings.size(), 0);
    bnb.candidates.resize(all.flight_count);
    bnb.minfrac.assign(all.flight_count, 0.0);
    double frac_total = 0.0;
    for (int fid = 0; fid < all.flight_count; ++fid) {
        bnb.candidates[fid] = all.covering[fid];
        std::sort(bnb.candidates[fid].begin(), bnb.candidates[fid].end(),
                  [&](int a, int b) {
                      const Pairing& pa = all.pairings[a];
                      const Pairing& pb = all.pairings[b];
                      if (qi_less(pa.cost, static_cast<int>(pa.coverage.size()),
                                  pb.cost, static_cast<int>(pb.coverage.size())))
                          return true;
                      if (qi_less(pb.cost, static_cast<int>(pb.coverage.size()),
                                  pa.cost, static_cast<int>(pa.coverage.size())))
                          return false;
                      if (pa.cost != pb.cost) return pa.cost < pb.cost;
                      return a < b;
                  });
        double mf = 1e300;
        for (int pid : all.covering[fid]) {
            const Pairing& p = all.pairings[pid];
            mf = std::min(mf, static_cast<double>(p.cost) /
                                  static_cast<double>(p.coverage.size()));
        }
        bnb.minfrac[fid] = mf;
        frac_total += mf;
    }

    SolveResult greedy = solve_greedy(all, penalty);
    bnb.best_obj = greedy.objective;
    bnb.best_sel = greedy.selection;
    bnb.search(0, 0, 0, frac_total);

    SolveResult res;
    res.selection = bnb.best_sel;
    std::sort(res.selection.begin(), res.selection.end());
    std::vector<int> counts(all.flight_count, 0);
    for (int pid : res.selection) {
        res.cost += all.pairings[pid].cost;
        for (int fid : all.pairings[pid].coverage) ++counts[fid];
    }
    res.deadheads = deadhead_count(counts);
    res.objective = res.cost + res.deadheads * penalty;
    return res;
}

}  // namespace crewpair
