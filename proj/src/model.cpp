#include "crewpair/model.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace crewpair {

bool Instance::is_base(const std::string& airport) const {
    return std::find(bases.begin(), bases.end(), airport) != bases.end();
}

void Instance::validate() const {
    if (!rules.valid()) throw std::invalid_argument("invalid legality rules");
    if (bases.empty()) throw std::invalid_argument("no crew bases");
    for (std::size_t i = 0; i < flights.size(); ++i) {
        const Flight& f = flights[i];
        if (f.id != static_cast<int>(i))
            throw std::invalid_argument("flight ids must be dense 0..F-1");
        if (f.arrival <= f.departure)
            throw std::invalid_argument("flight " + std::to_string(f.id) +
                                        ": arrival not after departure");
        if (f.origin == f.destination)
            throw std::invalid_argument("flight " + std::to_string(f.id) +
                                        ": origin equals destination");
    }
    for (const std::string& b : bases) {
        bool seen = false;
        for (const Flight& f : flights)
            if (f.origin == b || f.destination == b) { seen = true; break; }
        if (!seen)
            throw std::invalid_argument("base " + b + " not in any flight");
    }
}

Minutes duty_start(const Instance& inst, const Duty& d) {
    return inst.flights[d.flights.front()].departure - d.briefing_minutes;
}

Minutes duty_end(const Instance& inst, const Duty& d) {
    return inst.flights[d.flights.back()].arrival + d.debriefing_minutes;
}

Minutes duty_flying(const Instance& inst, const Duty& d) {
    Minutes total = 0;
    for (int fid : d.flights) total += inst.flights[fid].block_minutes();
    return total;
}

std::int64_t deadhead_count(const std::vector<int>& coverage_counts) {
    std::int64_t dhd = 0;
    for (int c : coverage_counts)
        if (c > 1) dhd += c - 1;
    return dhd;
}

Cents pairing_cost(Minutes total_flying, int num_duties, const CostModel& m) {
    Cents c = m.per_flying_minute * total_flying +
              m.per_duty_fixed * num_duties +
              m.hotel_night * (num_duties - 1);
    return std::max(c, m.pairing_guarantee_minimum);
}

Cents pairing_cost(const Instance& inst, const Pairing& p) {
    Minutes flying = 0;
    for (const Duty& d : p.duties) flying += duty_flying(inst, d);
    return pairing_cost(flying, p.num_duties(), inst.cost_model);
}

std::string check_duty(const Instance& inst, const Duty& d) {
    if (d.flights.empty()) return "empty duty";
    const int F = inst.flight_count();
    for (int fid : d.flights)
        if (fid < 0 || fid >= F) return "flight id out of range";
    for (std::size_t k = 0; k + 1 < d.flights.size(); ++k) {
        const Flight& a = inst.flights[d.flights[k]];
        const Flight& b = inst.flights[d.flights[k + 1]];
        if (a.destination != b.origin) return "airport discontinuity in duty";
        Minutes sit = b.departure - a.arrival;
        if (sit < inst.rules.min_sit) return "sit below minimum";
        if (sit > inst.rules.max_sit) return "sit above maximum";
    }
    if (duty_flying(inst, d) > inst.rules.max_duty_flying)
        return "duty flying time exceeded";
    if (duty_end(inst, d) - duty_start(inst, d) > inst.rules.max_duty_span)
        return "duty span exceeded";
    return "";
}

std::string check_pairing(const Instance& inst, const Pairing& p) {
    if (p.duties.empty()) return "empty pairing";
    if (p.num_duties() > inst.rules.max_duties_per_pairing)
        return "too many duties";
    for (const Duty& d : p.duties) {
        std::string err = check_duty(inst, d);
        if (!err.empty()) return err;
    }
    const Duty& first = p.duties.front();
    const Duty& last = p.duties.back();
    if (inst.flights[first.flights.front()].origin != p.base)
        return "pairing does not start at base";
    if (inst.flights[last.flights.back()].destination != p.base)
        return "pairing does not end at base";
    if (!inst.is_base(p.base)) return "base is not a crew base";
    for (std::size_t k = 0; k + 1 < p.duties.size(); ++k) {
        const Duty& a = p.duties[k];
        const Duty& b = p.duties[k + 1];
        const Flight& fa = inst.flights[a.flights.back()];
        const Flight& fb = inst.flights[b.flights.front()];
        if (fa.destination != fb.origin)
            return "airport discontinuity between duties";
        Minutes rest = duty_start(inst, b) - duty_end(inst, a);
        if (rest < inst.rules.min_rest) return "rest below minimum";
        if (rest > kMaxLayoverMinutes) return "layover above maximum";
    }
    Minutes span = duty_end(inst, last) - duty_start(inst, first);
    if (span > static_cast<Minutes>(inst.rules.max_pairing_days) * 24 * 60)
        return "pairing span exceeded";
    std::set<int> seen;
    std::vector<int> flat;
    for (const Duty& d : p.duties)
        for (int fid : d.flights) {
            if (!seen.insert(fid).second) return "flight repeated in pairing";
            flat.push_back(fid);
        }
    std::vector<int> sorted(flat);
    std::sort(sorted.begin(), sorted.end());
    if (sorted != p.coverage) return "coverage set inconsistent";
    if (p.cost != pairing_cost(inst, p)) return "cost inconsistent";
    return "";
}

}  // namespace crewpair
