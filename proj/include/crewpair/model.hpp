#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace crewpair {

// Money is integer cents; timestamps are integer minutes since epoch (UTC).
using Cents = std::int64_t;
using Minutes = std::int64_t;

// Briefing/debriefing blocks attached to every duty. The rule set keeps
// these fixed; they enter duty-span and pairing-span arithmetic.
inline constexpr Minutes kBriefingMinutes = 45;
inline constexpr Minutes kDebriefingMinutes = 30;

// Rest arcs longer than this are not connected in the duty network.
inline constexpr Minutes kMaxLayoverMinutes = 36 * 60;

struct Flight {
    int id = -1;
    std::string origin;
    std::string destination;
    Minutes departure = 0;
    Minutes arrival = 0;

    Minutes block_minutes() const { return arrival - departure; }
};

struct LegalityRules {
    Minutes min_sit = 30;
    Minutes max_sit = 4 * 60;
    Minutes max_duty_flying = 8 * 60;
    Minutes max_duty_span = 12 * 60;
    Minutes min_rest = 9 * 60;
    int max_duties_per_pairing = 4;
    int max_pairing_days = 5;

    bool valid() const {
        return min_sit > 0 && min_sit < max_sit && max_duty_flying > 0 &&
               max_duty_span > 0 && min_rest > 0 &&
               max_duties_per_pairing > 0 && max_pairing_days > 0;
    }
};

struct CostModel {
    Cents per_flying_minute = 0;
    Cents per_duty_fixed = 0;
    Cents hotel_night = 0;
    Cents pairing_guarantee_minimum = 0;
};

struct Duty {
    std::vector<int> flights;  // flight ids, in flying order
    Minutes briefing_minutes = kBriefingMinutes;
    Minutes debriefing_minutes = kDebriefingMinutes;
};

struct Pairing {
    int id = -1;
    std::vector<Duty> duties;
    std::string base;
    Cents cost = 0;
    std::vector<int> coverage;  // sorted flight ids, union over duties

    int num_duties() const { return static_cast<int>(duties.size()); }
};

struct Instance {
    std::vector<Flight> flights;
    std::vector<std::string> bases;
    LegalityRules rules;
    CostModel cost_model;

    int flight_count() const { return static_cast<int>(flights.size()); }
    bool is_base(const std::string& airport) const;
    // Throws std::invalid_argument on any broken invariant.
    void validate() const;
};

// Timing helpers; `inst` supplies the flight table.
Minutes duty_start(const Instance& inst, const Duty& d);
Minutes duty_end(const Instance& inst, const Duty& d);
Minutes duty_flying(const Instance& inst, const Duty& d);

// Deadheads of a solution: total flight coverings minus flight count,
// i.e. sum of max(count_i - 1, 0) for a feasible cover.
std::int64_t deadhead_count(const std::vector<int>& coverage_counts);

// Cost of a pairing under the model:
//   max(guarantee, rate * flying + fixed * duties + hotel * (duties - 1)).
Cents pairing_cost(const Instance& inst, const Pairing& p);
Cents pairing_cost(Minutes total_flying, int num_duties, const CostModel& m);

// Full legality re-check from raw fields, independent of how the pairing
// was constructed. Returns an empty string when legal, else a reason.
std::string check_duty(const Instance& inst, const Duty& d);
std::string check_pairing(const Instance& inst, const Pairing& p);

}  // namespace crewpair
