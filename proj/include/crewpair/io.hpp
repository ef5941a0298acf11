#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crewpair/ga.hpp"
#include "crewpair/model.hpp"
#include "crewpair/pairing_gen.hpp"

namespace crewpair {

// ISO-8601 minute-resolution UTC, e.g. "2026-01-05T08:30" (trailing
// ":00" / "Z" accepted). Throws std::invalid_argument on bad input.
Minutes parse_iso_minutes(const std::string& s);
std::string format_iso_minutes(Minutes m);

// Schedule CSV with required header
// `flight_id,origin,destination,departure_utc,arrival_utc`.
// Errors carry the offending line number.
std::vector<Flight> read_schedule_csv(const std::string& path);
void write_schedule_csv(const std::string& path,
                        const std::vector<Flight>& flights);

// Instance configuration JSON: {"bases": [...], "rules": {...},
// "cost_model": {...}} with every field explicit, no silent defaults.
struct InstanceConfig {
    std::vector<std::string> bases;
    LegalityRules rules;
    CostModel cost_model;
};
InstanceConfig read_instance_config(const std::string& path);
void write_instance_config(const std::string& path, const InstanceConfig& cfg);

Instance load_instance(const std::string& schedule_csv,
                       const std::string& config_json);

// AllPairs artifact: line-delimited text, byte-stable across runs.
void write_allpairs(const std::string& path, const AllPairs& all);
AllPairs read_allpairs(const std::string& path);
// Inspection CSV:
// `pairing_id,base,cost_cents,num_duties,flight_ids(semicolon-joined)`.
void export_allpairs_csv(const std::string& path, const AllPairs& all);

// GA configuration JSON (config, population_size, termination,
// crossover_rate, mutation_rate_factor, dhd_penalty_cents, seed).
struct GaConfigFile {
    GaConfig ga;
    std::uint64_t seed = 0;
    bool seed_present = false;
};
GaConfigFile read_ga_config(const std::string& path);
std::string ga_config_to_json(const GaConfig& cfg, std::uint64_t seed);

// RunRecord JSON plus companion trace CSV with header
// `elapsed_sec,generation,best_cost_cents,best_deadheads`.
std::string run_record_to_json(const RunRecord& rec,
                               const std::string& config_hash);
void write_trace_csv(const std::string& path,
                     const std::vector<TracePoint>& trace);

// Write-then-rename; the destination appears only on success.
void atomic_write(const std::string& path, const std::string& content);

// FNV-1a over the resolved configuration text, hex-encoded.
std::string config_hash(const std::string& resolved);

inline constexpr const char* kToolkitVersion = "0.1.0";

}  // namespace crewpair
