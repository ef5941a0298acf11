#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crewpair/ga.hpp"
#include "crewpair/model.hpp"
#include "crewpair/pairing_gen.hpp"

namespace crewpair {

struct ExperimentPlan {
    std::string allpairs_path;  // or schedule+config via the CLI
    std::vector<GaVariant> configurations;
    std::vector<std::uint64_t> seeds;
    std::optional<double> budget_seconds;
    std::optional<int> budget_generations;
    int population_size = 24;
    double crossover_rate = 0.9;
    double mutation_rate_factor = 3.0;
    Cents dhd_penalty = 0;
    std::string reference = "greedy";  // greedy | oracle | cost in cents
};

struct ExperimentOutcome {
    std::vector<RunRecord> records;           // sorted by (config, seed)
    std::vector<std::string> failures;        // per-run error messages
};

// One GA run per (configuration, seed); a failing run is reported and
// does not abort its siblings. `workers` caps concurrent runs.
ExperimentOutcome run_experiment(const AllPairs& all, const ExperimentPlan& plan,
                                 int workers = 1);

struct ConfigSummary {
    std::string config;
    int runs = 0;
    double cost_mean = 0, cost_stddev = 0;  // sample (n-1) stddev
    Cents cost_best = 0, cost_worst = 0;
    double dhd_mean = 0, dhd_stddev = 0;
    std::int64_t dhd_best = 0, dhd_worst = 0;
};

// Per-config mean / sample stddev / best / worst over cost and deadheads.
std::vector<ConfigSummary> summarize(const std::vector<RunRecord>& records);

std::string summary_to_csv(const std::vector<ConfigSummary>& rows);
std::string summary_to_text(const std::vector<ConfigSummary>& rows);

struct GapRow {
    std::string config;
    Cents best_cost = 0;
    double gap_percent = 0;  // (best - reference) / reference * 100
};

// Per-config best cost against a reference cost; gaps rounded to 2
// decimals. Throws std::invalid_argument on a non-positive reference.
std::vector<GapRow> gap_report(const std::vector<RunRecord>& records,
                               Cents reference_cost);
// Same arithmetic for externally supplied best costs.
double gap_percent(Cents best, Cents reference);

std::string gaps_to_csv(const std::vector<GapRow>& rows, Cents reference_cost,
                        const std::string& reference_label);

}  // namespace crewpair
