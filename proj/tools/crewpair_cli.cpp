#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "crewpair/ga.hpp"
#include "crewpair/harness.hpp"
#include "crewpair/io.hpp"
#include "crewpair/model.hpp"
#include "crewpair/oracle.hpp"
#include "crewpair/pairing_gen.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace crewpair;

namespace {

// Exit codes: 0 ok, 1 usage, 2 infeasible instance, 3 I/O error.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitIo = 3;

int log_level() {
    const char* env = std::getenv("CREWPAIR_LOG");
    if (!env) return 1;  // info
    std::string v = env;
    if (v == "debug") return 0;
    if (v == "info") return 1;
    if (v == "warn") return 2;
    if (v == "error") return 3;
    return 1;
}

void log_info(const std::string& msg) {
    if (log_level() <= 1) std::cerr << "[crewpair] " << msg << "\n";
}

std::uint64_t parse_seed(const std::string& s) {
    if (s.find('.') != std::string::npos) {
        double f = std::stod(s);
        if (f < 0.0 || f >= 1.0)
            throw std::invalid_argument("float seed must be in [0,1)");
        return Rng::seed_from_unit_float(f);
    }
    return std::stoull(s);
}

struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int cmd_generate_instance(const SyntheticSpec& spec, const std::string& out) {
    Instance inst = generate_instance(spec);
    write_schedule_csv(out + ".csv", inst.flights);
    InstanceConfig cfg{inst.bases, inst.rules, inst.cost_model};
    write_instance_config(out + ".json", cfg);
    std::cout << "flights=" << inst.flight_count()
              << " airports=" << spec.num_airports << " bases=" << spec.num_bases
              << " schedule=" << out << ".csv config=" << out << ".json\n";
    return kExitOk;
}

int cmd_enumerate(const std::string& schedule, const std::string& rules,
                  const std::string& out, const std::string& csv) {
    Instance inst = load_instance(schedule, rules);
    AllPairs all = enumerate_all(inst);
    if (!all.fully_coverable()) {
        std::cerr << "infeasible: uncoverable flights:";
        for (int fid : all.uncoverable) std::cerr << ' ' << fid;
        std::cerr << "\n";
        return kExitInfeasible;
    }
    write_allpairs(out, all);
    if (!csv.empty()) export_allpairs_csv(csv, all);
    std::cout << "flights=" << all.flight_count
              << " pairings=" << all.pairing_count()
              << " uncoverable=" << all.uncoverable.size() << "\n";
    return kExitOk;
}

int cmd_solve(const std::string& allpairs_path, const std::string& config_path,
              const std::string& seed_str, const std::string& out,
              double budget_seconds, int budget_generations) {
    AllPairs all = read_allpairs(allpairs_path);
    GaConfigFile cf = read_ga_config(config_path);
    std::uint64_t seed = cf.seed;
    if (!seed_str.empty()) seed = parse_seed(seed_str);
    else if (!cf.seed_present)
        throw std::invalid_argument("no seed in config and no --seed given");
    if (budget_seconds > 0) cf.ga.budget_seconds = budget_seconds;
    if (budget_generations >= 0) cf.ga.budget_generations = budget_generations;

    std::string resolved = ga_config_to_json(cf.ga, seed);
    std::string hash = config_hash(resolved);
    log_info("resolved config (hash " + hash + "):\n" + resolved);
    if (!all.fully_coverable())
        throw InfeasibleError("allpairs does not cover all flights");

    RunRecord rec = run(all, cf.ga, seed);
    atomic_write(out, run_record_to_json(rec, hash));
    write_trace_csv(out + ".trace.csv", rec.trace);
    std::cout << "config=" << rec.config << " seed=" << rec.seed
              << " best_cost_cents=" << rec.best_cost
              << " best_fitness_cents=" << rec.best_fitness
              << " deadheads=" << rec.best_deadheads
              << " pairings=" << rec.best_num_pairings
              << " generations=" << rec.generations << "\n";
    return kExitOk;
}

int cmd_oracle(const std::string& allpairs_path, Cents penalty,
               const std::string& mode, bool force, const std::string& out) {
    AllPairs all = read_allpairs(allpairs_path);
    if (!all.fully_coverable())
        throw InfeasibleError("allpairs does not cover all flights");
    SolveResult res = mode == "greedy" ? solve_greedy(all, penalty)
                                       : solve_exact(all, penalty, force);
    json j;
    j["version"] = kToolkitVersion;
    j["solver"] = mode;
    j["dhd_penalty_cents"] = penalty;
    j["objective_cents"] = res.objective;
    j["cost_cents"] = res.cost;
    j["deadheads"] = res.deadheads;
    j["num_pairings"] = res.selection.size();
    j["pairing_ids"] = res.selection;
    atomic_write(out, j.dump(2) + "\n");
    std::cout << "solver=" << mode << " objective_cents=" << res.objective
              << " cost_cents=" << res.cost << " deadheads=" << res.deadheads
              << " pairings=" << res.selection.size() << "\n";
    return kExitOk;
}

ExperimentPlan read_plan(const std::string& path, std::string& allpairs_path,
                         Cents& reference_cost, std::string& reference_label) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open plan: " + path);
    json j = json::parse(in);
    ExperimentPlan plan;
    allpairs_path = j.at("allpairs").get<std::string>();
    for (const auto& c : j.at("configurations"))
        plan.configurations.push_back(
            ga_variant_from_string(c.get<std::string>()));
    for (const auto& s : j.at("seeds")) {
        if (s.is_number_float()) {
            double f = s.get<double>();
            if (f < 0.0 || f >= 1.0)
                throw std::runtime_error("float seeds must be in [0,1)");
            plan.seeds.push_back(Rng::seed_from_unit_float(f));
        } else {
            plan.seeds.push_back(s.get<std::uint64_t>());
        }
    }
    const json& budget = j.at("budget");
    if (budget.contains("seconds"))
        plan.budget_seconds = budget["seconds"].get<double>();
    if (budget.contains("generations"))
        plan.budget_generations = budget["generations"].get<int>();
    if (!plan.budget_seconds && !plan.budget_generations)
        throw std::runtime_error("plan budget needs seconds or generations");
    if (j.contains("population_size"))
        plan.population_size = j["population_size"].get<int>();
    if (j.contains("crossover_rate"))
        plan.crossover_rate = j["crossover_rate"].get<double>();
    if (j.contains("mutation_rate_factor"))
        plan.mutation_rate_factor = j["mutation_rate_factor"].get<double>();
    if (j.contains("dhd_penalty_cents"))
        plan.dhd_penalty = j["dhd_penalty_cents"].get<Cents>();
    reference_cost = -1;
    reference_label = "greedy";
    if (j.contains("reference")) {
        const json& ref = j["reference"];
        if (ref.is_object()) {
            reference_cost = ref.at("cost_cents").get<Cents>();
            reference_label = "external";
        } else {
            reference_label = ref.get<std::string>();
        }
    }
    plan.reference = reference_label;
    return plan;
}

int cmd_experiment(const std::string& plan_path, const std::string& out_dir,
                   int workers) {
    std::string allpairs_path, reference_label;
    Cents reference_cost;
    ExperimentPlan plan =
        read_plan(plan_path, allpairs_path, reference_cost, reference_label);
    AllPairs all = read_allpairs(allpairs_path);
    if (!all.fully_coverable())
        throw InfeasibleError("allpairs does not cover all flights");

    std::ifstream pf(plan_path);
    std::stringstream plan_text;
    plan_text << pf.rdbuf();
    std::string hash = config_hash(plan_text.str());
    log_info("experiment plan hash " + hash + ", " +
             std::to_string(plan.configurations.size()) + " configs x " +
             std::to_string(plan.seeds.size()) + " seeds");

    ExperimentOutcome outcome = run_experiment(all, plan, workers);
    if (outcome.records.empty()) {
        std::cerr << "all runs failed\n";
        for (const std::string& f : outcome.failures) std::cerr << "  " << f << "\n";
        return kExitInfeasible;
    }

    fs::create_directories(out_dir);
    for (const RunRecord& rec : outcome.records) {
        std::string stem = out_dir + "/trace_" + rec.config + "_" +
                           std::to_string(rec.seed);
        write_trace_csv(stem + ".csv", rec.trace);
        atomic_write(out_dir + "/run_" + rec.config + "_" +
                         std::to_string(rec.seed) + ".json",
                     run_record_to_json(rec, hash));
    }
    atomic_write(out_dir + "/summary.csv",
                 summary_to_csv(summarize(outcome.records)));

    if (reference_label == "greedy")
        reference_cost = solve_greedy(all, plan.dhd_penalty).cost;
    else if (reference_label == "oracle")
        reference_cost = solve_exact(all, plan.dhd_penalty).cost;
    atomic_write(out_dir + "/gaps.csv",
                 gaps_to_csv(gap_report(outcome.records, reference_cost),
                             reference_cost, reference_label));

    json manifest;
    manifest["version"] = kToolkitVersion;
    manifest["config_hash"] = hash;
    manifest["runs"] = outcome.records.size();
    manifest["failures"] = outcome.failures;
    atomic_write(out_dir + "/manifest.json", manifest.dump(2) + "\n");

    std::cout << summary_to_text(summarize(outcome.records));
    std::cout << "reference(" << reference_label
              << ") cost_cents=" << reference_cost << "\n";
    if (!outcome.failures.empty()) {
        std::cerr << "warning: " << outcome.failures.size() << " run(s) failed:\n";
        for (const std::string& f : outcome.failures)
            std::cerr << "  " << f << "\n";
    }
    return kExitOk;
}

int cmd_report_check(const std::string& run_path,
                     const std::string& allpairs_path) {
    AllPairs all = read_allpairs(allpairs_path);
    std::ifstream in(run_path);
    if (!in) throw std::runtime_error("cannot open run record: " + run_path);
    json j = json::parse(in);
    std::vector<int> ids = j.at("best_pairing_ids").get<std::vector<int>>();

    std::vector<int> counts(all.flight_count, 0);
    Cents cost = 0;
    for (int pid : ids) {
        if (pid < 0 || pid >= all.pairing_count())
            throw std::runtime_error("pairing id out of range");
        cost += all.pairings[pid].cost;
        for (int fid : all.pairings[pid].coverage) ++counts[fid];
    }
    for (int fid = 0; fid < all.flight_count; ++fid)
        if (counts[fid] == 0) {
            std::cerr << "check failed: flight " << fid << " uncovered\n";
            return kExitInfeasible;
        }
    std::int64_t dhd = deadhead_count(counts);
    if (cost != j.at("best_cost_cents").get<Cents>()) {
        std::cerr << "check failed: recorded cost " << j["best_cost_cents"]
                  << " != recomputed " << cost << "\n";
        return kExitInfeasible;
    }
    if (dhd != j.at("best_deadheads").get<std::int64_t>()) {
        std::cerr << "check failed: recorded deadheads " << j["best_deadheads"]
                  << " != recomputed " << dhd << "\n";
        return kExitInfeasible;
    }
    std::cout << "check ok: cost_cents=" << cost << " deadheads=" << dhd
              << " pairings=" << ids.size() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"crewpair: crew pairing enumeration and GA optimization"};
    app.require_subcommand(1);

    // generate-instance
    auto* gen = app.add_subcommand("generate-instance",
                                   "generate a synthetic instance");
    SyntheticSpec spec;
    std::string gen_out;
    std::string gen_seed = "0";
    gen->add_option("--flights", spec.num_flights, "number of flights");
    gen->add_option("--airports", spec.num_airports, "number of airports");
    gen->add_option("--bases", spec.num_bases, "number of crew bases");
    gen->add_option("--days", spec.time_horizon_days, "time horizon in days");
    gen->add_option("--hub-factor", spec.hub_factor, "hub concentration [0,1]");
    gen->add_option("--seed", gen_seed, "random seed (int or float in [0,1))");
    gen->add_option("--out", gen_out, "output path prefix")->required();

    // enumerate
    auto* enu = app.add_subcommand("enumerate", "enumerate all legal pairings");
    std::string enu_schedule, enu_rules, enu_out, enu_csv;
    enu->add_option("--schedule", enu_schedule, "schedule CSV")->required();
    enu->add_option("--rules", enu_rules, "instance config JSON")->required();
    enu->add_option("--out", enu_out, "allpairs output file")->required();
    enu->add_option("--csv", enu_csv, "also export inspection CSV");

    // solve
    auto* sol = app.add_subcommand("solve", "run one GA optimization");
    std::string sol_allpairs, sol_config, sol_seed, sol_out;
    double sol_budget_s = 0;
    int sol_budget_g = -1;
    sol->add_option("--allpairs", sol_allpairs, "allpairs file")->required();
    sol->add_option("--config", sol_config, "GA config JSON")->required();
    sol->add_option("--seed", sol_seed, "seed override (int or float)");
    sol->add_option("--budget-seconds", sol_budget_s, "wall-clock budget");
    sol->add_option("--budget-generations", sol_budget_g, "generation cap");
    sol->add_option("--out", sol_out, "run record output JSON")->required();

    // oracle
    auto* ora = app.add_subcommand("oracle", "exact or greedy reference solve");
    std::string ora_allpairs, ora_mode = "exact", ora_out;
    Cents ora_penalty = 0;
    bool ora_force = false;
    ora->add_option("--allpairs", ora_allpairs, "allpairs file")->required();
    ora->add_option("--penalty", ora_penalty, "deadhead penalty in cents");
    ora->add_option("--mode", ora_mode, "exact|greedy")
        ->check(CLI::IsMember({"exact", "greedy"}));
    ora->add_flag("--force", ora_force, "override the exact-solver size guard");
    ora->add_option("--out", ora_out, "solution output JSON")->required();

    // experiment
    auto* exp = app.add_subcommand("experiment", "multi-config multi-seed runs");
    std::string exp_plan, exp_out_dir;
    int exp_workers = 1;
    exp->add_option("--plan", exp_plan, "experiment plan JSON")->required();
    exp->add_option("--out", exp_out_dir, "output directory")->required();
    exp->add_option("--workers", exp_workers, "max concurrent runs");

    // report
    auto* rep = app.add_subcommand("report", "validate and report solutions");
    std::string rep_check, rep_allpairs;
    rep->add_option("--check", rep_check, "run record JSON to validate")
        ->required();
    rep->add_option("--allpairs", rep_allpairs, "allpairs file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (gen->parsed()) {
            spec.seed = parse_seed(gen_seed);
            return cmd_generate_instance(spec, gen_out);
        }
        if (enu->parsed()) return cmd_enumerate(enu_schedule, enu_rules, enu_out, enu_csv);
        if (sol->parsed())
            return cmd_solve(sol_allpairs, sol_config, sol_seed, sol_out,
                             sol_budget_s, sol_budget_g);
        if (ora->parsed())
            return cmd_oracle(ora_allpairs, ora_penalty, ora_mode, ora_force,
                              ora_out);
        if (exp->parsed()) return cmd_experiment(exp_plan, exp_out_dir, exp_workers);
        if (rep->parsed()) return cmd_report_check(rep_check, rep_allpairs);
    } catch (const InfeasibleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitUsage;
}
