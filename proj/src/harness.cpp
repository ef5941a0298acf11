#include "crewpair/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace crewpair {

ExperimentOutcome run_experiment(const AllPairs& all,
                                 const ExperimentPlan& plan, int workers) {
    if (plan.seeds.empty()) throw std::invalid_argument("plan needs >= 1 seed");
    if (plan.configurations.empty())
        throw std::invalid_argument("plan needs >= 1 configuration");

    struct Job {
        GaVariant variant;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (GaVariant v : plan.configurations)
        for (std::uint64_t s : plan.seeds) jobs.push_back({v, s});

    std::vector<std::optional<RunRecord>> results(jobs.size());
    std::vector<std::string> errors(jobs.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) break;
            GaConfig cfg;
            cfg.variant = jobs[i].variant;
            cfg.population_size = plan.population_size;
            cfg.crossover_rate = plan.crossover_rate;
            cfg.mutation_rate_factor = plan.mutation_rate_factor;
            cfg.dhd_penalty = plan.dhd_penalty;
            cfg.budget_seconds = plan.budget_seconds;
            cfg.budget_generations = plan.budget_generations;
            try {
                results[i] = run(all, cfg, jobs[i].seed);
            } catch (const std::exception& e) {
                errors[i] = to_string(jobs[i].variant) + "/seed " +
                            std::to_string(jobs[i].seed) + ": " + e.what();
            }
        }
    };
    workers = std::max(1, workers);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (int t = 0; t < workers; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }

    ExperimentOutcome out;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (results[i]) out.records.push_back(std::move(*results[i]));
        else out.failures.push_back(errors[i]);
    }
    std::sort(out.records.begin(), out.records.end(),
              [](const RunRecord& a, const RunRecord& b) {
                  if (a.config != b.config) return a.config < b.config;
                  return a.seed < b.seed;
              });
    return out;
}

std::vector<ConfigSummary> summarize(const std::vector<RunRecord>& records) {
    if (records.empty()) throw std::invalid_argument("no records to summarize");
    std::map<std::string, std::vector<const RunRecord*>> by_config;
    for (const RunRecord& r : records) by_config[r.config].push_back(&r);

    auto mean_of = [](const std::vector<double>& v) {
        double s = 0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    };
    auto stddev_of = [&](const std::vector<double>& v, double mean) {
        if (v.size() < 2) return 0.0;
        double s = 0;
        for (double x : v) s += (x - mean) * (x - mean);
        return std::sqrt(s / static_cast<double>(v.size() - 1));
    };

    std::vector<ConfigSummary> rows;
    for (const auto& [config, rs] : by_config) {
        ConfigSummary row;
        row.config = config;
        row.runs = static_cast<int>(rs.size());
        std::vector<double> costs, dhds;
        row.cost_best = rs.front()->best_cost;
        row.cost_worst = rs.front()->best_cost;
        row.dhd_best = rs.front()->best_deadheads;
        row.dhd_worst = rs.front()->best_deadheads;
        for (const RunRecord* r : rs) {
            costs.push_back(static_cast<double>(r->best_cost));
            dhds.push_back(static_cast<double>(r->best_deadheads));
            row.cost_best = std::min(row.cost_best, r->best_cost);
            row.cost_worst = std::max(row.cost_worst, r->best_cost);
            row.dhd_best = std::min(row.dhd_best, r->best_deadheads);
            row.dhd_worst = std::max(row.dhd_worst, r->best_deadheads);
        }
        row.cost_mean = mean_of(costs);
        row.cost_stddev = stddev_of(costs, row.cost_mean);
        row.dhd_mean = mean_of(dhds);
        row.dhd_stddev = stddev_of(dhds, row.dhd_mean);
        rows.push_back(row);
    }
    return rows;
}

std::string summary_to_csv(const std::vector<ConfigSummary>& rows) {
    std::ostringstream out;
    out << "config,runs,cost_mean_cents,cost_stddev_cents,cost_best_cents,"
           "cost_worst_cents,dhd_mean,dhd_stddev,dhd_best,dhd_worst\n";
    char buf[64];
    for (const ConfigSummary& r : rows) {
        out << r.config << ',' << r.runs << ',';
        std::snprintf(buf, sizeof buf, "%.2f,%.2f", r.cost_mean, r.cost_stddev);
        out << buf << ',' << r.cost_best << ',' << r.cost_worst << ',';
        std::snprintf(buf, sizeof buf, "%.2f,%.2f", r.dhd_mean, r.dhd_stddev);
        out << buf << ',' << r.dhd_best << ',' << r.dhd_worst << '\n';
    }
    return out.str();
}

std::string summary_to_text(const std::vector<ConfigSummary>& rows) {
    std::ostringstream out;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-6s %4s %16s %12s %12s %14s %6s %6s\n",
                  "config", "runs", "cost mean+-sd($)", "best($)", "worst($)",
                  "dhd mean+-sd", "best", "worst");
    out << buf;
    for (const ConfigSummary& r : rows) {
        std::snprintf(buf, sizeof buf,
                      "%-6s %4d %9.2f+-%-6.2f %12.2f %12.2f %7.1f+-%-5.1f %6lld %6lld\n",
                      r.config.c_str(), r.runs, r.cost_mean / 100.0,
                      r.cost_stddev / 100.0,
                      static_cast<double>(r.cost_best) / 100.0,
                      static_cast<double>(r.cost_worst) / 100.0, r.dhd_mean,
                      r.dhd_stddev, static_cast<long long>(r.dhd_best),
                      static_cast<long long>(r.dhd_worst));
        out << buf;
    }
    return out.str();
}

double gap_percent(Cents best, Cents reference) {
    if (reference <= 0)
        throw std::invalid_argument("reference cost must be positive");
    double gap = (static_cast<double>(best) - static_cast<double>(reference)) /
                 static_cast<double>(reference) * 100.0;
    return std::round(gap * 100.0) / 100.0;
}

std::vector<GapRow> gap_report(const std::vector<RunRecord>& records,
                               Cents reference_cost) {
    if (reference_cost <= 0)
        throw std::invalid_argument("reference cost must be positive");
    std::map<std::string, Cents> best;
    for (const RunRecord& r : records) {
        auto it = best.find(r.config);
        if (it == best.end() || r.best_cost < it->second)
            best[r.config] = r.best_cost;
    }
    std::vector<GapRow> rows;
    for (const auto& [config, cost] : best)
        rows.push_back({config, cost, gap_percent(cost, reference_cost)});
    return rows;
}

std::string gaps_to_csv(const std::vector<GapRow>& rows, Cents reference_cost,
                        const std::string& reference_label) {
    std::ostringstream out;
    out << "config,best_cost_cents,reference_cost_cents,reference,gap_percent\n";
    char buf[32];
    for (const GapRow& r : rows) {
        std::snprintf(buf, sizeof buf, "%.2f", r.gap_percent);
        out << r.config << ',' << r.best_cost << ',' << reference_cost << ','
            << reference_label << ',' << buf << '\n';
    }
    return out.str();
}

}  // namespace crewpair
