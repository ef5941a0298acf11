#include "crewpair/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace crewpair {

using json = nlohmann::ordered_json;

namespace {

// Howard Hinnant's civil-date algorithms.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

Minutes parse_iso_minutes(const std::string& s) {
    int y, mo, d, h, mi, consumed = 0;
    char t;
    int n = std::sscanf(s.c_str(), "%d-%d-%d%c%d:%d%n", &y, &mo, &d, &t, &h,
                        &mi, &consumed);
    if (n != 6 || (t != 'T' && t != ' ') || mo < 1 || mo > 12 || d < 1 ||
        d > 31 || h < 0 || h > 23 || mi < 0 || mi > 59)
        throw std::invalid_argument("bad timestamp: " + s);
    // Anything past minutes must be ":00", optionally followed by "Z".
    std::string tail = s.substr(consumed);
    if (tail == ":00" || tail == ":00Z") tail.clear();
    if (!tail.empty()) {
        if (tail[0] == ':')
            throw std::invalid_argument("sub-minute timestamp: " + s);
        throw std::invalid_argument("bad timestamp: " + s);
    }
    return days_from_civil(y, mo, d) * 1440 + h * 60 + mi;
}

std::string format_iso_minutes(Minutes m) {
    std::int64_t days = m / 1440;
    std::int64_t rem = m % 1440;
    if (rem < 0) {
        rem += 1440;
        --days;
    }
    int y, mo, d;
    civil_from_days(days, y, mo, d);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02lld:%02lld", y, mo, d,
                  static_cast<long long>(rem / 60),
                  static_cast<long long>(rem % 60));
    return buf;
}

std::vector<Flight> read_schedule_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open schedule: " + path);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error(path + ":1: empty schedule file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "flight_id,origin,destination,departure_utc,arrival_utc")
        throw std::runtime_error(path + ":1: bad header");
    std::vector<Flight> flights;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto f = split(line, ',');
        if (f.size() != 5)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected 5 fields");
        try {
            Flight fl;
            fl.id = std::stoi(f[0]);
            fl.origin = f[1];
            fl.destination = f[2];
            fl.departure = parse_iso_minutes(f[3]);
            fl.arrival = parse_iso_minutes(f[4]);
            flights.push_back(fl);
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": " + e.what());
        }
    }
    return flights;
}

void write_schedule_csv(const std::string& path,
                        const std::vector<Flight>& flights) {
    std::ostringstream out;
    out << "flight_id,origin,destination,departure_utc,arrival_utc\n";
    for (const Flight& f : flights)
        out << f.id << ',' << f.origin << ',' << f.destination << ','
            << format_iso_minutes(f.departure) << ','
            << format_iso_minutes(f.arrival) << '\n';
    atomic_write(path, out.str());
}

namespace {

json rules_to_json(const LegalityRules& r) {
    json j;
    j["min_sit_minutes"] = r.min_sit;
    j["max_sit_minutes"] = r.max_sit;
    j["max_duty_flying_minutes"] = r.max_duty_flying;
    j["max_duty_span_minutes"] = r.max_duty_span;
    j["min_rest_minutes"] = r.min_rest;
    j["max_duties_per_pairing"] = r.max_duties_per_pairing;
    j["max_pairing_days"] = r.max_pairing_days;
    return j;
}

json cost_to_json(const CostModel& m) {
    json j;
    j["per_flying_minute_cents"] = m.per_flying_minute;
    j["per_duty_fixed_cents"] = m.per_duty_fixed;
    j["hotel_night_cents"] = m.hotel_night;
    j["pairing_guarantee_minimum_cents"] = m.pairing_guarantee_minimum;
    return j;
}

}  // namespace

InstanceConfig read_instance_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    json j = json::parse(in);
    InstanceConfig cfg;
    for (const auto& b : j.at("bases")) cfg.bases.push_back(b.get<std::string>());
    const json& r = j.at("rules");
    cfg.rules.min_sit = r.at("min_sit_minutes").get<Minutes>();
    cfg.rules.max_sit = r.at("max_sit_minutes").get<Minutes>();
    cfg.rules.max_duty_flying = r.at("max_duty_flying_minutes").get<Minutes>();
    cfg.rules.max_duty_span = r.at("max_duty_span_minutes").get<Minutes>();
    cfg.rules.min_rest = r.at("min_rest_minutes").get<Minutes>();
    cfg.rules.max_duties_per_pairing =
        r.at("max_duties_per_pairing").get<int>();
    cfg.rules.max_pairing_days = r.at("max_pairing_days").get<int>();
    const json& m = j.at("cost_model");
    cfg.cost_model.per_flying_minute =
        m.at("per_flying_minute_cents").get<Cents>();
    cfg.cost_model.per_duty_fixed = m.at("per_duty_fixed_cents").get<Cents>();
    cfg.cost_model.hotel_night = m.at("hotel_night_cents").get<Cents>();
    cfg.cost_model.pairing_guarantee_minimum =
        m.at("pairing_guarantee_minimum_cents").get<Cents>();
    return cfg;
}

void write_instance_config(const std::string& path, const InstanceConfig& cfg) {
    json j;
    j["bases"] = cfg.bases;
    j["rules"] = rules_to_json(cfg.rules);
    j["cost_model"] = cost_to_json(cfg.cost_model);
    atomic_write(path, j.dump(2) + "\n");
}

Instance load_instance(const std::string& schedule_csv,
                       const std::string& config_json) {
    InstanceConfig cfg = read_instance_config(config_json);
    Instance inst;
    inst.flights = read_schedule_csv(schedule_csv);
    inst.bases = cfg.bases;
    inst.rules = cfg.rules;
    inst.cost_model = cfg.cost_model;
    inst.validate();
    return inst;
}

void write_allpairs(const std::string& path, const AllPairs& all) {
    std::ostringstream out;
    out << "crewpair-allpairs v1\n";
    out << "flights " << all.flight_count << "\n";
    out << "pairings " << all.pairing_count() << "\n";
    for (const Pairing& p : all.pairings) {
        out << p.id << ' ' << p.base << ' ' << p.cost << ' ' << p.num_duties();
        for (const Duty& d : p.duties) out << ' ' << d.flights.size();
        for (const Duty& d : p.duties)
            for (int fid : d.flights) out << ' ' << fid;
        out << '\n';
    }
    atomic_write(path, out.str());
}

AllPairs read_allpairs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open allpairs: " + path);
    std::string magic, version;
    in >> magic >> version;
    if (magic != "crewpair-allpairs" || version != "v1")
        throw std::runtime_error(path + ": not a crewpair allpairs file");
    AllPairs all;
    std::string key;
    int p_count = 0;
    in >> key >> all.flight_count;
    if (key != "flights") throw std::runtime_error(path + ": bad header");
    in >> key >> p_count;
    if (key != "pairings") throw std::runtime_error(path + ": bad header");
    for (int i = 0; i < p_count; ++i) {
        Pairing p;
        int nd = 0;
        if (!(in >> p.id >> p.base >> p.cost >> nd))
            throw std::runtime_error(path + ": truncated pairing record");
        std::vector<int> sizes(nd);
        for (int& s : sizes) in >> s;
        for (int s : sizes) {
            Duty d;
            d.flights.resize(s);
            for (int& fid : d.flights) in >> fid;
            p.duties.push_back(std::move(d));
        }
        if (!in) throw std::runtime_error(path + ": truncated pairing record");
        for (const Duty& d : p.duties)
            for (int fid : d.flights) p.coverage.push_back(fid);
        std::sort(p.coverage.begin(), p.coverage.end());
        all.pairings.push_back(std::move(p));
    }
    all.build_index();
    return all;
}

void export_allpairs_csv(const std::string& path, const AllPairs& all) {
    std::ostringstream out;
    out << "pairing_id,base,cost_cents,num_duties,flight_ids\n";
    for (const Pairing& p : all.pairings) {
        out << p.id << ',' << p.base << ',' << p.cost << ',' << p.num_duties()
            << ',';
        bool first = true;
        for (const Duty& d : p.duties)
            for (int fid : d.flights) {
                if (!first) out << ';';
                out << fid;
                first = false;
            }
        out << '\n';
    }
    atomic_write(path, out.str());
}

GaConfigFile read_ga_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open GA config: " + path);
    json j = json::parse(in);
    GaConfigFile out;
    out.ga.variant = ga_variant_from_string(j.at("config").get<std::string>());
    out.ga.population_size = j.at("population_size").get<int>();
    out.ga.crossover_rate = j.at("crossover_rate").get<double>();
    out.ga.mutation_rate_factor = j.at("mutation_rate_factor").get<double>();
    out.ga.dhd_penalty = j.at("dhd_penalty_cents").get<Cents>();
    const json& term = j.at("termination");
    if (term.contains("seconds"))
        out.ga.budget_seconds = term["seconds"].get<double>();
    if (term.contains("generations"))
        out.ga.budget_generations = term["generations"].get<int>();
    if (!out.ga.budget_seconds && !out.ga.budget_generations)
        throw std::runtime_error(path + ": termination needs seconds or generations");
    if (j.contains("seed")) {
        out.seed_present = true;
        const json& s = j["seed"];
        if (s.is_number_float()) {
            double f = s.get<double>();
            if (f < 0.0 || f >= 1.0)
                throw std::runtime_error(path + ": float seed must be in [0,1)");
            out.seed = Rng::seed_from_unit_float(f);
        } else {
            out.seed = s.get<std::uint64_t>();
        }
    }
    return out;
}

std::string ga_config_to_json(const GaConfig& cfg, std::uint64_t seed) {
    json j;
    j["config"] = to_string(cfg.variant);
    j["population_size"] = cfg.population_size;
    json term;
    if (cfg.budget_seconds) term["seconds"] = *cfg.budget_seconds;
    if (cfg.budget_generations) term["generations"] = *cfg.budget_generations;
    j["termination"] = term;
    j["crossover_rate"] = cfg.crossover_rate;
    j["mutation_rate_factor"] = cfg.mutation_rate_factor;
    j["dhd_penalty_cents"] = cfg.dhd_penalty;
    j["seed"] = seed;
    return j.dump(2) + "\n";
}

std::string run_record_to_json(const RunRecord& rec,
                               const std::string& hash) {
    json j;
    j["version"] = kToolkitVersion;
    j["config_hash"] = hash;
    j["config"] = rec.config;
    j["seed"] = rec.seed;
    j["best_fitness_cents"] = rec.best_fitness;
    j["best_cost_cents"] = rec.best_cost;
    j["best_deadheads"] = rec.best_deadheads;
    j["best_num_pairings"] = rec.best_num_pairings;
    j["best_pairing_ids"] = rec.best_pairing_ids;
    j["generations"] = rec.generations;
    json snap;
    snap["best_cost_cents"] = rec.early_snapshot.best_cost;
    snap["best_deadheads"] = rec.early_snapshot.best_deadheads;
    j["initial_best"] = snap;
    return j.dump(2) + "\n";
}

void write_trace_csv(const std::string& path,
                     const std::vector<TracePoint>& trace) {
    std::ostringstream out;
    out << "elapsed_sec,generation,best_cost_cents,best_deadheads\n";
    char buf[64];
    for (const TracePoint& tp : trace) {
        std::snprintf(buf, sizeof buf, "%.3f", tp.elapsed_sec);
        out << buf << ',' << tp.generation << ',' << tp.best_cost << ','
            << tp.best_deadheads << '\n';
    }
    atomic_write(path, out.str());
}

void atomic_write(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write: " + tmp);
        out << content;
        if (!out.flush())
            throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("rename failed: " + path);
    }
}

std::string config_hash(const std::string& resolved) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : resolved) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace crewpair
