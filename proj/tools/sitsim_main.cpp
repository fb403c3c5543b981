// Command-line front end: weather derivation, trajectory simulation,
// start-date scans, and per-day equilibria, all driven by a JSON config with
// flag overrides (flags win). Every output embeds the config hash.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sitsim/calendar.hpp"
#include "sitsim/environment.hpp"
#include "sitsim/epi_risk.hpp"
#include "sitsim/equilibria.hpp"
#include "sitsim/population_model.hpp"
#include "sitsim/strategy.hpp"
#include "sitsim/weather.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

using namespace sitsim;

std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* key : allowed)
            if (it.key() == key) { ok = true; break; }
        if (!ok)
            throw ConfigError("unknown config key '" + it.key() + "' in " + where);
    }
}

struct RunConfig {
    json raw = json::object();

    std::string weather_path;
    bool use_synth = false;
    std::uint64_t seed = 1;
    int synth_days = 3 * 365;
    std::string synth_start = "2009-01-01";
    SynthProfile profile;

    CapacityConfig capacity;
    double H0 = -1.0;  // < 0: default H_max/2
    ScanConfig release;
    double step = IntegratorOptions{}.step;
    int jobs = 1;
    std::string out_dir = ".";
    std::vector<std::string> start_grid_dates;  // optional explicit grid

    std::string hash;  // filled by finalize()
};

double jget(const json& obj, const char* key, double dflt) {
    return obj.contains(key) ? obj.at(key).get<double>() : dflt;
}

RunConfig parse_config(const json& j) {
    RunConfig cfg;
    cfg.raw = j;
    reject_unknown(j, {"weather", "synth", "variant", "capacity", "release",
                       "epi", "step", "jobs", "out", "start_grid"},
                   "config root");
    if (j.contains("weather")) cfg.weather_path = j.at("weather").get<std::string>();
    if (j.contains("synth")) {
        const json& s = j.at("synth");
        reject_unknown(s, {"seed", "days", "start_date", "temp_mean",
                           "temp_amplitude", "temp_noise_sd", "temp_peak_doy",
                           "rain_wet_mean", "rain_dry_mean", "wet_prob_base",
                           "wet_prob_amplitude"},
                       "synth");
        cfg.use_synth = true;
        if (s.contains("seed")) cfg.seed = s.at("seed").get<std::uint64_t>();
        if (s.contains("days")) cfg.synth_days = s.at("days").get<int>();
        if (s.contains("start_date"))
            cfg.synth_start = s.at("start_date").get<std::string>();
        cfg.profile.temp_mean = jget(s, "temp_mean", cfg.profile.temp_mean);
        cfg.profile.temp_amplitude =
            jget(s, "temp_amplitude", cfg.profile.temp_amplitude);
        cfg.profile.temp_noise_sd =
            jget(s, "temp_noise_sd", cfg.profile.temp_noise_sd);
        if (s.contains("temp_peak_doy"))
            cfg.profile.temp_peak_doy = s.at("temp_peak_doy").get<int>();
        cfg.profile.rain_wet_mean = jget(s, "rain_wet_mean", cfg.profile.rain_wet_mean);
        cfg.profile.rain_dry_mean = jget(s, "rain_dry_mean", cfg.profile.rain_dry_mean);
        cfg.profile.wet_prob_base = jget(s, "wet_prob_base", cfg.profile.wet_prob_base);
        cfg.profile.wet_prob_amplitude =
            jget(s, "wet_prob_amplitude", cfg.profile.wet_prob_amplitude);
    }
    if (j.contains("variant"))
        cfg.capacity.variant = parse_variant(j.at("variant").get<std::string>());
    if (j.contains("capacity")) {
        const json& c = j.at("capacity");
        reject_unknown(c, {"K_max", "K_0", "evap_k", "mc_level", "H0"}, "capacity");
        cfg.capacity.K_max = jget(c, "K_max", cfg.capacity.K_max);
        cfg.capacity.K_0 = jget(c, "K_0", cfg.capacity.K_0);
        cfg.capacity.evap_k = jget(c, "evap_k", cfg.capacity.evap_k);
        cfg.capacity.mc_level = jget(c, "mc_level", cfg.capacity.mc_level);
        cfg.H0 = jget(c, "H0", cfg.H0);
    }
    if (j.contains("release")) {
        const json& r = j.at("release");
        reject_unknown(r, {"objective", "massive_rate", "small_rate", "area",
                           "tau", "eps", "beta", "max_releases", "burn_in_days"},
                       "release");
        if (r.contains("objective"))
            cfg.release.objective = parse_objective(r.at("objective").get<std::string>());
        cfg.release.massive_rate = jget(r, "massive_rate", cfg.release.massive_rate);
        cfg.release.small_rate = jget(r, "small_rate", cfg.release.small_rate);
        cfg.release.area = jget(r, "area", cfg.release.area);
        cfg.release.tau = jget(r, "tau", cfg.release.tau);
        cfg.release.rf.eps = jget(r, "eps", cfg.release.rf.eps);
        cfg.release.rf.beta = jget(r, "beta", cfg.release.rf.beta);
        if (r.contains("max_releases"))
            cfg.release.max_releases = r.at("max_releases").get<int>();
        if (r.contains("burn_in_days"))
            cfg.release.burn_in_days = r.at("burn_in_days").get<int>();
    }
    if (j.contains("epi")) {
        const json& e = j.at("epi");
        reject_unknown(e, {"B", "mu_h", "eta_h", "N_h"}, "epi");
        cfg.release.epi.B = jget(e, "B", cfg.release.epi.B);
        cfg.release.epi.mu_h = jget(e, "mu_h", cfg.release.epi.mu_h);
        cfg.release.epi.eta_h = jget(e, "eta_h", cfg.release.epi.eta_h);
        cfg.release.epi.N_h = jget(e, "N_h", cfg.release.epi.N_h);
    }
    if (j.contains("step")) cfg.step = j.at("step").get<double>();
    if (j.contains("jobs")) cfg.jobs = j.at("jobs").get<int>();
    if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
    if (j.contains("start_grid"))
        cfg.start_grid_dates = j.at("start_grid").get<std::vector<std::string>>();
    cfg.release.integ.step = cfg.step;
    return cfg;
}

// Canonical JSON (sorted keys in nlohmann by default) hashed for manifests.
void finalize(RunConfig& cfg) {
    json canonical = cfg.raw;
    canonical["__resolved"] = {
        {"variant", variant_name(cfg.capacity.variant)},
        {"objective", objective_name(cfg.release.objective)},
        {"eps", cfg.release.rf.eps},
        {"mc_level", cfg.capacity.mc_level},
        {"massive_rate", cfg.release.massive_rate},
        {"seed", cfg.seed},
        {"step", cfg.step},
    };
    cfg.hash = hex64(fnv1a(canonical.dump()));
}

WeatherSeries load_series(const RunConfig& cfg) {
    if (cfg.use_synth)
        return synth_weather(cfg.seed, cfg.synth_days, cfg.profile,
                             parse_date(cfg.synth_start));
    if (cfg.weather_path.empty())
        throw ConfigError("no weather input: set 'weather' or 'synth'");
    fs::path p = cfg.weather_path;
    if (p.is_relative()) {
        if (const char* base = std::getenv("SITSIM_DATA_DIR"))
            if (!fs::exists(p)) p = fs::path(base) / p;
    }
    return load_weather_csv(p.string());
}

std::ofstream open_output(const RunConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.out_dir);
    fs::path p = fs::path(cfg.out_dir) / name;
    std::ofstream out(p);
    if (!out) throw DataError("cannot write " + p.string());
    out << "# config_hash=" << cfg.hash << "\n";
    return out;
}

void write_manifest(const RunConfig& cfg, const std::string& name,
                    const WeatherSeries& series,
                    const std::vector<std::string>& artifacts) {
    std::ostringstream data;
    write_weather_csv(data, series);
    json manifest = {
        {"config", cfg.raw},
        {"config_hash", cfg.hash},
        {"seed", cfg.seed},
        {"weather_checksum", hex64(fnv1a(data.str()))},
        {"evap_k", cfg.capacity.evap_k},
        {"artifacts", artifacts},
    };
    std::ofstream out(fs::path(cfg.out_dir) / name);
    out << manifest.dump(2) << "\n";
}

int cmd_weather(RunConfig& cfg) {
    WeatherSeries series = load_series(cfg);
    WaterBalance wb = water_balance(series, cfg.H0, cfg.capacity.evap_k);
    RateSplines splines;
    Environment env = build_environment(series, cfg.capacity, splines, cfg.H0);

    auto out = open_output(cfg, "weather_derived.csv");
    out << "# evap_k=" << cfg.capacity.evap_k
        << " H0=" << (cfg.H0 < 0 ? wb.H_max / 2.0 : cfg.H0)
        << " H_max=" << wb.H_max
        << " variant=" << variant_name(cfg.capacity.variant) << "\n";
    if (wb.H_max <= 0.0)
        out << "# warning: all-zero rainfall window, K fell back to (1-mc)*K_0\n";
    out << "date,H,K,mu_A2\n";
    for (int d = 0; d < env.size(); ++d) {
        const DayEnv& de = env.at_day(d);
        out << format_date(env.start_date() + d) << ',' << de.H << ',' << de.K
            << ',' << de.mu_A2 << '\n';
    }
    write_manifest(cfg, "weather_manifest.json", series, {"weather_derived.csv"});
    return 0;
}

int cmd_simulate(RunConfig& cfg, const std::string& t0_date, int n_releases) {
    WeatherSeries series = load_series(cfg);
    RateSplines splines;
    Environment env = build_environment(series, cfg.capacity, splines, cfg.H0);
    StrategyContext ctx;
    ctx.env = &env;

    const DayEnv& d0 = env.at_day(0);
    WildEquilibrium eq = wild_equilibrium(d0.ep, d0.mu_A2);
    SitState y0 =
        eq.exists ? SitState{eq.E_star[0], eq.E_star[1], eq.E_star[2], 0.0}
                  : SitState{1000.0, 1000.0, 1000.0, 0.0};

    ImpulseSchedule schedule;
    const ImpulseSchedule* sched = nullptr;
    if (!t0_date.empty()) {
        schedule.t0 = parse_date(t0_date) - env.start_date();
        schedule.tau = cfg.release.tau;
        schedule.n_releases = n_releases;
        schedule.bolus = cfg.release.massive_bolus();
        if (schedule.t0 < 0 || schedule.t0 >= env.size())
            throw ConfigError("release start outside the weather window");
        sched = &schedule;
    }

    SitRhs rhs{&env, cfg.release.rf};
    Trajectory<4> traj = integrate_trajectory<4>(
        rhs, y0, 0, env.size() - 1, sched, iMS, cfg.release.integ);

    auto out = open_output(cfg, "trajectory.csv");
    write_trajectory_csv(out, traj, env.start_date());
    write_manifest(cfg, "simulate_manifest.json", series, {"trajectory.csv"});
    return 0;
}

int cmd_equilibria(RunConfig& cfg) {
    WeatherSeries series = load_series(cfg);
    RateSplines splines;
    Environment env = build_environment(series, cfg.capacity, splines, cfg.H0);

    double small_bolus = cfg.release.small_bolus();
    auto out = open_output(cfg, "equilibria.csv");
    out << "# small_bolus=" << small_bolus << " tau=" << cfg.release.tau
        << " eps=" << cfg.release.rf.eps
        << " standing_MS=post-release peak of the periodic steady state\n";
    out << "date,A1,M1,F1,A2,M2,F2,MT1,MT2\n";
    for (int d = 0; d < env.size(); ++d) {
        const DayEnv& de = env.at_day(d);
        out << format_date(env.start_date() + d);
        ReleaseThresholds th = release_thresholds(de.ep, de.mu_A2, cfg.release.rf);
        double M_bar =
            small_bolus / (1.0 - std::exp(-de.ep.mu_S * cfg.release.tau));
        SitEquilibria eqs = sit_equilibria(de.ep, de.mu_A2, cfg.release.rf, M_bar);
        auto put3 = [&](bool has, const EquilibriumPoint& e) {
            for (double v : e) out << ',' << (has ? v : 0.0);
        };
        put3(eqs.has_E1, eqs.E1);
        put3(eqs.has_E2, eqs.E2);
        if (th.defined)
            out << ',' << th.M_T1 << ',' << th.M_T2 << '\n';
        else
            out << ",," << '\n';
    }
    E1MinBox box = e1_min_box(env, cfg.release.rf, small_bolus, cfg.release.tau);
    std::cout << "E1_min = (" << box.box[0] << ", " << box.box[1] << ", "
              << box.box[2] << ")  days_used=" << box.days_used
              << " days_skipped=" << box.days_skipped << "\n";
    write_manifest(cfg, "equilibria_manifest.json", series, {"equilibria.csv"});
    return 0;
}

int scan_one(RunConfig cfg, const WeatherSeries& series,
             const std::string& suffix) {
    RateSplines splines;
    Environment env = build_environment(series, cfg.capacity, splines, cfg.H0);
    StrategyContext ctx = make_context(env, cfg.release);

    std::vector<int> grid;
    if (!cfg.start_grid_dates.empty()) {
        for (const auto& s : cfg.start_grid_dates) {
            int d = parse_date(s) - env.start_date();
            if (d < cfg.release.burn_in_days || d >= env.size())
                throw ConfigError("start date " + s +
                                  " outside the post-burn-in window");
            grid.push_back(d);
        }
    } else {
        grid = default_start_grid(env, cfg.release);
    }
    if (grid.empty()) throw ConfigError("no start dates after burn-in");

    auto outcomes = scan_start_dates(grid, cfg.release, ctx, cfg.jobs);
    auto out = open_output(cfg, "scan" + suffix + ".csv");
    write_scan_csv(out, outcomes, env);

    std::vector<SummaryRow> rows;
    if (auto row = summarize(outcomes, cfg.release, cfg.capacity.mc_level))
        rows.push_back(*row);
    auto sum = open_output(cfg, "summary" + suffix + ".csv");
    write_summary_csv(sum, rows);
    write_manifest(cfg, "scan_manifest" + suffix + ".json", series,
                   {"scan" + suffix + ".csv", "summary" + suffix + ".csv"});
    return 0;
}

int cmd_scan(RunConfig& cfg, bool all_variants) {
    WeatherSeries series = load_series(cfg);
    if (!all_variants) return scan_one(cfg, series, "");
    for (WeatherVariant v :
         {WeatherVariant::full, WeatherVariant::constant_mean,
          WeatherVariant::temperature_only, WeatherVariant::rainfall_only}) {
        RunConfig c = cfg;
        c.capacity.variant = v;
        finalize(c);
        scan_one(c, series, "_" + variant_name(v));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SIT release-strategy simulator for weather-driven mosquito dynamics"};
    app.require_subcommand(1);

    std::string config_path, weather, variant, objective, out_dir, t0_date;
    std::string start_grid_csv;
    double eps = -1.0, mc = -1.0, rate = -1.0;
    int jobs = 0, synth_days = 0, n_releases = -1;
    std::uint64_t seed = 0;
    bool have_seed = false, all_variants = false;

    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--weather", weather, "weather CSV (date,rain_mm,temp_c,humidity_pct)");
    app.add_option("--synth", synth_days, "generate synthetic weather for N days");
    app.add_option("--seed", seed, "synthetic-weather seed")->each([&](const std::string&) {
        have_seed = true;
    });
    app.add_option("--variant", variant, "full|mean|temp|rain");
    app.add_option("--objective", objective, "nuisance|epi");
    app.add_option("--eps", eps, "residual fertility");
    app.add_option("--mc", mc, "mechanical-control level");
    app.add_option("--rate", rate, "massive release rate, Ind/ha/week");
    app.add_option("--start-grid", start_grid_csv, "comma-separated ISO start dates");
    app.add_option("--jobs", jobs, "scan concurrency");
    app.add_option("--out", out_dir, "output directory");

    auto* sc_weather = app.add_subcommand("weather", "derive H, K, mu_A2 series");
    auto* sc_sim = app.add_subcommand("simulate", "integrate the SIT system");
    sc_sim->add_option("--t0", t0_date, "first release date (ISO); omit for no releases");
    sc_sim->add_option("--n-releases", n_releases, "number of releases (default open-ended)");
    auto* sc_scan = app.add_subcommand("scan", "strategy scan over start dates");
    sc_scan->add_flag("--all-variants", all_variants, "run all four weather variants");
    auto* sc_eq = app.add_subcommand("equilibria", "per-day equilibria and thresholds");

    CLI11_PARSE(app, argc, argv);

    try {
        json j = json::object();
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw sitsim::ConfigError("cannot open config: " + config_path);
            try {
                in >> j;
            } catch (const json::exception& e) {
                throw sitsim::ConfigError(std::string("config parse error: ") + e.what());
            }
        }
        RunConfig cfg = parse_config(j);
        // Flag overrides win over the config file.
        if (!weather.empty()) { cfg.weather_path = weather; cfg.use_synth = false; }
        if (synth_days > 0) { cfg.use_synth = true; cfg.synth_days = synth_days; }
        if (have_seed) cfg.seed = seed;
        if (!variant.empty()) cfg.capacity.variant = sitsim::parse_variant(variant);
        if (!objective.empty())
            cfg.release.objective = sitsim::parse_objective(objective);
        if (eps >= 0.0) cfg.release.rf.eps = eps;
        if (mc >= 0.0) cfg.capacity.mc_level = mc;
        if (rate >= 0.0) cfg.release.massive_rate = rate;
        if (jobs > 0) cfg.jobs = jobs;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (!start_grid_csv.empty()) {
            cfg.start_grid_dates.clear();
            std::stringstream ss(start_grid_csv);
            std::string item;
            while (std::getline(ss, item, ',')) cfg.start_grid_dates.push_back(item);
        }
        cfg.release.integ.step = cfg.step;
        finalize(cfg);

        if (*sc_weather) return cmd_weather(cfg);
        if (*sc_sim) return cmd_simulate(cfg, t0_date, n_releases);
        if (*sc_scan) return cmd_scan(cfg, all_variants);
        if (*sc_eq) return cmd_equilibria(cfg);
        return 2;
    } catch (const sitsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const sitsim::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const sitsim::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
