#include "sitsim/strategy.hpp"

#include <atomic>
#include <cmath>
#include <future>
#include <ostream>
#include <thread>

#include "sitsim/calendar.hpp"

namespace sitsim {

Objective parse_objective(const std::string& name) {
    if (name == "nuisance") return Objective::nuisance;
    if (name == "epi" || name == "epi_risk") return Objective::epi_risk;
    throw ConfigError("unknown objective: '" + name + "'");
}

std::string objective_name(Objective o) {
    return o == Objective::nuisance ? "nuisance" : "epi_risk";
}

void ScanConfig::validate() const {
    if (massive_rate < 0.0 || small_rate < 0.0)
        throw ConfigError("release rates must be >= 0");
    if (area <= 0.0) throw ConfigError("area must be > 0");
    if (tau <= 0.0) throw ConfigError("release period must be > 0");
    if (max_releases < 1) throw ConfigError("max_releases must be >= 1");
    if (burn_in_days < 0) throw ConfigError("burn-in must be >= 0");
    rf.validate();
}

StrategyContext make_context(const Environment& env, const ScanConfig& cfg) {
    cfg.validate();
    StrategyContext ctx;
    ctx.env = &env;

    // Initial condition: the frozen-day-0 equilibrium when it exists; the
    // burn-in absorbs the rest.
    const DayEnv& d0 = env.at_day(0);
    SitState y0{1000.0, 1000.0, 1000.0, 0.0};
    WildEquilibrium eq = wild_equilibrium(d0.ep, d0.mu_A2);
    if (eq.exists) y0 = {eq.E_star[0], eq.E_star[1], eq.E_star[2], 0.0};

    SitRhs rhs{&env, cfg.rf};
    ctx.baseline = integrate_trajectory<4>(rhs, y0, 0, env.size() - 1, nullptr,
                                           iMS, cfg.integ);

    if (cfg.objective == Objective::nuisance)
        ctx.nuisance_box = e1_min_box(env, cfg.rf, cfg.small_bolus(), cfg.tau);
    return ctx;
}

namespace {

bool objective_met_at(int day, const SitState& y, const ScanConfig& cfg,
                      const StrategyContext& ctx) {
    if (cfg.objective == Objective::nuisance) {
        const auto& box = ctx.nuisance_box->box;
        return y[iA] < box[0] && y[iM] < box[1] && y[iF] < box[2];
    }
    const DayEnv& d = ctx.env->at_day(day);
    return y[iF] < f_threshold(d.temp, d.ep, cfg.epi);
}

}  // namespace

StrategyOutcome run_strategy(int t0_day, const ScanConfig& cfg,
                             const StrategyContext& ctx) {
    cfg.validate();
    if (cfg.objective == Objective::nuisance && !ctx.nuisance_box)
        throw ConfigError("nuisance objective without an E1 minimum box");
    if (t0_day < 0 || t0_day >= ctx.baseline.size())
        throw ConfigError("start day outside the loaded window");

    StrategyOutcome out;
    out.t0_day = t0_day;

    const SitState& base = ctx.baseline.daily[static_cast<std::size_t>(t0_day)];
    SitState y{base[iA], base[iM], base[iF], 0.0};

    ImpulseSchedule schedule;
    schedule.t0 = t0_day;
    schedule.tau = cfg.tau;
    schedule.n_releases = cfg.max_releases;
    schedule.bolus = cfg.massive_bolus();

    const int day_end =
        t0_day + static_cast<int>(std::ceil(cfg.max_releases * cfg.tau));
    int met_day = -1;
    SitRhs rhs{ctx.env, cfg.rf};
    integrate_days<4>(rhs, y, t0_day, day_end, &schedule, iMS, cfg.integ,
                      [&](int day, const SitState& state) {
                          if (objective_met_at(day, state, cfg, ctx)) {
                              met_day = day;
                              return true;
                          }
                          return false;
                      });

    if (met_day < 0) {
        out.objective_met = false;
        out.n_massive = cfg.max_releases;
        out.stop_day = day_end;
    } else {
        out.objective_met = true;
        out.stop_day = met_day;
        // Releases land at t0 + i*tau; the observer sees the pre-impulse
        // state, so count the instants strictly before the stop day plus the
        // one at t0 when the stop happens later.
        double elapsed = met_day - t0_day;
        out.n_massive = static_cast<int>(
            std::min<double>(cfg.max_releases, std::ceil(elapsed / cfg.tau)));
    }
    out.total_sterile_males = out.n_massive * cfg.massive_bolus();
    return out;
}

std::vector<StrategyOutcome> scan_start_dates(const std::vector<int>& start_grid,
                                              const ScanConfig& cfg,
                                              const StrategyContext& ctx,
                                              int jobs) {
    if (start_grid.empty()) throw ConfigError("empty start grid");
    std::vector<StrategyOutcome> outcomes(start_grid.size());
    auto run_one = [&](std::size_t i) {
        try {
            outcomes[i] = run_strategy(start_grid[i], cfg, ctx);
        } catch (const std::exception& e) {
            outcomes[i].t0_day = start_grid[i];
            outcomes[i].error = e.what();
        }
    };
    if (jobs <= 1) {
        for (std::size_t i = 0; i < start_grid.size(); ++i) run_one(i);
        return outcomes;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < start_grid.size(); i = next++) run_one(i);
    };
    std::vector<std::thread> pool;
    int n_threads = std::min<int>(jobs, static_cast<int>(start_grid.size()));
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return outcomes;
}

std::vector<int> default_start_grid(const Environment& env,
                                    const ScanConfig& cfg) {
    std::vector<int> grid;
    for (int d = cfg.burn_in_days; d < env.size(); ++d)
        if (weekday_index(env.start_date() + d) == 0) grid.push_back(d);
    return grid;
}

std::optional<SummaryRow> summarize(const std::vector<StrategyOutcome>& outcomes,
                                    const ScanConfig& cfg, double mc_level) {
    double sum = 0.0;
    int n = 0;
    for (const auto& o : outcomes) {
        if (!o.error.empty() || !o.objective_met) continue;
        sum += o.n_massive;
        ++n;
    }
    if (n == 0) return std::nullopt;
    SummaryRow row;
    row.eps = cfg.rf.eps;
    row.mc_level = mc_level;
    row.massive_rate = cfg.massive_rate;
    row.n_outcomes = n;
    row.mean_releases = static_cast<int>(std::lround(sum / n));
    row.total_males = row.mean_releases * cfg.massive_rate * cfg.area;
    return row;
}

MaintenancePreview maintenance_preview(const SitState& stop_state, int stop_day,
                                       int horizon_days, const ScanConfig& cfg,
                                       const StrategyContext& ctx) {
    cfg.validate();
    MaintenancePreview preview;
    preview.trajectory.day_begin = stop_day;
    if (horizon_days <= 0) return preview;

    ImpulseSchedule schedule;
    schedule.t0 = stop_day;
    schedule.tau = cfg.tau;
    schedule.n_releases = -1;
    schedule.bolus = cfg.small_bolus();
    // Epi mode is "massive and stop": no maintenance releases.
    const ImpulseSchedule* sched =
        cfg.objective == Objective::nuisance ? &schedule : nullptr;

    SitRhs rhs{ctx.env, cfg.rf};
    integrate_days<4>(rhs, stop_state, stop_day, stop_day + horizon_days, sched,
                      iMS, cfg.integ, [&](int day, const SitState& y) {
                          preview.trajectory.daily.push_back(y);
                          if (!objective_met_at(day, y, cfg, ctx) &&
                              preview.first_violation_day < 0) {
                              preview.held = false;
                              preview.first_violation_day = day;
                          }
                          return false;
                      });
    return preview;
}

void write_scan_csv(std::ostream& out, const std::vector<StrategyOutcome>& outcomes,
                    const Environment& env) {
    out << "t0,n_massive,stop_date,total_males,objective_met\n";
    for (const auto& o : outcomes) {
        out << format_date(env.start_date() + o.t0_day) << ',';
        if (!o.error.empty()) {
            out << ",,," << "error:" << o.error << '\n';
            continue;
        }
        out << o.n_massive << ',' << format_date(env.start_date() + o.stop_day)
            << ',' << o.total_sterile_males << ','
            << (o.objective_met ? "true" : "false") << '\n';
    }
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
    out << "eps,mc_level,massive_rate,n_start_dates,mean_releases,total_males\n";
    for (const auto& r : rows) {
        out << r.eps << ',' << r.mc_level << ',' << r.massive_rate << ','
            << r.n_outcomes << ',' << r.mean_releases << ',' << r.total_males
            << '\n';
    }
}

}  // namespace sitsim
