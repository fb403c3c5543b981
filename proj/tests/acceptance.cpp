// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
// the exit status is the number of failed criteria.

#include <cmath>
#include <cstdio>
#include <thread>
#include <vector>

#include "sitsim/environment.hpp"
#include "sitsim/epi_risk.hpp"
#include "sitsim/equilibria.hpp"
#include "sitsim/population_model.hpp"
#include "sitsim/strategy.hpp"
#include "sitsim/weather.hpp"

using namespace sitsim;

namespace {

// Pinned at first computation of criterion 11 (constant-mean preset,
// N ~ 49.3, eps = 0, mc = 0, 6000/ha/week over 20 ha).
constexpr int kPresetPinnedReleases = 44;

int hw_jobs() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 2 : static_cast<int>(n);
}

bool report(int idx, const char* what, bool ok, const std::string& detail = "") {
    std::printf("[%s] criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", idx, what,
                detail.empty() ? "" : " — ", detail.c_str());
    return ok;
}

EntoParams rates25() {
    static RateSplines splines;
    return splines.at(25.0);
}

// ---------------------------------------------------------------------------

bool criterion1_rate_round_trip() {
    const auto& rows = lab_table();
    const auto& knots = RateSplines::published_knots();
    // knots rows: phi, mu_A1, gamma, mu_M, mu_F (matching the spline order).
    bool ok = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EntoParams d = derive_rates(rows[i]);
        const double got[5] = {d.phi, d.mu_A1, d.gamma, d.mu_M, d.mu_F};
        for (std::size_t r = 0; r < 5; ++r)
            ok = ok && std::abs(got[r] - knots[r][i]) < 1e-3;
    }
    return report(1, "published rate table reproduced to 1e-3", ok);
}

bool criterion2_equilibrium_identity() {
    RateSplines splines;
    bool ok = true;
    for (double T : RateSplines::knot_temps) {
        EntoParams ep = splines.at(T);
        if (ep.phi <= 0.0) continue;
        double N = basic_offspring(ep);
        if (N <= 1.0) continue;
        for (double K : {2e4, 2e5, 2e6}) {
            double mu_A2 = density_death_rate(K, ep);
            double A_star = wild_equilibrium(ep, mu_A2).E_star[0];
            double expect = (1.0 - 1.0 / N) * K;
            ok = ok && std::abs(A_star - expect) <= 1e-9 * expect;
        }
    }
    return report(2, "A* = (1 - 1/N) K across knots and capacities", ok);
}

bool criterion3_threshold_closed_form() {
    RateSplines splines;
    bool ok = true;
    for (double T : RateSplines::knot_temps) {
        EntoParams ep = splines.at(T);
        if (ep.phi <= 0.0) continue;
        double N = basic_offspring(ep);
        if (N <= 1.0) continue;
        double mu_A2 = density_death_rate(2e5, ep);
        double Q = q_factor(ep, mu_A2);

        ReleaseThresholds th0 = release_thresholds(ep, mu_A2, {0.0, 1.0});
        double closed = Q * (std::sqrt(N) - 1.0) * (std::sqrt(N) - 1.0);
        ok = ok && std::abs(th0.M_T1 - closed) <= 1e-12 * closed;

        for (double eps : {0.0, 0.006, 0.012}) {
            if (eps >= 1.0 / N) continue;
            ResidualFertility rf{eps, 1.0};
            ReleaseThresholds th = release_thresholds(ep, mu_A2, rf);
            SitEquilibria at = sit_equilibria(ep, mu_A2, rf, th.M_T1);
            double M_star = wild_equilibrium(ep, mu_A2).E_star[1];
            ok = ok && std::abs(at.discriminant) <= 1e-8 * M_star * M_star;
        }
    }
    return report(3, "threshold closed form and vanishing discriminant", ok);
}

bool criterion4_dynamics_consistency() {
    EntoParams ep = rates25();
    double K = 2e5;
    double mu_A2 = density_death_rate(K, ep);
    Environment env = Environment::constant(ep, mu_A2, K, 1100);
    WildEquilibrium eq = wild_equilibrium(ep, mu_A2);

    SitRhs rhs{&env, {0.0, 1.0}};
    SitState y0{0.1 * eq.E_star[0], 0.1 * eq.E_star[1], 0.1 * eq.E_star[2], 0.0};
    SitState end = integrate_days<4>(rhs, y0, 0, 1000, nullptr, iMS, {},
                                     [](int, const SitState&) { return false; });
    bool ok = true;
    for (std::size_t i = 0; i < 3; ++i)
        ok = ok && std::abs(end[i] - eq.E_star[i]) <= 0.01 * eq.E_star[i];

    SitState half = integrate_days<4>(rhs, y0, 0, 1000, nullptr, iMS, {0.025},
                                      [](int, const SitState&) { return false; });
    for (std::size_t i = 0; i < 3; ++i)
        ok = ok && std::abs(end[i] - half[i]) <=
                       1e-6 * std::max(1.0, std::abs(half[i]));
    return report(4, "convergence to E* and step-halving stability", ok);
}

bool criterion5_sit_dichotomy() {
    EntoParams ep = rates25();
    double K = 2e5;
    double mu_A2 = density_death_rate(K, ep);
    WildEquilibrium eq = wild_equilibrium(ep, mu_A2);
    ResidualFertility rf{0.0, 1.0};
    ReleaseThresholds th = release_thresholds(ep, mu_A2, rf);

    auto pinned_rhs = [&](double M_T) {
        return [&, M_T](int, double, const SitState& y, SitState& dy) {
            SitState z = y;
            z[iMS] = M_T;  // sustained standing sterile population
            rhs_sit(z, ep, mu_A2, rf, dy);
            dy[iMS] = 0.0;
        };
    };

    bool ok = true;

    // Above the threshold: extinction of the wild components.
    {
        auto rhs = pinned_rhs(1.2 * th.M_T1);
        SitState y{eq.E_star[0], eq.E_star[1], eq.E_star[2], 1.2 * th.M_T1};
        SitState end = integrate_days<4>(rhs, y, 0, 1500, nullptr, iMS, {},
                                         [](int, const SitState&) { return false; });
        for (std::size_t i = 0; i < 3; ++i)
            ok = ok && end[i] < 1e-3 * eq.E_star[i];
    }
    // Below the threshold, starting above E1: settles near E2.
    {
        double M_T = 0.5 * th.M_T1;
        SitEquilibria se = sit_equilibria(ep, mu_A2, rf, M_T);
        ok = ok && se.has_E1 && se.has_E2;
        auto rhs = pinned_rhs(M_T);
        SitState y{eq.E_star[0], eq.E_star[1], eq.E_star[2], M_T};
        SitState end = integrate_days<4>(rhs, y, 0, 1500, nullptr, iMS, {},
                                         [](int, const SitState&) { return false; });
        for (std::size_t i = 0; i < 3; ++i)
            ok = ok && std::abs(end[i] - se.E2[i]) <= 0.05 * se.E2[i];
    }
    return report(5, "SIT dichotomy around the release threshold", ok);
}

bool criterion6_residual_fertility_floor() {
    EntoParams ep = rates25();
    double K = 2e5;
    double mu_A2 = density_death_rate(K, ep);
    double N = basic_offspring(ep);
    WildEquilibrium eq = wild_equilibrium(ep, mu_A2);
    ResidualFertility rf{1.5 / N, 1.0};
    ReleaseThresholds th0 = release_thresholds(ep, mu_A2, {0.0, 1.0});

    Environment env = Environment::constant(ep, mu_A2, K, 3100);
    SitRhs rhs{&env, rf};
    ImpulseSchedule s;
    s.t0 = 0;
    s.n_releases = -1;
    s.bolus = 100.0 * th0.M_T1;
    SitState y0{eq.E_star[0], eq.E_star[1], eq.E_star[2], 0.0};
    auto traj = integrate_trajectory<4>(rhs, y0, 0, 3000, &s, iMS);

    // Tight form of the published bound: the positive equilibrium decreases
    // monotonically in the standing sterile population towards
    // (eps*N - 1)/(N - 1) * A*, so the long-run aquatic stage never drops
    // below it.
    double bound = (rf.eps * N - 1.0) / (N - 1.0) * eq.E_star[0];
    double min_A = traj.daily[2600][iA];
    for (int d = 2600; d <= 3000; ++d)
        min_A = std::min(min_A, traj.daily[static_cast<std::size_t>(d)][iA]);
    bool ok = min_A >= bound * 0.999;
    return report(6, "residual fertility bounds the aquatic stage from below", ok);
}

bool criterion7_mechanical_control() {
    RateSplines splines;
    WeatherSeries series = synth_weather(90210u, 2 * 365, SynthProfile{});
    CapacityConfig base, mc;
    mc.mc_level = 0.4;
    Environment e0 = build_environment(series, base, splines);
    Environment e1 = build_environment(series, mc, splines);
    bool ok = e0.size() == e1.size();
    for (int d = 0; ok && d < e0.size(); ++d) {
        double a = e0.at_day(d).mu_A2, b = e1.at_day(d).mu_A2;
        ok = a > 0.0 && std::abs(b * 0.6 / a - 1.0) <= 1e-12;
    }
    return report(7, "mc = 0.4 scales mu_A2 by exactly 1/0.6 daily", ok);
}

bool criterion8_epi_inversion() {
    RateSplines splines;
    EpiParams epi;
    bool ok = beta_mh(37.354, epi) == 0.0;
    ok = ok && std::abs(beta_hm(18.9871, epi) - 0.5) <= 1e-12;
    ok = ok && std::abs(nu_m(25.0, epi) - 0.184) <= 1e-12;

    WeatherSeries series = synth_weather(777u, 2 * 365, SynthProfile{});
    CapacityConfig ccfg;
    Environment env = build_environment(series, ccfg, splines);
    int finite_days = 0;
    for (int d = 0; ok && d < env.size(); ++d) {
        const DayEnv& de = env.at_day(d);
        double bound = f_threshold(de.temp, de.ep, epi);
        if (!std::isfinite(bound)) continue;  // risk already nil that day
        ++finite_days;
        ok = std::abs(r_eff(de.temp, bound, de.ep, epi) - 0.5) <= 1e-12;
    }
    ok = ok && finite_days > env.size() / 2;
    return report(8, "r_eff at the female bound is exactly 0.5", ok);
}

struct ScanSet {
    Environment env;
    std::vector<int> grid;
    std::vector<StrategyOutcome> outcomes;
};

std::vector<StrategyOutcome> run_scan(const Environment& env, ScanConfig cfg) {
    StrategyContext ctx = make_context(env, cfg);
    auto grid = default_start_grid(env, cfg);
    return scan_start_dates(grid, cfg, ctx, hw_jobs());
}

bool pointwise_leq(const std::vector<StrategyOutcome>& a,
                   const std::vector<StrategyOutcome>& b) {
    if (a.size() != b.size() || a.empty()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i].error.empty() || !b[i].error.empty()) return false;
        if (a[i].n_massive > b[i].n_massive) return false;
    }
    return true;
}

bool criterion9_scan_monotonicities(const WeatherSeries& series,
                                    const RateSplines& splines) {
    ScanConfig cfg;  // nuisance, 6000/ha, mc handled via capacity
    auto env_at_mc = [&](double mc) {
        CapacityConfig c;
        c.mc_level = mc;
        return build_environment(series, c, splines);
    };
    Environment env0 = env_at_mc(0.0);

    auto scan_eps = [&](double eps) {
        ScanConfig c = cfg;
        c.rf.eps = eps;
        return run_scan(env0, c);
    };
    auto base = scan_eps(0.0);
    bool ok = pointwise_leq(base, scan_eps(0.006));
    ok = ok && pointwise_leq(scan_eps(0.006), scan_eps(0.012));

    Environment env2 = env_at_mc(0.2);
    Environment env4 = env_at_mc(0.4);
    auto mc2 = run_scan(env2, cfg);
    auto mc4 = run_scan(env4, cfg);
    ok = ok && pointwise_leq(mc2, base) && pointwise_leq(mc4, mc2);

    ScanConfig dbl = cfg;
    dbl.massive_rate = 12000.0;
    ok = ok && pointwise_leq(run_scan(env0, dbl), base);
    return report(9, "n_massive monotone in eps, mc and release rate", ok);
}

bool criterion10_epi_vs_nuisance(const WeatherSeries& series,
                                 const RateSplines& splines) {
    CapacityConfig c;
    Environment env = build_environment(series, c, splines);
    ScanConfig nuis;
    ScanConfig epi;
    epi.objective = Objective::epi_risk;
    bool ok = pointwise_leq(run_scan(env, epi), run_scan(env, nuis));
    return report(10, "epi objective met no later than the nuisance one", ok);
}

bool criterion11_preset_regression() {
    RateSplines splines;
    // Mean temperature chosen so the preset's offspring number is ~49.3.
    double lo = 20.0, hi = 25.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (basic_offspring(splines.at(mid)) < 49.3 ? lo : hi) = mid;
    }
    double T = 0.5 * (lo + hi);
    EntoParams ep = splines.at(T);
    bool ok = std::abs(basic_offspring(ep) - 49.3) < 1e-6;

    CapacityConfig c;
    double K = c.K_max / 2.0 + c.K_0;  // mean water level, no control
    double mu_A2 = density_death_rate(K, ep);
    Environment env = Environment::constant(ep, mu_A2, K, 3 * 365);

    ScanConfig cfg;  // eps = 0, 6000/ha over 20 ha, nuisance objective
    auto outcomes = run_scan(env, cfg);
    auto row = summarize(outcomes, cfg, 0.0);
    ok = ok && row.has_value();
    if (!ok) return report(11, "constant-mean preset regression", false);

    std::string detail = "n_massive = " + std::to_string(row->mean_releases) +
                         ", total = " + std::to_string(row->total_males);
    ok = row->total_males ==
         row->mean_releases * cfg.massive_rate * cfg.area;
    if (kPresetPinnedReleases < 0)
        return report(11, "constant-mean preset regression (pin pending)", false,
                      detail);
    ok = ok && row->mean_releases == kPresetPinnedReleases;
    return report(11, "constant-mean preset regression", ok, detail);
}

}  // namespace

int main() {
    RateSplines splines;
    WeatherSeries series = synth_weather(20090101u, 3 * 365, SynthProfile{});

    int failures = 0;
    failures += !criterion1_rate_round_trip();
    failures += !criterion2_equilibrium_identity();
    failures += !criterion3_threshold_closed_form();
    failures += !criterion4_dynamics_consistency();
    failures += !criterion5_sit_dichotomy();
    failures += !criterion6_residual_fertility_floor();
    failures += !criterion7_mechanical_control();
    failures += !criterion8_epi_inversion();
    failures += !criterion9_scan_monotonicities(series, splines);
    failures += !criterion10_epi_vs_nuisance(series, splines);
    failures += !criterion11_preset_regression();

    std::printf("%d/11 criteria passed\n", 11 - failures);
    return failures;
}
