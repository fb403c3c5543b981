#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sitsim/equilibria.hpp"
#include "sitsim/population_model.hpp"

namespace sitsim {

enum class Objective { nuisance, epi_risk };

Objective parse_objective(const std::string& name);
std::string objective_name(Objective o);

struct ScanConfig {
    Objective objective = Objective::nuisance;
    double massive_rate = 6000.0;  // Ind/ha/week
    double small_rate = 100.0;     // Ind/ha/week, maintenance releases
    double area = 20.0;            // ha
    double tau = 7.0;              // days between releases
    ResidualFertility rf;
    int max_releases = 400;
    int burn_in_days = 365;
    IntegratorOptions integ;
    EpiParams epi;

    double massive_bolus() const { return massive_rate * area; }
    double small_bolus() const { return small_rate * area; }

    void validate() const;
};

struct StrategyOutcome {
    int t0_day = 0;  // day offset into the environment
    int n_massive = 0;
    int stop_day = 0;
    double total_sterile_males = 0.0;  // massive phase only
    bool objective_met = false;
    std::string error;  // non-empty when this entry failed
};

// Shared read-only inputs for strategy runs: the environment, the
// no-release baseline trajectory from day 0 (the burn-in source of initial
// conditions), and the nuisance box when that objective needs it.
struct StrategyContext {
    const Environment* env = nullptr;
    Trajectory<4> baseline;  // no-release wild trajectory over the window
    std::optional<E1MinBox> nuisance_box;
};

// Builds the baseline trajectory (initial state: frozen-day-0 equilibrium
// when it exists) and, for the nuisance objective, the E1 minimum box.
StrategyContext make_context(const Environment& env, const ScanConfig& cfg);

// Weekly massive releases from t0; daily objective checks. The first bolus
// lands at t0; a start state already satisfying the objective yields
// n_massive = 0.
StrategyOutcome run_strategy(int t0_day, const ScanConfig& cfg,
                             const StrategyContext& ctx);

// Independent runs over the start grid; per-entry failures are recorded, not
// propagated. jobs <= 1 runs sequentially.
std::vector<StrategyOutcome> scan_start_dates(const std::vector<int>& start_grid,
                                              const ScanConfig& cfg,
                                              const StrategyContext& ctx,
                                              int jobs = 1);

// Default start grid: every Monday after the burn-in, aligned with weekly
// releases.
std::vector<int> default_start_grid(const Environment& env, const ScanConfig& cfg);

struct SummaryRow {
    double eps = 0.0;
    double mc_level = 0.0;
    double massive_rate = 0.0;
    int n_outcomes = 0;
    int mean_releases = 0;  // rounded to the nearest release
    double total_males = 0.0;  // mean_releases * rate * area
};

// One row per scan; the mean is over start dates that met the objective.
// Returns nothing for a scan with no successful outcome.
std::optional<SummaryRow> summarize(const std::vector<StrategyOutcome>& outcomes,
                                    const ScanConfig& cfg, double mc_level);

struct MaintenancePreview {
    Trajectory<4> trajectory;
    bool held = true;  // stayed inside the box / below the epi target
    int first_violation_day = -1;
};

// Continues from the stop state: small weekly releases for the nuisance
// objective, no releases for the epi one ("massive and stop").
MaintenancePreview maintenance_preview(const SitState& stop_state, int stop_day,
                                       int horizon_days, const ScanConfig& cfg,
                                       const StrategyContext& ctx);

void write_scan_csv(std::ostream& out, const std::vector<StrategyOutcome>& outcomes,
                    const Environment& env);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

}  // namespace sitsim
