#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "sitsim/environment.hpp"
#include "sitsim/epi_risk.hpp"
#include "sitsim/errors.hpp"

namespace sitsim {

template <std::size_t N>
using State = std::array<double, N>;

// Wild system (A, M, F).
using WildState = State<3>;
// SIT system (A, M, F, M_S).
using SitState = State<4>;
enum SitIdx : std::size_t { iA = 0, iM = 1, iF = 2, iMS = 3 };

// Coupled SEI-SIR system. M_S sits at the same index as in SitState so one
// impulse path serves both.
using EpiState = State<9>;
enum EpiIdx : std::size_t {
    eA = 0, eM = 1, eFS = 2, eMS = 3, eFE = 4, eFI = 5,
    eSH = 6, eIH = 7, eRH = 8
};

struct ResidualFertility {
    double eps = 0.0;   // fertile proportion of released males, [0, 1)
    double beta = 1.0;  // competition parameter, > 0

    void validate() const {
        if (eps < 0.0 || eps >= 1.0) throw ConfigError("residual fertility must be in [0,1)");
        if (beta <= 0.0) throw ConfigError("competition parameter must be > 0");
    }
};

// (M + eps*beta*M_S) / (M + beta*M_S); 1 at the origin so the wild
// disease-free dynamics are unchanged there.
inline double fertile_fraction(double M, double M_S, const ResidualFertility& rf) {
    double denom = M + rf.beta * M_S;
    if (denom <= 0.0) return 1.0;
    return (M + rf.eps * rf.beta * M_S) / denom;
}

void rhs_wild(const WildState& y, const EntoParams& ep, double mu_A2, WildState& dy);
void rhs_sit(const SitState& y, const EntoParams& ep, double mu_A2,
             const ResidualFertility& rf, SitState& dy);
void rhs_epi(const EpiState& y, const EntoParams& ep, double mu_A2,
             const ResidualFertility& rf, const EpiParams& epi, double temp,
             EpiState& dy);

// Weekly (by default) releases at t0 + i*tau, first bolus at t0.
struct ImpulseSchedule {
    double t0 = 0.0;        // day offset of the first release
    double tau = 7.0;       // period in days
    long n_releases = -1;   // < 0: open-ended
    double bolus = 0.0;     // individuals added to M_S per event

    void validate() const {
        if (tau <= 0.0) throw ConfigError("release period must be > 0");
        if (bolus < 0.0) throw ConfigError("release bolus must be >= 0");
    }
};

// Fixed RK4 step, rounded to an integer number of substeps per day. The dry-
// season collapse of K (down to K_0, a ~100x drop) makes the logistic term
// stiff; 0.0025 day keeps the scheme stable through those transitions.
struct IntegratorOptions {
    double step = 0.0025;  // days; must be <= 0.05
};

namespace detail {

template <std::size_t N, typename Rhs>
void rk4_step(Rhs&& rhs, int day, double t, double h, State<N>& y) {
    State<N> k1, k2, k3, k4, tmp;
    rhs(day, t, y, k1);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    rhs(day, t + 0.5 * h, tmp, k2);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    rhs(day, t + 0.5 * h, tmp, k3);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * k3[i];
    rhs(day, t + h, tmp, k4);
    for (std::size_t i = 0; i < N; ++i)
        y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

template <std::size_t N>
void enforce_state(State<N>& y, double scale, double t) {
    for (std::size_t i = 0; i < N; ++i) {
        if (!std::isfinite(y[i]))
            throw NumericalError("state blow-up at t = " + std::to_string(t));
        if (y[i] < 0.0) {
            if (y[i] < -1e-9 * scale)
                throw NumericalError("negative state component at t = " +
                                     std::to_string(t));
            y[i] = 0.0;
        }
    }
}

}  // namespace detail

// Fixed-step RK4 over whole days [day_begin, day_end], with impulsive jumps
// on component `impulse_component` at the scheduled instants. Daily weather
// is piecewise constant: all stages of a substep use the day it starts in.
//
// The observer runs at every day boundary (before any impulse scheduled at
// that instant) and may return true to stop early. Returns the final state.
template <std::size_t N, typename Rhs, typename Observer>
State<N> integrate_days(Rhs&& rhs, State<N> y, int day_begin, int day_end,
                        const ImpulseSchedule* schedule,
                        std::size_t impulse_component,
                        const IntegratorOptions& opt, Observer&& observe) {
    if (day_end < day_begin) throw ConfigError("integration span is reversed");
    if (opt.step <= 0.0 || opt.step > 0.05)
        throw ConfigError("integration step must be in (0, 0.05] days");
    int spd = static_cast<int>(std::lround(1.0 / opt.step));
    if (spd < 1) spd = 1;
    const double h = 1.0 / spd;

    // Impulse instants mapped to substep indices; they must sit on the mesh.
    long next_release = 0;
    auto impulse_step = [&](long i) -> long {
        double pos = (schedule->t0 - day_begin + i * schedule->tau) * spd;
        long s = std::lround(pos);
        if (std::abs(pos - s) > 1e-6)
            throw ConfigError("release instants must align with the RK mesh");
        return s;
    };
    if (schedule) {
        schedule->validate();
        while (schedule->n_releases < 0 || next_release < schedule->n_releases) {
            if (impulse_step(next_release) >= 0) break;
            ++next_release;
        }
    }

    const long total_steps = static_cast<long>(day_end - day_begin) * spd;
    for (long s = 0; s <= total_steps; ++s) {
        int day = day_begin + static_cast<int>(s / spd);
        if (s % spd == 0) {
            if (observe(day, y)) return y;
        }
        if (schedule &&
            (schedule->n_releases < 0 || next_release < schedule->n_releases) &&
            impulse_step(next_release) == s) {
            y[impulse_component] += schedule->bolus;
            ++next_release;
        }
        if (s == total_steps) break;
        double scale = 1.0;
        for (double v : y) scale = std::max(scale, std::abs(v));
        double t = day_begin + static_cast<double>(s) / spd;
        detail::rk4_step(rhs, day, t, h, y);
        detail::enforce_state(y, scale, t + h);
    }
    return y;
}

template <std::size_t N>
struct Trajectory {
    int day_begin = 0;
    std::vector<State<N>> daily;  // one sample per day boundary, inclusive

    const State<N>& final_state() const { return daily.back(); }
    int size() const { return static_cast<int>(daily.size()); }
};

// Day-driven right-hand sides over an Environment.
struct SitRhs {
    const Environment* env;
    ResidualFertility rf;
    void operator()(int day, double /*t*/, const SitState& y, SitState& dy) const {
        const DayEnv& d = env->at_day(day);
        rhs_sit(y, d.ep, d.mu_A2, rf, dy);
    }
};

struct EpiRhs {
    const Environment* env;
    ResidualFertility rf;
    EpiParams epi;
    void operator()(int day, double /*t*/, const EpiState& y, EpiState& dy) const {
        const DayEnv& d = env->at_day(day);
        rhs_epi(y, d.ep, d.mu_A2, rf, epi, d.temp, dy);
    }
};

// Convenience wrapper collecting daily samples.
template <std::size_t N, typename Rhs>
Trajectory<N> integrate_trajectory(Rhs&& rhs, const State<N>& y0, int day_begin,
                                   int day_end, const ImpulseSchedule* schedule,
                                   std::size_t impulse_component,
                                   const IntegratorOptions& opt = {}) {
    Trajectory<N> traj;
    traj.day_begin = day_begin;
    traj.daily.reserve(static_cast<std::size_t>(day_end - day_begin) + 1);
    integrate_days<N>(
        rhs, y0, day_begin, day_end, schedule, impulse_component, opt,
        [&](int, const State<N>& y) {
            traj.daily.push_back(y);
            return false;
        });
    return traj;
}

// Trajectory CSV: t,A,M,F,M_S (or the extended SEI-SIR column set).
void write_trajectory_csv(std::ostream& out, const Trajectory<4>& traj,
                          DaySerial start_date);
void write_trajectory_csv(std::ostream& out, const Trajectory<9>& traj,
                          DaySerial start_date);

}  // namespace sitsim
