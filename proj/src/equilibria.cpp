#include "sitsim/equilibria.hpp"

#include <cmath>

namespace sitsim {

namespace {

// Lifts an aquatic root to (A, M, F): M from the male balance, F from the
// aquatic balance (valid for phi > 0).
EquilibriumPoint lift(double A, const EntoParams& ep, double mu_A2) {
    EquilibriumPoint e{A, 0.0, 0.0};
    if (A <= 0.0) return e;
    e[1] = (1.0 - ep.r) * ep.gamma * A / ep.mu_M;
    e[2] = (ep.gamma + ep.mu_A1 + mu_A2 * A) * A / ep.phi;
    return e;
}

}  // namespace

WildEquilibrium wild_equilibrium(const EntoParams& ep, double mu_A2) {
    WildEquilibrium eq;
    eq.offspring_number = basic_offspring(ep);
    if (eq.offspring_number <= 1.0) return eq;  // only the origin
    if (mu_A2 <= 0.0) throw DataError("wild equilibrium needs mu_A2 > 0");
    eq.exists = true;
    double A = (ep.gamma + ep.mu_A1) * (eq.offspring_number - 1.0) / mu_A2;
    eq.E_star = {A, (1.0 - ep.r) * ep.gamma * A / ep.mu_M,
                 ep.r * ep.gamma * A / ep.mu_F};
    return eq;
}

SitEquilibria sit_equilibria(const EntoParams& ep, double mu_A2,
                             const ResidualFertility& rf, double M_T) {
    rf.validate();
    if (M_T < 0.0) throw ConfigError("standing sterile population must be >= 0");
    SitEquilibria out;

    double N = basic_offspring(ep);
    WildEquilibrium wild = wild_equilibrium(ep, mu_A2);
    double M_star = wild.E_star[1];
    double y = rf.beta * M_T;

    const double a = (1.0 - ep.r) * ep.gamma / ep.mu_M;
    const double b = -(M_star - y);
    const double c = y * (ep.gamma + ep.mu_A1) / mu_A2 * (1.0 - rf.eps * N);
    out.discriminant = b * b - 4.0 * a * c;

    if (M_T == 0.0) {
        // a A^2 - M* A = 0: the positive root is A*.
        if (wild.exists) {
            out.has_E2 = true;
            out.E2 = lift(wild.E_star[0], ep, mu_A2);
        }
        return out;
    }
    if (out.discriminant < 0.0) return out;  // extinction regime

    double sq = std::sqrt(out.discriminant);
    double A1 = (-b - sq) / (2.0 * a);
    double A2 = (-b + sq) / (2.0 * a);
    if (A2 > 0.0) {
        out.has_E2 = true;
        out.E2 = lift(A2, ep, mu_A2);
    }
    if (A1 > 0.0) {
        out.has_E1 = true;
        out.E1 = lift(A1, ep, mu_A2);
    }
    return out;
}

ReleaseThresholds release_thresholds(const EntoParams& ep, double mu_A2,
                                     const ResidualFertility& rf) {
    rf.validate();
    ReleaseThresholds th;
    double N = basic_offspring(ep);
    if (rf.eps >= 1.0 / N) return th;  // no finite extinction threshold
    double Q = q_factor(ep, mu_A2);
    double root = 2.0 * std::sqrt((1.0 - rf.eps * N) * (1.0 - rf.eps) * N);
    th.defined = true;
    th.M_T1 = Q * (N + 1.0 - 2.0 * rf.eps * N - root) / rf.beta;
    th.M_T2 = Q * (N + 1.0 - 2.0 * rf.eps * N + root) / rf.beta;
    return th;
}

E1MinBox e1_min_box(const Environment& env, const ResidualFertility& rf,
                    double weekly_small_bolus, double tau, int day_begin,
                    int day_end) {
    rf.validate();
    if (weekly_small_bolus <= 0.0)
        throw ConfigError("small-release bolus must be > 0");
    if (day_end < 0) day_end = env.size();
    if (day_begin < 0 || day_begin >= day_end || day_end > env.size())
        throw ConfigError("e1_min_box window out of range");

    E1MinBox out;
    bool any = false;
    for (int d = day_begin; d < day_end; ++d) {
        const DayEnv& de = env.at_day(d);
        double N = basic_offspring(de.ep);
        if (N <= 1.0 || rf.eps >= 1.0 / N) {
            ++out.days_skipped;
            continue;
        }
        // Post-release peak of the small-release periodic steady state.
        double M_bar =
            weekly_small_bolus / (1.0 - std::exp(-de.ep.mu_S * tau));
        SitEquilibria eq = sit_equilibria(de.ep, de.mu_A2, rf, M_bar);
        if (!eq.has_E1) {
            ++out.days_skipped;
            continue;
        }
        if (!any) {
            out.box = eq.E1;
            any = true;
        } else {
            for (std::size_t i = 0; i < 3; ++i)
                out.box[i] = std::min(out.box[i], eq.E1[i]);
        }
        ++out.days_used;
    }
    if (!any)
        throw DataError(
            "no day admits E1: residual fertility too large for this window");
    return out;
}

}  // namespace sitsim
