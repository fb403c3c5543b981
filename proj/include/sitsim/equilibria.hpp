#pragma once

#include <array>
#include <optional>

#include "sitsim/environment.hpp"
#include "sitsim/population_model.hpp"

namespace sitsim {

// (A, M, F) triple.
using EquilibriumPoint = std::array<double, 3>;

struct WildEquilibrium {
    double offspring_number = 0.0;  // N
    bool exists = false;            // N > 1
    EquilibriumPoint E_star{0.0, 0.0, 0.0};
};

// A* = (gamma + mu_A1)(N - 1)/mu_A2, M* = (1-r) gamma A*/mu_M,
// F* = r gamma A*/mu_F. For N <= 1 only the origin remains (flagged).
WildEquilibrium wild_equilibrium(const EntoParams& ep, double mu_A2);

// Equilibria of the SIT system under a standing sterile population M_T.
struct SitEquilibria {
    double discriminant = 0.0;
    bool has_E1 = false;  // lower positive equilibrium (unstable)
    bool has_E2 = false;  // upper positive equilibrium (stable)
    EquilibriumPoint E1{0.0, 0.0, 0.0};
    EquilibriumPoint E2{0.0, 0.0, 0.0};
};

// Roots of ((1-r)gamma/mu_M) A^2 - [M* - beta M_T] A
//            + beta M_T (gamma + mu_A1)/mu_A2 (1 - eps N) = 0,
// lifted to (A, M, F) with M = (1-r)gamma A/mu_M and F from the A-balance.
SitEquilibria sit_equilibria(const EntoParams& ep, double mu_A2,
                             const ResidualFertility& rf, double M_T);

struct ReleaseThresholds {
    bool defined = false;  // only for eps < 1/N
    double M_T1 = 0.0;     // standing sterile male counts (divided by beta)
    double M_T2 = 0.0;
};

// beta M_T1,eps = Q(N + 1 - 2 eps N - 2 sqrt((1 - eps N)(1 - eps) N)),
// beta M_T2,eps with the + sign. Thresholds are returned as standing male
// counts, i.e. already divided by beta.
ReleaseThresholds release_thresholds(const EntoParams& ep, double mu_A2,
                                     const ResidualFertility& rf);

struct E1MinBox {
    EquilibriumPoint box{0.0, 0.0, 0.0};  // componentwise minimum of E1(t)
    int days_used = 0;
    int days_skipped = 0;  // eps >= 1/N(t) or no E1 that day
};

// Componentwise minimum of E1(t) over the window, freezing each day's
// parameters and the post-release peak of the small-release periodic steady
// state, M_S = weekly_small_bolus / (1 - exp(-mu_S tau)). Throws DataError
// when no day admits E1.
E1MinBox e1_min_box(const Environment& env, const ResidualFertility& rf,
                    double weekly_small_bolus, double tau = 7.0,
                    int day_begin = 0, int day_end = -1);

}  // namespace sitsim
