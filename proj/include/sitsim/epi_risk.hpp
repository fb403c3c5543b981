#pragma once

#include <limits>

#include "sitsim/bio_params.hpp"

namespace sitsim {

// DENV transmission constants and the temperature-response coefficients.
struct EpiParams {
    double B = 0.2;                    // mosquito bites per day
    double mu_h = 1.0 / (365.0 * 78.0);
    double eta_h = 1.0 / 7.0;          // recovery rate (1/viremic period)
    double N_h = 2000.0;

    // Lactin-1 coefficients for mosquito-to-human transmission.
    double lactin_alpha = 0.20404;
    double lactin_T_max = 37.354;
    double lactin_delta_T = 4.89694;

    // Hill midpoint for human-to-mosquito transmission.
    double beta_h = 18.9871;

    // Extrinsic incubation rate, quadratic in temperature.
    double nu_m_a = -0.001;
    double nu_m_b = 0.0670;
    double nu_m_c = -0.866;
};

// Probability of transmission from an infected mosquito, Lactin-1 response
// floored at 0 (it would go negative at/above T_max).
double beta_mh(double temp, const EpiParams& epi = EpiParams{});

// Probability of transmission from an infected human, T^7/(T^7 + beta_h^7);
// zero for T <= 0.
double beta_hm(double temp, const EpiParams& epi = EpiParams{});

// Extrinsic incubation rate, floored at 0 outside its positive interval.
double nu_m(double temp, const EpiParams& epi = EpiParams{});

// Effective reproduction number at a given day: linear in the susceptible
// female count. Zero when nu_m is floored to 0.
double r_eff(double temp, double females, const EntoParams& ep,
             const EpiParams& epi = EpiParams{});

// SIT basic reproduction number squared, evaluated at an equilibrium female
// count; algebraically identical to r_eff at that count.
double r0_sit_squared(double temp, double F_S_star, const EntoParams& ep,
                      const EpiParams& epi = EpiParams{});

// Female-count bound: F below it puts r_eff under 0.5. +infinity when any
// transmission factor is floored to 0 (risk already nil).
double f_threshold(double temp, const EntoParams& ep,
                   const EpiParams& epi = EpiParams{});

}  // namespace sitsim
