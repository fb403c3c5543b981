#pragma once

#include <array>
#include <optional>
#include <vector>

#include "sitsim/errors.hpp"

namespace sitsim {

// One laboratory row at a knot temperature. Proportions are stored as
// fractions of 1, durations in days.
struct LabTableRow {
    double temp = 0.0;
    double r_viable = 0.0;               // proportion of viable eggs
    double N_eggs = 0.0;                 // eggs per deposit
    std::optional<double> tau_gono;      // gonotrophic cycle; absent at 15 C
    double tau_A = 0.0;                  // hatching to emergence
    double s_A = 0.0;                    // larva -> adult survivorship
    double tau_M = 0.0;                  // male half-life
    double tau_F = 0.0;                  // female half-life
};

// Entomological rates (1/day except phi in eggs/female/day and r
// dimensionless). mu_S is tied to mu_M.
struct EntoParams {
    double phi = 0.0;
    double gamma = 0.0;  // aquatic -> adult transition
    double mu_A1 = 0.0;
    double mu_M = 0.0;
    double mu_F = 0.0;
    double mu_S = 0.0;
    double r = 0.5;
};

// Laboratory measurements at {15, 20, 25, 30, 35} C.
const std::array<LabTableRow, 5>& lab_table();

// phi = r_viable * N_eggs / tau_gono, mu_A1 = -log(s_A)/tau_A,
// gamma = 1/tau_A, mu_M = log(2)/tau_M, mu_F = log(2)/tau_F.
// phi = 0 when tau_gono is absent.
EntoParams derive_rates(const LabTableRow& row);

// Natural cubic spline (zero second derivative at both ends).
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;  // clamped to the knot range

private:
    std::vector<double> x_, y_, m_;  // m_: second derivatives at knots
};

// Per-rate interpolants over the [15, 35] C knot grid. Knot values are the
// published rounded rates, not the re-derived ones.
class RateSplines {
public:
    RateSplines();  // built-in knot table
    explicit RateSplines(const std::array<LabTableRow, 5>& rows,
                         bool use_published_knots);

    // Spline evaluation at clamp(T, 15, 35); every rate floored at 0.
    EntoParams at(double temp) const;

    static constexpr std::array<double, 5> knot_temps{15, 20, 25, 30, 35};
    // Published rate values at the knots, row-major per rate.
    static const std::array<std::array<double, 5>, 5>& published_knots();

private:
    CubicSpline phi_, gamma_, mu_A1_, mu_M_, mu_F_;
};

EntoParams rates_at(double temp, const RateSplines& splines);

// Basic offspring number N = r*phi*gamma / ((gamma + mu_A1) * mu_F).
double basic_offspring(const EntoParams& ep);

// Q = (1-r)*gamma*(gamma + mu_A1) / (mu_A2 * mu_M).
double q_factor(const EntoParams& ep, double mu_A2);

// Optional override of the laboratory table: same columns as the built-in
// one, CSV with header temp,r_viable,n_eggs,tau_gono,tau_a,s_a,tau_m,tau_f
// (tau_gono may be "NA").
std::array<LabTableRow, 5> load_lab_table_csv(const std::string& path);

}  // namespace sitsim
