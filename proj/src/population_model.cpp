#include "sitsim/population_model.hpp"

#include <ostream>

#include "sitsim/calendar.hpp"

namespace sitsim {

void rhs_wild(const WildState& y, const EntoParams& ep, double mu_A2,
              WildState& dy) {
    const double A = y[0], M = y[1], F = y[2];
    dy[0] = ep.phi * F - (ep.gamma + ep.mu_A1 + mu_A2 * A) * A;
    dy[1] = (1.0 - ep.r) * ep.gamma * A - ep.mu_M * M;
    dy[2] = ep.r * ep.gamma * A - ep.mu_F * F;
}

void rhs_sit(const SitState& y, const EntoParams& ep, double mu_A2,
             const ResidualFertility& rf, SitState& dy) {
    const double A = y[iA], M = y[iM], F = y[iF], MS = y[iMS];
    dy[iA] = ep.phi * F - (ep.gamma + ep.mu_A1 + mu_A2 * A) * A;
    dy[iM] = (1.0 - ep.r) * ep.gamma * A - ep.mu_M * M;
    dy[iF] = ep.r * ep.gamma * fertile_fraction(M, MS, rf) * A - ep.mu_F * F;
    dy[iMS] = -ep.mu_S * MS;  // releases enter as jumps only
}

void rhs_epi(const EpiState& y, const EntoParams& ep, double mu_A2,
             const ResidualFertility& rf, const EpiParams& epi, double temp,
             EpiState& dy) {
    if (epi.N_h <= 0.0) throw ConfigError("human population must be > 0");
    const double A = y[eA], M = y[eM], FS = y[eFS], MS = y[eMS];
    const double FE = y[eFE], FI = y[eFI];
    const double SH = y[eSH], IH = y[eIH], RH = y[eRH];
    const double F_total = FS + FE + FI;

    const double bmh = beta_mh(temp, epi);
    const double bhm = beta_hm(temp, epi);
    const double num = nu_m(temp, epi);
    const double infect_m = epi.B * bhm * FS * IH / epi.N_h;  // new exposed females
    const double infect_h = epi.B * bmh * FI * SH / epi.N_h;  // new human cases

    dy[eA] = ep.phi * F_total - (ep.gamma + ep.mu_A1 + mu_A2 * A) * A;
    dy[eM] = (1.0 - ep.r) * ep.gamma * A - ep.mu_M * M;
    dy[eFS] = ep.r * ep.gamma * fertile_fraction(M, MS, rf) * A - infect_m -
              ep.mu_F * FS;
    dy[eMS] = -ep.mu_S * MS;
    dy[eFE] = infect_m - (num + ep.mu_F) * FE;
    dy[eFI] = num * FE - ep.mu_F * FI;
    dy[eSH] = epi.mu_h * epi.N_h - infect_h - epi.mu_h * SH;
    dy[eIH] = infect_h - (epi.eta_h + epi.mu_h) * IH;
    dy[eRH] = epi.eta_h * IH - epi.mu_h * RH;
}

namespace {

template <std::size_t N>
void write_rows(std::ostream& out, const Trajectory<N>& traj,
                DaySerial start_date) {
    for (int i = 0; i < traj.size(); ++i) {
        out << format_date(start_date + traj.day_begin + i);
        for (double v : traj.daily[static_cast<std::size_t>(i)]) out << ',' << v;
        out << '\n';
    }
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory<4>& traj,
                          DaySerial start_date) {
    out << "t,A,M,F,M_S\n";
    write_rows(out, traj, start_date);
}

void write_trajectory_csv(std::ostream& out, const Trajectory<9>& traj,
                          DaySerial start_date) {
    out << "t,A,M,F_S,M_S,F_E,F_I,S_h,I_h,R_h\n";
    write_rows(out, traj, start_date);
}

}  // namespace sitsim
