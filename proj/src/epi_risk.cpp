#include "sitsim/epi_risk.hpp"

#include <cmath>

namespace sitsim {

double beta_mh(double temp, const EpiParams& epi) {
    double v = std::exp(epi.lactin_alpha * temp) -
               std::exp(epi.lactin_alpha * epi.lactin_T_max -
                        (epi.lactin_T_max - temp) / epi.lactin_delta_T);
    return std::max(0.0, v);
}

double beta_hm(double temp, const EpiParams& epi) {
    if (temp <= 0.0) return 0.0;
    double t7 = std::pow(temp, 7.0);
    return t7 / (t7 + std::pow(epi.beta_h, 7.0));
}

double nu_m(double temp, const EpiParams& epi) {
    double v = epi.nu_m_a * temp * temp + epi.nu_m_b * temp + epi.nu_m_c;
    return std::max(0.0, v);
}

double r_eff(double temp, double females, const EntoParams& ep,
             const EpiParams& epi) {
    if (ep.mu_F <= 0.0) throw DataError("r_eff undefined: mu_F must be > 0");
    double num = nu_m(temp, epi);
    if (num <= 0.0) return 0.0;
    return num / (num + ep.mu_F) *
           (epi.B * epi.B * beta_mh(temp, epi) * beta_hm(temp, epi)) /
           (ep.mu_F * (epi.eta_h + epi.mu_h)) * females / epi.N_h;
}

double r0_sit_squared(double temp, double F_S_star, const EntoParams& ep,
                      const EpiParams& epi) {
    return r_eff(temp, F_S_star, ep, epi);
}

double f_threshold(double temp, const EntoParams& ep, const EpiParams& epi) {
    double num = nu_m(temp, epi);
    double bmh = beta_mh(temp, epi);
    double bhm = beta_hm(temp, epi);
    if (num <= 0.0 || bmh <= 0.0 || bhm <= 0.0)
        return std::numeric_limits<double>::infinity();
    return (num + ep.mu_F) / num * ep.mu_F * (epi.eta_h + epi.mu_h) /
           (epi.B * epi.B * bmh * bhm) * epi.N_h / 2.0;
}

}  // namespace sitsim
