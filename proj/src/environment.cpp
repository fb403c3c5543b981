#include "sitsim/environment.hpp"

#include <numeric>

namespace sitsim {

Environment Environment::constant(const EntoParams& ep, double mu_A2, double K,
                                  int n_days, DaySerial start_date, double temp) {
    std::vector<DayEnv> days(static_cast<std::size_t>(n_days));
    for (auto& d : days) {
        d.ep = ep;
        d.mu_A2 = mu_A2;
        d.K = K;
        d.temp = temp;
    }
    return Environment(start_date, std::move(days));
}

Environment build_environment(const WeatherSeries& series,
                              const CapacityConfig& cfg,
                              const RateSplines& splines, double H0) {
    cfg.validate();
    WaterBalance wb = water_balance(series, H0, cfg.evap_k);

    std::vector<double> temps(series.size());
    for (std::size_t i = 0; i < series.size(); ++i)
        temps[i] = series.records[i].temp;

    std::vector<double> K = carrying_capacity(wb, cfg, temps);

    // Rates see the real daily temperature unless the variant averages it
    // away.
    const bool mean_temp_rates = cfg.variant == WeatherVariant::constant_mean ||
                                 cfg.variant == WeatherVariant::rainfall_only;
    double temp_mean =
        std::accumulate(temps.begin(), temps.end(), 0.0) / temps.size();

    std::vector<DayEnv> days(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        DayEnv& d = days[i];
        d.temp = mean_temp_rates ? temp_mean : temps[i];
        d.ep = splines.at(d.temp);
        d.K = K[i];
        d.H = wb.H[i];
        d.mu_A2 = density_death_rate(d.K, d.ep);
    }
    return Environment(series.start_date, std::move(days));
}

}  // namespace sitsim
