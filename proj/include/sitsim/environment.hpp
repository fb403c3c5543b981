#pragma once

#include <vector>

#include "sitsim/bio_params.hpp"
#include "sitsim/weather.hpp"

namespace sitsim {

// Daily driving data for the ODE right-hand sides: rates from the daily mean
// temperature, capacity and density death rate from the water balance.
// Values are piecewise-constant within each day.
struct DayEnv {
    EntoParams ep;
    double K = 0.0;
    double mu_A2 = 0.0;
    double temp = 0.0;  // temperature the rates were evaluated at
    double H = 0.0;     // water balance that day
};

class Environment {
public:
    Environment() = default;
    Environment(DaySerial start_date, std::vector<DayEnv> days)
        : start_date_(start_date), days_(std::move(days)) {}

    // Constant-parameter environment (tests and the mean-parameter preset).
    static Environment constant(const EntoParams& ep, double mu_A2, double K,
                                int n_days, DaySerial start_date = 0,
                                double temp = 25.0);

    DaySerial start_date() const { return start_date_; }
    int size() const { return static_cast<int>(days_.size()); }

    // Day index clamped to the loaded window.
    const DayEnv& at_day(int day) const {
        if (day < 0) day = 0;
        int n = size();
        if (day >= n) day = n - 1;
        return days_[static_cast<std::size_t>(day)];
    }

    const std::vector<DayEnv>& days() const { return days_; }

private:
    DaySerial start_date_ = 0;
    std::vector<DayEnv> days_;
};

// Builds the per-day environment for a weather variant. The rate temperature
// is the daily mean for `full` and `temperature_only`, and the window-mean
// temperature for `constant_mean` and `rainfall_only`. H0 < 0 selects the
// default H_max/2.
Environment build_environment(const WeatherSeries& series,
                              const CapacityConfig& cfg,
                              const RateSplines& splines,
                              double H0 = -1.0);

}  // namespace sitsim
