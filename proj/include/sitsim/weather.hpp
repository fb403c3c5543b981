#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sitsim/calendar.hpp"

namespace sitsim {

struct WeatherRecord {
    DaySerial date = 0;
    double rain = 0.0;      // mm/day, >= 0
    double temp = 0.0;      // degrees C
    double humidity = 0.0;  // percent, [0, 100]
};

// Contiguous daily series; record i is at start_date + i.
struct WeatherSeries {
    DaySerial start_date = 0;
    std::vector<WeatherRecord> records;

    std::size_t size() const { return records.size(); }
    bool empty() const { return records.empty(); }
    const WeatherRecord& at_day(std::size_t i) const { return records[i]; }
    DaySerial date_of(std::size_t i) const {
        return start_date + static_cast<DaySerial>(i);
    }
};

struct WaterBalance {
    std::vector<double> H;  // one entry per day, same indexing as the series
    double H_max = 0.0;     // max rainfall over the loaded window
};

enum class WeatherVariant { full, constant_mean, temperature_only, rainfall_only };

WeatherVariant parse_variant(const std::string& name);
std::string variant_name(WeatherVariant v);

struct CapacityConfig {
    double K_max = 20.0 * 10000.0;  // natural maximal carrying capacity
    double K_0 = 20.0 * 100.0;      // fixed artificial carrying capacity
    double evap_k = 1e-3;           // evaporation coefficient (not given upstream)
    double mc_level = 0.0;          // mechanical-control fraction, [0, 1)
    WeatherVariant variant = WeatherVariant::full;

    void validate() const;
};

// Evap = evap_k * (25 + T^2) * (100 - Hum). Throws DataError on humidity
// outside [0, 100].
double evaporation(double temp, double humidity, double evap_k);

// Daily bucket recursion: H(t+1) = clamp(H(t) + Rain(t) - Evap(t), 0, H_max),
// H_max = max rainfall over the window. H0 < 0 selects the default H_max/2.
WaterBalance water_balance(const WeatherSeries& series, double H0, double evap_k);

// K(t) per variant, scaled by (1 - mc_level). All-zero-rainfall windows fall
// back to K = (1 - mc) * K_0.
std::vector<double> carrying_capacity(const WaterBalance& wb,
                                      const CapacityConfig& cfg,
                                      const std::vector<double>& temps);

// Piecewise-linear temperature capacity through (15, 0.1*K_max),
// (27, K_max), (35, 0.75*K_max); clamped outside [15, 35].
double temperature_capacity(double temp, double K_max);

struct EntoParams;  // bio_params.hpp

// mu_A2 = r * gamma * phi / (mu_F * K). Throws DataError for K <= 0.
double density_death_rate(double K, const EntoParams& ep);

struct SynthProfile {
    double temp_mean = 24.0;       // degrees C
    double temp_amplitude = 4.0;   // annual swing
    double temp_noise_sd = 0.6;
    int temp_peak_doy = 15;        // mid-January: austral summer
    double rain_wet_mean = 14.0;   // mm on a wet-season rainy day
    double rain_dry_mean = 2.5;
    double wet_prob_base = 0.25;
    double wet_prob_amplitude = 0.35;
};

// Deterministic-for-seed synthetic daily weather; the wet season tracks the
// temperature peak.
WeatherSeries synth_weather(std::uint64_t seed, int days,
                            const SynthProfile& profile = SynthProfile{},
                            DaySerial start_date = parse_date("2009-01-01"));

// CSV with header `date,rain_mm,temp_c,humidity_pct`; rejects gaps and
// out-of-range fields with line-numbered errors.
WeatherSeries load_weather_csv(const std::string& path);
WeatherSeries read_weather_csv(std::istream& in, const std::string& origin);

void write_weather_csv(std::ostream& out, const WeatherSeries& series);

}  // namespace sitsim
