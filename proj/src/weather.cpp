#include "sitsim/weather.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "sitsim/bio_params.hpp"

namespace sitsim {

WeatherVariant parse_variant(const std::string& name) {
    if (name == "full") return WeatherVariant::full;
    if (name == "mean" || name == "constant_mean") return WeatherVariant::constant_mean;
    if (name == "temp" || name == "temperature_only") return WeatherVariant::temperature_only;
    if (name == "rain" || name == "rainfall_only") return WeatherVariant::rainfall_only;
    throw ConfigError("unknown weather variant: '" + name + "'");
}

std::string variant_name(WeatherVariant v) {
    switch (v) {
        case WeatherVariant::full: return "full";
        case WeatherVariant::constant_mean: return "constant_mean";
        case WeatherVariant::temperature_only: return "temperature_only";
        case WeatherVariant::rainfall_only: return "rainfall_only";
    }
    return "?";
}

void CapacityConfig::validate() const {
    if (K_max <= 0.0) throw ConfigError("K_max must be > 0");
    if (K_0 <= 0.0) throw ConfigError("K_0 must be > 0");
    if (evap_k < 0.0) throw ConfigError("evap_k must be >= 0");
    if (mc_level < 0.0 || mc_level >= 1.0)
        throw ConfigError("mechanical-control level must be in [0,1)");
}

double evaporation(double temp, double humidity, double evap_k) {
    if (humidity < 0.0 || humidity > 100.0)
        throw DataError("humidity out of [0,100]: " + std::to_string(humidity));
    return evap_k * (25.0 + temp * temp) * (100.0 - humidity);
}

WaterBalance water_balance(const WeatherSeries& series, double H0, double evap_k) {
    if (series.empty()) throw DataError("empty weather series");
    WaterBalance wb;
    wb.H_max = 0.0;
    for (const auto& rec : series.records) wb.H_max = std::max(wb.H_max, rec.rain);
    if (H0 < 0.0) H0 = wb.H_max / 2.0;
    if (H0 > wb.H_max) throw DataError("H0 exceeds the window's maximum rainfall");

    wb.H.resize(series.size());
    double h = H0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        wb.H[i] = h;
        const auto& rec = series.records[i];
        double delta = rec.rain - evaporation(rec.temp, rec.humidity, evap_k);
        h = std::clamp(h + delta, 0.0, wb.H_max);
    }
    return wb;
}

double temperature_capacity(double temp, double K_max) {
    double t = std::clamp(temp, 15.0, 35.0);
    if (t <= 27.0)
        return K_max * (0.1 + 0.9 * (t - 15.0) / 12.0);
    return K_max * (1.0 - 0.25 * (t - 27.0) / 8.0);
}

std::vector<double> carrying_capacity(const WaterBalance& wb,
                                      const CapacityConfig& cfg,
                                      const std::vector<double>& temps) {
    cfg.validate();
    if (wb.H.size() != temps.size())
        throw DataError("water balance and temperature series lengths differ");
    const double scale = 1.0 - cfg.mc_level;
    std::vector<double> K(wb.H.size());

    auto rainfall_K = [&](std::size_t i) {
        if (wb.H_max <= 0.0) return scale * cfg.K_0;  // no-rain fallback
        return scale * (cfg.K_max * wb.H[i] / wb.H_max + cfg.K_0);
    };

    switch (cfg.variant) {
        case WeatherVariant::full:
        case WeatherVariant::rainfall_only:
            for (std::size_t i = 0; i < K.size(); ++i) K[i] = rainfall_K(i);
            break;
        case WeatherVariant::temperature_only:
            for (std::size_t i = 0; i < K.size(); ++i)
                K[i] = scale * (temperature_capacity(temps[i], cfg.K_max) + cfg.K_0);
            break;
        case WeatherVariant::constant_mean: {
            double mean = 0.0;
            for (std::size_t i = 0; i < K.size(); ++i) mean += rainfall_K(i);
            mean /= static_cast<double>(K.size());
            std::fill(K.begin(), K.end(), mean);
            break;
        }
    }
    return K;
}

double density_death_rate(double K, const EntoParams& ep) {
    if (K <= 0.0) throw DataError("carrying capacity must be > 0");
    if (ep.mu_F <= 0.0) throw DataError("mu_F must be > 0");
    return ep.r * ep.gamma * ep.phi / (ep.mu_F * K);
}

WeatherSeries synth_weather(std::uint64_t seed, int days,
                            const SynthProfile& profile, DaySerial start_date) {
    if (days < 1) throw ConfigError("synthetic series needs at least one day");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> temp_noise(0.0, profile.temp_noise_sd);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    WeatherSeries series;
    series.start_date = start_date;
    series.records.reserve(static_cast<std::size_t>(days));
    constexpr double year = 365.25;
    for (int i = 0; i < days; ++i) {
        DaySerial date = start_date + i;
        // Day-of-year phase relative to the configured summer peak.
        auto ymd = from_serial(date);
        double doy = static_cast<double>(
            date - to_serial({ymd.year(), std::chrono::January, std::chrono::day{1}}));
        double phase =
            std::cos(2.0 * M_PI * (doy - profile.temp_peak_doy) / year);
        // phase ~ +1 in the wet/hot season, -1 in the dry/cool one.
        double seasonal = 0.5 * (1.0 + phase);

        WeatherRecord rec;
        rec.date = date;
        rec.temp = profile.temp_mean + profile.temp_amplitude * phase +
                   temp_noise(rng);
        double p_wet = profile.wet_prob_base + profile.wet_prob_amplitude * seasonal;
        if (unif(rng) < p_wet) {
            double mean = profile.rain_dry_mean +
                          (profile.rain_wet_mean - profile.rain_dry_mean) * seasonal;
            rec.rain = -mean * std::log(1.0 - unif(rng));
        }
        rec.humidity =
            std::clamp(62.0 + 18.0 * seasonal + 4.0 * temp_noise(rng), 50.0, 100.0);
        series.records.push_back(rec);
    }
    return series;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_field(const std::string& text, const std::string& what, long line_no) {
    try {
        std::size_t pos = 0;
        double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw DataError("line " + std::to_string(line_no) + ": bad " + what +
                        " value '" + text + "'");
    }
}

}  // namespace

WeatherSeries read_weather_csv(std::istream& in, const std::string& origin) {
    std::string line;
    long line_no = 0;
    // Header (comment lines starting with '#' are skipped).
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line[0] == '#') continue;
        break;
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto header = split_csv_line(line);
    const std::vector<std::string> expected{"date", "rain_mm", "temp_c",
                                            "humidity_pct"};
    if (header != expected) {
        std::string msg = origin + ": expected header date,rain_mm,temp_c,humidity_pct";
        for (const auto& col : expected)
            if (std::find(header.begin(), header.end(), col) == header.end())
                msg += "; missing column '" + col + "'";
        throw DataError(msg);
    }

    WeatherSeries series;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 4)
            throw DataError(origin + " line " + std::to_string(line_no) +
                            ": expected 4 fields, got " + std::to_string(fields.size()));
        WeatherRecord rec;
        rec.date = parse_date(fields[0]);
        rec.rain = parse_field(fields[1], "rain_mm", line_no);
        rec.temp = parse_field(fields[2], "temp_c", line_no);
        rec.humidity = parse_field(fields[3], "humidity_pct", line_no);
        if (rec.rain < 0.0)
            throw DataError(origin + " line " + std::to_string(line_no) +
                            ": negative rainfall");
        if (rec.humidity < 0.0 || rec.humidity > 100.0)
            throw DataError(origin + " line " + std::to_string(line_no) +
                            ": humidity out of [0,100]");
        if (series.records.empty()) {
            series.start_date = rec.date;
        } else if (rec.date != series.date_of(series.size())) {
            throw DataError(origin + " line " + std::to_string(line_no) +
                            ": non-contiguous date " + format_date(rec.date) +
                            " (expected " + format_date(series.date_of(series.size())) +
                            ")");
        }
        series.records.push_back(rec);
    }
    if (series.empty()) throw DataError(origin + ": no data rows");
    return series;
}

WeatherSeries load_weather_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open weather file: " + path);
    return read_weather_csv(in, path);
}

void write_weather_csv(std::ostream& out, const WeatherSeries& series) {
    out << "date,rain_mm,temp_c,humidity_pct\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& rec = series.records[i];
        out << format_date(rec.date) << ',' << rec.rain << ',' << rec.temp << ','
            << rec.humidity << '\n';
    }
}

}  // namespace sitsim
