#pragma once

#include <chrono>
#include <string>

#include "sitsim/errors.hpp"

namespace sitsim {

// Days since 1970-01-01. Plain int so day arithmetic stays trivial.
using DaySerial = int;

inline DaySerial to_serial(std::chrono::year_month_day ymd) {
    return static_cast<DaySerial>(
        std::chrono::sys_days(ymd).time_since_epoch().count());
}

inline std::chrono::year_month_day from_serial(DaySerial d) {
    return std::chrono::year_month_day(
        std::chrono::sys_days(std::chrono::days(d)));
}

// Parses strict ISO-8601 calendar dates (YYYY-MM-DD).
DaySerial parse_date(const std::string& text);

std::string format_date(DaySerial d);

// Weekday index, 0 = Monday ... 6 = Sunday.
inline int weekday_index(DaySerial d) {
    std::chrono::weekday wd{std::chrono::sys_days(std::chrono::days(d))};
    return static_cast<int>(wd.iso_encoding()) - 1;
}

}  // namespace sitsim
