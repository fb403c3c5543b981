#include "sitsim/calendar.hpp"

#include <cstdio>

namespace sitsim {

DaySerial parse_date(const std::string& text) {
    int y = 0, m = 0, d = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%d-%d-%d%c", &y, &m, &d, &tail) != 3)
        throw DataError("invalid ISO date: '" + text + "'");
    std::chrono::year_month_day ymd{std::chrono::year{y},
                                    std::chrono::month{unsigned(m)},
                                    std::chrono::day{unsigned(d)}};
    if (!ymd.ok()) throw DataError("invalid calendar date: '" + text + "'");
    return to_serial(ymd);
}

std::string format_date(DaySerial d) {
    auto ymd = from_serial(d);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(ymd.year()),
                  unsigned(ymd.month()), unsigned(ymd.day()));
    return buf;
}

}  // namespace sitsim
