#include "heliocast/timestamp.hpp"

#include <array>
#include <cctype>
#include <cstdio>

namespace heliocast {
namespace {

constexpr std::int64_t kMinutesPerDay = 24 * 60;

// Howard Hinnant's civil-date algorithms, proleptic Gregorian.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y = yy + (m <= 2);
}

bool last_day_of_month(std::int64_t y, unsigned m, unsigned& out) {
    static constexpr std::array<unsigned, 12> days{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m < 1 || m > 12) return false;
    out = days[m - 1];
    if (m == 2) {
        const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
        if (leap) out = 29;
    }
    return true;
}

bool all_digits(const std::string& s, std::size_t from, std::size_t count) {
    if (from + count > s.size()) return false;
    for (std::size_t i = from; i < from + count; ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

} // namespace

std::optional<Timestamp> parse_timestamp(const std::string& text) {
    std::size_t b = 0;
    std::size_t e = text.size();
    while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
    const std::string s = text.substr(b, e - b);

    // "YYYY-MM-DD HH:MM" is exactly 16 characters.
    if (s.size() != 16 || s[4] != '-' || s[7] != '-' || s[10] != ' ' || s[13] != ':')
        return std::nullopt;
    if (!all_digits(s, 0, 4) || !all_digits(s, 5, 2) || !all_digits(s, 8, 2) ||
        !all_digits(s, 11, 2) || !all_digits(s, 14, 2))
        return std::nullopt;

    const std::int64_t year = std::stoll(s.substr(0, 4));
    const unsigned month = static_cast<unsigned>(std::stoul(s.substr(5, 2)));
    const unsigned day = static_cast<unsigned>(std::stoul(s.substr(8, 2)));
    const unsigned hour = static_cast<unsigned>(std::stoul(s.substr(11, 2)));
    const unsigned minute = static_cast<unsigned>(std::stoul(s.substr(14, 2)));

    unsigned dmax = 0;
    if (!last_day_of_month(year, month, dmax) || day < 1 || day > dmax) return std::nullopt;
    if (hour > 23 || minute > 59) return std::nullopt;

    const std::int64_t days = days_from_civil(year, month, day);
    return Timestamp{days * kMinutesPerDay + hour * 60 + minute};
}

std::string format_timestamp(Timestamp t) {
    std::int64_t days = t.minutes / kMinutesPerDay;
    std::int64_t rem = t.minutes % kMinutesPerDay;
    if (rem < 0) {
        rem += kMinutesPerDay;
        --days;
    }
    std::int64_t y;
    unsigned m, d;
    civil_from_days(days, y, m, d);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02u %02lld:%02lld",
                  static_cast<long long>(y), m, d,
                  static_cast<long long>(rem / 60), static_cast<long long>(rem % 60));
    return buf;
}

Timestamp snap_to_grid(Timestamp t) {
    std::int64_t r = t.minutes % kStepMinutes;
    if (r < 0) r += kStepMinutes;
    return (r <= kStepMinutes / 2) ? Timestamp{t.minutes - r}
                                   : Timestamp{t.minutes + (kStepMinutes - r)};
}

bool on_grid(Timestamp t) {
    return t.minutes % kStepMinutes == 0;
}

double hours_of_day(Timestamp t) {
    std::int64_t rem = t.minutes % kMinutesPerDay;
    if (rem < 0) rem += kMinutesPerDay;
    return static_cast<double>(rem) / 60.0;
}

int day_of_year(Timestamp t) {
    std::int64_t days = t.minutes / kMinutesPerDay;
    if (t.minutes % kMinutesPerDay < 0) --days;
    std::int64_t y;
    unsigned m, d;
    civil_from_days(days, y, m, d);
    return static_cast<int>(days - days_from_civil(y, 1, 1)) + 1;
}

} // namespace heliocast
