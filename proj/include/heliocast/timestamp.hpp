#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace heliocast {

/// Calendar timestamp stored as whole minutes since 1970-01-01 00:00 in the
/// station's local standard time. No timezone conversion is ever applied.
struct Timestamp {
    std::int64_t minutes = 0;

    friend auto operator<=>(const Timestamp&, const Timestamp&) = default;

    Timestamp& operator+=(std::int64_t m) {
        minutes += m;
        return *this;
    }
    friend Timestamp operator+(Timestamp t, std::int64_t m) { return {t.minutes + m}; }
    friend std::int64_t operator-(Timestamp a, Timestamp b) { return a.minutes - b.minutes; }
};

inline constexpr std::int64_t kStepMinutes = 15;

/// Parses "YYYY-MM-DD HH:MM". Returns nullopt for anything malformed,
/// including impossible calendar dates.
std::optional<Timestamp> parse_timestamp(const std::string& text);

/// Formats back to "YYYY-MM-DD HH:MM".
std::string format_timestamp(Timestamp t);

/// Snaps to the nearest 15-minute boundary (remainder of 8..14 rounds up).
Timestamp snap_to_grid(Timestamp t);

bool on_grid(Timestamp t);

/// Fractional hours since local midnight, e.g. 13:20 -> 13.333...
double hours_of_day(Timestamp t);

/// 1-based day of year for the civil date of t.
int day_of_year(Timestamp t);

} // namespace heliocast
