#pragma once

#include "heliocast/timestamp.hpp"

#include <vector>

namespace heliocast {

/// Station site in degrees plus the fixed local-clock offset from UTC in
/// hours (supplied per run; no DST inference).
struct SiteLocation {
    double latitude = 0.0;   // [-90, 90]
    double longitude = 0.0;  // [-180, 180], east positive
    double utc_offset = 0.0; // hours

    SiteLocation() = default;
    SiteLocation(double lat, double lon, double utc_off);
};

struct SolarPosition {
    double zenith_deg = 0.0;
    double declination_deg = 0.0;
    double hour_angle_deg = 0.0;
};

struct ClearSkyPoint {
    Timestamp t;
    double zenith_deg = 0.0;
    double ghi = 0.0; // W/m^2
    double dni = 0.0; // W/m^2
};

/// Low-precision solar position (Spencer series for declination and equation
/// of time, NOAA-style true solar time). Zenith accuracy on the order of
/// half a degree, which is all the clear-sky baseline needs.
SolarPosition solar_position(const SiteLocation& site, Timestamp t);

/// Clear-sky GHI from the Haurwitz zenith-only model and DNI from a
/// Meinel-style air-mass exponential with sun-earth distance correction.
/// Both carry a gentle Linke-flavored turbidity scaling anchored at
/// turbidity 3. Zero at and below the horizon. Turbidity must be in [1, 10].
ClearSkyPoint clear_sky(const SiteLocation& site, Timestamp t, double turbidity);

/// clear_sky over the inclusive 15-minute grid [start, end].
std::vector<ClearSkyPoint> clear_sky_series(const SiteLocation& site, Timestamp start,
                                            Timestamp end, double turbidity);
std::vector<ClearSkyPoint> clear_sky_series_serial(const SiteLocation& site, Timestamp start,
                                                   Timestamp end, double turbidity);

} // namespace heliocast
