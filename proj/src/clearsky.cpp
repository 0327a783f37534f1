#include "heliocast/clearsky.hpp"

#include "heliocast/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace heliocast {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSolarConstant = 1353.0; // W/m^2
constexpr double kDeg = 180.0 / kPi;
constexpr double kRad = kPi / 180.0;

// Kasten-Young relative air mass (zenith in degrees, valid below 90).
double air_mass(double zenith_deg) {
    const double cz = std::cos(zenith_deg * kRad);
    return 1.0 / (cz + 0.50572 * std::pow(96.07995 - zenith_deg, -1.6364));
}

// Gentle turbidity scaling anchored at T = 3 so the published Haurwitz and
// Meinel magnitudes are reproduced at the default.
double turbidity_factor(double turbidity, double am) {
    return std::exp(-0.09 * (turbidity - 3.0) * am);
}

} // namespace

SiteLocation::SiteLocation(double lat, double lon, double utc_off)
    : latitude(lat), longitude(lon), utc_offset(utc_off) {
    if (!(lat >= -90.0 && lat <= 90.0))
        throw std::invalid_argument("SiteLocation: latitude out of [-90, 90]");
    if (!(lon >= -180.0 && lon <= 180.0))
        throw std::invalid_argument("SiteLocation: longitude out of [-180, 180]");
}

SolarPosition solar_position(const SiteLocation& site, Timestamp t) {
    const double hours = hours_of_day(t);
    const int doy = day_of_year(t);

    // Spencer day-angle series.
    const double g = 2.0 * kPi / 365.0 * (doy - 1 + (hours - 12.0) / 24.0);
    const double decl = 0.006918 - 0.399912 * std::cos(g) + 0.070257 * std::sin(g) -
                        0.006758 * std::cos(2 * g) + 0.000907 * std::sin(2 * g) -
                        0.002697 * std::cos(3 * g) + 0.00148 * std::sin(3 * g);
    const double eot_min = 229.18 * (0.000075 + 0.001868 * std::cos(g) -
                                     0.032077 * std::sin(g) - 0.014615 * std::cos(2 * g) -
                                     0.040849 * std::sin(2 * g));

    const double tst_min = hours * 60.0 + eot_min + 4.0 * site.longitude - 60.0 * site.utc_offset;
    double hour_angle = tst_min / 4.0 - 180.0;
    // Wrap into [-180, 180) so midnight sits at the antisolar point.
    hour_angle = std::fmod(hour_angle + 540.0, 360.0) - 180.0;

    const double lat = site.latitude * kRad;
    double cos_zenith = std::sin(lat) * std::sin(decl) +
                        std::cos(lat) * std::cos(decl) * std::cos(hour_angle * kRad);
    cos_zenith = std::clamp(cos_zenith, -1.0, 1.0);

    return {std::acos(cos_zenith) * kDeg, decl * kDeg, hour_angle};
}

ClearSkyPoint clear_sky(const SiteLocation& site, Timestamp t, double turbidity) {
    if (!(turbidity >= 1.0 && turbidity <= 10.0))
        throw std::invalid_argument("clear_sky: turbidity out of [1, 10]");

    const SolarPosition pos = solar_position(site, t);
    ClearSkyPoint point;
    point.t = t;
    point.zenith_deg = pos.zenith_deg;
    if (pos.zenith_deg >= 90.0) return point; // sun at or below horizon

    const double cz = std::cos(pos.zenith_deg * kRad);
    const double am = air_mass(pos.zenith_deg);
    const double tf = turbidity_factor(turbidity, am);

    // Haurwitz global horizontal irradiance.
    point.ghi = 1098.0 * cz * std::exp(-0.059 / cz) * tf;

    // Meinel beam irradiance with eccentricity correction.
    const double ecc = 1.0 + 0.033 * std::cos(2.0 * kPi * day_of_year(t) / 365.0);
    point.dni = kSolarConstant * ecc * std::pow(0.7, std::pow(am, 0.678)) * tf;
    return point;
}

std::vector<ClearSkyPoint> clear_sky_series(const SiteLocation& site, Timestamp start,
                                            Timestamp end, double turbidity) {
    if (!(turbidity >= 1.0 && turbidity <= 10.0))
        throw std::invalid_argument("clear_sky: turbidity out of [1, 10]");
    if (end < start) return {};
    const auto steps = static_cast<std::size_t>((end - start) / kStepMinutes) + 1;
    std::vector<ClearSkyPoint> out(steps);
    kernels::map_index(steps, [&](std::size_t i) {
        out[i] = clear_sky(site, start + static_cast<std::int64_t>(i) * kStepMinutes, turbidity);
    });
    return out;
}

std::vector<ClearSkyPoint> clear_sky_series_serial(const SiteLocation& site, Timestamp start,
                                                   Timestamp end, double turbidity) {
    if (!(turbidity >= 1.0 && turbidity <= 10.0))
        throw std::invalid_argument("clear_sky: turbidity out of [1, 10]");
    if (end < start) return {};
    const auto steps = static_cast<std::size_t>((end - start) / kStepMinutes) + 1;
    std::vector<ClearSkyPoint> out(steps);
    kernels::map_index_serial(steps, [&](std::size_t i) {
        out[i] = clear_sky(site, start + static_cast<std::int64_t>(i) * kStepMinutes, turbidity);
    });
    return out;
}

} // namespace heliocast
