#pragma once

// Spherical geometry shared by the analytic engine and the simulator.
// Angles are radians and lengths are kilometres throughout.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "constelsim/units.hpp"

namespace constelsim::geom {

/// Earth sphere plus one concentric satellite shell.
struct SphereGeometry {
    double earth_radius_km = kEarthRadiusKm;
    double shell_radius_km = kEarthRadiusKm;

    static SphereGeometry at_altitude(double altitude_km, double earth_radius_km = kEarthRadiusKm) {
        return {earth_radius_km, earth_radius_km + altitude_km};
    }

    double altitude_km() const { return shell_radius_km - earth_radius_km; }

    /// Earth radius over shell radius.
    double radius_ratio() const { return earth_radius_km / shell_radius_km; }
};

namespace detail {

inline void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

inline void require_valid(const SphereGeometry& g) {
    require(std::isfinite(g.earth_radius_km) && g.earth_radius_km > 0.0, "earth radius must be positive and finite");
    require(std::isfinite(g.shell_radius_km), "shell radius must be finite");
    require(g.shell_radius_km >= g.earth_radius_km, "shell radius must not be below the earth radius");
}

inline void require_above_surface(const SphereGeometry& g) {
    require_valid(g);
    require(g.shell_radius_km > g.earth_radius_km, "shell radius must exceed the earth radius");
}

// acos/asin arguments that drift past +-1 by rounding.
inline double clamp_unit(double x) { return x > 1.0 ? 1.0 : (x < -1.0 ? -1.0 : x); }

}  // namespace detail

/// Largest central angle at which a shell satellite clears the horizon.
inline double horizon_central_angle(const SphereGeometry& g) {
    detail::require_valid(g);
    return std::acos(g.radius_ratio());
}

/// Largest central angle between a satellite and a ground target that is
/// both in line of sight and inside the satellite's main lobe of full width
/// `beam_angle`.
///
/// Once the beam is wide enough to cover the whole visible cap the horizon
/// limits visibility; otherwise the beam edge does. The two branches meet at
/// beam_angle = 2 asin(R_earth / R_shell).
inline double max_central_angle(const SphereGeometry& g, double beam_angle) {
    detail::require_valid(g);
    detail::require(std::isfinite(beam_angle) && beam_angle > 0.0 && beam_angle < kTwoPi,
                    "beam angle must lie in (0, 2*pi)");
    const double ratio = g.radius_ratio();
    if (beam_angle >= 2.0 * std::asin(ratio)) return std::acos(ratio);
    const double half = 0.5 * beam_angle;
    const double s = detail::clamp_unit(std::sin(half) / ratio);
    return std::max(0.0, std::asin(s) - half);
}

/// Slant range [km] between a ground target and a shell point separated by
/// `central_angle` (law of cosines).
inline double slant_range(const SphereGeometry& g, double central_angle) {
    const double re = g.earth_radius_km;
    const double rq = g.shell_radius_km;
    // Written as (rq - re)^2 + 2 rq re (1 - cos) so small angles stay accurate.
    const double s = std::sin(0.5 * central_angle);
    return std::sqrt((rq - re) * (rq - re) + 4.0 * rq * re * s * s);
}

/// Maximum detectable distance [km] for a maximum central angle.
inline double max_detect_distance(const SphereGeometry& g, double max_central) {
    detail::require_valid(g);
    detail::require(std::isfinite(max_central) && max_central >= 0.0 && max_central <= kPi,
                    "central angle must lie in [0, pi]");
    return slant_range(g, max_central);
}

/// Cosine of the central angle at which the slant range equals `distance_km`.
inline double central_cosine_at_distance(const SphereGeometry& g, double distance_km) {
    const double re = g.earth_radius_km;
    const double rq = g.shell_radius_km;
    return (re * re + rq * rq - distance_km * distance_km) / (2.0 * re * rq);
}

/// Central-angle extent of the arc of an orbit (inclination `inclination`
/// between the target direction and the orbit normal) lying within
/// `max_distance_km` of the target.
///
/// Zero when the orbit never comes that close, i.e. when
/// |inclination - pi/2| exceeds acos(c) with
/// c = (R_earth^2 + R_shell^2 - d^2) / (2 R_earth R_shell).
inline double max_orbit_central_angle(const SphereGeometry& g, double inclination, double max_distance_km) {
    detail::require_valid(g);
    detail::require(std::isfinite(inclination) && inclination >= 0.0 && inclination <= kPi,
                    "inclination must lie in [0, pi]");
    detail::require(std::isfinite(max_distance_km) && max_distance_km > 0.0, "maximum distance must be positive");

    const double c = central_cosine_at_distance(g, max_distance_km);
    if (c >= 1.0) return 0.0;  // closer than the shell ever gets
    if (c < -1.0) throw std::domain_error("maximum distance exceeds the far side of the shell");

    const double critical = std::acos(c);
    if (std::abs(inclination - 0.5 * kPi) > critical) return 0.0;

    const double arg = c / std::sin(inclination);
    constexpr double kSlack = 1e-12;
    if (std::abs(arg) > 1.0 + kSlack) {
        throw std::domain_error("inconsistent orbit geometry: cosine argument " + std::to_string(arg));
    }
    return 2.0 * std::acos(detail::clamp_unit(arg));
}

/// Dome angle at the target between the zenith (where a reference satellite
/// sits) and a second shell satellite at central angle `central` from it.
///
/// Equivalent to acot(cot t - (R_earth/R_shell) sqrt(1 + cot^2 t)); the
/// atan2 form avoids the cancellation of that expression for small t.
inline double dome_from_central(const SphereGeometry& g, double central) {
    detail::require_above_surface(g);
    detail::require(std::isfinite(central) && central > 0.0, "central angle must be positive (limit at 0 is 0)");
    detail::require(central <= horizon_central_angle(g) * (1.0 + 1e-12), "central angle beyond the horizon");
    return std::atan2(std::sin(central), std::cos(central) - g.radius_ratio());
}

/// Inverse of dome_from_central: the central angle subtended by a dome angle
/// `dome` measured from the zenith at the target.
inline double central_from_dome(const SphereGeometry& g, double dome) {
    detail::require_above_surface(g);
    detail::require(std::isfinite(dome) && dome > 0.0 && dome < 0.5 * kPi, "dome angle must lie in (0, pi/2)");
    const double r = g.radius_ratio();
    const double rq2 = g.shell_radius_km * g.shell_radius_km;
    const double re2 = g.earth_radius_km * g.earth_radius_km;
    const double cot_dome = 1.0 / std::tan(dome);
    const double root = std::sqrt(r * r * (1.0 + cot_dome * cot_dome - r * r));
    const double cot_central = rq2 / (rq2 - re2) * (cot_dome + root);
    return std::atan2(1.0, cot_central);  // acot onto (0, pi)
}

}  // namespace constelsim::geom
