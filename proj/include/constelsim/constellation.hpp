#pragma once

// Random constellation snapshots: a spherical binomial point process for the
// LEO shell and a doubly stochastic one (random orbits, random anomalies) for
// the MEO shell.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "constelsim/geom.hpp"
#include "constelsim/rng.hpp"
#include "constelsim/units.hpp"
#include "constelsim/vec3.hpp"

namespace constelsim::constellation {

/// The typical ground target sits on the +x axis.
inline constexpr Vec3 kTargetDirection{1.0, 0.0, 0.0};

struct LeoShellConfig {
    std::size_t n_sats = 0;
    double radius_km = kEarthRadiusKm + 1000.0;
    double beam_angle = kPi / 4.0;  ///< full width of the satellite main lobe [rad]

    geom::SphereGeometry geometry(double earth_radius_km = kEarthRadiusKm) const {
        return {earth_radius_km, radius_km};
    }

    void validate(double earth_radius_km = kEarthRadiusKm) const {
        if (!(std::isfinite(radius_km) && radius_km > earth_radius_km))
            throw std::invalid_argument("LEO shell radius must exceed the earth radius");
        if (!(std::isfinite(beam_angle) && beam_angle > 0.0 && beam_angle < kTwoPi))
            throw std::invalid_argument("LEO beam angle must lie in (0, 2*pi)");
    }

    bool operator==(const LeoShellConfig&) const = default;
};

struct MeoShellConfig {
    std::size_t n_orbits = 0;
    std::size_t sats_per_orbit = 0;
    double radius_km = kEarthRadiusKm + 20000.0;
    double beam_angle = kPi / 6.0;

    std::size_t total() const { return n_orbits * sats_per_orbit; }

    geom::SphereGeometry geometry(double earth_radius_km = kEarthRadiusKm) const {
        return {earth_radius_km, radius_km};
    }

    void validate(double earth_radius_km = kEarthRadiusKm) const {
        if (!(std::isfinite(radius_km) && radius_km > earth_radius_km))
            throw std::invalid_argument("MEO shell radius must exceed the earth radius");
        if (!(std::isfinite(beam_angle) && beam_angle > 0.0 && beam_angle < kTwoPi))
            throw std::invalid_argument("MEO beam angle must lie in (0, 2*pi)");
    }

    bool operator==(const MeoShellConfig&) const = default;
};

/// Orbit plane orientation: inclination of the plane normal from the z axis
/// and azimuth of the plane about the z axis.
struct OrbitOrientation {
    double inclination = 0.0;
    double azimuth = 0.0;

    /// Unit normal of the orbit plane.
    Vec3 normal() const {
        const double si = std::sin(inclination);
        return {std::sin(azimuth) * si, -std::cos(azimuth) * si, std::cos(inclination)};
    }

    /// Rotates an in-plane point (orbit initially in the xy plane) about x by
    /// the inclination and then about z by the azimuth.
    Vec3 rotate(const Vec3& p) const {
        const double ci = std::cos(inclination), si = std::sin(inclination);
        const double ca = std::cos(azimuth), sa = std::sin(azimuth);
        const Vec3 r1{p.x, ci * p.y - si * p.z, si * p.y + ci * p.z};
        return {ca * r1.x - sa * r1.y, sa * r1.x + ca * r1.y, r1.z};
    }
};

struct SatellitePosition {
    Vec3 unit_direction;
    double radius_km = 0.0;

    Vec3 position_km() const { return unit_direction * radius_km; }
};

/// Central angle between a satellite and a target direction (both unit).
inline double central_angle_to_target(const SatellitePosition& p, const Vec3& target_direction) {
    double c = dot(p.unit_direction, target_direction);
    c = c > 1.0 ? 1.0 : (c < -1.0 ? -1.0 : c);
    return std::acos(c);
}

/// Uniform direction: polar angle acos(1 - 2u), azimuth 2 pi v.
inline Vec3 sample_uniform_direction(Rng& rng) {
    const double u = uniform01(rng);
    const double v = uniform01(rng);
    const double cos_polar = 1.0 - 2.0 * u;
    const double sin_polar = std::sqrt(std::max(0.0, 1.0 - cos_polar * cos_polar));
    const double az = kTwoPi * v;
    return {sin_polar * std::cos(az), sin_polar * std::sin(az), cos_polar};
}

/// Appends `config.n_sats` i.i.d. uniform points on the LEO shell to `out`
/// (cleared first). Lets hot loops reuse one buffer.
inline void sample_bpp_into(const LeoShellConfig& config, Rng& rng, std::vector<SatellitePosition>& out) {
    out.clear();
    out.reserve(config.n_sats);
    for (std::size_t i = 0; i < config.n_sats; ++i) out.push_back({sample_uniform_direction(rng), config.radius_km});
}

inline std::vector<SatellitePosition> sample_bpp(const LeoShellConfig& config, Rng& rng) {
    std::vector<SatellitePosition> out;
    sample_bpp_into(config, rng, out);
    return out;
}

/// Orbit-major output of sample_dsbpp: satellite j of orbit i is at index
/// i * sats_per_orbit + j.
struct DsbppSample {
    std::vector<OrbitOrientation> orbits;
    std::vector<SatellitePosition> satellites;
};

/// DSBPP generation. Draw order is fixed: all inclinations, then all
/// azimuths, then each orbit's anomalies in turn.
inline void sample_dsbpp_into(const MeoShellConfig& config, Rng& rng, DsbppSample& out) {
    const std::size_t n_orbits = config.n_orbits;
    const std::size_t per_orbit = config.sats_per_orbit;
    out.orbits.assign(n_orbits, {});
    out.satellites.clear();
    out.satellites.reserve(n_orbits * per_orbit);

    for (auto& o : out.orbits) o.inclination = std::acos(1.0 - 2.0 * uniform01(rng));
    for (auto& o : out.orbits) o.azimuth = kTwoPi * uniform01(rng);

    for (const auto& orbit : out.orbits) {
        for (std::size_t j = 0; j < per_orbit; ++j) {
            const double anomaly = kTwoPi * uniform01(rng);
            const Vec3 in_plane{std::cos(anomaly), std::sin(anomaly), 0.0};
            out.satellites.push_back({orbit.rotate(in_plane), config.radius_km});
        }
    }
}

inline DsbppSample sample_dsbpp(const MeoShellConfig& config, Rng& rng) {
    DsbppSample out;
    sample_dsbpp_into(config, rng, out);
    return out;
}

}  // namespace constelsim::constellation
