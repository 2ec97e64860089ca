#pragma once

#include <cmath>
#include <numbers>

namespace constelsim {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Mean Earth radius [km].
inline constexpr double kEarthRadiusKm = 6371.0;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

inline double dbw_to_watts(double dbw) { return db_to_linear(dbw); }
inline double dbm_to_watts(double dbm) { return db_to_linear(dbm - 30.0); }
inline double watts_to_dbm(double watts) { return linear_to_db(watts) + 30.0; }

inline constexpr double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
inline constexpr double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

inline constexpr double km_to_m(double km) { return km * 1000.0; }

}  // namespace constelsim
