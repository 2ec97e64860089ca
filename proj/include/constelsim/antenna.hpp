#pragma once

// Circularly symmetric receive patterns of the ground target's beams.

#include <cmath>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>

#include "constelsim/units.hpp"

namespace constelsim::channel {

struct GaussianPattern {
    double half_power_beamwidth = deg_to_rad(8.0);  ///< [rad]
    bool operator==(const GaussianPattern&) const = default;
};

struct FlatTopPattern {
    double half_power_beamwidth = deg_to_rad(8.0);  ///< [rad]
    bool operator==(const FlatTopPattern&) const = default;
};

struct SincPattern {
    unsigned n_elements = 35;
    bool operator==(const SincPattern&) const = default;
};

struct CosinePattern {
    unsigned n_elements = 35;
    bool operator==(const CosinePattern&) const = default;
};

using AntennaPattern = std::variant<GaussianPattern, FlatTopPattern, SincPattern, CosinePattern>;

inline void validate(const AntennaPattern& pattern) {
    std::visit(
        [](const auto& p) {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, GaussianPattern> || std::is_same_v<P, FlatTopPattern>) {
                if (!(std::isfinite(p.half_power_beamwidth) && p.half_power_beamwidth > 0.0))
                    throw std::invalid_argument("half-power beamwidth must be positive");
            } else {
                if (p.n_elements < 1) throw std::invalid_argument("antenna needs at least one element");
            }
        },
        pattern);
}

inline std::string pattern_name(const AntennaPattern& pattern) {
    constexpr const char* names[] = {"gaussian", "flattop", "sinc", "cosine"};
    return names[pattern.index()];
}

/// Receive gain (linear) at angle `angle` off boresight. Even in the angle.
inline double rx_gain(const AntennaPattern& pattern, double max_gain, double angle) {
    const double phi = std::abs(angle);
    return std::visit(
        [&](const auto& p) -> double {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, GaussianPattern>) {
                const double u = phi / p.half_power_beamwidth;
                return max_gain * std::exp2(-u * u);
            } else if constexpr (std::is_same_v<P, FlatTopPattern>) {
                return phi <= p.half_power_beamwidth ? max_gain : 0.0;
            } else if constexpr (std::is_same_v<P, SincPattern>) {
                const double x = kPi * p.n_elements * phi;
                if (x == 0.0) return max_gain;
                const double s = std::sin(x) / x;
                return max_gain * s * s;
            } else {
                if (phi > 1.0 / p.n_elements) return 0.0;
                const double c = std::cos(0.5 * kPi * p.n_elements * phi);
                return max_gain * c * c;
            }
        },
        pattern);
}

/// Dome angle beyond which interference through the receive pattern is
/// treated as negligible.
inline double effective_beam_range(const AntennaPattern& pattern) {
    return std::visit(
        [](const auto& p) -> double {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, GaussianPattern>) return 3.0 * p.half_power_beamwidth;
            else if constexpr (std::is_same_v<P, FlatTopPattern>) return p.half_power_beamwidth;
            else if constexpr (std::is_same_v<P, SincPattern>) return 3.0 / p.n_elements;
            else return 1.0 / p.n_elements;
        },
        pattern);
}

}  // namespace constelsim::channel
