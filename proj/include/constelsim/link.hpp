#pragma once

#include <cmath>
#include <stdexcept>

#include "constelsim/units.hpp"

namespace constelsim::channel {

/// Per-layer radio budget. Everything linear; powers in watts.
struct LinkParams {
    double tx_power_w = 0.0;
    double tx_gain = 0.0;
    double max_rx_gain = 0.0;
    double wavelength_m = 0.0;
    double system_loss = 0.0;
    double noise_power_w = 0.0;
    double sinr_threshold = 0.0;

    void validate() const {
        for (double v : {tx_power_w, tx_gain, max_rx_gain, wavelength_m, system_loss, noise_power_w, sinr_threshold}) {
            if (!(std::isfinite(v) && v > 0.0)) throw std::invalid_argument("link parameters must be positive and finite");
        }
    }

    /// rho_t * G_t * zeta * (lambda / 4 pi)^2, i.e. received power at 1 m with
    /// unit receive gain and unit fading [W m^2].
    double power_at_unit_range() const {
        const double k = wavelength_m / (4.0 * kPi);
        return tx_power_w * tx_gain * system_loss * k * k;
    }

    bool operator==(const LinkParams&) const = default;
};

/// Received power [W] from a satellite at `distance_m` through receive gain
/// `rx_gain_value` under fading power `fading`. The detectability cutoff
/// (zero power beyond the maximum detectable distance) is the caller's job.
inline double received_power(const LinkParams& link, double rx_gain_value, double distance_m, double fading) {
    if (!(distance_m > 0.0)) throw std::invalid_argument("distance must be positive");
    return link.power_at_unit_range() * rx_gain_value * fading / (distance_m * distance_m);
}

}  // namespace constelsim::channel
