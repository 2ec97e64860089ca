#pragma once

// Closed-form availability and localizability probabilities for LEO, MEO and
// hybrid constellations, plus the contact-angle laws and the interference
// mixture they are built from.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "constelsim/antenna.hpp"
#include "constelsim/constellation.hpp"
#include "constelsim/fading.hpp"
#include "constelsim/geom.hpp"
#include "constelsim/link.hpp"
#include "constelsim/quadrature.hpp"
#include "constelsim/units.hpp"

namespace constelsim::analytic {

struct SystemConfig {
    constellation::LeoShellConfig leo_shell;
    channel::LinkParams leo_link;
    channel::SrFadingParams leo_fading;

    constellation::MeoShellConfig meo_shell;
    channel::LinkParams meo_link;
    channel::SrFadingParams meo_fading;

    channel::AntennaPattern rx_pattern = channel::GaussianPattern{};
    double epsilon = 0.01;
    double earth_radius_km = kEarthRadiusKm;
    quad::QuadratureSpec quadrature;

    static SystemConfig reference_defaults() {
        SystemConfig c;
        c.leo_shell = {2000, kEarthRadiusKm + 1000.0, kPi / 4.0};
        c.leo_link = {dbw_to_watts(15.0), db_to_linear(33.8), db_to_linear(31.8), 0.015,
                      db_to_linear(-6.0), dbm_to_watts(-90.2), db_to_linear(10.0)};
        c.meo_shell = {2, 6, kEarthRadiusKm + 20000.0, kPi / 6.0};
        c.meo_link = {dbw_to_watts(18.0), db_to_linear(24.1), db_to_linear(5.0), 0.19,
                      db_to_linear(-6.0), dbm_to_watts(-103.9), db_to_linear(-16.0)};
        c.leo_fading = {19.4, 0.158, 1.29};
        c.meo_fading = c.leo_fading;
        c.rx_pattern = channel::GaussianPattern{deg_to_rad(8.0)};
        return c;
    }

    void validate() const {
        leo_shell.validate(earth_radius_km);
        meo_shell.validate(earth_radius_km);
        leo_link.validate();
        meo_link.validate();
        leo_fading.validate();
        meo_fading.validate();
        channel::validate(rx_pattern);
        quadrature.validate();
        if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
    }

    geom::SphereGeometry leo_geometry() const { return leo_shell.geometry(earth_radius_km); }
    geom::SphereGeometry meo_geometry() const { return meo_shell.geometry(earth_radius_km); }
    std::size_t n_meo() const { return meo_shell.total(); }
};

inline double leo_max_central(const SystemConfig& c) {
    return geom::max_central_angle(c.leo_geometry(), c.leo_shell.beam_angle);
}
inline double meo_max_central(const SystemConfig& c) {
    return geom::max_central_angle(c.meo_geometry(), c.meo_shell.beam_angle);
}

/// Cap-area fraction of the sphere within central angle theta of a point.
inline double cap_fraction(double theta) {
    const double s = std::sin(0.5 * theta);
    return s * s;  // (1 - cos theta) / 2 without cancellation
}

// ---------------------------------------------------------------- binomial

inline double log_choose(std::size_t n, std::size_t k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

inline double binomial_pmf(std::size_t n, std::size_t k, double p) {
    if (k > n) return 0.0;
    if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
    if (p >= 1.0) return k == n ? 1.0 : 0.0;
    return std::exp(log_choose(n, k) + k * std::log(p) + (n - k) * std::log1p(-p));
}

/// P(X >= k) for X ~ Binomial(n, p), summed over the upper terms directly.
inline double binomial_tail(std::size_t n, std::size_t k, double p) {
    if (k == 0) return 1.0;
    if (k > n) return 0.0;
    double sum = 0.0;
    for (std::size_t j = k; j <= n; ++j) sum += binomial_pmf(n, j, p);
    return std::min(1.0, sum);
}

// ---------------------------------------------------------------- availability

inline double leo_single_availability(const SystemConfig& c) { return cap_fraction(leo_max_central(c)); }

inline double leo_availability(const SystemConfig& c, std::size_t k) {
    return binomial_tail(c.leo_shell.n_sats, k, leo_single_availability(c));
}

/// Probability that one satellite placed uniformly on a uniformly oriented
/// orbit of shell `g` lies within `max_distance_km` of the target.
inline double meo_single_availability(const geom::SphereGeometry& g, double max_distance_km,
                                      const quad::QuadratureSpec& spec = {}) {
    if (!(max_distance_km > 0.0)) return 0.0;
    const double c = geom::central_cosine_at_distance(g, max_distance_km);
    if (c >= 1.0) return 0.0;
    const double critical = std::acos(std::max(-1.0, c));
    const double lo = std::max(0.0, 0.5 * kPi - critical);
    auto integrand = [&](double incl) {
        return geom::max_orbit_central_angle(g, incl, max_distance_km) * std::sin(incl) / (4.0 * kPi);
    };
    // The integrand is even about pi/2.
    return 2.0 * quad::integrate(integrand, lo, 0.5 * kPi, spec, "single MEO availability");
}

inline double meo_single_availability(const SystemConfig& c) {
    const auto g = c.meo_geometry();
    return meo_single_availability(g, geom::max_detect_distance(g, meo_max_central(c)), c.quadrature);
}

inline double meo_availability(const SystemConfig& c, std::size_t k) {
    return binomial_tail(c.n_meo(), k, meo_single_availability(c));
}

/// Smallest K with P(more than K MEO satellites available) <= epsilon.
inline std::size_t n_meo_max(std::size_t n, double p_single, double epsilon) {
    for (std::size_t k = 0; k < n; ++k) {
        if (binomial_tail(n, k + 1, p_single) <= epsilon) return k;
    }
    return n;
}

inline std::size_t n_meo_max(const SystemConfig& c) {
    return n_meo_max(c.n_meo(), meo_single_availability(c), c.epsilon);
}

namespace detail {

// Shared convolution of the hybrid availability and localizability results.
// leo_tail(j) is the LEO-only probability for level j (leo_tail(0) = 1).
template <class LeoTail>
double hybrid_convolution(std::size_t k, std::size_t n_meo, double p_meo, std::size_t n_max, LeoTail&& leo_tail) {
    if (k == 0) return 1.0;
    double sum = 0.0;
    // Upper limit min(K-1, N_max) so that an empty MEO layer (N_max = 0)
    // still keeps the k = 0 term.
    for (std::size_t j = 0; j <= std::min(k - 1, n_max); ++j) sum += leo_tail(k - j) * binomial_pmf(n_meo, j, p_meo);
    for (std::size_t j = k; j <= n_max; ++j) sum += binomial_pmf(n_meo, j, p_meo);
    return std::clamp(sum, 0.0, 1.0);
}

}  // namespace detail

inline double hybrid_availability(const SystemConfig& c, std::size_t k) {
    const double p_meo = meo_single_availability(c);
    const std::size_t n_max = n_meo_max(c.n_meo(), p_meo, c.epsilon);
    const double p_leo = leo_single_availability(c);
    return detail::hybrid_convolution(k, c.n_meo(), p_meo, n_max,
                                      [&](std::size_t j) { return binomial_tail(c.leo_shell.n_sats, j, p_leo); });
}

// ---------------------------------------------------------------- contact angles

/// CDF of the k-th smallest LEO central angle: P(at least k satellites within theta).
inline double leo_contact_cdf(const SystemConfig& c, std::size_t k, double theta) {
    if (!(theta >= 0.0 && theta <= kPi)) throw std::invalid_argument("contact angle must lie in [0, pi]");
    return binomial_tail(c.leo_shell.n_sats, k, cap_fraction(theta));
}

namespace detail {

// N C(N-1, k-1) q^(k-1) (1-q)^(N-k) sin(theta) / 2: the density of the k-th
// order statistic of N i.i.d. central angles.
inline double order_statistic_density(std::size_t n, std::size_t k, double theta) {
    if (k < 1 || k > n) return 0.0;
    const double q = cap_fraction(theta);
    const double half_sin = 0.5 * std::sin(theta);
    if (q <= 0.0) return k == 1 ? n * half_sin : 0.0;
    if (q >= 1.0) return k == n ? n * half_sin : 0.0;
    return n * half_sin * std::exp(log_choose(n - 1, k - 1) + (k - 1.0) * std::log(q) + (n - k) * std::log1p(-q));
}

inline void require_contact_range(double theta, double theta_max) {
    if (!(theta >= 0.0 && theta <= theta_max * (1.0 + 1e-12)))
        throw std::invalid_argument("contact angle outside [0, theta_max]");
}

}  // namespace detail

/// Density of the k-th LEO contact angle on [0, theta_L^max].
inline double leo_contact_angle_pdf(const SystemConfig& c, std::size_t k, double theta) {
    if (k < 1) throw std::invalid_argument("contact rank starts at 1");
    detail::require_contact_range(theta, leo_max_central(c));
    return detail::order_statistic_density(c.leo_shell.n_sats, k, theta);
}

/// Density of a single MEO satellite's central angle on [0, theta_M^max].
inline double meo_contact_angle_pdf(const SystemConfig& c, double theta) {
    detail::require_contact_range(theta, meo_max_central(c));
    return 0.5 * std::sin(theta);
}

// ---------------------------------------------------------------- interference

/// Slant range [m] at central angle theta on a shell.
inline double slant_range_m(const geom::SphereGeometry& g, double theta) { return km_to_m(geom::slant_range(g, theta)); }

/// Probability that the fading margin is met: 1 - F_W(gamma (I + sigma^2) l^2 / (A G_m)).
inline double coverage_success(const channel::LinkParams& link, const channel::SrFadingParams& fading,
                               double range_m, double interference_w) {
    const double needed = link.sinr_threshold * (interference_w + link.noise_power_w) * range_m * range_m /
                          (link.power_at_unit_range() * link.max_rx_gain);
    return 1.0 - channel::sr_cdf(fading, needed);
}

namespace detail {

// Fading level beyond which the density tail is negligible.
inline double fading_upper(const channel::SrFadingParams& p) {
    double w = p.mean();
    while (sr_pdf(p, w) * w > 1e-17) w *= 1.5;
    return w;
}

// Central angles (from the serving satellite) of receive-pattern nulls strictly
// inside (0, theta_d). Used as quadrature breakpoints.
inline std::vector<double> null_breakpoints(const geom::SphereGeometry& g, const channel::AntennaPattern& pattern,
                                            double theta_d) {
    std::vector<double> out;
    if (const auto* s = std::get_if<channel::SincPattern>(&pattern)) {
        for (unsigned j = 1;; ++j) {
            const double dome = static_cast<double>(j) / s->n_elements;
            if (dome >= 0.5 * kPi) break;
            const double central = geom::central_from_dome(g, dome);
            if (central >= theta_d) break;
            out.push_back(central);
        }
    }
    return out;
}

}  // namespace detail

/// Interference at the target when one beam is aligned to a LEO satellite at
/// central angle theta: an atom at zero (no other satellite near the serving
/// one) plus a continuous part from the single nearest interferer, whose
/// central angle from the serving satellite is uniform over the cap of
/// angle theta_d^max. Path loss uses the serving range.
class InterferenceMixture {
public:
    InterferenceMixture(const SystemConfig& c, double serving_angle)
        : geometry_(c.leo_geometry()),
          pattern_(c.rx_pattern),
          fading_(c.leo_fading),
          max_gain_(c.leo_link.max_rx_gain),
          serving_angle_(serving_angle),
          spec_(c.quadrature) {
        detail::require_contact_range(serving_angle, leo_max_central(c));
        theta_d_ = geom::central_from_dome(geometry_, channel::effective_beam_range(pattern_));
        p_zero_ = std::pow(1.0 - cap_fraction(theta_d_), static_cast<double>(c.leo_shell.n_sats));
        const double range = slant_range_m(geometry_, serving_angle);
        path_gain_ = c.leo_link.power_at_unit_range() / (range * range);
        cap_norm_ = 1.0 - std::cos(theta_d_);
        breaks_ = detail::null_breakpoints(geometry_, pattern_, theta_d_);
        breaks_.insert(breaks_.begin(), 0.0);
        breaks_.push_back(theta_d_);
        w_hi_ = detail::fading_upper(fading_);
    }

    double p_zero() const { return p_zero_; }
    double serving_angle() const { return serving_angle_; }
    double theta_d() const { return theta_d_; }
    /// A / l^2 at the serving range [1/m^2 scaled power]: I = path_gain * G^r * W.
    double path_gain() const { return path_gain_; }
    /// Interference power above which the continuous part has negligible mass.
    double support_upper() const { return path_gain_ * max_gain_ * w_hi_; }

    /// Receive gain toward an interferer at central angle t from the serving one.
    double gain_at(double t) const {
        const double dome = t > 0.0 ? geom::dome_from_central(geometry_, t) : 0.0;
        return channel::rx_gain(pattern_, max_gain_, dome);
    }

    /// Density of the continuous part at I > 0.
    double conditional_density(double interference) const {
        if (!(interference > 0.0)) return 0.0;
        return over_cap([&](double gain) {
            const double scale = path_gain_ * gain;
            return channel::sr_pdf(fading_, interference / scale) / scale;
        }, spec_.tightened(100.0), "interference density");
    }

    /// CDF of the continuous part.
    double conditional_cdf(double interference) const {
        if (!(interference > 0.0)) return 0.0;
        return over_cap([&](double gain) { return channel::sr_cdf(fading_, interference / (path_gain_ * gain)); },
                        spec_.tightened(100.0), "interference cdf");
    }

    /// Integral of the conditional density over (0, upper], by quadrature of
    /// the density itself.
    double conditional_mass(double upper) const {
        return expect_continuous([](double) { return 1.0; }, upper);
    }

    /// E[h(I)] over the full mixture.
    template <class H>
    double expectation(H&& h) const {
        return p_zero_ * h(0.0) + (1.0 - p_zero_) * expect_continuous(h, support_upper());
    }

    /// E[h(I)] over the continuous part alone, truncated at `upper`.
    ///
    /// Integrates density * h in log(I); the mass below the lower cut is taken
    /// from the CDF and weighted by h at the cut.
    template <class H>
    double expect_continuous(H&& h, double upper) const {
        const double lower = upper * 1e-14;
        const double low_mass = conditional_cdf(lower);
        auto integrand = [&](double u) {
            const double i = std::exp(u);
            return conditional_density(i) * h(i) * i;
        };
        const double body =
            quad::integrate(integrand, std::log(lower), std::log(upper), spec_.tightened(10.0), "interference expectation");
        return low_mass * h(lower) + body;
    }

private:
    // Averages f(gain(t)) over t with density sin t / (1 - cos theta_d) on
    // [0, theta_d]. Zero-gain directions contribute nothing.
    template <class F>
    double over_cap(F&& f, const quad::QuadratureSpec& spec, const char* what) const {
        auto integrand = [&](double t) {
            const double gain = gain_at(t);
            if (!(gain > 0.0)) return 0.0;
            return f(gain) * std::sin(t) / cap_norm_;
        };
        double sum = 0.0;
        for (std::size_t i = 0; i + 1 < breaks_.size(); ++i) sum += quad::integrate(integrand, breaks_[i], breaks_[i + 1], spec, what);
        return sum;
    }

    geom::SphereGeometry geometry_;
    channel::AntennaPattern pattern_;
    channel::SrFadingParams fading_;
    double max_gain_;
    double serving_angle_;
    quad::QuadratureSpec spec_;
    double theta_d_ = 0.0;
    double p_zero_ = 1.0;
    double path_gain_ = 0.0;
    double cap_norm_ = 1.0;
    double w_hi_ = 0.0;
    std::vector<double> breaks_;
};

inline InterferenceMixture interference_mixture(const SystemConfig& c, double serving_angle) {
    return {c, serving_angle};
}

// ---------------------------------------------------------------- localizability

/// Coverage probability of a beam aligned to a LEO satellite at central
/// angle theta, averaged over the interference mixture.
inline double leo_conditional_coverage(const SystemConfig& c, double theta) {
    const InterferenceMixture mix(c, theta);
    const double range = slant_range_m(c.leo_geometry(), theta);
    return mix.expectation([&](double i) { return coverage_success(c.leo_link, c.leo_fading, range, i); });
}

/// p_L^C(k) for k = 1..max_rank: the probability that the k-th nearest LEO
/// satellite is available and its beam meets the SINR threshold.
inline std::vector<double> leo_rank_localizability(const SystemConfig& c, std::size_t max_rank) {
    if (max_rank == 0) return {};
    const std::size_t n = c.leo_shell.n_sats;
    const double theta_max = leo_max_central(c);
    auto integrand = [&](double theta) {
        std::vector<double> out(max_rank, 0.0);
        bool any = false;
        for (std::size_t k = 1; k <= max_rank; ++k) {
            out[k - 1] = detail::order_statistic_density(n, k, theta);
            any = any || out[k - 1] > 0.0;
        }
        if (!any) return out;
        const double cov = leo_conditional_coverage(c, theta);
        for (double& v : out) v *= cov;
        return out;
    };
    auto result = quad::integrate_adaptive(integrand, 0.0, theta_max, c.quadrature, "LEO rank localizability");
    for (double& v : result.value) v = std::clamp(v, 0.0, 1.0);
    return result.value;
}

inline double product_of_ranks(const std::vector<double>& per_rank, std::size_t k) {
    if (k > per_rank.size()) throw std::invalid_argument("not enough ranks computed");
    double p = 1.0;
    for (std::size_t i = 0; i < k; ++i) p *= per_rank[i];
    return p;
}

inline double leo_localizability(const SystemConfig& c, std::size_t k) {
    if (k == 0) return 1.0;
    return product_of_ranks(leo_rank_localizability(c, k), k);
}

/// p_{M,1}^C: one MEO satellite is available and its noise-limited beam
/// meets the threshold.
inline double meo_single_localizability(const SystemConfig& c) {
    const auto g = c.meo_geometry();
    auto integrand = [&](double theta) {
        return 0.5 * std::sin(theta) * coverage_success(c.meo_link, c.meo_fading, slant_range_m(g, theta), 0.0);
    };
    return quad::integrate(integrand, 0.0, meo_max_central(c), c.quadrature, "single MEO localizability");
}

inline double meo_localizability(const SystemConfig& c, std::size_t k) {
    return binomial_tail(c.n_meo(), k, meo_single_localizability(c));
}

/// Everything the localizability results need, computed once for levels up
/// to max_k.
struct LocalizabilityTerms {
    std::vector<double> leo_per_rank;
    double meo_single = 0.0;
    double meo_single_available = 0.0;
    std::size_t n_meo = 0;
    std::size_t n_meo_max = 0;
};

inline LocalizabilityTerms localizability_terms(const SystemConfig& c, std::size_t max_k) {
    LocalizabilityTerms t;
    t.leo_per_rank = leo_rank_localizability(c, max_k);
    t.meo_single = meo_single_localizability(c);
    t.meo_single_available = meo_single_availability(c);
    t.n_meo = c.n_meo();
    t.n_meo_max = n_meo_max(t.n_meo, t.meo_single_available, c.epsilon);
    return t;
}

inline double leo_localizability(const LocalizabilityTerms& t, std::size_t k) { return product_of_ranks(t.leo_per_rank, k); }

inline double meo_localizability(const LocalizabilityTerms& t, std::size_t k) {
    return binomial_tail(t.n_meo, k, t.meo_single);
}

inline double hybrid_localizability(const LocalizabilityTerms& t, std::size_t k) {
    return detail::hybrid_convolution(k, t.n_meo, t.meo_single, t.n_meo_max,
                                      [&](std::size_t j) { return product_of_ranks(t.leo_per_rank, j); });
}

inline double hybrid_localizability(const SystemConfig& c, std::size_t k) {
    if (k == 0) return 1.0;
    return hybrid_localizability(localizability_terms(c, k), k);
}

}  // namespace constelsim::analytic
