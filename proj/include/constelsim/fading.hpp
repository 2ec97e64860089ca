#pragma once

// Shadowed-Rician small-scale power fading.
//
// The power W = |a + n|^2 with a Nakagami-m line-of-sight amplitude
// (E[a^2] = omega) and complex Gaussian scatter of per-component variance b0.
// Its law is a negative-binomial mixture of Gamma(z + 1, 2 b0) laws:
//
//   F_W(w) = sum_z  beta^m (m)_z / z! (1 - beta)^z  P(z + 1, w / (2 b0)),
//   beta   = 2 b0 m / (2 b0 m + omega),
//
// with P the regularized lower incomplete gamma function.

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "constelsim/rng.hpp"

namespace constelsim::channel {

struct SrFadingParams {
    double m = 19.4;      ///< Nakagami parameter of the LoS amplitude
    double b0 = 0.158;    ///< half the average scatter power
    double omega = 1.29;  ///< average LoS power

    void validate() const {
        if (!(std::isfinite(m) && m > 0.0)) throw std::invalid_argument("fading m must be positive");
        if (!(std::isfinite(b0) && b0 > 0.0)) throw std::invalid_argument("fading b0 must be positive");
        if (!(std::isfinite(omega) && omega >= 0.0)) throw std::invalid_argument("fading omega must be non-negative");
    }

    double mean() const { return omega + 2.0 * b0; }

    bool operator==(const SrFadingParams&) const = default;
};

class SeriesConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kSeriesTolerance = 1e-12;
inline constexpr int kMaxSeriesTerms = 10000;

namespace detail {

// Walks the mixture weights w_z = beta^m (m)_z / z! (1 - beta)^z and calls
// visit(z, w_z) until the ratio test bounds the remaining weight below tol.
// The (m)_z / z! factor comes from the term ratio (m + z) / (z + 1), which
// needs no special casing for non-integer m.
template <class Visit>
void for_each_mixture_weight(const SrFadingParams& p, double tol, Visit&& visit) {
    const double denom = 2.0 * p.b0 * p.m + p.omega;
    const double q = p.omega / denom;  // 1 - beta
    double weight = std::exp(p.m * std::log1p(-q));
    for (int z = 0; z < kMaxSeriesTerms; ++z) {
        if (!visit(z, weight)) return;
        const double ratio = q * (p.m + z) / (z + 1.0);
        const double next = weight * ratio;
        // Ratios decrease toward q when m > 1 and increase toward q otherwise.
        const double bound_ratio = std::max(q, q * (p.m + z + 1.0) / (z + 2.0));
        if (bound_ratio < 1.0 && next / (1.0 - bound_ratio) < tol) return;
        weight = next;
        if (q == 0.0) return;
    }
    throw SeriesConvergenceError("shadowed-Rician series did not converge within " + std::to_string(kMaxSeriesTerms) +
                                 " terms");
}

}  // namespace detail

/// CDF of the shadowed-Rician power.
inline double sr_cdf(const SrFadingParams& p, double w, double tol = kSeriesTolerance) {
    if (!(w > 0.0)) {
        if (w == 0.0) return 0.0;
        throw std::invalid_argument("fading power must be non-negative");
    }
    if (std::isinf(w)) return 1.0;
    const double x = w / (2.0 * p.b0);
    const double ex = std::exp(-x);
    double lower_p = -std::expm1(-x);  // P(1, x)
    double poisson = ex;               // x^z e^-x / z!
    double sum = 0.0;
    detail::for_each_mixture_weight(p, tol, [&](int z, double weight) {
        sum += weight * lower_p;
        poisson *= x / (z + 1.0);
        lower_p = std::max(0.0, lower_p - poisson);  // P(z + 2, x)
        return true;
    });
    return std::min(1.0, std::max(0.0, sum));
}

/// Density of the shadowed-Rician power: the exact derivative of sr_cdf,
///   f_W(w) = sum_z w_z (w / 2b0)^z e^{-w / 2b0} / (z! 2 b0).
inline double sr_pdf(const SrFadingParams& p, double w, double tol = kSeriesTolerance) {
    if (w < 0.0 || std::isnan(w)) throw std::invalid_argument("fading power must be non-negative");
    if (std::isinf(w)) return 0.0;
    const double scale = 2.0 * p.b0;
    const double x = w / scale;
    double poisson = std::exp(-x);
    double sum = 0.0;
    // Gamma densities are bounded by 1 / (2 b0), so scaling tol keeps the same
    // absolute truncation guarantee as the CDF.
    detail::for_each_mixture_weight(p, tol * scale, [&](int z, double weight) {
        sum += weight * poisson;
        poisson *= x / (z + 1.0);
        return true;
    });
    return sum / scale;
}

/// Draws W = |a + n|^2 with a^2 ~ Gamma(m, omega / m) and n circular complex
/// Gaussian of per-component variance b0.
inline double sr_sample(const SrFadingParams& p, Rng& rng) {
    double los = 0.0;
    if (p.omega > 0.0) {
        std::gamma_distribution<double> los_power(p.m, p.omega / p.m);
        los = std::sqrt(los_power(rng));
    }
    std::normal_distribution<double> scatter(0.0, std::sqrt(p.b0));
    const double re = los + scatter(rng);
    const double im = scatter(rng);
    return re * re + im * im;
}

}  // namespace constelsim::channel
