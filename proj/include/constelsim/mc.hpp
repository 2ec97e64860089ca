#pragma once

// Monte Carlo simulation of the full system model: exact distances, SR
// fading draws per link, receive gain at exact dome angles, all visible
// same-layer interferers, and MEO-first beam association.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "constelsim/analytic.hpp"
#include "constelsim/antenna.hpp"
#include "constelsim/constellation.hpp"
#include "constelsim/fading.hpp"
#include "constelsim/geom.hpp"
#include "constelsim/parallel.hpp"
#include "constelsim/rng.hpp"
#include "constelsim/units.hpp"
#include "constelsim/vec3.hpp"

namespace constelsim::mc {

struct McSpec {
    std::size_t n_trials = 100000;
    std::uint64_t master_seed = 1;
    std::size_t max_k = 6;
    /// false: each LEO beam sees only the satellite nearest to its serving
    /// one, and only if it lies within theta_d^max of it.
    bool sum_all_interferers = true;
    unsigned threads = 0;
    /// Contiguous trial blocks used for the reduction and the jackknife.
    std::size_t n_blocks = 50;

    void validate() const {
        if (n_trials < 1) throw std::invalid_argument("n_trials must be at least 1");
        if (max_k < 1) throw std::invalid_argument("max_k must be at least 1");
        if (n_blocks < 1) throw std::invalid_argument("n_blocks must be at least 1");
    }
};

enum class Layer { leo, meo };

struct BeamOutcome {
    Layer layer = Layer::leo;
    std::size_t sat_index = 0;  ///< index in the sampled layer
    double central_angle = 0.0;
    double sinr = 0.0;
    bool pass = false;
};

struct TrialResult {
    std::uint64_t trial_index = 0;
    std::size_t n_leo_available = 0;
    std::size_t n_meo_available = 0;
    /// Hybrid association: available MEO nearest first, then LEO nearest
    /// first, at most max_k beams.
    std::vector<BeamOutcome> beams;
    /// Pass flag of hybrid beam k (false when fewer than k satellites).
    std::vector<bool> per_rank_sinr_pass;
    /// Same for LEO-only and MEO-only association.
    std::vector<bool> leo_rank_pass;
    std::vector<bool> meo_rank_pass;
    /// Available MEO satellites whose beam would meet the threshold.
    std::size_t n_meo_localizable = 0;
};

namespace detail {

struct Candidate {
    std::size_t index = 0;
    Vec3 direction;
    double central = 0.0;
    double fading = 0.0;
    bool available = false;
};

// Everything derived from the configuration once per run.
struct Context {
    analytic::SystemConfig config;
    Vec3 target_km;
    double cos_leo_max = 1.0;
    double cos_meo_max = 1.0;
    double cos_candidate = 1.0;  // LEO satellites kept for interference search
    double theta_d = 0.0;
    double cos_theta_d = 1.0;
    bool sum_all = true;

    Context(const analytic::SystemConfig& c, bool sum_all_interferers) : config(c), sum_all(sum_all_interferers) {
        c.validate();
        target_km = constellation::kTargetDirection * c.earth_radius_km;
        const double leo_max = analytic::leo_max_central(c);
        cos_leo_max = std::cos(leo_max);
        cos_meo_max = std::cos(analytic::meo_max_central(c));
        theta_d = geom::central_from_dome(c.leo_geometry(), channel::effective_beam_range(c.rx_pattern));
        cos_theta_d = std::cos(theta_d);
        cos_candidate = sum_all ? cos_leo_max : std::cos(std::min(kPi, leo_max + theta_d));
    }
};

struct Workspace {
    std::vector<Candidate> leo;
    std::vector<Candidate> meo;
    constellation::DsbppSample dsbpp;
};

inline double range_m(const Context& ctx, const Vec3& direction, double radius_km) {
    return km_to_m((direction * radius_km - ctx.target_km).norm());
}

inline double dome_between(const Context& ctx, const Candidate& a, const Candidate& b, double radius_km) {
    return angle_between(a.direction * radius_km - ctx.target_km, b.direction * radius_km - ctx.target_km);
}

inline double leo_sinr(const Context& ctx, const std::vector<Candidate>& leo, std::size_t s) {
    const auto& c = ctx.config;
    const double radius = c.leo_shell.radius_km;
    const double a0 = c.leo_link.power_at_unit_range();
    const double ls = range_m(ctx, leo[s].direction, radius);
    const double signal = a0 * c.leo_link.max_rx_gain * leo[s].fading / (ls * ls);

    auto interference_from = [&](std::size_t j) {
        const double lj = range_m(ctx, leo[j].direction, radius);
        const double g = channel::rx_gain(c.rx_pattern, c.leo_link.max_rx_gain, dome_between(ctx, leo[s], leo[j], radius));
        return a0 * g * leo[j].fading / (lj * lj);
    };

    double interference = 0.0;
    if (ctx.sum_all) {
        for (std::size_t j = 0; j < leo.size(); ++j) {
            if (j != s && leo[j].available) interference += interference_from(j);
        }
    } else {
        std::size_t nearest = leo.size();
        double best = -2.0;
        for (std::size_t j = 0; j < leo.size(); ++j) {
            if (j == s) continue;
            const double cj = dot(leo[s].direction, leo[j].direction);
            if (cj > best) {
                best = cj;
                nearest = j;
            }
        }
        if (nearest < leo.size() && best >= ctx.cos_theta_d) interference = interference_from(nearest);
    }
    return signal / (interference + c.leo_link.noise_power_w);
}

inline double meo_sinr(const Context& ctx, const Candidate& m) {
    const auto& c = ctx.config;
    const double l = range_m(ctx, m.direction, c.meo_shell.radius_km);
    return c.meo_link.power_at_unit_range() * c.meo_link.max_rx_gain * m.fading / (l * l) / c.meo_link.noise_power_w;
}

inline bool nearer(const Candidate& a, const Candidate& b) {
    return a.central < b.central || (a.central == b.central && a.index < b.index);
}

inline double central_from_x(double x) { return std::acos(std::clamp(x, -1.0, 1.0)); }


// One trial. Random draws in order: LEO positions (u, v per satellite, as in
// constellation::sample_bpp), the DSBPP, then fading for each kept LEO
// satellite nearest first and each available MEO satellite nearest first.
inline TrialResult run_trial(const Context& ctx, std::uint64_t master_seed, std::uint64_t trial_index,
                             std::size_t max_k, bool with_sinr, Workspace& ws) {
    const auto& c = ctx.config;
    Rng rng = make_stream(master_seed, trial_index);

    ws.leo.clear();
    for (std::size_t i = 0; i < c.leo_shell.n_sats; ++i) {
        const double u = uniform01(rng);
        const double v = uniform01(rng);
        const double cos_polar = 1.0 - 2.0 * u;
        const double sin_polar = std::sqrt(std::max(0.0, 1.0 - cos_polar * cos_polar));
        const double az = kTwoPi * v;
        const double x = sin_polar * std::cos(az);
        if (x < ctx.cos_candidate) continue;
        Candidate cand;
        cand.index = i;
        cand.direction = {x, sin_polar * std::sin(az), cos_polar};
        cand.central = central_from_x(x);
        cand.available = x >= ctx.cos_leo_max;
        ws.leo.push_back(cand);
    }

    constellation::sample_dsbpp_into(c.meo_shell, rng, ws.dsbpp);
    ws.meo.clear();
    for (std::size_t i = 0; i < ws.dsbpp.satellites.size(); ++i) {
        const Vec3& d = ws.dsbpp.satellites[i].unit_direction;
        if (d.x < ctx.cos_meo_max) continue;
        ws.meo.push_back({i, d, central_from_x(d.x), 0.0, true});
    }

    std::sort(ws.leo.begin(), ws.leo.end(), nearer);
    std::sort(ws.meo.begin(), ws.meo.end(), nearer);

    TrialResult r;
    r.trial_index = trial_index;
    r.n_leo_available = static_cast<std::size_t>(
        std::count_if(ws.leo.begin(), ws.leo.end(), [](const Candidate& cd) { return cd.available; }));
    r.n_meo_available = ws.meo.size();
    r.per_rank_sinr_pass.assign(max_k, false);
    r.leo_rank_pass.assign(max_k, false);
    r.meo_rank_pass.assign(max_k, false);
    if (!with_sinr) return r;

    for (auto& cd : ws.leo) cd.fading = channel::sr_sample(c.leo_fading, rng);
    for (auto& cd : ws.meo) cd.fading = channel::sr_sample(c.meo_fading, rng);

    // Available LEO satellites are a prefix of the sorted candidates.
    std::vector<BeamOutcome> leo_out, meo_out;
    for (std::size_t s = 0; s < r.n_leo_available; ++s) {
        const double sinr = leo_sinr(ctx, ws.leo, s);
        leo_out.push_back({Layer::leo, ws.leo[s].index, ws.leo[s].central, sinr, sinr > c.leo_link.sinr_threshold});
    }
    for (const auto& m : ws.meo) {
        const double sinr = meo_sinr(ctx, m);
        const bool pass = sinr > c.meo_link.sinr_threshold;
        meo_out.push_back({Layer::meo, m.index, m.central, sinr, pass});
        if (pass) ++r.n_meo_localizable;
    }

    for (std::size_t k = 0; k < max_k; ++k) {
        r.leo_rank_pass[k] = k < leo_out.size() && leo_out[k].pass;
        r.meo_rank_pass[k] = k < meo_out.size() && meo_out[k].pass;
    }
    for (std::size_t k = 0; k < meo_out.size() && r.beams.size() < max_k; ++k) r.beams.push_back(meo_out[k]);
    for (std::size_t k = 0; k < leo_out.size() && r.beams.size() < max_k; ++k) r.beams.push_back(leo_out[k]);
    for (std::size_t k = 0; k < r.beams.size(); ++k) r.per_rank_sinr_pass[k] = r.beams[k].pass;
    return r;
}

// Integer tallies of one block of trials; index k - 1 holds level k.
struct Counters {
    std::uint64_t trials = 0;
    std::vector<std::uint64_t> avail_leo, avail_meo, avail_hybrid;
    std::vector<std::uint64_t> joint_leo, joint_meo, joint_hybrid;
    std::vector<std::uint64_t> leo_rank;   // rank k LEO beam passes
    std::vector<std::uint64_t> meo_local;  // trials with exactly j localizable MEO (last bin: >= max_k)

    explicit Counters(std::size_t k = 0)
        : avail_leo(k), avail_meo(k), avail_hybrid(k), joint_leo(k), joint_meo(k), joint_hybrid(k), leo_rank(k),
          meo_local(k + 1) {}

    void add(const TrialResult& r) {
        ++trials;
        const std::size_t k_max = avail_leo.size();
        bool leo_ok = true, meo_ok = true, hyb_ok = true;
        for (std::size_t k = 1; k <= k_max; ++k) {
            avail_leo[k - 1] += r.n_leo_available >= k;
            avail_meo[k - 1] += r.n_meo_available >= k;
            avail_hybrid[k - 1] += r.n_leo_available + r.n_meo_available >= k;
            leo_ok = leo_ok && r.leo_rank_pass[k - 1];
            meo_ok = meo_ok && r.meo_rank_pass[k - 1];
            hyb_ok = hyb_ok && r.per_rank_sinr_pass[k - 1];
            joint_leo[k - 1] += leo_ok;
            joint_meo[k - 1] += meo_ok;
            joint_hybrid[k - 1] += hyb_ok;
            leo_rank[k - 1] += r.leo_rank_pass[k - 1];
        }
        ++meo_local[std::min(r.n_meo_localizable, k_max)];
    }

    Counters& operator+=(const Counters& o) {
        trials += o.trials;
        auto acc = [](std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
            for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
        };
        acc(avail_leo, o.avail_leo);
        acc(avail_meo, o.avail_meo);
        acc(avail_hybrid, o.avail_hybrid);
        acc(joint_leo, o.joint_leo);
        acc(joint_meo, o.joint_meo);
        acc(joint_hybrid, o.joint_hybrid);
        acc(leo_rank, o.leo_rank);
        acc(meo_local, o.meo_local);
        return *this;
    }

    Counters operator-(const Counters& o) const {
        Counters d = *this;
        d.trials -= o.trials;
        auto sub = [](std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
            for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
        };
        sub(d.avail_leo, o.avail_leo);
        sub(d.avail_meo, o.avail_meo);
        sub(d.avail_hybrid, o.avail_hybrid);
        sub(d.joint_leo, o.joint_leo);
        sub(d.joint_meo, o.joint_meo);
        sub(d.joint_hybrid, o.joint_hybrid);
        sub(d.leo_rank, o.leo_rank);
        sub(d.meo_local, o.meo_local);
        return d;
    }
};

// Plug-in estimates with the same rank structure as the closed forms: LEO
// as a product of per-rank pass rates, MEO as a count of localizable
// satellites, hybrid as their convolution.
struct RankedValues {
    std::vector<double> leo, meo, hybrid;
};

inline RankedValues ranked_values(const Counters& c) {
    const std::size_t k_max = c.leo_rank.size();
    const double n = static_cast<double>(c.trials);
    RankedValues v{std::vector<double>(k_max), std::vector<double>(k_max), std::vector<double>(k_max)};
    std::vector<double> leo_prod(k_max + 1, 1.0);
    for (std::size_t k = 1; k <= k_max; ++k) leo_prod[k] = leo_prod[k - 1] * (c.leo_rank[k - 1] / n);
    std::vector<double> meo_pmf(k_max + 1);
    for (std::size_t j = 0; j <= k_max; ++j) meo_pmf[j] = c.meo_local[j] / n;
    for (std::size_t k = 1; k <= k_max; ++k) {
        double tail = 0.0;
        for (std::size_t j = k; j <= k_max; ++j) tail += meo_pmf[j];
        double mix = tail;
        for (std::size_t j = 0; j < k; ++j) mix += meo_pmf[j] * leo_prod[k - j];
        v.leo[k - 1] = leo_prod[k];
        v.meo[k - 1] = tail;
        v.hybrid[k - 1] = mix;
    }
    return v;
}

}  // namespace detail

/// Empirical probability with its standard error.
struct Estimate {
    double value = 0.0;
    double std_err = 0.0;
};

/// Binomial standard error, computed from (x + 1/2) / (n + 1) so that it
/// never collapses to zero on small samples.
inline double binomial_std_err(std::uint64_t successes, std::uint64_t trials) {
    const double n = static_cast<double>(trials);
    const double p = (successes + 0.5) / (n + 1.0);
    return std::sqrt(p * (1.0 - p) / n);
}

inline Estimate proportion(std::uint64_t successes, std::uint64_t trials) {
    return {static_cast<double>(successes) / static_cast<double>(trials), binomial_std_err(successes, trials)};
}

struct SystemEstimates {
    std::vector<Estimate> leo, meo, hybrid;  ///< index K - 1
};

struct Report {
    std::size_t n_trials = 0;
    SystemEstimates availability;
    /// All K associated beams pass in the same trial.
    SystemEstimates joint_localizability;
    /// Per-rank product form (see detail::ranked_values); jackknife errors.
    SystemEstimates ranked_localizability;
    std::vector<Estimate> leo_rank;  ///< rank k LEO beam available and passing
};

inline detail::Counters run_counters(const analytic::SystemConfig& config, const McSpec& spec, bool with_sinr,
                                     std::vector<detail::Counters>* per_block = nullptr) {
    spec.validate();
    const detail::Context ctx(config, spec.sum_all_interferers);
    const std::size_t blocks = std::min(spec.n_blocks, spec.n_trials);
    std::vector<detail::Counters> tallies(blocks, detail::Counters(spec.max_k));
    parallel_for(
        blocks,
        [&](std::size_t b) {
            detail::Workspace ws;
            const std::size_t lo = b * spec.n_trials / blocks;
            const std::size_t hi = (b + 1) * spec.n_trials / blocks;
            for (std::size_t t = lo; t < hi; ++t)
                tallies[b].add(detail::run_trial(ctx, spec.master_seed, t, spec.max_k, with_sinr, ws));
        },
        spec.threads);
    detail::Counters total(spec.max_k);
    for (const auto& t : tallies) total += t;
    if (per_block) *per_block = std::move(tallies);
    return total;
}

/// Runs one trial on its own (same draws as inside the batch runners).
inline TrialResult simulate_trial(const analytic::SystemConfig& config, const McSpec& spec, std::uint64_t trial_index) {
    const detail::Context ctx(config, spec.sum_all_interferers);
    detail::Workspace ws;
    return detail::run_trial(ctx, spec.master_seed, trial_index, spec.max_k, true, ws);
}

namespace detail {

inline SystemEstimates availability_estimates(const Counters& c) {
    SystemEstimates e;
    for (std::size_t k = 0; k < c.avail_leo.size(); ++k) {
        e.leo.push_back(proportion(c.avail_leo[k], c.trials));
        e.meo.push_back(proportion(c.avail_meo[k], c.trials));
        e.hybrid.push_back(proportion(c.avail_hybrid[k], c.trials));
    }
    return e;
}

// Delete-one-block jackknife around the plug-in values. With fewer than two
// blocks the binomial error of the estimate is used instead.
inline SystemEstimates ranked_estimates(const Counters& total, const std::vector<Counters>& blocks) {
    const RankedValues full = ranked_values(total);
    const std::size_t k_max = full.leo.size();
    SystemEstimates e;
    auto fallback = [&](double v) {
        const auto x = static_cast<std::uint64_t>(std::llround(v * static_cast<double>(total.trials)));
        return binomial_std_err(x, total.trials);
    };
    std::vector<RankedValues> loo;
    if (blocks.size() >= 2) {
        for (const auto& b : blocks) loo.push_back(ranked_values(total - b));
    }
    for (std::size_t k = 0; k < k_max; ++k) {
        double se[3] = {0.0, 0.0, 0.0};
        const double vals[3] = {full.leo[k], full.meo[k], full.hybrid[k]};
        if (loo.empty()) {
            for (int s = 0; s < 3; ++s) se[s] = fallback(vals[s]);
        } else {
            const double g = static_cast<double>(loo.size());
            for (int s = 0; s < 3; ++s) {
                double mean = 0.0;
                for (const auto& r : loo) mean += (s == 0 ? r.leo[k] : s == 1 ? r.meo[k] : r.hybrid[k]);
                mean /= g;
                double ss = 0.0;
                for (const auto& r : loo) {
                    const double d = (s == 0 ? r.leo[k] : s == 1 ? r.meo[k] : r.hybrid[k]) - mean;
                    ss += d * d;
                }
                se[s] = std::sqrt((g - 1.0) / g * ss);
            }
        }
        e.leo.push_back({vals[0], se[0]});
        e.meo.push_back({vals[1], se[1]});
        e.hybrid.push_back({vals[2], se[2]});
    }
    return e;
}

}  // namespace detail

/// Availability of LEO-only, MEO-only and hybrid layers for K = 1..max_k.
inline SystemEstimates simulate_availability(const analytic::SystemConfig& config, const McSpec& spec) {
    return detail::availability_estimates(run_counters(config, spec, false));
}

/// Availability and both localizability estimators from one set of trials.
inline Report simulate(const analytic::SystemConfig& config, const McSpec& spec) {
    std::vector<detail::Counters> blocks;
    const detail::Counters total = run_counters(config, spec, true, &blocks);
    Report r;
    r.n_trials = total.trials;
    r.availability = detail::availability_estimates(total);
    for (std::size_t k = 0; k < spec.max_k; ++k) {
        r.joint_localizability.leo.push_back(proportion(total.joint_leo[k], total.trials));
        r.joint_localizability.meo.push_back(proportion(total.joint_meo[k], total.trials));
        r.joint_localizability.hybrid.push_back(proportion(total.joint_hybrid[k], total.trials));
        r.leo_rank.push_back(proportion(total.leo_rank[k], total.trials));
    }
    r.ranked_localizability = detail::ranked_estimates(total, blocks);
    return r;
}

struct LocalizabilityEstimates {
    SystemEstimates joint;
    SystemEstimates ranked;
};

/// Localizability alone; see Report for the two estimators.
inline LocalizabilityEstimates simulate_localizability(const analytic::SystemConfig& config, const McSpec& spec) {
    Report r = simulate(config, spec);
    return {std::move(r.joint_localizability), std::move(r.ranked_localizability)};
}

}  // namespace constelsim::mc
