#pragma once

// Subcommands of the constelsim tool. Each writes its CSV into a string so a
// failed run leaves no partial output behind.

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "constelsim/analytic.hpp"
#include "constelsim/config.hpp"
#include "constelsim/constellation.hpp"
#include "constelsim/csv.hpp"
#include "constelsim/mc.hpp"
#include "constelsim/parallel.hpp"
#include "constelsim/rng.hpp"
#include "constelsim/validation.hpp"

namespace constelsim::cli {

using config::ConfigError;
using config::Metric;
using config::RunConfig;
using config::SystemKind;

struct CommandOptions {
    bool mc = false;
};

namespace detail {

inline bool starts_with(const std::string& s, const char* prefix) { return s.rfind(prefix, 0) == 0; }

// Rejects axes that cannot affect the selected metric/system.
inline void check_axis(const RunConfig& r, const std::string& key) {
    if (starts_with(key, "mc.") || starts_with(key, "run.quad"))
        throw ConfigError("sweep parameter '" + key + "' does not change the model");
    if (r.system_kind == SystemKind::leo && starts_with(key, "meo."))
        throw ConfigError("sweep parameter '" + key + "' conflicts with run.system = leo");
    if (r.system_kind == SystemKind::meo && starts_with(key, "leo."))
        throw ConfigError("sweep parameter '" + key + "' conflicts with run.system = meo");
    if (r.system_kind != SystemKind::hybrid && key == "run.epsilon")
        throw ConfigError("run.epsilon only affects run.system = hybrid");
    if (r.metric == Metric::availability && starts_with(key, "rx."))
        throw ConfigError("sweep parameter '" + key + "' has no effect on availability");
}

inline std::size_t max_k(const std::vector<std::size_t>& ks) {
    return ks.empty() ? 0 : *std::max_element(ks.begin(), ks.end());
}

/// Closed-form metric for every K in `ks`, in order.
inline std::vector<double> analytic_values(const RunConfig& r) {
    std::vector<double> out;
    if (r.ks.empty()) return out;
    const auto& c = r.system;
    if (r.metric == Metric::availability) {
        for (std::size_t k : r.ks) {
            switch (r.system_kind) {
                case SystemKind::leo: out.push_back(analytic::leo_availability(c, k)); break;
                case SystemKind::meo: out.push_back(analytic::meo_availability(c, k)); break;
                case SystemKind::hybrid: out.push_back(analytic::hybrid_availability(c, k)); break;
            }
        }
        return out;
    }
    const auto terms = analytic::localizability_terms(c, max_k(r.ks));
    for (std::size_t k : r.ks) {
        switch (r.system_kind) {
            case SystemKind::leo: out.push_back(analytic::leo_localizability(terms, k)); break;
            case SystemKind::meo: out.push_back(analytic::meo_localizability(terms, k)); break;
            case SystemKind::hybrid: out.push_back(analytic::hybrid_localizability(terms, k)); break;
        }
    }
    return out;
}

inline const std::vector<mc::Estimate>& pick(const mc::SystemEstimates& e, SystemKind s) {
    return s == SystemKind::leo ? e.leo : (s == SystemKind::meo ? e.meo : e.hybrid);
}

inline std::string render(const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream out;
    csv::Writer w(out);
    for (const auto& row : rows) w.row(row);
    return out.str();
}

}  // namespace detail

/// One sweep axis, one row per point: x, then the analytic metric per K.
/// With options.mc, empirical columns follow (value and standard error; for
/// localizability both the joint and the per-rank estimators).
inline std::string cmd_curve(const RunConfig& run, const CommandOptions& options = {}) {
    run.validate();
    if (run.sweeps.size() != 1) throw ConfigError("curve needs exactly one sweep axis (run.sweep)");
    const config::SweepAxis& axis = run.sweeps[0];
    detail::check_axis(run, axis.key);

    const std::string metric = config::metric_name(run.metric);
    std::vector<std::string> header{"x"};
    for (std::size_t k : run.ks) header.push_back(metric + "_K" + std::to_string(k));
    if (options.mc) {
        for (std::size_t k : run.ks) {
            const std::string base = metric + "_K" + std::to_string(k) + "_mc";
            header.push_back(base);
            header.push_back(base + "_se");
            if (run.metric == Metric::localizability) {
                header.push_back(metric + "_K" + std::to_string(k) + "_mc_ranked");
                header.push_back(metric + "_K" + std::to_string(k) + "_mc_ranked_se");
            }
        }
    }
    std::vector<std::vector<std::string>> rows{header};
    if (run.ks.empty()) return detail::render(rows);

    const std::vector<double> xs = axis.points();
    std::vector<RunConfig> points;
    points.reserve(xs.size());
    for (double x : xs) {
        points.push_back(config::with_value(run, axis.key, x));
        points.back().validate();
    }

    std::vector<std::vector<double>> values(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) { values[i] = detail::analytic_values(points[i]); }, run.mc.threads);

    for (std::size_t i = 0; i < xs.size(); ++i) {
        std::vector<std::string> row{csv::format_number(xs[i])};
        for (double v : values[i]) row.push_back(csv::format_number(v));
        if (options.mc) {
            mc::McSpec spec = points[i].mc;
            spec.max_k = detail::max_k(run.ks);
            if (run.metric == Metric::availability) {
                const auto est = mc::simulate_availability(points[i].system, spec);
                for (std::size_t k : run.ks) {
                    const auto& e = detail::pick(est, run.system_kind)[k - 1];
                    row.push_back(csv::format_number(e.value));
                    row.push_back(csv::format_number(e.std_err));
                }
            } else {
                const auto rep = mc::simulate(points[i].system, spec);
                for (std::size_t k : run.ks) {
                    const auto& j = detail::pick(rep.joint_localizability, run.system_kind)[k - 1];
                    const auto& q = detail::pick(rep.ranked_localizability, run.system_kind)[k - 1];
                    row.push_back(csv::format_number(j.value));
                    row.push_back(csv::format_number(j.std_err));
                    row.push_back(csv::format_number(q.value));
                    row.push_back(csv::format_number(q.std_err));
                }
            }
        }
        rows.push_back(std::move(row));
    }
    return detail::render(rows);
}

/// Two count axes (LEO satellites, then MEO) over the hybrid system; long
/// format `n_leo,n_meo,value` for the single configured K.
inline std::string cmd_heatmap(const RunConfig& run, const CommandOptions& options = {}) {
    run.validate();
    if (options.mc) throw ConfigError("heatmap is analytic only; drop --mc");
    if (run.sweeps.size() != 2) throw ConfigError("heatmap needs two sweep axes (run.sweep, run.sweep2)");
    if (run.sweeps[0].key != "leo.n_sats") throw ConfigError("heatmap: run.sweep must be leo.n_sats");
    const std::string& meo_key = run.sweeps[1].key;
    if (meo_key != "meo.n_orbits" && meo_key != "meo.sats_per_orbit")
        throw ConfigError("heatmap: run.sweep2 must be meo.n_orbits or meo.sats_per_orbit");
    if (run.system_kind != SystemKind::hybrid) throw ConfigError("heatmap needs run.system = hybrid");
    if (run.ks.size() != 1) throw ConfigError("heatmap needs exactly one K in run.k");

    const auto xs = run.sweeps[0].points();
    const auto ys = run.sweeps[1].points();
    std::vector<RunConfig> cells;
    cells.reserve(xs.size() * ys.size());
    for (double x : xs)
        for (double y : ys) {
            cells.push_back(config::with_value(config::with_value(run, run.sweeps[0].key, x), meo_key, y));
            cells.back().validate();
        }
    std::vector<double> values(cells.size());
    parallel_for(cells.size(), [&](std::size_t i) { values[i] = detail::analytic_values(cells[i]).front(); },
                 run.mc.threads);

    std::vector<std::vector<std::string>> rows{{"n_leo", "n_meo", "value"}};
    for (std::size_t i = 0; i < cells.size(); ++i)
        rows.push_back({csv::format_number(cells[i].system.leo_shell.n_sats),
                        csv::format_number(cells[i].system.meo_shell.total()), csv::format_number(values[i])});
    return detail::render(rows);
}

struct ValidateResult {
    std::string csv;
    std::size_t failures = 0;
};

/// Closed forms against the simulator for all three systems at the
/// configured metric and K list. Localizability also reports availability.
inline ValidateResult cmd_validate(const RunConfig& run) {
    run.validate();
    mc::ValidationOptions opt;
    opt.ks = run.ks;
    opt.localizability = run.metric == Metric::localizability;
    const auto rows = mc::run_validation(run.system, run.mc, opt);

    std::vector<std::vector<std::string>> out{{"metric", "K", "analytic", "empirical", "std_err", "delta", "pass"}};
    for (const auto& r : rows)
        out.push_back({r.metric, csv::format_number(r.k), csv::format_number(r.analytic), csv::format_number(r.empirical),
                       csv::format_number(r.std_err), csv::format_number(r.delta), r.pass ? "true" : "false"});
    return {detail::render(out), mc::count_failures(rows)};
}

/// Satellite positions of simulation trial 0 for mc.seed: LEO rows first
/// (orbit_index -1), then MEO orbit by orbit.
inline std::string cmd_sample(const RunConfig& run) {
    run.validate();
    Rng rng = make_stream(run.mc.master_seed, 0);
    const auto leo = constellation::sample_bpp(run.system.leo_shell, rng);
    const auto meo = constellation::sample_dsbpp(run.system.meo_shell, rng);

    std::vector<std::vector<std::string>> rows{{"layer", "orbit_index", "sat_index", "x_km", "y_km", "z_km"}};
    rows.reserve(1 + leo.size() + meo.satellites.size());
    for (std::size_t i = 0; i < leo.size(); ++i) {
        const Vec3 p = leo[i].position_km();
        rows.push_back({"leo", "-1", csv::format_number(i), csv::format_number(p.x), csv::format_number(p.y),
                        csv::format_number(p.z)});
    }
    const std::size_t per = run.system.meo_shell.sats_per_orbit;
    for (std::size_t i = 0; i < meo.satellites.size(); ++i) {
        const Vec3 p = meo.satellites[i].position_km();
        rows.push_back({"meo", csv::format_number(i / per), csv::format_number(i % per), csv::format_number(p.x),
                        csv::format_number(p.y), csv::format_number(p.z)});
    }
    return detail::render(rows);
}

}  // namespace constelsim::cli
