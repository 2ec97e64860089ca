#pragma once

// Analytic-vs-simulation comparison tables.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "constelsim/analytic.hpp"
#include "constelsim/mc.hpp"

namespace constelsim::mc {

/// Closed-form values for K = 1..max_k, index K - 1.
struct AnalyticTable {
    std::vector<double> availability_leo, availability_meo, availability_hybrid;
    std::vector<double> localizability_leo, localizability_meo, localizability_hybrid;
};

inline AnalyticTable analytic_table(const analytic::SystemConfig& c, std::size_t max_k, bool with_localizability = true) {
    AnalyticTable t;
    for (std::size_t k = 1; k <= max_k; ++k) {
        t.availability_leo.push_back(analytic::leo_availability(c, k));
        t.availability_meo.push_back(analytic::meo_availability(c, k));
        t.availability_hybrid.push_back(analytic::hybrid_availability(c, k));
    }
    if (with_localizability) {
        const auto terms = analytic::localizability_terms(c, max_k);
        for (std::size_t k = 1; k <= max_k; ++k) {
            t.localizability_leo.push_back(analytic::leo_localizability(terms, k));
            t.localizability_meo.push_back(analytic::meo_localizability(terms, k));
            t.localizability_hybrid.push_back(analytic::hybrid_localizability(terms, k));
        }
    }
    return t;
}

struct ValidationRow {
    std::string metric;
    std::size_t k = 0;
    double analytic = 0.0;
    double empirical = 0.0;
    double std_err = 0.0;
    double delta = 0.0;  ///< analytic - empirical
    bool pass = false;
};

struct ValidationOptions {
    std::vector<std::size_t> ks{1, 2, 3, 4, 5, 6};
    bool availability = true;
    bool localizability = true;
    /// Absolute floors of the pass band; the band is max(floor, 3 SE).
    double availability_floor = 0.01;
    double localizability_floor = 0.02;
};

inline bool within_band(double delta, double std_err, double floor) {
    return std::abs(delta) <= std::max(floor, 3.0 * std_err);
}

/// Builds rows from precomputed analytic values and a simulation report.
/// Localizability rows come in two families: `localizability_<layer>` uses
/// the joint estimator (all K beams pass in one trial) and
/// `localizability_ranked_<layer>` the per-rank product estimator.
/// In nearest-interferer mode the localizability floor is dropped (3 SE only).
inline std::vector<ValidationRow> compare(const AnalyticTable& a, const Report& r, const ValidationOptions& opt,
                                          bool sum_all_interferers) {
    std::vector<ValidationRow> rows;
    auto push = [&](const std::string& name, std::size_t k, const std::vector<double>& an,
                    const std::vector<Estimate>& emp, double floor) {
        ValidationRow row;
        row.metric = name;
        row.k = k;
        row.analytic = an.at(k - 1);
        row.empirical = emp.at(k - 1).value;
        row.std_err = emp.at(k - 1).std_err;
        row.delta = row.analytic - row.empirical;
        row.pass = within_band(row.delta, row.std_err, floor);
        rows.push_back(row);
    };
    const double loc_floor = sum_all_interferers ? opt.localizability_floor : 0.0;
    if (opt.availability) {
        for (std::size_t k : opt.ks) push("availability_leo", k, a.availability_leo, r.availability.leo, opt.availability_floor);
        for (std::size_t k : opt.ks) push("availability_meo", k, a.availability_meo, r.availability.meo, opt.availability_floor);
        for (std::size_t k : opt.ks)
            push("availability_hybrid", k, a.availability_hybrid, r.availability.hybrid, opt.availability_floor);
    }
    if (opt.localizability) {
        const auto& j = r.joint_localizability;
        const auto& q = r.ranked_localizability;
        for (std::size_t k : opt.ks) push("localizability_leo", k, a.localizability_leo, j.leo, loc_floor);
        for (std::size_t k : opt.ks) push("localizability_meo", k, a.localizability_meo, j.meo, loc_floor);
        for (std::size_t k : opt.ks) push("localizability_hybrid", k, a.localizability_hybrid, j.hybrid, loc_floor);
        for (std::size_t k : opt.ks) push("localizability_ranked_leo", k, a.localizability_leo, q.leo, loc_floor);
        for (std::size_t k : opt.ks) push("localizability_ranked_meo", k, a.localizability_meo, q.meo, loc_floor);
        for (std::size_t k : opt.ks)
            push("localizability_ranked_hybrid", k, a.localizability_hybrid, q.hybrid, loc_floor);
    }
    return rows;
}

/// Runs the simulation and the closed forms and tabulates the deltas.
inline std::vector<ValidationRow> run_validation(const analytic::SystemConfig& c, McSpec spec,
                                                 const ValidationOptions& opt = {}) {
    if (opt.ks.empty()) return {};
    spec.max_k = std::max(spec.max_k, *std::max_element(opt.ks.begin(), opt.ks.end()));
    if (*std::min_element(opt.ks.begin(), opt.ks.end()) < 1) throw std::invalid_argument("K must be at least 1");
    const AnalyticTable a = analytic_table(c, spec.max_k, opt.localizability);
    Report r;
    if (opt.localizability) {
        r = simulate(c, spec);
    } else {
        r.availability = simulate_availability(c, spec);
        r.n_trials = spec.n_trials;
    }
    return compare(a, r, opt, spec.sum_all_interferers);
}

inline std::size_t count_failures(const std::vector<ValidationRow>& rows) {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const ValidationRow& r) { return !r.pass; }));
}

}  // namespace constelsim::mc
