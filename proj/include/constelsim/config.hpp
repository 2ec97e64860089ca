#pragma once

// Run configuration: a flat `key = value [unit]` text format with dotted
// section prefixes (leo.*, meo.*, rx.*, mc.*, run.*). Optional `[section]`
// headers prefix the keys that follow them. '#' starts a comment.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "constelsim/analytic.hpp"
#include "constelsim/csv.hpp"
#include "constelsim/mc.hpp"
#include "constelsim/units.hpp"

namespace constelsim::config {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Metric { availability, localizability };
enum class SystemKind { leo, meo, hybrid };

struct SweepAxis {
    std::string key;
    double min = 0.0;
    double max = 0.0;
    double step = 1.0;

    /// min, min + step, ... up to max (inclusive, with a small slack).
    std::vector<double> points() const {
        std::vector<double> out;
        const double slack = 1e-9 * std::abs(step);
        for (std::size_t i = 0;; ++i) {
            const double v = min + static_cast<double>(i) * step;
            if (v > max + slack) break;
            out.push_back(v);
        }
        return out;
    }
};

struct RunConfig {
    analytic::SystemConfig system = analytic::SystemConfig::reference_defaults();
    std::string rx_pattern = "gaussian";
    double rx_half_power_beamwidth = deg_to_rad(8.0);
    unsigned rx_n_elements = 35;

    Metric metric = Metric::availability;
    SystemKind system_kind = SystemKind::hybrid;
    std::vector<std::size_t> ks{1, 3, 4, 6};
    std::vector<SweepAxis> sweeps;
    mc::McSpec mc;

    /// Rebuilds the receive pattern from the rx.* fields.
    void sync_pattern() {
        if (rx_pattern == "gaussian") system.rx_pattern = channel::GaussianPattern{rx_half_power_beamwidth};
        else if (rx_pattern == "flattop") system.rx_pattern = channel::FlatTopPattern{rx_half_power_beamwidth};
        else if (rx_pattern == "sinc") system.rx_pattern = channel::SincPattern{rx_n_elements};
        else if (rx_pattern == "cosine") system.rx_pattern = channel::CosinePattern{rx_n_elements};
        else throw ConfigError("unknown rx.pattern '" + rx_pattern + "' (gaussian, flattop, sinc, cosine)");
    }

    void validate() const {
        try {
            system.validate();
            mc.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        for (std::size_t k : ks)
            if (k < 1) throw ConfigError("run.k entries must be at least 1");
    }
};

inline const char* metric_name(Metric m) { return m == Metric::availability ? "availability" : "localizability"; }
inline const char* system_name(SystemKind s) {
    return s == SystemKind::leo ? "leo" : (s == SystemKind::meo ? "meo" : "hybrid");
}

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

inline double parse_number(std::string_view text, const std::string& key) {
    double v = 0.0;
    const std::string t = trim(text);
    if (t.empty() || !csv::parse_double(t, v) || !std::isfinite(v))
        throw ConfigError(key + ": expected a number, got '" + std::string(text) + "'");
    return v;
}

// Splits "15 dBW" / "15dBW" into number and unit.
inline std::pair<double, std::string> split_quantity(std::string_view text, const std::string& key) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc{} || !std::isfinite(v))
        throw ConfigError(key + ": expected a number, got '" + t + "'");
    return {v, trim(std::string_view(res.ptr, static_cast<std::size_t>(t.data() + t.size() - res.ptr)))};
}

inline bool parse_bool(std::string_view text, const std::string& key) {
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw ConfigError(key + ": expected true or false, got '" + t + "'");
}

inline std::uint64_t to_count(double v, const std::string& key) {
    if (!(v >= 0.0) || v != std::floor(v) || v > 9.0e15) throw ConfigError(key + ": expected a non-negative integer");
    return static_cast<std::uint64_t>(v);
}

// Unit families. Each converts an input (value, unit) to the canonical unit
// printed on output.
enum class Family { count, plain, length_km, length_m, angle, power_dbw, power_dbm, gain_db, ratio_db };

inline const char* canonical_unit(Family f) {
    switch (f) {
        case Family::length_km: return "km";
        case Family::length_m: return "m";
        case Family::angle: return "deg";
        case Family::power_dbw: return "dBW";
        case Family::power_dbm: return "dBm";
        case Family::gain_db: return "dBi";
        case Family::ratio_db: return "dB";
        default: return "";
    }
}

inline double to_canonical(Family f, double v, const std::string& unit, const std::string& key) {
    auto bad = [&]() -> double {
        throw ConfigError(key + ": unit '" + unit + "' not accepted here" +
                          (std::string(canonical_unit(f)).empty() ? std::string(" (no unit expected)")
                                                                  : " (expected e.g. " + std::string(canonical_unit(f)) + ")"));
    };
    switch (f) {
        case Family::count:
        case Family::plain:
            return unit.empty() ? v : bad();
        case Family::length_km:
            if (unit == "km" || unit.empty()) return v;
            if (unit == "m") return v / 1000.0;
            return bad();
        case Family::length_m:
            if (unit == "m" || unit.empty()) return v;
            if (unit == "cm") return v / 100.0;
            if (unit == "mm") return v / 1000.0;
            if (unit == "km") return v * 1000.0;
            return bad();
        case Family::angle:
            if (unit == "deg") return v;
            if (unit == "rad") return rad_to_deg(v);
            return bad();
        case Family::power_dbw:
        case Family::power_dbm: {
            double watts = 0.0;
            if (unit == "dBW") watts = dbw_to_watts(v);
            else if (unit == "dBm") watts = dbm_to_watts(v);
            else if (unit == "W") watts = v;
            else if (unit == "mW") watts = v / 1000.0;
            else return bad();
            if (!(watts > 0.0)) throw ConfigError(key + ": power must be positive");
            return f == Family::power_dbw ? linear_to_db(watts) : watts_to_dbm(watts);
        }
        case Family::gain_db:
            if (unit == "dBi" || unit == "dB") return v;
            if (unit == "lin") return v > 0.0 ? linear_to_db(v) : throw ConfigError(key + ": linear gain must be positive");
            return bad();
        case Family::ratio_db:
            if (unit == "dB") return v;
            if (unit == "lin") return v > 0.0 ? linear_to_db(v) : throw ConfigError(key + ": linear ratio must be positive");
            return bad();
    }
    return bad();
}

}  // namespace detail

/// One configurable quantity. Numeric entries expose get/set in their
/// canonical unit (the unit sweeps are expressed in).
struct Entry {
    std::string key;
    detail::Family family = detail::Family::plain;
    std::function<double(const RunConfig&)> get;
    std::function<void(RunConfig&, double)> set;
    // Non-numeric entries use text accessors instead.
    std::function<std::string(const RunConfig&)> get_text;
    std::function<void(RunConfig&, std::string_view)> set_text;

    bool numeric() const { return static_cast<bool>(get); }
};

namespace detail {

inline std::string format_ks(const std::vector<std::size_t>& ks) {
    std::string s;
    for (std::size_t i = 0; i < ks.size(); ++i) s += (i ? "," : "") + std::to_string(ks[i]);
    return s;
}

inline std::vector<std::size_t> parse_ks(std::string_view text, const std::string& key) {
    std::vector<std::size_t> out;
    const std::string t = trim(text);
    if (t.empty()) return out;
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const double v = parse_number(item, key);
        const auto k = to_count(v, key);
        if (k < 1) throw ConfigError(key + ": K must be at least 1");
        out.push_back(static_cast<std::size_t>(k));
    }
    return out;
}

template <class Layer>
void add_layer_entries(std::vector<Entry>& out, const std::string& prefix, Layer L) {
    using F = Family;
    auto num = [&](const char* name, F f, auto get, auto set) {
        out.push_back({prefix + name, f, [=](const RunConfig& r) { return get(r.system); },
                       [=](RunConfig& r, double v) { set(r.system, v); }, {}, {}});
    };
    using S = analytic::SystemConfig;
    num("altitude", F::length_km, [L](const S& s) { return L.radius(s) - s.earth_radius_km; },
        [L](S& s, double v) { L.radius(s) = s.earth_radius_km + v; });
    num("beam_angle", F::angle, [L](const S& s) { return rad_to_deg(L.beam(s)); },
        [L](S& s, double v) { L.beam(s) = deg_to_rad(v); });
    num("tx_power", F::power_dbw, [L](const S& s) { return linear_to_db(L.link(s).tx_power_w); },
        [L](S& s, double v) { L.link(s).tx_power_w = dbw_to_watts(v); });
    num("tx_gain", F::gain_db, [L](const S& s) { return linear_to_db(L.link(s).tx_gain); },
        [L](S& s, double v) { L.link(s).tx_gain = db_to_linear(v); });
    num("max_rx_gain", F::gain_db, [L](const S& s) { return linear_to_db(L.link(s).max_rx_gain); },
        [L](S& s, double v) { L.link(s).max_rx_gain = db_to_linear(v); });
    num("wavelength", F::length_m, [L](const S& s) { return L.link(s).wavelength_m; },
        [L](S& s, double v) { L.link(s).wavelength_m = v; });
    num("system_loss", F::ratio_db, [L](const S& s) { return linear_to_db(L.link(s).system_loss); },
        [L](S& s, double v) { L.link(s).system_loss = db_to_linear(v); });
    num("noise_power", F::power_dbm, [L](const S& s) { return watts_to_dbm(L.link(s).noise_power_w); },
        [L](S& s, double v) { L.link(s).noise_power_w = dbm_to_watts(v); });
    num("sinr_threshold", F::ratio_db, [L](const S& s) { return linear_to_db(L.link(s).sinr_threshold); },
        [L](S& s, double v) { L.link(s).sinr_threshold = db_to_linear(v); });
    num("fading.m", F::plain, [L](const S& s) { return L.fading(s).m; }, [L](S& s, double v) { L.fading(s).m = v; });
    num("fading.b0", F::plain, [L](const S& s) { return L.fading(s).b0; }, [L](S& s, double v) { L.fading(s).b0 = v; });
    num("fading.omega", F::plain, [L](const S& s) { return L.fading(s).omega; },
        [L](S& s, double v) { L.fading(s).omega = v; });
}

struct LeoAccess {
    template <class S> auto& link(S& s) const { return s.leo_link; }
    template <class S> auto& fading(S& s) const { return s.leo_fading; }
    template <class S> auto& radius(S& s) const { return s.leo_shell.radius_km; }
    template <class S> auto& beam(S& s) const { return s.leo_shell.beam_angle; }
};

struct MeoAccess {
    template <class S> auto& link(S& s) const { return s.meo_link; }
    template <class S> auto& fading(S& s) const { return s.meo_fading; }
    template <class S> auto& radius(S& s) const { return s.meo_shell.radius_km; }
    template <class S> auto& beam(S& s) const { return s.meo_shell.beam_angle; }
};

inline Entry count_entry(std::string key, std::function<double(const RunConfig&)> get,
                         std::function<void(RunConfig&, std::uint64_t)> set) {
    const std::string k = key;
    return {std::move(key), Family::count, std::move(get),
            [k, set = std::move(set)](RunConfig& r, double v) { set(r, to_count(v, k)); }, {}, {}};
}

inline std::vector<Entry> build_registry() {
    std::vector<Entry> e;
    e.push_back(count_entry("leo.n_sats", [](const RunConfig& r) { return static_cast<double>(r.system.leo_shell.n_sats); },
                            [](RunConfig& r, std::uint64_t v) { r.system.leo_shell.n_sats = v; }));
    add_layer_entries(e, "leo.", LeoAccess{});
    e.push_back(count_entry("meo.n_orbits", [](const RunConfig& r) { return static_cast<double>(r.system.meo_shell.n_orbits); },
                            [](RunConfig& r, std::uint64_t v) { r.system.meo_shell.n_orbits = v; }));
    e.push_back(count_entry("meo.sats_per_orbit",
                            [](const RunConfig& r) { return static_cast<double>(r.system.meo_shell.sats_per_orbit); },
                            [](RunConfig& r, std::uint64_t v) { r.system.meo_shell.sats_per_orbit = v; }));
    add_layer_entries(e, "meo.", MeoAccess{});

    e.push_back({"rx.pattern", Family::plain, {}, {}, [](const RunConfig& r) { return r.rx_pattern; },
                 [](RunConfig& r, std::string_view v) {
                     r.rx_pattern = trim(v);
                     r.sync_pattern();
                 }});
    e.push_back({"rx.half_power_beamwidth", Family::angle, [](const RunConfig& r) { return rad_to_deg(r.rx_half_power_beamwidth); },
                 [](RunConfig& r, double v) {
                     r.rx_half_power_beamwidth = deg_to_rad(v);
                     r.sync_pattern();
                 },
                 {}, {}});
    e.push_back(count_entry("rx.n_elements", [](const RunConfig& r) { return static_cast<double>(r.rx_n_elements); },
                            [](RunConfig& r, std::uint64_t v) {
                                r.rx_n_elements = static_cast<unsigned>(v);
                                r.sync_pattern();
                            }));

    e.push_back({"run.metric", Family::plain, {}, {}, [](const RunConfig& r) { return std::string(metric_name(r.metric)); },
                 [](RunConfig& r, std::string_view v) {
                     const std::string t = trim(v);
                     if (t == "availability") r.metric = Metric::availability;
                     else if (t == "localizability") r.metric = Metric::localizability;
                     else throw ConfigError("run.metric: expected availability or localizability, got '" + t + "'");
                 }});
    e.push_back({"run.system", Family::plain, {}, {}, [](const RunConfig& r) { return std::string(system_name(r.system_kind)); },
                 [](RunConfig& r, std::string_view v) {
                     const std::string t = trim(v);
                     if (t == "leo") r.system_kind = SystemKind::leo;
                     else if (t == "meo") r.system_kind = SystemKind::meo;
                     else if (t == "hybrid") r.system_kind = SystemKind::hybrid;
                     else throw ConfigError("run.system: expected leo, meo or hybrid, got '" + t + "'");
                 }});
    e.push_back({"run.k", Family::plain, {}, {}, [](const RunConfig& r) { return format_ks(r.ks); },
                 [](RunConfig& r, std::string_view v) { r.ks = parse_ks(v, "run.k"); }});
    e.push_back({"run.epsilon", Family::plain, [](const RunConfig& r) { return r.system.epsilon; },
                 [](RunConfig& r, double v) { r.system.epsilon = v; }, {}, {}});
    e.push_back({"run.quad_rel_tol", Family::plain, [](const RunConfig& r) { return r.system.quadrature.relative_tolerance; },
                 [](RunConfig& r, double v) { r.system.quadrature.relative_tolerance = v; }, {}, {}});
    e.push_back({"run.quad_abs_tol", Family::plain, [](const RunConfig& r) { return r.system.quadrature.absolute_tolerance; },
                 [](RunConfig& r, double v) { r.system.quadrature.absolute_tolerance = v; }, {}, {}});
    e.push_back(count_entry("run.quad_max_subdivisions",
                            [](const RunConfig& r) { return static_cast<double>(r.system.quadrature.max_subdivisions); },
                            [](RunConfig& r, std::uint64_t v) { r.system.quadrature.max_subdivisions = static_cast<int>(v); }));

    e.push_back(count_entry("mc.trials", [](const RunConfig& r) { return static_cast<double>(r.mc.n_trials); },
                            [](RunConfig& r, std::uint64_t v) { r.mc.n_trials = v; }));
    e.push_back(count_entry("mc.seed", [](const RunConfig& r) { return static_cast<double>(r.mc.master_seed); },
                            [](RunConfig& r, std::uint64_t v) { r.mc.master_seed = v; }));
    e.push_back({"mc.sum_all_interferers", Family::plain, {}, {},
                 [](const RunConfig& r) { return std::string(r.mc.sum_all_interferers ? "true" : "false"); },
                 [](RunConfig& r, std::string_view v) { r.mc.sum_all_interferers = parse_bool(v, "mc.sum_all_interferers"); }});
    e.push_back(count_entry("mc.threads", [](const RunConfig& r) { return static_cast<double>(r.mc.threads); },
                            [](RunConfig& r, std::uint64_t v) { r.mc.threads = static_cast<unsigned>(v); }));
    e.push_back(count_entry("mc.blocks", [](const RunConfig& r) { return static_cast<double>(r.mc.n_blocks); },
                            [](RunConfig& r, std::uint64_t v) { r.mc.n_blocks = v; }));
    return e;
}

}  // namespace detail

inline const std::vector<Entry>& registry() {
    static const std::vector<Entry> entries = detail::build_registry();
    return entries;
}

inline const Entry* find_entry(std::string_view key) {
    for (const auto& e : registry())
        if (e.key == key) return &e;
    return nullptr;
}

inline SweepAxis parse_sweep(std::string_view text, const std::string& key) {
    const std::string t = detail::trim(text);
    std::vector<std::string> parts;
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(detail::trim(item));
    if (parts.size() != 4) throw ConfigError(key + ": expected name:min:max:step, got '" + t + "'");
    const Entry* e = find_entry(parts[0]);
    if (!e || !e->numeric()) throw ConfigError(key + ": unknown or non-numeric sweep parameter '" + parts[0] + "'");
    SweepAxis axis{parts[0], detail::parse_number(parts[1], key), detail::parse_number(parts[2], key),
                   detail::parse_number(parts[3], key)};
    if (!(axis.step > 0.0)) throw ConfigError(key + ": step must be positive");
    if (axis.max < axis.min) throw ConfigError(key + ": max below min");
    return axis;
}

inline std::string format_sweep(const SweepAxis& a) {
    return a.key + ":" + csv::format_number(a.min) + ":" + csv::format_number(a.max) + ":" + csv::format_number(a.step);
}

/// Applies one `key = value` assignment.
inline void apply(RunConfig& r, std::string_view raw_key, std::string_view value) {
    const std::string key = detail::trim(raw_key);
    if (key == "run.sweep" || key == "run.sweep2") {
        const std::size_t slot = key == "run.sweep" ? 0 : 1;
        const std::string t = detail::trim(value);
        if (t.empty()) {
            if (r.sweeps.size() > slot) r.sweeps.resize(slot);
            return;
        }
        if (r.sweeps.size() < slot) throw ConfigError("run.sweep2 given without run.sweep");
        const SweepAxis axis = parse_sweep(t, key);
        if (r.sweeps.size() == slot) r.sweeps.push_back(axis);
        else r.sweeps[slot] = axis;
        return;
    }
    const Entry* e = find_entry(key);
    if (!e) throw ConfigError("unknown configuration key '" + key + "'");
    if (e->numeric()) {
        const auto [v, unit] = detail::split_quantity(value, key);
        e->set(r, detail::to_canonical(e->family, v, unit, key));
    } else {
        e->set_text(r, value);
    }
}

/// Applies `key=value` (command-line override form).
inline void apply_override(RunConfig& r, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) throw ConfigError("override '" + std::string(assignment) + "' is not key=value");
    apply(r, assignment.substr(0, eq), assignment.substr(eq + 1));
}

/// Parses a configuration text on top of the reference defaults.
inline RunConfig parse(std::istream& in, RunConfig base = {}) {
    std::string line, section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string t = detail::trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
            section = detail::trim(std::string_view(t).substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        std::string key = detail::trim(std::string_view(t).substr(0, eq));
        if (!section.empty()) key = section + "." + key;
        try {
            apply(base, key, std::string_view(t).substr(eq + 1));
        } catch (const ConfigError& err) {
            throw ConfigError("line " + std::to_string(line_no) + ": " + err.what());
        }
    }
    return base;
}

inline RunConfig parse_string(const std::string& text, RunConfig base = {}) {
    std::istringstream in(text);
    return parse(in, std::move(base));
}

inline RunConfig load(const std::string& path, RunConfig base = {}) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
    return parse(in, std::move(base));
}

/// Effective configuration in canonical units, one key per line.
inline std::string emit(const RunConfig& r) {
    std::string out;
    for (const auto& e : registry()) {
        out += e.key + " = ";
        if (e.numeric()) {
            out += csv::format_number(e.get(r));
            const std::string unit = detail::canonical_unit(e.family);
            if (!unit.empty()) out += " " + unit;
        } else {
            out += e.get_text(r);
        }
        out += '\n';
    }
    if (!r.sweeps.empty()) out += "run.sweep = " + format_sweep(r.sweeps[0]) + '\n';
    if (r.sweeps.size() > 1) out += "run.sweep2 = " + format_sweep(r.sweeps[1]) + '\n';
    return out;
}

/// Copy of `r` with `axis.key` set to `value` (canonical unit).
inline RunConfig with_value(const RunConfig& r, const std::string& key, double value) {
    const Entry* e = find_entry(key);
    if (!e || !e->numeric()) throw ConfigError("unknown sweep parameter '" + key + "'");
    RunConfig copy = r;
    e->set(copy, value);
    return copy;
}

}  // namespace constelsim::config
