#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "constelsim/config.hpp"

using namespace constelsim;
using namespace constelsim::config;

TEST(Config, DefaultsAreReferenceValues) {
    const RunConfig r;
    const auto& s = r.system;
    EXPECT_EQ(s.leo_shell.n_sats, 2000u);
    EXPECT_DOUBLE_EQ(s.leo_shell.radius_km - s.earth_radius_km, 1000.0);
    EXPECT_DOUBLE_EQ(s.meo_shell.radius_km - s.earth_radius_km, 20000.0);
    EXPECT_EQ(s.meo_shell.n_orbits, 2u);
    EXPECT_EQ(s.meo_shell.sats_per_orbit, 6u);
    EXPECT_NEAR(s.leo_link.tx_power_w, std::pow(10.0, 1.5), 1e-12);
    EXPECT_NEAR(s.leo_link.sinr_threshold, 10.0, 1e-12);
    EXPECT_EQ(r.metric, Metric::availability);
    EXPECT_EQ(r.system_kind, SystemKind::hybrid);
    EXPECT_NO_THROW(r.validate());
}

TEST(Config, EmitParseRoundTripIsIdempotent) {
    RunConfig r;
    apply(r, "leo.n_sats", "1234");
    apply(r, "meo.tx_power", "17.5 dBW");
    apply(r, "rx.pattern", "sinc");
    apply(r, "run.k", "2,5");
    apply(r, "run.sweep", "leo.altitude:500:2000:250");
    const std::string once = emit(r);
    const std::string twice = emit(parse_string(once));
    EXPECT_EQ(once, twice);
    const RunConfig back = parse_string(once);
    EXPECT_EQ(back.system.leo_shell.n_sats, 1234u);
    EXPECT_EQ(back.ks, (std::vector<std::size_t>{2, 5}));
    ASSERT_EQ(back.sweeps.size(), 1u);
    EXPECT_EQ(back.sweeps[0].points().size(), 7u);
}

TEST(Config, DefaultsRoundTrip) {
    const RunConfig r;
    const RunConfig back = parse_string(emit(r));
    EXPECT_NEAR(back.system.leo_link.noise_power_w, r.system.leo_link.noise_power_w, 1e-11 * r.system.leo_link.noise_power_w);
    EXPECT_NEAR(back.system.leo_shell.beam_angle, r.system.leo_shell.beam_angle, 1e-12);
    EXPECT_EQ(emit(back), emit(r));
}

TEST(Config, UnitConversions) {
    RunConfig r;
    apply(r, "leo.altitude", "1500000 m");
    EXPECT_NEAR(r.system.leo_shell.radius_km - r.system.earth_radius_km, 1500.0, 1e-9);
    apply(r, "leo.tx_power", "45 dBm");
    EXPECT_NEAR(r.system.leo_link.tx_power_w, std::pow(10.0, 1.5), 1e-12);
    apply(r, "leo.tx_power", "2 W");
    EXPECT_NEAR(r.system.leo_link.tx_power_w, 2.0, 1e-12);
    apply(r, "leo.noise_power", "-120.2 dBW");
    EXPECT_NEAR(r.system.leo_link.noise_power_w, std::pow(10.0, -12.02), 1e-24);
    apply(r, "leo.beam_angle", "0.5 rad");
    EXPECT_NEAR(r.system.leo_shell.beam_angle, 0.5, 1e-15);
    apply(r, "leo.wavelength", "2 cm");
    EXPECT_NEAR(r.system.leo_link.wavelength_m, 0.02, 1e-15);
    apply(r, "leo.sinr_threshold", "3 lin");
    EXPECT_NEAR(r.system.leo_link.sinr_threshold, 3.0, 1e-12);
    apply(r, "leo.max_rx_gain", "20 dBi");
    EXPECT_NEAR(r.system.leo_link.max_rx_gain, 100.0, 1e-10);
}

TEST(Config, SectionsAndComments) {
    const RunConfig r = parse_string(
        "# comment line\n"
        "[leo]\n"
        "n_sats = 300   # trailing\n"
        "altitude = 800 km\n"
        "\n"
        "[run]\n"
        "metric = localizability\n"
        "system = leo\n");
    EXPECT_EQ(r.system.leo_shell.n_sats, 300u);
    EXPECT_NEAR(r.system.leo_shell.radius_km - r.system.earth_radius_km, 800.0, 1e-9);
    EXPECT_EQ(r.metric, Metric::localizability);
    EXPECT_EQ(r.system_kind, SystemKind::leo);
}

TEST(Config, OverrideForm) {
    RunConfig r;
    apply_override(r, "mc.trials=500");
    apply_override(r, "mc.seed = 42");
    EXPECT_EQ(r.mc.n_trials, 500u);
    EXPECT_EQ(r.mc.master_seed, 42u);
    EXPECT_THROW(apply_override(r, "mc.trials"), ConfigError);
}

TEST(Config, PatternSelection) {
    RunConfig r;
    apply(r, "rx.pattern", "cosine");
    apply(r, "rx.n_elements", "20");
    EXPECT_TRUE(std::holds_alternative<channel::CosinePattern>(r.system.rx_pattern));
    EXPECT_EQ(std::get<channel::CosinePattern>(r.system.rx_pattern).n_elements, 20u);
    apply(r, "rx.pattern", "flattop");
    apply(r, "rx.half_power_beamwidth", "5 deg");
    EXPECT_NEAR(std::get<channel::FlatTopPattern>(r.system.rx_pattern).half_power_beamwidth, deg_to_rad(5.0), 1e-15);
}

TEST(Config, Errors) {
    RunConfig r;
    EXPECT_THROW(apply(r, "leo.nope", "1"), ConfigError);
    EXPECT_THROW(apply(r, "leo.n_sats", "-3"), ConfigError);
    EXPECT_THROW(apply(r, "leo.n_sats", "2.5"), ConfigError);
    EXPECT_THROW(apply(r, "leo.n_sats", "abc"), ConfigError);
    EXPECT_THROW(apply(r, "leo.tx_power", "15"), ConfigError);           // unit required
    EXPECT_THROW(apply(r, "leo.sinr_threshold", "10"), ConfigError);     // unit required
    EXPECT_THROW(apply(r, "leo.beam_angle", "45"), ConfigError);         // unit required
    EXPECT_THROW(apply(r, "leo.tx_power", "15 furlongs"), ConfigError);
    EXPECT_THROW(apply(r, "leo.tx_power", "0 W"), ConfigError);
    EXPECT_THROW(apply(r, "rx.pattern", "parabolic"), ConfigError);
    EXPECT_THROW(apply(r, "run.metric", "speed"), ConfigError);
    EXPECT_THROW(apply(r, "run.k", "0"), ConfigError);
    EXPECT_THROW(apply(r, "mc.sum_all_interferers", "maybe"), ConfigError);
    EXPECT_THROW(apply(r, "run.sweep", "leo.altitude:1:2"), ConfigError);
    EXPECT_THROW(apply(r, "run.sweep", "leo.altitude:2:1:1"), ConfigError);
    EXPECT_THROW(apply(r, "run.sweep", "leo.altitude:1:2:0"), ConfigError);
    EXPECT_THROW(apply(r, "run.sweep", "rx.pattern:1:2:1"), ConfigError);
    EXPECT_THROW(apply(r, "run.sweep2", "leo.altitude:1:2:1"), ConfigError);
    EXPECT_THROW(load("/nonexistent/constelsim.cfg"), ConfigError);
}

TEST(Config, ErrorsCarryLineNumbers) {
    try {
        parse_string("leo.n_sats = 10\n\nleo.altitude = many\n");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
    EXPECT_THROW(parse_string("[leo\n"), ConfigError);
    EXPECT_THROW(parse_string("just words\n"), ConfigError);
}

TEST(Config, ValidateRejectsImpossibleGeometry) {
    RunConfig r;
    apply(r, "leo.altitude", "-10 km");
    EXPECT_THROW(r.validate(), ConfigError);
    RunConfig t;
    apply(t, "mc.trials", "0");
    EXPECT_THROW(t.validate(), ConfigError);
}

TEST(SweepAxis, PointsIncludeEndpoint) {
    const SweepAxis a{"leo.n_sats", 100, 1000, 300};
    EXPECT_EQ(a.points(), (std::vector<double>{100, 400, 700, 1000}));
    const SweepAxis b{"leo.altitude", 0.1, 0.3, 0.1};
    EXPECT_EQ(b.points().size(), 3u);
    EXPECT_EQ(format_sweep(parse_sweep("leo.n_sats:100:1000:300", "run.sweep")), "leo.n_sats:100:1000:300");
}

TEST(WithValue, SetsCanonicalUnit) {
    const RunConfig r;
    const RunConfig h = with_value(r, "leo.altitude", 1500.0);
    EXPECT_NEAR(h.system.leo_shell.radius_km - h.system.earth_radius_km, 1500.0, 1e-9);
    const RunConfig p = with_value(r, "meo.tx_power", 20.0);
    EXPECT_NEAR(p.system.meo_link.tx_power_w, 100.0, 1e-10);
    EXPECT_THROW(with_value(r, "rx.pattern", 1.0), ConfigError);
}
