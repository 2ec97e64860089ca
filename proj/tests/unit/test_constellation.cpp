#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "constelsim/constellation.hpp"
#include "constelsim/rng.hpp"
#include "stats.hpp"

using namespace constelsim;
using namespace constelsim::constellation;

namespace {

LeoShellConfig leo(std::size_t n) { return {n, kEarthRadiusKm + 1000.0, kPi / 4.0}; }
MeoShellConfig meo(std::size_t orbits, std::size_t per) { return {orbits, per, kEarthRadiusKm + 20000.0, kPi / 6.0}; }

// 8 equal-height z bands x 6 azimuth sectors: 48 equal-area cells.
std::size_t equal_area_bin(const Vec3& d) {
    const auto band = std::min<std::size_t>(7, static_cast<std::size_t>((d.z + 1.0) * 4.0));
    double az = std::atan2(d.y, d.x);
    if (az < 0.0) az += kTwoPi;
    const auto sector = std::min<std::size_t>(5, static_cast<std::size_t>(az / kTwoPi * 6.0));
    return band * 6 + sector;
}

}  // namespace

TEST(SampleBpp, EmptyShell) {
    Rng rng = make_stream(1, 0);
    EXPECT_TRUE(sample_bpp(leo(0), rng).empty());
}

TEST(SampleBpp, CountNormsAndZeroMeanZ) {
    Rng rng = make_stream(7, 0);
    const auto pts = sample_bpp(leo(2000), rng);
    ASSERT_EQ(pts.size(), 2000u);
    double mean_z = 0.0;
    for (const auto& p : pts) {
        EXPECT_NEAR(p.unit_direction.norm(), 1.0, 1e-12);
        mean_z += p.position_km().z;
    }
    mean_z /= 2000.0;
    // Var of z on a uniform sphere is R^2 / 3.
    EXPECT_LT(std::abs(mean_z), 3.0 * (kEarthRadiusKm + 1000.0) / std::sqrt(3.0 * 2000.0));
}

TEST(SampleBpp, CapFractionMatchesArea) {
    const double theta = 0.4;
    const double expected = (1.0 - std::cos(theta)) / 2.0;
    std::size_t inside = 0, total = 0;
    for (std::uint64_t t = 0; t < 100; ++t) {
        Rng rng = make_stream(11, t);
        for (const auto& p : sample_bpp(leo(2000), rng)) {
            inside += central_angle_to_target(p, kTargetDirection) <= theta;
            ++total;
        }
    }
    const double frac = static_cast<double>(inside) / total;
    EXPECT_NEAR(frac, expected, 4.0 * std::sqrt(expected * (1 - expected) / total));
}

TEST(SampleBpp, Deterministic) {
    Rng a = make_stream(99, 5), b = make_stream(99, 5);
    const auto pa = sample_bpp(leo(50), a);
    const auto pb = sample_bpp(leo(50), b);
    for (std::size_t i = 0; i < pa.size(); ++i) EXPECT_TRUE(pa[i].unit_direction == pb[i].unit_direction);
    Rng c = make_stream(99, 6);
    EXPECT_FALSE(sample_bpp(leo(50), c)[0].unit_direction == pa[0].unit_direction);
}

TEST(SampleBpp, CapCountsRotationInvariant) {
    // Counts in a cap around the pole vs. around a fixed random direction.
    const Vec3 other = Vec3{0.3, -0.5, 0.81}.normalized();
    const double theta = 0.2;
    std::vector<double> pole, rand_dir;
    for (std::uint64_t t = 0; t < 3000; ++t) {
        Rng rng = make_stream(3, t);
        const auto pts = sample_bpp(leo(500), rng);
        double a = 0, b = 0;
        for (const auto& p : pts) {
            a += central_angle_to_target(p, {0.0, 0.0, 1.0}) <= theta;
            b += central_angle_to_target(p, other) <= theta;
        }
        pole.push_back(a);
        rand_dir.push_back(b);
    }
    const double d = teststats::ks_two_sample(pole, rand_dir);
    EXPECT_GT(teststats::ks_two_sample_pvalue(d, pole.size(), rand_dir.size()), 0.01);
}

TEST(SampleDsbpp, CountsAndNorms) {
    Rng rng = make_stream(1, 0);
    const auto s = sample_dsbpp(meo(3, 7), rng);
    ASSERT_EQ(s.satellites.size(), 21u);
    ASSERT_EQ(s.orbits.size(), 3u);
    for (const auto& p : s.satellites) EXPECT_NEAR(p.position_km().norm(), 26371.0, 1e-9 * 26371.0);
    Rng rng2 = make_stream(1, 0);
    EXPECT_TRUE(sample_dsbpp(meo(0, 5), rng2).satellites.empty());
}

TEST(SampleDsbpp, OrbitsAreCoplanar) {
    for (std::uint64_t t = 0; t < 50; ++t) {
        Rng rng = make_stream(8, t);
        const auto s = sample_dsbpp(meo(4, 6), rng);
        for (std::size_t o = 0; o < 4; ++o) {
            const Vec3 a = s.satellites[o * 6].position_km();
            const Vec3 b = s.satellites[o * 6 + 1].position_km();
            const Vec3 n = cross(a, b).normalized();
            for (std::size_t j = 2; j < 6; ++j)
                EXPECT_LT(std::abs(dot(n, s.satellites[o * 6 + j].position_km())), 1e-9 * 26371.0);
        }
    }
}

TEST(SampleDsbpp, SinglePointIsUniformOnTheSphere) {
    std::vector<double> counts(48, 0.0);
    const int n = 100000;
    for (int t = 0; t < n; ++t) {
        Rng rng = make_stream(21, static_cast<std::uint64_t>(t));
        const auto s = sample_dsbpp(meo(1, 1), rng);
        counts[equal_area_bin(s.satellites[0].unit_direction)] += 1.0;
    }
    const std::vector<double> expected(48, n / 48.0);
    EXPECT_GT(teststats::chi_square_pvalue(counts, expected), 0.01);
}

TEST(SampleDsbpp, InclinationDensityIsHalfSine) {
    std::vector<double> incl;
    for (std::uint64_t t = 0; t < 20000; ++t) {
        Rng rng = make_stream(4, t);
        incl.push_back(sample_dsbpp(meo(1, 1), rng).orbits[0].inclination);
    }
    const double d = teststats::ks_statistic(incl, [](double x) { return (1.0 - std::cos(x)) / 2.0; });
    EXPECT_GT(teststats::ks_pvalue(d, incl.size()), 0.01);
}

TEST(CentralAngleToTarget, TrivialCases) {
    EXPECT_DOUBLE_EQ(central_angle_to_target({{1.0, 0.0, 0.0}, 7000.0}, {1.0, 0.0, 0.0}), 0.0);
    EXPECT_DOUBLE_EQ(central_angle_to_target({{-1.0, 0.0, 0.0}, 7000.0}, {1.0, 0.0, 0.0}), kPi);
    EXPECT_NEAR(central_angle_to_target({{0.0, 1.0, 0.0}, 7000.0}, {1.0, 0.0, 0.0}), 0.5 * kPi, 1e-15);
    // Dot products just past 1 from rounding are clamped.
    EXPECT_DOUBLE_EQ(central_angle_to_target({{1.0 + 1e-16, 0.0, 0.0}, 7000.0}, {1.0, 0.0, 0.0}), 0.0);
}
