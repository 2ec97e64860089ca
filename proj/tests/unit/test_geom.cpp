#include <cmath>
#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "constelsim/geom.hpp"
#include "constelsim/units.hpp"
#include "geometry_oracle.hpp"

using namespace constelsim;
using geom::SphereGeometry;

namespace {

const SphereGeometry kLeo{kEarthRadiusKm, 7371.0};
const SphereGeometry kMeo{kEarthRadiusKm, 26371.0};

}  // namespace

TEST(MaxCentralAngle, SurfaceShellCollapsesToZero) {
    const SphereGeometry flat{kEarthRadiusKm, kEarthRadiusKm};
    for (double beam : {0.1, kPi / 4.0, 3.0, 6.0}) EXPECT_NEAR(geom::max_central_angle(flat, beam), 0.0, 1e-15);
}

TEST(MaxCentralAngle, MeoDefaultIsHorizonLimited) {
    const double oracle = geomoracle::max_central_by_bisection(kEarthRadiusKm, 26371.0, kPi / 6.0);
    const double got = geom::max_central_angle(kMeo, kPi / 6.0);
    EXPECT_NEAR(got, oracle, 1e-9);
    EXPECT_NEAR(got, std::acos(6371.0 / 26371.0), 1e-12);
    EXPECT_NEAR(got, 1.3268, 1e-4);
}

TEST(MaxCentralAngle, LeoDefaultIsBeamLimited) {
    const double oracle = geomoracle::max_central_by_bisection(kEarthRadiusKm, 7371.0, kPi / 4.0);
    const double got = geom::max_central_angle(kLeo, kPi / 4.0);
    EXPECT_NEAR(got, oracle, 1e-9);
    EXPECT_LT(got, geom::horizon_central_angle(kLeo));
    // Frozen from the bisection oracle.
    EXPECT_NEAR(got, 0.0659641, 1e-7);
}

TEST(MaxCentralAngle, MatchesBisectionOracleAcrossBeamsAndShells) {
    for (double rq : {6500.0, 7371.0, 8371.0, 12000.0, 26371.0}) {
        for (double beam : {0.05, 0.3, kPi / 4.0, kPi / 2.0, 2.5, 4.0}) {
            const double oracle = geomoracle::max_central_by_bisection(kEarthRadiusKm, rq, beam);
            EXPECT_NEAR(geom::max_central_angle({kEarthRadiusKm, rq}, beam), oracle, 1e-9) << rq << " " << beam;
        }
    }
}

TEST(MaxCentralAngle, ContinuousAtBranchBoundary) {
    const double edge = 2.0 * std::asin(kLeo.radius_ratio());
    const double at = geom::max_central_angle(kLeo, edge);
    EXPECT_NEAR(at, geom::horizon_central_angle(kLeo), 1e-15);
    // The beam branch meets the horizon with a square-root cusp, so the gap
    // shrinks like sqrt(eps).
    double prev_gap = 1.0;
    for (double eps : {1e-4, 1e-6, 1e-8, 1e-10, 1e-12}) {
        const double gap = at - geom::max_central_angle(kLeo, edge * (1.0 - eps));
        EXPECT_GE(gap, 0.0);
        EXPECT_LT(gap, prev_gap);
        EXPECT_LT(gap, 2.0 * std::sqrt(eps));
        prev_gap = gap;
    }
}

TEST(MaxCentralAngle, MonotoneInBeamAndRadius) {
    double prev = 0.0;
    for (double beam = 0.01; beam < 6.2; beam += 0.01) {
        const double v = geom::max_central_angle(kLeo, beam);
        EXPECT_GE(v, prev - 1e-15);
        prev = v;
    }
    prev = 0.0;
    for (double rq = 6400.0; rq < 40000.0; rq += 100.0) {
        const double v = geom::max_central_angle({kEarthRadiusKm, rq}, kPi / 4.0);
        EXPECT_GE(v, prev - 1e-15);
        prev = v;
    }
}

TEST(MaxCentralAngle, RejectsBadInputs) {
    EXPECT_THROW(geom::max_central_angle(kLeo, 0.0), std::invalid_argument);
    EXPECT_THROW(geom::max_central_angle(kLeo, -1.0), std::invalid_argument);
    EXPECT_THROW(geom::max_central_angle(kLeo, kTwoPi), std::invalid_argument);
    EXPECT_THROW(geom::max_central_angle(kLeo, std::nan("")), std::invalid_argument);
    EXPECT_THROW(geom::max_central_angle({kEarthRadiusKm, 6000.0}, 1.0), std::invalid_argument);
}

TEST(Visibility, AnalyticAgreesWithBruteForceOnRandomPairs) {
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (double rq : {7371.0, 26371.0}) {
        for (double beam : {kPi / 4.0, kPi / 6.0}) {
            const double theta_max = geom::max_central_angle({kEarthRadiusKm, rq}, beam);
            int mismatches = 0;
            for (int i = 0; i < 1000; ++i) {
                auto dir = [&] {
                    const double z = 1.0 - 2.0 * u(gen), az = kTwoPi * u(gen), s = std::sqrt(1.0 - z * z);
                    return Vec3{s * std::cos(az), s * std::sin(az), z};
                };
                // Half the pairs concentrated near the boundary.
                const Vec3 t = dir();
                Vec3 s = dir();
                if (i % 2 == 0) {
                    const Vec3 w = cross(t, s).normalized();
                    const Vec3 perp = cross(w, t);
                    const double th = theta_max * (0.9 + 0.2 * u(gen));
                    s = t * std::cos(th) + perp * std::sin(th);
                }
                const double central = std::acos(std::clamp(dot(t, s), -1.0, 1.0));
                if (std::abs(central - theta_max) < 1e-12) continue;
                const bool analytic = central <= theta_max;
                const bool brute = geomoracle::visible(t * kEarthRadiusKm, s * rq, beam);
                mismatches += analytic != brute;
            }
            EXPECT_EQ(mismatches, 0) << rq << " " << beam;
        }
    }
}

TEST(MaxDetectDistance, Endpoints) {
    EXPECT_NEAR(geom::max_detect_distance(kMeo, 0.0), 20000.0, 1e-9);
    EXPECT_NEAR(geom::max_detect_distance(kMeo, kPi), 26371.0 + 6371.0, 1e-9);
}

TEST(MaxDetectDistance, MatchesExplicitPoints) {
    const double th = 1.3268;
    const Vec3 t{kEarthRadiusKm, 0.0, 0.0};
    const Vec3 s{26371.0 * std::cos(th), 26371.0 * std::sin(th), 0.0};
    EXPECT_NEAR(geom::max_detect_distance(kMeo, th), (s - t).norm(), 1e-8);
    EXPECT_NEAR(geom::max_detect_distance(kMeo, th), 25590.0, 5.0);
}

TEST(MaxOrbitCentralAngle, ZeroAtCriticalBoundaryAndPoleFacing) {
    const double d = geom::max_detect_distance(kMeo, geom::max_central_angle(kMeo, kPi / 6.0));
    const double critical = std::acos(geom::central_cosine_at_distance(kMeo, d));
    EXPECT_NEAR(geom::max_orbit_central_angle(kMeo, 0.5 * kPi - critical, d), 0.0, 1e-6);
    EXPECT_NEAR(geom::max_orbit_central_angle(kMeo, 0.5 * kPi + critical, d), 0.0, 1e-6);
    EXPECT_EQ(geom::max_orbit_central_angle(kMeo, 0.0, d), 0.0);
    EXPECT_EQ(geom::max_orbit_central_angle(kMeo, kPi, d), 0.0);
}

TEST(MaxOrbitCentralAngle, PolarOrbitGivesTwiceTheCap) {
    const double theta_max = geom::max_central_angle(kMeo, kPi / 6.0);
    const double d = geom::max_detect_distance(kMeo, theta_max);
    EXPECT_NEAR(geom::max_orbit_central_angle(kMeo, 0.5 * kPi, d), 2.0 * theta_max, 1e-9);
    EXPECT_NEAR(geomoracle::arc_within_distance(kEarthRadiusKm, 26371.0, 0.5 * kPi, d), 2.0 * theta_max, 1e-5);
}

TEST(MaxOrbitCentralAngle, MatchesArcScanOracle) {
    const double d = geom::max_detect_distance(kMeo, geom::max_central_angle(kMeo, kPi / 6.0));
    for (double incl : {0.3, 0.5, 0.8, 1.0, 1.3, 1.5, 1.8, 2.4, 2.9}) {
        const double oracle = geomoracle::arc_within_distance(kEarthRadiusKm, 26371.0, incl, d);
        EXPECT_NEAR(geom::max_orbit_central_angle(kMeo, incl, d), oracle, 1e-5) << incl;
    }
}

TEST(MaxOrbitCentralAngle, PolarOrbitDominates) {
    const double d = 15000.0;
    const double polar = geom::max_orbit_central_angle(kMeo, 0.5 * kPi, d);
    for (double incl = 0.0; incl <= kPi; incl += 0.01) EXPECT_LE(geom::max_orbit_central_angle(kMeo, incl, d), polar + 1e-12);
}

TEST(MaxOrbitCentralAngle, RejectsInconsistentDistance) {
    EXPECT_THROW(geom::max_orbit_central_angle(kMeo, 1.0, 26371.0 + 6371.0 + 1.0), std::domain_error);
    EXPECT_THROW(geom::max_orbit_central_angle(kMeo, -0.1, 1000.0), std::invalid_argument);
    EXPECT_THROW(geom::max_orbit_central_angle(kMeo, 1.0, 0.0), std::invalid_argument);
}

TEST(DomeFromCentral, SmallAngleLimit) {
    const double d = geom::dome_from_central(kLeo, 1e-6);
    EXPECT_GT(d, 0.0);
    EXPECT_LT(d, 1e-4);
    EXPECT_THROW(geom::dome_from_central(kLeo, 0.0), std::invalid_argument);
}

TEST(DomeFromCentral, MatchesThreeDimensionalConstruction) {
    EXPECT_NEAR(geom::dome_from_central(kLeo, 0.0597), geomoracle::dome_by_construction(kEarthRadiusKm, 7371.0, 0.0597),
                1e-9);
    // 0.0597 is the rounded value of the central angle whose dome is 3 x 8 deg.
    EXPECT_NEAR(geom::dome_from_central(kLeo, 0.0596464), 0.4189, 1e-4);
    EXPECT_NEAR(geom::dome_from_central(kLeo, 0.0597), 0.4189, 5e-4);
    for (double c : {1e-4, 0.01, 0.1, 0.3, 0.5}) {
        EXPECT_NEAR(geom::dome_from_central(kLeo, c), geomoracle::dome_by_construction(kEarthRadiusKm, 7371.0, c), 1e-9);
    }
}

TEST(DomeFromCentral, StrictlyIncreasing) {
    double prev = 0.0;
    const double top = geom::horizon_central_angle(kLeo);
    for (int i = 1; i <= 1000; ++i) {
        const double v = geom::dome_from_central(kLeo, top * i / 1000.0);
        EXPECT_GT(v, prev);
        prev = v;
    }
}

TEST(CentralFromDome, MatchesBisectionOfConstruction) {
    const double dome = 3.0 * deg_to_rad(8.0);
    double lo = 1e-12, hi = geom::horizon_central_angle(kLeo);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (geomoracle::dome_by_construction(kEarthRadiusKm, 7371.0, mid) < dome ? lo : hi) = mid;
    }
    EXPECT_NEAR(geom::central_from_dome(kLeo, dome), lo, 1e-10);
    EXPECT_NEAR(geom::central_from_dome(kLeo, dome), 0.0596464, 1e-7);
}

TEST(CentralFromDome, LimitsAndErrors) {
    EXPECT_LT(geom::central_from_dome(kLeo, 1e-9), 1e-9);
    EXPECT_THROW(geom::central_from_dome({kEarthRadiusKm, kEarthRadiusKm}, 0.2), std::invalid_argument);
    EXPECT_THROW(geom::central_from_dome(kLeo, 0.0), std::invalid_argument);
    EXPECT_THROW(geom::central_from_dome(kLeo, 0.5 * kPi), std::invalid_argument);
}

TEST(DomeCentral, RoundTrips) {
    for (double c = 1e-4; c < geom::horizon_central_angle(kLeo); c += 0.001)
        EXPECT_NEAR(geom::central_from_dome(kLeo, geom::dome_from_central(kLeo, c)), c, 1e-10);
    for (double phi = 1e-3; phi < 0.5 * kPi; phi += 0.001)
        EXPECT_NEAR(geom::dome_from_central(kLeo, geom::central_from_dome(kLeo, phi)), phi, 1e-10);
}
