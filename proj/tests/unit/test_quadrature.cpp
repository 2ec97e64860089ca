#include <cmath>
#include <vector>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include "constelsim/analytic.hpp"
#include "constelsim/quadrature.hpp"

using namespace constelsim;

TEST(Quadrature, SmoothIntegrandsMatchBoost) {
    auto f1 = [](double x) { return std::exp(-x * x) * std::cos(3.0 * x); };
    auto f2 = [](double x) { return std::sqrt(x) * std::log1p(x); };
    auto f3 = [](double x) { return 1.0 / (1.0 + 100.0 * (x - 0.3) * (x - 0.3)); };
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    EXPECT_NEAR(quad::integrate(f1, -2.0, 3.0), GK::integrate(f1, -2.0, 3.0, 15, 1e-14), 1e-10);
    boost::math::quadrature::tanh_sinh<double> ts;
    EXPECT_NEAR(quad::integrate(f2, 0.0, 2.0), ts.integrate(f2, 0.0, 2.0, 1e-14), 1e-8);
    EXPECT_NEAR(quad::integrate(f3, 0.0, 1.0), GK::integrate(f3, 0.0, 1.0, 15, 1e-14), 1e-10);
}

TEST(Quadrature, EmptyAndReversedIntervals) {
    auto f = [](double x) { return x * x; };
    EXPECT_EQ(quad::integrate(f, 1.0, 1.0), 0.0);
    EXPECT_NEAR(quad::integrate(f, 1.0, 0.0), -1.0 / 3.0, 1e-14);
}

TEST(Quadrature, VectorIntegrandIntegratesComponentwise) {
    auto f = [](double x) { return std::vector<double>{std::sin(x), x * x, std::exp(x)}; };
    const auto r = quad::integrate_adaptive(f, 0.0, 1.0);
    ASSERT_EQ(r.value.size(), 3u);
    EXPECT_NEAR(r.value[0], 1.0 - std::cos(1.0), 1e-13);
    EXPECT_NEAR(r.value[1], 1.0 / 3.0, 1e-13);
    EXPECT_NEAR(r.value[2], std::exp(1.0) - 1.0, 1e-13);
}

TEST(Quadrature, ReportsNonConvergenceWithErrorEstimate) {
    auto f = [](double x) { return std::sin(1.0 / x); };
    quad::QuadratureSpec spec{1e-14, 1e-16, 3};
    try {
        quad::integrate(f, 1e-6, 1.0, spec, "oscillating");
        FAIL() << "expected QuadratureError";
    } catch (const quad::QuadratureError& e) {
        EXPECT_GT(e.achieved_error(), 0.0);
        EXPECT_NE(std::string(e.what()).find("oscillating"), std::string::npos);
    }
}

TEST(QuadratureSpec, ValidatesAndTightens) {
    EXPECT_THROW((quad::QuadratureSpec{0.0, 1e-12, 10}.validate()), std::invalid_argument);
    EXPECT_THROW((quad::QuadratureSpec{1e-8, 1e-12, 0}.validate()), std::invalid_argument);
    const auto t = quad::QuadratureSpec{}.tightened(10.0);
    EXPECT_DOUBLE_EQ(t.relative_tolerance, 1e-9);
    EXPECT_DOUBLE_EQ(t.absolute_tolerance, 1e-13);
}

// log-gamma at n = 2000 costs a few 1e-12 of relative accuracy.
TEST(Binomial, PmfAndTailMatchBoost) {
    for (std::size_t n : {1u, 12u, 100u, 2000u}) {
        for (double p : {0.001087423, 0.05, 0.3792044, 0.9}) {
            const boost::math::binomial_distribution<double> b(static_cast<double>(n), p);
            for (std::size_t k : {0u, 1u, 3u, 6u, 11u}) {
                if (k > n) continue;
                EXPECT_NEAR(analytic::binomial_pmf(n, k, p), boost::math::pdf(b, static_cast<double>(k)), 1e-11);
                const double tail = k == 0 ? 1.0 : boost::math::cdf(boost::math::complement(b, static_cast<double>(k) - 1.0));
                EXPECT_NEAR(analytic::binomial_tail(n, k, p), tail, 1e-11) << n << " " << p << " " << k;
            }
        }
    }
}

TEST(Binomial, EdgeCases) {
    EXPECT_EQ(analytic::binomial_tail(5, 0, 0.3), 1.0);
    EXPECT_EQ(analytic::binomial_tail(5, 6, 0.3), 0.0);
    EXPECT_EQ(analytic::binomial_pmf(5, 0, 0.0), 1.0);
    EXPECT_EQ(analytic::binomial_pmf(5, 5, 1.0), 1.0);
    EXPECT_EQ(analytic::binomial_pmf(5, 2, 0.0), 0.0);
    EXPECT_NEAR(analytic::log_choose(2000, 6), std::log(2000.0 * 1999 * 1998 * 1997 * 1996 * 1995 / 720.0), 1e-10);
}
