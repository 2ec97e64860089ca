#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature.
//
// Works for scalar integrands and for vector-valued ones (std::vector<double>)
// so that several integrals sharing one expensive factor are evaluated on the
// same nodes. Error estimates follow the QUADPACK qk15 heuristic.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

namespace constelsim::quad {

struct QuadratureSpec {
    double relative_tolerance = 1e-8;
    double absolute_tolerance = 1e-12;
    int max_subdivisions = 200;

    void validate() const {
        if (!(relative_tolerance > 0.0) || !(absolute_tolerance > 0.0))
            throw std::invalid_argument("quadrature tolerances must be positive");
        if (max_subdivisions < 1) throw std::invalid_argument("max_subdivisions must be at least 1");
    }

    /// Same spec with both tolerances divided by `factor`.
    QuadratureSpec tightened(double factor) const {
        return {relative_tolerance / factor, absolute_tolerance / factor, max_subdivisions};
    }
};

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(std::string_view context, double achieved_error, double estimate)
        : std::runtime_error(std::string(context.empty() ? "integral" : context) +
                             ": quadrature did not converge (achieved error " + std::to_string(achieved_error) +
                             ", estimate " + std::to_string(estimate) + ")"),
          achieved_error_(achieved_error),
          estimate_(estimate) {}

    double achieved_error() const { return achieved_error_; }
    double estimate() const { return estimate_; }

private:
    double achieved_error_;
    double estimate_;
};

template <class T>
struct QuadratureResult {
    T value{};
    double error = 0.0;
    int subdivisions = 0;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kKronrodWeights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for Kronrod nodes 1, 3, 5 and the centre.
inline constexpr std::array<double, 4> kGaussWeights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780, 0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

// Minimal arithmetic over the two supported value types.
inline std::size_t dim(double) { return 1; }
inline std::size_t dim(const std::vector<double>& v) { return v.size(); }
inline double& at(double& v, std::size_t) { return v; }
inline double at(const double& v, std::size_t) { return v; }
inline double& at(std::vector<double>& v, std::size_t i) { return v[i]; }
inline double at(const std::vector<double>& v, std::size_t i) { return v[i]; }
inline double zero_like(double) { return 0.0; }
inline std::vector<double> zero_like(const std::vector<double>& v) { return std::vector<double>(v.size(), 0.0); }

template <class T>
struct Interval {
    double a = 0.0;
    double b = 0.0;
    T value{};
    double error = 0.0;
};

template <class T, class F>
Interval<T> kronrod15(F& f, double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    T fc = f(centre);
    const std::size_t n = dim(fc);
    T kronrod = zero_like(fc), gauss = zero_like(fc), abs_sum = zero_like(fc);
    std::array<T, 7> f1, f2;

    for (std::size_t i = 0; i < n; ++i) {
        at(kronrod, i) = at(fc, i) * kKronrodWeights[7];
        at(gauss, i) = at(fc, i) * kGaussWeights[3];
        at(abs_sum, i) = std::abs(at(fc, i)) * kKronrodWeights[7];
    }
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kKronrodNodes[j];
        f1[j] = f(centre - dx);
        f2[j] = f(centre + dx);
        for (std::size_t i = 0; i < n; ++i) {
            const double lo = at(f1[j], i), hi = at(f2[j], i);
            at(kronrod, i) += kKronrodWeights[j] * (lo + hi);
            at(abs_sum, i) += kKronrodWeights[j] * (std::abs(lo) + std::abs(hi));
            if (j % 2 == 1) at(gauss, i) += kGaussWeights[j / 2] * (lo + hi);
        }
    }

    Interval<T> out{a, b, zero_like(fc), 0.0};
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double tiny = std::numeric_limits<double>::min();
    for (std::size_t i = 0; i < n; ++i) {
        const double mean = 0.5 * at(kronrod, i);
        double resasc = kKronrodWeights[7] * std::abs(at(fc, i) - mean);
        for (std::size_t j = 0; j < 7; ++j)
            resasc += kKronrodWeights[j] * (std::abs(at(f1[j], i) - mean) + std::abs(at(f2[j], i) - mean));
        resasc *= std::abs(half);
        const double resabs = at(abs_sum, i) * std::abs(half);
        double err = std::abs((at(kronrod, i) - at(gauss, i)) * half);
        if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
        if (resabs > tiny / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
        at(out.value, i) = at(kronrod, i) * half;
        out.error = std::max(out.error, err);
    }
    return out;
}

template <class T>
double norm(const T& v) {
    double m = 0.0;
    for (std::size_t i = 0; i < dim(v); ++i) m = std::max(m, std::abs(at(v, i)));
    return m;
}

}  // namespace detail

/// Integrates f over [a, b]. f returns double or std::vector<double> (of a
/// fixed length). Throws QuadratureError when the tolerance cannot be met
/// within spec.max_subdivisions intervals.
template <class F>
auto integrate_adaptive(F&& f, double a, double b, const QuadratureSpec& spec = {}, std::string_view context = {}) {
    using T = std::decay_t<std::invoke_result_t<F&, double>>;
    static_assert(std::is_same_v<T, double> || std::is_same_v<T, std::vector<double>>,
                  "integrand must return double or std::vector<double>");
    QuadratureResult<T> result;
    if (a == b) {
        result.value = detail::zero_like(f(a));
        return result;
    }

    using Interval = detail::Interval<T>;
    auto by_error = [](const Interval& l, const Interval& r) { return l.error < r.error; };
    std::vector<Interval> heap;
    heap.reserve(static_cast<std::size_t>(spec.max_subdivisions) + 1);
    heap.push_back(detail::kronrod15<T>(f, a, b));

    auto total = [&heap]() {
        T sum = detail::zero_like(heap.front().value);
        double err = 0.0;
        for (const auto& iv : heap) {
            for (std::size_t i = 0; i < detail::dim(sum); ++i) detail::at(sum, i) += detail::at(iv.value, i);
            err += iv.error;
        }
        return std::pair<T, double>{std::move(sum), err};
    };

    auto [value, error] = total();
    int splits = 0;
    while (error > std::max(spec.absolute_tolerance, spec.relative_tolerance * detail::norm(value))) {
        if (splits >= spec.max_subdivisions) throw QuadratureError(context, error, detail::norm(value));
        std::pop_heap(heap.begin(), heap.end(), by_error);
        const Interval worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) throw QuadratureError(context, error, detail::norm(value));
        heap.push_back(detail::kronrod15<T>(f, worst.a, mid));
        std::push_heap(heap.begin(), heap.end(), by_error);
        heap.push_back(detail::kronrod15<T>(f, mid, worst.b));
        std::push_heap(heap.begin(), heap.end(), by_error);
        ++splits;
        std::tie(value, error) = total();
    }
    result.value = std::move(value);
    result.error = error;
    result.subdivisions = splits;
    return result;
}

/// Scalar convenience wrapper returning only the value.
template <class F>
double integrate(F&& f, double a, double b, const QuadratureSpec& spec = {}, std::string_view context = {}) {
    return integrate_adaptive(std::forward<F>(f), a, b, spec, context).value;
}

}  // namespace constelsim::quad
