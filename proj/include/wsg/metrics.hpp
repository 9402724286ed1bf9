#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "wsg/design.hpp"
#include "wsg/errors.hpp"
#include "wsg/types.hpp"
#include "wsg/weights.hpp"

namespace wsg {

/// Output-to-input noise variance ratio, c^T c.
template <typename Derived>
typename Derived::Scalar error_reduction_ratio(const Eigen::MatrixBase<Derived>& c) {
    return c.squaredNorm();
}

template <typename Scalar>
Scalar error_reduction_ratio(const FilterCoefficients<Scalar>& c) {
    return error_reduction_ratio(c.taps);
}

/// s as half the zero-padded sum of squared successive tap differences.
template <typename Derived>
typename Derived::Scalar smoothing_parameter_difference_sum(const Eigen::MatrixBase<Derived>& c) {
    using Scalar = typename Derived::Scalar;
    const Eigen::Index q = c.size();
    Scalar prev(0);
    Scalar acc(0);
    for (Eigen::Index i = 0; i < q; ++i) {
        const Scalar d = c[i] - prev;
        acc += d * d;
        prev = c[i];
    }
    acc += prev * prev;
    return acc / Scalar(2);
}

/// s as the quadratic form c^T T c / 2 with an explicit T.
template <typename Derived>
typename Derived::Scalar smoothing_parameter_quadratic_form(const Eigen::MatrixBase<Derived>& c) {
    using Scalar = typename Derived::Scalar;
    const Matrix<Scalar> t = SecondDifference<Scalar>(static_cast<int>(c.size())).dense();
    return c.dot(t * c) / Scalar(2);
}

/// Successive-difference variance ratio s. Both formulations are evaluated and
/// must agree to 1e-12 relative to the tap energy.
template <typename Derived>
typename Derived::Scalar smoothing_parameter(const Eigen::MatrixBase<Derived>& c) {
    using Scalar = typename Derived::Scalar;
    using std::abs;
    const Scalar by_sum = smoothing_parameter_difference_sum(c);
    const Scalar by_form = smoothing_parameter_quadratic_form(c);
    const Scalar scale = std::max(Scalar(1), c.squaredNorm());
    if (abs(by_sum - by_form) > Scalar(1e-12) * scale)
        throw std::logic_error("smoothing parameter formulations disagree");
    return by_sum;
}

template <typename Scalar>
Scalar smoothing_parameter(const FilterCoefficients<Scalar>& c) {
    return smoothing_parameter(c.taps);
}

/// r and s of the degree-0 filters: moving average (0) and quadratic weights (2).
template <typename Scalar = double>
struct ClosedForms {
    Scalar r0, s0, r2, s2;
};

template <typename Scalar = double>
ClosedForms<Scalar> closed_forms(int q) {
    detail::require_window(q);
    const Scalar qq(q);
    const Scalar cubic = qq * (qq + 1) * (qq + 2);
    return {Scalar(1) / qq, Scalar(1) / (qq * qq),
            Scalar(6) / Scalar(5) * ((qq + 1) * (qq + 1) + 1) / cubic, Scalar(6) / cubic};
}

/// Approximate constant-vs-optimal ratios for a centered fit with n even-power
/// columns in a window whose middle index is m.
template <typename Scalar = double>
struct RatioApproximations {
    Scalar r0_over_r2, s0_over_s2, s0_over_s1;
};

template <typename Scalar = double>
RatioApproximations<Scalar> ratio_approximations(int m, int n) {
    if (n < 1) throw InvalidArgument("basis size n must be >= 1");
    if (m < n) throw InvalidArgument("center index m must be >= basis size n");
    const Scalar gap = Scalar(1) - Scalar(n) / Scalar(m);
    const Scalar gap2 = gap * gap;
    const Scalar nn(n);
    const Scalar r_ratio = Scalar(1) - gap2 / (Scalar(2) * (Scalar(2) * nn + Scalar(1)));
    const Scalar s2_ratio = Scalar(1) + Scalar(3 * m) * gap2 / ((2 * nn + 1) * (2 * nn + 1));
    const Scalar s1_ratio = Scalar(1) + Scalar(3 * m) * gap2 / ((2 * nn + Scalar(1.5)) * (2 * nn + Scalar(1.5)));
    return {r_ratio, s2_ratio, s1_ratio};
}

/// Large-q approximations for the degree-0 case, expressed in q.
template <typename Scalar = double>
struct DegreeZeroApproximations {
    Scalar r0_over_r2, s0_over_s2;
};

template <typename Scalar = double>
DegreeZeroApproximations<Scalar> degree_zero_approximations(int q) {
    detail::require_window(q);
    const Scalar qq(q);
    return {Scalar(5) / Scalar(6) * (Scalar(1) + Scalar(1) / qq), qq / Scalar(6) * (Scalar(1) + Scalar(3) / qq)};
}

/// Exact ratios obtained by designing the constant (0), triangular (1) and
/// quadratic (2) weighted filters and dividing their metrics.
template <typename Scalar = double>
struct ExactRatios {
    Scalar r0_over_r2, s0_over_s2, r0_over_r1, s0_over_s1;
};

template <typename Scalar = double>
ExactRatios<Scalar> exact_ratios(int q, int degree) {
    const auto constant = design_coefficients(FilterSpec<Scalar>(q, degree, constant_weights<Scalar>(q)));
    const auto triangular = design_coefficients(FilterSpec<Scalar>(q, degree, triangular_weights<Scalar>(q)));
    const auto quadratic = design_coefficients(FilterSpec<Scalar>(q, degree, quadratic_weights<Scalar>(q)));
    const Scalar r0 = error_reduction_ratio(constant), s0 = smoothing_parameter(constant);
    return {r0 / error_reduction_ratio(quadratic), s0 / smoothing_parameter(quadratic),
            r0 / error_reduction_ratio(triangular), s0 / smoothing_parameter(triangular)};
}

/// r and s of a designed filter plus the reference formulas that apply to it.
template <typename Scalar = double>
struct MetricsReport {
    Scalar r;
    Scalar s;
    int q;
    int n;
    int m;
    std::optional<ClosedForms<Scalar>> closed;           // degree-0 fits
    std::optional<DegreeZeroApproximations<Scalar>> degree_zero;
    std::optional<RatioApproximations<Scalar>> approx;   // centered fits
};

template <typename Scalar>
MetricsReport<Scalar> metrics_report(const FilterCoefficients<Scalar>& c) {
    const FilterSpec<Scalar>& spec = c.spec;
    MetricsReport<Scalar> report{error_reduction_ratio(c), smoothing_parameter(c), spec.window(),
                                 spec.basis_size(),        spec.center(),          {}, {}, {}};
    if (spec.canonical_degree() == 0) {
        report.closed = closed_forms<Scalar>(spec.window());
        report.degree_zero = degree_zero_approximations<Scalar>(spec.window());
    }
    if (spec.centered()) report.approx = ratio_approximations<Scalar>(report.m, report.n);
    return report;
}

template <typename Scalar = double>
struct FrequencyPoint {
    Scalar omega;
    Scalar magnitude;
};

/// |sum_k c_k e^{-i omega k}| on num_points equally spaced omega in [0, pi],
/// both endpoints included.
template <typename Derived>
std::vector<FrequencyPoint<typename Derived::Scalar>> frequency_response(const Eigen::MatrixBase<Derived>& c,
                                                                         int num_points) {
    using Scalar = typename Derived::Scalar;
    if (num_points < 2) throw InvalidArgument("frequency grid needs at least 2 points");
    std::vector<FrequencyPoint<Scalar>> out;
    out.reserve(num_points);
    const Scalar pi = std::numbers::pi_v<Scalar>;
    for (int p = 0; p < num_points; ++p) {
        const Scalar omega = pi * Scalar(p) / Scalar(num_points - 1);
        std::complex<Scalar> h(0);
        for (Eigen::Index k = 0; k < c.size(); ++k) h += c[k] * std::polar(Scalar(1), -omega * Scalar(k));
        out.push_back({omega, std::abs(h)});
    }
    return out;
}

template <typename Scalar>
std::vector<FrequencyPoint<Scalar>> frequency_response(const FilterCoefficients<Scalar>& c, int num_points) {
    return frequency_response(c.taps, num_points);
}

/// Largest response magnitude over [lo, hi], sampled on `points` equally spaced
/// frequencies including both band edges.
template <typename Derived>
typename Derived::Scalar max_magnitude_in_band(const Eigen::MatrixBase<Derived>& c, typename Derived::Scalar lo,
                                               typename Derived::Scalar hi, int points = 4096) {
    using Scalar = typename Derived::Scalar;
    if (!(lo <= hi) || points < 2) throw InvalidArgument("invalid frequency band");
    Scalar peak(0);
    for (int p = 0; p < points; ++p) {
        const Scalar omega = lo + (hi - lo) * Scalar(p) / Scalar(points - 1);
        std::complex<Scalar> h(0);
        for (Eigen::Index k = 0; k < c.size(); ++k) h += c[k] * std::polar(Scalar(1), -omega * Scalar(k));
        peak = std::max(peak, std::abs(h));
    }
    return peak;
}

/// Stopband edge used for comparison sweeps: three times the nominal cutoff,
/// which is taken as pi * r.
template <typename Derived>
typename Derived::Scalar default_stopband_edge(const Eigen::MatrixBase<Derived>& c) {
    using Scalar = typename Derived::Scalar;
    return std::min(std::numbers::pi_v<Scalar>, Scalar(3) * std::numbers::pi_v<Scalar> * c.squaredNorm());
}

/// Monte-Carlo estimates of r and s with their delta-method standard errors.
struct EmpiricalRatios {
    double r_hat;
    double s_hat;
    double r_standard_error;
    double s_standard_error;
    std::int64_t sample_count;
};

/// Number of independent noise partitions; fixed so results do not depend on
/// the machine's thread count.
inline constexpr int kMonteCarloPartitions = 8;

/// Filters unit-variance Gaussian noise with c and returns the empirical
/// output-variance ratio and half the output/input successive-difference ratio.
/// Noise comes from std::mt19937_64 through Box-Muller; partition k is seeded
/// with splitmix64(seed + k). sample_count must be at least 10^4.
EmpiricalRatios empirical_ratios(std::span<const double> c, std::int64_t sample_count, std::uint64_t seed);

inline EmpiricalRatios empirical_ratios(const FilterCoefficients<double>& c, std::int64_t sample_count,
                                        std::uint64_t seed) {
    return empirical_ratios(std::span<const double>(c.taps.data(), static_cast<std::size_t>(c.taps.size())),
                            sample_count, seed);
}

/// Large-sample standard errors of r_hat and s_hat for Gaussian input noise.
struct RatioStandardErrors {
    double r;
    double s;
};
RatioStandardErrors ratio_standard_errors(std::span<const double> c, std::int64_t sample_count);

} // namespace wsg
