#include <gtest/gtest.h>

#include <random>

#include "wsg/design.hpp"
#include "wsg/filter.hpp"
#include "wsg/metrics.hpp"

using namespace wsg;

namespace {

FilterCoefficients<double> designed(int q, int d, WeightKind kind, std::optional<int> j = std::nullopt) {
    return design_coefficients(FilterSpec<double>(q, d, weights_of_kind<double>(kind, q), j));
}

SignalSeries<double> series(std::vector<double> v) { return SignalSeries<double>(std::move(v)); }

std::vector<double> noise(std::size_t len, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist;
    std::vector<double> v(len);
    for (double& x : v) x = dist(rng);
    return v;
}

constexpr EdgePolicy kPolicies[] = {EdgePolicy::valid, EdgePolicy::mirror, EdgePolicy::polyfit};

} // namespace

TEST(SignalSeries, RejectsNonFinite) {
    EXPECT_THROW(series({1.0, std::nan(""), 2.0}), InvalidArgument);
    EXPECT_THROW(series({1.0, INFINITY}), InvalidArgument);
    EXPECT_THROW(SignalSeries<double>({1.0, 2.0}, std::vector<double>{0.0}), InvalidArgument);
}

TEST(Smooth, ConstantSignalPassesUnchanged) {
    const auto s = series(std::vector<double>(7, 3.0));
    for (WeightKind kind : {WeightKind::constant, WeightKind::triangular, WeightKind::quadratic})
        for (EdgePolicy edge : kPolicies) {
            const auto out = smooth(s, designed(5, 2, kind), edge);
            EXPECT_EQ(out.size(), edge == EdgePolicy::valid ? 3u : 7u);
            for (double y : out.values()) EXPECT_NEAR(y, 3.0, 1e-14);
        }
}

TEST(Smooth, RampInteriorReproduced) {
    std::vector<double> ramp(10);
    for (int i = 0; i < 10; ++i) ramp[i] = i;
    const auto out = smooth(series(ramp), designed(5, 2, WeightKind::constant), EdgePolicy::valid);
    ASSERT_EQ(out.size(), 6u);
    for (std::size_t t = 0; t < out.size(); ++t) EXPECT_NEAR(out[t], ramp[t + 2], 1e-13);
}

TEST(Smooth, PolyfitReproducesPolynomialsAtEdges) {
    std::vector<double> cubic(12);
    for (int i = 0; i < 12; ++i) cubic[i] = 0.5 - 0.3 * i + 0.02 * i * i * i;
    const auto c = designed(7, 3, WeightKind::triangular);
    const auto out = smooth(series(cubic), c, EdgePolicy::polyfit);
    ASSERT_EQ(out.size(), 12u);
    for (int t = 0; t < 12; ++t) EXPECT_NEAR(out[t], cubic[t], 1e-10) << "t=" << t;
    // Mirror at the edge only reproduces even-symmetric data; check it differs.
    const auto mirrored = smooth(series(cubic), c, EdgePolicy::mirror);
    EXPECT_GT(std::abs(mirrored[0] - cubic[0]), 1e-3);
}

TEST(Smooth, ImpulseResponseIsCoefficientVector) {
    const auto c = designed(5, 0, WeightKind::quadratic);
    const auto out = smooth(series({0, 0, 0, 1, 0, 0, 0}), c, EdgePolicy::valid);
    ASSERT_EQ(out.size(), 3u);
    // The three windows see the impulse at taps 4, 3 and 2.
    EXPECT_NEAR(out[0], 8.0 / 35, 1e-15);
    EXPECT_NEAR(out[1], 9.0 / 35, 1e-15);
    EXPECT_NEAR(out[2], 8.0 / 35, 1e-15);

    // A wider record shows the full (reversed) kernel.
    std::vector<double> impulse(11, 0.0);
    impulse[5] = 1.0;
    const auto c9 = designed(9, 2, WeightKind::triangular);
    const auto full = smooth(series(impulse), c9, EdgePolicy::valid);
    ASSERT_EQ(full.size(), 3u);
    for (int t = 0; t < 3; ++t) EXPECT_DOUBLE_EQ(full[t], c9[5 - t]);
}

TEST(Smooth, InteriorMatchesDotProductForEveryPolicy) {
    const auto y = noise(40, 3);
    const auto c = designed(9, 4, WeightKind::quadratic);
    const auto valid = smooth(series(y), c, EdgePolicy::valid);
    for (EdgePolicy edge : {EdgePolicy::mirror, EdgePolicy::polyfit}) {
        const auto out = smooth(series(y), c, edge);
        for (std::size_t t = 4; t + 4 < y.size(); ++t) EXPECT_EQ(out[t], valid[t - 4]);
    }
    for (std::size_t t = 0; t < valid.size(); ++t) {
        double acc = 0;
        for (int i = 0; i < 9; ++i) acc += c[i] * y[t + i];
        EXPECT_NEAR(valid[t], acc, 1e-14);
    }
}

TEST(Smooth, MirrorReflectsAboutEndpoints) {
    const std::vector<double> y{1, 2, 4, 8, 16, 32};
    const auto c = designed(5, 0, WeightKind::constant);
    const auto out = smooth(series(y), c, EdgePolicy::mirror);
    // Window around t=0 reads y[2], y[1], y[0], y[1], y[2].
    EXPECT_NEAR(out[0], (4 + 2 + 1 + 2 + 4) / 5.0, 1e-14);
    EXPECT_NEAR(out[5], (8 + 16 + 32 + 16 + 8) / 5.0, 1e-14);
    // Short record: reflection wraps more than once.
    const auto tiny = smooth(series({1.0, 3.0}), c, EdgePolicy::mirror);
    EXPECT_NEAR(tiny[0], (1 + 3 + 1 + 3 + 1) / 5.0, 1e-14);
    EXPECT_EQ(smooth(series({7.0}), c, EdgePolicy::mirror)[0], 7.0);
}

TEST(Smooth, Linearity) {
    const auto x = noise(50, 1), y = noise(50, 2);
    const double a = 2.5, b = -0.75;
    std::vector<double> mix(50);
    for (int i = 0; i < 50; ++i) mix[i] = a * x[i] + b * y[i];
    const auto c = designed(11, 4, WeightKind::triangular);
    for (EdgePolicy edge : kPolicies) {
        const auto sx = smooth(series(x), c, edge), sy = smooth(series(y), c, edge), sm = smooth(series(mix), c, edge);
        for (std::size_t t = 0; t < sm.size(); ++t) EXPECT_NEAR(sm[t], a * sx[t] + b * sy[t], 1e-12);
    }
}

TEST(Smooth, ShiftCovarianceAwayFromEdges) {
    const auto x = noise(60, 9);
    const std::vector<double> shifted(x.begin() + 1, x.end());
    const auto c = designed(7, 2, WeightKind::quadratic);
    const auto a = smooth(series(x), c, EdgePolicy::polyfit);
    const auto b = smooth(series(shifted), c, EdgePolicy::polyfit);
    for (std::size_t t = 3; t + 4 < shifted.size(); ++t) EXPECT_EQ(b[t], a[t + 1]);
}

TEST(Smooth, InsufficientDataAndShortRecords) {
    const auto c = designed(5, 2, WeightKind::constant);
    EXPECT_THROW(smooth(series({1, 2, 3}), c, EdgePolicy::valid), InsufficientData);
    EXPECT_THROW(smooth(series({}), c, EdgePolicy::mirror), InsufficientData);
    const auto out = smooth(series({1, 2, 3}), c, EdgePolicy::polyfit);
    ASSERT_EQ(out.size(), 3u);
    for (int t = 0; t < 3; ++t) EXPECT_NEAR(out[t], t + 1.0, 1e-12);
    EXPECT_EQ(smooth(series({4.0}), c, EdgePolicy::polyfit)[0], 4.0);

    VectorXd w(5);
    w << 1, 2, 3, 2, 1;
    const auto custom = design_coefficients(FilterSpec<double>(5, 0, custom_weights(w)));
    EXPECT_THROW(smooth(series({1, 2, 3}), custom, EdgePolicy::polyfit), InsufficientData);
    EXPECT_THROW(parse_edge_policy("wrap"), InvalidArgument);
}

TEST(Smooth, AbscissaAlignment) {
    const SignalSeries<double> s({1, 2, 3, 4, 5, 6}, std::vector<double>{10, 11, 12, 13, 14, 15});
    const auto c = designed(3, 0, WeightKind::constant);
    const auto valid = smooth(s, c, EdgePolicy::valid);
    ASSERT_TRUE(valid.abscissa().has_value());
    EXPECT_EQ(*valid.abscissa(), (std::vector<double>{11, 12, 13, 14}));
    EXPECT_EQ(*smooth(s, c, EdgePolicy::mirror).abscissa(), *s.abscissa());
}

TEST(Smooth, OffCenterFilterAlignsAtEvalIndex) {
    // j = q: a causal fit whose output lands on the newest sample of the window.
    const auto c = designed(5, 1, WeightKind::constant, 5);
    std::vector<double> ramp(9);
    for (int i = 0; i < 9; ++i) ramp[i] = 2.0 * i;
    for (EdgePolicy edge : {EdgePolicy::mirror, EdgePolicy::polyfit}) {
        const auto out = smooth(series(ramp), c, edge);
        for (std::size_t t = 4; t < 9; ++t) EXPECT_NEAR(out[t], ramp[t], 1e-12);
    }
}

TEST(StreamSmooth, MatchesValidBatch) {
    const auto c = designed(5, 2, WeightKind::quadratic);
    EXPECT_TRUE(stream_smooth(std::vector<double>{1, 2, 3, 4}, c).empty());
    const std::vector<double> five{1, -2, 3, 0.5, 7};
    const auto single = stream_smooth(five, c);
    ASSERT_EQ(single.size(), 1u);
    EXPECT_NEAR(single[0], c.taps.dot(Eigen::Map<const VectorXd>(five.data(), 5)), 1e-15);

    const auto y = noise(200, 4);
    const auto streamed = stream_smooth(y, c);
    const auto batch = smooth(series(y), c, EdgePolicy::valid);
    ASSERT_EQ(streamed.size(), batch.size());
    for (std::size_t t = 0; t < batch.size(); ++t) EXPECT_EQ(streamed[t], batch[t]);
}

TEST(StreamSmoother, DelayAndReset) {
    StreamSmoother<double> smoother(designed(7, 2, WeightKind::constant));
    EXPECT_EQ(smoother.delay(), 3);
    for (int i = 0; i < 6; ++i) EXPECT_FALSE(smoother.push(1.0).has_value());
    ASSERT_TRUE(smoother.push(1.0).has_value());
    smoother.reset();
    EXPECT_FALSE(smoother.push(1.0).has_value());
    EXPECT_THROW(smoother.push(std::nan("")), InvalidArgument);
}

TEST(Smooth, OutputVarianceMatchesErrorReduction) {
    const auto c = designed(11, 2, WeightKind::quadratic);
    const auto y = noise(400000, 12);
    const auto out = smooth(series(y), c, EdgePolicy::valid);
    double in_var = 0, out_var = 0;
    for (double v : y) in_var += v * v;
    for (double v : out.values()) out_var += v * v;
    in_var /= y.size();
    out_var /= out.size();
    const VectorXd& taps = c.taps;
    const auto se = ratio_standard_errors({taps.data(), static_cast<std::size_t>(taps.size())},
                                          static_cast<std::int64_t>(out.size()));
    EXPECT_NEAR(out_var / in_var, error_reduction_ratio(c), 3 * se.r);
}
