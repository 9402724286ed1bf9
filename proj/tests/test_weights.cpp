#include <gtest/gtest.h>

#include <random>

#include "wsg/weights.hpp"

using namespace wsg;

namespace {

void expect_values(const VectorXd& actual, std::initializer_list<double> expected, double tol = 1e-15) {
    ASSERT_EQ(actual.size(), static_cast<Eigen::Index>(expected.size()));
    Eigen::Index i = 0;
    for (double e : expected) EXPECT_NEAR(actual[i++], e, tol) << "entry " << i;
}

} // namespace

TEST(ConstantWeights, Examples) {
    expect_values(constant_weights(1).values(), {1.0});
    expect_values(constant_weights(5).values(), {1, 1, 1, 1, 1});
    expect_values(constant_weights(2).values(), {1, 1});
    EXPECT_EQ(constant_weights(3).kind(), WeightKind::constant);
}

TEST(TriangularWeights, Examples) {
    expect_values(triangular_weights(3).values(), {0.5, 1.0, 0.5});
    expect_values(triangular_weights(5).values(), {1.0 / 3, 2.0 / 3, 1.0, 2.0 / 3, 1.0 / 3});
    expect_values(triangular_weights(1).values(), {1.0});
}

TEST(TriangularWeights, MatchesAbsoluteValueFormula) {
    for (int q = 1; q <= 40; ++q) {
        const VectorXd w = triangular_weights(q).values();
        for (int i = 1; i <= q; ++i)
            EXPECT_NEAR(w[i - 1], 1.0 - std::abs(1.0 - 2.0 * i / (q + 1)), 1e-15) << "q=" << q << " i=" << i;
    }
}

TEST(QuadraticWeights, Examples) {
    expect_values(quadratic_weights(1).values(), {0.5});
    expect_values(quadratic_weights(5).values(), {2.5, 4.0, 4.5, 4.0, 2.5});
    expect_values(quadratic_weights(3).values(), {1.5, 2.0, 1.5});
}

TEST(Weights, RejectNonPositiveWindow) {
    EXPECT_THROW(constant_weights(0), InvalidArgument);
    EXPECT_THROW(triangular_weights(-1), InvalidArgument);
    EXPECT_THROW(quadratic_weights(0), InvalidArgument);
    EXPECT_THROW(weights_by_tridiagonal_solve(0), InvalidArgument);
}

TEST(Weights, CustomMustBeStrictlyPositive) {
    EXPECT_NO_THROW(custom_weights(VectorXd(VectorXd::Constant(3, 0.1))));
    VectorXd w(3);
    w << 1.0, 0.0, 1.0;
    EXPECT_THROW(custom_weights(w), InvalidArgument);
    w << 1.0, -2.0, 1.0;
    EXPECT_THROW(custom_weights(w), InvalidArgument);
    w << 1.0, std::nan(""), 1.0;
    EXPECT_THROW(custom_weights(w), InvalidArgument);
    EXPECT_THROW(custom_weights(VectorXd(0)), InvalidArgument);
}

TEST(Weights, KindInvariantsAreEnforced) {
    VectorXd w(3);
    w << 1.0, 2.0, 1.0;
    EXPECT_THROW(WeightVector<double>(w, WeightKind::constant), InvalidArgument);
    w << 1.0, 2.0, 1.5;
    EXPECT_THROW(WeightVector<double>(w, WeightKind::quadratic), InvalidArgument);
    EXPECT_THROW(weights_of_kind<double>(WeightKind::custom, 3), InvalidArgument);
    EXPECT_THROW(parse_weight_kind("gaussian"), InvalidArgument);
    EXPECT_EQ(parse_weight_kind("triangular"), WeightKind::triangular);
}

TEST(Weights, QuadraticAndTriangularAreExactlySymmetric) {
    for (int q = 1; q <= 101; ++q) {
        const VectorXd quad = quadratic_weights(q).values();
        const VectorXd tri = triangular_weights(q).values();
        for (int i = 0; i < q; ++i) {
            EXPECT_EQ(quad[i], quad[q - 1 - i]);
            EXPECT_EQ(tri[i], tri[q - 1 - i]);
        }
    }
}

TEST(Weights, TriangularHasSingleCentralMaximumForOddWindows) {
    for (int q = 1; q <= 51; q += 2) {
        const VectorXd w = triangular_weights(q).values();
        const int m = (q + 1) / 2;
        for (int i = 1; i < m; ++i) EXPECT_LT(w[i - 1], w[i]);
        EXPECT_EQ(w[m - 1], 1.0);
    }
}

TEST(TridiagonalSolve, Examples) {
    expect_values(weights_by_tridiagonal_solve(1).values(), {0.5});
    expect_values(weights_by_tridiagonal_solve(5).values(), {2.5, 4.0, 4.5, 4.0, 2.5}, 1e-13);
    VectorXd w(3);
    w << 1.5, 2.0, 1.5;
    expect_values(SecondDifference<double>(3).apply(w), {1, 1, 1});
}

TEST(TridiagonalSolve, MatchesClosedFormUpTo201) {
    for (int q = 1; q <= 201; ++q) {
        const VectorXd solved = weights_by_tridiagonal_solve(q).values();
        const VectorXd closed = quadratic_weights(q).values();
        EXPECT_LE((solved - closed).cwiseAbs().maxCoeff(), 1e-10 * closed.maxCoeff()) << "q=" << q;
    }
}

TEST(QuadraticWeights, SecondDifferenceOfWeightsIsConstant) {
    for (int q = 1; q <= 201; ++q) {
        const VectorXd w = quadratic_weights(q).values();
        const SecondDifference<double> t(q);
        EXPECT_LE((t.apply(w) - t.ones()).cwiseAbs().maxCoeff(), 1e-10) << "q=" << q;
        // Extended with w_0 = w_{q+1} = 0, -(w_{i-1} - 2 w_i + w_{i+1}) = 1 everywhere.
        VectorXd padded = VectorXd::Zero(q + 2);
        padded.segment(1, q) = w;
        for (int i = 1; i <= q; ++i) EXPECT_EQ(-(padded[i - 1] - 2 * padded[i] + padded[i + 1]), 1.0);
    }
}

TEST(SecondDifference, DenseStructure) {
    for (int q : {1, 2, 3, 7}) {
        const MatrixXd t = SecondDifference<double>(q).dense();
        EXPECT_TRUE(t.isApprox(t.transpose()));
        const VectorXd row_sums = t.rowwise().sum();
        for (int i = 0; i < q; ++i) {
            const double expected = (q == 1) ? 2.0 : (i == 0 || i == q - 1) ? 1.0 : 0.0;
            EXPECT_EQ(row_sums[i], expected) << "q=" << q << " row " << i;
        }
    }
}

TEST(SecondDifference, NegatedOperatorIsZeroPaddedSecondDifference) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-3, 3);
    for (int q = 1; q <= 12; ++q) {
        VectorXd x(q);
        for (int i = 0; i < q; ++i) x[i] = dist(rng);
        const SecondDifference<double> t(q);
        const VectorXd applied = t.apply(x);
        const VectorXd dense = t.dense() * x;
        for (int i = 0; i < q; ++i) {
            const double left = i > 0 ? x[i - 1] : 0.0;
            const double right = i + 1 < q ? x[i + 1] : 0.0;
            EXPECT_NEAR(-applied[i], left - 2 * x[i] + right, 1e-14);
            EXPECT_NEAR(applied[i], dense[i], 1e-14);
        }
        EXPECT_NEAR(t.quadratic_form(x), x.dot(dense), 1e-12);
        const VectorXd solved = t.solve(applied);
        EXPECT_LE((solved - x).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(SecondDifference, LengthMismatchThrows) {
    EXPECT_THROW(SecondDifference<double>(3).apply(VectorXd::Ones(4)), InvalidArgument);
}

TEST(Weights, LongDoubleInstantiation) {
    const auto w = quadratic_weights<long double>(7);
    EXPECT_EQ(w[3], 8.0L);
    const auto solved = weights_by_tridiagonal_solve<long double>(7);
    EXPECT_NEAR(static_cast<double>(solved[3]), 8.0, 1e-15);
}
