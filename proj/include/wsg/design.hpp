#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "wsg/errors.hpp"
#include "wsg/types.hpp"
#include "wsg/weights.hpp"

namespace wsg {

/// What to fit: window length q, polynomial degree, residual weights and the
/// 1-based window position j at which the fit is evaluated. j defaults to the
/// window center m = (1 + q) / 2 (the lower middle for even q).
template <typename Scalar = double>
class FilterSpec {
public:
    FilterSpec(int q, int degree, WeightVector<Scalar> weights, std::optional<int> j = std::nullopt)
        : q_(q), degree_(degree), weights_(std::move(weights)), j_(j.value_or((1 + q) / 2)) {
        detail::require_window(q);
        if (degree < 0) throw InvalidArgument("polynomial degree must be >= 0");
        if (weights_.size() != q)
            throw InvalidArgument("weight vector has " + std::to_string(weights_.size()) +
                                  " entries but the window length is " + std::to_string(q));
        if (j_ < 1 || j_ > q)
            throw InvalidArgument("evaluation index " + std::to_string(j_) + " outside 1.." +
                                  std::to_string(q));
    }

    int window() const { return q_; }
    int degree() const { return degree_; }
    int eval_index() const { return j_; }
    int center() const { return (1 + q_) / 2; }
    const WeightVector<Scalar>& weights() const { return weights_; }

    /// Odd window evaluated at its middle sample: the symmetric, linear-phase case.
    bool centered() const { return q_ % 2 == 1 && j_ == center(); }

    /// Degree actually fitted. At the center an odd degree gives the same
    /// coefficients as the even degree below it, so it is rounded down.
    int canonical_degree() const { return centered() ? degree_ - degree_ % 2 : degree_; }

    /// Number of basis columns n: even powers only at the center.
    int basis_size() const { return centered() ? canonical_degree() / 2 + 1 : degree_ + 1; }

    /// Exponents of the basis columns, in column order.
    std::vector<int> powers() const {
        std::vector<int> p;
        const int step = centered() ? 2 : 1;
        for (int k = 0; k <= canonical_degree(); k += step) p.push_back(k);
        return p;
    }

    FilterSpec with_weights(WeightVector<Scalar> weights) const {
        return FilterSpec(q_, degree_, std::move(weights), j_);
    }
    FilterSpec with_eval_index(int j) const { return FilterSpec(q_, degree_, weights_, j); }

private:
    int q_;
    int degree_;
    WeightVector<Scalar> weights_;
    int j_;
};

/// Convolution taps c together with the spec that produced them.
template <typename Scalar = double>
struct FilterCoefficients {
    Vector<Scalar> taps;
    FilterSpec<Scalar> spec;

    Eigen::Index size() const { return taps.size(); }
    Scalar operator[](Eigen::Index i) const { return taps[i]; }
};

/// q x n design matrix over the abscissas x_i = (i - j) * spacing. When
/// `orthonormal` is set the columns are W-orthonormal (A^T W A = I) and span
/// the same space as the raw powers.
template <typename Scalar = double>
struct BasisMatrix {
    Matrix<Scalar> columns;
    Vector<Scalar> abscissas;
    std::vector<int> powers;
    bool orthonormal = false;
};

template <typename Scalar>
BasisMatrix<Scalar> build_vandermonde(const FilterSpec<Scalar>& spec, Scalar spacing = Scalar(1)) {
    const int q = spec.window();
    const int n = spec.basis_size();
    if (spec.centered() ? n > spec.center() : n > q)
        throw DesignFailure("over-parameterized fit: " + std::to_string(n) +
                            " basis columns for a window of " + std::to_string(q));
    if (!(spacing > Scalar(0))) throw InvalidArgument("abscissa spacing must be positive");

    BasisMatrix<Scalar> basis;
    basis.powers = spec.powers();
    basis.abscissas.resize(q);
    for (int i = 1; i <= q; ++i) basis.abscissas[i - 1] = Scalar(i - spec.eval_index()) * spacing;
    basis.columns.resize(q, n);
    for (int col = 0; col < n; ++col)
        for (int row = 0; row < q; ++row) {
            Scalar value(1);
            for (int p = 0; p < basis.powers[col]; ++p) value *= basis.abscissas[row];
            basis.columns(row, col) = value;
        }
    return basis;
}

namespace detail {

/// Spacing that maps the grid into [-1, 1]; the fit does not depend on it.
template <typename Scalar>
Scalar unit_spacing(const FilterSpec<Scalar>& spec) {
    const int reach = std::max(spec.eval_index() - 1, spec.window() - spec.eval_index());
    return reach > 0 ? Scalar(1) / Scalar(reach) : Scalar(1);
}

/// n equal to the number of distinct |x| (centered) or to q: the fit interpolates.
template <typename Scalar>
bool interpolating(const FilterSpec<Scalar>& spec) {
    return spec.window() == 1 || spec.basis_size() == (spec.centered() ? spec.center() : spec.window());
}

template <typename Scalar>
FilterCoefficients<Scalar> identity_filter(const FilterSpec<Scalar>& spec) {
    Vector<Scalar> c = Vector<Scalar>::Zero(spec.window());
    c[spec.eval_index() - 1] = Scalar(1);
    return {std::move(c), spec};
}

} // namespace detail

/// Modified Gram-Schmidt in the inner product <a, b> = a^T diag(w) b, run twice
/// over the columns so that A^T W A stays at the identity for larger n.
template <typename Derived, typename WeightDerived>
Matrix<typename Derived::Scalar> weighted_gram_schmidt(const Eigen::MatrixBase<Derived>& columns,
                                                       const Eigen::MatrixBase<WeightDerived>& w) {
    using Scalar = typename Derived::Scalar;
    Matrix<Scalar> a = columns;
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
        for (int pass = 0; pass < 2; ++pass)
            for (Eigen::Index prev = 0; prev < k; ++prev) {
                const Scalar proj = (a.col(prev).array() * w.array() * a.col(k).array()).sum();
                a.col(k) -= proj * a.col(prev);
            }
        const Scalar norm2 = (a.col(k).array().square() * w.array()).sum();
        if (!(norm2 > Scalar(0)))
            throw DesignFailure("basis column " + std::to_string(k + 1) + " is linearly dependent");
        using std::sqrt;
        a.col(k) /= sqrt(norm2);
    }
    return a;
}

/// W-orthonormal basis for the spec's polynomial space.
template <typename Scalar>
BasisMatrix<Scalar> orthonormal_basis(const FilterSpec<Scalar>& spec) {
    BasisMatrix<Scalar> basis = build_vandermonde(spec, detail::unit_spacing(spec));
    basis.columns = weighted_gram_schmidt(basis.columns, spec.weights().values());
    basis.orthonormal = true;
    return basis;
}

/// Weighted least-squares taps c = W X (X^T W X)^{-1} X^T u through a Cholesky
/// factorization of the normal matrix, with X built on the given grid spacing.
template <typename Scalar>
FilterCoefficients<Scalar> design_coefficients(const FilterSpec<Scalar>& spec, Scalar spacing) {
    const BasisMatrix<Scalar> basis = build_vandermonde(spec, spacing);
    if (detail::interpolating(spec)) return detail::identity_filter(spec);

    const Vector<Scalar>& raw = spec.weights().values();
    const Vector<Scalar> w = raw / raw.maxCoeff();
    const Matrix<Scalar>& x = basis.columns;
    const Matrix<Scalar> normal = x.transpose() * w.asDiagonal() * x;
    const Eigen::LLT<Matrix<Scalar>> llt(normal);
    if (llt.info() != Eigen::Success || !(llt.rcond() > std::numeric_limits<Scalar>::epsilon()))
        throw DesignFailure("normal matrix of the weighted fit is numerically singular (degree too high for the window)");

    const Vector<Scalar> fit = llt.solve(x.row(spec.eval_index() - 1).transpose());
    Vector<Scalar> c = w.asDiagonal() * (x * fit);
    return {std::move(c), spec};
}

/// Same fit on the grid scaled into [-1, 1], which keeps X^T W X well conditioned.
template <typename Scalar>
FilterCoefficients<Scalar> design_coefficients(const FilterSpec<Scalar>& spec) {
    return design_coefficients(spec, detail::unit_spacing(spec));
}

/// c = W A A^T u with A the W-orthonormal even-power basis. Centered specs only.
template <typename Scalar>
FilterCoefficients<Scalar> design_via_orthonormal_basis(const FilterSpec<Scalar>& spec) {
    if (!spec.centered())
        throw InvalidArgument("orthonormal-basis design needs an odd window evaluated at its center");
    if (detail::interpolating(spec)) {
        build_vandermonde(spec);
        return detail::identity_filter(spec);
    }
    const BasisMatrix<Scalar> basis = orthonormal_basis(spec);
    const Matrix<Scalar>& a = basis.columns;
    Vector<Scalar> c =
        spec.weights().values().asDiagonal() * (a * a.row(spec.eval_index() - 1).transpose());
    return {std::move(c), spec};
}

/// Closed-form taps of the degree-0 fit under quadratic weights:
/// c_i = 6 i (q + 1 - i) / (q (q + 1) (q + 2)).
template <typename Scalar = double>
FilterCoefficients<Scalar> quadratic_weight_constant_fit(int q) {
    detail::require_window(q);
    if (q % 2 == 0) throw InvalidArgument("closed-form quadratic-weight fit needs an odd window");
    Vector<Scalar> c(q);
    const Scalar denom = Scalar(q) * Scalar(q + 1) * Scalar(q + 2);
    for (int i = 1; i <= q; ++i) c[i - 1] = Scalar(6) * Scalar(i) * Scalar(q + 1 - i) / denom;
    return {std::move(c), FilterSpec<Scalar>(q, 0, quadratic_weights<Scalar>(q))};
}

/// dc/dW_kk, zero when the fit interpolates; = [I - W A A^T] E_k A A^T u for the 1-based weight index k.
template <typename Scalar>
Vector<Scalar> coefficient_weight_derivative(const FilterSpec<Scalar>& spec, int k) {
    const int q = spec.window();
    if (k < 1 || k > q)
        throw InvalidArgument("weight index " + std::to_string(k) + " outside 1.." + std::to_string(q));
    if (detail::interpolating(spec)) return Vector<Scalar>::Zero(q);
    const Matrix<Scalar> a = orthonormal_basis(spec).columns;
    const Vector<Scalar> projected_u = a * a.row(spec.eval_index() - 1).transpose();
    Vector<Scalar> d = -spec.weights().values().cwiseProduct(a * a.row(k - 1).transpose());
    d[k - 1] += Scalar(1);
    return projected_u[k - 1] * d;
}

} // namespace wsg
