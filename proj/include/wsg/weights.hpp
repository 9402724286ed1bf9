#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>

#include "wsg/errors.hpp"
#include "wsg/types.hpp"

namespace wsg {

enum class WeightKind { constant, triangular, quadratic, custom };

inline std::string_view to_string(WeightKind kind) {
    switch (kind) {
    case WeightKind::constant: return "constant";
    case WeightKind::triangular: return "triangular";
    case WeightKind::quadratic: return "quadratic";
    case WeightKind::custom: return "custom";
    }
    return "custom";
}

inline WeightKind parse_weight_kind(std::string_view name) {
    if (name == "constant") return WeightKind::constant;
    if (name == "triangular") return WeightKind::triangular;
    if (name == "quadratic") return WeightKind::quadratic;
    if (name == "custom") return WeightKind::custom;
    throw InvalidArgument("unknown weight kind '" + std::string(name) + "'");
}

/// Diagonal of the residual weight matrix W, one strictly positive entry per
/// window sample. Values are kept unnormalized.
template <typename Scalar = double>
class WeightVector {
public:
    WeightVector(Vector<Scalar> values, WeightKind kind) : values_(std::move(values)), kind_(kind) {
        validate();
    }

    Eigen::Index size() const { return values_.size(); }
    const Vector<Scalar>& values() const { return values_; }
    WeightKind kind() const { return kind_; }
    Scalar operator[](Eigen::Index i) const { return values_[i]; }

    auto diagonal() const { return values_.asDiagonal(); }

    /// Same weights multiplied by a positive factor; kind is preserved.
    WeightVector scaled(Scalar factor) const {
        if (!(factor > Scalar(0))) throw InvalidArgument("weight scale factor must be positive");
        return WeightVector(values_ * factor, kind_);
    }

private:
    void validate() const {
        const Eigen::Index q = values_.size();
        if (q < 1) throw InvalidArgument("weight vector must have at least one entry");
        for (Eigen::Index i = 0; i < q; ++i) {
            using std::isfinite;
            if (!isfinite(values_[i]) || !(values_[i] > Scalar(0)))
                throw InvalidArgument("weight " + std::to_string(i + 1) +
                                      " is not strictly positive and finite");
        }
        if (kind_ == WeightKind::constant && (values_.array() != values_[0]).any())
            throw InvalidArgument("constant weights must all be equal");
        if (kind_ == WeightKind::quadratic || kind_ == WeightKind::triangular) {
            for (Eigen::Index i = 0; i < q / 2; ++i)
                if (values_[i] != values_[q - 1 - i])
                    throw InvalidArgument(std::string(to_string(kind_)) + " weights must be symmetric");
        }
    }

    Vector<Scalar> values_;
    WeightKind kind_;
};

namespace detail {
inline void require_window(int q) {
    if (q < 1) throw InvalidArgument("window length must be >= 1, got " + std::to_string(q));
}
} // namespace detail

template <typename Scalar = double>
WeightVector<Scalar> constant_weights(int q) {
    detail::require_window(q);
    return WeightVector<Scalar>(Vector<Scalar>::Ones(q), WeightKind::constant);
}

/// Turton's triangle, 1 - |1 - 2i/(q+1)|, evaluated as 2 min(i, q+1-i)/(q+1)
/// so that mirrored entries are bitwise equal.
template <typename Scalar = double>
WeightVector<Scalar> triangular_weights(int q) {
    detail::require_window(q);
    Vector<Scalar> w(q);
    for (int i = 1; i <= q; ++i)
        w[i - 1] = Scalar(2 * std::min(i, q + 1 - i)) / Scalar(q + 1);
    return WeightVector<Scalar>(std::move(w), WeightKind::triangular);
}

/// w_i = i (q + 1 - i) / 2. Vanishes at i = 0 and i = q + 1.
template <typename Scalar = double>
WeightVector<Scalar> quadratic_weights(int q) {
    detail::require_window(q);
    Vector<Scalar> w(q);
    for (int i = 1; i <= q; ++i)
        w[i - 1] = Scalar(i) * Scalar(q + 1 - i) / Scalar(2);
    return WeightVector<Scalar>(std::move(w), WeightKind::quadratic);
}

template <typename Scalar = double>
WeightVector<Scalar> custom_weights(Vector<Scalar> values) {
    return WeightVector<Scalar>(std::move(values), WeightKind::custom);
}

template <typename Scalar = double>
WeightVector<Scalar> weights_of_kind(WeightKind kind, int q) {
    switch (kind) {
    case WeightKind::constant: return constant_weights<Scalar>(q);
    case WeightKind::triangular: return triangular_weights<Scalar>(q);
    case WeightKind::quadratic: return quadratic_weights<Scalar>(q);
    case WeightKind::custom: break;
    }
    throw InvalidArgument("custom weights cannot be generated from a window length");
}

/// The q x q second-difference matrix T (2 on the diagonal, -1 beside it).
/// -T x is the second difference of x with zero padding at both ends.
template <typename Scalar = double>
class SecondDifference {
public:
    explicit SecondDifference(int q) : q_(q) { detail::require_window(q); }

    int size() const { return q_; }

    Matrix<Scalar> dense() const {
        Matrix<Scalar> t = Matrix<Scalar>::Zero(q_, q_);
        t.diagonal().setConstant(Scalar(2));
        if (q_ > 1) {
            t.template diagonal<1>().setConstant(Scalar(-1));
            t.template diagonal<-1>().setConstant(Scalar(-1));
        }
        return t;
    }

    /// The all-ones vector v.
    Vector<Scalar> ones() const { return Vector<Scalar>::Ones(q_); }

    template <typename Derived>
    Vector<Scalar> apply(const Eigen::MatrixBase<Derived>& x) const {
        check_length(x.size());
        Vector<Scalar> y(q_);
        for (int i = 0; i < q_; ++i) {
            Scalar acc = Scalar(2) * x[i];
            if (i > 0) acc -= x[i - 1];
            if (i + 1 < q_) acc -= x[i + 1];
            y[i] = acc;
        }
        return y;
    }

    /// x^T T x, accumulated as the zero-padded sum of squared first differences.
    template <typename Derived>
    Scalar quadratic_form(const Eigen::MatrixBase<Derived>& x) const {
        check_length(x.size());
        Scalar acc = x[0] * x[0] + x[q_ - 1] * x[q_ - 1];
        for (int i = 0; i + 1 < q_; ++i) {
            const Scalar d = x[i + 1] - x[i];
            acc += d * d;
        }
        return acc;
    }

    /// Solves T x = rhs by forward elimination and back substitution on the
    /// three diagonals (Thomas algorithm). T is positive definite, so no pivoting.
    template <typename Derived>
    Vector<Scalar> solve(const Eigen::MatrixBase<Derived>& rhs) const {
        check_length(rhs.size());
        Vector<Scalar> upper(q_);
        Vector<Scalar> x(q_);
        Scalar pivot = Scalar(2);
        upper[0] = Scalar(-1) / pivot;
        x[0] = rhs[0] / pivot;
        for (int i = 1; i < q_; ++i) {
            pivot = Scalar(2) + upper[i - 1];
            upper[i] = Scalar(-1) / pivot;
            x[i] = (rhs[i] + x[i - 1]) / pivot;
        }
        for (int i = q_ - 2; i >= 0; --i) x[i] -= upper[i] * x[i + 1];
        return x;
    }

private:
    void check_length(Eigen::Index n) const {
        if (n != q_) throw InvalidArgument("vector length does not match second-difference size");
    }

    int q_;
};

/// Optimal weights obtained as T^{-1} v rather than from the closed form.
template <typename Scalar = double>
WeightVector<Scalar> weights_by_tridiagonal_solve(int q) {
    detail::require_window(q);
    const SecondDifference<Scalar> t(q);
    Vector<Scalar> w = t.solve(t.ones());
    // Elimination runs one way, so mirrored entries can differ in the last bit.
    for (int i = 0; i < q / 2; ++i) {
        const Scalar mean = (w[i] + w[q - 1 - i]) / Scalar(2);
        w[i] = w[q - 1 - i] = mean;
    }
    return WeightVector<Scalar>(std::move(w), WeightKind::quadratic);
}

} // namespace wsg
