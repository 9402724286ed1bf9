#include "wsg/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "wsg/errors.hpp"
#include "wsg/metrics.hpp"

namespace wsg {

namespace {

MatrixXd second_difference(int q) { return SecondDifference<double>(q).dense(); }

double max_abs(const MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// (I - A A^T W) T for a W-orthonormal A, symmetrized.
MatrixXd projected_operator(const MatrixXd& a, const VectorXd& w) {
    const int q = static_cast<int>(a.rows());
    const MatrixXd t = second_difference(q);
    const MatrixXd m = t - a * (a.transpose() * w.asDiagonal() * t);
    return (m + m.transpose()) / 2.0;
}

struct CenteredParts {
    MatrixXd a;     // W-orthonormal even-power basis
    VectorXd p;     // A A^T u
    VectorXd c;     // W A A^T u
};

CenteredParts centered_parts(const FilterSpec<double>& spec) {
    CenteredParts parts;
    parts.a = orthonormal_basis(spec).columns;
    parts.p = parts.a * parts.a.row(spec.eval_index() - 1).transpose();
    parts.c = spec.weights().values().cwiseProduct(parts.p);
    return parts;
}

void require_centered_pair(int q, int n) {
    if (q < 1 || q % 2 == 0) throw InvalidArgument("window length must be a positive odd integer");
    const int m = (q + 1) / 2;
    if (n < 1 || n >= m)
        throw InvalidArgument("need m > n >= 1, got q=" + std::to_string(q) + " n=" + std::to_string(n));
}

} // namespace

TwEigensystem tw_eigensystem(const WeightVector<double>& w) {
    const int q = static_cast<int>(w.size());
    const VectorXd root = w.values().cwiseSqrt();
    const MatrixXd sym = root.asDiagonal() * second_difference(q) * root.asDiagonal();
    const Eigen::SelfAdjointEigenSolver<MatrixXd> solver(sym);
    if (solver.info() != Eigen::Success) throw DesignFailure("eigensolver did not converge");
    // TW (W^{-1/2} Q) = (W^{-1/2} Q) Lambda, and (W^{-1/2} Q)^T W (W^{-1/2} Q) = I.
    return {solver.eigenvalues(), root.cwiseInverse().asDiagonal() * solver.eigenvectors()};
}

std::vector<double> eigenvalues_of_TW(int q) {
    const VectorXd ev = tw_eigensystem(quadratic_weights(q)).eigenvalues;
    return {ev.data(), ev.data() + ev.size()};
}

std::vector<double> symmetric_spectrum(const MatrixXd& m) {
    const MatrixXd sym = (m + m.transpose()) / 2.0;
    const Eigen::SelfAdjointEigenSolver<MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw DesignFailure("eigensolver did not converge");
    const VectorXd& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

FilterSpec<double> centered_spec(int q, int n, const WeightVector<double>& w) {
    require_centered_pair(q, n);
    return FilterSpec<double>(q, 2 * (n - 1), w);
}

double smoothing_parameter_of(const FilterSpec<double>& spec) {
    return smoothing_parameter(design_coefficients(spec));
}

VectorXd smoothness_gradient(const FilterSpec<double>& spec) {
    const CenteredParts parts = centered_parts(spec);
    const VectorXd& w = spec.weights().values();
    const VectorXd tc = SecondDifference<double>(spec.window()).apply(parts.c);
    // ds/dW_kk = (A A^T u)_k [(I - A A^T W) T c]_k
    const VectorXd residual = tc - parts.a * (parts.a.transpose() * w.cwiseProduct(tc));
    return parts.p.cwiseProduct(residual);
}

VectorXd smoothness_gradient(int q, int n, const WeightVector<double>& w) {
    return smoothness_gradient(centered_spec(q, n, w));
}

MatrixXd hessian(int q, int n) {
    const FilterSpec<double> spec = centered_spec(q, n, quadratic_weights(q));
    const CenteredParts parts = centered_parts(spec);
    const MatrixXd m = projected_operator(parts.a, spec.weights().values());
    const MatrixXd h = parts.p.asDiagonal() * m * parts.p.asDiagonal();
    return (h + h.transpose()) / 2.0;
}

std::vector<double> projected_operator_spectrum(int q, int n) {
    if (q < 2) throw InvalidArgument("projected operator needs q >= 2");
    if (n < 1 || n >= q)
        throw InvalidArgument("need 1 <= n < q, got q=" + std::to_string(q) + " n=" + std::to_string(n));
    const TwEigensystem sys = tw_eigensystem(quadratic_weights(q));
    const MatrixXd a = sys.a.leftCols(n);
    const MatrixXd m = second_difference(q) - a * sys.eigenvalues.head(n).asDiagonal() * a.transpose();
    return symmetric_spectrum(m);
}

int count_zero(const std::vector<double>& spectrum) {
    double scale = 0.0;
    for (double x : spectrum) scale = std::max(scale, std::abs(x));
    const double cut = tolerance::zero_eigenvalue_relative * scale;
    return static_cast<int>(std::count_if(spectrum.begin(), spectrum.end(),
                                          [cut](double x) { return std::abs(x) <= cut; }));
}

double smallest_nonzero(const std::vector<double>& spectrum) {
    double scale = 0.0;
    for (double x : spectrum) scale = std::max(scale, std::abs(x));
    const double cut = tolerance::zero_eigenvalue_relative * scale;
    for (double x : spectrum)
        if (std::abs(x) > cut) return x;
    throw DesignFailure("spectrum has no nonzero eigenvalue");
}

double lambda_min(int q, int n) { return smallest_nonzero(projected_operator_spectrum(q, n)); }

double lambda_min_single_column(int q) {
    if (q < 2) throw InvalidArgument("closed form needs q >= 2");
    return 2.0 * (1.0 - std::cos(2.0 * std::numbers::pi / (q + 1)));
}

double central_binomial(int q) {
    if (q < 0) throw InvalidArgument("binomial index must be >= 0");
    if (q <= 30) {
        // C(2q, k) built up k = 1 .. q; every intermediate is an exact integer < 2^63.
        std::uint64_t value = 1;
        for (int k = 1; k <= q; ++k) value = value * static_cast<std::uint64_t>(2 * q - k + 1) / k;
        return static_cast<double>(value);
    }
    return std::exp(std::lgamma(2.0 * q + 1.0) - 2.0 * std::lgamma(q + 1.0));
}

double lambda_min_full_rank(int q) {
    if (q < 2) throw InvalidArgument("closed form needs q >= 2");
    return 4.0 - 2.0 / (q + 1) - 2.0 / central_binomial(q);
}

bool lambda_min_monotonicity(int q) {
    if (q < 3) throw InvalidArgument("monotonicity needs q >= 3");
    double prev = lambda_min(q, 1);
    for (int n = 2; n < q; ++n) {
        const double next = lambda_min(q, n);
        if (!(next > prev)) return false;
        prev = next;
    }
    return true;
}

PerturbationProbe perturbation_probe(int q, int n, int trials, double epsilon, std::uint64_t seed) {
    const WeightVector<double> w = quadratic_weights(q);
    const FilterSpec<double> spec = centered_spec(q, n, w);
    PerturbationProbe probe;
    probe.trials = trials;
    probe.epsilon = epsilon;
    probe.baseline_s = smoothing_parameter_of(spec);
    probe.worst_decrease = -std::numeric_limits<double>::infinity();

    std::mt19937_64 engine(seed);
    for (int t = 0; t < trials; ++t) {
        VectorXd perturbed = w.values();
        for (int k = 0; k < q; ++k) {
            const double delta = static_cast<double>(engine() >> 11) * 0x1.0p-52 - 1.0;
            perturbed[k] *= 1.0 + epsilon * delta;
        }
        const double s = smoothing_parameter_of(spec.with_weights(custom_weights(perturbed)));
        probe.worst_decrease = std::max(probe.worst_decrease, probe.baseline_s - s);
    }
    return probe;
}

EigenCheck check_eigensystem(int q) {
    const WeightVector<double> w = quadratic_weights(q);
    const TwEigensystem sys = tw_eigensystem(w);
    EigenCheck check;
    check.q = q;
    check.eigenvalues.assign(sys.eigenvalues.data(), sys.eigenvalues.data() + q);
    for (int i = 1; i <= q; ++i) {
        const double expected = i * (i + 1) / 2.0;
        check.max_relative_deviation =
            std::max(check.max_relative_deviation, std::abs(check.eigenvalues[i - 1] - expected) / expected);
    }
    const MatrixXd gram = sys.a.transpose() * w.diagonal() * sys.a;
    check.orthonormality_error = max_abs(gram - MatrixXd::Identity(q, q));
    const MatrixXd twa = second_difference(q) * w.diagonal() * sys.a;
    for (int col = 0; col < q; ++col) {
        const double lambda = sys.eigenvalues[col];
        const double err = (twa.col(col) - lambda * sys.a.col(col)).cwiseAbs().maxCoeff() /
                           (lambda * sys.a.col(col).cwiseAbs().maxCoeff());
        check.eigen_relation_error = std::max(check.eigen_relation_error, err);
    }
    check.passed = check.max_relative_deviation <= tolerance::eigenvalue_relative &&
                   check.orthonormality_error <= tolerance::orthonormality &&
                   check.eigen_relation_error <= tolerance::eigen_relation;
    return check;
}

LambdaMinCheck check_lambda_min(int q) {
    if (q < 2) throw InvalidArgument("lambda_min checks need q >= 2");
    LambdaMinCheck check;
    check.q = q;
    check.bounded = true;
    check.monotone = true;
    for (int n = 1; n < q; ++n) {
        const std::vector<double> spectrum = projected_operator_spectrum(q, n);
        const double lm = smallest_nonzero(spectrum);
        const int zeros = count_zero(spectrum);
        if (!check.lambda_min.empty() && !(lm > check.lambda_min.back())) check.monotone = false;
        if (!(lm > 0.0) || !(spectrum.back() < 4.0) || zeros != n) check.bounded = false;
        check.lambda_min.push_back(lm);
        check.zero_counts.push_back(zeros);
    }
    check.single_column_error = std::abs(check.lambda_min.front() - lambda_min_single_column(q));
    check.full_rank_error = std::abs(check.lambda_min.back() - lambda_min_full_rank(q));
    check.passed = check.monotone && check.bounded &&
                   check.single_column_error <= tolerance::lambda_min_formula &&
                   check.full_rank_error <= tolerance::lambda_min_formula;
    return check;
}

VerificationReport verify_pair(int q, int n, std::uint64_t seed, int trials, double epsilon) {
    const WeightVector<double> w = quadratic_weights(q);
    const FilterSpec<double> spec = centered_spec(q, n, w);
    VerificationReport report;
    report.q = q;
    report.n = n;
    report.eigenvalues_TW = eigenvalues_of_TW(q);

    report.gradient = smoothness_gradient(spec);
    report.max_abs_gradient = report.gradient.cwiseAbs().maxCoeff();
    report.gradient_ok = report.max_abs_gradient <= tolerance::gradient;

    report.hessian_spectrum = symmetric_spectrum(hessian(q, n));
    report.hessian_min_eigenvalue = report.hessian_spectrum.front();
    report.hessian_ok = report.hessian_min_eigenvalue >= tolerance::hessian_floor;

    // The operator that appears inside the Hessian for this design basis.
    const CenteredParts parts = centered_parts(spec);
    const std::vector<double> projected = symmetric_spectrum(projected_operator(parts.a, w.values()));
    report.lambda_min_observed = smallest_nonzero(projected);
    report.lambda_ok = count_zero(projected) == n && report.lambda_min_observed > 0.0 && projected.back() < 4.0;
    if (n == 1) {
        report.lambda_min_formula = lambda_min_single_column(q);
        report.lambda_ok = report.lambda_ok && std::abs(report.lambda_min_observed - *report.lambda_min_formula) <=
                                                   tolerance::lambda_min_formula;
    }

    report.perturbation = perturbation_probe(q, n, trials, epsilon, seed);
    report.perturbation_ok = report.perturbation.worst_decrease <= tolerance::perturbation;
    return report;
}

bool GridReport::passed() const {
    return std::all_of(eigen.begin(), eigen.end(), [](const EigenCheck& c) { return c.passed; }) &&
           std::all_of(lambda.begin(), lambda.end(), [](const LambdaMinCheck& c) { return c.passed; }) &&
           std::all_of(pairs.begin(), pairs.end(), [](const VerificationReport& r) { return r.passed(); });
}

GridReport verify_grid(int max_window, int max_degree, std::uint64_t seed) {
    if (max_window < 1) throw InvalidArgument("max window must be >= 1");
    if (max_degree < 0) throw InvalidArgument("max degree must be >= 0");
    GridReport grid;
    for (int q = 1; q <= max_window; ++q) grid.eigen.push_back(check_eigensystem(q));
    for (int q = 2; q <= max_window; ++q) grid.lambda.push_back(check_lambda_min(q));
    const int max_n = max_degree / 2 + 1;
    for (int q = 3; q <= max_window; q += 2) {
        const int m = (q + 1) / 2;
        for (int n = 1; n <= std::min(max_n, m - 1); ++n)
            grid.pairs.push_back(verify_pair(q, n, seed + static_cast<std::uint64_t>(q) * 1000 + n));
    }
    return grid;
}

} // namespace wsg
