#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wsg/design.hpp"
#include "wsg/types.hpp"
#include "wsg/weights.hpp"

namespace wsg {

/// Thresholds used by the certification checks.
namespace tolerance {
inline constexpr double eigenvalue_relative = 1e-8;
inline constexpr double orthonormality = 1e-9;
inline constexpr double eigen_relation = 1e-8;
inline constexpr double gradient = 1e-10;
inline constexpr double hessian_floor = -1e-10;
inline constexpr double perturbation = 1e-12;
inline constexpr double zero_eigenvalue_relative = 1e-9;
inline constexpr double lambda_min_formula = 1e-8;
} // namespace tolerance

/// Spectrum of TW with W-orthonormal eigenvectors in the columns of `a`,
/// ascending. Obtained from the symmetric matrix W^{1/2} T W^{1/2}.
struct TwEigensystem {
    VectorXd eigenvalues;
    MatrixXd a;
};

TwEigensystem tw_eigensystem(const WeightVector<double>& w);

/// Ascending spectrum of TW for quadratic weights; expected {i (i + 1) / 2}.
std::vector<double> eigenvalues_of_TW(int q);

/// Ascending eigenvalues of the symmetric part of m.
std::vector<double> symmetric_spectrum(const MatrixXd& m);

/// ds/dW_kk for every k, for the centered fit with n even-power columns.
VectorXd smoothness_gradient(int q, int n, const WeightVector<double>& w);
VectorXd smoothness_gradient(const FilterSpec<double>& spec);

/// s of the spec's designed filter.
double smoothing_parameter_of(const FilterSpec<double>& spec);

/// Centered spec with n even-power columns over an odd window q (m > n >= 1).
FilterSpec<double> centered_spec(int q, int n, const WeightVector<double>& w);

/// Hessian of s in the diagonal weights at the quadratic weights, symmetrized.
MatrixXd hessian(int q, int n);

/// Spectrum of T - A Lambda A^T, A being the first n TW eigenvectors.
std::vector<double> projected_operator_spectrum(int q, int n);

/// Smallest eigenvalue not classified as zero (|lambda| <= 1e-9 max|lambda|).
double smallest_nonzero(const std::vector<double>& spectrum);
int count_zero(const std::vector<double>& spectrum);

double lambda_min(int q, int n);

/// 2 [1 - cos(2 pi / (q + 1))], the n = 1 value.
double lambda_min_single_column(int q);

/// 4 - 2 / (q + 1) - 2 / C(2q, q), the n = q - 1 value.
double lambda_min_full_rank(int q);

/// C(2q, q): exact integer arithmetic up to q = 30, log-gamma beyond.
double central_binomial(int q);

/// True iff lambda_min(q, n) strictly increases over n = 1 .. q - 1.
bool lambda_min_monotonicity(int q);

struct PerturbationProbe {
    int trials = 0;
    double epsilon = 0.0;
    double baseline_s = 0.0;
    double worst_decrease = 0.0; // max over trials of s(W) - s(W')
};

/// Evaluates s at W' = W (1 + epsilon delta), delta uniform in [-1, 1] per
/// entry, around the quadratic weights.
PerturbationProbe perturbation_probe(int q, int n, int trials, double epsilon, std::uint64_t seed);

struct EigenCheck {
    int q = 0;
    std::vector<double> eigenvalues;
    double max_relative_deviation = 0.0;
    double orthonormality_error = 0.0;
    double eigen_relation_error = 0.0;
    bool passed = false;
};

/// TW spectrum vs i(i+1)/2, A^T W A = I and TWA = A Lambda at quadratic weights.
EigenCheck check_eigensystem(int q);

struct LambdaMinCheck {
    int q = 0;
    std::vector<double> lambda_min; // index n - 1
    std::vector<int> zero_counts;
    double single_column_error = 0.0;
    double full_rank_error = 0.0;
    bool monotone = false;
    bool bounded = false;
    bool passed = false;
};

LambdaMinCheck check_lambda_min(int q);

/// Optimality evidence for one (q, n) at the quadratic weights.
struct VerificationReport {
    int q = 0;
    int n = 0;
    std::vector<double> eigenvalues_TW;
    VectorXd gradient;
    double max_abs_gradient = 0.0;
    std::vector<double> hessian_spectrum;
    double hessian_min_eigenvalue = 0.0;
    double lambda_min_observed = 0.0;
    std::optional<double> lambda_min_formula;
    PerturbationProbe perturbation;

    bool gradient_ok = false;
    bool hessian_ok = false;
    bool perturbation_ok = false;
    bool lambda_ok = false;

    bool passed() const { return gradient_ok && hessian_ok && perturbation_ok && lambda_ok; }
};

VerificationReport verify_pair(int q, int n, std::uint64_t seed, int trials = 100, double epsilon = 1e-2);

struct GridReport {
    std::vector<EigenCheck> eigen;
    std::vector<LambdaMinCheck> lambda;
    std::vector<VerificationReport> pairs;
    bool passed() const;
};

/// Full sweep: eigen checks for q = 1 .. max_window, lambda_min checks for
/// q = 2 .. max_window and optimality pairs for odd q >= 3 with
/// n = 1 .. min(max_degree / 2 + 1, m - 1). Rows are ordered by (q, n).
GridReport verify_grid(int max_window, int max_degree, std::uint64_t seed);

} // namespace wsg
