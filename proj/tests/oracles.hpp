#pragma once

// Independent reference computations used only by the tests. None of these
// touch the library's solvers.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

using Real = long double;
using Vec = std::vector<Real>;
using Mat = std::vector<Vec>;

/// Gaussian elimination with partial pivoting, long double throughout.
inline Vec gauss_solve(Mat a, Vec b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        if (a[pivot][col] == 0) throw std::runtime_error("singular oracle system");
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const Real f = a[r][col] / a[col][col];
            for (std::size_t k = col; k < n; ++k) a[r][k] -= f * a[col][k];
            b[r] -= f * b[col];
        }
    }
    Vec x(n);
    for (std::size_t i = n; i-- > 0;) {
        Real acc = b[i];
        for (std::size_t k = i + 1; k < n; ++k) acc -= a[i][k] * x[k];
        x[i] = acc / a[i][i];
    }
    return x;
}

/// Brute-force c = W X (X^T W X)^{-1} X^T u on the raw grid x_i = (i - j) * spacing.
inline Vec normal_equation_taps(int q, const std::vector<int>& powers, const std::vector<double>& w, int j,
                                Real spacing = 1) {
    const std::size_t n = powers.size();
    Mat x(q, Vec(n));
    for (int i = 0; i < q; ++i)
        for (std::size_t k = 0; k < n; ++k) x[i][k] = std::pow(Real(i + 1 - j) * spacing, powers[k]);
    Mat g(n, Vec(n, 0));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (int i = 0; i < q; ++i) g[a][b] += x[i][a] * Real(w[i]) * x[i][b];
    Vec rhs(n);
    for (std::size_t k = 0; k < n; ++k) rhs[k] = x[j - 1][k];
    const Vec fit = gauss_solve(g, rhs);
    Vec c(q, 0);
    for (int i = 0; i < q; ++i) {
        Real acc = 0;
        for (std::size_t k = 0; k < n; ++k) acc += x[i][k] * fit[k];
        c[i] = Real(w[i]) * acc;
    }
    return c;
}

/// Cyclic Jacobi rotations on a dense symmetric matrix; eigenvalues ascending.
inline Vec jacobi_eigenvalues(Mat a, int sweeps = 100) {
    const std::size_t n = a.size();
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        Real off = 0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t r = p + 1; r < n; ++r) off += a[p][r] * a[p][r];
        if (off < 1e-36L) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t r = p + 1; r < n; ++r) {
                if (a[p][r] == 0) continue;
                const Real theta = (a[r][r] - a[p][p]) / (2 * a[p][r]);
                const Real t = (theta >= 0 ? 1 : -1) / (std::fabs(theta) + std::sqrt(theta * theta + 1));
                const Real c = 1 / std::sqrt(t * t + 1);
                const Real s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const Real akp = a[k][p], akr = a[k][r];
                    a[k][p] = c * akp - s * akr;
                    a[k][r] = s * akp + c * akr;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const Real apk = a[p][k], ark = a[r][k];
                    a[p][k] = c * apk - s * ark;
                    a[r][k] = s * apk + c * ark;
                }
            }
    }
    Vec ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
    std::sort(ev.begin(), ev.end());
    return ev;
}

/// Central difference of f along coordinate k with step h.
inline double central_difference(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x,
                                 std::size_t k, double h) {
    const double x0 = x[k];
    x[k] = x0 + h;
    const double up = f(x);
    x[k] = x0 - h;
    const double down = f(x);
    return (up - down) / (2 * h);
}

/// Second-order central-difference Hessian with per-axis steps h[k].
inline std::vector<std::vector<double>> central_hessian(const std::function<double(const std::vector<double>&)>& f,
                                                        const std::vector<double>& x, const std::vector<double>& h) {
    const std::size_t n = x.size();
    std::vector<std::vector<double>> hess(n, std::vector<double>(n));
    const double f0 = f(x);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> p = x, m = x;
        p[i] += h[i];
        m[i] -= h[i];
        hess[i][i] = (f(p) - 2 * f0 + f(m)) / (h[i] * h[i]);
        for (std::size_t j = i + 1; j < n; ++j) {
            std::vector<double> pp = x, pm = x, mp = x, mm = x;
            pp[i] += h[i]; pp[j] += h[j];
            pm[i] += h[i]; pm[j] -= h[j];
            mp[i] -= h[i]; mp[j] += h[j];
            mm[i] -= h[i]; mm[j] -= h[j];
            hess[i][j] = hess[j][i] = (f(pp) - f(pm) - f(mp) + f(mm)) / (4 * h[i] * h[j]);
        }
    }
    return hess;
}

} // namespace oracle
