#pragma once

// Cyclic Jacobi eigensolver for dense symmetric matrices. Rotations are
// numerically unconditional and the convergence test (off-diagonal
// Frobenius norm) is cheap to audit, which matters more here than speed:
// graph matrices at desk scale stay small.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sap {

struct SquareMatrix {
    std::size_t n = 0;
    std::vector<double> a;  // row-major, n*n

    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t dim) : n(dim), a(dim * dim, 0.0) {}

    double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
    double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

struct EigenConvergenceError : std::runtime_error {
    EigenConvergenceError(std::size_t sweeps, double resid)
        : std::runtime_error("Jacobi eigensolver did not converge in " + std::to_string(sweeps) +
                             " sweeps; off-diagonal residual " + std::to_string(resid)),
          sweeps_used(sweeps), residual(resid) {}
    std::size_t sweeps_used;
    double residual;
};

// Full eigenvalue list, sorted by decreasing value. Input must be symmetric
// to 1e-12; convergence means the off-diagonal Frobenius norm falls below
// 1e-10 within 100 sweeps.
inline std::vector<double> symmetric_eigenvalues(const SquareMatrix& mat) {
    constexpr double kSymTol = 1e-12;
    constexpr double kOffTol = 1e-10;
    constexpr std::size_t kMaxSweeps = 100;

    const std::size_t n = mat.n;
    if (mat.a.size() != n * n)
        throw std::invalid_argument("symmetric_eigenvalues: malformed matrix storage");
    if (n == 0) return {};

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(mat.at(i, j) - mat.at(j, i)) > kSymTol)
                throw std::invalid_argument(
                    "symmetric_eigenvalues: input not symmetric at (" + std::to_string(i) + "," +
                    std::to_string(j) + "), difference " +
                    std::to_string(std::abs(mat.at(i, j) - mat.at(j, i))));

    std::vector<double> a = mat.a;
    auto idx = [n](std::size_t i, std::size_t j) { return i * n + j; };

    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) s += a[idx(p, q)] * a[idx(p, q)];
        return std::sqrt(2.0 * s);
    };

    double resid = off_norm();
    std::size_t sweep = 0;
    while (resid > kOffTol) {
        if (sweep >= kMaxSweeps) throw EigenConvergenceError(sweep, resid);
        ++sweep;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[idx(p, q)];
                if (apq == 0.0) continue;
                const double app = a[idx(p, p)];
                const double aqq = a[idx(q, q)];
                const double theta = (aqq - app) / (2.0 * apq);
                double t;
                if (std::abs(theta) > 1e150) {
                    t = 1.0 / (2.0 * theta);
                } else {
                    t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                a[idx(p, p)] = app - t * apq;
                a[idx(q, q)] = aqq + t * apq;
                a[idx(p, q)] = 0.0;
                a[idx(q, p)] = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const double aip = a[idx(i, p)];
                    const double aiq = a[idx(i, q)];
                    a[idx(i, p)] = c * aip - s * aiq;
                    a[idx(p, i)] = a[idx(i, p)];
                    a[idx(i, q)] = s * aip + c * aiq;
                    a[idx(q, i)] = a[idx(i, q)];
                }
            }
        }
        resid = off_norm();
    }

    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a[idx(i, i)];
    std::sort(eig.begin(), eig.end(), std::greater<double>());
    return eig;
}

}  // namespace sap
