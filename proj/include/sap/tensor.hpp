#pragma once

// Minimal dense tensor storage for the toy decoder. Everything is double
// precision and row-major; shapes stay small enough that clarity beats
// cache tricks.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sap {

using Vector = std::vector<double>;

struct Matrix {
    std::size_t rows = 0, cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    double* row(std::size_t i) { return data.data() + i * cols; }
    const double* row(std::size_t i) const { return data.data() + i * cols; }

    bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }
};

// y += M x for row-major M (rows x cols), x of length cols.
inline void matvec_acc(const Matrix& m, const double* x, double* y) {
    for (std::size_t i = 0; i < m.rows; ++i) {
        const double* r = m.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols; ++j) s += r[j] * x[j];
        y[i] += s;
    }
}

// y += M^T x for row-major M, x of length rows, y of length cols.
inline void matvec_t_acc(const Matrix& m, const double* x, double* y) {
    for (std::size_t i = 0; i < m.rows; ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        const double* r = m.row(i);
        for (std::size_t j = 0; j < m.cols; ++j) y[j] += xi * r[j];
    }
}

// G += a b^T (outer product accumulation into a rows(a) x rows(b) matrix).
inline void outer_acc(Matrix& g, const double* a, const double* b) {
    for (std::size_t i = 0; i < g.rows; ++i) {
        const double ai = a[i];
        if (ai == 0.0) continue;
        double* r = g.row(i);
        for (std::size_t j = 0; j < g.cols; ++j) r[j] += ai * b[j];
    }
}

inline double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x / std::sqrt(2.0))); }

inline double gelu_derivative(double x) {
    const double cdf = 0.5 * (1.0 + std::erf(x / std::sqrt(2.0)));
    const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.14159265358979323846);
    return cdf + x * pdf;
}

inline double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

}  // namespace sap
