// Small dense matrices and SVD for the structured low-rank machinery.
// Everything here targets desk-scale problems (dimensions <= 64).
#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "core.hpp"

namespace projlab {

struct Matrix {
    int rows = 0, cols = 0;
    std::vector<double> a;   // row-major

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), a(std::size_t(r) * c, 0.0) {}

    double& operator()(int i, int j) { return a[std::size_t(i) * cols + j]; }
    double operator()(int i, int j) const { return a[std::size_t(i) * cols + j]; }

    static Matrix from_rows(const std::vector<std::vector<double>>& rows_in)
    {
        if (rows_in.empty()) throw Error("Matrix: no rows");
        Matrix m(int(rows_in.size()), int(rows_in[0].size()));
        for (int i = 0; i < m.rows; ++i) {
            if (int(rows_in[i].size()) != m.cols) throw Error("Matrix: ragged rows");
            for (int j = 0; j < m.cols; ++j) m(i, j) = rows_in[i][j];
        }
        return m;
    }

    Point flat() const { return a; }

    static Matrix from_flat(const Point& v, int r, int c)
    {
        if (int(v.size()) != r * c) throw Error("Matrix: flat size mismatch");
        Matrix m(r, c);
        m.a = v;
        return m;
    }
};

inline double frob_norm(const Matrix& m)
{
    double s = 0.0;
    for (double v : m.a) s += v * v;
    return std::sqrt(s);
}

struct Svd {
    Matrix u;                    // rows x rows, orthogonal
    std::vector<double> sigma;   // nonincreasing, nonnegative, length min(rows, cols)
    Matrix v;                    // cols x cols, orthogonal
};

// Full SVD of a small dense matrix, M = U diag(sigma) V^T.
inline Svd svd_small(const Matrix& m)
{
    if (m.rows < 1 || m.cols < 1 || m.rows > 64 || m.cols > 64)
        throw Error("svd_small: dimensions must be in [1, 64]");
    for (double v : m.a)
        if (!std::isfinite(v)) throw Error("svd_small: non-finite entry");

    Eigen::MatrixXd em(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) em(i, j) = m(i, j);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(em, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Svd out;
    out.u = Matrix(m.rows, m.rows);
    out.v = Matrix(m.cols, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.rows; ++j) out.u(i, j) = svd.matrixU()(i, j);
    for (int i = 0; i < m.cols; ++i)
        for (int j = 0; j < m.cols; ++j) out.v(i, j) = svd.matrixV()(i, j);
    out.sigma.assign(svd.singularValues().data(),
                     svd.singularValues().data() + svd.singularValues().size());
    return out;
}

// U diag(sigma_kept) V^T where sigma_kept keeps exactly the listed indices.
inline Matrix svd_truncate(const Svd& s, const std::vector<int>& keep, int rows, int cols)
{
    Matrix r(rows, cols);
    for (int k : keep) {
        const double sk = s.sigma[std::size_t(k)];
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                r(i, j) += sk * s.u(i, k) * s.v(j, k);
    }
    return r;
}

} // namespace projlab
