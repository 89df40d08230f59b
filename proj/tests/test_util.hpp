#pragma once

// Shared helpers for the test suites: seeded random states and the dense
// Casimir oracle the per-diagonal Laplacian construction is checked against.
// The oracle builds the operator W -> -sum_a [S_a, [S_a, W]] from standard
// spin-s matrices and never touches the per-diagonal code paths.

#include "zeitlin/matrix.hpp"

#include <Eigen/Dense>

#include <random>

namespace zeitlin::test {

inline CMatrix random_skew(int n, unsigned seed, double scale = 1.0) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> dist(0.0, scale);
    CMatrix w(n);
    for (int r = 0; r < n; ++r) {
        w(r, r) = cplx(0.0, dist(gen));
        for (int c = r + 1; c < n; ++c) {
            const cplx z(dist(gen), dist(gen));
            w(r, c) = z;
            w(c, r) = -std::conj(z);
        }
    }
    const cplx shift = w.trace() / static_cast<double>(n);
    for (int j = 0; j < n; ++j) w(j, j) -= shift;
    return w;
}

inline CMatrix random_dense(int n, unsigned seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    CMatrix w(n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) w(r, c) = cplx(dist(gen), dist(gen));
    return w;
}

// standard spin-s generators, s = (n-1)/2; [S_1, S_2] = i S_3
struct SpinMatrices {
    Eigen::MatrixXcd s1, s2, s3;

    explicit SpinMatrices(int n) {
        const double s = 0.5 * (n - 1);
        Eigen::MatrixXcd sp = Eigen::MatrixXcd::Zero(n, n);
        for (int r = 0; r + 1 < n; ++r)
            sp(r, r + 1) = std::sqrt((r + 1.0) * (n - r - 1.0));
        const Eigen::MatrixXcd sm = sp.adjoint();
        s1 = 0.5 * (sp + sm);
        s2 = cplx(0.0, -0.5) * (sp - sm);
        s3 = Eigen::MatrixXcd::Zero(n, n);
        for (int r = 0; r < n; ++r) s3(r, r) = s - r;
    }
};

inline Eigen::MatrixXcd to_eigen(const CMatrix& w) {
    Eigen::MatrixXcd m(w.n(), w.n());
    for (int r = 0; r < w.n(); ++r)
        for (int c = 0; c < w.n(); ++c) m(r, c) = w(r, c);
    return m;
}

inline CMatrix from_eigen(const Eigen::MatrixXcd& m) {
    CMatrix w(static_cast<int>(m.rows()));
    for (int r = 0; r < w.n(); ++r)
        for (int c = 0; c < w.n(); ++c) w(r, c) = m(r, c);
    return w;
}

// dense oracle application of the Laplacian: -sum_a [S_a, [S_a, W]]
inline CMatrix dense_laplacian_apply(const CMatrix& w) {
    const int n = w.n();
    const SpinMatrices spin(n);
    const Eigen::MatrixXcd m = to_eigen(w);
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
    for (const Eigen::MatrixXcd* s : {&spin.s1, &spin.s2, &spin.s3}) {
        const Eigen::MatrixXcd inner = (*s) * m - m * (*s);
        acc -= (*s) * inner - inner * (*s);
    }
    return from_eigen(acc);
}

// the same operator as a dense n^2 x n^2 matrix on vectorized states
inline Eigen::MatrixXcd dense_laplacian_operator(int n) {
    Eigen::MatrixXcd op(n * n, n * n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            CMatrix unit(n);
            unit(j, k) = 1.0;
            const CMatrix img = dense_laplacian_apply(unit);
            const int col = j * n + k;
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) op(r * n + c, col) = img(r, c);
        }
    return op;
}

} // namespace zeitlin::test
