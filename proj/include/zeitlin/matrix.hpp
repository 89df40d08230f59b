#pragma once

#include <complex>
#include <vector>
#include <cmath>
#include <cstddef>

#include "zeitlin/errors.hpp"

namespace zeitlin {

using cplx = std::complex<double>;

/// Dense square complex matrix, row-major contiguous storage.
/// Vorticity states W (and derived P, W-bar, W-tilde, q, r) are stored in
/// this type; skew-Hermiticity and zero trace are contracts of the producing
/// operations, checked by the helpers below rather than enforced per element.
class CMatrix {
  public:
    CMatrix() = default;
    explicit CMatrix(int n) : n_(n), a_(static_cast<size_t>(n) * n) {
        if (n < 1) throw invalid_size("CMatrix: size must be >= 1");
    }

    int n() const { return n_; }

    cplx& operator()(int r, int c) { return a_[static_cast<size_t>(r) * n_ + c]; }
    const cplx& operator()(int r, int c) const { return a_[static_cast<size_t>(r) * n_ + c]; }

    cplx* data() { return a_.data(); }
    const cplx* data() const { return a_.data(); }
    size_t size() const { return a_.size(); }

    void set_zero() { std::fill(a_.begin(), a_.end(), cplx(0.0, 0.0)); }

    cplx trace() const {
        cplx t(0.0, 0.0);
        for (int j = 0; j < n_; ++j) t += (*this)(j, j);
        return t;
    }

    double frob_norm_sq() const {
        double s = 0.0;
        for (const cplx& z : a_) s += std::norm(z);
        return s;
    }
    double frob_norm() const { return std::sqrt(frob_norm_sq()); }

    bool operator==(const CMatrix& o) const = default;

  private:
    int n_ = 0;
    std::vector<cplx> a_;
};

inline void require_same_size(const CMatrix& a, const CMatrix& b) {
    if (a.n() != b.n()) throw size_mismatch("matrix sizes differ");
}

CMatrix adjoint(const CMatrix& a);

/// max |a(j,k) + conj(a(k,j))|, the deviation from skew-Hermiticity
double skew_defect(const CMatrix& a);

inline bool is_skew_hermitian(const CMatrix& a, double tol_rel = 1e-12) {
    return skew_defect(a) <= tol_rel * std::max(a.frob_norm(), 1e-300);
}

/// Frobenius inner product Re Tr(a^dagger b)
double frob_inner(const CMatrix& a, const CMatrix& b);

/// (w - w^dagger)/2 minus the trace part; restores the structural invariants
/// drifted by floating point. Idempotent up to round-off.
CMatrix structural_reprojection(const CMatrix& w);

CMatrix operator+(const CMatrix& a, const CMatrix& b);
CMatrix operator-(const CMatrix& a, const CMatrix& b);
CMatrix operator*(double s, const CMatrix& a);

/// Spectral coefficients omega^{lm} of a vorticity matrix in the real
/// orthonormal basis, 1 <= l <= l_max, -l <= m <= l (no l = 0 slot: the
/// basis spans trace-free matrices only). Flat layout: (l,m) -> l^2+l+m-1.
class CoeffField {
  public:
    CoeffField() = default;
    CoeffField(int n, int l_max)
        : n_(n), l_max_(l_max),
          v_(static_cast<size_t>(l_max) * (l_max + 2), 0.0) {
        if (n < 2) throw invalid_size("CoeffField: n must be >= 2");
        if (l_max < 1 || l_max > n - 1)
            throw invalid_size("CoeffField: l_max out of range [1, n-1]");
    }

    int n() const { return n_; }
    int l_max() const { return l_max_; }

    static size_t flat_index(int l, int m) {
        return static_cast<size_t>(l) * l + l + m - 1;
    }

    double& at(int l, int m) { return v_[flat_index(l, m)]; }
    double at(int l, int m) const { return v_[flat_index(l, m)]; }

    std::vector<double>& values() { return v_; }
    const std::vector<double>& values() const { return v_; }

    double sum_squares() const {
        double s = 0.0;
        for (double x : v_) s += x * x;
        return s;
    }

    bool operator==(const CoeffField& o) const = default;

  private:
    int n_ = 0;
    int l_max_ = 0;
    std::vector<double> v_;
};

} // namespace zeitlin
