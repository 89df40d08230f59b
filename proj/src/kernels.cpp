#include "zeitlin/kernels.hpp"

namespace zeitlin {

CMatrix adjoint(const CMatrix& a) {
    const int n = a.n();
    CMatrix out(n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) out(r, c) = std::conj(a(c, r));
    return out;
}

double skew_defect(const CMatrix& a) {
    const int n = a.n();
    double d = 0.0;
    for (int r = 0; r < n; ++r)
        for (int c = r; c < n; ++c)
            d = std::max(d, std::abs(a(r, c) + std::conj(a(c, r))));
    return d;
}

double frob_inner(const CMatrix& a, const CMatrix& b) {
    require_same_size(a, b);
    double s = 0.0;
    const cplx* pa = a.data();
    const cplx* pb = b.data();
    for (size_t i = 0; i < a.size(); ++i)
        s += pa[i].real() * pb[i].real() + pa[i].imag() * pb[i].imag();
    return s;
}

CMatrix operator+(const CMatrix& a, const CMatrix& b) {
    require_same_size(a, b);
    CMatrix out = a;
    cplx* po = out.data();
    const cplx* pb = b.data();
    for (size_t i = 0; i < out.size(); ++i) po[i] += pb[i];
    return out;
}

CMatrix operator-(const CMatrix& a, const CMatrix& b) {
    require_same_size(a, b);
    CMatrix out = a;
    cplx* po = out.data();
    const cplx* pb = b.data();
    for (size_t i = 0; i < out.size(); ++i) po[i] -= pb[i];
    return out;
}

CMatrix operator*(double s, const CMatrix& a) {
    CMatrix out = a;
    cplx* po = out.data();
    for (size_t i = 0; i < out.size(); ++i) po[i] *= s;
    return out;
}

CMatrix structural_reprojection(const CMatrix& w) {
    const int n = w.n();
    CMatrix out(n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            out(r, c) = 0.5 * (w(r, c) - std::conj(w(c, r)));
    const cplx shift = out.trace() / static_cast<double>(n);
    for (int j = 0; j < n; ++j) out(j, j) -= shift;
    return out;
}

} // namespace zeitlin

namespace zeitlin::kernels {

void matmul(const CMatrix& a, const CMatrix& b, CMatrix& out) {
    require_same_size(a, b);
    const int n = a.n();
    if (out.n() != n) out = CMatrix(n);
    const cplx* pa = a.data();
    const cplx* pb = b.data();
    cplx* po = out.data();

#pragma omp parallel for schedule(static) if (n >= 48)
    for (int i = 0; i < n; ++i) {
        cplx* row = po + static_cast<size_t>(i) * n;
        for (int j = 0; j < n; ++j) row[j] = cplx(0.0, 0.0);
        for (int k = 0; k < n; ++k) {
            const cplx aik = pa[static_cast<size_t>(i) * n + k];
            const cplx* brow = pb + static_cast<size_t>(k) * n;
            for (int j = 0; j < n; ++j) row[j] += aik * brow[j];
        }
    }
}

void commutator(const CMatrix& a, const CMatrix& b, CMatrix& out) {
    require_same_size(a, b);
    const int n = a.n();
    if (out.n() != n) out = CMatrix(n);
    const cplx* pa = a.data();
    const cplx* pb = b.data();
    cplx* po = out.data();

#pragma omp parallel for schedule(static) if (n >= 48)
    for (int i = 0; i < n; ++i) {
        cplx* row = po + static_cast<size_t>(i) * n;
        for (int j = 0; j < n; ++j) row[j] = cplx(0.0, 0.0);
        for (int k = 0; k < n; ++k) {
            const cplx aik = pa[static_cast<size_t>(i) * n + k];
            const cplx* brow = pb + static_cast<size_t>(k) * n;
            for (int j = 0; j < n; ++j) row[j] += aik * brow[j];
        }
        for (int k = 0; k < n; ++k) {
            const cplx bik = pb[static_cast<size_t>(i) * n + k];
            const cplx* arow = pa + static_cast<size_t>(k) * n;
            for (int j = 0; j < n; ++j) row[j] -= bik * arow[j];
        }
    }
}

void commutator_skew(const CMatrix& a, const CMatrix& b, CMatrix& out) {
    require_same_size(a, b);
    const int n = a.n();
    CMatrix prod;
    matmul(a, b, prod);
    if (out.n() != n) out = CMatrix(n);
    const cplx* pm = prod.data();
    cplx* po = out.data();
#pragma omp parallel for schedule(static) if (n >= 96)
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            po[static_cast<size_t>(i) * n + j] =
                pm[static_cast<size_t>(i) * n + j] -
                std::conj(pm[static_cast<size_t>(j) * n + i]);
}

void add_scaled(CMatrix& y, cplx alpha, const CMatrix& x) {
    require_same_size(y, x);
    cplx* py = y.data();
    const cplx* px = x.data();
    const size_t sz = y.size();
#pragma omp parallel for schedule(static) if (sz >= 16384)
    for (size_t i = 0; i < sz; ++i) py[i] += alpha * px[i];
}

} // namespace zeitlin::kernels
