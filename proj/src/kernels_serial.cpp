// Serial reference kernels. Same accumulation order as the OpenMP versions
// so outputs are expected to match bitwise; see tests/test_kernels.cpp and
// tools/bench_kernels.cpp.

#include "zeitlin/kernels.hpp"

namespace zeitlin::ref {

void matmul(const CMatrix& a, const CMatrix& b, CMatrix& out) {
    require_same_size(a, b);
    const int n = a.n();
    if (out.n() != n) out = CMatrix(n);
    out.set_zero();
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const cplx aik = a(i, k);
            for (int j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
        }
}

void commutator(const CMatrix& a, const CMatrix& b, CMatrix& out) {
    require_same_size(a, b);
    const int n = a.n();
    if (out.n() != n) out = CMatrix(n);
    out.set_zero();
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const cplx aik = a(i, k);
            for (int j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
        }
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const cplx bik = b(i, k);
            for (int j = 0; j < n; ++j) out(i, j) -= bik * a(k, j);
        }
}

void commutator_skew(const CMatrix& a, const CMatrix& b, CMatrix& out) {
    CMatrix prod;
    matmul(a, b, prod);
    const int n = a.n();
    if (out.n() != n) out = CMatrix(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out(i, j) = prod(i, j) - std::conj(prod(j, i));
}

} // namespace zeitlin::ref
