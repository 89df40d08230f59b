#pragma once

#include "zeitlin/matrix.hpp"

// Dense matrix kernels. The zeitlin::kernels versions parallelize over output
// rows with OpenMP; every output element is produced by exactly one thread
// with a fixed accumulation order, so results are bitwise independent of the
// schedule and thread count. zeitlin::ref holds plain serial implementations
// kept as the reference for equivalence tests and the kernel benchmark.

namespace zeitlin::kernels {

/// out = a * b
void matmul(const CMatrix& a, const CMatrix& b, CMatrix& out);

/// out = a*b - b*a for arbitrary square inputs
void commutator(const CMatrix& a, const CMatrix& b, CMatrix& out);

/// out = a*b - (a*b)^dagger; equals [a,b] when a, b are skew-Hermitian
/// (one multiply instead of two). Used on the dynamics hot path.
void commutator_skew(const CMatrix& a, const CMatrix& b, CMatrix& out);

/// y += alpha * x
void add_scaled(CMatrix& y, cplx alpha, const CMatrix& x);

} // namespace zeitlin::kernels

namespace zeitlin::ref {

void matmul(const CMatrix& a, const CMatrix& b, CMatrix& out);
void commutator(const CMatrix& a, const CMatrix& b, CMatrix& out);
void commutator_skew(const CMatrix& a, const CMatrix& b, CMatrix& out);

} // namespace zeitlin::ref
