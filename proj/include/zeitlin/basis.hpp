#pragma once

#include <vector>

#include "zeitlin/matrix.hpp"

namespace zeitlin {

/// Restriction of the discrete Laplacian to one matrix diagonal of offset m.
/// The operator is real symmetric tridiagonal of size N-m; its eigenvectors
/// define the quantized spherical-harmonic basis on that diagonal and its
/// eigenvalues are exactly {-l(l+1) : l = m..N-1}.
struct DiagonalBlock {
    int m = 0;
    int size = 0;
    std::vector<double> diag;     // tridiagonal main diagonal, length size
    std::vector<double> offdiag;  // tridiagonal off-diagonal, length size-1
    // eigenvectors, row-major: row k (contiguous, length size) is the unit
    // eigenvector for degree l = m + k, first nonzero entry positive
    std::vector<double> eigvec;
    std::vector<double> eigval;   // -l(l+1), stored exactly
    // LDL^T factors of the tridiagonal (nonsingular for m >= 1)
    std::vector<double> ldl_d;
    std::vector<double> ldl_l;

    const double* vec(int l) const {
        return eigvec.data() + static_cast<size_t>(l - m) * size;
    }
};

/// Precomputed per-diagonal eigenstructure of the discrete Laplacian on
/// su(N). Immutable after construction; safe to share across threads.
class BasisCache {
  public:
    explicit BasisCache(int n);

    int n() const { return n_; }

    /// ladder coefficients c[i] = sqrt(i*(N-i)), i = 0..N
    const std::vector<double>& ladder() const { return ladder_; }
    /// squared ladder coefficients, exact products i*(N-i)
    const std::vector<double>& ladder_sq() const { return ladder_sq_; }

    const DiagonalBlock& diagonal(int m) const { return blocks_[m]; }

  private:
    int n_ = 0;
    std::vector<double> ladder_;
    std::vector<double> ladder_sq_;
    std::vector<DiagonalBlock> blocks_;
};

/// w -> Laplacian(w), the per-entry tridiagonal stencil. O(N^2).
void laplacian_apply_into(const BasisCache& basis, const CMatrix& w, CMatrix& out);
CMatrix laplacian_apply(const BasisCache& basis, const CMatrix& w);

/// Solves Laplacian(P) = w for the unique trace-free P. Input must be
/// trace-free skew-Hermitian; throws degenerate_input otherwise. O(N^2).
void solve_poisson_into(const BasisCache& basis, const CMatrix& w, CMatrix& out);
CMatrix solve_poisson(const BasisCache& basis, const CMatrix& w);

/// Coefficients <T_lm, w> up to degree l_max under the real-part Frobenius
/// inner product. Input is assumed skew-Hermitian (only the upper triangle
/// and diagonal are read). With strict_trace, a matrix whose trace defect
/// exceeds tolerance is rejected; otherwise the l = 0 part is ignored.
void analyze_into(const BasisCache& basis, const CMatrix& w, int l_max,
                  CoeffField& out, bool strict_trace = false);
CoeffField analyze(const BasisCache& basis, const CMatrix& w, int l_max,
                   bool strict_trace = false);

/// Sum of coeff(l,m) * T_lm; skew-Hermitian and trace-free by construction.
void synthesize_into(const BasisCache& basis, const CoeffField& c, CMatrix& out);
CMatrix synthesize(const BasisCache& basis, const CoeffField& c);

/// Orthogonal projection onto degrees l <= l_bar (analyze then synthesize).
/// Result is banded: entries with |row-col| > l_bar are exactly zero.
/// l_bar = N-1 returns the input unchanged. O(N * l_bar^2).
void project_large_into(const BasisCache& basis, const CMatrix& w, int l_bar, CMatrix& out);
CMatrix project_large(const BasisCache& basis, const CMatrix& w, int l_bar);

/// The basis matrix T_lm itself (unit-coefficient synthesis).
CMatrix basis_element(const BasisCache& basis, int l, int m);

namespace ref {
// Serial reference transforms, same arithmetic order as the parallel ones.
void laplacian_apply_into(const BasisCache& basis, const CMatrix& w, CMatrix& out);
void solve_poisson_into(const BasisCache& basis, const CMatrix& w, CMatrix& out);
void analyze_into(const BasisCache& basis, const CMatrix& w, int l_max, CoeffField& out);
void synthesize_into(const BasisCache& basis, const CoeffField& c, CMatrix& out);
} // namespace ref

} // namespace zeitlin
