#include "zeitlin/basis.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace zeitlin {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2 = 0.7071067811865476;

// Tolerance for the trace check in solve_poisson / strict analyze: the l = 0
// direction has no preimage under the Laplacian.
constexpr double kTraceTolRel = 1e-8;

double dot(const double* a, const double* b, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

// ---- per-diagonal workers, shared by the parallel and serial front ends ----

void laplacian_rows(const BasisCache& basis, const CMatrix& w, CMatrix& out,
                    int r) {
    const int n = basis.n();
    const std::vector<double>& c = basis.ladder();
    const std::vector<double>& csq = basis.ladder_sq();
    for (int col = 0; col < n; ++col) {
        const double d =
            -(static_cast<double>(col - r) * (col - r) +
              0.5 * (csq[r] + csq[r + 1] + csq[col] + csq[col + 1]));
        cplx v = d * w(r, col);
        if (r > 0 && col > 0) v += c[r] * c[col] * w(r - 1, col - 1);
        if (r < n - 1 && col < n - 1) v += c[r + 1] * c[col + 1] * w(r + 1, col + 1);
        out(r, col) = v;
    }
}

// Solve L_m x = b with the precomputed LDL^T factors, tridiagonal L_m.
template <typename T>
void ldl_solve(const DiagonalBlock& blk, const T* b, T* x) {
    const int s = blk.size;
    x[0] = b[0];
    for (int j = 1; j < s; ++j) x[j] = b[j] - blk.ldl_l[j - 1] * x[j - 1];
    for (int j = 0; j < s; ++j) x[j] /= blk.ldl_d[j];
    for (int j = s - 2; j >= 0; --j) x[j] -= blk.ldl_l[j] * x[j + 1];
}

template <typename T>
void tridiag_apply(const DiagonalBlock& blk, const T* x, T* y) {
    const int s = blk.size;
    for (int j = 0; j < s; ++j) {
        T v = blk.diag[j] * x[j];
        if (j > 0) v += blk.offdiag[j - 1] * x[j - 1];
        if (j < s - 1) v += blk.offdiag[j] * x[j + 1];
        y[j] = v;
    }
}

void poisson_diagonal(const BasisCache& basis, const CMatrix& w, CMatrix& out,
                      int m) {
    const DiagonalBlock& blk = basis.diagonal(m);
    const int s = blk.size;

    if (m == 0) {
        // eigenbasis solve; deflates the l = 0 kernel direction exactly
        std::vector<double> y(s), t(s, 0.0), r(s), dt(s, 0.0);
        for (int j = 0; j < s; ++j) y[j] = w(j, j).imag();
        for (int l = 1; l < s; ++l) {
            const double* v = blk.vec(l);
            const double a = dot(v, y.data(), s) / blk.eigval[l];
            for (int j = 0; j < s; ++j) t[j] += a * v[j];
        }
        // one refinement pass against the tridiagonal form
        tridiag_apply(blk, t.data(), r.data());
        for (int j = 0; j < s; ++j) r[j] = y[j] - r[j];
        for (int l = 1; l < s; ++l) {
            const double* v = blk.vec(l);
            const double a = dot(v, r.data(), s) / blk.eigval[l];
            for (int j = 0; j < s; ++j) dt[j] += a * v[j];
        }
        for (int j = 0; j < s; ++j) out(j, j) = cplx(0.0, t[j] + dt[j]);
        return;
    }

    std::vector<cplx> b(s), x(s), r(s), dx(s);
    for (int j = 0; j < s; ++j) b[j] = w(j, j + m);
    ldl_solve(blk, b.data(), x.data());
    tridiag_apply(blk, x.data(), r.data());
    for (int j = 0; j < s; ++j) r[j] = b[j] - r[j];
    ldl_solve(blk, r.data(), dx.data());
    for (int j = 0; j < s; ++j) x[j] += dx[j];

    for (int j = 0; j < s; ++j) {
        out(j, j + m) = x[j];
        out(j + m, j) = -std::conj(x[j]);
    }
}

void analyze_diagonal(const BasisCache& basis, const CMatrix& w, int l_max,
                      CoeffField& out, int m) {
    const DiagonalBlock& blk = basis.diagonal(m);
    const int s = blk.size;
    if (m == 0) {
        std::vector<double> y(s);
        for (int j = 0; j < s; ++j) y[j] = w(j, j).imag();
        for (int l = 1; l <= l_max; ++l)
            out.at(l, 0) = dot(blk.vec(l), y.data(), s);
        return;
    }
    std::vector<double> re(s), im(s);
    for (int j = 0; j < s; ++j) {
        const cplx z = w(j, j + m);
        re[j] = z.real();
        im[j] = z.imag();
    }
    for (int l = m; l <= l_max; ++l) {
        const double* v = blk.vec(l);
        out.at(l, m) = kSqrt2 * dot(v, re.data(), s);
        out.at(l, -m) = kSqrt2 * dot(v, im.data(), s);
    }
}

void synthesize_diagonal(const BasisCache& basis, const CoeffField& c,
                         CMatrix& out, int m) {
    const DiagonalBlock& blk = basis.diagonal(m);
    const int s = blk.size;
    const int l_max = c.l_max();
    if (m == 0) {
        std::vector<double> t(s, 0.0);
        for (int l = 1; l <= l_max; ++l) {
            const double a = c.at(l, 0);
            if (a == 0.0) continue;
            const double* v = blk.vec(l);
            for (int j = 0; j < s; ++j) t[j] += a * v[j];
        }
        for (int j = 0; j < s; ++j) out(j, j) = cplx(0.0, t[j]);
        return;
    }
    std::vector<double> ar(s, 0.0), ai(s, 0.0);
    for (int l = m; l <= l_max; ++l) {
        const double ap = c.at(l, m);
        const double am = c.at(l, -m);
        const double* v = blk.vec(l);
        if (ap != 0.0)
            for (int j = 0; j < s; ++j) ar[j] += ap * v[j];
        if (am != 0.0)
            for (int j = 0; j < s; ++j) ai[j] += am * v[j];
    }
    for (int j = 0; j < s; ++j) {
        const cplx upper(kInvSqrt2 * ar[j], kInvSqrt2 * ai[j]);
        out(j, j + m) = upper;
        out(j + m, j) = -std::conj(upper);
    }
}

void check_trace_free(const CMatrix& w, const char* who) {
    const double defect = std::abs(w.trace());
    if (defect > kTraceTolRel * std::max(w.frob_norm(), 1e-300))
        throw degenerate_input(std::string(who) +
                               ": input has a nonzero trace (l = 0) component");
}

} // namespace

// ---------------------------------------------------------------------------
// construction
// ---------------------------------------------------------------------------

BasisCache::BasisCache(int n) : n_(n) {
    if (n < 2) throw invalid_size("BasisCache: n must be >= 2");

    ladder_.resize(n + 1);
    ladder_sq_.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        ladder_sq_[i] = static_cast<double>(i) * (n - i);
        ladder_[i] = std::sqrt(ladder_sq_[i]);
    }

    blocks_.resize(n);
#pragma omp parallel for schedule(dynamic)
    for (int m = 0; m < n; ++m) {
        DiagonalBlock& blk = blocks_[m];
        blk.m = m;
        const int s = n - m;
        blk.size = s;
        blk.diag.resize(s);
        blk.offdiag.resize(s > 1 ? s - 1 : 0);
        for (int j = 0; j < s; ++j)
            blk.diag[j] = -(static_cast<double>(m) * m +
                            0.5 * (ladder_sq_[j] + ladder_sq_[j + 1] +
                                   ladder_sq_[j + m] + ladder_sq_[j + m + 1]));
        for (int j = 0; j + 1 < s; ++j)
            blk.offdiag[j] = ladder_[j + 1] * ladder_[j + m + 1];

        blk.eigvec.assign(static_cast<size_t>(s) * s, 0.0);
        blk.eigval.resize(s);

        if (s == 1) {
            blk.eigvec[0] = 1.0;
        } else {
            Eigen::Map<const Eigen::VectorXd> dv(blk.diag.data(), s);
            Eigen::Map<const Eigen::VectorXd> ev(blk.offdiag.data(), s - 1);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
            es.computeFromTridiagonal(dv, ev, Eigen::ComputeEigenvectors);
            if (es.info() != Eigen::Success)
                throw std::runtime_error("BasisCache: tridiagonal eigensolve failed");
            // ascending eigenvalues: index i holds degree l = n-1-i
            for (int k = 0; k < s; ++k) {
                const int l = m + k;
                const int src = n - 1 - l;
                const double lam = -static_cast<double>(l) * (l + 1);
                if (std::abs(es.eigenvalues()(src) - lam) > 1e-8)
                    throw std::runtime_error(
                        "BasisCache: eigenvalue pattern violated");
                double* row = blk.eigvec.data() + static_cast<size_t>(k) * s;
                for (int j = 0; j < s; ++j) row[j] = es.eigenvectors()(j, src);
            }
        }
        for (int k = 0; k < s; ++k) {
            const int l = m + k;
            blk.eigval[k] = -static_cast<double>(l) * (l + 1);
            // sign convention: first nonzero entry positive
            double* row = blk.eigvec.data() + static_cast<size_t>(k) * s;
            double amax = 0.0;
            for (int j = 0; j < s; ++j) amax = std::max(amax, std::abs(row[j]));
            for (int j = 0; j < s; ++j) {
                if (std::abs(row[j]) > 1e-10 * amax) {
                    if (row[j] < 0.0)
                        for (int i = 0; i < s; ++i) row[i] = -row[i];
                    break;
                }
            }
        }
        // LDL^T factors (m >= 1 diagonals are nonsingular; unused for m = 0)
        if (m >= 1) {
            blk.ldl_d.resize(s);
            blk.ldl_l.resize(s > 1 ? s - 1 : 0);
            blk.ldl_d[0] = blk.diag[0];
            for (int j = 0; j + 1 < s; ++j) {
                blk.ldl_l[j] = blk.offdiag[j] / blk.ldl_d[j];
                blk.ldl_d[j + 1] = blk.diag[j + 1] - blk.ldl_l[j] * blk.offdiag[j];
            }
        }
    }
}

// ---------------------------------------------------------------------------
// operators
// ---------------------------------------------------------------------------

void laplacian_apply_into(const BasisCache& basis, const CMatrix& w, CMatrix& out) {
    const int n = basis.n();
    if (w.n() != n) throw size_mismatch("laplacian_apply: size mismatch");
    if (out.n() != n) out = CMatrix(n);
#pragma omp parallel for schedule(static) if (n >= 64)
    for (int r = 0; r < n; ++r) laplacian_rows(basis, w, out, r);
}

CMatrix laplacian_apply(const BasisCache& basis, const CMatrix& w) {
    CMatrix out;
    laplacian_apply_into(basis, w, out);
    return out;
}

void solve_poisson_into(const BasisCache& basis, const CMatrix& w, CMatrix& out) {
    const int n = basis.n();
    if (w.n() != n) throw size_mismatch("solve_poisson: size mismatch");
    check_trace_free(w, "solve_poisson");
    if (out.n() != n) out = CMatrix(n);
    out.set_zero();
#pragma omp parallel for schedule(dynamic) if (n >= 64)
    for (int m = 0; m < n; ++m) poisson_diagonal(basis, w, out, m);
}

CMatrix solve_poisson(const BasisCache& basis, const CMatrix& w) {
    CMatrix out;
    solve_poisson_into(basis, w, out);
    return out;
}

void analyze_into(const BasisCache& basis, const CMatrix& w, int l_max,
                  CoeffField& out, bool strict_trace) {
    const int n = basis.n();
    if (w.n() != n) throw size_mismatch("analyze: size mismatch");
    if (l_max < 1 || l_max > n - 1)
        throw invalid_size("analyze: l_max out of range [1, n-1]");
    if (strict_trace) check_trace_free(w, "analyze");
    if (out.n() != n || out.l_max() != l_max) out = CoeffField(n, l_max);
    // fork only when the transform is big enough to amortize it
    const bool par = static_cast<long>(n) * (l_max + 1) * (l_max + 1) >= (1L << 21);
#pragma omp parallel for schedule(dynamic) if (par)
    for (int m = 0; m <= l_max; ++m) analyze_diagonal(basis, w, l_max, out, m);
}

CoeffField analyze(const BasisCache& basis, const CMatrix& w, int l_max,
                   bool strict_trace) {
    CoeffField out;
    analyze_into(basis, w, l_max, out, strict_trace);
    return out;
}

void synthesize_into(const BasisCache& basis, const CoeffField& c, CMatrix& out) {
    const int n = basis.n();
    if (c.n() != n) throw size_mismatch("synthesize: size mismatch");
    if (out.n() != n) out = CMatrix(n);
    out.set_zero();
    const int l_max = c.l_max();
    const bool par = static_cast<long>(n) * (l_max + 1) * (l_max + 1) >= (1L << 21);
#pragma omp parallel for schedule(dynamic) if (par)
    for (int m = 0; m <= l_max; ++m) synthesize_diagonal(basis, c, out, m);
}

CMatrix synthesize(const BasisCache& basis, const CoeffField& c) {
    CMatrix out;
    synthesize_into(basis, c, out);
    return out;
}

void project_large_into(const BasisCache& basis, const CMatrix& w, int l_bar,
                        CMatrix& out) {
    const int n = basis.n();
    if (w.n() != n) throw size_mismatch("project_large: size mismatch");
    if (l_bar < 1 || l_bar > n - 1)
        throw invalid_size("project_large: l_bar out of range [1, n-1]");
    if (l_bar == n - 1) {
        out = w; // the projection is the identity, exactly
        return;
    }
    CoeffField c;
    analyze_into(basis, w, l_bar, c);
    synthesize_into(basis, c, out);
}

CMatrix project_large(const BasisCache& basis, const CMatrix& w, int l_bar) {
    CMatrix out;
    project_large_into(basis, w, l_bar, out);
    return out;
}

CMatrix basis_element(const BasisCache& basis, int l, int m) {
    if (l < 1 || l > basis.n() - 1 || std::abs(m) > l)
        throw invalid_size("basis_element: (l,m) out of range");
    CoeffField c(basis.n(), l);
    c.at(l, m) = 1.0;
    return synthesize(basis, c);
}

// ---------------------------------------------------------------------------
// serial reference transforms
// ---------------------------------------------------------------------------

namespace ref {

void laplacian_apply_into(const BasisCache& basis, const CMatrix& w, CMatrix& out) {
    const int n = basis.n();
    if (w.n() != n) throw size_mismatch("laplacian_apply: size mismatch");
    if (out.n() != n) out = CMatrix(n);
    for (int r = 0; r < n; ++r) laplacian_rows(basis, w, out, r);
}

void solve_poisson_into(const BasisCache& basis, const CMatrix& w, CMatrix& out) {
    const int n = basis.n();
    if (w.n() != n) throw size_mismatch("solve_poisson: size mismatch");
    check_trace_free(w, "solve_poisson");
    if (out.n() != n) out = CMatrix(n);
    out.set_zero();
    for (int m = 0; m < n; ++m) poisson_diagonal(basis, w, out, m);
}

void analyze_into(const BasisCache& basis, const CMatrix& w, int l_max,
                  CoeffField& out) {
    const int n = basis.n();
    if (w.n() != n) throw size_mismatch("analyze: size mismatch");
    if (l_max < 1 || l_max > n - 1)
        throw invalid_size("analyze: l_max out of range [1, n-1]");
    if (out.n() != n || out.l_max() != l_max) out = CoeffField(n, l_max);
    for (int m = 0; m <= l_max; ++m) analyze_diagonal(basis, w, l_max, out, m);
}

void synthesize_into(const BasisCache& basis, const CoeffField& c, CMatrix& out) {
    const int n = basis.n();
    if (c.n() != n) throw size_mismatch("synthesize: size mismatch");
    if (out.n() != n) out = CMatrix(n);
    out.set_zero();
    for (int m = 0; m <= c.l_max(); ++m) synthesize_diagonal(basis, c, out, m);
}

} // namespace ref

} // namespace zeitlin
