#include "zeitlin/sphere.hpp"

#include "zeitlin/basis.hpp"
#include "zeitlin/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace zeitlin {

namespace {

int max_degree(const CoeffField& c) {
    int deg = 0;
    for (int l = 1; l <= c.l_max(); ++l)
        for (int m = -l; m <= l; ++m)
            if (c.at(l, m) != 0.0) deg = l;
    return deg;
}

CoeffField rescope(const CoeffField& src, int n, int l_max) {
    CoeffField out(n, l_max);
    const int copy_to = std::min(l_max, src.l_max());
    for (int l = 1; l <= copy_to; ++l)
        for (int m = -l; m <= l; ++m) out.at(l, m) = src.at(l, m);
    return out;
}

double coeff_distance(const CoeffField& a, const CoeffField& b) {
    double d = 0.0;
    const int l_max = std::min(a.l_max(), b.l_max());
    for (int l = 1; l <= l_max; ++l)
        for (int m = -l; m <= l; ++m)
            d = std::max(d, std::abs(a.at(l, m) - b.at(l, m)));
    return d;
}

} // namespace

double operator_norm(const CMatrix& a, double tol) {
    const int n = a.n();
    std::vector<cplx> v(n), av(n), w(n);
    // deterministic non-degenerate start vector
    for (int j = 0; j < n; ++j) v[j] = cplx(1.0 + 0.5 * std::sin(j + 1.0), 0.25 * std::cos(2.0 * j));
    double nv = 0.0;
    for (const cplx& z : v) nv += std::norm(z);
    nv = std::sqrt(nv);
    for (cplx& z : v) z /= nv;

    double sigma = 0.0;
    for (int iter = 0; iter < 10000; ++iter) {
        // av = A v, w = A^dagger av
        for (int r = 0; r < n; ++r) {
            cplx s(0.0, 0.0);
            for (int c = 0; c < n; ++c) s += a(r, c) * v[c];
            av[r] = s;
        }
        double n_av = 0.0;
        for (const cplx& z : av) n_av += std::norm(z);
        const double sigma_new = std::sqrt(n_av);
        if (sigma_new == 0.0) return 0.0;
        for (int c = 0; c < n; ++c) {
            cplx s(0.0, 0.0);
            for (int r = 0; r < n; ++r) s += std::conj(a(r, c)) * av[r];
            w[c] = s;
        }
        double nw = 0.0;
        for (const cplx& z : w) nw += std::norm(z);
        nw = std::sqrt(nw);
        for (int c = 0; c < n; ++c) v[c] = w[c] / nw;
        if (std::abs(sigma_new - sigma) <= tol * std::max(sigma_new, 1e-300)) {
            return sigma_new;
        }
        sigma = sigma_new;
    }
    return sigma;
}

std::vector<double> bracket_consistency(const CoeffField& psi,
                                        const CoeffField& omega,
                                        const std::vector<int>& n_list) {
    if (psi.n() != omega.n())
        throw size_mismatch("bracket_consistency: field sizes differ");
    if (n_list.empty())
        throw invalid_size("bracket_consistency: empty n list");

    const int l_psi = max_degree(psi);
    const int l_omega = max_degree(omega);
    const int l_in = std::max(l_psi, l_omega);
    const int n_min = *std::min_element(n_list.begin(), n_list.end());
    if (n_min < 2) throw invalid_size("bracket_consistency: n must be >= 2");
    if (l_in > n_min - 1)
        throw quadrature_error(
            "bracket_consistency: inputs not band-limited to min(n)-1");

    // the bracket of band limits l1, l2 is band-limited to l1 + l2
    const int l_br = std::max(l_psi + l_omega, 1);
    const SphereGrid grid = make_gauss_grid(2 * l_br + 2, std::max(4 * l_br, 8));

    // quadrature self-check: the grid must reproduce the inputs exactly
    {
        const GridField back = sph_evaluate(rescope(psi, psi.n(), std::max(l_psi, 1)), grid);
        const CoeffField round =
            sph_analyze_grid(back, grid, psi.n(), std::max(l_psi, 1));
        if (coeff_distance(round, psi) > 1e-8)
            throw quadrature_error(
                "bracket_consistency: quadrature failed to reproduce inputs");
    }

    const GridField bracket = poisson_bracket_grid(psi, omega, grid);

    std::vector<double> out;
    out.reserve(n_list.size());
    for (const int n : n_list) {
        const int l_keep = std::min(l_br, n - 1);
        const CoeffField cb = sph_analyze_grid(bracket, grid, n, l_keep);

        const BasisCache basis(n);
        const CMatrix lhs = synthesize(basis, cb);
        const CMatrix a = synthesize(basis, rescope(psi, n, std::max(l_psi, 1)));
        const CMatrix b = synthesize(basis, rescope(omega, n, std::max(l_omega, 1)));
        CMatrix comm;
        kernels::commutator(a, b, comm);
        const double scale = std::pow(static_cast<double>(n), 1.5);
        kernels::add_scaled(comm, -1.0 / scale, lhs);
        // comm now holds [a,b] - lhs/scale; norm scaled back up
        out.push_back(scale * operator_norm(comm));
    }
    return out;
}

} // namespace zeitlin
