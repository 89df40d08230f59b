#include "zeitlin/sphere.hpp"

#include <cmath>

namespace zeitlin {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kSqrt2 = 1.4142135623730951;

// triangular index for (l, m), 0 <= m <= l
inline size_t tri(int l, int m) {
    return static_cast<size_t>(l) * (l + 1) / 2 + m;
}

/// Fully normalized associated Legendre values K_l^m(cos theta) and their
/// theta-derivatives at one node; real Y_lm = [1 | sqrt(2) cos | sqrt(2) sin]
/// x K_l^m. Standard stable recurrences, no Condon-Shortley phase.
struct LegendreTable {
    int l_max;
    std::vector<double> val;
    std::vector<double> dval;

    LegendreTable(int lmax, double x, double s) : l_max(lmax) {
        const size_t sz = tri(lmax, lmax) + 1;
        val.assign(sz, 0.0);
        dval.assign(sz, 0.0);

        val[tri(0, 0)] = std::sqrt(1.0 / (4.0 * kPi));
        for (int m = 1; m <= lmax; ++m)
            val[tri(m, m)] = std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * val[tri(m - 1, m - 1)];
        for (int m = 0; m < lmax; ++m)
            val[tri(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * x * val[tri(m, m)];
        for (int m = 0; m <= lmax; ++m)
            for (int l = m + 2; l <= lmax; ++l) {
                const double mm = static_cast<double>(m) * m;
                const double al = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - mm));
                const double al1 = std::sqrt((4.0 * (l - 1.0) * (l - 1.0) - 1.0) / ((l - 1.0) * (l - 1.0) - mm));
                val[tri(l, m)] = al * (x * val[tri(l - 1, m)] - val[tri(l - 2, m)] / al1);
            }
        // d/dtheta via (l x K_l^m - e_l^m K_{l-1}^m) / sin(theta)
        for (int m = 0; m <= lmax; ++m)
            for (int l = m; l <= lmax; ++l) {
                const double below = (l - 1 >= m) ? val[tri(l - 1, m)] : 0.0;
                const double e = (l - 1 >= m)
                                     ? std::sqrt((2.0 * l + 1.0) * (static_cast<double>(l) * l - static_cast<double>(m) * m) / (2.0 * l - 1.0))
                                     : 0.0;
                dval[tri(l, m)] = (l * x * val[tri(l, m)] - e * below) / s;
            }
    }
};

} // namespace

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw invalid_size("gauss_legendre: n must be >= 1");
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // node i counted from x near +1
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

SphereGrid make_gauss_grid(int n_theta, int n_phi) {
    if (n_theta < 1 || n_phi < 1)
        throw invalid_size("make_gauss_grid: grid sizes must be >= 1");
    SphereGrid g;
    std::vector<double> x;
    gauss_legendre(n_theta, x, g.weight);
    g.theta.resize(n_theta);
    for (int i = 0; i < n_theta; ++i) g.theta[i] = std::acos(x[i]);
    g.phi.resize(n_phi);
    for (int j = 0; j < n_phi; ++j) g.phi[j] = 2.0 * kPi * j / n_phi;
    return g;
}

namespace {

// Fourier-assembled evaluation. mode = 0: values, 1: d/dtheta, 2: d/dphi.
GridField evaluate_impl(const CoeffField& c, const SphereGrid& grid, int mode) {
    const int l_max = c.l_max();
    const int nt = grid.n_theta();
    const int np = grid.n_phi();
    GridField f;
    f.n_theta = nt;
    f.n_phi = np;
    f.values.assign(static_cast<size_t>(nt) * np, 0.0);

#pragma omp parallel for schedule(static)
    for (int i = 0; i < nt; ++i) {
        const double x = std::cos(grid.theta[i]);
        const double s = std::sin(grid.theta[i]);
        const LegendreTable tab(l_max, x, s);

        std::vector<double> ca(l_max + 1, 0.0); // cos(m phi) amplitudes
        std::vector<double> cb(l_max + 1, 0.0); // sin(m phi) amplitudes
        const std::vector<double>& k = (mode == 1) ? tab.dval : tab.val;
        for (int l = 1; l <= l_max; ++l) {
            ca[0] += c.at(l, 0) * k[tri(l, 0)];
            for (int m = 1; m <= l; ++m) {
                ca[m] += kSqrt2 * c.at(l, m) * k[tri(l, m)];
                cb[m] += kSqrt2 * c.at(l, -m) * k[tri(l, m)];
            }
        }
        for (int j = 0; j < np; ++j) {
            double v = (mode == 2) ? 0.0 : ca[0];
            for (int m = 1; m <= l_max; ++m) {
                const double cph = std::cos(m * grid.phi[j]);
                const double sph = std::sin(m * grid.phi[j]);
                if (mode == 2)
                    v += m * (-ca[m] * sph + cb[m] * cph);
                else
                    v += ca[m] * cph + cb[m] * sph;
            }
            f.at(i, j) = v;
        }
    }
    return f;
}

} // namespace

GridField sph_evaluate(const CoeffField& c, const SphereGrid& grid) {
    if (grid.n_theta() < c.l_max() + 1)
        throw quadrature_error("sph_evaluate: grid under-resolved for l_max");
    return evaluate_impl(c, grid, 0);
}

GridField sph_evaluate(const CoeffField& c, int n_theta, int n_phi) {
    return sph_evaluate(c, make_gauss_grid(n_theta, n_phi));
}

CoeffField sph_analyze_grid(const GridField& f, const SphereGrid& grid, int n,
                            int l_max) {
    const int nt = grid.n_theta();
    const int np = grid.n_phi();
    if (f.n_theta != nt || f.n_phi != np)
        throw size_mismatch("sph_analyze_grid: field/grid mismatch");
    if (nt < l_max + 1 || np < 2 * l_max + 1)
        throw quadrature_error("sph_analyze_grid: grid under-resolved for l_max");

    CoeffField c(n, l_max);
    const double dphi = 2.0 * kPi / np;

    // per-node contributions, reduced serially in node order below so the
    // result does not depend on the thread schedule
    const size_t ncoef = CoeffField::flat_index(l_max, l_max) + 1;
    std::vector<double> slab(static_cast<size_t>(nt) * ncoef, 0.0);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < nt; ++i) {
        const double x = std::cos(grid.theta[i]);
        const double s = std::sin(grid.theta[i]);
        const LegendreTable tab(l_max, x, s);
        std::vector<double> fa(l_max + 1, 0.0), fb(l_max + 1, 0.0);
        for (int j = 0; j < np; ++j) {
            const double v = f.at(i, j) * dphi;
            for (int m = 0; m <= l_max; ++m) {
                fa[m] += v * std::cos(m * grid.phi[j]);
                if (m > 0) fb[m] += v * std::sin(m * grid.phi[j]);
            }
        }
        const double w = grid.weight[i];
        double* row = slab.data() + static_cast<size_t>(i) * ncoef;
        for (int l = 1; l <= l_max; ++l) {
            row[CoeffField::flat_index(l, 0)] = w * tab.val[tri(l, 0)] * fa[0];
            for (int m = 1; m <= l; ++m) {
                row[CoeffField::flat_index(l, m)] = w * kSqrt2 * tab.val[tri(l, m)] * fa[m];
                row[CoeffField::flat_index(l, -m)] = w * kSqrt2 * tab.val[tri(l, m)] * fb[m];
            }
        }
    }
    for (int i = 0; i < nt; ++i) {
        const double* row = slab.data() + static_cast<size_t>(i) * ncoef;
        for (size_t k = 0; k < ncoef; ++k) c.values()[k] += row[k];
    }
    return c;
}

GridField poisson_bracket_grid(const CoeffField& psi, const CoeffField& omega,
                               const SphereGrid& grid) {
    if (psi.n() != omega.n())
        throw size_mismatch("poisson_bracket_grid: field sizes differ");
    const GridField psi_t = evaluate_impl(psi, grid, 1);
    const GridField psi_p = evaluate_impl(psi, grid, 2);
    const GridField omg_t = evaluate_impl(omega, grid, 1);
    const GridField omg_p = evaluate_impl(omega, grid, 2);

    GridField out;
    out.n_theta = grid.n_theta();
    out.n_phi = grid.n_phi();
    out.values.resize(static_cast<size_t>(out.n_theta) * out.n_phi);
    for (int i = 0; i < out.n_theta; ++i) {
        const double inv_s = 1.0 / std::sin(grid.theta[i]);
        for (int j = 0; j < out.n_phi; ++j)
            out.at(i, j) =
                inv_s * (psi_t.at(i, j) * omg_p.at(i, j) - psi_p.at(i, j) * omg_t.at(i, j));
    }
    return out;
}

double sphere_integral(const GridField& f, const SphereGrid& grid) {
    const double dphi = 2.0 * kPi / grid.n_phi();
    double total = 0.0;
    for (int i = 0; i < f.n_theta; ++i) {
        double row = 0.0;
        for (int j = 0; j < f.n_phi; ++j) row += f.at(i, j);
        total += grid.weight[i] * row * dphi;
    }
    return total;
}

} // namespace zeitlin
