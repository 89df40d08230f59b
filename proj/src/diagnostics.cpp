#include "zeitlin/diagnostics.hpp"

#include "zeitlin/kernels.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace zeitlin {

namespace {

std::vector<double> spectrum_of_coeffs(const CoeffField& c) {
    const int l_max = c.l_max();
    std::vector<double> e(static_cast<size_t>(c.n()) - 1, 0.0);
    for (int l = 1; l <= l_max; ++l) {
        double s = 0.0;
        for (int m = -l; m <= l; ++m) s += c.at(l, m) * c.at(l, m);
        e[l - 1] = 0.5 * s / (static_cast<double>(l) * (l + 1));
    }
    return e;
}

// coefficient-space transfer sum_m a_lm b_lm / (l(l+1)) per degree
std::vector<double> coupling_transfer(const CoeffField& a, const CoeffField& b) {
    const int l_max = a.l_max();
    std::vector<double> t(static_cast<size_t>(a.n()) - 1, 0.0);
    for (int l = 1; l <= l_max; ++l) {
        double s = 0.0;
        for (int m = -l; m <= l; ++m) s += a.at(l, m) * b.at(l, m);
        t[l - 1] = s / (static_cast<double>(l) * (l + 1));
    }
    return t;
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rss = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y,
                 int lo, int hi) { // inclusive index range
    const int n = hi - lo + 1;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int i = lo; i <= hi; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    LineFit f;
    const double denom = n * sxx - sx * sx;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    for (int i = lo; i <= hi; ++i) {
        const double r = y[i] - (f.slope * x[i] + f.intercept);
        f.rss += r * r;
    }
    return f;
}

} // namespace

std::vector<double> energy_spectrum(const BasisCache& basis, const CMatrix& w) {
    return spectrum_of_coeffs(analyze(basis, w, basis.n() - 1));
}

InvariantsReport invariants(const BasisCache& basis, const CMatrix& w, int n_max) {
    const int n = basis.n();
    if (n_max < 2 || n_max > n)
        throw invalid_size("invariants: n_max out of range [2, n]");

    InvariantsReport rep;
    const CoeffField c = analyze(basis, w, n - 1);
    for (double e : spectrum_of_coeffs(c)) rep.energy += e;
    rep.enstrophy = w.frob_norm_sq();
    rep.angular_momentum = {c.at(1, -1), c.at(1, 0), c.at(1, 1)};

    // Casimirs Tr(W^k) from the spectrum of the Hermitian matrix -iW:
    // eigenvalues of W are i*h_j, so Tr(W^k) = i^k sum h_j^k.
    Eigen::MatrixXcd h(n, n);
    for (int r = 0; r < n; ++r)
        for (int col = 0; col < n; ++col)
            h(r, col) = cplx(0.0, -1.0) * w(r, col);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("invariants: eigensolve failed");

    rep.casimirs.resize(n_max - 1);
    std::vector<double> powers(n, 1.0);
    const cplx unit_i(0.0, 1.0);
    cplx ik = unit_i; // i^1
    for (int k = 2; k <= n_max; ++k) {
        ik *= unit_i;
        double s = 0.0;
        for (int j = 0; j < n; ++j) {
            powers[j] *= es.eigenvalues()(j);
            s += powers[j] * es.eigenvalues()(j);
        }
        rep.casimirs[k - 2] = ik * s;
    }
    return rep;
}

TransferReport energy_transfer(const BasisCache& basis, const CMatrix& w, int l_bar) {
    const int n = basis.n();
    if (l_bar < 1 || l_bar > n - 1)
        throw invalid_size("energy_transfer: l_bar out of range");

    const CoeffField cw = analyze(basis, w, n - 1);
    const CMatrix w_bar = project_large(basis, w, l_bar);
    // the subtraction leaves cancellation noise that can carry a stray trace
    // when w is (nearly) fully large-scale; restore the structure exactly
    const CMatrix w_til = structural_reprojection(w - w_bar);
    const CMatrix p_bar = solve_poisson(basis, w_bar);
    const CMatrix p_til = solve_poisson(basis, w_til);

    CMatrix comm;
    const auto coupling = [&](const CMatrix& p, const CMatrix& ww) {
        kernels::commutator_skew(p, ww, comm);
        return coupling_transfer(cw, analyze(basis, comm, n - 1));
    };

    TransferReport rep;
    rep.l_bar = l_bar;
    rep.large_large = coupling(p_bar, w_bar);
    rep.large_small = coupling(p_bar, w_til);
    rep.small_large = coupling(p_til, w_bar);
    rep.small_small = coupling(p_til, w_til);

    const CMatrix p = solve_poisson(basis, w);
    kernels::commutator_skew(p, w, comm);
    rep.total = coupling_transfer(cw, analyze(basis, comm, n - 1));
    rep.f_abs.resize(rep.total.size());
    for (size_t i = 0; i < rep.total.size(); ++i)
        rep.f_abs[i] = std::abs(rep.total[i]);
    return rep;
}

KinkResult detect_kink(std::span<const double> spectrum, int l_lo, int l_hi,
                       double improvement_threshold) {
    const int n_levels = static_cast<int>(spectrum.size());
    if (l_lo < 2 || l_hi > n_levels - 1 || l_hi <= l_lo)
        throw invalid_size("detect_kink: search range must lie within [2, N-2]");
    if (l_hi - l_lo + 1 < 5)
        throw insufficient_data("detect_kink: need >= 3 points per segment");

    const int count = l_hi - l_lo + 1;
    std::vector<double> x(count), y(count);
    for (int l = l_lo; l <= l_hi; ++l) {
        const double e = spectrum[l - 1];
        if (!(e > 0.0))
            throw degenerate_input("detect_kink: spectrum must be positive on the range");
        x[l - l_lo] = std::log(static_cast<double>(l));
        y[l - l_lo] = std::log(e);
    }

    const LineFit single = fit_line(x, y, 0, count - 1);

    KinkResult best;
    double best_rss = std::numeric_limits<double>::infinity();
    // segments [l_lo, b] and [b, l_hi] share the breakpoint, so a spectrum
    // that is continuous at the kink has a unique exact optimum; each segment
    // keeps >= 3 points
    for (int b = l_lo + 2; b <= l_hi - 2; ++b) {
        const int ib = b - l_lo;
        const LineFit left = fit_line(x, y, 0, ib);
        const LineFit right = fit_line(x, y, ib, count - 1);
        const double rss = left.rss + right.rss;
        if (rss < best_rss) {
            best_rss = rss;
            best.l_bar = b;
            best.slope_left = left.slope;
            best.slope_right = right.slope;
        }
    }

    const double floor = 1e-20 * count;
    best.improvement = single.rss > floor ? 1.0 - best_rss / single.rss : 0.0;
    best.has_kink = single.rss > floor && best.improvement >= improvement_threshold;
    return best;
}

bool stationarity(const SpectrumSeries& series, double window, double tol) {
    if (window <= 0.0) throw invalid_size("stationarity: window must be > 0");
    if (series.times.size() < 2)
        throw insufficient_data("stationarity: need at least two snapshots");
    const double t_end = series.times.back();
    const double t_begin = series.times.front();
    if (t_end - t_begin < 2.0 * window - 1e-12)
        throw insufficient_data("stationarity: series must span two windows");

    const size_t levels = series.spectra.front().size();
    std::vector<double> avg1(levels, 0.0), avg2(levels, 0.0);
    size_t n1 = 0, n2 = 0;
    for (size_t i = 0; i < series.times.size(); ++i) {
        const double t = series.times[i];
        if (t < t_end - 2.0 * window) continue;
        std::vector<double>& acc = (t < t_end - window) ? avg1 : avg2;
        size_t& cnt = (t < t_end - window) ? n1 : n2;
        for (size_t l = 0; l < levels; ++l) acc[l] += series.spectra[i][l];
        ++cnt;
    }
    if (n1 == 0 || n2 == 0)
        throw insufficient_data("stationarity: a window contains no snapshots");

    double diff_sq = 0.0, base_sq = 0.0;
    for (size_t l = 0; l < levels; ++l) {
        const double e1 = avg1[l] / n1;
        const double e2 = avg2[l] / n2;
        if (e1 <= 0.0 || e2 <= 0.0) continue;
        const double l1 = std::log(e1);
        const double d = std::log(e2) - l1;
        diff_sq += d * d;
        base_sq += l1 * l1;
    }
    if (diff_sq == 0.0) return true;
    if (base_sq == 0.0) return false;
    return std::sqrt(diff_sq / base_sq) <= tol;
}

double spectrum_distance(std::span<const double> e1, std::span<const double> e2,
                         int l_max) {
    if (l_max < 1 || l_max > static_cast<int>(std::min(e1.size(), e2.size())))
        throw invalid_size("spectrum_distance: l_max out of range");
    double s = 0.0;
    for (int l = 1; l <= l_max; ++l) {
        if (!(e1[l - 1] > 0.0) || !(e2[l - 1] > 0.0))
            throw degenerate_input("spectrum_distance: spectra must be positive");
        const double d = std::log(e1[l - 1]) - std::log(e2[l - 1]);
        s += d * d;
    }
    return std::sqrt(s / l_max);
}

} // namespace zeitlin
