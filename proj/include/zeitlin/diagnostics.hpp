#pragma once

#include <array>
#include <span>
#include <vector>

#include "zeitlin/basis.hpp"

namespace zeitlin {

/// Time-indexed energy spectra E(l), l = 1..N-1 (index l-1).
struct SpectrumSeries {
    int n = 0;
    std::vector<double> times;
    std::vector<std::vector<double>> spectra;

    void append(double t, std::vector<double> e) {
        times.push_back(t);
        spectra.push_back(std::move(e));
    }
};

/// E(l) = 1/2 sum_m omega_lm^2 / (l(l+1)), l = 1..N-1.
std::vector<double> energy_spectrum(const BasisCache& basis, const CMatrix& w);

struct InvariantsReport {
    double energy = 0.0;              // sum_l E(l) = 1/2 Tr(P W)
    double enstrophy = 0.0;           // -Tr(W^2) = |W|_F^2
    std::vector<cplx> casimirs;       // Tr(W^k), k = 2..n_max (casimirs[k-2])
    std::array<double, 3> angular_momentum{}; // l = 1 coefficients (m = -1, 0, +1)
};

InvariantsReport invariants(const BasisCache& basis, const CMatrix& w, int n_max);

/// Per-degree energy transfer dE(l)/dt = sum_m omega_lm [P,W]_lm / (l(l+1)),
/// decomposed over the four large/small coupling pairs. Index l-1.
struct TransferReport {
    int l_bar = 0;
    std::vector<double> large_large;  // [P_bar,  W_bar]
    std::vector<double> large_small;  // [P_bar,  W_tilde]
    std::vector<double> small_large;  // [P_tilde, W_bar]
    std::vector<double> small_small;  // [P_tilde, W_tilde]
    std::vector<double> total;        // undecomposed [P, W]
    std::vector<double> f_abs;        // F(l) = |dE(l)/dt|
};

TransferReport energy_transfer(const BasisCache& basis, const CMatrix& w, int l_bar);

/// Two-segment log-log least-squares breakpoint fit of a spectrum.
struct KinkResult {
    int l_bar = 0;
    bool has_kink = false;
    double improvement = 0.0;  // 1 - rss_two_lines / rss_one_line
    double slope_left = 0.0;
    double slope_right = 0.0;
};

/// spectrum[l-1] = E(l); candidates keep >= 3 points in each segment;
/// ties break toward the smaller breakpoint.
KinkResult detect_kink(std::span<const double> spectrum, int l_lo, int l_hi,
                       double improvement_threshold = 0.25);

/// True when the window-averaged log-spectra of the last two consecutive
/// windows differ by no more than tol in relative L2 distance.
bool stationarity(const SpectrumSeries& series, double window, double tol = 0.05);

/// Root-mean-square of log E1(l) - log E2(l) over l = 1..l_max.
double spectrum_distance(std::span<const double> e1, std::span<const double> e2,
                         int l_max);

} // namespace zeitlin
