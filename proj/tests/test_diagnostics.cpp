#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"

#include "zeitlin/diagnostics.hpp"
#include "zeitlin/kernels.hpp"

#include <random>

using namespace zeitlin;
using test::random_skew;

TEST_CASE("energy_spectrum") {
    const BasisCache basis(10);

    SUBCASE("single mode: E(1) = a^2/4") {
        const double a = 1.7;
        const CMatrix w = a * basis_element(basis, 1, 0);
        const std::vector<double> e = energy_spectrum(basis, w);
        CHECK(e[0] == doctest::Approx(a * a / 4.0).epsilon(1e-12));
        for (size_t l = 2; l <= e.size(); ++l) CHECK(std::abs(e[l - 1]) <= 1e-15);
    }

    SUBCASE("zero state") {
        for (double v : energy_spectrum(basis, CMatrix(10))) CHECK(v == 0.0);
    }

    SUBCASE("matches the trace form 1/2 Re Tr(P W)") {
        const CMatrix w = random_skew(10, 1);
        const CMatrix p = solve_poisson(basis, w);
        CMatrix pw;
        kernels::matmul(p, w, pw);
        double sum = 0.0;
        for (double v : energy_spectrum(basis, w)) sum += v;
        CHECK(sum == doctest::Approx(0.5 * pw.trace().real()).epsilon(1e-10));
        CHECK(sum > 0.0);
    }
}

TEST_CASE("invariants") {
    const BasisCache basis(8);

    SUBCASE("C_2 of a unit basis element is -1") {
        const InvariantsReport rep = invariants(basis, basis_element(basis, 1, 0), 3);
        CHECK(rep.casimirs[0].real() == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(std::abs(rep.casimirs[0].imag()) <= 1e-12);
        CHECK(rep.enstrophy == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("zero state has zero invariants") {
        const InvariantsReport rep = invariants(basis, CMatrix(8), 4);
        CHECK(rep.energy == 0.0);
        CHECK(rep.enstrophy == 0.0);
        for (const cplx& c : rep.casimirs) CHECK(std::abs(c) == 0.0);
    }

    SUBCASE("C_2 = -sum of squared coefficients (Parseval)") {
        const CMatrix w = random_skew(8, 2);
        const InvariantsReport rep = invariants(basis, w, 4);
        const CoeffField c = analyze(basis, w, 7);
        CHECK(rep.casimirs[0].real() ==
              doctest::Approx(-c.sum_squares()).epsilon(1e-10));
        // even casimirs are real, odd imaginary, for skew-Hermitian states
        CHECK(std::abs(rep.casimirs[0].imag()) <=
              1e-12 * std::abs(rep.casimirs[0].real()));
        CHECK(std::abs(rep.casimirs[1].real()) <=
              1e-12 * std::max(std::abs(rep.casimirs[1].imag()), 1.0));
    }

    SUBCASE("angular momentum is the l = 1 coefficient triple") {
        CoeffField c(8, 2);
        c.at(1, -1) = 0.3;
        c.at(1, 0) = -0.8;
        c.at(1, 1) = 1.1;
        c.at(2, 2) = 5.0;
        const CMatrix w = synthesize(basis, c);
        const InvariantsReport rep = invariants(basis, w, 2);
        CHECK(rep.angular_momentum[0] == doctest::Approx(0.3).epsilon(1e-12));
        CHECK(rep.angular_momentum[1] == doctest::Approx(-0.8).epsilon(1e-12));
        CHECK(rep.angular_momentum[2] == doctest::Approx(1.1).epsilon(1e-12));
    }
}

TEST_CASE("energy_transfer") {
    const int n = 16;
    const BasisCache basis(n);
    const int l_bar = 4;

    SUBCASE("fully large-scale states have no small-scale couplings") {
        const CMatrix w = project_large(basis, random_skew(n, 3), l_bar);
        const TransferReport rep = energy_transfer(basis, w, l_bar);
        const double scale = w.frob_norm() * w.frob_norm();
        for (size_t i = 0; i < rep.large_small.size(); ++i) {
            CHECK(std::abs(rep.large_small[i]) <= 1e-12 * scale);
            CHECK(std::abs(rep.small_large[i]) <= 1e-12 * scale);
            CHECK(std::abs(rep.small_small[i]) <= 1e-12 * scale);
        }
    }

    SUBCASE("total transfer sums to zero (energy tangency)") {
        const CMatrix w = random_skew(n, 4);
        const TransferReport rep = energy_transfer(basis, w, l_bar);
        double sum = 0.0;
        for (double v : rep.total) sum += v;
        const CMatrix p = solve_poisson(basis, w);
        const double scale =
            p.frob_norm() * w.frob_norm() * std::max(w.frob_norm(), 1.0);
        CHECK(std::abs(sum) <= 1e-10 * scale);
    }

    SUBCASE("bilinearity: the four couplings sum to the undecomposed transfer") {
        const CMatrix w = random_skew(n, 5);
        const TransferReport rep = energy_transfer(basis, w, l_bar);
        double scale = 0.0;
        for (double v : rep.total) scale = std::max(scale, std::abs(v));
        for (size_t i = 0; i < rep.total.size(); ++i) {
            const double sum = rep.large_large[i] + rep.large_small[i] +
                               rep.small_large[i] + rep.small_small[i];
            CHECK(std::abs(sum - rep.total[i]) <= 1e-10 * std::max(scale, 1.0));
            CHECK(rep.f_abs[i] == std::abs(rep.total[i]));
        }
    }
}

TEST_CASE("detect_kink") {
    // piecewise power law, continuous at the breakpoint
    const auto make_two_slope = [](int n_levels, int b, double s1, double s2) {
        std::vector<double> e(n_levels);
        const double c2 = std::pow(static_cast<double>(b), s1 - s2);
        for (int l = 1; l <= n_levels; ++l)
            e[l - 1] = l <= b ? std::pow(static_cast<double>(l), s1)
                              : c2 * std::pow(static_cast<double>(l), s2);
        return e;
    };

    SUBCASE("recovers constructed breakpoints exactly") {
        const std::vector<double> e = make_two_slope(40, 12, -5.0, -1.0);
        const KinkResult k = detect_kink(e, 2, 39);
        CHECK(k.l_bar == 12);
        CHECK(k.has_kink);
        CHECK(k.slope_left == doctest::Approx(-5.0).epsilon(1e-6));
        CHECK(k.slope_right == doctest::Approx(-1.0).epsilon(1e-6));

        const std::vector<double> e2 = make_two_slope(64, 7, -4.0, -0.5);
        CHECK(detect_kink(e2, 2, 40).l_bar == 7);
    }

    SUBCASE("pure power law is flagged as no kink") {
        std::vector<double> e(40);
        for (int l = 1; l <= 40; ++l) e[l - 1] = 2.0 * std::pow(l, -3.0);
        const KinkResult k = detect_kink(e, 2, 39);
        CHECK_FALSE(k.has_kink);
    }

    SUBCASE("range and positivity validation") {
        std::vector<double> e = make_two_slope(20, 8, -5.0, -1.0);
        CHECK_THROWS_AS(detect_kink(e, 1, 15), invalid_size);   // lo < 2
        CHECK_THROWS_AS(detect_kink(e, 2, 20), invalid_size);   // hi > N-2
        CHECK_THROWS_AS(detect_kink(e, 5, 8), insufficient_data); // < 3 per segment
        e[6] = 0.0;
        CHECK_THROWS_AS(detect_kink(e, 2, 19), degenerate_input);
    }
}

TEST_CASE("stationarity") {
    const auto series_with = [](std::vector<double> a, std::vector<double> b) {
        SpectrumSeries s;
        s.n = 5;
        for (int i = 0; i <= 10; ++i)
            s.append(0.5 * i, i <= 5 ? a : b);
        return s;
    };

    SUBCASE("time-constant spectrum is stationary") {
        const SpectrumSeries s = series_with({1.0, 0.5, 0.2, 0.1}, {1.0, 0.5, 0.2, 0.1});
        CHECK(stationarity(s, 2.5, 0.05));
    }

    SUBCASE("doubled spectrum between the windows is not") {
        const SpectrumSeries s = series_with({1.0, 0.5, 0.2, 0.1}, {2.0, 1.0, 0.4, 0.2});
        CHECK_FALSE(stationarity(s, 2.5, 0.05));
    }

    SUBCASE("insufficient span throws") {
        const SpectrumSeries s = series_with({1.0, 0.5, 0.2, 0.1}, {1.0, 0.5, 0.2, 0.1});
        CHECK_THROWS_AS(stationarity(s, 3.0, 0.05), insufficient_data);
    }
}

TEST_CASE("spectrum_distance") {
    const std::vector<double> e1 = {1.0, 0.5, 0.25, 0.125};

    SUBCASE("identical spectra are at distance zero") {
        CHECK(spectrum_distance(e1, e1, 4) == 0.0);
    }

    SUBCASE("a factor of ten is ln 10") {
        std::vector<double> e2 = e1;
        for (double& v : e2) v *= 10.0;
        CHECK(spectrum_distance(e1, e2, 4) ==
              doctest::Approx(2.302585092994046).epsilon(1e-12));
    }

    SUBCASE("non-positive entries are rejected") {
        std::vector<double> e2 = e1;
        e2[2] = 0.0;
        CHECK_THROWS_AS(spectrum_distance(e1, e2, 4), degenerate_input);
        CHECK_THROWS_AS(spectrum_distance(e1, e1, 5), invalid_size);
    }
}
