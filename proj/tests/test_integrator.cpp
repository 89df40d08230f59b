#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"

#include "zeitlin/integrator.hpp"

#include <random>

using namespace zeitlin;
using test::random_skew;

namespace {

NoiseAggregate scalar_aggregate(double db) {
    NoiseAggregate agg;
    agg.q = CMatrix(1);
    agg.r = CMatrix(1);
    agg.q(0, 0) = db;
    agg.zero = false;
    return agg;
}

NoiseModel flat_model(int n, int l_bar, double mu, double sigma, uint64_t seed) {
    NoiseModel m;
    m.n = n;
    m.l_bar = l_bar;
    m.seed = seed;
    m.dt_fit = 1.0;
    m.mu.assign(m.modes().count(), mu);
    m.sigma.assign(m.modes().count(), sigma);
    return m;
}

} // namespace

TEST_CASE("heun deterministic step") {
    SUBCASE("zero drift leaves the state unchanged") {
        const CMatrix w = random_skew(6, 1);
        const CMatrix out =
            heun_det_step(w, 0.5, [](const CMatrix& s) { return 0.0 * s; });
        CHECK(out == w);
    }

    SUBCASE("linear drift gives the exact quadratic expansion") {
        // h and lambda dyadic, so 1 + h l + (h l)^2 / 2 is exact in floating point
        const double h = 0.5, lambda = 1.0;
        const CMatrix w = random_skew(5, 2);
        const CMatrix out =
            heun_det_step(w, h, [&](const CMatrix& s) { return lambda * s; });
        const double factor = 1.0 + h * lambda + 0.5 * h * h * lambda * lambda;
        CHECK((out - factor * w).frob_norm() <= 1e-15 * w.frob_norm());
    }

    SUBCASE("self-convergence is second order on the full dynamics") {
        const int n = 16;
        const BasisCache basis(n);
        const CMatrix w0 = random_skew(n, 3, 0.5);
        const DriftFn f = [&](const CMatrix& s) { return dns_vector_field(basis, s); };

        const auto advance = [&](double h, double t_end) {
            CMatrix s = w0;
            const int steps = static_cast<int>(std::llround(t_end / h));
            for (int i = 0; i < steps; ++i) s = heun_det_step(s, h, f);
            return s;
        };

        const double T = 1.0;
        const CMatrix ref = advance(T / 256.0, T);
        const double e1 = (advance(0.25, T) - ref).frob_norm();
        const double e2 = (advance(0.125, T) - ref).frob_norm();
        const double ratio = e1 / e2;
        INFO("convergence ratio ", ratio);
        CHECK(ratio >= 3.5);
        CHECK(ratio <= 4.5);
    }
}

TEST_CASE("heun stratonovich step") {
    SUBCASE("zero noise is bitwise the deterministic step") {
        const BasisCache basis(8);
        const CMatrix w = random_skew(8, 4, 0.3);
        const DriftFn f = [&](const CMatrix& s) { return dns_vector_field(basis, s); };
        NoiseAggregate agg;
        agg.q = CMatrix(8);
        agg.r = CMatrix(8);
        agg.zero = true;
        const CMatrix det = heun_det_step(w, 0.25, f);
        const CMatrix strat = heun_strat_step(
            w, 0.25, f,
            [](const CMatrix& s, const NoiseAggregate&) { return 0.0 * s; }, agg);
        CHECK(det == strat);
    }

    SUBCASE("strong convergence on geometric Brownian motion") {
        // dX = X o dB has the exact solution X0 exp(B_t)
        const int paths = 1000;
        const int fine = 40; // increments per unit time at the finest level
        std::mt19937_64 gen(99);
        std::normal_distribution<double> dist;

        const DriftFn zero_drift = [](const CMatrix& s) { return 0.0 * s; };
        const DiffusionFn gbm = [](const CMatrix& s, const NoiseAggregate& agg) {
            return agg.q(0, 0).real() * s;
        };

        std::vector<double> err(3, 0.0);
        for (int p = 0; p < paths; ++p) {
            std::vector<double> db_fine(fine);
            double b_total = 0.0;
            for (double& db : db_fine) {
                db = dist(gen) * std::sqrt(1.0 / fine);
                b_total += db;
            }
            for (int level = 0; level < 3; ++level) {
                const int stride = 1 << (2 - level); // h = stride / fine
                CMatrix x(1);
                x(0, 0) = 1.0;
                for (int i = 0; i < fine; i += stride) {
                    double db = 0.0;
                    for (int k = 0; k < stride; ++k) db += db_fine[i + k];
                    x = heun_strat_step(x, stride * (1.0 / fine), zero_drift, gbm,
                                        scalar_aggregate(db));
                }
                err[level] += std::abs(x(0, 0).real() - std::exp(b_total));
            }
        }
        INFO("strong errors ", err[0], " ", err[1], " ", err[2]);
        CHECK(err[0] > err[1]);
        CHECK(err[1] > err[2]);
    }

    SUBCASE("salt closure step equals the hand-assembled two-stage update") {
        const int n = 8, l_bar = 2;
        const BasisCache basis(n);
        const CMatrix w = project_large(basis, random_skew(n, 5), l_bar);

        ModeIncrements inc;
        inc.n = n;
        inc.l_bar = l_bar;
        inc.db.assign(ModeRange{n, l_bar}.count(), 0.0);
        inc.db[inc.modes().index(4, 1)] = 0.3;
        const NoiseAggregate agg = build_noise_aggregates(basis, inc, l_bar);

        const double h = 0.25;
        const DriftFn a = [&](const CMatrix& s) { return reduced_drift(basis, s, l_bar); };
        const DiffusionFn g = [&](const CMatrix& s, const NoiseAggregate& ag) {
            return salt_diffusion(basis, s, ag, l_bar);
        };
        const CMatrix stepped = heun_strat_step(w, h, a, g, agg);

        const CMatrix k1 = a(w);
        const CMatrix g1 = g(w, agg);
        const CMatrix pred = w + h * k1 + g1;
        const CMatrix k2 = a(pred);
        const CMatrix g2 = g(pred, agg);
        const CMatrix manual = w + 0.5 * h * (k1 + k2) + 0.5 * (g1 + g2);

        CHECK((stepped - manual).frob_norm() <= 1e-14 * std::max(w.frob_norm(), 1.0));
    }
}

TEST_CASE("structural reprojection") {
    SUBCASE("exactly structured input is unchanged") {
        CMatrix w = random_skew(7, 6);
        // make the trace exactly zero the same way the reprojection does
        w = structural_reprojection(w);
        const CMatrix again = structural_reprojection(w);
        CHECK((again - w).frob_norm() <= 1e-15 * w.frob_norm());
    }

    SUBCASE("hermitian input collapses to zero") {
        const int n = 6;
        CMatrix w(n);
        std::mt19937_64 gen(8);
        std::normal_distribution<double> dist;
        for (int r = 0; r < n; ++r) {
            w(r, r) = dist(gen);
            for (int c = r + 1; c < n; ++c) {
                const cplx z(dist(gen), dist(gen));
                w(r, c) = z;
                w(c, r) = std::conj(z);
            }
        }
        CHECK(structural_reprojection(w).frob_norm() <= 1e-14 * w.frob_norm());
    }

    SUBCASE("output satisfies both invariants at machine precision") {
        const CMatrix w = test::random_dense(9, 9);
        const CMatrix out = structural_reprojection(w);
        CHECK(skew_defect(out) <= 1e-15 * out.frob_norm());
        CHECK(std::abs(out.trace()) <= 1e-14 * out.frob_norm());
    }
}

TEST_CASE("integrate") {
    const int n = 16;
    const BasisCache basis(n);

    SUBCASE("t_end = 0 returns only the initial state") {
        const CMatrix w = random_skew(n, 10);
        const Trajectory traj =
            integrate(w, ClosureKind::full_dns, 0, nullptr, {0.25, 0.0, 1, 1}, basis);
        REQUIRE(traj.times.size() == 1);
        CHECK(traj.states[0] == w);
        CHECK(traj.status == RunStatus::completed);
    }

    SUBCASE("deterministic reduced with l_bar = n-1 equals full dns bitwise") {
        const CMatrix w = random_skew(n, 11, 0.4);
        const StepperConfig cfg{0.1, 2.0, 1, 2};
        const Trajectory a = integrate(w, ClosureKind::full_dns, 0, nullptr, cfg, basis);
        const Trajectory b = integrate(w, ClosureKind::deterministic_reduced, n - 1,
                                       nullptr, cfg, basis);
        REQUIRE(a.states.size() == b.states.size());
        for (size_t i = 0; i < a.states.size(); ++i) CHECK(a.states[i] == b.states[i]);
    }

    SUBCASE("snapshots keep the structural invariants") {
        const CMatrix w = random_skew(n, 12, 0.5);
        const Trajectory traj = integrate(w, ClosureKind::full_dns, 0, nullptr,
                                          {0.1, 3.0, 1, 3}, basis);
        for (const CMatrix& s : traj.states) {
            CHECK(skew_defect(s) <= 1e-10 * s.frob_norm());
            CHECK(std::abs(s.trace()) <= 1e-10 * s.frob_norm());
        }
    }

    SUBCASE("reduced closures stay in the large-scale subspace") {
        const int l_bar = 4;
        const CMatrix w = project_large(basis, random_skew(n, 13, 0.5), l_bar);
        const NoiseModel noise = flat_model(n, l_bar, 0.0, 0.05, 21);
        const Trajectory traj = integrate(w, ClosureKind::salt_reduced, l_bar, &noise,
                                          {0.1, 2.0, 1, 4}, basis);
        CHECK(traj.status == RunStatus::completed);
        for (const CMatrix& s : traj.states)
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c)
                    if (std::abs(r - c) > l_bar) CHECK(s(r, c) == cplx(0.0, 0.0));
    }

    SUBCASE("identical seeds reproduce the trajectory bitwise") {
        const int l_bar = 5;
        const CMatrix w = project_large(basis, random_skew(n, 14, 0.5), l_bar);
        const NoiseModel noise = flat_model(n, l_bar, 0.0, 0.1, 33);
        const StepperConfig cfg{0.1, 2.0, 1, 2};
        const Trajectory a =
            integrate(w, ClosureKind::energy_preserving_reduced, l_bar, &noise, cfg, basis);
        const Trajectory b =
            integrate(w, ClosureKind::energy_preserving_reduced, l_bar, &noise, cfg, basis);
        REQUIRE(a.states.size() == b.states.size());
        for (size_t i = 0; i < a.states.size(); ++i) CHECK(a.states[i] == b.states[i]);
    }

    SUBCASE("energy and enstrophy drift stay small and shrink with h") {
        const CMatrix w0 = random_skew(n, 15, 0.5);
        const auto drift_of = [&](double h) {
            const Trajectory traj = integrate(w0, ClosureKind::full_dns, 0, nullptr,
                                              {h, 5.0, 1, 1000000}, basis);
            const InvariantsReport i0 = invariants(basis, traj.states.front(), 2);
            const InvariantsReport i1 = invariants(basis, traj.states.back(), 2);
            return std::make_pair(std::abs(i1.energy / i0.energy - 1.0),
                                  std::abs(i1.enstrophy / i0.enstrophy - 1.0));
        };
        const auto [de1, dz1] = drift_of(0.05);
        const auto [de2, dz2] = drift_of(0.025);
        INFO("energy drift ", de1, " -> ", de2, ", enstrophy drift ", dz1, " -> ", dz2);
        CHECK(de1 <= 1e-3);
        CHECK(dz1 <= 1e-3);
        CHECK(de2 < de1);
        CHECK(dz2 < dz1);
    }

    SUBCASE("blow-up is reported with the last good state retained") {
        const CMatrix w = 1e100 * random_skew(n, 16);
        const Trajectory traj = integrate(w, ClosureKind::full_dns, 0, nullptr,
                                          {0.25, 10.0, 1, 1}, basis);
        CHECK(traj.status == RunStatus::blew_up);
        CHECK(traj.last_good_time < 10.0);
        REQUIRE(!traj.states.empty());
        const double f = traj.states.back().frob_norm();
        CHECK(std::isfinite(f));
    }

    SUBCASE("stochastic closure without a model is rejected") {
        const CMatrix w = random_skew(n, 17);
        CHECK_THROWS_AS(integrate(w, ClosureKind::salt_reduced, 4, nullptr,
                                  {0.1, 1.0, 1, 1}, basis),
                        config_error);
    }
}
