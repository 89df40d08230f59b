#include "zeitlin/integrator.hpp"

#include "zeitlin/kernels.hpp"

#include <cmath>

namespace zeitlin {

namespace {

const NoiseAggregate& zero_aggregate(int n) {
    static thread_local NoiseAggregate agg;
    if (agg.q.n() != n) {
        agg.q = CMatrix(n);
        agg.r = CMatrix(n);
        agg.zero = true;
    }
    return agg;
}

bool state_ok(const CMatrix& w, double blow_up_norm) {
    const double f = w.frob_norm();
    return std::isfinite(f) && f <= blow_up_norm;
}

} // namespace

CMatrix heun_strat_step(const CMatrix& state, double h, const DriftFn& drift,
                        const DiffusionFn& diffusion, const NoiseAggregate& agg) {
    const CMatrix k1 = drift(state);

    CMatrix predictor = state;
    kernels::add_scaled(predictor, h, k1);
    CMatrix g1;
    if (!agg.zero) {
        g1 = diffusion(state, agg);
        kernels::add_scaled(predictor, 1.0, g1);
    }

    const CMatrix k2 = drift(predictor);

    CMatrix out = state;
    CMatrix sum = k1 + k2;
    kernels::add_scaled(out, 0.5 * h, sum);
    if (!agg.zero) {
        const CMatrix g2 = diffusion(predictor, agg);
        sum = g1 + g2;
        kernels::add_scaled(out, 0.5, sum);
    }
    return out;
}

CMatrix heun_det_step(const CMatrix& state, double h, const DriftFn& drift) {
    return heun_strat_step(state, h, drift, DiffusionFn{}, zero_aggregate(state.n()));
}

Trajectory integrate(const CMatrix& initial, ClosureKind closure, int l_bar,
                     const NoiseModel* noise, const StepperConfig& cfg,
                     const BasisCache& basis, const SnapshotFn& on_snapshot) {
    const int n = basis.n();
    if (initial.n() != n) throw size_mismatch("integrate: state size mismatch");
    if (cfg.h <= 0.0) throw invalid_size("integrate: h must be > 0");
    if (cfg.reproject_every < 1 || cfg.snapshot_every < 1)
        throw invalid_size("integrate: cadences must be >= 1");
    if (is_reduced(closure) && (l_bar < 1 || l_bar > n - 1))
        throw invalid_size("integrate: l_bar out of range for a reduced closure");
    if (is_stochastic(closure)) {
        if (!noise) throw config_error("integrate: stochastic closure needs a noise model");
        if (noise->n != n || noise->l_bar != l_bar)
            throw config_error("integrate: noise model does not match n/l_bar");
    }

    const int pi_level = is_reduced(closure) ? l_bar : n - 1;
    const DriftFn drift = [&](const CMatrix& w) {
        return reduced_drift(basis, w, pi_level);
    };
    const DiffusionFn diffusion =
        closure == ClosureKind::salt_reduced
            ? DiffusionFn([&](const CMatrix& w, const NoiseAggregate& agg) {
                  return salt_diffusion(basis, w, agg, l_bar);
              })
        : closure == ClosureKind::energy_preserving_reduced
            ? DiffusionFn([&](const CMatrix& w, const NoiseAggregate& agg) {
                  return epn_diffusion(basis, w, agg, l_bar);
              })
            : DiffusionFn{};

    const uint64_t n_steps = static_cast<uint64_t>(std::llround(cfg.t_end / cfg.h));
    const double blow_up_norm = 1e6 * std::max(initial.frob_norm(), 1.0);

    Trajectory traj;
    traj.spectra.n = n;
    CMatrix state = initial;

    const auto record = [&](uint64_t step, double t) {
        traj.times.push_back(t);
        traj.states.push_back(state);
        traj.spectra.append(t, energy_spectrum(basis, state));
        if (on_snapshot) on_snapshot(step, t, state);
    };

    record(0, 0.0);
    traj.last_good_time = 0.0;

    CMatrix prev;
    for (uint64_t step = 0; step < n_steps; ++step) {
        prev = state;
        if (is_stochastic(closure)) {
            const ModeIncrements inc = sample_increments(*noise, cfg.h, step);
            const NoiseAggregate agg = build_noise_aggregates(basis, inc, l_bar);
            state = heun_strat_step(state, cfg.h, drift, diffusion, agg);
        } else {
            state = heun_det_step(state, cfg.h, drift);
        }
        if ((step + 1) % static_cast<uint64_t>(cfg.reproject_every) == 0)
            state = structural_reprojection(state);

        const double t = static_cast<double>(step + 1) * cfg.h;
        if (!state_ok(state, blow_up_norm)) {
            // keep the last good state as the final snapshot
            if (traj.times.empty() || traj.times.back() != traj.last_good_time) {
                state = prev;
                record(step, traj.last_good_time);
            }
            traj.status = RunStatus::blew_up;
            return traj;
        }
        traj.last_good_time = t;
        traj.steps_done = step + 1;
        if ((step + 1) % static_cast<uint64_t>(cfg.snapshot_every) == 0 ||
            step + 1 == n_steps)
            record(step + 1, t);
    }
    return traj;
}

} // namespace zeitlin
