#pragma once

#include <functional>
#include <vector>

#include "zeitlin/diagnostics.hpp"
#include "zeitlin/dynamics.hpp"

namespace zeitlin {

struct StepperConfig {
    double h = 0.25;
    double t_end = 250.0;
    int reproject_every = 1;
    int snapshot_every = 1;
};

using DriftFn = std::function<CMatrix(const CMatrix&)>;
using DiffusionFn = std::function<CMatrix(const CMatrix&, const NoiseAggregate&)>;

/// Heun predictor-corrector step for dW = f(W) dt; second order.
CMatrix heun_det_step(const CMatrix& state, double h, const DriftFn& drift);

/// Heun step for the Stratonovich SDE dW = a(W) dt + g(W) o dB. The same
/// aggregate increments feed the predictor and the corrector.
CMatrix heun_strat_step(const CMatrix& state, double h, const DriftFn& drift,
                        const DiffusionFn& diffusion, const NoiseAggregate& agg);

enum class RunStatus { completed, blew_up };

struct Trajectory {
    std::vector<double> times;
    std::vector<CMatrix> states;
    SpectrumSeries spectra;
    RunStatus status = RunStatus::completed;
    double last_good_time = 0.0;
    uint64_t steps_done = 0;
};

/// Optional per-snapshot hook (step index, time, state).
using SnapshotFn = std::function<void(uint64_t, double, const CMatrix&)>;

/// Advances the closure from t = 0 to t_end, recording snapshots and spectra
/// every snapshot_every steps. Noise is required exactly for the stochastic
/// closures; step indices key the increment stream. On NaN/Inf or a Frobenius
/// norm above 1e6 x initial, stops with status blew_up and the last good
/// state recorded.
Trajectory integrate(const CMatrix& initial, ClosureKind closure, int l_bar,
                     const NoiseModel* noise, const StepperConfig& cfg,
                     const BasisCache& basis, const SnapshotFn& on_snapshot = {});

} // namespace zeitlin
