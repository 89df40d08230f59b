#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "zeitlin/matrix.hpp"

namespace zeitlin {

/// Small-scale mode bookkeeping: modes (l,m) with l_bar < l <= n-1,
/// -l <= m <= l, flattened in (l, m) order.
struct ModeRange {
    int n = 0;
    int l_bar = 0;

    int count() const {
        return n * n - (l_bar + 1) * (l_bar + 1);
    }
    int index(int l, int m) const {
        return l * l - (l_bar + 1) * (l_bar + 1) + m + l;
    }
    bool contains(int l, int m) const {
        return l > l_bar && l <= n - 1 && m >= -l && m <= l;
    }
    template <typename F>
    void for_each(F&& f) const {
        for (int l = l_bar + 1; l <= n - 1; ++l)
            for (int m = -l; m <= l; ++m) f(l, m);
    }
};

/// Per-mode drift/volatility of the small-scale coefficients, fitted from a
/// DNS trajectory, plus the seed of the increment stream it drives.
struct NoiseModel {
    int n = 0;
    int l_bar = 0;
    uint64_t seed = 0;
    double dt_fit = 0.0;
    std::vector<double> mu;     // indexed by ModeRange::index
    std::vector<double> sigma;  // >= 0

    ModeRange modes() const { return ModeRange{n, l_bar}; }

    void save(const std::string& path) const;
    static NoiseModel load(const std::string& path);
};

/// Small-scale coefficient samples on a uniform time grid.
struct CoeffTimeSeries {
    int n = 0;
    int l_bar = 0;
    std::vector<double> times;
    std::vector<std::vector<double>> samples; // samples[i] indexed by ModeRange

    ModeRange modes() const { return ModeRange{n, l_bar}; }
};

/// Increment statistics per mode: mu = mean(dw)/dt, sigma = std(dw)/sqrt(dt)
/// (unbiased). Requires >= 30 samples and uniform spacing.
NoiseModel estimate_noise_model(const CoeffTimeSeries& series, int l_bar,
                                uint64_t seed);

/// Brownian increments dB = mu*h + sigma*sqrt(h)*xi for one time step,
/// reproducible in (seed, l, m, step_index) independent of evaluation order.
struct ModeIncrements {
    int n = 0;
    int l_bar = 0;
    std::vector<double> db;

    ModeRange modes() const { return ModeRange{n, l_bar}; }
    double at(int l, int m) const { return db[modes().index(l, m)]; }
    bool all_zero() const {
        for (double x : db)
            if (x != 0.0) return false;
        return true;
    }
};

ModeIncrements sample_increments(const NoiseModel& model, double h,
                                 uint64_t step_index);

} // namespace zeitlin
