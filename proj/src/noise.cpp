#include "zeitlin/noise.hpp"

#include "zeitlin/rng.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <memory>

namespace zeitlin {

NoiseModel estimate_noise_model(const CoeffTimeSeries& series, int l_bar,
                                uint64_t seed) {
    if (series.l_bar != l_bar)
        throw size_mismatch("estimate_noise_model: series l_bar mismatch");
    const size_t count = series.times.size();
    if (count < 30)
        throw insufficient_data("estimate_noise_model: need >= 30 samples");

    const double dt = series.times[1] - series.times[0];
    if (dt <= 0.0)
        throw insufficient_data("estimate_noise_model: non-increasing times");
    for (size_t i = 1; i < count; ++i) {
        const double step = series.times[i] - series.times[i - 1];
        if (std::abs(step - dt) > 1e-9 * std::abs(dt))
            throw insufficient_data("estimate_noise_model: non-uniform spacing");
    }

    NoiseModel model;
    model.n = series.n;
    model.l_bar = l_bar;
    model.seed = seed;
    model.dt_fit = dt;
    const int nm = model.modes().count();
    model.mu.assign(nm, 0.0);
    model.sigma.assign(nm, 0.0);

    const size_t nincr = count - 1;
    const double sqrt_dt = std::sqrt(dt);
    for (int k = 0; k < nm; ++k) {
        double mean = 0.0;
        for (size_t i = 0; i + 1 < count; ++i)
            mean += series.samples[i + 1][k] - series.samples[i][k];
        mean /= static_cast<double>(nincr);
        double var = 0.0;
        for (size_t i = 0; i + 1 < count; ++i) {
            const double d = series.samples[i + 1][k] - series.samples[i][k] - mean;
            var += d * d;
        }
        var /= static_cast<double>(nincr - 1);
        model.mu[k] = mean / dt;
        model.sigma[k] = std::sqrt(var) / sqrt_dt;
    }
    return model;
}

ModeIncrements sample_increments(const NoiseModel& model, double h,
                                 uint64_t step_index) {
    if (h <= 0.0) throw invalid_size("sample_increments: h must be > 0");
    ModeIncrements inc;
    inc.n = model.n;
    inc.l_bar = model.l_bar;
    const ModeRange range = model.modes();
    inc.db.assign(range.count(), 0.0);
    const double sqrt_h = std::sqrt(h);
    range.for_each([&](int l, int m) {
        const int k = range.index(l, m);
        const double mu = model.mu[k];
        const double sigma = model.sigma[k];
        if (mu == 0.0 && sigma == 0.0) return;
        const double xi = rng::normal_at(model.seed, rng::kDomainNoise, l, m, step_index);
        inc.db[k] = mu * h + sigma * sqrt_h * xi;
    });
    return inc;
}

// ---------------------------------------------------------------------------
// text serialization
// ---------------------------------------------------------------------------

void NoiseModel::save(const std::string& path) const {
    std::unique_ptr<FILE, int (*)(FILE*)> f(std::fopen(path.c_str(), "w"), &std::fclose);
    if (!f) throw io_error("cannot open for writing: " + path);
    std::fprintf(f.get(), "# zeitlin noise model v1\n");
    std::fprintf(f.get(), "n %d\n", n);
    std::fprintf(f.get(), "l_bar %d\n", l_bar);
    std::fprintf(f.get(), "dt_fit %.17g\n", dt_fit);
    std::fprintf(f.get(), "seed %" PRIu64 "\n", seed);
    const ModeRange range = modes();
    std::fprintf(f.get(), "modes %d\n", range.count());
    std::fprintf(f.get(), "# l m mu sigma\n");
    range.for_each([&](int l, int m) {
        const int k = range.index(l, m);
        std::fprintf(f.get(), "%d %d %.17g %.17g\n", l, m, mu[k], sigma[k]);
    });
}

NoiseModel NoiseModel::load(const std::string& path) {
    std::unique_ptr<FILE, int (*)(FILE*)> f(std::fopen(path.c_str(), "r"), &std::fclose);
    if (!f) throw io_error("cannot open noise model: " + path);

    char header[64];
    if (!std::fgets(header, sizeof header, f.get()) ||
        std::string(header).rfind("# zeitlin noise model v1", 0) != 0)
        throw io_error("not a zeitlin noise model file: " + path);

    NoiseModel model;
    int declared = 0;
    if (std::fscanf(f.get(), "n %d\n", &model.n) != 1 ||
        std::fscanf(f.get(), "l_bar %d\n", &model.l_bar) != 1 ||
        std::fscanf(f.get(), "dt_fit %lg\n", &model.dt_fit) != 1 ||
        std::fscanf(f.get(), "seed %" SCNu64 "\n", &model.seed) != 1 ||
        std::fscanf(f.get(), "modes %d\n", &declared) != 1)
        throw io_error("malformed noise model header: " + path);

    const ModeRange range = model.modes();
    if (declared != range.count())
        throw io_error("noise model mode count mismatch: " + path);
    model.mu.assign(declared, 0.0);
    model.sigma.assign(declared, 0.0);

    if (!std::fgets(header, sizeof header, f.get()))
        throw io_error("truncated noise model: " + path);
    for (int i = 0; i < declared; ++i) {
        int l = 0, m = 0;
        double mu = 0.0, sigma = 0.0;
        if (std::fscanf(f.get(), "%d %d %lg %lg\n", &l, &m, &mu, &sigma) != 4)
            throw io_error("truncated noise model table: " + path);
        if (!range.contains(l, m))
            throw io_error("noise model mode out of range: " + path);
        model.mu[range.index(l, m)] = mu;
        model.sigma[range.index(l, m)] = sigma;
    }
    return model;
}

} // namespace zeitlin
