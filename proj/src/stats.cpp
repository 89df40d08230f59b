#include "zeitlin/stats.hpp"

#include "zeitlin/errors.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace zeitlin {

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / 1.4142135623730951); }

std::vector<double> standardized_sorted(std::span<const double> samples,
                                        size_t min_count, const char* who) {
    const size_t n = samples.size();
    if (n < min_count)
        throw insufficient_data(std::string(who) + ": too few samples");

    double mean = 0.0;
    for (double x : samples) mean += x;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double x : samples) var += (x - mean) * (x - mean);
    var /= static_cast<double>(n - 1);
    if (var <= 0.0)
        throw degenerate_input(std::string(who) + ": zero sample variance");

    const double sd = std::sqrt(var);
    std::vector<double> z(samples.begin(), samples.end());
    for (double& x : z) x = (x - mean) / sd;
    std::sort(z.begin(), z.end());
    return z;
}

} // namespace

KsResult ks_normality(std::span<const double> samples) {
    const std::vector<double> z = standardized_sorted(samples, 20, "ks_normality");
    const size_t n = z.size();

    double d = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double f = normal_cdf(z[i]);
        d = std::max(d, (i + 1.0) / n - f);
        d = std::max(d, f - static_cast<double>(i) / n);
    }

    KsResult res;
    res.statistic = d;
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    res.modified = d * (sqrt_n - 0.01 + 0.85 / sqrt_n);
    res.pass_at_5pct = res.modified <= 0.895;
    return res;
}

AdResult ad_normality(std::span<const double> samples) {
    const std::vector<double> z = standardized_sorted(samples, 8, "ad_normality");
    const size_t n = z.size();
    const double nd = static_cast<double>(n);

    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) {
        // 1 - Phi(x) = Phi(-x) keeps both logs well-conditioned in the tails
        const double lo = std::log(normal_cdf(z[i]));
        const double hi = std::log(normal_cdf(-z[n - 1 - i]));
        acc += (2.0 * (i + 1.0) - 1.0) * (lo + hi);
    }
    const double a2 = -nd - acc / nd;

    AdResult res;
    res.a_squared = a2 * (1.0 + 4.0 / nd - 25.0 / (nd * nd));
    res.pass_at_5pct = res.a_squared <= 0.752;
    return res;
}

} // namespace zeitlin
