#pragma once

#include <span>

namespace zeitlin {

/// Kolmogorov-Smirnov normality test with mean and variance estimated from
/// the sample. The statistic is compared through Stephens' modified form
/// D * (sqrt(n) - 0.01 + 0.85/sqrt(n)) against the Lilliefors-adjusted
/// asymptotic 5% point 0.895.
struct KsResult {
    double statistic = 0.0;  // D, the sup-distance to the fitted normal CDF
    double modified = 0.0;
    bool pass_at_5pct = false;
};
KsResult ks_normality(std::span<const double> samples);

/// Anderson-Darling normality test, both parameters estimated; A^2 corrected
/// by (1 + 4/n - 25/n^2) and compared against the 5% point 0.752.
struct AdResult {
    double a_squared = 0.0;  // corrected statistic
    bool pass_at_5pct = false;
};
AdResult ad_normality(std::span<const double> samples);

} // namespace zeitlin
