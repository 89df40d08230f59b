#pragma once

#include <string>
#include <vector>

#include "zeitlin/config.hpp"
#include "zeitlin/integrator.hpp"

namespace zeitlin {

/// Random band-limited initial vorticity: omega^{lm} = a(l) * xi_lm with
/// seeded standard normals, a(l) = amplitude * l * exp(-(l/l0)^2) and
/// l0 defaulting to n/8. Deterministic in (n, seed, profile).
CMatrix gen_ic(const BasisCache& basis, uint64_t seed, const IcSpec& profile);
CMatrix gen_ic(int n, uint64_t seed, const IcSpec& profile);

/// Resolves the configured initial condition (profile or snapshot path).
CMatrix load_initial(const BasisCache& basis, const RunConfig& cfg);

struct PipelineResult {
    std::string out_dir;
    int l_bar = 0;
    bool kink_found = false;
    double slope_small_scale = 0.0;
    double stationarity_time = 0.0;
    bool stationary = false;
    double distance_nomodel = 0.0;
    double distance_salt = 0.0;
    double distance_epn = 0.0;
    double pileup_ratio_epn = 0.0; // near-kink energy, EPN relative to DNS
    std::vector<std::string> artifacts;
    std::string failed_stage;      // empty on success
    std::string error;
};

/// Full protocol: DNS to stationarity -> kink -> noise fit -> four closure
/// runs from the common projected state -> spectra, transfer, distances,
/// summary.json + manifest.txt in cfg.out_dir.
PipelineResult run_pipeline(const RunConfig& cfg, bool quiet = false);

} // namespace zeitlin
