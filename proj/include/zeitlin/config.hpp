#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "zeitlin/dynamics.hpp"

namespace zeitlin {

/// Initial condition: random band-limited blob with per-degree amplitude
/// a(l) = amplitude * l * exp(-(l/l0)^2), or a snapshot restart.
struct IcSpec {
    enum class Kind { random_profile, snapshot };
    Kind kind = Kind::random_profile;
    double l0 = 0.0;        // 0 -> default n/8
    double amplitude = 1.0;
    std::string snapshot_path;
};

struct PipelineOptions {
    double burn_in_min = 0.0;      // run at least this long before stopping
    double burn_in_max = 1000.0;   // cap on the stationarization run
    double window = 25.0;          // stationarity window, time units
    double stationarity_tol = 0.05;
    double fit_fraction = 0.25;    // trailing fraction of the burn-in used for the noise fit
    int kink_lo = 4;
    int kink_hi = 0;               // 0 -> n/2
};

struct RunConfig {
    int n = 0;
    uint64_t seed = 0;
    double h = 0.25;
    double t_end = 250.0;
    ClosureKind closure = ClosureKind::full_dns;
    int l_bar = 0;                 // 0 means "auto" (requires a DNS spectrum)
    int snapshot_every = 4;
    int reproject_every = 1;
    std::string out_dir = "out";
    IcSpec initial;
    std::string noise_model_path;  // needed by stochastic closures
    PipelineOptions pipeline;

    bool l_bar_auto() const { return l_bar == 0; }
};

ClosureKind closure_from_string(const std::string& name);
const char* closure_to_string(ClosureKind kind);
uint8_t closure_id(ClosureKind kind);

/// Parses and validates the JSON config file. Throws config_error with the
/// offending path/field named.
RunConfig load_config(const std::string& path);
RunConfig parse_config_json(const std::string& text, const std::string& origin);

} // namespace zeitlin
