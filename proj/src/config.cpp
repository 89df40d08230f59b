#include "zeitlin/config.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace zeitlin {

using nlohmann::json;

ClosureKind closure_from_string(const std::string& name) {
    if (name == "dns") return ClosureKind::full_dns;
    if (name == "deterministic") return ClosureKind::deterministic_reduced;
    if (name == "salt") return ClosureKind::salt_reduced;
    if (name == "epn") return ClosureKind::energy_preserving_reduced;
    throw config_error("unknown closure '" + name +
                       "' (expected dns|deterministic|salt|epn)");
}

const char* closure_to_string(ClosureKind kind) {
    switch (kind) {
        case ClosureKind::full_dns: return "dns";
        case ClosureKind::deterministic_reduced: return "deterministic";
        case ClosureKind::salt_reduced: return "salt";
        case ClosureKind::energy_preserving_reduced: return "epn";
    }
    return "?";
}

uint8_t closure_id(ClosureKind kind) { return static_cast<uint8_t>(kind); }

RunConfig parse_config_json(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw config_error(origin + ": " + e.what());
    }

    try {
        RunConfig cfg;
        cfg.n = j.at("n").get<int>();
        if (cfg.n < 2) throw config_error(origin + ": n must be >= 2");
        cfg.seed = j.value("seed", 0ull);
        cfg.h = j.value("h", 0.25);
        if (cfg.h <= 0.0) throw config_error(origin + ": h must be > 0");
        cfg.t_end = j.value("t_end", 250.0);
        if (cfg.t_end < 0.0) throw config_error(origin + ": t_end must be >= 0");
        cfg.closure = closure_from_string(j.value("closure", "dns"));

        if (j.contains("l_bar")) {
            const json& lb = j.at("l_bar");
            if (lb.is_string()) {
                if (lb.get<std::string>() != "auto")
                    throw config_error(origin + ": l_bar must be an integer or \"auto\"");
                cfg.l_bar = 0;
            } else {
                cfg.l_bar = lb.get<int>();
                if (cfg.l_bar < 1 || cfg.l_bar > cfg.n - 1)
                    throw config_error(origin + ": l_bar out of range [1, n-1]");
            }
        }
        if (is_reduced(cfg.closure) && cfg.l_bar_auto()) {
            // allowed: the pipeline resolves "auto" from the DNS spectrum;
            // run-closure rejects it at use time
        }

        cfg.snapshot_every = j.value("snapshot_every", 4);
        cfg.reproject_every = j.value("reproject_every", 1);
        if (cfg.snapshot_every < 1 || cfg.reproject_every < 1)
            throw config_error(origin + ": cadences must be >= 1");
        cfg.out_dir = j.value("out_dir", std::string("out"));

        if (j.contains("initial")) {
            const json& ic = j.at("initial");
            const std::string kind = ic.value("type", "random");
            if (kind == "random") {
                cfg.initial.kind = IcSpec::Kind::random_profile;
                cfg.initial.l0 = ic.value("l0", 0.0);
                cfg.initial.amplitude = ic.value("amplitude", 1.0);
                if (cfg.initial.l0 < 0.0 || cfg.initial.amplitude < 0.0)
                    throw config_error(origin + ": initial profile must be non-negative");
            } else if (kind == "snapshot") {
                cfg.initial.kind = IcSpec::Kind::snapshot;
                cfg.initial.snapshot_path = ic.at("path").get<std::string>();
            } else {
                throw config_error(origin + ": initial.type must be random|snapshot");
            }
        }

        cfg.noise_model_path = j.value("noise_model", std::string());
        if (is_stochastic(cfg.closure) && cfg.noise_model_path.empty())
            throw config_error(origin + ": stochastic closures need noise_model");

        if (j.contains("pipeline")) {
            const json& p = j.at("pipeline");
            cfg.pipeline.burn_in_min = p.value("burn_in_min", cfg.pipeline.burn_in_min);
            cfg.pipeline.burn_in_max = p.value("burn_in_max", cfg.pipeline.burn_in_max);
            cfg.pipeline.window = p.value("window", cfg.pipeline.window);
            cfg.pipeline.stationarity_tol =
                p.value("stationarity_tol", cfg.pipeline.stationarity_tol);
            cfg.pipeline.fit_fraction = p.value("fit_fraction", cfg.pipeline.fit_fraction);
            cfg.pipeline.kink_lo = p.value("kink_lo", cfg.pipeline.kink_lo);
            cfg.pipeline.kink_hi = p.value("kink_hi", cfg.pipeline.kink_hi);
            if (cfg.pipeline.burn_in_min < 0.0 ||
                cfg.pipeline.burn_in_min > cfg.pipeline.burn_in_max)
                throw config_error(origin + ": burn_in_min out of range");
            if (cfg.pipeline.window <= 0.0 || cfg.pipeline.burn_in_max <= 0.0 ||
                cfg.pipeline.fit_fraction <= 0.0 || cfg.pipeline.fit_fraction > 1.0)
                throw config_error(origin + ": bad pipeline options");
        }
        return cfg;
    } catch (const json::exception& e) {
        throw config_error(origin + ": " + e.what());
    }
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config file not found: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_json(ss.str(), path);
}

} // namespace zeitlin
