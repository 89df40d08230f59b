#include "zeitlin/pipeline.hpp"

#include "zeitlin/rng.hpp"
#include "zeitlin/snapshot.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>

namespace zeitlin {

using nlohmann::json;

CMatrix gen_ic(const BasisCache& basis, uint64_t seed, const IcSpec& profile) {
    if (profile.kind != IcSpec::Kind::random_profile)
        throw config_error("gen_ic: profile initial condition expected");
    if (profile.l0 < 0.0 || profile.amplitude < 0.0)
        throw config_error("gen_ic: invalid profile");
    const int n = basis.n();
    const double l0 = profile.l0 > 0.0 ? profile.l0 : n / 8.0;

    CoeffField c(n, n - 1);
    for (int l = 1; l <= n - 1; ++l) {
        const double a = profile.amplitude * l * std::exp(-(l / l0) * (l / l0));
        if (a == 0.0) continue;
        for (int m = -l; m <= l; ++m)
            c.at(l, m) = a * rng::normal_at(seed, rng::kDomainInitialCondition, l, m, 0);
    }
    return synthesize(basis, c);
}

CMatrix gen_ic(int n, uint64_t seed, const IcSpec& profile) {
    return gen_ic(BasisCache(n), seed, profile);
}

CMatrix load_initial(const BasisCache& basis, const RunConfig& cfg) {
    if (cfg.initial.kind == IcSpec::Kind::random_profile)
        return gen_ic(basis, cfg.seed, cfg.initial);
    auto [header, w] = read_snapshot(cfg.initial.snapshot_path);
    if (static_cast<int>(header.n) != basis.n())
        throw config_error("initial snapshot size does not match n");
    return w;
}

namespace {

struct TimedState {
    uint64_t step;
    double time;
    CMatrix state;
};

std::vector<double> average_spectra(const SpectrumSeries& series, double t_from) {
    std::vector<double> avg;
    size_t count = 0;
    for (size_t i = 0; i < series.times.size(); ++i) {
        if (series.times[i] < t_from) continue;
        if (avg.empty()) avg.assign(series.spectra[i].size(), 0.0);
        for (size_t l = 0; l < avg.size(); ++l) avg[l] += series.spectra[i][l];
        ++count;
    }
    for (double& v : avg) v /= static_cast<double>(count);
    return avg;
}

double fit_slope_loglog(const std::vector<double>& e, int l_lo, int l_hi) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int count = 0;
    for (int l = l_lo; l <= l_hi; ++l) {
        if (!(e[l - 1] > 0.0)) continue;
        const double x = std::log(static_cast<double>(l));
        const double y = std::log(e[l - 1]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

struct RunOutputs {
    std::string name;
    RunStatus status = RunStatus::completed;
    double last_good_time = 0.0;
    std::vector<double> final_spectrum;
};

} // namespace

PipelineResult run_pipeline(const RunConfig& cfg, bool quiet) {
    namespace fs = std::filesystem;

    PipelineResult result;
    result.out_dir = cfg.out_dir;
    json summary;
    summary["config"] = {{"n", cfg.n},
                         {"seed", cfg.seed},
                         {"h", cfg.h},
                         {"t_end", cfg.t_end},
                         {"snapshot_every", cfg.snapshot_every}};

    const auto say = [&](const std::string& line) {
        if (!quiet) std::printf("[pipeline] %s\n", line.c_str());
    };
    const auto artifact = [&](const std::string& rel) {
        result.artifacts.push_back(rel);
    };
    const auto finalize = [&](const std::string& failed_stage,
                              const std::string& error) {
        result.failed_stage = failed_stage;
        result.error = error;
        summary["failed_stage"] = failed_stage;
        summary["error"] = error;
        summary["artifacts"] = result.artifacts;
        std::ofstream out(cfg.out_dir + "/summary.json");
        out << summary.dump(2) << "\n";
        out.close();
        std::vector<std::string> all = result.artifacts;
        all.push_back("summary.json");
        write_manifest(cfg.out_dir, all);
        return result;
    };

    std::string stage = "setup";
    try {
        fs::create_directories(cfg.out_dir);
        if (cfg.pipeline.burn_in_max < 2.0 * cfg.pipeline.window)
            throw config_error("pipeline: burn_in_max must cover two windows");

        const BasisCache basis(cfg.n);
        CMatrix state = load_initial(basis, cfg);

        // --- stage: DNS to stationarity -----------------------------------
        stage = "dns_burn_in";
        say("DNS burn-in until the energy profile is stationary");

        // chunk length: one stationarity window, rounded to the snapshot cadence
        uint64_t chunk_steps =
            static_cast<uint64_t>(std::llround(cfg.pipeline.window / cfg.h));
        chunk_steps = std::max<uint64_t>(chunk_steps, 1);
        const uint64_t cad = static_cast<uint64_t>(cfg.snapshot_every);
        if (chunk_steps % cad != 0) chunk_steps += cad - chunk_steps % cad;
        const double chunk_t = static_cast<double>(chunk_steps) * cfg.h;
        const double snap_dt = cfg.h * static_cast<double>(cad);

        StepperConfig chunk_cfg{cfg.h, chunk_t, cfg.reproject_every,
                                cfg.snapshot_every};

        SpectrumSeries burn_spectra;
        burn_spectra.n = cfg.n;
        std::deque<TimedState> tail;
        double t_now = 0.0;
        uint64_t step_now = 0;
        bool stationary = false;

        while (t_now < cfg.pipeline.burn_in_max - 1e-9) {
            Trajectory chunk = integrate(state, ClosureKind::full_dns, 0, nullptr,
                                         chunk_cfg, basis);
            if (chunk.status == RunStatus::blew_up)
                throw std::runtime_error("DNS burn-in blew up at t = " +
                                         std::to_string(t_now + chunk.last_good_time));
            for (size_t i = 0; i < chunk.times.size(); ++i) {
                if (i == 0 && t_now > 0.0) continue; // chunk start duplicates
                const double t = t_now + chunk.times[i];
                burn_spectra.append(t, chunk.spectra.spectra[i]);
                if (chunk.times[i] > 0.0 || t_now == 0.0) {
                    const uint64_t st =
                        step_now + static_cast<uint64_t>(std::llround(chunk.times[i] / cfg.h));
                    tail.push_back({st, t, chunk.states[i]});
                }
            }
            state = chunk.states.back();
            t_now += chunk_t;
            step_now += chunk_steps;

            // retain the trailing fit window (plus slack for the 30-sample floor)
            const double keep_from =
                std::min(t_now * (1.0 - cfg.pipeline.fit_fraction),
                         t_now - 40.0 * snap_dt);
            while (tail.size() > 2 && tail.front().time < keep_from) tail.pop_front();

            if (t_now >= 2.0 * cfg.pipeline.window - 1e-9 &&
                t_now >= cfg.pipeline.burn_in_min - 1e-9 &&
                stationarity(burn_spectra, cfg.pipeline.window,
                             cfg.pipeline.stationarity_tol)) {
                stationary = true;
                break;
            }
        }
        result.stationary = stationary;
        result.stationarity_time = t_now;
        summary["stationary"] = stationary;
        summary["stationarity_time"] = t_now;
        say(stationary ? "stationary at t = " + std::to_string(t_now)
                       : "burn-in cap reached without stationarity");

        stage = "stationary_snapshot";
        write_snapshot(cfg.out_dir + "/dns_stationary.ezsnap",
                       SnapshotHeader{1, static_cast<uint32_t>(cfg.n),
                                      closure_id(ClosureKind::full_dns), step_now,
                                      t_now, cfg.seed},
                       state);
        artifact("dns_stationary.ezsnap");
        write_spectrum_csv(cfg.out_dir + "/spectrum_burn_in.csv", burn_spectra);
        artifact("spectrum_burn_in.csv");

        // --- stage: kink detection -----------------------------------------
        stage = "detect_kink";
        const std::vector<double> stat_spec =
            average_spectra(burn_spectra, t_now - cfg.pipeline.window);
        const int kink_hi =
            cfg.pipeline.kink_hi > 0 ? cfg.pipeline.kink_hi : cfg.n / 2;
        const KinkResult kink =
            detect_kink(stat_spec, cfg.pipeline.kink_lo, kink_hi);
        result.kink_found = kink.has_kink;
        const int l_bar = cfg.l_bar_auto() ? kink.l_bar : cfg.l_bar;
        result.l_bar = l_bar;
        result.slope_small_scale =
            fit_slope_loglog(stat_spec, l_bar + 1, cfg.n / 2);
        summary["kink"] = {{"l_bar_detected", kink.l_bar},
                           {"has_kink", kink.has_kink},
                           {"improvement", kink.improvement},
                           {"slope_left", kink.slope_left},
                           {"slope_right", kink.slope_right},
                           {"l_bar_used", l_bar},
                           {"small_scale_slope", result.slope_small_scale}};
        say("kink at l = " + std::to_string(kink.l_bar) +
            ", using l_bar = " + std::to_string(l_bar));

        // --- stage: noise fit ------------------------------------------------
        stage = "fit_noise";
        CoeffTimeSeries series;
        series.n = cfg.n;
        series.l_bar = l_bar;
        const ModeRange range{cfg.n, l_bar};
        for (const TimedState& ts : tail) {
            const CoeffField c = analyze(basis, ts.state, cfg.n - 1);
            std::vector<double> sample(range.count());
            range.for_each([&](int l, int m) {
                sample[range.index(l, m)] = c.at(l, m);
            });
            series.times.push_back(ts.time);
            series.samples.push_back(std::move(sample));
        }
        const NoiseModel noise = estimate_noise_model(series, l_bar, cfg.seed);
        noise.save(cfg.out_dir + "/noise_model.txt");
        artifact("noise_model.txt");
        say("noise model fitted from " + std::to_string(series.times.size()) +
            " samples");

        // --- stage: transfer diagnostics on the stationary state -------------
        stage = "energy_transfer";
        const TransferReport transfer_now = energy_transfer(basis, state, l_bar);

        // --- stage: the four closure runs ------------------------------------
        const CMatrix w_bar = project_large(basis, state, l_bar);
        const StepperConfig run_cfg{cfg.h, cfg.t_end, cfg.reproject_every,
                                    cfg.snapshot_every};

        std::vector<RunOutputs> runs;
        TransferReport transfer_avg;
        bool have_transfer_avg = false;

        const auto do_run = [&](const std::string& name, const CMatrix& init,
                                ClosureKind kind, const NoiseModel* nm) {
            stage = "run_" + name;
            say("running " + name + " for " + std::to_string(cfg.t_end) +
                " time units");
            const Trajectory traj =
                integrate(init, kind, is_reduced(kind) ? l_bar : 0, nm, run_cfg, basis);

            RunOutputs out;
            out.name = name;
            out.status = traj.status;
            out.last_good_time = traj.last_good_time;
            out.final_spectrum = traj.spectra.spectra.back();

            write_spectrum_csv(cfg.out_dir + "/spectrum_" + name + ".csv",
                               traj.spectra);
            artifact("spectrum_" + name + ".csv");
            write_snapshot(cfg.out_dir + "/final_" + name + ".ezsnap",
                           SnapshotHeader{1, static_cast<uint32_t>(cfg.n),
                                          closure_id(kind), traj.steps_done,
                                          traj.last_good_time, cfg.seed},
                           traj.states.back());
            artifact("final_" + name + ".ezsnap");

            std::vector<InvariantSample> inv;
            for (size_t i = 0; i < traj.states.size(); ++i)
                inv.push_back({traj.times[i],
                               invariants(basis, traj.states[i],
                                          std::min(4, cfg.n))});
            write_invariants_csv(cfg.out_dir + "/invariants_" + name + ".csv", inv);
            artifact("invariants_" + name + ".csv");

            if (kind == ClosureKind::full_dns) {
                // time-averaged transfer over the continuation (every 4th snapshot)
                size_t used = 0;
                for (size_t i = 0; i < traj.states.size(); i += 4) {
                    const TransferReport tr =
                        energy_transfer(basis, traj.states[i], l_bar);
                    if (!have_transfer_avg) {
                        transfer_avg = tr;
                        have_transfer_avg = true;
                    } else {
                        const auto acc = [](std::vector<double>& a,
                                            const std::vector<double>& b) {
                            for (size_t k = 0; k < a.size(); ++k) a[k] += b[k];
                        };
                        acc(transfer_avg.large_large, tr.large_large);
                        acc(transfer_avg.large_small, tr.large_small);
                        acc(transfer_avg.small_large, tr.small_large);
                        acc(transfer_avg.small_small, tr.small_small);
                        acc(transfer_avg.total, tr.total);
                        acc(transfer_avg.f_abs, tr.f_abs);
                    }
                    ++used;
                }
                if (used > 1) {
                    const auto scale = [&](std::vector<double>& a) {
                        for (double& v : a) v /= static_cast<double>(used);
                    };
                    scale(transfer_avg.large_large);
                    scale(transfer_avg.large_small);
                    scale(transfer_avg.small_large);
                    scale(transfer_avg.small_small);
                    scale(transfer_avg.total);
                    scale(transfer_avg.f_abs);
                }
            }

            summary["runs"][name] = {
                {"status", traj.status == RunStatus::completed ? "completed" : "blew_up"},
                {"last_good_time", traj.last_good_time},
                {"steps", traj.steps_done}};
            runs.push_back(std::move(out));
        };

        do_run("dns", state, ClosureKind::full_dns, nullptr);
        do_run("nomodel", w_bar, ClosureKind::deterministic_reduced, nullptr);
        do_run("salt", w_bar, ClosureKind::salt_reduced, &noise);
        do_run("epn", w_bar, ClosureKind::energy_preserving_reduced, &noise);

        stage = "transfer_report";
        write_transfer_csv(cfg.out_dir + "/transfer_dns.csv", transfer_now,
                           have_transfer_avg ? &transfer_avg : nullptr);
        artifact("transfer_dns.csv");

        // --- stage: comparisons ----------------------------------------------
        stage = "compare";
        const std::vector<double>& e_dns = runs[0].final_spectrum;
        result.distance_nomodel = spectrum_distance(e_dns, runs[1].final_spectrum, l_bar);
        result.distance_salt = spectrum_distance(e_dns, runs[2].final_spectrum, l_bar);
        result.distance_epn = spectrum_distance(e_dns, runs[3].final_spectrum, l_bar);

        double near_kink_dns = 0.0, near_kink_epn = 0.0;
        for (int l = std::max(1, l_bar - 3); l <= l_bar; ++l) {
            near_kink_dns += e_dns[l - 1];
            near_kink_epn += runs[3].final_spectrum[l - 1];
        }
        result.pileup_ratio_epn = near_kink_epn / near_kink_dns;

        summary["distances_l_le_lbar"] = {{"nomodel", result.distance_nomodel},
                                          {"salt", result.distance_salt},
                                          {"epn", result.distance_epn}};
        summary["epn_pileup_ratio"] = result.pileup_ratio_epn;

        {
            FILE* f = std::fopen((cfg.out_dir + "/distances.csv").c_str(), "w");
            if (!f) throw io_error("cannot write distances.csv");
            std::fprintf(f, "run,distance_to_dns\n");
            std::fprintf(f, "nomodel,%.17g\n", result.distance_nomodel);
            std::fprintf(f, "salt,%.17g\n", result.distance_salt);
            std::fprintf(f, "epn,%.17g\n", result.distance_epn);
            std::fclose(f);
            artifact("distances.csv");
        }

        return finalize("", "");
    } catch (const std::exception& e) {
        return finalize(stage, e.what());
    }
}

} // namespace zeitlin
