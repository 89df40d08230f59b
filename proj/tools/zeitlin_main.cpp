// Command-line front end: configuration-driven runs of the quantized Euler
// dynamics, model reduction, and diagnostics.

#include "zeitlin/pipeline.hpp"
#include "zeitlin/snapshot.hpp"
#include "zeitlin/sphere.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>

namespace {

using namespace zeitlin;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitBlowUp = 3;
constexpr int kExitIo = 4;

struct GlobalOpts {
    std::string config_path;
    std::optional<uint64_t> seed;
    std::string out_dir;
    bool quiet = false;
};

RunConfig resolve_config(const GlobalOpts& g, bool required = true) {
    RunConfig cfg;
    if (!g.config_path.empty()) {
        cfg = load_config(g.config_path);
    } else if (required) {
        throw config_error("--config is required for this subcommand");
    }
    if (g.seed) cfg.seed = *g.seed;
    if (!g.out_dir.empty()) cfg.out_dir = g.out_dir;
    return cfg;
}

void ensure_out_dir(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
}

int cmd_gen_ic(const GlobalOpts& g) {
    const RunConfig cfg = resolve_config(g);
    ensure_out_dir(cfg);
    const BasisCache basis(cfg.n);
    const CMatrix w = gen_ic(basis, cfg.seed, cfg.initial);
    const std::string path = cfg.out_dir + "/ic.ezsnap";
    write_snapshot(path,
                   SnapshotHeader{1, static_cast<uint32_t>(cfg.n), 0, 0, 0.0, cfg.seed},
                   w);
    if (!g.quiet) std::printf("wrote %s\n", path.c_str());
    return kExitOk;
}

int run_single_closure(const RunConfig& cfg, ClosureKind kind, bool quiet) {
    ensure_out_dir(cfg);
    const BasisCache basis(cfg.n);
    const CMatrix initial_raw = load_initial(basis, cfg);

    int l_bar = cfg.l_bar;
    if (is_reduced(kind) && cfg.l_bar_auto())
        throw config_error("run-closure: reduced closures need an explicit l_bar");

    NoiseModel noise;
    const NoiseModel* noise_ptr = nullptr;
    if (is_stochastic(kind)) {
        noise = NoiseModel::load(cfg.noise_model_path);
        noise_ptr = &noise;
    }

    const CMatrix initial =
        is_reduced(kind) ? project_large(basis, initial_raw, l_bar) : initial_raw;

    const StepperConfig scfg{cfg.h, cfg.t_end, cfg.reproject_every, cfg.snapshot_every};
    const Trajectory traj = integrate(initial, kind, l_bar, noise_ptr, scfg, basis);

    const std::string name = closure_to_string(kind);
    write_spectrum_csv(cfg.out_dir + "/spectrum_" + name + ".csv", traj.spectra);
    write_snapshot(cfg.out_dir + "/final_" + name + ".ezsnap",
                   SnapshotHeader{1, static_cast<uint32_t>(cfg.n), closure_id(kind),
                                  traj.steps_done, traj.last_good_time, cfg.seed},
                   traj.states.back());
    write_manifest(cfg.out_dir, {"spectrum_" + name + ".csv",
                                 "final_" + name + ".ezsnap"});

    if (traj.status == RunStatus::blew_up) {
        std::fprintf(stderr, "numerical blow-up at t = %g; last good snapshot saved\n",
                     traj.last_good_time);
        return kExitBlowUp;
    }
    if (!quiet)
        std::printf("%s run complete: t = %g, %llu steps\n", name,
                    traj.last_good_time,
                    static_cast<unsigned long long>(traj.steps_done));
    return kExitOk;
}

int cmd_detect_kink(const std::string& spectrum_csv, int lo, int hi, bool quiet) {
    const SpectrumSeries series = read_spectrum_csv(spectrum_csv);
    const std::vector<double>& e = series.spectra.back();
    const int n = static_cast<int>(e.size()) + 1;
    const KinkResult kink = detect_kink(e, lo > 0 ? lo : 4, hi > 0 ? hi : n / 2);
    if (!quiet)
        std::printf("breakpoint l = %d (has_kink=%s, improvement=%.3f, slopes %.3f / %.3f)\n",
                    kink.l_bar, kink.has_kink ? "yes" : "no", kink.improvement,
                    kink.slope_left, kink.slope_right);
    else
        std::printf("%d\n", kink.l_bar);
    return kExitOk;
}

int cmd_fit_noise(const GlobalOpts& g, const std::vector<std::string>& snapshots,
                  int l_bar) {
    const RunConfig cfg = resolve_config(g);
    ensure_out_dir(cfg);
    if (snapshots.size() < 30)
        throw insufficient_data("fit-noise: need >= 30 snapshot files");
    if (l_bar < 1) throw config_error("fit-noise: --l-bar required");

    const BasisCache basis(cfg.n);
    CoeffTimeSeries series;
    series.n = cfg.n;
    series.l_bar = l_bar;
    const ModeRange range{cfg.n, l_bar};
    for (const std::string& path : snapshots) {
        auto [header, w] = read_snapshot(path);
        if (static_cast<int>(header.n) != cfg.n)
            throw config_error("fit-noise: snapshot size mismatch: " + path);
        const CoeffField c = analyze(basis, w, cfg.n - 1);
        std::vector<double> sample(range.count());
        range.for_each([&](int l, int m) { sample[range.index(l, m)] = c.at(l, m); });
        series.times.push_back(header.time);
        series.samples.push_back(std::move(sample));
    }
    const NoiseModel model = estimate_noise_model(series, l_bar, cfg.seed);
    model.save(cfg.out_dir + "/noise_model.txt");
    if (!g.quiet) std::printf("wrote %s/noise_model.txt\n", cfg.out_dir.c_str());
    return kExitOk;
}

int cmd_diagnose(const std::string& snapshot_path, int l_bar, const GlobalOpts& g) {
    auto [header, w] = read_snapshot(snapshot_path);
    const BasisCache basis(header.n);
    const InvariantsReport inv = invariants(basis, w, std::min<int>(4, header.n));
    std::printf("n=%u t=%.6g energy=%.12g enstrophy=%.12g angmom=(%.6g, %.6g, %.6g)\n",
                header.n, header.time, inv.energy, inv.enstrophy,
                inv.angular_momentum[0], inv.angular_momentum[1],
                inv.angular_momentum[2]);
    if (!g.out_dir.empty()) {
        std::filesystem::create_directories(g.out_dir);
        SpectrumSeries s;
        s.n = static_cast<int>(header.n);
        s.append(header.time, energy_spectrum(basis, w));
        write_spectrum_csv(g.out_dir + "/spectrum_snapshot.csv", s);
        if (l_bar > 0) {
            const TransferReport tr = energy_transfer(basis, w, l_bar);
            write_transfer_csv(g.out_dir + "/transfer_snapshot.csv", tr);
        }
        write_invariants_csv(g.out_dir + "/invariants_snapshot.csv",
                             {{header.time, inv}});
    }
    return kExitOk;
}

int cmd_compare(const std::string& csv_a, const std::string& csv_b, int l_max) {
    const SpectrumSeries a = read_spectrum_csv(csv_a);
    const SpectrumSeries b = read_spectrum_csv(csv_b);
    const int lm = l_max > 0
                       ? l_max
                       : static_cast<int>(std::min(a.spectra.back().size(),
                                                   b.spectra.back().size()));
    std::printf("%.17g\n", spectrum_distance(a.spectra.back(), b.spectra.back(), lm));
    return kExitOk;
}

int cmd_export_grid(const std::string& snapshot_path, int n_theta, int n_phi,
                    const std::string& out_path) {
    auto [header, w] = read_snapshot(snapshot_path);
    const BasisCache basis(header.n);
    const CoeffField c = analyze(basis, w, header.n - 1);
    const int nt = n_theta > 0 ? n_theta : static_cast<int>(header.n);
    const int np = n_phi > 0 ? n_phi : 2 * static_cast<int>(header.n);
    const SphereGrid grid = make_gauss_grid(nt, np);
    write_grid_csv(out_path, sph_evaluate(c, grid), grid);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app("quantized Euler dynamics on the sphere: DNS, model reduction, diagnostics");
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    GlobalOpts g;
    app.add_option("--config", g.config_path, "JSON run configuration");
    uint64_t seed_val = 0;
    CLI::Option* seed_opt = app.add_option("--seed", seed_val, "override config seed");
    app.add_option("--out-dir", g.out_dir, "override config output directory");
    app.add_flag("--quiet", g.quiet, "suppress progress output");

    // gen-ic
    CLI::App* gen = app.add_subcommand("gen-ic", "generate a random initial condition");

    // dns / run-closure
    CLI::App* dns = app.add_subcommand("dns", "run the full-resolution dynamics");
    CLI::App* runc = app.add_subcommand("run-closure", "run one closure from the config");
    std::string closure_name = "dns";
    runc->add_option("--closure", closure_name, "dns|deterministic|salt|epn");

    // detect-kink
    CLI::App* kinkc = app.add_subcommand("detect-kink", "breakpoint of a spectrum CSV");
    std::string kink_csv;
    int kink_lo = 0, kink_hi = 0;
    kinkc->add_option("--spectrum", kink_csv, "spectrum CSV (t,l,E)")->required();
    kinkc->add_option("--lo", kink_lo, "search range lower degree");
    kinkc->add_option("--hi", kink_hi, "search range upper degree");

    // fit-noise
    CLI::App* fitc = app.add_subcommand("fit-noise", "estimate the small-scale noise model");
    std::vector<std::string> fit_snapshots;
    int fit_l_bar = 0;
    fitc->add_option("--snapshots", fit_snapshots, "snapshot files, time-ordered")->required();
    fitc->add_option("--l-bar", fit_l_bar, "large-scale threshold degree")->required();

    // diagnose
    CLI::App* diagc = app.add_subcommand("diagnose", "invariants and spectra of a snapshot");
    std::string diag_snapshot;
    int diag_l_bar = 0;
    diagc->add_option("--snapshot", diag_snapshot, "snapshot file")->required();
    diagc->add_option("--l-bar", diag_l_bar, "also write the transfer report");

    // compare
    CLI::App* cmpc = app.add_subcommand("compare", "distance between two spectrum CSVs");
    std::string cmp_a, cmp_b;
    int cmp_lmax = 0;
    cmpc->add_option("--a", cmp_a)->required();
    cmpc->add_option("--b", cmp_b)->required();
    cmpc->add_option("--l-max", cmp_lmax, "compare degrees 1..l_max");

    // pipeline
    CLI::App* pipec = app.add_subcommand("pipeline", "full experiment protocol");

    // export-grid
    CLI::App* exprt = app.add_subcommand("export-grid", "evaluate a snapshot on a lat-lon grid");
    std::string export_snapshot, export_out = "grid.csv";
    int export_nt = 0, export_np = 0;
    exprt->add_option("--snapshot", export_snapshot)->required();
    exprt->add_option("--out", export_out, "output CSV path");
    exprt->add_option("--n-theta", export_nt);
    exprt->add_option("--n-phi", export_np);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }
    if (*seed_opt) g.seed = seed_val;

    try {
        if (*gen) return cmd_gen_ic(g);
        if (*dns) return run_single_closure(resolve_config(g), ClosureKind::full_dns, g.quiet);
        if (*runc)
            return run_single_closure(resolve_config(g),
                                      closure_from_string(closure_name), g.quiet);
        if (*kinkc) return cmd_detect_kink(kink_csv, kink_lo, kink_hi, g.quiet);
        if (*fitc) return cmd_fit_noise(g, fit_snapshots, fit_l_bar);
        if (*diagc) return cmd_diagnose(diag_snapshot, diag_l_bar, g);
        if (*cmpc) return cmd_compare(cmp_a, cmp_b, cmp_lmax);
        if (*pipec) {
            const RunConfig cfg = resolve_config(g);
            const PipelineResult res = run_pipeline(cfg, g.quiet);
            if (!res.failed_stage.empty()) {
                std::fprintf(stderr, "pipeline failed at stage %s: %s\n",
                             res.failed_stage.c_str(), res.error.c_str());
                if (res.error.find("blew up") != std::string::npos) return kExitBlowUp;
                return kExitIo;
            }
            if (!g.quiet)
                std::printf("pipeline complete: l_bar=%d distances(nomodel=%.4g salt=%.4g epn=%.4g)\n",
                            res.l_bar, res.distance_nomodel, res.distance_salt,
                            res.distance_epn);
            return kExitOk;
        }
        if (*exprt) return cmd_export_grid(export_snapshot, export_nt, export_np, export_out);
        return kExitConfig;
    } catch (const config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const io_error& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    }
}
