#include "zeitlin/snapshot.hpp"

#include "zeitlin/sphere.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <memory>

namespace zeitlin {

namespace {

constexpr char kMagic[4] = {'E', 'Z', 'S', 'N'};
constexpr uint32_t kVersion = 1;

using File = std::unique_ptr<FILE, int (*)(FILE*)>;

File open_file(const std::string& path, const char* mode) {
    File f(std::fopen(path.c_str(), mode), &std::fclose);
    if (!f) throw io_error("cannot open: " + path);
    return f;
}

// This codebase targets little-endian hosts; raw writes of fixed-width
// integers and IEEE doubles are the file format.
template <typename T>
void put(FILE* f, const T& v) {
    if (std::fwrite(&v, sizeof v, 1, f) != 1) throw io_error("short write");
}

template <typename T>
void get(FILE* f, T& v, const std::string& path) {
    if (std::fread(&v, sizeof v, 1, f) != 1)
        throw io_error("truncated snapshot: " + path);
}

} // namespace

void write_snapshot(const std::string& path, const SnapshotHeader& header,
                    const CMatrix& w) {
    File f = open_file(path, "wb");
    if (std::fwrite(kMagic, 1, 4, f.get()) != 4) throw io_error("short write");
    put(f.get(), kVersion);
    put(f.get(), static_cast<uint32_t>(w.n()));
    put(f.get(), header.closure_id);
    put(f.get(), header.step);
    put(f.get(), header.time);
    put(f.get(), header.seed);
    const size_t count = w.size();
    if (std::fwrite(w.data(), sizeof(cplx), count, f.get()) != count)
        throw io_error("short write: " + path);
}

std::pair<SnapshotHeader, CMatrix> read_snapshot(const std::string& path) {
    File f = open_file(path, "rb");
    char magic[4];
    if (std::fread(magic, 1, 4, f.get()) != 4 || std::memcmp(magic, kMagic, 4) != 0)
        throw io_error("not a snapshot file (bad magic): " + path);
    SnapshotHeader h;
    uint32_t version = 0, n = 0;
    get(f.get(), version, path);
    if (version != kVersion)
        throw io_error("unsupported snapshot version: " + path);
    h.version = version;
    get(f.get(), n, path);
    if (n < 2 || n > 1u << 15)
        throw io_error("implausible snapshot size: " + path);
    h.n = n;
    get(f.get(), h.closure_id, path);
    get(f.get(), h.step, path);
    get(f.get(), h.time, path);
    get(f.get(), h.seed, path);
    CMatrix w(static_cast<int>(n));
    if (std::fread(w.data(), sizeof(cplx), w.size(), f.get()) != w.size())
        throw io_error("truncated snapshot: " + path);
    return {h, w};
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

void write_spectrum_csv(const std::string& path, const SpectrumSeries& series) {
    File f = open_file(path, "w");
    std::fprintf(f.get(), "t,l,E\n");
    for (size_t i = 0; i < series.times.size(); ++i)
        for (size_t l = 1; l <= series.spectra[i].size(); ++l)
            std::fprintf(f.get(), "%.17g,%zu,%.17g\n", series.times[i], l,
                         series.spectra[i][l - 1]);
}

SpectrumSeries read_spectrum_csv(const std::string& path) {
    File f = open_file(path, "r");
    char line[256];
    if (!std::fgets(line, sizeof line, f.get()))
        throw io_error("empty spectrum csv: " + path);
    SpectrumSeries series;
    double t = 0.0, e = 0.0;
    size_t l = 0;
    bool have_any = false;
    double current_t = 0.0;
    std::vector<double> current;
    while (std::fscanf(f.get(), "%lg,%zu,%lg\n", &t, &l, &e) == 3) {
        if (!have_any || t != current_t) {
            if (have_any) series.append(current_t, current);
            current.clear();
            current_t = t;
            have_any = true;
        }
        if (l != current.size() + 1)
            throw io_error("non-contiguous degrees in spectrum csv: " + path);
        current.push_back(e);
    }
    if (have_any) series.append(current_t, current);
    if (series.times.empty()) throw io_error("no rows in spectrum csv: " + path);
    series.n = static_cast<int>(series.spectra.front().size()) + 1;
    return series;
}

namespace {
void transfer_rows(FILE* f, const char* tag, const TransferReport& rep) {
    const auto emit = [&](const char* coupling, const std::vector<double>& v) {
        for (size_t l = 1; l <= v.size(); ++l)
            std::fprintf(f, "%s,%zu,%s,%.17g\n", tag, l, coupling, v[l - 1]);
    };
    emit("large_large", rep.large_large);
    emit("large_small", rep.large_small);
    emit("small_large", rep.small_large);
    emit("small_small", rep.small_small);
    emit("total", rep.total);
    emit("f_abs", rep.f_abs);
}
} // namespace

void write_transfer_csv(const std::string& path, const TransferReport& instant,
                        const TransferReport* time_averaged) {
    File f = open_file(path, "w");
    std::fprintf(f.get(), "kind,l,coupling,value\n");
    transfer_rows(f.get(), "instantaneous", instant);
    if (time_averaged) transfer_rows(f.get(), "time_averaged", *time_averaged);
}

void write_invariants_csv(const std::string& path,
                          const std::vector<InvariantSample>& rows) {
    File f = open_file(path, "w");
    std::fprintf(f.get(), "t,name,value\n");
    for (const InvariantSample& s : rows) {
        std::fprintf(f.get(), "%.17g,energy,%.17g\n", s.time, s.report.energy);
        std::fprintf(f.get(), "%.17g,enstrophy,%.17g\n", s.time, s.report.enstrophy);
        for (size_t k = 0; k < s.report.casimirs.size(); ++k) {
            std::fprintf(f.get(), "%.17g,casimir_%zu_re,%.17g\n", s.time, k + 2,
                         s.report.casimirs[k].real());
            std::fprintf(f.get(), "%.17g,casimir_%zu_im,%.17g\n", s.time, k + 2,
                         s.report.casimirs[k].imag());
        }
        const char* names[3] = {"angmom_m_minus1", "angmom_m_0", "angmom_m_plus1"};
        for (int i = 0; i < 3; ++i)
            std::fprintf(f.get(), "%.17g,%s,%.17g\n", s.time, names[i],
                         s.report.angular_momentum[i]);
    }
}

void write_grid_csv(const std::string& path, const GridField& f,
                    const SphereGrid& grid) {
    File out = open_file(path, "w");
    std::fprintf(out.get(), "theta,phi,value\n");
    for (int i = 0; i < f.n_theta; ++i)
        for (int j = 0; j < f.n_phi; ++j)
            std::fprintf(out.get(), "%.17g,%.17g,%.17g\n", grid.theta[i],
                         grid.phi[j], f.at(i, j));
}

// ---------------------------------------------------------------------------
// manifest
// ---------------------------------------------------------------------------

uint64_t fnv1a64_file(const std::string& path) {
    File f = open_file(path, "rb");
    uint64_t h = 0xcbf29ce484222325ull;
    unsigned char buf[65536];
    size_t got = 0;
    while ((got = std::fread(buf, 1, sizeof buf, f.get())) > 0)
        for (size_t i = 0; i < got; ++i) {
            h ^= buf[i];
            h *= 0x100000001b3ull;
        }
    return h;
}

void write_manifest(const std::string& dir,
                    const std::vector<std::string>& relative_paths) {
    File f = open_file(dir + "/manifest.txt", "w");
    for (const std::string& rel : relative_paths)
        std::fprintf(f.get(), "fnv1a64 %016" PRIx64 " %s\n",
                     fnv1a64_file(dir + "/" + rel), rel.c_str());
}

} // namespace zeitlin
