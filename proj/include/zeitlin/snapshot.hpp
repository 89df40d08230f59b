#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "zeitlin/diagnostics.hpp"
#include "zeitlin/matrix.hpp"

namespace zeitlin {

/// Binary state file: magic "EZSN", version u32, N u32, closure id u8,
/// step u64, time f64, seed u64, then N*N complex entries as little-endian
/// f64 (re, im) pairs, row-major. Round trips are bit-exact.
struct SnapshotHeader {
    uint32_t version = 1;
    uint32_t n = 0;
    uint8_t closure_id = 0;
    uint64_t step = 0;
    double time = 0.0;
    uint64_t seed = 0;
};

void write_snapshot(const std::string& path, const SnapshotHeader& header,
                    const CMatrix& w);
std::pair<SnapshotHeader, CMatrix> read_snapshot(const std::string& path);

// CSV emitters; all numbers printed with %.17g so equal doubles produce
// identical bytes.
void write_spectrum_csv(const std::string& path, const SpectrumSeries& series);
SpectrumSeries read_spectrum_csv(const std::string& path);

void write_transfer_csv(const std::string& path, const TransferReport& instant,
                        const TransferReport* time_averaged = nullptr);

struct InvariantSample {
    double time = 0.0;
    InvariantsReport report;
};
void write_invariants_csv(const std::string& path,
                          const std::vector<InvariantSample>& rows);

void write_grid_csv(const std::string& path, const struct GridField& f,
                    const struct SphereGrid& grid);

/// FNV-1a 64-bit file checksum used by the run manifest.
uint64_t fnv1a64_file(const std::string& path);

/// manifest.txt: "fnv1a64 <hex> <relative path>" per artifact
void write_manifest(const std::string& dir,
                    const std::vector<std::string>& relative_paths);

} // namespace zeitlin
