#pragma once

#include <array>
#include <cstdint>

namespace zeitlin::rng {

/// Philox4x64-10 counter-based generator block function. Pure: the output
/// depends only on (counter, key), so streams keyed by (seed, l, m, step)
/// can be evaluated in any order, concurrently, with identical results.
std::array<uint64_t, 4> philox4x64(const std::array<uint64_t, 4>& counter,
                                   const std::array<uint64_t, 2>& key);

/// uniform double in (0,1) from one 64-bit word
double to_uniform(uint64_t word);

/// Stream domains keep independent uses of the same seed apart.
enum : uint64_t {
    kDomainNoise = 0,
    kDomainInitialCondition = 1,
    kDomainGeneric = 2,
};

/// One standard normal draw for the stream element (seed, domain, l, m, step).
double normal_at(uint64_t seed, uint64_t domain, int l, int m, uint64_t step);

} // namespace zeitlin::rng
