#include "zeitlin/rng.hpp"

#include <cmath>

namespace zeitlin::rng {

namespace {

constexpr uint64_t kMul0 = 0xD2E7470EE14C6C93ull;
constexpr uint64_t kMul1 = 0xCA5A826395121157ull;
constexpr uint64_t kWey0 = 0x9E3779B97F4A7C15ull;
constexpr uint64_t kWey1 = 0xBB67AE8584CAA73Bull;

inline void mulhilo(uint64_t a, uint64_t b, uint64_t& hi, uint64_t& lo) {
    const __uint128_t p = static_cast<__uint128_t>(a) * b;
    hi = static_cast<uint64_t>(p >> 64);
    lo = static_cast<uint64_t>(p);
}

} // namespace

std::array<uint64_t, 4> philox4x64(const std::array<uint64_t, 4>& counter,
                                   const std::array<uint64_t, 2>& key) {
    std::array<uint64_t, 4> c = counter;
    uint64_t k0 = key[0];
    uint64_t k1 = key[1];
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            k0 += kWey0;
            k1 += kWey1;
        }
        uint64_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, c[0], hi0, lo0);
        mulhilo(kMul1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
    }
    return c;
}

double to_uniform(uint64_t word) {
    // 53 mantissa bits, offset by half an ulp so the result lies in (0,1)
    return (static_cast<double>(word >> 11) + 0.5) * 0x1.0p-53;
}

double normal_at(uint64_t seed, uint64_t domain, int l, int m, uint64_t step) {
    const std::array<uint64_t, 4> ctr = {
        static_cast<uint64_t>(static_cast<uint32_t>(l)),
        static_cast<uint64_t>(static_cast<int64_t>(m)),
        step,
        domain,
    };
    const std::array<uint64_t, 2> key = {seed, 0x7a6569746c696eull}; // "zeitlin"
    const std::array<uint64_t, 4> words = philox4x64(ctr, key);
    const double u1 = to_uniform(words[0]);
    const double u2 = to_uniform(words[1]);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

} // namespace zeitlin::rng
