#pragma once

// 128-bit keyed string hashing plus the derived hash streams used everywhere
// else: range mapping via multiply-high, unit-interval fingerprints, and
// cheap re-mixing for purpose-separated streams.

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <string_view>

namespace kphf {

struct Key128 {
    uint64_t hi = 0;
    uint64_t lo = 0;

    friend bool operator==(const Key128& a, const Key128& b) {
        return a.hi == b.hi && a.lo == b.lo;
    }
    friend bool operator<(const Key128& a, const Key128& b) {
        return a.hi != b.hi ? a.hi < b.hi : a.lo < b.lo;
    }
};

// Tags keep the hash streams for different roles statistically independent.
enum class HashUse : uint64_t {
    Bin = 1,          // threshold scheme: key -> layer bin
    Fingerprint = 2,  // threshold scheme: key -> (0,1] fingerprint
    CurvePoint = 3,   // bucket scheme: key -> (0,1] position fed through beta
    Place = 4,        // bucket scheme: seeded key -> output bin
    Split = 5,        // recsplit: seeded key -> child segment
    MergeSplit = 6,   // recsplit: seeded short-leaf split
    Chunk = 7,        // retrieval: key -> chunk
    Row = 8,          // retrieval: seeded key -> (start, coefficients)
    SlotMap = 9,      // fallback: key -> layer slot
    Bucket = 10,      // pachash / recsplit: key -> bucket
    BitKey = 11,      // pachash: derived per-bit retrieval keys
    TailMap = 12,     // fallback: final straggler map
};

inline uint64_t rotl64(uint64_t x, int r) {
    return (x << r) | (x >> (64 - r));
}

// Murmur-style 64-bit finalizer; full avalanche.
inline uint64_t mix64(uint64_t x) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ULL;
    x ^= x >> 33;
    return x;
}

namespace detail {
inline uint64_t load64(const uint8_t* p) {
    uint64_t v;
    std::memcpy(&v, p, 8);
    return v;  // little-endian hosts only, asserted in tests
}
}  // namespace detail

// MurmurHash3 x64 128 over the key bytes, seeded. This is the only place
// that reads raw bytes; everything downstream re-mixes the 128-bit value.
inline Key128 hash_key(const void* data, size_t len, uint64_t seed) {
    const uint8_t* bytes = static_cast<const uint8_t*>(data);
    const size_t nblocks = len / 16;
    uint64_t h1 = seed, h2 = seed;
    const uint64_t c1 = 0x87c37b91114253d5ULL;
    const uint64_t c2 = 0x4cf5ad432745937fULL;

    for (size_t i = 0; i < nblocks; i++) {
        uint64_t k1 = detail::load64(bytes + i * 16);
        uint64_t k2 = detail::load64(bytes + i * 16 + 8);
        k1 *= c1; k1 = rotl64(k1, 31); k1 *= c2; h1 ^= k1;
        h1 = rotl64(h1, 27); h1 += h2; h1 = h1 * 5 + 0x52dce729;
        k2 *= c2; k2 = rotl64(k2, 33); k2 *= c1; h2 ^= k2;
        h2 = rotl64(h2, 31); h2 += h1; h2 = h2 * 5 + 0x38495ab5;
    }

    const uint8_t* tail = bytes + nblocks * 16;
    uint64_t k1 = 0, k2 = 0;
    switch (len & 15) {
        case 15: k2 ^= uint64_t(tail[14]) << 48; [[fallthrough]];
        case 14: k2 ^= uint64_t(tail[13]) << 40; [[fallthrough]];
        case 13: k2 ^= uint64_t(tail[12]) << 32; [[fallthrough]];
        case 12: k2 ^= uint64_t(tail[11]) << 24; [[fallthrough]];
        case 11: k2 ^= uint64_t(tail[10]) << 16; [[fallthrough]];
        case 10: k2 ^= uint64_t(tail[9]) << 8; [[fallthrough]];
        case 9:  k2 ^= uint64_t(tail[8]);
                 k2 *= c2; k2 = rotl64(k2, 33); k2 *= c1; h2 ^= k2;
                 [[fallthrough]];
        case 8:  k1 ^= uint64_t(tail[7]) << 56; [[fallthrough]];
        case 7:  k1 ^= uint64_t(tail[6]) << 48; [[fallthrough]];
        case 6:  k1 ^= uint64_t(tail[5]) << 40; [[fallthrough]];
        case 5:  k1 ^= uint64_t(tail[4]) << 32; [[fallthrough]];
        case 4:  k1 ^= uint64_t(tail[3]) << 24; [[fallthrough]];
        case 3:  k1 ^= uint64_t(tail[2]) << 16; [[fallthrough]];
        case 2:  k1 ^= uint64_t(tail[1]) << 8; [[fallthrough]];
        case 1:  k1 ^= uint64_t(tail[0]);
                 k1 *= c1; k1 = rotl64(k1, 31); k1 *= c2; h1 ^= k1;
    }

    h1 ^= uint64_t(len); h2 ^= uint64_t(len);
    h1 += h2; h2 += h1;
    h1 = mix64(h1); h2 = mix64(h2);
    h1 += h2; h2 += h1;
    return Key128{h1, h2};
}

inline Key128 hash_key(std::string_view s, uint64_t seed) {
    return hash_key(s.data(), s.size(), seed);
}

// One derived 64-bit stream per (use, seed); never re-reads key bytes.
inline uint64_t derive64(const Key128& h, HashUse use, uint64_t seed) {
    uint64_t a = h.lo ^ (seed + 0x9e3779b97f4a7c15ULL * (uint64_t(use) + 1));
    return mix64(mix64(a) ^ h.hi);
}

// Seeded re-hash to a fresh Key128 (used for derived retrieval keys).
inline Key128 rehash(const Key128& h, uint64_t salt) {
    uint64_t a = mix64(h.hi ^ (salt * 0x9e3779b97f4a7c15ULL + 0x3c79ac492ba7b653ULL));
    uint64_t b = mix64(h.lo + rotl64(a, 23) + salt);
    return Key128{a, b};
}

// Uniform value in [0, m) via multiply-high; no modulo bias.
inline uint64_t range_of(uint64_t v, uint64_t m) {
    return uint64_t((static_cast<unsigned __int128>(v) * m) >> 64);
}

inline uint64_t to_range(const Key128& h, HashUse use, uint64_t seed, uint64_t m) {
    return range_of(derive64(h, use, seed), m);
}

// Value in the half-open-at-zero interval (0, 1]: (v + 1) / 2^64.
inline double unit_of(uint64_t v) {
    if (v == ~uint64_t(0)) return 1.0;
    return double(v + 1) * 0x1p-64;
}

inline double to_unit(const Key128& h, HashUse use, uint64_t seed) {
    return unit_of(derive64(h, use, seed));
}

}  // namespace kphf
