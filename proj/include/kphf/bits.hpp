#pragma once

// Packed-bit helpers shared by the succinct structures: LSB-first fields
// inside little-endian 64-bit words.

#include <cassert>
#include <cstdint>
#include <vector>

namespace kphf {

inline uint64_t words_for_bits(uint64_t bits) {
    return (bits + 63) >> 6;
}

inline uint64_t bits_get(const uint64_t* words, uint64_t pos, unsigned width) {
    if (width == 0) return 0;
    uint64_t wi = pos >> 6;
    unsigned off = unsigned(pos & 63);
    uint64_t v = words[wi] >> off;
    if (off + width > 64) v |= words[wi + 1] << (64 - off);
    if (width < 64) v &= (uint64_t(1) << width) - 1;
    return v;
}

inline uint64_t bits_get(const std::vector<uint64_t>& words, uint64_t pos, unsigned width) {
    return bits_get(words.data(), pos, width);
}

// Read-modify-write a field in a preallocated word buffer.
inline void bits_put(std::vector<uint64_t>& words, uint64_t pos, unsigned width, uint64_t value) {
    if (width == 0) return;
    uint64_t mask = width == 64 ? ~uint64_t(0) : (uint64_t(1) << width) - 1;
    value &= mask;
    uint64_t wi = pos >> 6;
    unsigned off = unsigned(pos & 63);
    words[wi] = (words[wi] & ~(mask << off)) | (value << off);
    if (off + width > 64) {
        unsigned spill = off + width - 64;
        uint64_t hi_mask = (uint64_t(1) << spill) - 1;
        words[wi + 1] = (words[wi + 1] & ~hi_mask) | (value >> (64 - off));
    }
}

struct BitWriter {
    std::vector<uint64_t> words;
    uint64_t size = 0;

    void push(uint64_t value, unsigned width) {
        if (width == 0) return;
        if (width < 64) value &= (uint64_t(1) << width) - 1;
        unsigned off = unsigned(size & 63);
        if (off == 0) words.push_back(0);
        words[size >> 6] |= value << off;
        if (off + width > 64) words.push_back(value >> (64 - off));
        size += width;
    }

    void push_bit(bool b) { push(b ? 1 : 0, 1); }

    // h zero bits followed by a one-terminator.
    void push_unary(uint64_t h) {
        while (h >= 63) { push(0, 63); h -= 63; }
        push(uint64_t(1) << h, unsigned(h + 1));
    }
};

// Sequential reader for concatenated variable-width fields.
struct BitReader {
    const uint64_t* words = nullptr;
    uint64_t nbits = 0;
    uint64_t pos = 0;

    BitReader() = default;
    BitReader(const uint64_t* w, uint64_t n) : words(w), nbits(n) {}

    uint64_t read(unsigned width) {
        assert(pos + width <= nbits);
        uint64_t v = bits_get(words, pos, width);
        pos += width;
        return v;
    }

    // Count zeros up to and including the next set bit; returns the count.
    uint64_t read_unary() {
        uint64_t h = 0;
        for (;;) {
            assert(pos < nbits);
            uint64_t wi = pos >> 6;
            unsigned off = unsigned(pos & 63);
            uint64_t w = words[wi] >> off;
            if (w != 0) {
                unsigned tz = unsigned(__builtin_ctzll(w));
                h += tz;
                pos += tz + 1;
                return h;
            }
            h += 64 - off;
            pos += 64 - off;
        }
    }
};

}  // namespace kphf
