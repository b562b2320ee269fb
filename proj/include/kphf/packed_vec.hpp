#pragma once

// Fixed-width packed integer array.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "kphf/bits.hpp"
#include "kphf/io.hpp"

namespace kphf {

class PackedVec {
public:
    PackedVec() = default;
    PackedVec(uint64_t n, uint32_t width)
        : n_(n), width_(width), words_(words_for_bits(n * width), 0) {
        if (width > 64) throw std::invalid_argument("PackedVec: width > 64");
    }

    uint64_t size() const { return n_; }
    uint32_t width() const { return width_; }
    uint64_t get(uint64_t i) const { return bits_get(words_.data(), i * width_, width_); }
    void set(uint64_t i, uint64_t v) { bits_put(words_, i * width_, width_, v); }
    const std::vector<uint64_t>& words() const { return words_; }
    uint64_t bits() const { return 64 * (2 + words_.size()); }

    void save(Writer& w) const {
        w.u64(n_);
        w.u64(width_);
        w.words(words_);
    }
    static PackedVec load(Reader& r) {
        PackedVec p;
        p.n_ = r.u64();
        uint64_t width = r.u64();
        if (width > 64) throw std::runtime_error("kphf: corrupt stream (packed width)");
        p.width_ = (uint32_t)width;
        p.words_ = r.words();
        if (p.words_.size() != words_for_bits(p.n_ * p.width_))
            throw std::runtime_error("kphf: corrupt stream (packed size)");
        return p;
    }

    // Slim format for callers that can derive n and width themselves.
    void save_raw(Writer& w) const {
        for (uint64_t v : words_) w.u64(v);
    }
    static PackedVec load_raw(Reader& r, uint64_t n, uint32_t width) {
        PackedVec p(n, width);
        for (uint64_t& v : p.words_) v = r.u64();
        return p;
    }

private:
    uint64_t n_ = 0;
    uint32_t width_ = 0;
    std::vector<uint64_t> words_;
};

}  // namespace kphf
