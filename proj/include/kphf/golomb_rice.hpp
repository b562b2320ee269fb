#pragma once

// Golomb-Rice sequence with a shared parameter L. Each value x costs
// floor(x / 2^L) + 1 bits of unary plus L literal low bits. Unary parts and
// low bits live in separate arrays so access is O(1) via two selects.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "kphf/bits.hpp"
#include "kphf/bitvec.hpp"
#include "kphf/io.hpp"

namespace kphf {

class GolombRiceSeq {
public:
    GolombRiceSeq() = default;

    GolombRiceSeq(const std::vector<uint64_t>& values, uint32_t L) : n_(values.size()), L_(L) {
        if (L > 58) throw std::invalid_argument("GolombRiceSeq: parameter too large");
        uint64_t unary_bits = n_;
        for (uint64_t v : values) unary_bits += v >> L;
        unary_ = BitVec(unary_bits ? unary_bits : 1);
        uint64_t pos = 0;
        lower_.assign(words_for_bits(n_ * L_), 0);
        for (uint64_t i = 0; i < n_; i++) {
            pos += values[i] >> L;
            unary_.set(pos++);
            if (L_) bits_put(lower_, i * L_, L_, values[i] & ((uint64_t(1) << L_) - 1));
        }
        unary_.build_directories();
    }

    uint64_t size() const { return n_; }
    uint32_t parameter() const { return L_; }

    uint64_t access(uint64_t i) const {
        uint64_t end = unary_.select1(i);
        uint64_t hi = i ? end - unary_.select1(i - 1) - 1 : end;
        uint64_t lo = L_ ? bits_get(lower_.data(), i * L_, L_) : 0;
        return (hi << L_) | lo;
    }

    uint64_t bits() const { return 64 * (2 + lower_.size()) + unary_.size(); }

    void save(Writer& w) const {
        w.u64(n_);
        w.u64(L_);
        w.words(lower_);
        unary_.save(w);
    }
    static GolombRiceSeq load(Reader& r) {
        GolombRiceSeq g;
        g.n_ = r.u64();
        uint64_t L = r.u64();
        if (L > 58) throw std::runtime_error("kphf: corrupt stream (rice parameter)");
        g.L_ = (uint32_t)L;
        g.lower_ = r.words();
        g.unary_ = BitVec::load(r);
        return g;
    }

private:
    uint64_t n_ = 0;
    uint32_t L_ = 0;
    std::vector<uint64_t> lower_;
    BitVec unary_;
};

}  // namespace kphf
