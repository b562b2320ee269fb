#pragma once

// Elias-Fano encoding of a non-decreasing sequence. Each value splits into
// L low bits stored verbatim and a high part stored in unary inside a bit
// vector, giving n*(2 + L) + o(n) bits with O(1) random access via select.

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kphf/bits.hpp"
#include "kphf/bitvec.hpp"
#include "kphf/io.hpp"

namespace kphf {

class EliasFanoSeq {
public:
    static constexpr uint64_t npos = ~uint64_t(0);

    EliasFanoSeq() = default;

    explicit EliasFanoSeq(const std::vector<uint64_t>& values) {
        n_ = values.size();
        if (n_ == 0) {
            upper_ = BitVec(1);
            upper_.build_directories();
            return;
        }
        uint64_t top = values.back();
        for (size_t i = 1; i < n_; i++)
            if (values[i] < values[i - 1])
                throw std::invalid_argument("EliasFanoSeq: sequence must be non-decreasing");
        low_bits_ = 0;
        while ((n_ << low_bits_) < top) {
            low_bits_++;
            if (low_bits_ >= 64) throw std::invalid_argument("EliasFanoSeq: universe too large");
        }
        lower_.assign(words_for_bits(n_ * low_bits_), 0);
        upper_ = BitVec((top >> low_bits_) + n_ + 1);
        for (uint64_t i = 0; i < n_; i++) {
            if (low_bits_)
                bits_put(lower_, i * low_bits_, low_bits_,
                         values[i] & ((uint64_t(1) << low_bits_) - 1));
            upper_.set((values[i] >> low_bits_) + i);
        }
        upper_.build_directories();
    }

    uint64_t size() const { return n_; }
    uint64_t low_bits() const { return low_bits_; }

    uint64_t access(uint64_t i) const {
        uint64_t hi = upper_.select1(i) - i;
        uint64_t lo = low_bits_ ? bits_get(lower_.data(), i * low_bits_, (uint32_t)low_bits_) : 0;
        return (hi << low_bits_) | lo;
    }

    // Last (index, value) with value <= x, or {npos, 0} if none.
    std::pair<uint64_t, uint64_t> predecessor(uint64_t x) const {
        uint64_t i = upper_bound_index(x);
        if (i == 0) return {npos, 0};
        return {i - 1, access(i - 1)};
    }

    // First index with value >= x; n if none.
    uint64_t lower_bound_index(uint64_t x) const { return bound_index(x, false); }

    // First index with value > x; n if none.
    uint64_t upper_bound_index(uint64_t x) const { return bound_index(x, true); }

    uint64_t bits() const { return 64 * (2 + lower_.size()) + upper_.size(); }

    void save(Writer& w) const {
        w.u64(n_);
        w.u64(low_bits_);
        w.words(lower_);
        upper_.save(w);
    }
    static EliasFanoSeq load(Reader& r) {
        EliasFanoSeq ef;
        ef.n_ = r.u64();
        ef.low_bits_ = r.u64();
        if (ef.low_bits_ >= 64) throw std::runtime_error("kphf: corrupt stream (EF low bits)");
        ef.lower_ = r.words();
        ef.upper_ = BitVec::load(r);
        return ef;
    }

private:
    // First index whose value is >= x (or > x when strict). Jumps to the run
    // of elements sharing the high part of x via select0, then scans it; any
    // element past the run already exceeds x's high bucket.
    uint64_t bound_index(uint64_t x, bool strict) const {
        if (n_ == 0) return 0;
        uint64_t h = x >> low_bits_;
        uint64_t zeros = upper_.size() - n_;
        if (h >= zeros) return n_;
        uint64_t pos = h ? upper_.select0(h - 1) + 1 : 0;
        uint64_t i = pos - h;
        while (i < n_ && upper_.get(pos)) {
            uint64_t lo =
                low_bits_ ? bits_get(lower_.data(), i * low_bits_, (uint32_t)low_bits_) : 0;
            uint64_t v = (h << low_bits_) | lo;
            if (strict ? v > x : v >= x) return i;
            i++;
            pos++;
        }
        return i;
    }

    uint64_t n_ = 0;
    uint64_t low_bits_ = 0;
    std::vector<uint64_t> lower_;
    BitVec upper_;
};

}  // namespace kphf
