#pragma once

// Bit vector with rank/select support. Directory overhead is ~4.7% for rank
// (one u64 per 4096 bits plus one u16 per 512 bits) plus sparse select
// samples; directories are rebuilt on load rather than serialized.

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "kphf/bits.hpp"
#include "kphf/io.hpp"

namespace kphf {

class BitVec {
public:
    static constexpr uint64_t kSuperBits = 4096;
    static constexpr uint64_t kBlockBits = 512;
    static constexpr uint64_t kSelectSample = 8192;

    BitVec() = default;
    explicit BitVec(uint64_t nbits, bool fill = false)
        : nbits_(nbits), words_(words_for_bits(nbits), fill ? ~uint64_t(0) : 0) {
        if (fill && nbits % 64) words_.back() &= (uint64_t(1) << (nbits % 64)) - 1;
    }
    BitVec(std::vector<uint64_t> words, uint64_t nbits)
        : nbits_(nbits), words_(std::move(words)) {
        if (words_.size() != words_for_bits(nbits_))
            throw std::invalid_argument("BitVec: word count does not match bit count");
        if (nbits_ % 64 && !words_.empty()) words_.back() &= (uint64_t(1) << (nbits_ % 64)) - 1;
    }

    uint64_t size() const { return nbits_; }
    bool get(uint64_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
    void set(uint64_t i) { words_[i >> 6] |= uint64_t(1) << (i & 63); }
    void clear(uint64_t i) { words_[i >> 6] &= ~(uint64_t(1) << (i & 63)); }
    const std::vector<uint64_t>& words() const { return words_; }

    void build_directories() {
        uint64_t nw = words_.size();
        uint64_t nsuper = (nbits_ + kSuperBits - 1) / kSuperBits + 1;
        uint64_t nblock = (nbits_ + kBlockBits - 1) / kBlockBits;
        super_.assign(nsuper, 0);
        block_.assign(nblock, 0);
        uint64_t total = 0, in_super = 0;
        for (uint64_t w = 0; w < nw; w++) {
            uint64_t bitpos = w * 64;
            if (bitpos % kSuperBits == 0) {
                super_[bitpos / kSuperBits] = total;
                in_super = 0;
            }
            if (bitpos % kBlockBits == 0) block_[bitpos / kBlockBits] = (uint16_t)in_super;
            uint64_t pc = (uint64_t)std::popcount(words_[w]);
            total += pc;
            in_super += pc;
        }
        super_.back() = total;
        ones_ = total;
        select_samples_.clear();
        uint64_t seen = 0;
        for (uint64_t w = 0; w < nw; w++) {
            uint64_t pc = (uint64_t)std::popcount(words_[w]);
            while (seen + pc > select_samples_.size() * kSelectSample) {
                uint64_t target = select_samples_.size() * kSelectSample - seen;
                uint64_t x = words_[w];
                for (uint64_t j = 0; j < target; j++) x &= x - 1;
                select_samples_.push_back(w * 64 + (uint64_t)std::countr_zero(x));
            }
            seen += pc;
        }
        zero_samples_.clear();
        uint64_t zeros = nbits_ - ones_, zseen = 0;
        for (uint64_t w = 0; w < nw && zero_samples_.size() * kSelectSample < zeros; w++) {
            uint64_t zpc = 64 - (uint64_t)std::popcount(words_[w]);
            while (zseen + zpc > zero_samples_.size() * kSelectSample &&
                   zero_samples_.size() * kSelectSample < zeros) {
                uint64_t target = zero_samples_.size() * kSelectSample - zseen;
                uint64_t x = ~words_[w];
                for (uint64_t j = 0; j < target; j++) x &= x - 1;
                zero_samples_.push_back(w * 64 + (uint64_t)std::countr_zero(x));
            }
            zseen += zpc;
        }
    }

    uint64_t ones() const { return ones_; }

    // Number of set bits in [0, i).
    uint64_t rank1(uint64_t i) const {
        uint64_t r = super_[i / kSuperBits] + block_[i / kBlockBits];
        uint64_t w = (i / kBlockBits) * (kBlockBits / 64);
        uint64_t end = i / 64;
        for (; w < end; w++) r += (uint64_t)std::popcount(words_[w]);
        if (i % 64) r += (uint64_t)std::popcount(words_[end] & ((uint64_t(1) << (i % 64)) - 1));
        return r;
    }

    // Position of the j-th set bit (0-based). Requires j < ones().
    uint64_t select1(uint64_t j) const {
        if (j >= ones_) throw std::out_of_range("BitVec::select1");
        uint64_t lo = select_samples_[j / kSelectSample] / kSuperBits;
        uint64_t hi = (j / kSelectSample + 1 < select_samples_.size())
                          ? select_samples_[j / kSelectSample + 1] / kSuperBits + 1
                          : super_.size() - 1;
        while (lo + 1 < hi) {
            uint64_t mid = (lo + hi) / 2;
            if (super_[mid] <= j) lo = mid; else hi = mid;
        }
        uint64_t rem = j - super_[lo];
        uint64_t blo = lo * (kSuperBits / kBlockBits);
        uint64_t bhi = std::min<uint64_t>((lo + 1) * (kSuperBits / kBlockBits), block_.size());
        while (blo + 1 < bhi) {
            uint64_t mid = (blo + bhi) / 2;
            if (block_[mid] <= rem) blo = mid; else bhi = mid;
        }
        rem -= block_[blo];
        uint64_t w = blo * (kBlockBits / 64);
        for (;; w++) {
            uint64_t pc = (uint64_t)std::popcount(words_[w]);
            if (rem < pc) break;
            rem -= pc;
        }
        uint64_t x = words_[w];
        for (uint64_t j2 = 0; j2 < rem; j2++) x &= x - 1;
        return w * 64 + (uint64_t)std::countr_zero(x);
    }

    // Position of the j-th clear bit (0-based). Requires j < size() - ones().
    uint64_t select0(uint64_t j) const {
        if (j >= nbits_ - ones_) throw std::out_of_range("BitVec::select0");
        uint64_t lo = zero_samples_[j / kSelectSample] / kSuperBits;
        uint64_t hi = (j / kSelectSample + 1 < zero_samples_.size())
                          ? zero_samples_[j / kSelectSample + 1] / kSuperBits + 1
                          : super_.size() - 1;
        while (lo + 1 < hi) {
            uint64_t mid = (lo + hi) / 2;
            if (mid * kSuperBits - super_[mid] <= j) lo = mid; else hi = mid;
        }
        uint64_t rem = j - (lo * kSuperBits - super_[lo]);
        uint64_t base = lo * (kSuperBits / kBlockBits);
        uint64_t blo = base;
        uint64_t bhi = std::min<uint64_t>((lo + 1) * (kSuperBits / kBlockBits), block_.size());
        while (blo + 1 < bhi) {
            uint64_t mid = (blo + bhi) / 2;
            if ((mid - base) * kBlockBits - block_[mid] <= rem) blo = mid; else bhi = mid;
        }
        rem -= (blo - base) * kBlockBits - block_[blo];
        uint64_t w = blo * (kBlockBits / 64);
        for (;; w++) {
            uint64_t zpc = 64 - (uint64_t)std::popcount(words_[w]);
            if (rem < zpc) break;
            rem -= zpc;
        }
        uint64_t x = ~words_[w];
        for (uint64_t j2 = 0; j2 < rem; j2++) x &= x - 1;
        return w * 64 + (uint64_t)std::countr_zero(x);
    }

    uint64_t aux_bits() const {
        return super_.size() * 64 + block_.size() * 16 +
               (select_samples_.size() + zero_samples_.size()) * 64;
    }

    void save(Writer& w) const {
        w.u64(nbits_);
        w.words(words_);
    }
    static BitVec load(Reader& r) {
        uint64_t nbits = r.u64();
        BitVec bv(r.words(), nbits);
        bv.build_directories();
        return bv;
    }

private:
    uint64_t nbits_ = 0;
    std::vector<uint64_t> words_;
    std::vector<uint64_t> super_;
    std::vector<uint16_t> block_;
    std::vector<uint64_t> select_samples_;
    std::vector<uint64_t> zero_samples_;
    uint64_t ones_ = 0;
};

}  // namespace kphf
