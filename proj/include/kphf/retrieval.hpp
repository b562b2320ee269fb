#pragma once

// Static function {key -> r-bit value} built from a linear system over
// GF(2). Each key covers a 64-bit coefficient window at a hashed start
// position; incremental elimination keeps per-key work near O(1). Keys are
// split into chunks of ~4096 so a rare unsolvable system only forces a
// rebuild of one chunk with a bumped seed.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kphf/bits.hpp"
#include "kphf/elias_fano.hpp"
#include "kphf/hash.hpp"
#include "kphf/io.hpp"

namespace kphf {

class RetrievalFn {
    static constexpr uint64_t kChunkTarget = 4096;
    static constexpr uint64_t kCoeffMul = 0x9e3779b97f4a7c15ULL;
    static constexpr uint64_t kChunkMul = 0xbf58476d1ce4e5b9ULL;
    static constexpr uint64_t kTryMul = 0x94d049bb133111ebULL;
    static constexpr int kMaxTries = 64;

public:
    RetrievalFn() = default;

    RetrievalFn(const std::vector<std::pair<Key128, uint64_t>>& entries, uint32_t value_bits,
                uint64_t seed)
        : n_(entries.size()), value_bits_(value_bits), seed_(seed) {
        if (value_bits == 0 || value_bits > 8)
            throw std::invalid_argument("RetrievalFn: value width must be 1..8");
        for (auto& [key, value] : entries)
            if (value >> value_bits) throw std::invalid_argument("RetrievalFn: value out of range");
        {
            std::vector<Key128> keys(n_);
            for (uint64_t i = 0; i < n_; i++) keys[i] = entries[i].first;
            std::sort(keys.begin(), keys.end());
            if (std::adjacent_find(keys.begin(), keys.end()) != keys.end())
                throw std::invalid_argument("RetrievalFn: duplicate keys");
        }
        chunks_ = std::max<uint64_t>(1, (n_ + kChunkTarget - 1) / kChunkTarget);
        tries_.assign(chunks_, 0);

        std::vector<uint64_t> count(chunks_ + 1, 0);
        std::vector<uint32_t> chunk_of(n_);
        for (uint64_t i = 0; i < n_; i++) {
            chunk_of[i] = (uint32_t)to_range(entries[i].first, HashUse::Chunk, seed_, chunks_);
            count[chunk_of[i] + 1]++;
        }
        std::vector<uint64_t> offsets(chunks_ + 1, 0);
        for (uint64_t c = 0; c < chunks_; c++) {
            uint64_t nc = count[c + 1];
            uint64_t mc = nc ? (nc * 21 + 19) / 20 + 64 : 0;  // ceil(1.05*nc) + 64
            offsets[c + 1] = offsets[c] + mc;
            count[c + 1] += count[c];
        }
        std::vector<uint32_t> order(n_);
        {
            std::vector<uint64_t> at(count.begin(), count.end() - 1);
            for (uint64_t i = 0; i < n_; i++) order[at[chunk_of[i]]++] = (uint32_t)i;
        }

        uint64_t total = offsets[chunks_];
        columns_.assign(value_bits_, std::vector<uint64_t>(words_for_bits(total), 0));

        std::vector<uint64_t> coeff;
        std::vector<uint8_t> value, sol;
        for (uint64_t c = 0; c < chunks_; c++) {
            uint64_t nc = count[c + 1] - count[c];
            if (!nc) continue;
            uint64_t mc = offsets[c + 1] - offsets[c];
            bool done = false;
            for (int t = 0; t < kMaxTries && !done; t++) {
                uint64_t cseed = chunk_seed(c, t);
                coeff.assign(mc, 0);
                value.assign(mc, 0);
                done = true;
                for (uint64_t e = count[c]; e < count[c + 1] && done; e++) {
                    auto& [key, val] = entries[order[e]];
                    uint64_t d = derive64(key, HashUse::Row, cseed);
                    uint64_t s = range_of(d, mc - 63);
                    uint64_t cf = mix64(d * kCoeffMul ^ cseed) | 1;
                    uint8_t v = (uint8_t)val;
                    for (;;) {
                        if (!coeff[s]) {
                            coeff[s] = cf;
                            value[s] = v;
                            break;
                        }
                        cf ^= coeff[s];
                        v ^= value[s];
                        if (!cf) {
                            done = (v == 0);
                            break;
                        }
                        int sh = std::countr_zero(cf);
                        s += (uint64_t)sh;
                        cf >>= sh;
                    }
                }
                if (done) tries_[c] = (uint8_t)t;
            }
            if (!done) throw std::runtime_error("RetrievalFn: chunk build failed");
            sol.assign(mc, 0);
            for (uint64_t p = mc; p-- > 0;) {
                if (!coeff[p]) continue;
                uint8_t v = value[p];
                for (uint64_t cf = coeff[p] & ~uint64_t(1); cf; cf &= cf - 1)
                    v ^= sol[p + (uint64_t)std::countr_zero(cf)];
                sol[p] = v;
            }
            for (uint64_t p = 0; p < mc; p++)
                for (uint32_t b = 0; b < value_bits_; b++)
                    if ((sol[p] >> b) & 1) {
                        uint64_t g = offsets[c] + p;
                        columns_[b][g >> 6] |= uint64_t(1) << (g & 63);
                    }
        }
        offsets_ = EliasFanoSeq(offsets);
    }

    uint64_t get(Key128 key) const {
        uint64_t c = to_range(key, HashUse::Chunk, seed_, chunks_);
        uint64_t lo = offsets_.access(c), hi = offsets_.access(c + 1);
        uint64_t mc = hi - lo;
        if (!mc) return 0;
        uint64_t cseed = chunk_seed(c, tries_[c]);
        uint64_t d = derive64(key, HashUse::Row, cseed);
        uint64_t s = lo + range_of(d, mc - 63);
        uint64_t cf = mix64(d * kCoeffMul ^ cseed) | 1;
        uint64_t out = 0;
        for (uint32_t b = 0; b < value_bits_; b++) {
            uint64_t window = bits_get(columns_[b].data(), s, 64);
            out |= uint64_t(std::popcount(window & cf) & 1) << b;
        }
        return out;
    }

    uint64_t size() const { return n_; }
    uint32_t value_bits() const { return value_bits_; }

    void save(Writer& w) const {
        w.u64(n_);
        w.u64(value_bits_);
        w.u64(seed_);
        w.u64(chunks_);
        w.bytes(tries_);
        offsets_.save(w);
        for (auto& col : columns_) w.words(col);
    }
    static RetrievalFn load(Reader& r) {
        RetrievalFn f;
        f.n_ = r.u64();
        uint64_t vb = r.u64();
        if (vb == 0 || vb > 8) throw std::runtime_error("kphf: corrupt stream (value width)");
        f.value_bits_ = (uint32_t)vb;
        f.seed_ = r.u64();
        f.chunks_ = r.u64();
        f.tries_ = r.bytes();
        if (f.tries_.size() != f.chunks_) throw std::runtime_error("kphf: corrupt stream (retries)");
        f.offsets_ = EliasFanoSeq::load(r);
        f.columns_.resize(f.value_bits_);
        for (auto& col : f.columns_) col = r.words();
        return f;
    }

private:
    uint64_t chunk_seed(uint64_t c, int t) const {
        return mix64(seed_ + c * kChunkMul + (uint64_t)t * kTryMul);
    }

    uint64_t n_ = 0;
    uint32_t value_bits_ = 0;
    uint64_t seed_ = 0;
    uint64_t chunks_ = 0;
    std::vector<uint8_t> tries_;
    EliasFanoSeq offsets_;
    std::vector<std::vector<uint64_t>> columns_;
};

}  // namespace kphf
