#pragma once

// Minimal perfect hash (k = 1) used for the leftover keys of the
// threshold scheme. Layered singleton placement: each layer hashes the
// surviving keys into exactly as many slots as keys; keys alone in their
// slot are placed, colliders retry in the next layer. The small remainder
// is ranked by a static function.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kphf/bitvec.hpp"
#include "kphf/hash.hpp"
#include "kphf/io.hpp"
#include "kphf/retrieval.hpp"

namespace kphf {

class Fallback1Phf {
    static constexpr uint64_t kTailSize = 64;
    static constexpr int kMaxLayers = 64;

public:
    Fallback1Phf() = default;

    Fallback1Phf(std::vector<Key128> keys, uint64_t seed) : n_(keys.size()), seed_(seed) {
        std::vector<Key128> next;
        std::vector<uint8_t> occ;
        for (int layer = 0; keys.size() > kTailSize; layer++) {
            if (layer >= kMaxLayers)
                throw std::runtime_error("Fallback1Phf: layer cap exceeded");
            uint64_t nj = keys.size();
            uint64_t ls = layer_seed(layer);
            occ.assign(nj, 0);
            for (const Key128& key : keys) {
                uint64_t pos = to_range(key, HashUse::SlotMap, ls, nj);
                if (occ[pos] < 2) occ[pos]++;
            }
            BitVec bv(nj);
            next.clear();
            for (const Key128& key : keys) {
                uint64_t pos = to_range(key, HashUse::SlotMap, ls, nj);
                if (occ[pos] == 1) bv.set(pos); else next.push_back(key);
            }
            bv.build_directories();
            layers_.push_back(std::move(bv));
            keys.swap(next);
        }
        std::sort(keys.begin(), keys.end());
        uint32_t width = keys.size() > 1 ? (uint32_t)std::bit_width(keys.size() - 1) : 1;
        std::vector<std::pair<Key128, uint64_t>> entries(keys.size());
        for (size_t i = 0; i < keys.size(); i++) entries[i] = {keys[i], i};
        tail_ = RetrievalFn(entries, width, tail_seed());
        rebuild_offsets();
    }

    uint64_t operator()(Key128 key) const {
        for (size_t j = 0; j < layers_.size(); j++) {
            uint64_t pos = to_range(key, HashUse::SlotMap, layer_seed((int)j), layers_[j].size());
            if (layers_[j].get(pos)) return offsets_[j] + layers_[j].rank1(pos);
        }
        return offsets_.back() + tail_.get(key);
    }

    uint64_t size() const { return n_; }

    // The seed is owned by the caller, so it is not serialized; layer word
    // counts are derivable from each layer's bit length.
    void save(Writer& w) const {
        w.u64(n_);
        w.u64(layers_.size());
        for (const BitVec& bv : layers_) {
            w.u64(bv.size());
            for (uint64_t v : bv.words()) w.u64(v);
        }
        tail_.save(w);
    }
    static Fallback1Phf load(Reader& r, uint64_t seed) {
        Fallback1Phf f;
        f.n_ = r.u64();
        f.seed_ = seed;
        uint64_t nl = r.u64();
        if (nl > kMaxLayers) throw std::runtime_error("kphf: corrupt stream (fallback layers)");
        f.layers_.reserve(nl);
        for (uint64_t j = 0; j < nl; j++) {
            uint64_t nbits = r.u64();
            if (nbits > (uint64_t(1) << 40))
                throw std::runtime_error("kphf: corrupt stream (fallback layer)");
            std::vector<uint64_t> words(words_for_bits(nbits));
            for (uint64_t& v : words) v = r.u64();
            f.layers_.emplace_back(std::move(words), nbits);
            f.layers_.back().build_directories();
        }
        f.tail_ = RetrievalFn::load(r);
        f.rebuild_offsets();
        return f;
    }

private:
    uint64_t layer_seed(int j) const {
        return mix64(seed_ + (uint64_t)(j + 1) * 0x6a09e667f3bcc909ULL);
    }
    uint64_t tail_seed() const { return mix64(seed_ ^ 0x1f83d9abfb41bd6bULL); }

    void rebuild_offsets() {
        offsets_.assign(layers_.size() + 1, 0);
        for (size_t j = 0; j < layers_.size(); j++) offsets_[j + 1] = offsets_[j] + layers_[j].ones();
    }

    uint64_t n_ = 0;
    uint64_t seed_ = 0;
    std::vector<BitVec> layers_;
    RetrievalFn tail_;
    std::vector<uint64_t> offsets_;
};

}  // namespace kphf
