#pragma once

// Bucket placement. Keys are distributed into B ~ n/lambda buckets through
// the assignment curve beta_k so that early buckets are large (bins still
// empty) and late buckets shrink as the table fills; for each bucket we
// search for the smallest seed that places all of its keys into bins with
// free capacity. Seeds are stored Golomb-Rice coded or in a fixed-width
// vector.
//
// Buckets are processed in descending size order: the curve equalizes
// expected cost, but realized sizes fluctuate, and an oversized bucket hit
// late (table nearly full) would need astronomically many seeds. Sorting
// makes every bucket face a fill level where its size is typical. Queries
// are oblivious to the processing order.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "kphf/curves.hpp"
#include "kphf/golomb_rice.hpp"
#include "kphf/hash.hpp"
#include "kphf/io.hpp"
#include "kphf/packed_vec.hpp"
#include "kphf/phf.hpp"

namespace kphf {

enum class BucketEncoding : uint64_t { Rice = 0, Compact = 1 };

struct BucketConfig {
    uint64_t k = 8;
    double lambda = 12.0;
    BucketEncoding encoding = BucketEncoding::Rice;
    uint64_t seed = 0x6275636b;
};

class BucketPhf final : public MkPhf {
public:
    BucketPhf() = default;

    static BucketPhf build(const std::vector<Key128>& keys, const BucketConfig& cfg) {
        validate(cfg);
        check_build_keys(keys, cfg.k);
        BucketPhf f;
        f.cfg_ = cfg;
        f.n_ = keys.size();
        f.m_ = ceil_div(f.n_, cfg.k);
        f.B_ = num_buckets(f.n_, cfg.lambda);
        f.curve_ = bucket_curves(cfg.k);

        std::vector<uint64_t> seeds;
        for (uint64_t attempt = 0; attempt < kAttempts; attempt++) {
            f.gseed_ = mix64(cfg.seed + attempt * 0x517cc1b727220a95ULL);
            if (f.search_seeds(keys, seeds)) {
                f.encode(seeds);
                return f;
            }
        }
        throw std::runtime_error("bucket: seed search failed");
    }

    uint64_t operator()(Key128 key) const override {
        uint64_t b = bucket_of(key);
        uint64_t s = cfg_.encoding == BucketEncoding::Rice ? rice_.access(b) : compact_.get(b);
        return to_range(key, HashUse::Place, gseed_ + s, m_);
    }

    uint64_t num_keys() const override { return n_; }
    uint64_t num_bins() const override { return m_; }
    uint64_t bin_capacity() const override { return cfg_.k; }
    const char* scheme_name() const override { return "bucket"; }
    std::string describe() const override {
        return "lambda=" + fmt_double(cfg_.lambda) + ";encoding=" +
               (cfg_.encoding == BucketEncoding::Rice ? "rice" : "compact");
    }

    uint64_t num_buckets() const { return B_; }

    void save(Writer& w) const override {
        w.u64(kFormatMagic);
        w.u64(kFormatVersion);
        w.u64((uint64_t)SchemeId::Bucket);
        w.u64(cfg_.k);
        w.f64(cfg_.lambda);
        w.u64((uint64_t)cfg_.encoding);
        w.u64(cfg_.seed);
        w.u64(n_);
        w.u64(gseed_);
        if (cfg_.encoding == BucketEncoding::Rice) rice_.save(w); else compact_.save(w);
    }

    static BucketPhf load_payload(Reader& r) {
        BucketPhf f;
        f.cfg_.k = r.u64();
        f.cfg_.lambda = r.f64();
        uint64_t enc = r.u64();
        f.cfg_.seed = r.u64();
        f.n_ = r.u64();
        f.gseed_ = r.u64();
        if (enc > 1) throw std::runtime_error("kphf: corrupt stream (bucket encoding)");
        f.cfg_.encoding = (BucketEncoding)enc;
        validate(f.cfg_);
        f.m_ = ceil_div(f.n_, f.cfg_.k);
        f.B_ = num_buckets(f.n_, f.cfg_.lambda);
        f.curve_ = bucket_curves(f.cfg_.k);
        if (f.cfg_.encoding == BucketEncoding::Rice) f.rice_ = GolombRiceSeq::load(r);
        else f.compact_ = PackedVec::load(r);
        return f;
    }

private:
    static constexpr uint64_t kAttempts = 3;
    static constexpr uint64_t kSeedBudget = uint64_t(1) << 28;
    static constexpr uint64_t kMaxRewinds = 64;

    static void validate(const BucketConfig& cfg) {
        if (cfg.k == 0 || cfg.k >= (1 << 20))
            throw std::invalid_argument("bucket: k out of range");
        if (!(cfg.lambda >= 1.0) || !(cfg.lambda <= 1e6))
            throw std::invalid_argument("bucket: lambda out of range");
    }

    static uint64_t num_buckets(uint64_t n, double lambda) {
        double b = std::ceil((double)n / lambda);
        return b < 1.0 ? 1 : (uint64_t)b;
    }

    static std::string fmt_double(double v) {
        if (v == std::floor(v) && std::abs(v) < 1e15)
            return std::to_string((int64_t)v);
        char buf[64];
        std::snprintf(buf, sizeof buf, "%g", v);
        return buf;
    }

    uint64_t cap_of(uint64_t bin) const {
        return bin + 1 == m_ ? n_ - cfg_.k * (m_ - 1) : cfg_.k;
    }

    uint64_t bucket_of(Key128 key) const {
        double u = to_unit(key, HashUse::CurvePoint, gseed_);
        uint64_t b = (uint64_t)(beta_at(curve_, u) * (double)B_);
        return b < B_ ? b : B_ - 1;
    }

    bool search_seeds(const std::vector<Key128>& keys, std::vector<uint64_t>& seeds) const {
        std::vector<std::vector<Key128>> bucket_keys(B_);
        for (const Key128& key : keys) bucket_keys[bucket_of(key)].push_back(key);

        std::vector<uint64_t> order(B_);
        for (uint64_t b = 0; b < B_; b++) order[b] = b;
        std::stable_sort(order.begin(), order.end(), [&](uint64_t a, uint64_t b) {
            return bucket_keys[a].size() > bucket_keys[b].size();
        });

        std::vector<uint64_t> fill(m_, 0);
        std::vector<std::vector<uint64_t>> placed(B_);
        std::vector<uint64_t> trial;
        seeds.assign(B_, 0);
        uint64_t rewinds = 0;
        for (uint64_t i = 0; i < B_;) {
            uint64_t b = order[i];
            const auto& ks = bucket_keys[b];
            bool found = false;
            for (uint64_t s = seeds[b], budget = 0; budget < kSeedBudget; s++, budget++) {
                trial.clear();
                bool ok = true;
                for (const Key128& key : ks) {
                    uint64_t pos = to_range(key, HashUse::Place, gseed_ + s, m_);
                    if (fill[pos] == cap_of(pos)) {
                        ok = false;
                        break;
                    }
                    fill[pos]++;
                    trial.push_back(pos);
                }
                if (ok) {
                    seeds[b] = s;
                    placed[b].swap(trial);
                    found = true;
                    break;
                }
                for (uint64_t pos : trial) fill[pos]--;
            }
            if (found) {
                i++;
                continue;
            }
            // Hard bucket: unwind the previously placed one and resume its
            // search so the stuck bucket sees a different table state.
            if (i == 0 || ++rewinds > kMaxRewinds) return false;
            seeds[b] = 0;
            uint64_t prev = order[--i];
            for (uint64_t pos : placed[prev]) fill[pos]--;
            placed[prev].clear();
            seeds[prev]++;
        }
        return true;
    }

    void encode(const std::vector<uint64_t>& seeds) {
        if (cfg_.encoding == BucketEncoding::Rice) {
            uint64_t best_bits = ~uint64_t(0), best_L = 0;
            for (uint64_t L = 0; L <= 40; L++) {
                uint64_t bits = 0;
                for (uint64_t s : seeds) bits += (s >> L) + 1 + L;
                if (bits < best_bits) {
                    best_bits = bits;
                    best_L = L;
                }
            }
            rice_ = GolombRiceSeq(seeds, best_L);
        } else {
            uint64_t top = *std::max_element(seeds.begin(), seeds.end());
            uint32_t w = std::max<uint32_t>(1, (uint32_t)std::bit_width(top));
            compact_ = PackedVec(seeds.size(), w);
            for (size_t i = 0; i < seeds.size(); i++) compact_.set(i, seeds[i]);
        }
    }

    BucketConfig cfg_;
    uint64_t n_ = 0, m_ = 0, B_ = 0, gseed_ = 0;
    CurveTable curve_;
    GolombRiceSeq rice_;
    PackedVec compact_;
};

}  // namespace kphf
