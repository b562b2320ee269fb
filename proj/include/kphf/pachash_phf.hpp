#pragma once

// Partitioned-counting scheme. Keys hash into B = a*n/k pseudo-buckets and
// are sorted by bucket; consecutive groups of k become bins. Per bin we
// store only the bucket where it starts, Elias-Fano coded. A query narrows
// its bin down to the runs straddling its bucket; when more than one bin is
// possible, the offset of the true bin is kept in a 1-bit-per-level static
// retrieval function.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "kphf/elias_fano.hpp"
#include "kphf/hash.hpp"
#include "kphf/io.hpp"
#include "kphf/phf.hpp"
#include "kphf/retrieval.hpp"

namespace kphf {

struct PaCHashConfig {
    uint64_t k = 8;
    uint64_t a = 8;
    uint64_t seed = 0x70616368;
};

class PaCHashPhf final : public MkPhf {
public:
    PaCHashPhf() = default;

    static PaCHashPhf build(const std::vector<Key128>& keys, const PaCHashConfig& cfg) {
        validate(cfg);
        check_build_keys(keys, cfg.k);
        PaCHashPhf f;
        f.cfg_ = cfg;
        f.n_ = keys.size();
        f.m_ = ceil_div(f.n_, cfg.k);
        f.B_ = ceil_div(cfg.a * f.n_, cfg.k);

        std::vector<std::pair<uint64_t, Key128>> sk(f.n_);
        for (uint64_t i = 0; i < f.n_; i++)
            sk[i] = {to_range(keys[i], HashUse::Bucket, cfg.seed, f.B_), keys[i]};
        std::sort(sk.begin(), sk.end());

        auto bucket_count = [&](uint64_t b) {
            auto cmp_lo = std::lower_bound(sk.begin(), sk.end(), b,
                                           [](const auto& e, uint64_t v) { return e.first < v; });
            auto cmp_hi = std::upper_bound(sk.begin(), sk.end(), b,
                                           [](uint64_t v, const auto& e) { return v < e.first; });
            return (uint64_t)(cmp_hi - cmp_lo);
        };

        std::vector<uint64_t> p(f.m_);
        p[0] = sk[0].first;
        for (uint64_t q = 1; q < f.m_; q++) {
            uint64_t bq = sk[q * cfg.k].first, bp = sk[q * cfg.k - 1].first;
            if (bq == bp) p[q] = bq;
            else if (bq - bp >= 2) p[q] = bp + 1;  // empty bucket: hit costs nothing
            else p[q] = bucket_count(bp) < bucket_count(bq) ? bp : bq;
        }
        f.p_ = EliasFanoSeq(p);

        std::vector<std::pair<Key128, uint64_t>> entries;
        for (uint64_t idx = 0; idx < f.n_; idx++) {
            uint64_t b = sk[idx].first, T = idx / cfg.k;
            auto [i, j] = f.candidates(b);
            if (T < i || T >= j) throw std::runtime_error("pachash: coverage violation");
            if (j - i < 2) continue;
            uint64_t off = T - i;
            uint32_t w = (uint32_t)std::bit_width(j - i - 1);
            for (uint32_t beta = 0; beta < w; beta++)
                entries.push_back({rehash(sk[idx].second, beta), (off >> beta) & 1});
        }
        f.amb_ = RetrievalFn(entries, 1, mix64(cfg.seed ^ 0xab4c50611465df15ULL));
        return f;
    }

    uint64_t operator()(Key128 key) const override {
        uint64_t b = to_range(key, HashUse::Bucket, cfg_.seed, B_);
        auto [i, j] = candidates(b);
        if (j - i < 2) return i;
        uint32_t w = (uint32_t)std::bit_width(j - i - 1);
        uint64_t off = 0;
        for (uint32_t beta = 0; beta < w; beta++)
            off |= amb_.get(rehash(key, beta)) << beta;
        uint64_t bin = i + off;
        return bin < j ? bin : j - 1;
    }

    // Number of bins a bucket-b key could fall in (1 = unambiguous).
    uint64_t candidate_count(Key128 key) const {
        auto [i, j] = candidates(to_range(key, HashUse::Bucket, cfg_.seed, B_));
        return j - i;
    }

    uint64_t num_keys() const override { return n_; }
    uint64_t num_bins() const override { return m_; }
    uint64_t bin_capacity() const override { return cfg_.k; }
    const char* scheme_name() const override { return "pachash"; }
    std::string describe() const override { return "a=" + std::to_string(cfg_.a); }

    void save(Writer& w) const override {
        w.u64(kFormatMagic);
        w.u64(kFormatVersion);
        w.u64((uint64_t)SchemeId::PaCHash);
        w.u64(cfg_.k);
        w.u64(cfg_.a);
        w.u64(cfg_.seed);
        w.u64(n_);
        p_.save(w);
        amb_.save(w);
    }

    static PaCHashPhf load_payload(Reader& r) {
        PaCHashPhf f;
        f.cfg_.k = r.u64();
        f.cfg_.a = r.u64();
        f.cfg_.seed = r.u64();
        f.n_ = r.u64();
        validate(f.cfg_);
        f.m_ = ceil_div(f.n_, f.cfg_.k);
        f.B_ = ceil_div(f.cfg_.a * f.n_, f.cfg_.k);
        f.p_ = EliasFanoSeq::load(r);
        if (f.p_.size() != f.m_) throw std::runtime_error("kphf: corrupt stream (pachash bins)");
        f.amb_ = RetrievalFn::load(r);
        return f;
    }

private:
    static void validate(const PaCHashConfig& cfg) {
        if (cfg.k == 0 || cfg.k >= (1 << 20))
            throw std::invalid_argument("pachash: k out of range");
        if (cfg.a == 0 || cfg.a > (1 << 20))
            throw std::invalid_argument("pachash: a out of range");
    }

    // Candidate bin range [i, j) for bucket b: the bin starting at or before
    // b plus every bin starting exactly at b. Always non-empty within [0, m).
    std::pair<uint64_t, uint64_t> candidates(uint64_t b) const {
        uint64_t lo = p_.lower_bound_index(b);
        uint64_t i = lo == 0 ? 0 : lo - 1;
        uint64_t j = p_.upper_bound_index(b);
        if (j <= i) j = i + 1;
        return {i, j};
    }

    PaCHashConfig cfg_;
    uint64_t n_ = 0, m_ = 0, B_ = 0;
    EliasFanoSeq p_;
    RetrievalFn amb_;
};

}  // namespace kphf
