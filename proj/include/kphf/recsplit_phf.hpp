#pragma once

// Recursive splitting. Keys hash into buckets of expected size b; inside a
// bucket, seeds are searched that split the key set down to leaves of size
// k. Leaves need no further seed because all of their keys share one bin.
// Full leaves map to whole bins; the short tails of consecutive buckets are
// chained until they fill a bin, with a merge seed separating the keys of a
// tail that straddles two chains. Seed values are Golomb-Rice coded with a
// per-shape parameter recomputed from the split success probability.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "kphf/bits.hpp"
#include "kphf/elias_fano.hpp"
#include "kphf/hash.hpp"
#include "kphf/io.hpp"
#include "kphf/phf.hpp"

namespace kphf {

struct RecSplitConfig {
    uint64_t k = 8;
    uint64_t ell = 2;
    uint64_t bucket = 2000;
    uint64_t seed = 0x72637370;
};

class RecSplitPhf final : public MkPhf {
public:
    RecSplitPhf() = default;

    static RecSplitPhf build(const std::vector<Key128>& keys, const RecSplitConfig& cfg) {
        validate(cfg);
        check_build_keys(keys, cfg.k);
        RecSplitPhf f;
        f.cfg_ = cfg;
        f.n_ = keys.size();
        f.m_ = ceil_div(f.n_, cfg.k);
        f.B_ = ceil_div(f.n_, cfg.bucket);

        std::vector<std::vector<Key128>> bucket_keys(f.B_);
        for (const Key128& key : keys)
            bucket_keys[to_range(key, HashUse::Bucket, cfg.seed, f.B_)].push_back(key);

        BitWriter bw;
        std::vector<uint64_t> counts(f.B_ + 1, 0), offs(f.B_ + 1, 0);
        uint64_t x = 0;
        for (uint64_t j = 0; j < f.B_; j++) {
            counts[j] = x;
            offs[j] = bw.size;
            auto& ks = bucket_keys[j];
            uint64_t s = ks.size();
            f.build_node(ks.data(), s, x, bw);
            uint64_t rho = x % cfg.k, r = s % cfg.k;
            if (r != 0 && rho + r > cfg.k)
                f.build_merge(ks.data() + (s - r), r, cfg.k - rho, bw);
            x += s;
        }
        counts[f.B_] = x;
        offs[f.B_] = bw.size;
        f.counts_ = EliasFanoSeq(counts);
        f.offs_ = EliasFanoSeq(offs);
        f.stream_ = std::move(bw.words);
        f.stream_bits_ = bw.size;
        return f;
    }

    uint64_t operator()(Key128 key) const override {
        uint64_t k = cfg_.k;
        uint64_t j = to_range(key, HashUse::Bucket, cfg_.seed, B_);
        uint64_t xj = counts_.access(j);
        uint64_t s = counts_.access(j + 1) - xj;
        BitReader br(stream_.data(), stream_bits_);
        br.pos = offs_.access(j);
        uint64_t left = 0, size = s;
        while (size > k) {
            uint64_t cs[64];
            size_t f = children(size, cs);
            (void)f;
            uint64_t trial = read_code(br, split_width_of(size));
            uint64_t pos = to_range(key, HashUse::Split, node_seed(xj + left, size) + trial, size);
            size_t c = 0;
            uint64_t cum = 0;
            while (pos >= cum + cs[c]) {
                cum += cs[c];
                skip_subtree(cs[c], br);
                c++;
            }
            left += cum;
            size = cs[c];
        }
        if (size == k) return xj / k + left / k;
        uint64_t rho = xj % k, r = size;
        if (rho + r > k) {
            uint64_t trial = read_code(br, merge_width_of(r, k - rho));
            if (to_range(key, HashUse::MergeSplit, cfg_.seed + trial, r) < k - rho)
                return xj / k + s / k;
        } else if (rho + r == k) {
            return xj / k + s / k;
        }
        for (uint64_t J = j + 1; J < B_; J++) {
            uint64_t xJ = counts_.access(J), sJ = counts_.access(J + 1) - xJ;
            if (xJ % k + sJ % k >= k) return xJ / k + sJ / k;
        }
        return m_ - 1;
    }

    uint64_t num_keys() const override { return n_; }
    uint64_t num_bins() const override { return m_; }
    uint64_t bin_capacity() const override { return cfg_.k; }
    const char* scheme_name() const override { return "recsplit"; }
    std::string describe() const override {
        return "ell=" + std::to_string(cfg_.ell) + ";b=" + std::to_string(cfg_.bucket);
    }

    uint64_t num_buckets() const { return B_; }
    uint64_t stream_bits() const { return stream_bits_; }

    void save(Writer& w) const override {
        w.u64(kFormatMagic);
        w.u64(kFormatVersion);
        w.u64((uint64_t)SchemeId::RecSplit);
        w.u64(cfg_.k);
        w.u64(cfg_.ell);
        w.u64(cfg_.bucket);
        w.u64(cfg_.seed);
        w.u64(n_);
        counts_.save(w);
        offs_.save(w);
        w.u64(stream_bits_);
        w.words(stream_);
    }

    static RecSplitPhf load_payload(Reader& r) {
        RecSplitPhf f;
        f.cfg_.k = r.u64();
        f.cfg_.ell = r.u64();
        f.cfg_.bucket = r.u64();
        f.cfg_.seed = r.u64();
        f.n_ = r.u64();
        validate(f.cfg_);
        f.m_ = ceil_div(f.n_, f.cfg_.k);
        f.B_ = ceil_div(f.n_, f.cfg_.bucket);
        f.counts_ = EliasFanoSeq::load(r);
        f.offs_ = EliasFanoSeq::load(r);
        f.stream_bits_ = r.u64();
        f.stream_ = r.words();
        if (f.counts_.size() != f.B_ + 1 || f.offs_.size() != f.B_ + 1 ||
            f.stream_.size() < words_for_bits(f.stream_bits_))
            throw std::runtime_error("kphf: corrupt stream (recsplit directory)");
        f.rebuild_widths();
        return f;
    }

private:
    static constexpr uint64_t kTrialCap = uint64_t(1) << 40;

    static void validate(const RecSplitConfig& cfg) {
        if (cfg.k == 0 || cfg.k >= (1 << 20))
            throw std::invalid_argument("recsplit: k out of range");
        if (cfg.ell < 1 || cfg.ell > 64)
            throw std::invalid_argument("recsplit: ell out of range");
        if (cfg.bucket < 1 || cfg.bucket > 10000000)
            throw std::invalid_argument("recsplit: bucket size out of range");
        // A full fanout node needs one seed scattering k*ell keys into ell
        // exact-k parts; expected trials are ell^(k*ell) over a multinomial
        // and grow exponentially, so refuse configs past ~2^24 per node.
        double s = double(cfg.k) * double(cfg.ell);
        double bits = s * std::log2(double(cfg.ell)) -
                      (std::lgamma(s + 1.0) -
                       double(cfg.ell) * std::lgamma(double(cfg.k) + 1.0)) /
                          std::log(2.0);
        if (bits > 24.0)
            throw std::invalid_argument(
                "recsplit: a k*ell leaf needs ~2^" + std::to_string((int)bits) +
                " seed trials; lower ell or k");
    }

    // Child sizes of an internal node: fanout splits at or below k*ell keep
    // every child but the last at exactly k; larger nodes split in two with
    // a k*ell*2^i left part so that left subtrees tile full bins.
    size_t children(uint64_t s, uint64_t* cs) const {
        uint64_t kl = cfg_.k * cfg_.ell;
        if (s <= kl) {
            size_t f = (size_t)ceil_div(s, cfg_.k);
            for (size_t i = 0; i + 1 < f; i++) cs[i] = cfg_.k;
            cs[f - 1] = s - cfg_.k * (f - 1);
            return f;
        }
        uint64_t half = ceil_div(s, 2), c = kl;
        while (c * 2 <= half) c *= 2;
        cs[0] = c;
        cs[1] = s - c;
        return 2;
    }

    // Expected Rice bits for a Geometric(P) trial count are L + 1 + Q/(1-Q)
    // with Q = (1-P)^(2^L); pick the exact minimizer.
    static uint32_t rice_param(double lnp) {
        if (!(lnp < 0.0)) return 0;
        double p = std::exp(lnp);
        double lnq = p < 1e-12 ? -p : std::log1p(-p);
        double best = 1e300;
        uint32_t best_L = 0;
        for (uint32_t L = 0; L <= 58; L++) {
            double lnQ = std::ldexp(lnq, (int)L);
            double e;
            if (lnQ < -40.0) {
                e = L + 1.0;
            } else {
                double Q = std::exp(lnQ);
                e = L + 1.0 + Q / (1.0 - Q);
            }
            if (e < best) {
                best = e;
                best_L = L;
            }
            if (lnQ < -40.0) break;
        }
        return best_L;
    }

    uint32_t split_width(uint64_t s) {
        auto it = split_L_.find(s);
        if (it != split_L_.end()) return it->second;
        uint64_t cs[64];
        size_t f = children(s, cs);
        double lnp = std::lgamma((double)s + 1.0);
        for (size_t i = 0; i < f; i++) {
            lnp -= std::lgamma((double)cs[i] + 1.0);
            lnp += (double)cs[i] * std::log((double)cs[i] / (double)s);
        }
        uint32_t L = rice_param(lnp);
        split_L_.emplace(s, L);
        return L;
    }

    uint32_t merge_width(uint64_t r, uint64_t fill) {
        uint64_t key = (r << 21) | fill;
        auto it = merge_L_.find(key);
        if (it != merge_L_.end()) return it->second;
        double p = (double)fill / (double)r;
        double lnp = std::lgamma((double)r + 1.0) - std::lgamma((double)fill + 1.0) -
                     std::lgamma((double)(r - fill) + 1.0) + (double)fill * std::log(p) +
                     (double)(r - fill) * std::log1p(-p);
        uint32_t L = rice_param(lnp);
        merge_L_.emplace(key, L);
        return L;
    }

    uint32_t split_width_of(uint64_t s) const {
        auto it = split_L_.find(s);
        if (it == split_L_.end()) throw std::runtime_error("recsplit: missing split width");
        return it->second;
    }
    uint32_t merge_width_of(uint64_t r, uint64_t fill) const {
        auto it = merge_L_.find((r << 21) | fill);
        if (it == merge_L_.end()) throw std::runtime_error("recsplit: missing merge width");
        return it->second;
    }

    static uint64_t read_code(BitReader& br, uint32_t L) {
        uint64_t hi = br.read_unary();
        return L ? (hi << L) | br.read(L) : hi;
    }

    // Each node's seed stream is salted with its global key offset and size:
    // a child re-testing the raw trial integers its ancestors consumed would
    // find those values conditioned against it, inflating the search.
    uint64_t node_seed(uint64_t gleft, uint64_t s) const {
        return mix64(cfg_.seed + gleft * 0x9e3779b97f4a7c15ULL + s * 0xbf58476d1ce4e5b9ULL);
    }

    void build_node(Key128* ks, uint64_t s, uint64_t gleft, BitWriter& bw) {
        if (s <= cfg_.k) return;
        uint64_t cs[64], cum[65];
        size_t f = children(s, cs);
        cum[0] = 0;
        for (size_t i = 0; i < f; i++) cum[i + 1] = cum[i] + cs[i];
        uint32_t L = split_width(s);
        uint64_t nseed = node_seed(gleft, s);
        uint64_t cnt[64];
        uint64_t trial = 0;
        for (;; trial++) {
            if (trial >= kTrialCap) throw std::runtime_error("recsplit: split search failed");
            std::fill(cnt, cnt + f, 0);
            bool ok = true;
            for (uint64_t i = 0; i < s; i++) {
                uint64_t pos = to_range(ks[i], HashUse::Split, nseed + trial, s);
                size_t c = 0;
                while (pos >= cum[c + 1]) c++;
                if (++cnt[c] > cs[c]) {
                    ok = false;
                    break;
                }
            }
            if (ok) break;
        }
        bw.push_unary(trial >> L);
        if (L) bw.push(trial, L);
        std::vector<Key128> tmp(s);
        uint64_t fillp[64];
        std::copy(cum, cum + f, fillp);
        for (uint64_t i = 0; i < s; i++) {
            uint64_t pos = to_range(ks[i], HashUse::Split, nseed + trial, s);
            size_t c = 0;
            while (pos >= cum[c + 1]) c++;
            tmp[fillp[c]++] = ks[i];
        }
        std::copy(tmp.begin(), tmp.end(), ks);
        for (size_t i = 0; i < f; i++) build_node(ks + cum[i], cs[i], gleft + cum[i], bw);
    }

    void build_merge(const Key128* tail, uint64_t r, uint64_t fill, BitWriter& bw) {
        uint32_t L = merge_width(r, fill);
        uint64_t trial = 0;
        for (;; trial++) {
            if (trial >= kTrialCap) throw std::runtime_error("recsplit: merge search failed");
            uint64_t cnt = 0;
            for (uint64_t i = 0; i < r; i++)
                if (to_range(tail[i], HashUse::MergeSplit, cfg_.seed + trial, r) < fill) cnt++;
            if (cnt == fill) break;
        }
        bw.push_unary(trial >> L);
        if (L) bw.push(trial, L);
    }

    void skip_subtree(uint64_t s, BitReader& br) const {
        if (s <= cfg_.k) return;
        uint64_t cs[64];
        size_t f = children(s, cs);
        read_code(br, split_width_of(s));
        for (size_t i = 0; i < f; i++) skip_subtree(cs[i], br);
    }

    void walk_shape(uint64_t s) {
        if (s <= cfg_.k) return;
        uint64_t cs[64];
        size_t f = children(s, cs);
        split_width(s);
        for (size_t i = 0; i < f; i++) walk_shape(cs[i]);
    }

    void rebuild_widths() {
        for (uint64_t j = 0; j < B_; j++) {
            uint64_t xj = counts_.access(j), s = counts_.access(j + 1) - xj;
            walk_shape(s);
            uint64_t rho = xj % cfg_.k, r = s % cfg_.k;
            if (r != 0 && rho + r > cfg_.k) merge_width(r, cfg_.k - rho);
        }
    }

    RecSplitConfig cfg_;
    uint64_t n_ = 0, m_ = 0, B_ = 0, stream_bits_ = 0;
    EliasFanoSeq counts_;
    EliasFanoSeq offs_;
    std::vector<uint64_t> stream_;
    std::unordered_map<uint64_t, uint32_t> split_L_;
    std::unordered_map<uint64_t, uint32_t> merge_L_;
};

}  // namespace kphf
