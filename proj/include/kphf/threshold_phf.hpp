#pragma once

// Threshold-based bumping. Layers of bins are overloaded by gamma; each bin
// stores a threshold index and keeps the keys whose fingerprint falls at or
// below that threshold, bumping the rest into the next layer. Variants:
//   plain     - per-bin index chosen against the (cap+1)-smallest fingerprint
//   packed    - plain plus a 1-bit function over the keys between adjacent
//               thresholds, filling every bin to capacity
//   consensus - indices share one bit stream; fingerprints are seeded by the
//               64 bits preceding a bin's slice, so a backtracking search can
//               steer later bins with earlier choices
// Leftover keys and empty slots are repaired with a slot list addressed by a
// 1-perfect fallback.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kphf/elias_fano.hpp"
#include "kphf/fallback.hpp"
#include "kphf/gamma.hpp"
#include "kphf/hash.hpp"
#include "kphf/io.hpp"
#include "kphf/packed_vec.hpp"
#include "kphf/phf.hpp"
#include "kphf/retrieval.hpp"
#include "kphf/thresholds.hpp"

namespace kphf {

enum class ThresholdVariant : uint64_t { Plain = 0, Packed = 1, Consensus = 2 };

struct ThresholdConfig {
    uint64_t k = 8;
    Gamma gamma{2, 1};
    uint32_t t = 16;
    ThresholdVariant variant = ThresholdVariant::Plain;
    uint64_t seed = 0x74687265;
    uint32_t max_layers = 64;
};

class ThresholdPhf final : public MkPhf {
public:
    ThresholdPhf() = default;

    static ThresholdPhf build(const std::vector<Key128>& keys, const ThresholdConfig& cfg) {
        validate(cfg);
        check_build_keys(keys, cfg.k);
        ThresholdPhf f;
        f.cfg_ = cfg;
        f.cfg_.gamma = reduce(cfg.gamma);
        f.n_ = keys.size();
        f.m_ = ceil_div(f.n_, cfg.k);
        f.T_ = optimal_thresholds(cfg.k, f.cfg_.gamma.value(), cfg.t);

        std::vector<uint64_t> kept(f.m_, 0);
        std::vector<Key128> cur = keys, bumped;
        std::unordered_map<uint64_t, uint64_t> limit_memo;
        uint64_t base = 0;
        while (base < f.m_ && !cur.empty() && f.layers_.size() < cfg.max_layers) {
            uint64_t bins = std::min(
                ceil_div(cur.size() * f.cfg_.gamma.den, cfg.k * f.cfg_.gamma.num), f.m_ - base);
            bumped.clear();
            if (cfg.variant == ThresholdVariant::Consensus)
                f.build_layer_consensus(cur, bins, base, kept, bumped, limit_memo);
            else
                f.build_layer_indexed(cur, bins, base, kept, bumped);
            base += bins;
            cur.swap(bumped);
        }

        std::vector<uint64_t> slot_list;
        for (uint64_t b = 0; b < f.m_; b++)
            for (uint64_t d = kept[b]; d < f.cap_of(b); d++) slot_list.push_back(b);
        if (slot_list.size() != cur.size())
            throw std::runtime_error("threshold: repair bookkeeping mismatch");
        f.slots_ = EliasFanoSeq(slot_list);
        f.fallback_ = Fallback1Phf(std::move(cur), mix64(cfg.seed ^ 0x8f1bbcdcbfa53e0bULL));
        return f;
    }

    uint64_t operator()(Key128 key) const override {
        uint64_t base = 0;
        for (size_t l = 0; l < layers_.size(); l++) {
            const Layer& lay = layers_[l];
            uint64_t bins = lay.idx.size();
            uint64_t lseed = layer_seed(l);
            uint64_t b = to_range(key, HashUse::Bin, lseed, bins);
            uint64_t choice = lay.idx.get(b);
            double fp;
            if (cfg_.variant == ThresholdVariant::Consensus) {
                uint64_t win = window_bits(lay.idx.words(), b * lay.idx.width());
                fp = to_unit(key, HashUse::Fingerprint, fp_seed(lseed, win));
            } else {
                fp = to_unit(key, HashUse::Fingerprint, lseed);
            }
            if (fp <= T_[choice]) return base + b;
            if (cfg_.variant == ThresholdVariant::Packed && choice + 1 < cfg_.t &&
                fp <= T_[choice + 1] && lay.window.get(key))
                return base + b;
            base += bins;
        }
        return slots_.access(fallback_(key));
    }

    uint64_t num_keys() const override { return n_; }
    uint64_t num_bins() const override { return m_; }
    uint64_t bin_capacity() const override { return cfg_.k; }
    const char* scheme_name() const override { return "threshold"; }
    std::string describe() const override {
        const char* names[] = {"plain", "packed", "consensus"};
        return std::string("variant=") + names[(int)cfg_.variant] +
               ";gamma=" + gamma_str(cfg_.gamma) + ";t=" + std::to_string(cfg_.t);
    }

    uint64_t layer_count() const { return layers_.size(); }
    uint64_t repair_count() const { return fallback_.size(); }
    const std::vector<double>& thresholds() const { return T_; }

    void save(Writer& w) const override {
        w.u64(kFormatMagic);
        w.u64(kFormatVersion);
        w.u64((uint64_t)SchemeId::Threshold);
        w.u64(cfg_.k);
        w.u64(cfg_.gamma.num);
        w.u64(cfg_.gamma.den);
        w.u64(cfg_.t);
        w.u64((uint64_t)cfg_.variant);
        w.u64(cfg_.seed);
        w.u64(cfg_.max_layers);
        w.u64(n_);
        w.u64(layers_.size());
        for (const Layer& lay : layers_) {
            w.u64(lay.idx.size());
            lay.idx.save_raw(w);
            if (cfg_.variant == ThresholdVariant::Packed) lay.window.save(w);
        }
        slots_.save(w);
        fallback_.save(w);
    }

    // Payload after the common 3-word header.
    static ThresholdPhf load_payload(Reader& r) {
        ThresholdPhf f;
        f.cfg_.k = r.u64();
        f.cfg_.gamma.num = r.u64();
        f.cfg_.gamma.den = r.u64();
        uint64_t t = r.u64();
        uint64_t variant = r.u64();
        f.cfg_.seed = r.u64();
        uint64_t max_layers = r.u64();
        f.n_ = r.u64();
        if (t < 2 || t > (1 << 20) || variant > 2 || max_layers > 64)
            throw std::runtime_error("kphf: corrupt stream (threshold params)");
        f.cfg_.t = (uint32_t)t;
        f.cfg_.variant = (ThresholdVariant)variant;
        f.cfg_.max_layers = (uint32_t)max_layers;
        validate(f.cfg_);
        f.m_ = ceil_div(f.n_, f.cfg_.k);
        f.T_ = optimal_thresholds(f.cfg_.k, f.cfg_.gamma.value(), f.cfg_.t);
        uint64_t nl = r.u64();
        if (nl > 64) throw std::runtime_error("kphf: corrupt stream (threshold layers)");
        uint32_t width = f.idx_width();
        f.layers_.resize(nl);
        for (Layer& lay : f.layers_) {
            uint64_t bins = r.u64();
            if (bins > f.m_) throw std::runtime_error("kphf: corrupt stream (threshold layer)");
            lay.idx = PackedVec::load_raw(r, bins, width);
            if (f.cfg_.variant == ThresholdVariant::Packed) lay.window = RetrievalFn::load(r);
        }
        f.slots_ = EliasFanoSeq::load(r);
        f.fallback_ = Fallback1Phf::load(r, mix64(f.cfg_.seed ^ 0x8f1bbcdcbfa53e0bULL));
        return f;
    }

private:
    struct Layer {
        PackedVec idx;
        RetrievalFn window;  // packed variant only
    };

    static void validate(const ThresholdConfig& cfg) {
        if (cfg.k == 0 || cfg.k >= (1 << 20))
            throw std::invalid_argument("threshold: k out of range");
        if (cfg.gamma.den == 0 || cfg.gamma.num < cfg.gamma.den || cfg.gamma.den > (1 << 20) ||
            cfg.gamma.num > (uint64_t(1) << 40))
            throw std::invalid_argument("threshold: gamma must be a rational >= 1");
        if (cfg.t < 2 || cfg.t > (1 << 20))
            throw std::invalid_argument("threshold: t out of range");
        if (cfg.variant == ThresholdVariant::Consensus && (cfg.t & (cfg.t - 1)) != 0)
            throw std::invalid_argument("threshold: consensus needs a power-of-two t");
        if (cfg.max_layers == 0 || cfg.max_layers > 64)
            throw std::invalid_argument("threshold: max_layers out of range");
    }

    static std::string gamma_str(Gamma g) {
        return g.den == 1 ? std::to_string(g.num)
                          : std::to_string(g.num) + "/" + std::to_string(g.den);
    }

    uint64_t cap_of(uint64_t bin) const {
        return bin + 1 == m_ ? n_ - cfg_.k * (m_ - 1) : cfg_.k;
    }
    uint64_t layer_seed(size_t l) const {
        return mix64(cfg_.seed + (uint64_t)(l + 1) * 0x9e3779b97f4a7c15ULL);
    }
    static uint64_t fp_seed(uint64_t lseed, uint64_t window) {
        return mix64(lseed + window * 0xd1b54a32d192ed03ULL);
    }
    static uint64_t window_bits(const std::vector<uint64_t>& words, uint64_t end) {
        if (end == 0) return 0;
        if (end >= 64) return bits_get(words.data(), end - 64, 64);
        return bits_get(words.data(), 0, (uint32_t)end) << (64 - end);
    }
    uint32_t idx_width() const { return (uint32_t)std::bit_width(uint64_t(cfg_.t - 1)); }

    // Largest threshold index with T[i] < cutoff; T[0] = 0 < cutoff always.
    uint32_t pick_index(double cutoff) const {
        size_t i = std::lower_bound(T_.begin(), T_.end(), cutoff) - T_.begin();
        return (uint32_t)(i - 1);
    }

    void build_layer_indexed(const std::vector<Key128>& cur, uint64_t bins, uint64_t base,
                             std::vector<uint64_t>& kept, std::vector<Key128>& bumped) {
        bool packed = cfg_.variant == ThresholdVariant::Packed;
        uint64_t lseed = layer_seed(layers_.size());
        std::vector<std::vector<std::pair<double, Key128>>> bin_keys(bins);
        for (const Key128& key : cur)
            bin_keys[to_range(key, HashUse::Bin, lseed, bins)].push_back(
                {to_unit(key, HashUse::Fingerprint, lseed), key});

        Layer lay;
        lay.idx = PackedVec(bins, idx_width());
        std::vector<std::pair<Key128, uint64_t>> entries;
        std::vector<double> scratch;
        std::vector<std::pair<double, Key128>> window;
        for (uint64_t b = 0; b < bins; b++) {
            auto& v = bin_keys[b];
            uint64_t cap = cap_of(base + b);
            if (v.size() <= cap) {
                lay.idx.set(b, cfg_.t - 1);
                kept[base + b] += v.size();
                continue;
            }
            scratch.resize(v.size());
            for (size_t i = 0; i < v.size(); i++) scratch[i] = v[i].first;
            std::nth_element(scratch.begin(), scratch.begin() + cap, scratch.end());
            uint32_t choice = pick_index(scratch[cap]);
            lay.idx.set(b, choice);
            double lo = T_[choice];
            if (!packed) {
                for (auto& [fp, key] : v) {
                    if (fp <= lo) kept[base + b]++; else bumped.push_back(key);
                }
                continue;
            }
            double hi = T_[choice + 1];
            uint64_t c0 = 0;
            window.clear();
            for (auto& [fp, key] : v) {
                if (fp <= lo) c0++;
                else if (fp <= hi) window.push_back({fp, key});
                else bumped.push_back(key);
            }
            kept[base + b] += c0;
            uint64_t need = cap - c0;
            if (need > window.size())
                throw std::runtime_error("threshold: window underflow");
            std::sort(window.begin(), window.end(), [](const auto& a, const auto& b2) {
                if (a.first != b2.first) return a.first < b2.first;
                return a.second < b2.second;
            });
            for (size_t i = 0; i < window.size(); i++) {
                bool keep = i < need;
                entries.push_back({window[i].second, keep ? 1u : 0u});
                if (keep) kept[base + b]++; else bumped.push_back(window[i].second);
            }
        }
        if (packed) lay.window = RetrievalFn(entries, 1, mix64(lseed ^ 0xa54ff53a5f1d36f1ULL));
        layers_.push_back(std::move(lay));
    }

    uint64_t deficit_limit(uint64_t s, uint64_t cap,
                           std::unordered_map<uint64_t, uint64_t>& memo) const {
        if (s <= cap) return cap - s;
        uint64_t key = (s << 21) | cap;
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        // Smallest allowed deficit L such that, summed over all thresholds,
        // the expected number of feasible choices clears a supercritical
        // margin; at expectation one the backtracking walk is critical and
        // collapses onto the fixed early windows. Overfull bins always get
        // slack 1. The walk picks the largest feasible index, so realized
        // deficits stay near zero regardless of the allowance.
        double sum = 0.0;
        uint64_t L = 0;
        for (;; L++) {
            uint64_t j = cap - L;
            for (double p : T_) sum += std::exp(log_binom_pmf(s, j, p));
            if (sum >= 4.0 || j == 0) break;
        }
        if (L < 1) L = 1;
        memo[key] = L;
        return L;
    }

    void build_layer_consensus(const std::vector<Key128>& cur, uint64_t bins, uint64_t base,
                               std::vector<uint64_t>& kept, std::vector<Key128>& bumped,
                               std::unordered_map<uint64_t, uint64_t>& limit_memo) {
        uint64_t lseed = layer_seed(layers_.size());
        uint32_t w = idx_width();
        std::vector<std::vector<Key128>> bin_keys(bins);
        for (const Key128& key : cur)
            bin_keys[to_range(key, HashUse::Bin, lseed, bins)].push_back(key);

        Layer lay;
        lay.idx = PackedVec(bins, w);
        std::vector<int64_t> choice(bins, -1);
        std::vector<std::vector<double>> fps(bins);
        uint64_t budget = 10000 * bins, steps = 0;
        int64_t b = 0;
        while (b < (int64_t)bins) {
            auto& ks = bin_keys[b];
            if (choice[b] < 0) {
                uint64_t fseed = fp_seed(lseed, window_bits(lay.idx.words(), uint64_t(b) * w));
                fps[b].resize(ks.size());
                for (size_t i = 0; i < ks.size(); i++)
                    fps[b][i] = to_unit(ks[i], HashUse::Fingerprint, fseed);
                std::sort(fps[b].begin(), fps[b].end());
                choice[b] = cfg_.t;
            }
            uint64_t cap = cap_of(base + uint64_t(b));
            uint64_t lim = deficit_limit(ks.size(), cap, limit_memo);
            int64_t pick = -1;
            for (int64_t i = choice[b] - 1; i >= 0; i--) {
                if (++steps > budget)
                    throw std::runtime_error("threshold: consensus search budget exceeded");
                uint64_t keep =
                    std::upper_bound(fps[b].begin(), fps[b].end(), T_[i]) - fps[b].begin();
                if (keep <= cap && cap - keep <= lim) {
                    pick = i;
                    break;
                }
            }
            if (pick < 0) {
                choice[b] = -1;
                if (--b < 0) throw std::runtime_error("threshold: consensus unsatisfiable");
            } else {
                choice[b] = pick;
                lay.idx.set(b, (uint64_t)pick);
                b++;
            }
        }
        for (uint64_t q = 0; q < bins; q++) {
            uint64_t fseed = fp_seed(lseed, window_bits(lay.idx.words(), q * w));
            double lim = T_[choice[q]];
            for (const Key128& key : bin_keys[q]) {
                if (to_unit(key, HashUse::Fingerprint, fseed) <= lim) kept[base + q]++;
                else bumped.push_back(key);
            }
        }
        layers_.push_back(std::move(lay));
    }

    ThresholdConfig cfg_;
    uint64_t n_ = 0, m_ = 0;
    std::vector<double> T_;
    std::vector<Layer> layers_;
    EliasFanoSeq slots_;
    Fallback1Phf fallback_;
};

}  // namespace kphf
