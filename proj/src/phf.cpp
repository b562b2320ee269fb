#include "kphf/phf.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "kphf/bucket_phf.hpp"
#include "kphf/pachash_phf.hpp"
#include "kphf/recsplit_phf.hpp"
#include "kphf/threshold_phf.hpp"

namespace kphf {

void check_build_keys(const std::vector<Key128>& keys, uint64_t k) {
    if (keys.empty()) throw std::invalid_argument("build: need at least one key");
    if (k == 0) throw std::invalid_argument("build: k must be positive");
    std::vector<Key128> sorted = keys;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("build: duplicate keys");
}

namespace {

uint64_t parse_u64(const std::string& s) {
    if (s.empty() || s.size() > 18 ||
        !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
        throw std::invalid_argument("gamma: malformed number '" + s + "'");
    return std::stoull(s);
}

}  // namespace

Gamma parse_gamma(const std::string& s) {
    uint64_t num, den = 1;
    if (auto slash = s.find('/'); slash != std::string::npos) {
        num = parse_u64(s.substr(0, slash));
        den = parse_u64(s.substr(slash + 1));
    } else if (auto dot = s.find('.'); dot != std::string::npos) {
        std::string frac = s.substr(dot + 1);
        if (frac.empty() || frac.size() > 9)
            throw std::invalid_argument("gamma: malformed decimal '" + s + "'");
        for (size_t i = 0; i < frac.size(); i++) den *= 10;
        num = parse_u64(s.substr(0, dot)) * den + parse_u64(frac);
    } else {
        num = parse_u64(s);
    }
    if (num == 0 || den == 0) throw std::invalid_argument("gamma: must be positive");
    Gamma g = reduce({num, den});
    if (g.num < g.den) throw std::invalid_argument("gamma: must be >= 1");
    return g;
}

Gamma default_gamma(uint64_t k) { return k < 100 ? Gamma{2, 1} : Gamma{6, 5}; }

uint32_t default_t(uint64_t k) {
    double e = std::round(std::log2(3.0 * (double)k));
    e = std::clamp(e, 2.0, 9.0);
    return uint32_t(1) << (uint32_t)e;
}

double default_lambda(uint64_t k) {
    if (k < 8) return 4.0;
    if (k < 64) return 12.0;
    if (k < 512) return 100.0;
    return 250.0;
}

uint64_t default_bucket_size(uint64_t k) { return k >= 500 ? 6000 : 2000; }

std::unique_ptr<MkPhf> build_phf(const std::vector<Key128>& keys, const BuildOptions& opt) {
    if (opt.scheme == "threshold") {
        ThresholdConfig c;
        c.k = opt.k;
        c.gamma = opt.gamma.empty() ? default_gamma(opt.k) : parse_gamma(opt.gamma);
        c.t = opt.t ? opt.t : default_t(opt.k);
        if (opt.variant == "plain") c.variant = ThresholdVariant::Plain;
        else if (opt.variant == "packed") c.variant = ThresholdVariant::Packed;
        else if (opt.variant == "consensus") c.variant = ThresholdVariant::Consensus;
        else throw std::invalid_argument("build: unknown variant '" + opt.variant + "'");
        c.seed = opt.seed;
        c.max_layers = opt.max_layers;
        return std::make_unique<ThresholdPhf>(ThresholdPhf::build(keys, c));
    }
    if (opt.scheme == "bucket") {
        BucketConfig c;
        c.k = opt.k;
        c.lambda = opt.lambda > 0.0 ? opt.lambda : default_lambda(opt.k);
        if (opt.encoding == "rice") c.encoding = BucketEncoding::Rice;
        else if (opt.encoding == "compact") c.encoding = BucketEncoding::Compact;
        else throw std::invalid_argument("build: unknown encoding '" + opt.encoding + "'");
        c.seed = opt.seed;
        return std::make_unique<BucketPhf>(BucketPhf::build(keys, c));
    }
    if (opt.scheme == "recsplit") {
        RecSplitConfig c;
        c.k = opt.k;
        c.ell = opt.ell;
        c.bucket = opt.bucket_size ? opt.bucket_size : default_bucket_size(opt.k);
        c.seed = opt.seed;
        return std::make_unique<RecSplitPhf>(RecSplitPhf::build(keys, c));
    }
    if (opt.scheme == "pachash") {
        PaCHashConfig c;
        c.k = opt.k;
        c.a = opt.a ? opt.a : 8;
        c.seed = opt.seed;
        return std::make_unique<PaCHashPhf>(PaCHashPhf::build(keys, c));
    }
    throw std::invalid_argument("build: unknown scheme '" + opt.scheme + "'");
}

std::unique_ptr<MkPhf> load_phf(Reader& r) {
    if (r.u64() != kFormatMagic) throw std::runtime_error("kphf: bad magic");
    if (r.u64() != kFormatVersion) throw std::runtime_error("kphf: unsupported format version");
    switch ((SchemeId)r.u64()) {
        case SchemeId::Threshold:
            return std::make_unique<ThresholdPhf>(ThresholdPhf::load_payload(r));
        case SchemeId::Bucket:
            return std::make_unique<BucketPhf>(BucketPhf::load_payload(r));
        case SchemeId::RecSplit:
            return std::make_unique<RecSplitPhf>(RecSplitPhf::load_payload(r));
        case SchemeId::PaCHash:
            return std::make_unique<PaCHashPhf>(PaCHashPhf::load_payload(r));
    }
    throw std::runtime_error("kphf: unknown scheme id");
}

}  // namespace kphf
