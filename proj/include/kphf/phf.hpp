#pragma once

// Common interface for minimal k-perfect hash functions: n keys map onto
// m = ceil(n/k) bins, every bin receiving exactly k keys except the last,
// which receives n mod k (or k when k divides n).

#include <cstdint>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "kphf/hash.hpp"
#include "kphf/io.hpp"

namespace kphf {

// Keys enter the library as 128-bit hashes of the raw bytes under a fixed
// seed; all per-structure randomness comes from derived seeds.
constexpr uint64_t kStringHashSeed = 0;

inline Key128 key_from_bytes(std::string_view s) { return hash_key(s, kStringHashSeed); }

inline uint64_t ceil_div(uint64_t a, uint64_t b) { return b == 0 ? 0 : (a + b - 1) / b; }

// Overload factor as an exact rational so per-layer bin counts use integer
// arithmetic only.
struct Gamma {
    uint64_t num = 2, den = 1;
    double value() const { return double(num) / double(den); }
};

inline Gamma reduce(Gamma g) {
    uint64_t d = std::gcd(g.num, g.den);
    if (d == 0) throw std::invalid_argument("gamma: zero");
    return {g.num / d, g.den / d};
}

class MkPhf {
public:
    virtual ~MkPhf() = default;
    virtual uint64_t operator()(Key128 key) const = 0;
    virtual uint64_t num_keys() const = 0;
    virtual uint64_t num_bins() const = 0;
    virtual uint64_t bin_capacity() const = 0;  // k
    virtual const char* scheme_name() const = 0;
    virtual std::string describe() const = 0;  // "key=value;key=value" config
    virtual void save(Writer& w) const = 0;    // full header + payload
};

// Reads the header written by any scheme's save() and dispatches.
std::unique_ptr<MkPhf> load_phf(Reader& r);

// Build-by-name options shared by the CLI and the python bindings.
// Zero-valued fields fall back to the per-k defaults below.
struct BuildOptions {
    std::string scheme = "threshold";
    uint64_t k = 8;
    std::string gamma;  // rational, e.g. "2", "1.2", "6/5"; empty = default
    uint32_t t = 0;
    std::string variant = "plain";  // plain | packed | consensus
    double lambda = 0.0;
    std::string encoding = "rice";  // rice | compact
    uint32_t ell = 2;
    uint64_t bucket_size = 0;
    uint64_t a = 0;
    uint64_t seed = 0x6b706866;
    uint32_t max_layers = 64;
};

Gamma parse_gamma(const std::string& s);
Gamma default_gamma(uint64_t k);
uint32_t default_t(uint64_t k);
double default_lambda(uint64_t k);
uint64_t default_bucket_size(uint64_t k);

std::unique_ptr<MkPhf> build_phf(const std::vector<Key128>& keys, const BuildOptions& opt);

// Shared build-time validation: n >= 1 and no duplicate keys.
void check_build_keys(const std::vector<Key128>& keys, uint64_t k);

}  // namespace kphf
