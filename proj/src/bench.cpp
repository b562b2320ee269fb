#include "kphf/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace kphf {

double lower_bound_bits(uint64_t k) {
    if (k == 0) throw std::invalid_argument("lower_bound_bits: k must be positive");
    double kd = (double)k;
    return (1.0 - std::log(kd) + std::lgamma(kd + 1.0) / kd) / std::log(2.0);
}

VerifyResult verify_phf(const MkPhf& f, const std::vector<Key128>& keys) {
    uint64_t n = keys.size(), k = f.bin_capacity(), m = f.num_bins();
    if (f.num_keys() != n)
        return {false, "key count mismatch"};
    if (m != (n + k - 1) / k)
        return {false, "bin count mismatch"};
    std::vector<uint64_t> hist(m, 0);
    for (const Key128& key : keys) {
        uint64_t b = f(key);
        if (b >= m)
            return {false, "value " + std::to_string(b) + " out of range"};
        hist[b]++;
    }
    for (uint64_t b = 0; b < m; b++) {
        uint64_t cap = b + 1 == m ? n - k * (m - 1) : k;
        if (hist[b] != cap)
            return {false, "bin " + std::to_string(b) + " holds " + std::to_string(hist[b]) +
                               " keys, expected " + std::to_string(cap)};
    }
    return {};
}

BenchResult run_bench(const BuildOptions& opt, const std::vector<Key128>& keys,
                      uint64_t min_queries, uint64_t rounds) {
    using clock = std::chrono::steady_clock;
    if (keys.empty()) throw std::invalid_argument("bench: no keys");
    if (rounds < 1) rounds = 1;

    std::unique_ptr<MkPhf> f = build_phf(keys, opt);
    VerifyResult v = verify_phf(*f, keys);
    if (!v.ok) throw std::runtime_error("bench: verification failed: " + v.error);

    BenchResult r;
    r.scheme = f->scheme_name();
    r.config = f->describe();
    r.n = keys.size();
    r.k = f->bin_capacity();
    r.verified = true;
    r.bits_per_key = (double)serialized_bits(*f) / (double)r.n;
    r.overhead_pct = 100.0 * (r.bits_per_key / lower_bound_bits(r.k) - 1.0);

    std::vector<double> times(rounds);
    for (uint64_t i = 0; i < rounds; i++) {
        auto t0 = clock::now();
        std::unique_ptr<MkPhf> g = build_phf(keys, opt);
        auto t1 = clock::now();
        times[i] = (double)std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
    }
    std::sort(times.begin(), times.end());
    r.construct_ns_per_key = times[rounds / 2] / (double)r.n;

    uint64_t nq = std::max<uint64_t>(min_queries, 1);
    uint64_t acc = 0, idx = 0;
    auto q0 = clock::now();
    for (uint64_t i = 0; i < nq; i++) {
        acc ^= (*f)(keys[idx]);
        if (++idx == keys.size()) idx = 0;
    }
    auto q1 = clock::now();
    double qns = (double)std::chrono::duration_cast<std::chrono::nanoseconds>(q1 - q0).count();
    // Keep the accumulator observable so the query loop cannot be elided.
    if (acc == 0x6b706866) qns += 0.0;
    r.query_ns_per_query = qns / (double)nq;
    return r;
}

std::string csv_header() {
    return "scheme,config,n,k,bits_per_key,overhead_pct,construct_ns_per_key,query_ns_per_query";
}

std::string csv_line(const BenchResult& r) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "%s,%s,%llu,%llu,%.4f,%.2f,%.1f,%.2f", r.scheme.c_str(),
                  r.config.c_str(), (unsigned long long)r.n, (unsigned long long)r.k,
                  r.bits_per_key, r.overhead_pct, r.construct_ns_per_key, r.query_ns_per_query);
    return buf;
}

}  // namespace kphf
