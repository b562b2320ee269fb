#pragma once

// Measurement harness: exact verification, space accounting against the
// entropy lower bound, and wall-clock construction/query rates.

#include <cstdint>
#include <string>
#include <vector>

#include "kphf/phf.hpp"

namespace kphf {

// Space lower bound for a minimal k-perfect hash function, in bits per key.
double lower_bound_bits(uint64_t k);

struct VerifyResult {
    bool ok = true;
    std::string error;
};

// Exhaustive check: every key lands in [0, m) and every bin ends up with
// exactly its capacity (k, or n mod k for the last bin).
VerifyResult verify_phf(const MkPhf& f, const std::vector<Key128>& keys);

struct BenchResult {
    std::string scheme;
    std::string config;
    uint64_t n = 0;
    uint64_t k = 0;
    double bits_per_key = 0.0;
    double overhead_pct = 0.0;
    double construct_ns_per_key = 0.0;
    double query_ns_per_query = 0.0;
    bool verified = false;
};

// Builds once and verifies, then times `rounds` fresh constructions (median)
// and at least `min_queries` member lookups.
BenchResult run_bench(const BuildOptions& opt, const std::vector<Key128>& keys,
                      uint64_t min_queries = 10000000, uint64_t rounds = 3);

std::string csv_header();
std::string csv_line(const BenchResult& r);

}  // namespace kphf
