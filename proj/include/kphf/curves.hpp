#pragma once

// Bucket-assignment curves. p_k(x) is the probability that a bin is still
// open (has seen fewer than k keys) when a fraction x of all slots is
// filled; beta_k is the normalized integral of ln p_k and redistributes
// uniform hash values so that every bucket sees the same expected number
// of placement trials.

#include <cstdint>
#include <vector>

namespace kphf {

struct CurveTable {
    uint64_t k = 0;
    std::vector<double> xs;    // uniform grid on [0, 1]
    std::vector<double> pk;    // p_k(xs)
    std::vector<double> beta;  // beta_k(xs), beta[0] = 0, beta.back() = 1
};

CurveTable bucket_curves(uint64_t k, uint32_t grid = 4096);

double pk_at(const CurveTable& c, double x);
double beta_at(const CurveTable& c, double x);

// Forward-Euler replay of the integro-differential identity
// p(x) = Q(k, k * int_0^x du/p(u)); returns the sup-norm against the table
// on [0, x_max] (inf if the iteration blows up). Unstable for large k.
double pk_euler_check(uint64_t k, double x_max, uint64_t steps);

// Same identity evaluated implicitly on the table's own grid; stays small
// for all k.
double pk_stable_check(uint64_t k, double x_max, uint32_t grid = 4096);

}  // namespace kphf
