#pragma once

// Bump-threshold numerics for overloaded bins. Bins receive ~gamma*k keys;
// a per-bin threshold index decides which keys stay. The optimal threshold
// vector satisfies a backward recurrence whose integrals reduce to gamma
// CDF differences; an asymptotic closed form uses quantiles of a related
// gamma law.

#include <cstdint>
#include <vector>

namespace kphf {

// Optimal thresholds T[0..t-1] with T[0] = 0 and T[t-1] = 1.
std::vector<double> optimal_thresholds(uint64_t k, double gamma, uint32_t t);

// Closed-form asymptotic thresholds: quantiles of Gamma((k+1)/2, gamma*k/2)
// conditioned on [0, 1].
std::vector<double> asymptotic_thresholds(uint64_t k, double gamma, uint32_t t);

// Expected empty slots per bin (in [0, k]) under the gamma model.
double expected_empty_slots(uint64_t k, double gamma, const std::vector<double>& T);

struct McEmpty {
    double mean;  // empty slots per bin
    double se;    // standard error of the mean
};

// Monte-Carlo empty slots per bin: bin sizes ~ Poisson(gamma*k), uniform
// fingerprints, threshold rule "largest T[i] below the (k+1)-smallest
// fingerprint". T need not start at 0; a bin with no threshold below its
// cutoff bumps everything.
McEmpty simulate_empty_slots(uint64_t k, double gamma, const std::vector<double>& T,
                             uint64_t bins, uint64_t seed);

}  // namespace kphf
