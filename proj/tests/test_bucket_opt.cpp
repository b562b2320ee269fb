#include <cmath>
#include <cstdint>

#include "doctest.h"
#include "kphf/curves.hpp"

using namespace kphf;

TEST_SUITE("bucket_opt") {

TEST_CASE("k=1 closed forms") {
    // p_1(x) = 1 - x and beta_1(x) = x + (1-x) ln(1-x).
    CurveTable c = bucket_curves(1);
    for (int i = 0; i <= 1000; i++) {
        double x = i / 1000.0;
        CHECK(std::fabs(pk_at(c, x) - (1.0 - x)) <= 1e-6);
        double beta = x >= 1.0 ? 1.0 : x + (1.0 - x) * std::log1p(-x);
        CHECK(std::fabs(beta_at(c, x) - beta) <= 1e-4);
    }
}

TEST_CASE("curve table shape") {
    for (uint64_t k : {1ULL, 2ULL, 8ULL, 64ULL}) {
        CurveTable c = bucket_curves(k);
        REQUIRE(c.xs.size() == c.pk.size());
        REQUIRE(c.xs.size() == c.beta.size());
        CHECK(c.pk.front() == 1.0);
        CHECK(c.beta.front() == 0.0);
        CHECK(c.beta.back() == 1.0);
        for (size_t i = 1; i < c.xs.size(); i++) {
            CHECK(c.pk[i] <= c.pk[i - 1] + 1e-12);   // fill only closes bins
            CHECK(c.beta[i] >= c.beta[i - 1] - 1e-12);
        }
        CHECK(c.pk.back() >= 0.0);
        CHECK(c.pk.back() <= 1e-3);  // at x=1 every bin is full
    }
}

TEST_CASE("interpolation hits the grid and clamps") {
    CurveTable c = bucket_curves(4);
    for (size_t i = 0; i < c.xs.size(); i += 97) {
        CHECK(pk_at(c, c.xs[i]) == doctest::Approx(c.pk[i]).epsilon(1e-12));
        CHECK(beta_at(c, c.xs[i]) == doctest::Approx(c.beta[i]).epsilon(1e-12));
    }
    CHECK(beta_at(c, 0.0) == 0.0);
    CHECK(beta_at(c, 1.0) == 1.0);
    CHECK(pk_at(c, 1.0) == c.pk.back());
}

TEST_CASE("implicit replay of the defining identity stays tight") {
    for (uint64_t k : {1ULL, 2ULL, 4ULL, 16ULL, 64ULL})
        CHECK(pk_stable_check(k, 0.9) <= 1e-3);
}

TEST_CASE("explicit Euler agrees for small k") {
    for (uint64_t k : {1ULL, 2ULL, 3ULL, 4ULL})
        CHECK(pk_euler_check(k, 0.9, 100000) <= 1e-3);
}

TEST_CASE("explicit Euler degrades with k near full load") {
    // At a fixed step budget close to x = 1 the explicit error grows with k
    // and breaches the tolerance at k = 64; the implicit replay stays tight.
    double e4 = pk_euler_check(4, 0.99, 10000);
    double e64 = pk_euler_check(64, 0.99, 10000);
    CHECK(e4 <= 1e-3);
    CHECK(e64 > 1e-3);
    CHECK(e64 > 2.0 * e4);
    CHECK(pk_stable_check(64, 0.99) <= 1e-3);
}

}  // TEST_SUITE
