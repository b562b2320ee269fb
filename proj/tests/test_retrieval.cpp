#include <cstdint>
#include <random>
#include <sstream>
#include <utility>
#include <vector>

#include "doctest.h"
#include "kphf/hash.hpp"
#include "kphf/io.hpp"
#include "kphf/retrieval.hpp"

using namespace kphf;

namespace {

std::vector<std::pair<Key128, uint64_t>> random_entries(uint64_t n, uint32_t bits, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::pair<Key128, uint64_t>> entries(n);
    uint64_t mask = (uint64_t(1) << bits) - 1;
    for (uint64_t i = 0; i < n; i++) {
        // distinct by construction: hash of the index
        entries[i] = {hash_key(&i, sizeof i, 777), rng() & mask};
    }
    return entries;
}

}  // namespace

TEST_SUITE("retrieval") {

TEST_CASE("exhaustive recovery across value widths") {
    for (uint32_t bits : {1u, 3u, 8u}) {
        auto entries = random_entries(20000, bits, bits);
        RetrievalFn f(entries, bits, 42);
        CHECK(f.size() == entries.size());
        CHECK(f.value_bits() == bits);
        for (auto& [key, value] : entries) CHECK(f.get(key) == value);
    }
}

TEST_CASE("space stays near r bits per key") {
    const uint64_t n = 20000;
    for (uint32_t bits : {1u, 4u}) {
        auto entries = random_entries(n, bits, 100 + bits);
        RetrievalFn f(entries, bits, 1);
        uint64_t stored = serialized_bits(f);
        CHECK(stored <= uint64_t(1.2 * bits * n) + 4096);  // 1.05 slots + chunk overheads
    }
}

TEST_CASE("save/load answers identically") {
    auto entries = random_entries(5000, 5, 5);
    RetrievalFn f(entries, 5, 9);
    std::ostringstream os;
    Writer w(os);
    f.save(w);
    std::istringstream is(os.str());
    Reader r(is);
    RetrievalFn back = RetrievalFn::load(r);
    for (auto& [key, value] : entries) CHECK(back.get(key) == value);
    // non-members are arbitrary but must match the original function
    for (uint64_t i = 0; i < 2000; i++) {
        uint64_t j = ~i;
        Key128 k = hash_key(&j, sizeof j, 778);
        CHECK(back.get(k) == f.get(k));
    }
}

TEST_CASE("rejects bad inputs") {
    auto entries = random_entries(100, 3, 3);
    CHECK_THROWS_AS(RetrievalFn(entries, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(RetrievalFn(entries, 9, 0), std::invalid_argument);

    auto dup = entries;
    dup.push_back(dup.front());
    CHECK_THROWS_AS(RetrievalFn(dup, 3, 0), std::invalid_argument);

    auto big = entries;
    big[0].second = 8;  // needs 4 bits
    CHECK_THROWS_AS(RetrievalFn(big, 3, 0), std::invalid_argument);
}

TEST_CASE("tiny and empty inputs") {
    RetrievalFn empty(std::vector<std::pair<Key128, uint64_t>>{}, 2, 0);
    CHECK(empty.size() == 0);

    auto one = random_entries(1, 4, 1);
    RetrievalFn f(one, 4, 0);
    CHECK(f.get(one[0].first) == one[0].second);
}

TEST_CASE("deterministic given seed") {
    auto entries = random_entries(3000, 2, 2);
    RetrievalFn a(entries, 2, 5), b(entries, 2, 5);
    CHECK(serialized_bits(a) == serialized_bits(b));
    std::ostringstream oa, ob;
    Writer wa(oa), wb(ob);
    a.save(wa);
    b.save(wb);
    CHECK(oa.str() == ob.str());
}

}  // TEST_SUITE
