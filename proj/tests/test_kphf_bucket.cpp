#include <cstdint>
#include <string>
#include <vector>

#include "doctest.h"
#include "kphf/bucket_phf.hpp"
#include "util.hpp"

using namespace kphf;
using namespace kphf::test;

TEST_SUITE("kphf_bucket") {

TEST_CASE("build verifies for both encodings") {
    auto keys = make_keys(5000, 20);
    for (auto enc : {BucketEncoding::Rice, BucketEncoding::Compact}) {
        BucketConfig c;
        c.k = 10;
        c.lambda = 12.0;
        c.encoding = enc;
        BucketPhf f = BucketPhf::build(keys, c);
        CHECK(f.num_keys() == 5000);
        CHECK(f.num_bins() == 500);
        check_verifies(f, keys);
        check_roundtrip(f, keys);
    }
}

TEST_CASE("ragged last bin") {
    auto keys = make_keys(4999, 21);
    BucketConfig c;
    c.k = 8;
    c.lambda = 8.0;
    BucketPhf f = BucketPhf::build(keys, c);
    CHECK(f.num_bins() == ceil_div(4999, 8));
    check_verifies(f, keys);
}

TEST_CASE("tiny inputs") {
    for (uint64_t n : {1ULL, 2ULL, 7ULL, 8ULL, 9ULL}) {
        auto keys = make_keys(n, 200 + n);
        BucketConfig c;
        c.k = 8;
        c.lambda = 4.0;
        BucketPhf f = BucketPhf::build(keys, c);
        check_verifies(f, keys);
        check_roundtrip(f, keys);
    }
}

TEST_CASE("k = 1 is a classic hash-and-displace MPHF") {
    auto keys = make_keys(2000, 22);
    BucketConfig c;
    c.k = 1;
    c.lambda = 3.0;
    BucketPhf f = BucketPhf::build(keys, c);
    CHECK(f.num_bins() == 2000);
    check_verifies(f, keys);
}

TEST_CASE("deterministic bytes; lambda trades buckets for seeds") {
    auto keys = make_keys(4000, 23);
    BucketConfig c;
    c.k = 10;
    c.lambda = 12.0;
    CHECK(save_string(BucketPhf::build(keys, c)) == save_string(BucketPhf::build(keys, c)));

    BucketConfig wide = c;
    wide.lambda = 24.0;  // half as many buckets, longer seed search
    BucketPhf f = BucketPhf::build(keys, wide);
    check_verifies(f, keys);
}

TEST_CASE("duplicate keys and bad configs are rejected") {
    auto keys = make_keys(100, 24);
    BucketConfig c;
    c.k = 10;
    auto dup = keys;
    dup.push_back(dup.front());
    CHECK_THROWS_AS(BucketPhf::build(dup, c), std::invalid_argument);

    c.k = 0;
    CHECK_THROWS_AS(BucketPhf::build(keys, c), std::invalid_argument);
    c.k = 10;
    c.lambda = 0.5;
    CHECK_THROWS_AS(BucketPhf::build(keys, c), std::invalid_argument);
}

TEST_CASE("describe names the configuration") {
    auto keys = make_keys(300, 25);
    BucketConfig c;
    c.k = 5;
    c.lambda = 6.0;
    c.encoding = BucketEncoding::Compact;
    BucketPhf f = BucketPhf::build(keys, c);
    CHECK(f.describe().find("compact") != std::string::npos);
    CHECK(std::string(f.scheme_name()) == "bucket");
}

}  // TEST_SUITE
