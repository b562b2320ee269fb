#pragma once

// Shared helpers for the scheme test suites.

#include <sstream>
#include <string>
#include <vector>

#include "kphf/bench.hpp"
#include "kphf/hash.hpp"
#include "kphf/io.hpp"
#include "kphf/phf.hpp"

namespace kphf::test {

inline std::vector<Key128> make_keys(uint64_t n, uint64_t seed) {
    std::vector<Key128> keys(n);
    for (uint64_t i = 0; i < n; i++) {
        uint64_t buf[2] = {i, seed};
        keys[i] = hash_key(buf, sizeof buf, 0);
    }
    return keys;
}

template <typename Phf>
std::string save_string(const Phf& f) {
    std::ostringstream os;
    Writer w(os);
    f.save(w);
    return os.str();
}

// save -> load -> save must reproduce the exact bytes, and the loaded
// structure must answer every query identically.
template <typename Phf>
void check_roundtrip(const Phf& f, const std::vector<Key128>& keys) {
    std::string bytes = save_string(f);
    std::istringstream is(bytes);
    Reader r(is);
    auto back = load_phf(r);
    REQUIRE(back != nullptr);
    CHECK(std::string(back->scheme_name()) == f.scheme_name());
    CHECK(back->num_keys() == f.num_keys());
    CHECK(back->num_bins() == f.num_bins());
    CHECK(back->bin_capacity() == f.bin_capacity());
    CHECK(save_string(*back) == bytes);
    for (const Key128& k : keys) CHECK((*back)(k) == f(k));
}

inline void check_verifies(const MkPhf& f, const std::vector<Key128>& keys) {
    VerifyResult v = verify_phf(f, keys);
    INFO(v.error);
    CHECK(v.ok);
}

}  // namespace kphf::test
