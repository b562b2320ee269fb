#include "kphf/keygen.hpp"

#include <random>
#include <stdexcept>
#include <unordered_set>

namespace kphf {

std::vector<std::string> gen_keys(uint64_t n, uint64_t seed) {
    static const char alphabet[] =
        "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> len_dist(10, 50);
    std::uniform_int_distribution<int> chr_dist(0, 61);
    std::unordered_set<std::string> seen;
    seen.reserve(n * 2);
    std::vector<std::string> keys;
    keys.reserve(n);
    uint64_t attempts = 0;
    while (keys.size() < n) {
        if (++attempts > 4 * n + 1000) throw std::runtime_error("gen_keys: too many collisions");
        std::string s(len_dist(rng), '\0');
        for (char& c : s) c = alphabet[chr_dist(rng)];
        if (seen.insert(s).second) keys.push_back(std::move(s));
    }
    return keys;
}

}  // namespace kphf
