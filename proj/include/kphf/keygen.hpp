#pragma once

// Deterministic test corpus: distinct alphanumeric strings of length 10-50.

#include <cstdint>
#include <string>
#include <vector>

namespace kphf {

std::vector<std::string> gen_keys(uint64_t n, uint64_t seed);

}  // namespace kphf
