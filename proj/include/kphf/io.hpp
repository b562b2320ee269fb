#pragma once

// Serialization container: a flat stream of little-endian 64-bit words.
// Rank/select directories are never written; loaders rebuild them.

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace kphf {

constexpr uint64_t kFormatMagic = 0x3146485000504b4dULL;  // "MKP\0PHF1"
constexpr uint64_t kFormatVersion = 1;

enum class SchemeId : uint64_t {
    Threshold = 1,
    Bucket = 2,
    RecSplit = 3,
    PaCHash = 4,
};

struct Writer {
    std::ostream& out;
    uint64_t words_written = 0;

    explicit Writer(std::ostream& o) : out(o) {}

    void u64(uint64_t v) {
        unsigned char b[8];
        for (int i = 0; i < 8; i++) b[i] = (unsigned char)(v >> (8 * i));
        out.write(reinterpret_cast<const char*>(b), 8);
        words_written++;
    }

    void f64(double v) { u64(std::bit_cast<uint64_t>(v)); }

    void words(const std::vector<uint64_t>& w) {
        u64(w.size());
        for (uint64_t x : w) u64(x);
    }

    void bytes(const std::vector<uint8_t>& b) {
        u64(b.size());
        uint64_t acc = 0;
        for (size_t i = 0; i < b.size(); i++) {
            acc |= uint64_t(b[i]) << (8 * (i & 7));
            if ((i & 7) == 7) { u64(acc); acc = 0; }
        }
        if (b.size() & 7) u64(acc);
    }
};

struct Reader {
    std::istream& in;

    explicit Reader(std::istream& i) : in(i) {}

    uint64_t u64() {
        unsigned char b[8];
        in.read(reinterpret_cast<char*>(b), 8);
        if (!in) throw std::runtime_error("kphf: truncated or unreadable stream");
        uint64_t v = 0;
        for (int i = 0; i < 8; i++) v |= uint64_t(b[i]) << (8 * i);
        return v;
    }

    double f64() { return std::bit_cast<double>(u64()); }

    std::vector<uint64_t> words() {
        uint64_t n = u64();
        if (n > (uint64_t(1) << 34)) throw std::runtime_error("kphf: corrupt stream (implausible size)");
        std::vector<uint64_t> w(n);
        for (uint64_t i = 0; i < n; i++) w[i] = u64();
        return w;
    }

    std::vector<uint8_t> bytes() {
        uint64_t n = u64();
        if (n > (uint64_t(1) << 37)) throw std::runtime_error("kphf: corrupt stream (implausible size)");
        std::vector<uint8_t> b(n);
        uint64_t acc = 0;
        for (uint64_t i = 0; i < n; i++) {
            if ((i & 7) == 0) acc = u64();
            b[i] = uint8_t(acc >> (8 * (i & 7)));
        }
        return b;
    }
};

// Exact serialized size in bits of anything with save(Writer&).
template <typename T>
uint64_t serialized_bits(const T& x) {
    std::ostringstream os;
    Writer w(os);
    x.save(w);
    return w.words_written * 64;
}

}  // namespace kphf
