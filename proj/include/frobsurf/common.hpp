#pragma once
// Shared error types, hashing and deterministic RNG helpers.

#include <cstdint>
#include <stdexcept>
#include <string>

namespace frobsurf {

// Input that cannot be interpreted (bad TOML, bad polynomial syntax,
// inconsistent model data).  CLI exit code 2.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// A computation exceeded a configured budget (term cap, enumeration budget,
// embedding table size).  CLI exit code 3.
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

// Structurally valid input that the toolkit refuses to certify (not an
// anticanonical model, tree fails the weak del Pezzo test, ...).
// CLI exit code 4.
struct RefusalError : std::runtime_error {
    explicit RefusalError(const std::string& msg) : std::runtime_error(msg) {}
};

// SplitMix64: tiny deterministic generator used for all sampling so that
// reports are reproducible across platforms (no std::uniform_* involved).
struct SplitMix64 {
    uint64_t state;
    explicit SplitMix64(uint64_t seed) : state(seed) {}
    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // Uniform value in [0, n) by rejection; n >= 1.
    uint64_t below(uint64_t n) {
        if (n <= 1) return 0;
        uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t v = next();
        while (v >= limit) v = next();
        return v % n;
    }
};

// Derive an independent stream for (seed, index) pairs, e.g. one per trial.
inline uint64_t substream(uint64_t seed, uint64_t index) {
    SplitMix64 g(seed ^ (0x632be59bd9b4e019ULL + index * 0x9e3779b97f4a7c15ULL));
    g.next();
    return g.next();
}

// FNV-1a over a string; used for model hashes in reports.
inline uint64_t fnv1a(const std::string& s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(uint64_t v);

}  // namespace frobsurf
