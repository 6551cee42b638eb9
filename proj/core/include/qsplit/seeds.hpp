#pragma once

#include <cstdint>
#include <string_view>

namespace qsplit {

// Deterministic seed derivation. Every component draws its sub-seeds from a
// single master seed through these mixers, so repeated runs replay exactly.

// splitmix64 finalizer; good avalanche, cheap, stable across platforms.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return mix64(master ^ mix64(stream));
}

// FNV-1a over a component label, so CLI subcommands can derive disjoint
// seed streams from one --seed value.
constexpr std::uint64_t label_code(std::string_view label) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : label) {
        h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view label) {
    return derive_seed(master, label_code(label));
}

// Minimal xorshift-family generator with platform-independent output.
// std::uniform_real_distribution is implementation defined, so the few
// places that need uniform doubles or index draws use this instead.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1), 53-bit resolution
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [0, bound); bound > 0
    std::uint64_t next_index(std::uint64_t bound) { return next_u64() % bound; }

  private:
    std::uint64_t state_;
};

}  // namespace qsplit
