#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace picrec {

// Generator identity. Part of the reproducibility contract: files and CSV
// produced with one id are only comparable to runs with the same id.
inline constexpr std::string_view kRngId = "xoshiro256++/v1";

// splitmix64 finalizer (public-domain constants by Sebastiano Vigna).
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

constexpr std::uint64_t splitmix64(std::uint64_t& state) {
    return mix64(state += 0x9e3779b97f4a7c15ull);
}

// xoshiro256++. Hand-rolled because std:: engines and distributions are not
// bit-reproducible across standard libraries, and determinism here is part
// of the external contract.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : s_) word = splitmix64(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = std::rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = std::rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0, bound) without modulo bias.
    std::uint64_t below(std::uint64_t bound) {
        assert(bound > 0);
        const std::uint64_t reject = (0 - bound) % bound; // 2^64 mod bound
        for (;;) {
            const std::uint64_t r = next();
            if (r >= reject) return r % bound;
        }
    }

private:
    std::uint64_t s_[4];
};

// Stable sub-seed derivation: absorbing a path of integers keeps seeds for
// distinct purposes (trial index, picture vs. algorithm, ...) independent of
// scheduling order.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = master;
    for (std::uint64_t v : path) {
        h += 0x9e3779b97f4a7c15ull;
        h = mix64(h ^ mix64(v + 0x632be59bd9b4e019ull));
    }
    return h;
}

} // namespace picrec
