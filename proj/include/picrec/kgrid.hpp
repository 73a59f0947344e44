#pragma once

#include <array>
#include <cassert>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "picrec/rng.hpp"

namespace picrec {

// k x k binary window, k <= 16, packed MSB-first into 256 bits: cell (r,c)
// is bit r*k+c of the row-major encoding string and lands in word (r*k+c)/64
// at bit 63-((r*k+c)%64). MSB-first packing makes word-array comparison agree
// with lexicographic comparison of the encoding string, so sorted decks come
// out in canonical text order for free.
class KGrid {
public:
    static constexpr int kMaxSide = 16;

    KGrid() = default;

    explicit KGrid(int k) : k_(k) {
        if (k < 1 || k > kMaxSide)
            throw std::range_error("window side " + std::to_string(k) + " outside supported range 1.." +
                                   std::to_string(kMaxSide));
    }

    int k() const { return k_; }

    bool get(int r, int c) const {
        assert(r >= 0 && r < k_ && c >= 0 && c < k_);
        const int b = r * k_ + c;
        return (w_[b >> 6] >> (63 - (b & 63))) & 1u;
    }

    void set(int r, int c, bool v) {
        assert(r >= 0 && r < k_ && c >= 0 && c < k_);
        const int b = r * k_ + c;
        const std::uint64_t bit = std::uint64_t(1) << (63 - (b & 63));
        w_[b >> 6] = v ? (w_[b >> 6] | bit) : (w_[b >> 6] & ~bit);
    }

    // Row-major k^2-character 01 string, top-left cell first.
    std::string encode() const {
        std::string s(std::size_t(k_) * k_, '0');
        for (std::size_t b = 0; b < s.size(); ++b)
            if ((w_[b >> 6] >> (63 - (b & 63))) & 1u) s[b] = '1';
        return s;
    }

    static KGrid decode(int k, std::string_view bits) {
        KGrid g(k);
        if (bits.size() != std::size_t(k) * k)
            throw std::invalid_argument("expected " + std::to_string(k * k) + " cells, got " +
                                        std::to_string(bits.size()));
        for (std::size_t b = 0; b < bits.size(); ++b) {
            if (bits[b] == '1')
                g.w_[b >> 6] |= std::uint64_t(1) << (63 - (b & 63));
            else if (bits[b] != '0')
                throw std::invalid_argument("illegal cell character");
        }
        return g;
    }

    const std::array<std::uint64_t, 4>& words() const { return w_; }
    std::array<std::uint64_t, 4>& words_mut() { return w_; }

    friend bool operator==(const KGrid&, const KGrid&) = default;
    friend auto operator<=>(const KGrid&, const KGrid&) = default;

private:
    int k_ = 0;
    std::array<std::uint64_t, 4> w_{};
};

struct KGridHash {
    std::size_t operator()(const KGrid& g) const {
        std::uint64_t h = 0x243f6a8885a308d3ull ^ std::uint64_t(g.k());
        for (std::uint64_t w : g.words()) h = mix64(h ^ w);
        return std::size_t(h);
    }
};

} // namespace picrec
