#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

#include "picrec/rng.hpp"

namespace picrec {

// Square binary picture, rows packed into 64-bit words LSB-first
// (column c lives in word c/64 at bit c%64). Row 0 is the top row.
// Padding bits past column n-1 are kept zero so whole-word equality works.
class Picture {
public:
    Picture() = default;

    explicit Picture(int n)
        : n_(n), wpr_((n + 63) / 64), words_(std::size_t(n) * std::size_t((n + 63) / 64), 0) {
        assert(n >= 1);
    }

    int n() const { return n_; }
    int words_per_row() const { return wpr_; }

    bool get(int r, int c) const {
        assert(in_bounds(r, c));
        return (words_[std::size_t(r) * wpr_ + (c >> 6)] >> (c & 63)) & 1u;
    }

    void set(int r, int c, bool v) {
        assert(in_bounds(r, c));
        std::uint64_t& w = words_[std::size_t(r) * wpr_ + (c >> 6)];
        const std::uint64_t bit = std::uint64_t(1) << (c & 63);
        w = v ? (w | bit) : (w & ~bit);
    }

    const std::uint64_t* row_words(int r) const {
        assert(r >= 0 && r < n_);
        return words_.data() + std::size_t(r) * wpr_;
    }

    // Callers writing through this must keep padding bits past column n-1 zero.
    std::uint64_t* row_words_mut(int r) {
        assert(r >= 0 && r < n_);
        return words_.data() + std::size_t(r) * wpr_;
    }

    friend bool operator==(const Picture&, const Picture&) = default;

private:
    bool in_bounds(int r, int c) const { return r >= 0 && r < n_ && c >= 0 && c < n_; }

    int n_ = 0;
    int wpr_ = 0;
    std::vector<std::uint64_t> words_;
};

// Each cell i.i.d. uniform over {0,1}; bit-identical for a fixed seed (see kRngId).
inline Picture random_picture(int n, std::uint64_t seed) {
    assert(n >= 1);
    Picture p(n);
    Rng rng(seed);
    const int tail_bits = n & 63;
    const std::uint64_t tail_mask = tail_bits ? ((std::uint64_t(1) << tail_bits) - 1) : ~std::uint64_t(0);
    for (int r = 0; r < n; ++r) {
        std::uint64_t* row = p.row_words_mut(r);
        for (int w = 0; w < p.words_per_row(); ++w) {
            std::uint64_t v = rng.next();
            if (w == p.words_per_row() - 1) v &= tail_mask;
            row[w] = v;
        }
    }
    return p;
}

} // namespace picrec
