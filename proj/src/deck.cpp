#include "picrec/deck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace picrec {

namespace {

// k consecutive bits of row r starting at column c, LSB-first (bit j = column c+j).
std::uint64_t row_bits(const Picture& p, int r, int c, int k) {
    const std::uint64_t* words = p.row_words(r);
    const int word = c >> 6;
    const int off = c & 63;
    std::uint64_t v = words[word] >> off;
    if (off + k > 64) v |= words[word + 1] << (64 - off);
    return v & ((std::uint64_t(1) << k) - 1);
}

} // namespace

KGrid subgrid(const Picture& p, int r, int c, int k) {
    const int n = p.n();
    if (k < 1 || k > n || r < 0 || c < 0 || r > n - k || c > n - k)
        throw std::invalid_argument("window (" + std::to_string(r) + "," + std::to_string(c) +
                                    ") side " + std::to_string(k) + " out of range for n=" +
                                    std::to_string(n));
    KGrid g(k);
    auto& words = g.words_mut();
    for (int i = 0; i < k; ++i) {
        const std::uint64_t bits = row_bits(p, r + i, c, k);
        const int b0 = i * k;
        for (int j = 0; j < k; ++j)
            if ((bits >> j) & 1u) {
                const int b = b0 + j;
                words[b >> 6] |= std::uint64_t(1) << (63 - (b & 63));
            }
    }
    return g;
}

Deck deck_of(const Picture& p, int k) {
    const int n = p.n();
    if (k < 1 || k > n) throw std::invalid_argument("deck needs 1 <= k <= n");
    const int m = n - k + 1;
    std::vector<KGrid> all;
    all.reserve(std::size_t(m) * m);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) all.push_back(subgrid(p, r, c, k));
    std::sort(all.begin(), all.end());

    Deck d;
    d.k = k;
    for (const KGrid& g : all) {
        if (!d.entries.empty() && d.entries.back().grid == g)
            ++d.entries.back().count;
        else
            d.entries.push_back({g, 1});
    }
    return d;
}

int infer_n(const Deck& d) {
    const std::uint64_t t = d.total();
    if (t == 0) throw std::invalid_argument("cannot infer size from an empty deck");
    if (t > (std::uint64_t(1) << 62)) throw std::invalid_argument("deck total out of range");
    std::uint64_t root = std::uint64_t(std::sqrt(double(t)));
    while (root * root > t) --root;
    while ((root + 1) * (root + 1) <= t) ++root;
    if (root * root != t)
        throw std::invalid_argument("deck total " + std::to_string(t) + " is not a perfect square");
    return int(root) + d.k - 1;
}

} // namespace picrec
