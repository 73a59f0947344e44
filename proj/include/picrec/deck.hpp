#pragma once

#include <cstdint>
#include <vector>

#include "picrec/kgrid.hpp"
#include "picrec/picture.hpp"

namespace picrec {

struct DeckEntry {
    KGrid grid;
    std::uint32_t count = 0;

    friend bool operator==(const DeckEntry&, const DeckEntry&) = default;
};

// Multiset of the (n-k+1)^2 k-windows of a picture: entries sorted ascending
// by encoding, every count >= 1.
struct Deck {
    int k = 0;
    std::vector<DeckEntry> entries;

    std::uint64_t total() const {
        std::uint64_t t = 0;
        for (const DeckEntry& e : entries) t += e.count;
        return t;
    }

    friend bool operator==(const Deck&, const Deck&) = default;
};

// Window with top-left cell (r, c); 0 <= r, c <= n-k.
KGrid subgrid(const Picture& p, int r, int c, int k);

Deck deck_of(const Picture& p, int k);

// Side length of the source picture: total = (n-k+1)^2.
int infer_n(const Deck& d);

} // namespace picrec
