#pragma once

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "picrec/deck.hpp"
#include "picrec/rng.hpp"

namespace picrec {

enum class Side { left, right, top, bottom };

// Overlap block of a window: the k x (k-1) slice (left/right sides) or the
// (k-1) x k slice (top/bottom), packed row-major MSB-first like encodings.
// For k=1 every block is empty and all keys collide on purpose: with no
// overlap constraint, every element fits everywhere.
struct PackedBits {
    std::array<std::uint64_t, 4> w{};

    friend bool operator==(const PackedBits&, const PackedBits&) = default;
};

struct PackedBitsHash {
    std::size_t operator()(const PackedBits& b) const {
        std::uint64_t h = 0x452821e638d01377ull;
        for (std::uint64_t v : b.w) h = mix64(h ^ v);
        return std::size_t(h);
    }
};

PackedBits side_block(const KGrid& g, Side s);

// A consumable multiset of deck elements in a seeded uniformly random slot
// order, with per-side overlap indexes answering "which remaining elements
// fit here?". Candidate order is the order of each value's earliest
// remaining copy, which is exactly "scan the shuffled deck, skip used
// copies". Reservations hold copies during lookahead assembly and are
// transient; removals are permanent but logged so a failed line can be
// rolled back to a checkpoint.
class DeckIndex {
public:
    DeckIndex(const Deck& d, std::uint64_t seed);

    int k() const { return k_; }
    std::uint64_t total() const { return slot_values_.size(); }
    std::uint64_t remaining() const { return remaining_; }

    // Deterministic cost counter: one unit per slot probe, removal,
    // reservation, or release. The experiment's modeled time comes from this.
    std::uint64_t work() const { return work_; }

    struct Candidate {
        int value;
        std::uint32_t avail;
    };

    std::vector<Candidate> candidates(Side side, const PackedBits& bits);

    const KGrid& grid(int value) const { return values_[value]; }
    int value_count() const { return int(values_.size()); }
    int find_value(const KGrid& g) const; // -1 if the value never was in the deck
    std::uint32_t avail(int value) const {
        return mult_[value] - consumed_[value] - reserved_[value];
    }

    bool remove(int value);
    bool remove(const KGrid& g);
    bool reserve(int value);
    void release(int value);

    using Token = std::size_t;
    Token checkpoint() const;
    void rollback(Token t);

    const std::vector<int>& slot_values() const { return slot_values_; }

private:
    int k_ = 0;
    std::vector<KGrid> values_;             // distinct, ascending
    std::vector<std::uint32_t> mult_;
    std::vector<std::uint32_t> consumed_;
    std::vector<std::uint32_t> reserved_;
    std::vector<int> slot_values_;          // value id per shuffled slot
    std::array<std::unordered_map<PackedBits, std::vector<int>, PackedBitsHash>, 4> by_side_;
    std::vector<int> undo_;                 // removed value ids, in order
    std::uint64_t remaining_ = 0;
    std::uint64_t reserved_total_ = 0;
    mutable std::uint64_t work_ = 0;

    // scratch for occurrence counting inside candidates()
    mutable std::vector<std::uint32_t> seen_count_;
    mutable std::vector<std::uint64_t> seen_epoch_;
    mutable std::uint64_t epoch_ = 0;
};

} // namespace picrec
