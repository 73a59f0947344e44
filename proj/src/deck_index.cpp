#include "picrec/deck_index.hpp"

#include <algorithm>
#include <stdexcept>

namespace picrec {

namespace {

PackedBits pack_block(const KGrid& g, int r0, int c0, int rows, int cols) {
    PackedBits out;
    int b = 0;
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j, ++b) {
            if (g.get(r0 + i, c0 + j)) out.w[b >> 6] |= 1ull << (63 - (b & 63));
        }
    }
    return out;
}

} // namespace

PackedBits side_block(const KGrid& g, Side s) {
    const int k = g.k();
    switch (s) {
        case Side::left: return pack_block(g, 0, 0, k, k - 1);
        case Side::right: return pack_block(g, 0, 1, k, k - 1);
        case Side::top: return pack_block(g, 0, 0, k - 1, k);
        case Side::bottom: return pack_block(g, 1, 0, k - 1, k);
    }
    throw std::logic_error("bad side");
}

DeckIndex::DeckIndex(const Deck& d, std::uint64_t seed) : k_(d.k) {
    if (d.entries.empty()) throw std::invalid_argument("cannot index an empty deck");

    values_.reserve(d.entries.size());
    mult_.reserve(d.entries.size());
    for (const DeckEntry& e : d.entries) {
        if (e.grid.k() != k_) throw std::invalid_argument("deck entry has mismatched window size");
        if (!values_.empty() && !(values_.back() < e.grid))
            throw std::invalid_argument("deck entries must be strictly ascending");
        values_.push_back(e.grid);
        mult_.push_back(e.count);
    }
    consumed_.assign(values_.size(), 0);
    reserved_.assign(values_.size(), 0);
    seen_count_.assign(values_.size(), 0);
    seen_epoch_.assign(values_.size(), 0);

    slot_values_.reserve(d.total());
    for (std::size_t v = 0; v < values_.size(); ++v)
        slot_values_.insert(slot_values_.end(), mult_[v], int(v));
    remaining_ = slot_values_.size();

    Rng rng(seed);
    for (std::size_t i = slot_values_.size(); i > 1; --i)
        std::swap(slot_values_[i - 1], slot_values_[rng.below(i)]);

    for (int s = 0; s < 4; ++s) {
        auto& map = by_side_[s];
        for (int v : slot_values_) map[side_block(values_[v], Side(s))].push_back(v);
    }
}

std::vector<DeckIndex::Candidate> DeckIndex::candidates(Side side, const PackedBits& bits) {
    std::vector<Candidate> out;
    auto it = by_side_[int(side)].find(bits);
    if (it == by_side_[int(side)].end()) return out;

    // A value's copies all carry the same key, so its j-th key-list entry is
    // its j-th slot overall. The entry numbered consumed+reserved is the
    // earliest copy still free; yield each value there, in list order.
    ++epoch_;
    for (int v : it->second) {
        ++work_;
        if (seen_epoch_[v] != epoch_) {
            seen_epoch_[v] = epoch_;
            seen_count_[v] = 0;
        }
        const std::uint32_t occ = seen_count_[v]++;
        const std::uint32_t used = consumed_[v] + reserved_[v];
        if (occ == used && occ < mult_[v])
            out.push_back({v, mult_[v] - used});
    }
    return out;
}

int DeckIndex::find_value(const KGrid& g) const {
    ++work_;
    auto it = std::lower_bound(values_.begin(), values_.end(), g);
    if (it == values_.end() || !(*it == g)) return -1;
    return int(it - values_.begin());
}

bool DeckIndex::remove(int value) {
    ++work_;
    if (avail(value) == 0) return false;
    ++consumed_[value];
    undo_.push_back(value);
    --remaining_;
    return true;
}

bool DeckIndex::remove(const KGrid& g) {
    const int v = find_value(g);
    if (v < 0) return false;
    return remove(v);
}

bool DeckIndex::reserve(int value) {
    ++work_;
    if (avail(value) == 0) return false;
    ++reserved_[value];
    ++reserved_total_;
    return true;
}

void DeckIndex::release(int value) {
    ++work_;
    if (reserved_[value] == 0) throw std::logic_error("release without matching reserve");
    --reserved_[value];
    --reserved_total_;
}

DeckIndex::Token DeckIndex::checkpoint() const {
    if (reserved_total_ != 0) throw std::logic_error("checkpoint with outstanding reservations");
    return undo_.size();
}

void DeckIndex::rollback(Token t) {
    if (t > undo_.size()) throw std::logic_error("rollback to a stale checkpoint");
    if (reserved_total_ != 0) throw std::logic_error("rollback with outstanding reservations");
    while (undo_.size() > t) {
        --consumed_[undo_.back()];
        ++remaining_;
        undo_.pop_back();
    }
}

} // namespace picrec
