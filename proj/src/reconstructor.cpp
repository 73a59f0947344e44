#include "picrec/reconstructor.hpp"

#include <algorithm>
#include <stdexcept>

#include "picrec/errors.hpp"

namespace picrec {

namespace {

bool horizontal(Direction d) { return d == Direction::right || d == Direction::left; }

// Side of the edge window facing the growth (the block a fitting element
// must reproduce) and the side of the element facing the droplet (the key
// its candidates are indexed under).
Side feed_side(Direction d) {
    switch (d) {
        case Direction::right: return Side::right;
        case Direction::left: return Side::left;
        case Direction::down: return Side::bottom;
        case Direction::up: return Side::top;
    }
    throw std::logic_error("bad direction");
}

Side query_side(Direction d) {
    switch (d) {
        case Direction::right: return Side::left;
        case Direction::left: return Side::right;
        case Direction::down: return Side::top;
        case Direction::up: return Side::bottom;
    }
    throw std::logic_error("bad direction");
}

// Top-left buffer coordinates of the k-window at offset `pos` along the
// growth edge, `depth` lines into the growth. Depth 0 is the window whose
// far line is the new one; depth -1 is the edge window inside the droplet.
std::pair<int, int> window_origin(const Droplet& d, Direction dir, int pos, int depth) {
    const int k = d.k();
    switch (dir) {
        case Direction::right: return {d.top() + pos, d.right() - k + 2 + depth};
        case Direction::left: return {d.top() + pos, d.left() - 1 - depth};
        case Direction::down: return {d.bottom() - k + 2 + depth, d.left() + pos};
        case Direction::up: return {d.top() - 1 - depth, d.left() + pos};
    }
    throw std::logic_error("bad direction");
}

int edge_length(const Droplet& d, Direction dir) {
    return horizontal(dir) ? d.height() : d.width();
}

// Collaborative DFS over the windows of one lookahead block. Cells live in a
// local patch seeded from the droplet; each window is keyed by its first
// fully assigned side, filtered against every assigned cell, reserved, and
// its free cells propagated before recursing. On success all reservations
// are still held and every block cell is assigned.
class BlockAssembly {
public:
    BlockAssembly(const Droplet& d, DeckIndex& ix, CellRect rect)
        : ix_(ix), k_(d.k()), rect_(rect), cells_(std::size_t(rect.rows) * rect.cols, -1) {
        for (int r = 0; r < rect.rows; ++r)
            for (int c = 0; c < rect.cols; ++c)
                cells_[idx(r, c)] = std::int8_t(d.cell(rect.r0 + r, rect.c0 + c));
    }

    bool search(std::vector<std::pair<int, int>> windows) {
        windows_ = std::move(windows);
        chosen_.assign(windows_.size(), -1);
        // A window whose cells are all committed before the search begins lies
        // entirely inside already-placed territory (the trailing corner window,
        // or the unplaced windows next to it whose presence the line's deletion
        // step verifies separately). It constrains nothing and must not claim
        // another deck copy. The window to be placed is exempt: it is consumed
        // here, so a copy has to exist.
        skip_.assign(windows_.size(), false);
        for (std::size_t i = 1; i < windows_.size(); ++i) {
            const auto [wr, wc] = windows_[i];
            bool full = true;
            for (int r = 0; r < k_ && full; ++r)
                for (int c = 0; c < k_ && full; ++c)
                    full = cells_[idx(wr + r, wc + c)] >= 0;
            skip_[i] = full;
        }
        return place(0);
    }

    void release_all() {
        for (int v : chosen_)
            if (v >= 0) ix_.release(v);
    }

    int chosen_front() const { return chosen_.front(); }
    std::int8_t cell(int r, int c) const { return cells_[idx(r, c)]; }

private:
    std::size_t idx(int r, int c) const { return std::size_t(r) * rect_.cols + c; }

    bool side_assigned(int wr, int wc, Side s) const {
        int r0 = wr, c0 = wc, rows = k_, cols = k_;
        switch (s) {
            case Side::left: cols = k_ - 1; break;
            case Side::right: c0 += 1; cols = k_ - 1; break;
            case Side::top: rows = k_ - 1; break;
            case Side::bottom: r0 += 1; rows = k_ - 1; break;
        }
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c)
                if (cells_[idx(r0 + r, c0 + c)] < 0) return false;
        return true;
    }

    PackedBits side_key(int wr, int wc, Side s) const {
        int r0 = wr, c0 = wc, rows = k_, cols = k_;
        switch (s) {
            case Side::left: cols = k_ - 1; break;
            case Side::right: c0 += 1; cols = k_ - 1; break;
            case Side::top: rows = k_ - 1; break;
            case Side::bottom: r0 += 1; rows = k_ - 1; break;
        }
        PackedBits out;
        int b = 0;
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c, ++b)
                if (cells_[idx(r0 + r, c0 + c)] > 0) out.w[b >> 6] |= 1ull << (63 - (b & 63));
        return out;
    }

    bool place(std::size_t i) {
        if (i == windows_.size()) return true;
        if (skip_[i]) return place(i + 1);
        const auto [wr, wc] = windows_[i];

        Side side = Side::left;
        bool anchored = false;
        for (Side s : {Side::left, Side::right, Side::top, Side::bottom}) {
            if (side_assigned(wr, wc, s)) {
                side = s;
                anchored = true;
                break;
            }
        }
        if (!anchored) throw std::logic_error("lookahead window has no anchored side");

        std::array<std::uint64_t, 4> mask{}, want{};
        for (int r = 0; r < k_; ++r) {
            for (int c = 0; c < k_; ++c) {
                const std::int8_t v = cells_[idx(wr + r, wc + c)];
                if (v < 0) continue;
                const int b = r * k_ + c;
                mask[b >> 6] |= 1ull << (63 - (b & 63));
                if (v > 0) want[b >> 6] |= 1ull << (63 - (b & 63));
            }
        }

        for (const auto& cand : ix_.candidates(side, side_key(wr, wc, side))) {
            const KGrid& g = ix_.grid(cand.value);
            bool match = true;
            for (int w = 0; w < 4 && match; ++w)
                match = (g.words()[w] & mask[w]) == want[w];
            if (!match) continue;
            if (!ix_.reserve(cand.value)) continue;

            newly_.clear();
            for (int r = 0; r < k_; ++r) {
                for (int c = 0; c < k_; ++c) {
                    const std::size_t at = idx(wr + r, wc + c);
                    if (cells_[at] < 0) {
                        cells_[at] = std::int8_t(g.get(r, c));
                        newly_.push_back(at);
                    }
                }
            }
            chosen_[i] = cand.value;
            const std::vector<std::size_t> mine = newly_;

            if (place(i + 1)) return true;

            chosen_[i] = -1;
            for (std::size_t at : mine) cells_[at] = -1;
            ix_.release(cand.value);
        }
        return false;
    }

    DeckIndex& ix_;
    int k_;
    CellRect rect_;
    std::vector<std::int8_t> cells_;
    std::vector<std::pair<int, int>> windows_;
    std::vector<int> chosen_;
    std::vector<bool> skip_;
    std::vector<std::size_t> newly_;
};

// Commits the k x k window at (r0, c0) into the droplet's open line,
// reporting newly assigned cells to the observer.
void commit_window(Droplet& d, const KGrid& g, int r0, int c0, ExtensionKind kind,
                   const CornerAssembly* assembly, Observer* obs) {
    if (obs) obs->on_place_begin(kind, assembly);
    for (int r = 0; r < d.k(); ++r)
        for (int c = 0; c < d.k(); ++c)
            if (d.set_cell(r0 + r, c0 + c, g.get(r, c)) && obs)
                obs->on_place_cell(r0 + r, c0 + c, g.get(r, c));
    if (obs) obs->on_place_end();
}

CellRect corner_rect(const Droplet& d, Direction dir, CornerKind corner) {
    const int k = d.k();
    const int side = 2 * k - 1;
    switch (dir) {
        case Direction::right:
            return {corner == CornerKind::first ? d.top() : d.bottom() - side + 1,
                    d.right() - k + 2, side, side};
        case Direction::left:
            return {corner == CornerKind::first ? d.top() : d.bottom() - side + 1,
                    d.left() - k, side, side};
        case Direction::up:
            return {d.top() - k,
                    corner == CornerKind::first ? d.left() : d.right() - side + 1, side, side};
        case Direction::down:
            return {d.bottom() - k + 2,
                    corner == CornerKind::first ? d.left() : d.right() - side + 1, side, side};
    }
    throw std::logic_error("bad direction");
}

LineFail extend_line(Droplet& d, DeckIndex& ix, Direction dir, Observer* obs, Stats* st) {
    const int k = d.k();
    const int L = edge_length(d, dir);
    const auto ck = ix.checkpoint();
    d.begin_line(dir);
    const auto fail = [&](LineFail f) {
        d.abandon_line();
        ix.rollback(ck);
        return f;
    };

    if (!corner_extend(d, ix, dir, CornerKind::first, obs, st)) return fail(LineFail::corner);
    if (!corner_extend(d, ix, dir, CornerKind::last, obs, st)) return fail(LineFail::corner);

    const int internal_end = std::min(L - 2 * k + 1, L - k - 1);
    for (int p = 1; p <= internal_end; ++p)
        if (!internal_extend(d, ix, dir, p, obs, st)) return fail(LineFail::internal);

    for (int p = internal_end + 1; p <= L - k - 1; ++p) {
        const auto [r0, c0] = window_origin(d, dir, p, 0);
        if (!ix.remove(d.window(r0, c0))) return fail(LineFail::leftover);
        if (st) ++st->leftovers;
    }

    d.finish_line();
    return LineFail::none;
}

} // namespace

std::pair<int, int> corner_canon_to_local(Direction dir, CornerKind corner, int k,
                                          int cr, int cc) {
    const int m = 2 * k - 2;
    const bool first = corner == CornerKind::first;
    switch (dir) {
        case Direction::right: return first ? std::pair{cr, cc} : std::pair{m - cr, cc};
        case Direction::left:
            return first ? std::pair{cr, m - cc} : std::pair{m - cr, m - cc};
        case Direction::up:
            return first ? std::pair{m - cc, cr} : std::pair{m - cc, m - cr};
        case Direction::down: return first ? std::pair{cc, cr} : std::pair{cc, m - cr};
    }
    throw std::logic_error("bad direction");
}

Droplet::Droplet(int k, int n_hint) : k_(k) {
    if (k < 1 || k > KGrid::kMaxSide) throw std::invalid_argument("window size out of range");
    if (n_hint < k) throw std::invalid_argument("size hint below window size");
    size_ = 2 * (n_hint + 2 * k + 4);
    cells_.assign(std::size_t(size_) * size_, -1);
}

std::int8_t& Droplet::at(int r, int c) {
    if (r < 0 || c < 0 || r >= size_ || c >= size_)
        throw std::logic_error("droplet cell outside buffer");
    return cells_[std::size_t(r) * size_ + c];
}

int Droplet::cell(int r, int c) const {
    if (r < 0 || c < 0 || r >= size_ || c >= size_)
        throw std::logic_error("droplet cell outside buffer");
    return cells_[std::size_t(r) * size_ + c];
}

void Droplet::place_seed(const KGrid& g, Observer* obs) {
    if (seeded_) throw std::logic_error("droplet already seeded");
    top_ = left_ = size_ / 2;
    bottom_ = top_ + k_ - 1;
    right_ = left_ + k_ - 1;
    seeded_ = true;
    if (obs) obs->on_place_begin(ExtensionKind::seed, nullptr);
    for (int r = 0; r < k_; ++r) {
        for (int c = 0; c < k_; ++c) {
            at(top_ + r, left_ + c) = std::int8_t(g.get(r, c));
            if (obs) obs->on_place_cell(top_ + r, left_ + c, g.get(r, c));
        }
    }
    if (obs) obs->on_place_end();
}

KGrid Droplet::window(int r0, int c0) const {
    KGrid g(k_);
    for (int r = 0; r < k_; ++r) {
        for (int c = 0; c < k_; ++c) {
            const int v = cell(r0 + r, c0 + c);
            if (v < 0) throw std::logic_error("window over unknown cells");
            if (v) g.set(r, c, true);
        }
    }
    return g;
}

void Droplet::begin_line(Direction d) {
    if (!seeded_) throw std::logic_error("droplet not seeded");
    if (line_open_) throw std::logic_error("line already open");
    line_open_ = true;
    line_dir_ = d;
    pending_.clear();
}

bool Droplet::set_cell(int r, int c, bool v) {
    const int known = cell(r, c);
    if (known >= 0) {
        if (known != int(v)) throw std::logic_error("conflicting cell assignment");
        return false;
    }
    if (!line_open_) throw std::logic_error("new cell outside an open line");
    bool on_line = false;
    switch (line_dir_) {
        case Direction::right: on_line = c == right_ + 1 && r >= top_ && r <= bottom_; break;
        case Direction::left: on_line = c == left_ - 1 && r >= top_ && r <= bottom_; break;
        case Direction::down: on_line = r == bottom_ + 1 && c >= left_ && c <= right_; break;
        case Direction::up: on_line = r == top_ - 1 && c >= left_ && c <= right_; break;
    }
    if (!on_line) throw std::logic_error("new cell off the open line");
    at(r, c) = std::int8_t(v);
    pending_.emplace_back(r, c);
    return true;
}

void Droplet::finish_line() {
    if (!line_open_) throw std::logic_error("no open line");
    const int expected = horizontal(line_dir_) ? height() : width();
    if (int(pending_.size()) != expected)
        throw std::logic_error("line committed with missing cells");
    switch (line_dir_) {
        case Direction::right: ++right_; break;
        case Direction::left: --left_; break;
        case Direction::down: ++bottom_; break;
        case Direction::up: --top_; break;
    }
    line_open_ = false;
    pending_.clear();
}

void Droplet::abandon_line() {
    if (!line_open_) throw std::logic_error("no open line");
    for (const auto& [r, c] : pending_) at(r, c) = -1;
    line_open_ = false;
    pending_.clear();
}

Picture Droplet::to_picture() const {
    if (width() != height()) throw std::logic_error("droplet is not square");
    Picture p(width());
    for (int r = 0; r < height(); ++r) {
        for (int c = 0; c < width(); ++c) {
            const int v = cell(top_ + r, left_ + c);
            if (v < 0) throw std::logic_error("droplet has unknown cells");
            if (v) p.set(r, c, true);
        }
    }
    return p;
}

bool fits(Direction dir, const KGrid& edge_window, const KGrid& t) {
    if (edge_window.k() != t.k()) throw std::invalid_argument("window sizes differ");
    return side_block(edge_window, feed_side(dir)) == side_block(t, query_side(dir));
}

std::optional<KGrid> naive_extend(Droplet& d, DeckIndex& ix, Direction dir, int pos,
                                  Observer* obs, Stats* st) {
    const auto [er, ec] = window_origin(d, dir, pos, -1);
    const PackedBits key = side_block(d.window(er, ec), feed_side(dir));
    const auto cands = ix.candidates(query_side(dir), key);
    if (cands.empty()) return std::nullopt;

    const KGrid g = ix.grid(cands.front().value);
    if (!ix.remove(cands.front().value)) throw std::logic_error("candidate vanished");
    const auto [r0, c0] = window_origin(d, dir, pos, 0);
    commit_window(d, g, r0, c0, ExtensionKind::naive, nullptr, obs);
    if (st) ++st->naive;
    return g;
}

std::optional<KGrid> internal_extend(Droplet& d, DeckIndex& ix, Direction dir, int pos,
                                     Observer* obs, Stats* st) {
    const int k = d.k();
    const auto [r0, c0] = window_origin(d, dir, pos, 0);
    CellRect rect;
    std::vector<std::pair<int, int>> windows;
    if (horizontal(dir)) {
        rect = {r0, c0, 2 * k - 1, k};
        for (int j = 0; j < k; ++j) windows.emplace_back(j, 0);
    } else {
        rect = {r0, c0, k, 2 * k - 1};
        for (int j = 0; j < k; ++j) windows.emplace_back(0, j);
    }

    BlockAssembly block(d, ix, rect);
    if (!block.search(std::move(windows))) return std::nullopt;
    block.release_all();

    const int placed = block.chosen_front();
    const KGrid g = ix.grid(placed);
    if (!ix.remove(placed)) throw std::logic_error("assembled element vanished");
    commit_window(d, g, r0, c0, ExtensionKind::internal, nullptr, obs);
    if (st) ++st->internals;
    return g;
}

std::optional<KGrid> corner_extend(Droplet& d, DeckIndex& ix, Direction dir,
                                   CornerKind corner, Observer* obs, Stats* st) {
    const int k = d.k();
    const int L = edge_length(d, dir);
    const CellRect rect = corner_rect(d, dir, corner);

    std::vector<std::pair<int, int>> windows;
    windows.reserve(std::size_t(k) * k);
    for (int e = 0; e < k; ++e) {
        const int pos = corner == CornerKind::first ? e : L - k - e;
        for (int dep = 0; dep < k; ++dep) {
            const auto [wr, wc] = window_origin(d, dir, pos, dep);
            windows.emplace_back(wr - rect.r0, wc - rect.c0);
        }
    }

    BlockAssembly block(d, ix, rect);
    if (!block.search(std::move(windows))) return std::nullopt;

    CornerAssembly assembly;
    const CornerAssembly* assembly_ptr = nullptr;
    if (obs) {
        const int side = 2 * k - 1;
        assembly.dir = dir;
        assembly.corner = corner;
        assembly.rect = rect;
        assembly.canon.resize(std::size_t(side) * side);
        for (int cr = 0; cr < side; ++cr) {
            for (int cc = 0; cc < side; ++cc) {
                const auto [lr, lc] = corner_canon_to_local(dir, corner, k, cr, cc);
                assembly.canon[std::size_t(cr) * side + cc] = block.cell(lr, lc);
            }
        }
        assembly_ptr = &assembly;
    }

    block.release_all();
    const int placed = block.chosen_front();
    const KGrid g = ix.grid(placed);
    if (!ix.remove(placed)) throw std::logic_error("assembled element vanished");

    const int pos0 = corner == CornerKind::first ? 0 : L - k;
    const auto [r0, c0] = window_origin(d, dir, pos0, 0);
    commit_window(d, g, r0, c0, ExtensionKind::corner, assembly_ptr, obs);
    if (st) ++st->corners;
    return g;
}

LineFail single_column_extend(Droplet& d, DeckIndex& ix, Direction dir, Observer* obs,
                              Stats* st) {
    if (!horizontal(dir)) throw std::invalid_argument("column growth must be right or left");
    return extend_line(d, ix, dir, obs, st);
}

LineFail single_row_extend(Droplet& d, DeckIndex& ix, Direction dir, Observer* obs,
                           Stats* st) {
    if (horizontal(dir)) throw std::invalid_argument("row growth must be up or down");
    return extend_line(d, ix, dir, obs, st);
}

int boundary_lines(Droplet& d, DeckIndex& ix, Direction dir, Observer* obs, Stats* st) {
    const int k = d.k();
    int added = 0;
    for (int attempt = 0; attempt + 1 < k; ++attempt) {
        const int L = edge_length(d, dir);
        const auto ck = ix.checkpoint();
        d.begin_line(dir);

        bool ok = naive_extend(d, ix, dir, 0, obs, st).has_value() &&
                  naive_extend(d, ix, dir, L - k, obs, st).has_value();

        const int internal_end = std::min(L - 2 * k + 1, L - k - 1);
        for (int p = 1; ok && p <= internal_end; ++p)
            ok = internal_extend(d, ix, dir, p, obs, st).has_value();

        for (int p = internal_end + 1; ok && p <= L - k - 1; ++p) {
            const auto [r0, c0] = window_origin(d, dir, p, 0);
            ok = ix.remove(d.window(r0, c0));
            if (ok && st) ++st->leftovers;
        }

        if (!ok) {
            d.abandon_line();
            ix.rollback(ck);
            break;
        }
        d.finish_line();
        ++added;
        if (st) ++st->boundary_steps;
    }
    return added;
}

ReconstructionResult reconstruct(const Deck& d, std::uint64_t seed, Observer* obs) {
    const int k = d.k;
    const std::uint64_t n64 = infer_n(d);
    const int n = int(n64);

    ReconstructionResult res;

    if (n == k) {
        if (d.entries.size() != 1 || d.entries[0].count != 1)
            throw std::invalid_argument("full-size deck must hold exactly one window");
        const KGrid& g = d.entries[0].grid;
        Picture p(n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                if (g.get(r, c)) p.set(r, c, true);
        res.success = true;
        res.picture = std::move(p);
        return res;
    }
    if (n < 3 * k)
        throw UnsupportedError("reconstruction needs n >= 3k (n=" + std::to_string(n) +
                               ", k=" + std::to_string(k) + ")");

    DeckIndex ix(d, seed);
    Stats& st = res.stats;
    const auto finish_stats = [&] {
        st.work = ix.work();
        st.deck_remaining = ix.remaining();
    };
    const auto abort_with = [&](AbortStage stage, std::string reason) {
        res.success = false;
        res.stage = stage;
        res.reason = std::move(reason);
        finish_stats();
        return res;
    };

    const int initial = ix.slot_values().front();
    const KGrid seed_grid = ix.grid(initial);
    ix.remove(initial);

    Droplet drop(k, n);
    drop.place_seed(seed_grid, obs);

    const auto naive_line = [&](Direction dir) {
        const auto ck = ix.checkpoint();
        drop.begin_line(dir);
        if (naive_extend(drop, ix, dir, 0, obs, &st)) {
            drop.finish_line();
            return true;
        }
        drop.abandon_line();
        ix.rollback(ck);
        return false;
    };

    while (drop.height() < 3 * k && naive_line(Direction::down)) {
    }
    while (drop.height() < 3 * k) {
        if (!naive_line(Direction::up))
            return abort_with(AbortStage::initial,
                              "initial band stalled at height " +
                                  std::to_string(drop.height()));
    }

    // Returns a result when the phase decides the whole run; nullopt when the
    // direction is merely exhausted.
    const auto run_phase = [&](Direction dir) -> std::optional<ReconstructionResult> {
        const bool cols = horizontal(dir);
        const auto extent = [&] { return cols ? drop.width() : drop.height(); };
        const AbortStage over = cols ? AbortStage::column : AbortStage::row;
        const char* what = cols ? "width" : "height";
        for (;;) {
            const LineFail f = extend_line(drop, ix, dir, obs, &st);
            if (f == LineFail::none) {
                if (extent() > n)
                    return abort_with(over, std::string(what) + " grew past " +
                                               std::to_string(n));
                continue;
            }
            if (f == LineFail::leftover)
                return abort_with(AbortStage::leftover, "leftover window missing from deck");
            if (f == LineFail::corner) {
                boundary_lines(drop, ix, dir, obs, &st);
                if (extent() > n)
                    return abort_with(over, std::string(what) + " grew past " +
                                               std::to_string(n));
            }
            return std::nullopt;
        }
    };

    if (auto r = run_phase(Direction::right)) return *r;
    if (auto r = run_phase(Direction::left)) return *r;
    if (drop.width() != n)
        return abort_with(AbortStage::column, "width " + std::to_string(drop.width()) +
                                                  " after column growth, expected " +
                                                  std::to_string(n));

    if (auto r = run_phase(Direction::up)) return *r;
    if (auto r = run_phase(Direction::down)) return *r;
    if (drop.height() != n)
        return abort_with(AbortStage::row, "height " + std::to_string(drop.height()) +
                                               " after row growth, expected " +
                                               std::to_string(n));

    res.success = true;
    res.picture = drop.to_picture();
    finish_stats();
    return res;
}

} // namespace picrec
