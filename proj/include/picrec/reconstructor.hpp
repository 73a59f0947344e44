#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "picrec/deck.hpp"
#include "picrec/deck_index.hpp"
#include "picrec/picture.hpp"

namespace picrec {

enum class Direction { right, left, up, down };
enum class CornerKind { first, last };
enum class ExtensionKind { seed, naive, internal, corner };

struct CellRect {
    int r0 = 0, c0 = 0, rows = 0, cols = 0;
};

// A successful corner lookahead, reoriented into the canonical frame: growth
// to the right, the committed window in the top-left k x k, previously
// committed droplet cells in the leading k-1 columns.
struct CornerAssembly {
    Direction dir{};
    CornerKind corner{};
    CellRect rect;                   // buffer region the block occupies
    std::vector<std::int8_t> canon;  // (2k-1)^2 cells, canonical row-major
};

// Maps canonical corner-frame coordinates to block-local coordinates for
// each direction/corner pair (a rotation or reflection of the block).
std::pair<int, int> corner_canon_to_local(Direction dir, CornerKind corner, int k,
                                          int cr, int cc);

// Placement hooks. Cells are reported in droplet-buffer coordinates and only
// when newly assigned; corner placements carry the full lookahead block.
// Leftover deletions commit no cells and are not reported.
struct Observer {
    virtual ~Observer() = default;
    virtual void on_place_begin(ExtensionKind, const CornerAssembly*) {}
    virtual void on_place_cell(int r, int c, bool v) { (void)r; (void)c; (void)v; }
    virtual void on_place_end() {}
};

// The growing rectangle of committed cells, stored in a fixed buffer so cell
// coordinates stay stable for the whole reconstruction. Lines are committed
// through an open-line protocol: begin_line, set_cell for each cell of the
// new row/column (plus consistency re-writes of known cells), then either
// finish_line (the rectangle grows by one) or abandon_line (new cells are
// erased). Lookahead reads see pending cells immediately.
class Droplet {
public:
    Droplet(int k, int n_hint);

    void place_seed(const KGrid& g, Observer* obs = nullptr);

    int k() const { return k_; }
    int width() const { return right_ - left_ + 1; }
    int height() const { return bottom_ - top_ + 1; }
    int top() const { return top_; }
    int bottom() const { return bottom_; }
    int left() const { return left_; }
    int right() const { return right_; }

    int cell(int r, int c) const;          // -1 unknown, else 0/1
    KGrid window(int r0, int c0) const;    // k x k, throws if any cell unknown

    void begin_line(Direction d);
    bool set_cell(int r, int c, bool v);   // true iff the cell was unknown
    void finish_line();
    void abandon_line();
    bool line_open() const { return line_open_; }

    Picture to_picture() const;

private:
    std::int8_t& at(int r, int c);

    int k_;
    int size_;
    std::vector<std::int8_t> cells_;
    int top_ = 0, bottom_ = 0, left_ = 0, right_ = 0;
    bool seeded_ = false;
    bool line_open_ = false;
    Direction line_dir_ = Direction::right;
    std::vector<std::pair<int, int>> pending_;
};

// True iff t continues the droplet edge window one line further in the given
// direction: t's overlap block toward the droplet equals the edge window's
// block toward the growth.
bool fits(Direction dir, const KGrid& edge_window, const KGrid& t);

struct Stats {
    std::uint64_t naive = 0;
    std::uint64_t internals = 0;
    std::uint64_t corners = 0;
    std::uint64_t leftovers = 0;
    std::uint64_t boundary_steps = 0;
    std::uint64_t work = 0;
    std::uint64_t deck_remaining = 0;

    friend bool operator==(const Stats&, const Stats&) = default;
};

// The three extension searches. Each commits cells into the caller's open
// line and permanently removes exactly the placed element on success;
// lookahead reservations are always released. The returned grid is the
// placed element.
std::optional<KGrid> naive_extend(Droplet& d, DeckIndex& ix, Direction dir, int pos,
                                  Observer* obs = nullptr, Stats* st = nullptr);
std::optional<KGrid> internal_extend(Droplet& d, DeckIndex& ix, Direction dir, int pos,
                                     Observer* obs = nullptr, Stats* st = nullptr);
std::optional<KGrid> corner_extend(Droplet& d, DeckIndex& ix, Direction dir,
                                   CornerKind corner, Observer* obs = nullptr,
                                   Stats* st = nullptr);

enum class LineFail { none, corner, internal, leftover };

// One full line in the given direction: both corner lookaheads, the internal
// positions in ascending order, then the unplaced leftover windows deleted
// from the deck. Any failure rolls the whole line back.
LineFail single_column_extend(Droplet& d, DeckIndex& ix, Direction dir,
                              Observer* obs = nullptr, Stats* st = nullptr);
LineFail single_row_extend(Droplet& d, DeckIndex& ix, Direction dir,
                           Observer* obs = nullptr, Stats* st = nullptr);

// After a corner failure: up to k-1 further lines with naive corners instead
// of corner lookaheads. The failing attempt is rolled back. Returns the
// number of lines added.
int boundary_lines(Droplet& d, DeckIndex& ix, Direction dir,
                   Observer* obs = nullptr, Stats* st = nullptr);

enum class AbortStage { initial, column, row, leftover };

struct ReconstructionResult {
    bool success = false;
    std::optional<Picture> picture;   // set iff success
    AbortStage stage = AbortStage::initial;
    std::string reason;
    Stats stats;
};

// Reconstructs an n x n picture from its k-deck: seed from a random order,
// grow a 3k-row band, then extend column-wise right and left and row-wise up
// and down, aborting if the final extents disagree with n. Deterministic per
// (deck, seed). Requires n >= 3k or n == k.
ReconstructionResult reconstruct(const Deck& d, std::uint64_t seed,
                                 Observer* obs = nullptr);

} // namespace picrec
