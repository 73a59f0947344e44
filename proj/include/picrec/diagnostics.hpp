#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "picrec/picture.hpp"

namespace picrec {

// Comparison of a reconstruction against its source: a window is bad if any
// of its cells differ, and the cell in its upper-right corner gets marked.
struct MarkedGrid {
    int n = 0;
    std::vector<std::uint8_t> cells;  // row-major, nonzero = marked

    bool marked(int r, int c) const { return cells[std::size_t(r) * n + c] != 0; }

    int count() const {
        int t = 0;
        for (std::uint8_t v : cells) t += v ? 1 : 0;
        return t;
    }
};

MarkedGrid mark_bad_windows(const Picture& truth, const Picture& output, int k);

// "MARKS n=<n>" header, then one row per line, '.' clean and 'X' marked.
std::string render_marks(const MarkedGrid& m);

// Gridline crossing (row, col), 0 <= row, col <= n. Row 0 is the top edge.
using GridVertex = std::pair<int, int>;

struct GridEdge {
    GridVertex a, b;  // a < b lexicographically
    std::array<std::pair<int, int>, 2> cells;
    int cell_count = 0;  // 1 on the picture border, 2 inside
};

// Gridline crossings of an n x n picture and the unit segments between them:
// (n+1)^2 vertices, 2n(n+1) edges, each edge tagged with the cells beside it.
struct GridGraph {
    int n = 0;
    std::vector<GridEdge> edges;

    int vertex_count() const { return (n + 1) * (n + 1); }
};

GridGraph grid_graph(int n);

enum class Step : std::uint8_t { up, down, left, right };

// steps[i] leads from vertices[i] to vertices[i+1].
struct InterfacePath {
    std::vector<GridVertex> vertices;
    std::vector<Step> steps;

    int length() const { return int(steps.size()); }
};

struct InterfaceSet {
    std::vector<InterfacePath> paths;
    std::vector<GridVertex> branch_vertices;  // separating degree 3 or 4
};

// Collects every edge lying between a marked and an unmarked cell and strings
// the edges into maximal simple paths. Walks start at odd-degree vertices in
// lexicographic order and always continue toward the least unvisited
// neighbor, so the split at branch vertices is greedy but deterministic;
// leftover closed loops are walked the same way afterwards. Each path is
// oriented with its lexicographically smaller endpoint first.
InterfaceSet extract_interfaces(const MarkedGrid& m);

struct StepCounts {
    int up = 0, down = 0, left = 0, right = 0;
    int contributing = 0;
};

// Per-direction step totals plus the contributing-step count: a step counts
// if it is a down after a right or down, a right after a right, or a left
// after a down or left.
StepCounts classify_steps(const InterfacePath& p);

// Audit of one corner lookahead block against the source, both given in the
// canonical frame as (2k-1)^2 row-major cells (committed window top-left,
// previously committed droplet cells in the leading k-1 columns).
struct EventCheck {
    bool start_mark_ok = false;  // the committed window itself is bad
    bool no_up_steps = true;
    bool separation_ok = true;   // left/right steps in one column k+ rows apart
    bool length_ok = true;       // contour length at most 6k
    int length = 0;
    std::vector<Step> steps;

    bool passed() const { return start_mark_ok && no_up_steps && separation_ok && length_ok; }
};

// Marks the block's bad windows and traces the marked/unmarked contour from
// the committed window's mark at (0, k-1): first step down along its left
// side, then onward keeping marked cells on the left, preferring left turns,
// never crossing the block border. The trace is checked against the
// properties a first-mistake corner placement must satisfy.
EventCheck check_corner_event(const std::vector<std::int8_t>& truth_canon,
                              const std::vector<std::int8_t>& assembled_canon, int k);

} // namespace picrec
