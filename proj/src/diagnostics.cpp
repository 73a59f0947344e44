#include "picrec/diagnostics.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace picrec {
namespace {

Step step_between(const GridVertex& a, const GridVertex& b) {
    if (b.first == a.first + 1 && b.second == a.second) return Step::down;
    if (b.first == a.first - 1 && b.second == a.second) return Step::up;
    if (b.first == a.first && b.second == a.second + 1) return Step::right;
    if (b.first == a.first && b.second == a.second - 1) return Step::left;
    throw std::logic_error("path vertices not adjacent");
}

Step left_of(Step h) {
    switch (h) {
    case Step::down: return Step::right;
    case Step::right: return Step::up;
    case Step::up: return Step::left;
    case Step::left: return Step::down;
    }
    throw std::logic_error("bad step");
}

Step right_of(Step h) {
    switch (h) {
    case Step::down: return Step::left;
    case Step::left: return Step::up;
    case Step::up: return Step::right;
    case Step::right: return Step::down;
    }
    throw std::logic_error("bad step");
}

GridVertex dest(const GridVertex& v, Step h) {
    switch (h) {
    case Step::down: return {v.first + 1, v.second};
    case Step::up: return {v.first - 1, v.second};
    case Step::right: return {v.first, v.second + 1};
    case Step::left: return {v.first, v.second - 1};
    }
    throw std::logic_error("bad step");
}

} // namespace

MarkedGrid mark_bad_windows(const Picture& truth, const Picture& output, int k) {
    const int n = truth.n();
    if (output.n() != n)
        throw std::invalid_argument("pictures differ in size: " + std::to_string(n) + " vs " +
                                    std::to_string(output.n()));
    if (k < 1 || k > n) throw std::invalid_argument("marking needs 1 <= k <= n");

    // Prefix sums of the mismatch indicator make each window test O(1).
    std::vector<int> pre(std::size_t(n + 1) * (n + 1), 0);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            const int d = truth.get(r, c) != output.get(r, c) ? 1 : 0;
            pre[std::size_t(r + 1) * (n + 1) + c + 1] = d + pre[std::size_t(r) * (n + 1) + c + 1] +
                                                        pre[std::size_t(r + 1) * (n + 1) + c] -
                                                        pre[std::size_t(r) * (n + 1) + c];
        }

    MarkedGrid m;
    m.n = n;
    m.cells.assign(std::size_t(n) * n, 0);
    for (int r = 0; r + k <= n; ++r)
        for (int c = 0; c + k <= n; ++c) {
            const int bad = pre[std::size_t(r + k) * (n + 1) + c + k] -
                            pre[std::size_t(r) * (n + 1) + c + k] -
                            pre[std::size_t(r + k) * (n + 1) + c] + pre[std::size_t(r) * (n + 1) + c];
            if (bad > 0) m.cells[std::size_t(r) * n + c + k - 1] = 1;
        }
    return m;
}

std::string render_marks(const MarkedGrid& m) {
    std::string out = "MARKS n=" + std::to_string(m.n) + "\n";
    for (int r = 0; r < m.n; ++r) {
        for (int c = 0; c < m.n; ++c) out += m.marked(r, c) ? 'X' : '.';
        out += '\n';
    }
    return out;
}

GridGraph grid_graph(int n) {
    if (n < 1) throw std::invalid_argument("grid graph needs extent >= 1");
    GridGraph g;
    g.n = n;
    g.edges.reserve(std::size_t(2) * n * (n + 1));
    for (int r = 0; r <= n; ++r)
        for (int c = 0; c < n; ++c) {
            GridEdge e;
            e.a = {r, c};
            e.b = {r, c + 1};
            if (r > 0) e.cells[e.cell_count++] = {r - 1, c};
            if (r < n) e.cells[e.cell_count++] = {r, c};
            g.edges.push_back(e);
        }
    for (int r = 0; r < n; ++r)
        for (int c = 0; c <= n; ++c) {
            GridEdge e;
            e.a = {r, c};
            e.b = {r + 1, c};
            if (c > 0) e.cells[e.cell_count++] = {r, c - 1};
            if (c < n) e.cells[e.cell_count++] = {r, c};
            g.edges.push_back(e);
        }
    return g;
}

InterfaceSet extract_interfaces(const MarkedGrid& m) {
    const int vs = m.n + 1;

    struct Arc {
        int to;
        std::size_t edge;
    };
    std::vector<std::vector<Arc>> adj(std::size_t(vs) * vs);
    std::size_t edge_count = 0;
    for (const GridEdge& e : grid_graph(m.n).edges) {
        if (e.cell_count != 2) continue;  // border edges have one side only
        if (m.marked(e.cells[0].first, e.cells[0].second) ==
            m.marked(e.cells[1].first, e.cells[1].second))
            continue;
        const int ia = e.a.first * vs + e.a.second;
        const int ib = e.b.first * vs + e.b.second;
        adj[ia].push_back({ib, edge_count});
        adj[ib].push_back({ia, edge_count});
        ++edge_count;
    }
    for (auto& arcs : adj)
        std::sort(arcs.begin(), arcs.end(), [](const Arc& x, const Arc& y) { return x.to < y.to; });

    InterfaceSet out;
    for (int v = 0; v < vs * vs; ++v)
        if (adj[v].size() >= 3) out.branch_vertices.push_back({v / vs, v % vs});

    std::vector<char> used(edge_count, 0);
    std::vector<char> in_walk(std::size_t(vs) * vs, 0);

    auto walk = [&](int start) {
        std::vector<int> ids{start};
        in_walk[start] = 1;
        int cur = start;
        for (;;) {
            const Arc* next = nullptr;
            for (const Arc& a : adj[cur])
                if (!used[a.edge] && !in_walk[a.to]) {
                    next = &a;
                    break;
                }
            if (!next) break;
            used[next->edge] = 1;
            cur = next->to;
            in_walk[cur] = 1;
            ids.push_back(cur);
        }
        for (int id : ids) in_walk[id] = 0;
        if (ids.back() < ids.front()) std::reverse(ids.begin(), ids.end());

        InterfacePath p;
        p.vertices.reserve(ids.size());
        for (int id : ids) p.vertices.push_back({id / vs, id % vs});
        p.steps.reserve(ids.size() - 1);
        for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i)
            p.steps.push_back(step_between(p.vertices[i], p.vertices[i + 1]));
        return p;
    };

    auto has_unused = [&](int v) {
        for (const Arc& a : adj[v])
            if (!used[a.edge]) return true;
        return false;
    };

    for (int v = 0; v < vs * vs; ++v)
        if (adj[v].size() % 2 == 1)
            while (has_unused(v)) out.paths.push_back(walk(v));
    for (int v = 0; v < vs * vs; ++v)
        while (has_unused(v)) out.paths.push_back(walk(v));
    return out;
}

StepCounts classify_steps(const InterfacePath& p) {
    StepCounts c;
    for (std::size_t i = 0; i < p.steps.size(); ++i) {
        const Step s = p.steps[i];
        switch (s) {
        case Step::up: ++c.up; break;
        case Step::down: ++c.down; break;
        case Step::left: ++c.left; break;
        case Step::right: ++c.right; break;
        }
        if (i == 0) continue;
        const Step prev = p.steps[i - 1];
        const bool contributes =
            (s == Step::down && (prev == Step::right || prev == Step::down)) ||
            (s == Step::right && prev == Step::right) ||
            (s == Step::left && (prev == Step::down || prev == Step::left));
        if (contributes) ++c.contributing;
    }
    return c;
}

EventCheck check_corner_event(const std::vector<std::int8_t>& truth_canon,
                              const std::vector<std::int8_t>& assembled_canon, int k) {
    if (k < 1) throw std::invalid_argument("corner block needs k >= 1");
    const int L = 2 * k - 1;
    const std::size_t want = std::size_t(L) * L;
    if (truth_canon.size() != want || assembled_canon.size() != want)
        throw std::invalid_argument("corner block needs " + std::to_string(want) + " cells");

    Picture truth(L), output(L);
    for (int r = 0; r < L; ++r)
        for (int c = 0; c < L; ++c) {
            const std::int8_t tv = truth_canon[std::size_t(r) * L + c];
            const std::int8_t ov = assembled_canon[std::size_t(r) * L + c];
            if (tv < 0 || ov < 0) throw std::invalid_argument("corner block has unassigned cells");
            truth.set(r, c, tv != 0);
            output.set(r, c, ov != 0);
        }
    const MarkedGrid m = mark_bad_windows(truth, output, k);

    EventCheck ev;
    ev.start_mark_ok = m.marked(0, k - 1);

    const auto in_block = [L](int r, int c) { return r >= 0 && r < L && c >= 0 && c < L; };
    const auto takeable = [&](const GridVertex& v, Step h) {
        // Cells beside the edge leaving v toward h, by travel orientation.
        int lr, lc, rr, rc;
        switch (h) {
        case Step::down: lr = v.first, lc = v.second, rr = v.first, rc = v.second - 1; break;
        case Step::up: lr = v.first - 1, lc = v.second - 1, rr = v.first - 1, rc = v.second; break;
        case Step::right: lr = v.first - 1, lc = v.second, rr = v.first, rc = v.second; break;
        case Step::left: lr = v.first, lc = v.second - 1, rr = v.first - 1, rc = v.second - 1; break;
        default: throw std::logic_error("bad step");
        }
        return in_block(lr, lc) && in_block(rr, rc) && m.marked(lr, lc) && !m.marked(rr, rc);
    };

    std::vector<GridVertex> verts{{0, k - 1}};
    if (takeable(verts[0], Step::down)) {
        // One heading per vertex at most: revisiting a state means the contour
        // closed on itself, which ends the trace.
        std::vector<char> seen(std::size_t(L + 1) * (L + 1) * 4, 0);
        GridVertex v = verts[0];
        Step h = Step::down;
        for (;;) {
            char& state = seen[(std::size_t(v.first) * (L + 1) + v.second) * 4 + int(h)];
            if (state) break;
            state = 1;
            v = dest(v, h);
            ev.steps.push_back(h);
            verts.push_back(v);
            bool moved = false;
            for (Step cand : {left_of(h), h, right_of(h)})
                if (takeable(v, cand)) {
                    h = cand;
                    moved = true;
                    break;
                }
            if (!moved) break;
        }
    }

    ev.length = int(ev.steps.size());
    ev.length_ok = ev.length <= 6 * k;
    for (std::size_t i = 0; i < ev.steps.size(); ++i) {
        if (ev.steps[i] == Step::up) ev.no_up_steps = false;
        if (ev.steps[i] != Step::left) continue;
        const int col = std::min(verts[i].second, verts[i + 1].second);
        const int row = verts[i].first;
        for (std::size_t j = i + 1; j < ev.steps.size(); ++j) {
            if (ev.steps[j] != Step::right) continue;
            if (std::min(verts[j].second, verts[j + 1].second) != col) continue;
            if (std::abs(verts[j].first - row) < k) ev.separation_ok = false;
        }
    }
    return ev;
}

} // namespace picrec
