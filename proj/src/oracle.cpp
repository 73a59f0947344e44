#include "picrec/oracle.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <climits>
#include <compare>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

#include "picrec/diagnostics.hpp"
#include "picrec/errors.hpp"
#include "picrec/rng.hpp"

namespace picrec {
namespace {

void require_enumerable(int n, bool allow_n5) {
    if (n >= 1 && (n <= 4 || (n == 5 && allow_n5))) return;
    if (n == 5)
        throw ResourceError("n=5 enumerates 33554432 pictures; pass the explicit opt-in to run it");
    throw ResourceError("exhaustive search supports n <= 4 (n = 5 behind an opt-in), got n=" +
                        std::to_string(n));
}

struct Hash128 {
    std::uint64_t hi = 0, lo = 0;

    friend bool operator==(const Hash128&, const Hash128&) = default;
    friend auto operator<=>(const Hash128&, const Hash128&) = default;
};

// Windows of one picture in a fixed buffer; 25 covers every enumerable size.
using WindowBuf = std::array<KGrid, 25>;

int sorted_windows(const Picture& p, int k, WindowBuf& buf) {
    const int m = p.n() - k + 1;
    int cnt = 0;
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) buf[std::size_t(cnt++)] = subgrid(p, r, c, k);
    std::sort(buf.begin(), buf.begin() + cnt);
    return cnt;
}

// Order-independent deck fingerprint: two mixing chains over the sorted
// (grid, multiplicity) sequence. Collisions are settled exactly later.
Hash128 deck_fingerprint(const Picture& p, int k, WindowBuf& buf) {
    const int cnt = sorted_windows(p, k, buf);
    Hash128 h{0x9e3779b97f4a7c15ull, 0xc2b2ae3d27d4eb4full};
    int i = 0;
    while (i < cnt) {
        int j = i;
        while (j < cnt && buf[j] == buf[i]) ++j;
        for (std::uint64_t w : buf[i].words()) {
            h.hi = mix64(h.hi ^ w);
            h.lo = mix64(h.lo + (w ^ 0xa0761d6478bd642full));
        }
        h.hi = mix64(h.hi ^ std::uint64_t(j - i));
        h.lo = mix64(h.lo + std::uint64_t(j - i));
        i = j;
    }
    return h;
}

bool deck_less(const Deck& a, const Deck& b) {
    return std::lexicographical_compare(a.entries.begin(), a.entries.end(), b.entries.begin(),
                                        b.entries.end(), [](const DeckEntry& x, const DeckEntry& y) {
                                            if (x.grid != y.grid) return x.grid < y.grid;
                                            return x.count < y.count;
                                        });
}

TrialResult abort_result(AbortStage stage) {
    switch (stage) {
    case AbortStage::initial: return TrialResult::abort_initial;
    case AbortStage::column: return TrialResult::abort_column;
    case AbortStage::row: return TrialResult::abort_row;
    case AbortStage::leftover: return TrialResult::abort_leftover;
    }
    throw std::logic_error("bad abort stage");
}

// Tracks which placements of the source picture, if any, the droplet could
// still be: an alignment is a buffer-to-source offset consistent with every
// committed cell so far. The set empties at the first bad placement.
class GroundTruthObserver final : public Observer {
public:
    GroundTruthObserver(const Picture& truth, int k) : truth_(truth), k_(k) {}

    void on_place_begin(ExtensionKind kind, const CornerAssembly* block) override {
        kind_ = kind;
        if (block) block_ = *block;
        else block_.reset();
        cells_.clear();
    }

    void on_place_cell(int r, int c, bool v) override { cells_.push_back({r, c, v}); }

    void on_place_end() override {
        ++placements_;
        if (kind_ == ExtensionKind::seed) {
            seed_alignments();
            return;
        }
        if (alignments_.empty()) return;  // already past the first mistake

        std::vector<std::pair<int, int>> surviving;
        for (const auto& off : alignments_)
            if (consistent(off)) surviving.push_back(off);
        if (surviving.empty()) {
            first_mistake_ = placements_;
            first_kind_ = kind_;
            if (kind_ == ExtensionKind::corner && block_) audit_corner();
        }
        alignments_ = std::move(surviving);
    }

    void fill(TrialOutcome& out) const {
        out.instrumented = true;
        out.mistake_free = placements_ == 0 || !alignments_.empty();
        out.placements = placements_;
        out.first_mistake_placement = first_mistake_;
        out.first_mistake_kind = first_kind_;
        out.corner_events_checked = checked_;
        out.corner_events_skipped = skipped_;
        out.corner_event_violations = violations_;
        out.corner_event_up_violations = up_violations_;
        out.corner_event_separation_violations = separation_violations_;
    }

private:
    struct Cell {
        int r, c;
        bool v;
    };

    bool consistent(const std::pair<int, int>& off) const {
        for (const Cell& cell : cells_) {
            const int tr = cell.r + off.first;
            const int tc = cell.c + off.second;
            if (tr < 0 || tr >= truth_.n() || tc < 0 || tc >= truth_.n()) return false;
            if (truth_.get(tr, tc) != cell.v) return false;
        }
        return true;
    }

    void seed_alignments() {
        int r0 = INT_MAX, c0 = INT_MAX;
        for (const Cell& cell : cells_) {
            r0 = std::min(r0, cell.r);
            c0 = std::min(c0, cell.c);
        }
        for (int tr = 0; tr + k_ <= truth_.n(); ++tr)
            for (int tc = 0; tc + k_ <= truth_.n(); ++tc) {
                const std::pair<int, int> off{tr - r0, tc - c0};
                if (consistent(off)) alignments_.push_back(off);
            }
    }

    // The alignments alive before this placement say where the block would
    // sit in the source; audit the contour wherever it fits entirely.
    void audit_corner() {
        const int L = 2 * k_ - 1;
        std::vector<std::int8_t> canon(std::size_t(L) * L);
        for (const auto& off : alignments_) {
            const int tr = block_->rect.r0 + off.first;
            const int tc = block_->rect.c0 + off.second;
            if (tr < 0 || tc < 0 || tr + L > truth_.n() || tc + L > truth_.n()) {
                ++skipped_;
                continue;
            }
            for (int cr = 0; cr < L; ++cr)
                for (int cc = 0; cc < L; ++cc) {
                    const auto [lr, lc] = corner_canon_to_local(block_->dir, block_->corner, k_, cr, cc);
                    canon[std::size_t(cr) * L + cc] = truth_.get(tr + lr, tc + lc) ? 1 : 0;
                }
            ++checked_;
            const EventCheck chk = check_corner_event(canon, block_->canon, k_);
            if (!chk.passed()) ++violations_;
            if (!chk.no_up_steps) ++up_violations_;
            if (!chk.separation_ok) ++separation_violations_;
        }
    }

    const Picture& truth_;
    int k_;
    ExtensionKind kind_ = ExtensionKind::seed;
    std::optional<CornerAssembly> block_;
    std::vector<Cell> cells_;
    std::vector<std::pair<int, int>> alignments_;
    std::uint64_t placements_ = 0;
    std::uint64_t first_mistake_ = 0;
    ExtensionKind first_kind_ = ExtensionKind::seed;
    int checked_ = 0;
    int skipped_ = 0;
    int violations_ = 0;
    int up_violations_ = 0;
    int separation_violations_ = 0;
};

} // namespace

bool deck_equal(const Deck& a, const Deck& b) {
    if (a.k != b.k)
        throw std::invalid_argument("comparing decks of k=" + std::to_string(a.k) +
                                    " and k=" + std::to_string(b.k));
    return a.entries == b.entries;
}

Picture picture_from_code(int n, std::uint64_t code) {
    if (n < 1 || n > 8) throw std::invalid_argument("picture codes cover n <= 8");
    if (n * n < 64 && (code >> (n * n)) != 0)
        throw std::invalid_argument("picture code out of range for n=" + std::to_string(n));
    Picture p(n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) p.set(r, c, (code >> (r * n + c)) & 1u);
    return p;
}

std::uint64_t picture_code(const Picture& p) {
    const int n = p.n();
    if (n > 8) throw std::invalid_argument("picture codes cover n <= 8");
    std::uint64_t code = 0;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            if (p.get(r, c)) code |= std::uint64_t(1) << (r * n + c);
    return code;
}

ExhaustiveAnswer is_reconstructible_exhaustive(const Picture& p, int k, bool allow_n5) {
    const int n = p.n();
    require_enumerable(n, allow_n5);
    const Deck mine = deck_of(p, k);
    const std::uint64_t me = picture_code(p);
    const std::uint64_t total = std::uint64_t(1) << (n * n);
    for (std::uint64_t code = 0; code < total; ++code) {
        if (code == me) continue;
        Picture q = picture_from_code(n, code);
        if (deck_of(q, k) == mine) return {false, std::move(q)};
    }
    return {true, std::nullopt};
}

ClassifyResult classify_all(int n, int k, bool allow_n5, int threads) {
    require_enumerable(n, allow_n5);
    if (k < 1 || k > n) throw std::invalid_argument("classification needs 1 <= k <= n");
    if (threads < 1) throw std::invalid_argument("thread count must be positive");

    const std::uint64_t total = std::uint64_t(1) << (n * n);
    std::vector<Hash128> prints(total);

    const auto fill_range = [&](std::uint64_t begin, std::uint64_t end, WindowBuf& buf) {
        for (std::uint64_t code = begin; code < end; ++code)
            prints[code] = deck_fingerprint(picture_from_code(n, code), k, buf);
    };
    if (threads == 1) {
        WindowBuf buf;
        fill_range(0, total, buf);
    } else {
        std::atomic<std::uint64_t> cursor{0};
        constexpr std::uint64_t kChunk = 4096;
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                WindowBuf buf;
                for (;;) {
                    const std::uint64_t begin = cursor.fetch_add(kChunk);
                    if (begin >= total) break;
                    fill_range(begin, std::min(begin + kChunk, total), buf);
                }
            });
        for (std::thread& th : pool) th.join();
    }

    std::vector<std::uint32_t> order(total);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return prints[a] != prints[b] ? prints[a] < prints[b] : a < b;
    });

    ClassifyResult out;
    out.total = total;
    out.reconstructible_mask.assign(total, false);

    std::size_t i = 0;
    while (i < total) {
        std::size_t j = i;
        while (j < total && prints[order[j]] == prints[order[i]]) ++j;
        if (j - i == 1) {
            out.reconstructible_mask[order[i]] = true;
            ++out.reconstructible;
            i = j;
            continue;
        }

        // Shared fingerprint: settle the bucket by exact decks.
        std::vector<std::pair<Deck, std::uint32_t>> members;
        members.reserve(j - i);
        for (std::size_t t = i; t < j; ++t)
            members.push_back({deck_of(picture_from_code(n, order[t]), k), order[t]});
        std::sort(members.begin(), members.end(), [](const auto& a, const auto& b) {
            if (deck_less(a.first, b.first)) return true;
            if (deck_less(b.first, a.first)) return false;
            return a.second < b.second;
        });
        std::size_t s = 0;
        while (s < members.size()) {
            std::size_t e = s;
            while (e < members.size() && members[e].first == members[s].first) ++e;
            if (e - s == 1) {
                out.reconstructible_mask[members[s].second] = true;
                ++out.reconstructible;
            } else {
                const std::pair<std::uint64_t, std::uint64_t> pair{members[s].second,
                                                                   members[s + 1].second};
                if (!out.collision_example || pair < *out.collision_example)
                    out.collision_example = pair;
            }
            s = e;
        }
        i = j;
    }
    return out;
}

TrialOutcome run_trial(int n, int k, std::uint64_t seed, bool instrument) {
    TrialOutcome out;
    out.n = n;
    out.k = k;
    out.seed = seed;

    const Picture truth = random_picture(n, derive_seed(seed, {0}));
    const Deck deck = deck_of(truth, k);

    GroundTruthObserver audit(truth, k);
    const ReconstructionResult res =
        reconstruct(deck, derive_seed(seed, {1}), instrument ? &audit : nullptr);
    out.stats = res.stats;

    if (res.success) {
        // A structurally complete output must have consumed the deck exactly;
        // anything else is an implementation fault, not a data condition.
        if (res.stats.deck_remaining != 0 || deck_of(*res.picture, k) != deck)
            throw std::logic_error("successful reconstruction left the deck unbalanced");
        out.result = *res.picture == truth ? TrialResult::success : TrialResult::wrong_output;
    } else {
        out.result = abort_result(res.stage);
        out.reason = res.reason;
    }
    if (instrument) audit.fill(out);
    return out;
}

} // namespace picrec
