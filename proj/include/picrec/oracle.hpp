#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "picrec/deck.hpp"
#include "picrec/picture.hpp"
#include "picrec/reconstructor.hpp"

namespace picrec {

// Multiset equality. Decks are stored canonically, so after the k check this
// is structural comparison.
bool deck_equal(const Deck& a, const Deck& b);

// Row-major bit encoding of a whole picture: cell (r, c) is bit r*n+c of the
// code. Code order is the enumeration order of the exhaustive searches.
Picture picture_from_code(int n, std::uint64_t code);
std::uint64_t picture_code(const Picture& p);

struct ExhaustiveAnswer {
    bool reconstructible = false;
    std::optional<Picture> witness;  // lowest-code deck-equal picture != p
};

// Compares p's deck against every same-size picture in code order. Enforced
// small: n <= 4, or n = 5 behind the explicit opt-in (32M deck builds).
ExhaustiveAnswer is_reconstructible_exhaustive(const Picture& p, int k, bool allow_n5 = false);

struct ClassifyResult {
    std::uint64_t total = 0;
    std::uint64_t reconstructible = 0;
    // Lowest-code pair sharing one deck, if any bucket holds two or more.
    std::optional<std::pair<std::uint64_t, std::uint64_t>> collision_example;
    std::vector<bool> reconstructible_mask;  // indexed by picture code
};

// Buckets all 2^(n^2) pictures of size n by their k-deck; the singleton
// buckets are the reconstructible pictures. Pictures are fingerprinted with
// a fixed 128-bit hash first and every non-singleton fingerprint bucket is
// re-verified by exact deck comparison, so hash collisions cannot leak into
// the counts. Result is identical for any thread count.
ClassifyResult classify_all(int n, int k, bool allow_n5 = false, int threads = 1);

enum class TrialResult {
    success,
    wrong_output,
    abort_initial,
    abort_column,
    abort_row,
    abort_leftover,
};

struct TrialOutcome {
    int n = 0;
    int k = 0;
    std::uint64_t seed = 0;
    TrialResult result = TrialResult::abort_initial;
    std::string reason;  // abort explanation, empty otherwise
    Stats stats;         // deterministic work counters, no wall time

    // Ground-truth audit, filled when instrumentation was requested.
    bool instrumented = false;
    bool mistake_free = false;
    std::uint64_t placements = 0;
    std::uint64_t first_mistake_placement = 0;  // 1-based ordinal, 0 = clean run
    ExtensionKind first_mistake_kind = ExtensionKind::seed;
    int corner_events_checked = 0;
    int corner_events_skipped = 0;  // block not fully inside the source picture
    int corner_event_violations = 0;
    int corner_event_up_violations = 0;          // contour walked an up step
    int corner_event_separation_violations = 0;  // left/right steps closer than k rows
};

// One end-to-end experiment: draw an n x n picture from seed-derived
// randomness, rebuild it from its k-deck with an independently derived
// algorithm seed, and compare. success means the output equals the source
// cell for cell; a structurally complete but different output is
// wrong_output. Successful runs are checked to have consumed the deck
// exactly.
//
// With instrument set, every reported placement is audited against the
// source: the trial stays mistake-free while some source alignment matches
// all committed cells, and the corner placement that kills the last
// alignment has its lookahead block's contour audited per
// check_corner_event, once per alignment that still fits inside the source.
// Placements on lines that later roll back still count, so the audit is
// conservative: a flagged trial may still end in a correct picture.
TrialOutcome run_trial(int n, int k, std::uint64_t seed, bool instrument = false);

} // namespace picrec
