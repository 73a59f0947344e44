#include "picrec/analysis.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <thread>

#include "picrec/errors.hpp"
#include "picrec/kgrid.hpp"
#include "picrec/oracle.hpp"
#include "picrec/rng.hpp"

namespace picrec {
namespace {

// Little-endian multi-word magnitude, just enough for n^32.
using Big = std::vector<std::uint64_t>;

Big big_square(const Big& a) {
    Big r(2 * a.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::uint64_t carry = 0;
        for (std::size_t j = 0; j < a.size(); ++j) {
            const unsigned __int128 cur =
                (unsigned __int128)a[i] * a[j] + r[i + j] + carry;
            r[i + j] = std::uint64_t(cur);
            carry = std::uint64_t(cur >> 64);
        }
        r[i + a.size()] += carry;
    }
    while (r.size() > 1 && r.back() == 0) r.pop_back();
    return r;
}

int bit_length(const Big& a) {
    return int(64 * (a.size() - 1)) + (64 - std::countl_zero(a.back()));
}

// 2^((4m-3)^2) <= n^32 < 2^((4m+1)^2), phrased through the bit length.
bool threshold_holds(const Big& n32, int m) {
    const int lo = (4 * m - 3) * (4 * m - 3);
    const int hi = (4 * m + 1) * (4 * m + 1);
    const int bits = bit_length(n32);
    return bits >= lo + 1 && bits <= hi;
}

struct TrialCell {
    TrialResult result = TrialResult::abort_initial;
    std::uint64_t work = 0;
};

bool runnable(int n, int k) { return k >= 1 && k <= KGrid::kMaxSide && n >= 3 * k; }

} // namespace

int kc(int n) {
    if (n < 2) throw std::invalid_argument("threshold index needs n >= 2");

    Big v{std::uint64_t(n) * std::uint64_t(n)};
    for (int i = 0; i < 4; ++i) v = big_square(v);  // n^2 -> n^32

    const long double x = sqrtl(2.0L * log2l((long double)n));
    const int guess = int(floorl(x + 0.75L));
    for (int m : {guess, guess - 1, guess + 1})
        if (m >= 1 && threshold_holds(v, m)) return m;
    throw std::logic_error("threshold interval missed around " + std::to_string(guess));
}

Log2Bounds zero_statement_log2_bound(int n, int k) {
    if (k < 1 || k > n) throw std::invalid_argument("bound needs 1 <= k <= n");
    if (k >= 8)
        throw ResourceError("window exponent 2^(k*k) exceeds 63 bits for k=" + std::to_string(k));

    const long double ln2 = 0.69314718055994530942L;
    const long double positions = powl((long double)(n - k + 1), 2);
    const long double contents = (long double)((std::uint64_t(1) << (k * k)) - 1);
    const long double cells = (long double)n * n;

    const long double choose_log2 =
        (lgammal(positions + contents + 1) - lgammal(contents + 1) - lgammal(positions + 1)) / ln2;

    Log2Bounds out;
    out.binomial = double(choose_log2 - cells);
    out.simplified = double(
        ldexpl(log2l(10.0L) + 2 * log2l((long double)n) - (long double)(k * k), k * k) - cells);
    return out;
}

std::vector<ExperimentRow> run_experiment(const std::vector<int>& ns, const std::vector<int>& ks,
                                          int trials, std::uint64_t seed, int threads) {
    if (trials < 0) throw std::invalid_argument("trial count must be non-negative");
    if (threads < 1) throw std::invalid_argument("thread count must be positive");
    if (trials == 0) return {};

    std::vector<ExperimentRow> rows;
    std::vector<std::size_t> runnable_rows;
    for (int n : ns)
        for (int k : ks) {
            ExperimentRow row;
            row.n = n;
            row.k = k;
            row.seed = seed;
            if (n >= 2) row.kc = kc(n);
            if (k >= 1 && k <= KGrid::kMaxSide) {
                row.ratio0 = std::ldexp(double(n) * n, -k * k);
                row.ratio1 = k * std::ldexp(double(n) * n, -(k * k - k));
            }
            if (runnable(n, k)) {
                row.trials = std::uint64_t(trials);
                runnable_rows.push_back(rows.size());
            }
            rows.push_back(row);
        }

    // One slot per trial keeps aggregation independent of scheduling.
    std::vector<TrialCell> cells(runnable_rows.size() * std::size_t(trials));
    const auto run_one = [&](std::size_t t) {
        const ExperimentRow& row = rows[runnable_rows[t / trials]];
        const int i = int(t % trials);
        const TrialOutcome out = run_trial(
            row.n, row.k,
            derive_seed(seed, {std::uint64_t(row.n), std::uint64_t(row.k), std::uint64_t(i)}));
        cells[t] = {out.result, out.stats.work};
    };

    if (threads == 1 || cells.size() <= 1) {
        for (std::size_t t = 0; t < cells.size(); ++t) run_one(t);
    } else {
        std::atomic<std::size_t> cursor{0};
        std::vector<std::thread> pool;
        const int width = int(std::min<std::size_t>(std::size_t(threads), cells.size()));
        for (int w = 0; w < width; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t t = cursor.fetch_add(1);
                    if (t >= cells.size()) break;
                    run_one(t);
                }
            });
        for (std::thread& th : pool) th.join();
    }

    for (std::size_t r = 0; r < runnable_rows.size(); ++r) {
        ExperimentRow& row = rows[runnable_rows[r]];
        std::uint64_t work = 0;
        for (int i = 0; i < trials; ++i) {
            const TrialCell& cell = cells[r * std::size_t(trials) + i];
            work += cell.work;
            switch (cell.result) {
            case TrialResult::success: ++row.successes; break;
            case TrialResult::wrong_output: ++row.wrong; break;
            case TrialResult::abort_initial: ++row.abort_initial; break;
            case TrialResult::abort_column: ++row.abort_column; break;
            case TrialResult::abort_row: ++row.abort_row; break;
            case TrialResult::abort_leftover: ++row.abort_leftover; break;
            }
        }
        row.mean_ms = double(work) / (double(trials) * 1e5);
    }
    return rows;
}

std::string to_csv(const std::vector<ExperimentRow>& rows) {
    std::string out =
        "n,k,trials,successes,wrong,abort_initial,abort_column,abort_row,abort_leftover,"
        "seed,kc,ratio0,ratio1,mean_ms\n";
    char line[320];
    for (const ExperimentRow& row : rows) {
        std::snprintf(line, sizeof line,
                      "%d,%d,%llu,%llu,%llu,%llu,%llu,%llu,%llu,%llu,%d,%.6g,%.6g,%.3f\n", row.n,
                      row.k, (unsigned long long)row.trials, (unsigned long long)row.successes,
                      (unsigned long long)row.wrong, (unsigned long long)row.abort_initial,
                      (unsigned long long)row.abort_column, (unsigned long long)row.abort_row,
                      (unsigned long long)row.abort_leftover, (unsigned long long)row.seed, row.kc,
                      row.ratio0, row.ratio1, row.mean_ms);
        out += line;
    }
    return out;
}

} // namespace picrec
