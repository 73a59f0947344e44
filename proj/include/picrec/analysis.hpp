#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace picrec {

// Threshold index: the unique m with sqrt(2*log2(n)) in [m - 3/4, m + 1/4).
// The float candidate is confirmed by exact integer arithmetic (n^32 against
// powers of two), so interval endpoints cannot be flipped by rounding.
int kc(int n);

// Both log2 upper bounds on the probability that a random picture fails to
// be determined by its deck: the binomial form evaluated through log-gamma,
// and its closed-form relaxation. Windows with k >= 8 would need exponents
// past 63 bits and are rejected.
struct Log2Bounds {
    double binomial = 0;
    double simplified = 0;
};
Log2Bounds zero_statement_log2_bound(int n, int k);

// One aggregated line of a Monte Carlo sweep. Counts always satisfy
// successes + wrong + aborts == trials; a pair that cannot run (n < 3k or
// k beyond the window limit) keeps its row with trials == 0.
struct ExperimentRow {
    int n = 0;
    int k = 0;
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    std::uint64_t wrong = 0;
    std::uint64_t abort_initial = 0;
    std::uint64_t abort_column = 0;
    std::uint64_t abort_row = 0;
    std::uint64_t abort_leftover = 0;
    std::uint64_t seed = 0;
    int kc = 0;
    double ratio0 = 0;  // n^2 / 2^(k^2)
    double ratio1 = 0;  // k * n^2 / 2^(k^2 - k)
    double mean_ms = 0;
};

// Runs trials for every (n, k) in the cross product of the two lists, in
// list order. Each trial's seed is derived from (master seed, n, k, index),
// so the output is identical for any thread count.
std::vector<ExperimentRow> run_experiment(const std::vector<int>& ns, const std::vector<int>& ks,
                                          int trials, std::uint64_t seed, int threads = 1);

std::string to_csv(const std::vector<ExperimentRow>& rows);

} // namespace picrec
