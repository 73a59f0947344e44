#include <chrono>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "picrec/analysis.hpp"
#include "picrec/deck.hpp"
#include "picrec/diagnostics.hpp"
#include "picrec/errors.hpp"
#include "picrec/io.hpp"
#include "picrec/oracle.hpp"
#include "picrec/picture.hpp"
#include "picrec/reconstructor.hpp"
#include "picrec/rng.hpp"

namespace {

using clock_type = std::chrono::steady_clock;

double ms_since(clock_type::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

// Comma-separated integers, each either a value or an inclusive a..b range.
std::vector<int> parse_int_spec(const std::string& spec, bool allow_ranges) {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        const std::size_t comma = std::min(spec.find(',', pos), spec.size());
        const std::string tok = spec.substr(pos, comma - pos);
        pos = comma + 1;
        const std::size_t dots = tok.find("..");
        try {
            if (dots == std::string::npos) {
                out.push_back(std::stoi(tok));
            } else if (allow_ranges) {
                const int a = std::stoi(tok.substr(0, dots));
                const int b = std::stoi(tok.substr(dots + 2));
                if (b < a) throw std::invalid_argument("descending range " + tok);
                for (int v = a; v <= b; ++v) out.push_back(v);
            } else {
                throw std::invalid_argument("ranges are not accepted here: " + tok);
            }
        } catch (const std::out_of_range&) {
            throw std::invalid_argument("value out of range in list: " + tok);
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument("bad list entry '" + tok + "' in '" + spec + "'");
        }
    }
    return out;
}

const char* result_name(picrec::TrialResult r) {
    switch (r) {
    case picrec::TrialResult::success: return "success";
    case picrec::TrialResult::wrong_output: return "wrong_output";
    case picrec::TrialResult::abort_initial: return "abort_initial";
    case picrec::TrialResult::abort_column: return "abort_column";
    case picrec::TrialResult::abort_row: return "abort_row";
    case picrec::TrialResult::abort_leftover: return "abort_leftover";
    }
    return "?";
}

const char* stage_name(picrec::AbortStage s) {
    switch (s) {
    case picrec::AbortStage::initial: return "initial";
    case picrec::AbortStage::column: return "column";
    case picrec::AbortStage::row: return "row";
    case picrec::AbortStage::leftover: return "leftover";
    }
    return "?";
}

char step_letter(picrec::Step s) {
    switch (s) {
    case picrec::Step::up: return 'u';
    case picrec::Step::down: return 'd';
    case picrec::Step::left: return 'l';
    case picrec::Step::right: return 'r';
    }
    return '?';
}

int cmd_gen(int n, std::uint64_t seed, const std::string& out) {
    picrec::write_file(out, picrec::encode_picture(picrec::random_picture(n, seed)));
    return 0;
}

int cmd_deck(int k, const std::string& in, const std::string& out) {
    const picrec::Picture p = picrec::decode_picture(picrec::read_file(in));
    picrec::write_file(out, picrec::encode_deck(picrec::deck_of(p, k)));
    return 0;
}

int cmd_reconstruct(const std::string& deck_path, std::uint64_t seed, const std::string& out,
                    const std::optional<std::string>& truth_path) {
    const picrec::Deck d = picrec::decode_deck(picrec::read_file(deck_path));
    const auto t0 = clock_type::now();
    const picrec::ReconstructionResult res = picrec::reconstruct(d, seed);
    if (!res.success) {
        std::fprintf(stderr, "abort in %s stage after %.1f ms: %s\n", stage_name(res.stage),
                     ms_since(t0), res.reason.c_str());
        return 1;
    }
    std::fprintf(stderr,
                 "reconstructed %dx%d in %.1f ms (naive=%llu internals=%llu corners=%llu "
                 "leftovers=%llu boundary_steps=%llu)\n",
                 res.picture->n(), res.picture->n(), ms_since(t0),
                 (unsigned long long)res.stats.naive, (unsigned long long)res.stats.internals,
                 (unsigned long long)res.stats.corners, (unsigned long long)res.stats.leftovers,
                 (unsigned long long)res.stats.boundary_steps);
    picrec::write_file(out, picrec::encode_picture(*res.picture));
    if (truth_path) {
        const picrec::Picture truth = picrec::decode_picture(picrec::read_file(*truth_path));
        if (!(truth == *res.picture)) {
            std::fprintf(stderr, "output differs from %s\n", truth_path->c_str());
            return 1;
        }
    }
    return 0;
}

int cmd_trial(int n, int k, std::uint64_t seed, bool instrument) {
    const picrec::TrialOutcome t = picrec::run_trial(n, k, seed, instrument);
    std::printf("n=%d k=%d seed=%llu result=%s work=%llu deck_remaining=%llu\n", t.n, t.k,
                (unsigned long long)t.seed, result_name(t.result),
                (unsigned long long)t.stats.work, (unsigned long long)t.stats.deck_remaining);
    if (!t.reason.empty()) std::printf("reason=%s\n", t.reason.c_str());
    if (t.instrumented) {
        std::printf("placements=%llu mistake_free=%s first_mistake_placement=%llu\n",
                    (unsigned long long)t.placements, t.mistake_free ? "yes" : "no",
                    (unsigned long long)t.first_mistake_placement);
        std::printf("corner_events checked=%d skipped=%d violations=%d\n",
                    t.corner_events_checked, t.corner_events_skipped, t.corner_event_violations);
    }
    return t.result == picrec::TrialResult::success ? 0 : 1;
}

int cmd_experiment(const std::string& n_spec, const std::string& k_spec, int trials,
                   std::uint64_t seed, int threads, const std::string& csv_path) {
    const std::vector<int> ns = parse_int_spec(n_spec, false);
    const std::vector<int> ks = parse_int_spec(k_spec, true);
    const auto t0 = clock_type::now();
    const std::vector<picrec::ExperimentRow> rows =
        picrec::run_experiment(ns, ks, trials, seed, threads);
    for (const picrec::ExperimentRow& row : rows)
        if (trials > 0 && row.trials == 0)
            std::fprintf(stderr, "skipping n=%d k=%d: needs n >= 3k and k <= %d\n", row.n, row.k,
                         picrec::KGrid::kMaxSide);
    picrec::write_file(csv_path, picrec::to_csv(rows));
    std::fprintf(stderr, "%zu rows in %.1f ms -> %s\n", rows.size(), ms_since(t0),
                 csv_path.c_str());
    return 0;
}

int cmd_oracle_classify(int n, int k, bool allow_n5) {
    const picrec::ClassifyResult res = picrec::classify_all(n, k, allow_n5);
    std::printf("total=%llu reconstructible=%llu ambiguous=%llu\n",
                (unsigned long long)res.total, (unsigned long long)res.reconstructible,
                (unsigned long long)(res.total - res.reconstructible));
    if (res.collision_example)
        std::printf("collision_example=%llu,%llu\n",
                    (unsigned long long)res.collision_example->first,
                    (unsigned long long)res.collision_example->second);
    return 0;
}

int cmd_oracle_check(const std::string& in, int k, bool allow_n5) {
    const picrec::Picture p = picrec::decode_picture(picrec::read_file(in));
    const picrec::ExhaustiveAnswer ans = picrec::is_reconstructible_exhaustive(p, k, allow_n5);
    if (ans.reconstructible) {
        std::printf("yes\n");
        return 0;
    }
    std::printf("no\n");
    if (ans.witness) std::fputs(picrec::encode_picture(*ans.witness).c_str(), stdout);
    return 1;
}

int cmd_bounds(int n, int k) {
    const picrec::Log2Bounds b = picrec::zero_statement_log2_bound(n, k);
    std::printf("kc=%d\n", picrec::kc(n));
    std::printf("ratio0=%.6g\n", std::ldexp(double(n) * n, -k * k));
    std::printf("ratio1=%.6g\n", k * std::ldexp(double(n) * n, -(k * k - k)));
    std::printf("log2_bound_binomial=%.10g\n", b.binomial);
    std::printf("log2_bound_simplified=%.10g\n", b.simplified);
    return 0;
}

int cmd_diagnose(const std::string& truth_path, const std::string& output_path, int k,
                 const std::optional<std::string>& marks_path) {
    const picrec::Picture truth = picrec::decode_picture(picrec::read_file(truth_path));
    const picrec::Picture output = picrec::decode_picture(picrec::read_file(output_path));
    const picrec::MarkedGrid marks = picrec::mark_bad_windows(truth, output, k);
    const picrec::InterfaceSet interfaces = picrec::extract_interfaces(marks);

    std::printf("marks=%d\n", marks.count());
    std::printf("interfaces=%zu\n", interfaces.paths.size());
    std::printf("branch_vertices=%zu\n", interfaces.branch_vertices.size());
    for (std::size_t i = 0; i < interfaces.paths.size(); ++i) {
        const picrec::InterfacePath& path = interfaces.paths[i];
        const picrec::StepCounts counts = picrec::classify_steps(path);
        std::string letters;
        for (picrec::Step s : path.steps) letters += step_letter(s);
        std::printf("path %zu: (%d,%d)->(%d,%d) length=%d steps=%s up=%d down=%d left=%d "
                    "right=%d contributing=%d\n",
                    i, path.vertices.front().first, path.vertices.front().second,
                    path.vertices.back().first, path.vertices.back().second, path.length(),
                    letters.c_str(), counts.up, counts.down, counts.left, counts.right,
                    counts.contributing);
    }
    if (marks_path) picrec::write_file(*marks_path, picrec::render_marks(marks));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"reconstruct random binary pictures from their k-decks"};
    app.require_subcommand(1);

    int n = 0, k = 0, trials = 0, threads = 1;
    std::uint64_t seed = 0;
    std::string in, out, deck_path, csv_path, n_spec, k_spec, truth_path, output_path;
    std::optional<std::string> truth_opt, marks_opt;
    bool instrument = false, allow_n5 = false;

    CLI::App* gen = app.add_subcommand("gen", "generate a seeded random picture");
    gen->add_option("--n", n, "side length")->required();
    gen->add_option("--seed", seed, "rng seed")->required();
    gen->add_option("--out", out, "picture file to write")->required();

    CLI::App* deck = app.add_subcommand("deck", "cut a picture into its deck");
    deck->add_option("--k", k, "window side")->required();
    deck->add_option("--in", in, "picture file to read")->required();
    deck->add_option("--out", out, "deck file to write")->required();

    CLI::App* rec = app.add_subcommand("reconstruct", "rebuild a picture from a deck");
    rec->add_option("--deck", deck_path, "deck file to read")->required();
    rec->add_option("--seed", seed, "rng seed")->required();
    rec->add_option("--out", out, "picture file to write")->required();
    rec->add_option("--truth", truth_opt, "compare the output against this picture");

    CLI::App* trial = app.add_subcommand("trial", "one seeded end-to-end trial");
    trial->add_option("--n", n, "side length")->required();
    trial->add_option("--k", k, "window side")->required();
    trial->add_option("--seed", seed, "trial seed")->required();
    trial->add_flag("--instrument", instrument, "track placements against the source picture");

    CLI::App* exp = app.add_subcommand("experiment", "Monte Carlo sweep to CSV");
    exp->add_option("--n", n_spec, "side lengths, comma separated")->required();
    exp->add_option("--k", k_spec, "window sides, comma separated, a..b ranges allowed")
        ->required();
    exp->add_option("--trials", trials, "trials per (n,k)")->required();
    exp->add_option("--seed", seed, "master seed")->required();
    exp->add_option("--threads", threads, "worker threads");
    exp->add_option("--csv", csv_path, "CSV file to write")->required();

    CLI::App* oracle = app.add_subcommand("oracle", "small-picture ground truth");
    oracle->require_subcommand(1);
    CLI::App* classify = oracle->add_subcommand("classify", "bucket every picture of a size");
    classify->add_option("--n", n, "side length")->required();
    classify->add_option("--k", k, "window side")->required();
    classify->add_flag("--allow-n5", allow_n5, "permit the 2^25-picture enumeration");
    CLI::App* check = oracle->add_subcommand("check", "is one picture determined by its deck");
    check->add_option("--in", in, "picture file to read")->required();
    check->add_option("--k", k, "window side")->required();
    check->add_flag("--allow-n5", allow_n5, "permit the 2^25-picture enumeration");

    CLI::App* bounds = app.add_subcommand("bounds", "threshold and counting bounds");
    bounds->add_option("--n", n, "side length")->required();
    bounds->add_option("--k", k, "window side")->required();

    CLI::App* diag = app.add_subcommand("diagnose", "compare a reconstruction to its source");
    diag->add_option("--truth", truth_path, "source picture file")->required();
    diag->add_option("--output", output_path, "reconstructed picture file")->required();
    diag->add_option("--k", k, "window side")->required();
    diag->add_option("--marks", marks_opt, "write the mark grid to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(gen)) return cmd_gen(n, seed, out);
        if (app.got_subcommand(deck)) return cmd_deck(k, in, out);
        if (app.got_subcommand(rec)) return cmd_reconstruct(deck_path, seed, out, truth_opt);
        if (app.got_subcommand(trial)) return cmd_trial(n, k, seed, instrument);
        if (app.got_subcommand(exp))
            return cmd_experiment(n_spec, k_spec, trials, seed, threads, csv_path);
        if (app.got_subcommand(oracle)) {
            if (oracle->got_subcommand(classify)) return cmd_oracle_classify(n, k, allow_n5);
            return cmd_oracle_check(in, k, allow_n5);
        }
        if (app.got_subcommand(bounds)) return cmd_bounds(n, k);
        if (app.got_subcommand(diag)) return cmd_diagnose(truth_path, output_path, k, marks_opt);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
