#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pushsim/common.hpp"
#include "pushsim/graph.hpp"
#include "pushsim/push_engine.hpp"
#include "pushsim/theory.hpp"

namespace pushsim {

enum class CellKind { kRandomRegular, kComplete, kPaley, kFile };
enum class TraceRetention { kNone, kSummary, kFull };

struct CellSpec {
    CellKind kind = CellKind::kRandomRegular;
    std::uint32_t n = 0;  // random-regular, complete
    std::uint32_t d = 0;  // random-regular
    std::uint32_t q = 0;  // paley
    std::string path;     // file

    std::string id() const;
};

struct ExperimentSpec {
    std::vector<CellSpec> cells;
    std::uint32_t runs = 1;
    std::uint64_t master_seed = 1;
    PushMode mode = PushMode::kStatic;
    TraceRetention retain = TraceRetention::kSummary;

    // Throws std::invalid_argument naming the offending cell. Incremental
    // mode exposes the pairing as it runs, so it only makes sense for
    // random-regular cells.
    void validate() const;
};

// Parses the sweep spec JSON: {"cells":[{"kind":"random-regular"|"complete"|
// "paley"|"file", "n":…, "d":…, "q":…, "path":…}], "runs":…, "seed":…,
// "mode":"static"|"incremental", "retain":"none"|"summary"|"full"}.
ExperimentSpec parse_experiment_spec(const std::string& json_text);

struct RunRecord {
    std::uint32_t cell_index = 0;
    std::string cell_id;
    std::uint32_t run = 0;
    std::uint64_t seed = 0;
    PushMode mode = PushMode::kStatic;
    std::uint32_t n = 0;
    std::uint32_t d = 0;
    int attempts = 1;  // graph or exposure resamples before full coverage

    std::optional<std::uint32_t> T, T0, T1;
    std::uint64_t coverage = 0;
    bool identities_ok = true;
    std::string identity_error;

    // Post-T1 sparsity/expansion flags; unset when the run never crossed T1
    // or finished with partial coverage.
    std::optional<bool> dense_ok;
    std::optional<bool> expansion_ok;

    double wall_ms = 0;  // never serialized; reruns must be byte-identical

    std::optional<ProtocolTrace> trace;  // retained for full retention, run < 50
};

struct CellSummary {
    std::string cell_id;
    std::uint32_t n = 0;
    std::uint32_t d = 0;
    std::uint32_t runs = 0;  // runs that completed with a broadcast time
    double mean_t = 0;
    double median_t = 0;
    double std_t = 0;  // sample standard deviation
    double c_hat = 0;  // mean_t / ln n
    double c_d = 0;    // NaN when d < 3
    double rel_gap = 0;
    double violation_fraction = 0;  // identity failures / runs, 0 for a correct build
    std::string bound_note;  // generic tail annotation at three standard deviations
};

struct SweepResult {
    std::vector<RunRecord> records;  // cell-major, run order within cells
    std::vector<CellSummary> summaries;
    bool identities_all_ok = true;
    TraceRetention retain = TraceRetention::kSummary;
};

// Runs every (cell, run) task, fanning out over `workers` threads. Run seeds
// derive from (master seed, cell index, run index), so results do not depend
// on worker count or completion order. Stalled runs (partial coverage on a
// resamplable cell) retry with a chained seed, up to 100 attempts.
SweepResult sweep(const ExperimentSpec& spec, unsigned workers = 1);

// Header n,d,runs,meanT,medianT,stdT,C_hat,C_d,rel_gap; one row per cell,
// six fixed decimals.
std::string summary_csv(const SweepResult& result);

// One JSON object per run. Empty for retention "none".
std::string runs_jsonl(const SweepResult& result);

// Seeds the two-variable recursion from the trace's state at T0. Requires an
// incremental trace (the recursion's p is the unexposed-end pool) that
// reached its T0.
TheoryParams theory_params_from_trace(const ProtocolTrace& trace);

struct ComparisonRow {
    std::uint32_t t = 0;
    double u_run = 0, u_model = 0;
    double p_run = 0, p_model = 0;
    double rel_err_u = 0, rel_err_p = 0;
};

struct TrajectoryComparison {
    bool applicable = false;
    std::uint32_t start_round = 0;
    std::vector<ComparisonRow> rows;
    double max_rel_err_u = 0;
    double max_rel_err_p = 0;
};

// Aligns a retained incremental trace with a theory trajectory seeded at the
// trace's T0 and reports per-round relative errors over the window where the
// run's uninformed count stays above max(phase threshold, 10^3). Traces that
// never crossed T0 yield applicable = false.
TrajectoryComparison compare_trajectory(const ProtocolTrace& trace,
                                        const TheoryTrajectory& theory);

}  // namespace pushsim
