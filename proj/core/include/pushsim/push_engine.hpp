#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pushsim/common.hpp"
#include "pushsim/graph.hpp"

namespace pushsim {

enum class PushMode { kStatic, kIncremental };

// One synchronous round. Counts describe the state *after* the round; the
// implicit round-0 state is one informed vertex with d unexposed ends.
struct RoundRecord {
    std::uint32_t t = 0;
    std::uint64_t informed = 0;
    std::uint64_t uninformed = 0;
    std::uint64_t newly = 0;

    // Incremental-only exposure bookkeeping.
    std::optional<std::uint64_t> pool;       // unexposed ends owned by informed vertices
    std::optional<std::uint64_t> selected;   // picks that were still unexposed at step 1
    std::optional<std::uint64_t> self_hits;  // exposures landing on informed, unselected ends
    std::optional<std::uint64_t> u_hits;     // exposures landing on uninformed vertices' ends
    std::vector<std::uint64_t> hits;         // hits[i], i = 1..d: vertices hit exactly i times
};

struct ProtocolTrace {
    static constexpr std::uint32_t kNeverInformed = 0xffffffffu;

    std::uint32_t n = 0;
    std::uint32_t d = 0;
    PushMode mode = PushMode::kStatic;
    std::uint64_t seed = 0;
    Vertex start = 0;

    std::vector<RoundRecord> rounds;
    std::optional<std::uint32_t> T;   // first round after which nobody is uninformed
    std::optional<std::uint32_t> T0;  // first round with informed count >= phase_threshold(n)
    std::optional<std::uint32_t> T1;  // first round with uninformed count <= phase_threshold(n)
    std::uint64_t coverage = 0;       // vertices ever informed (== n unless the run stalled)
    std::vector<std::uint32_t> informed_round;  // per vertex, kNeverInformed if unreached

    // Exact conservation and exposure identities, every round. Returns false
    // and explains in *why on the first failure.
    bool check_identities(std::string* why = nullptr) const;
};

std::string trace_json(const ProtocolTrace& t);

// Classic push on a fixed multigraph: every informed vertex sends along one
// of its d edge-ends uniformly (a loop end targets the vertex itself).
// Disconnected inputs saturate their component and report partial coverage.
ProtocolTrace run_static(const Graph& g, Vertex start, std::uint64_t seed);

struct IncrementalRun {
    ProtocolTrace trace;
    Graph graph;  // pairing completed uniformly once the broadcast ended
};

// Push with the pairing exposed on demand: each informed vertex picks one of
// its d ends (step 1); picks that are still unexposed are then paired, in
// (vertex, slot) order, each with a uniform unexposed end (step 2).
IncrementalRun run_incremental(std::uint32_t n, std::uint32_t d, std::uint64_t seed,
                               Vertex start = 0);

// Per-round check of the step-1 pick count A_t against its mean P_{t-1}/d,
// with the matching exponential tail bound (clamped to 1).
struct ConcentrationRound {
    std::uint32_t t = 0;
    std::uint64_t pool_before = 0;
    std::uint64_t selected = 0;
    double tolerance = 0;  // pool_before / (d ln^2 n)
    double bound = 0;      // min(1, 2 exp(-pool_before / (3 d ln^4 n)))
    bool violated = false;
};

struct ConcentrationReport {
    std::vector<ConcentrationRound> rounds;
    std::uint64_t checked = 0;
    std::uint64_t violations = 0;
    double violation_rate = 0;
    double mean_bound = 0;
};

ConcentrationReport check_A_concentration(const ProtocolTrace& t);

// After the uninformed set first drops to the phase threshold, it should
// stay sparse (edges within below 1.1|S|) and keep expanding (cut at least
// d|S|/4). Flags record violations per round.
struct FinalPhaseRound {
    std::uint32_t t = 0;
    std::uint64_t s = 0;
    std::uint64_t e_inside = 0;
    std::uint64_t e_cross = 0;
    bool dense_flag = false;
    bool expansion_flag = false;
};

struct FinalPhaseReport {
    bool applicable = false;  // needs a completed run that crossed T1
    std::uint32_t rounds_after = 0;
    std::vector<FinalPhaseRound> rounds;
    bool any_flag = false;
};

FinalPhaseReport final_phase_diagnostics(const ProtocolTrace& t, const Graph& g);

}  // namespace pushsim
