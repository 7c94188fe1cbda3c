#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "pushsim/common.hpp"
#include "pushsim/graph.hpp"
#include "pushsim/rng.hpp"

namespace pushsim {

// Clone ids encode (vertex, slot) as vertex * d + slot. The full universe for
// an n-vertex degree-d model is 0 .. n*d-1; statistics routines also accept
// arbitrary sub-universes.

// Perfect or partial matching on a fixed set of clone ids.
class CloneMatching {
public:
    CloneMatching() = default;
    explicit CloneMatching(std::vector<CloneId> universe);

    const std::vector<CloneId>& universe() const { return universe_; }
    std::size_t size() const { return universe_.size(); }
    std::uint64_t matched_pairs() const { return matched_; }
    bool complete() const { return 2 * matched_ == universe_.size(); }

    bool in_universe(CloneId c) const;
    bool is_matched(CloneId c) const { return partner(c) != kNoClone; }
    CloneId partner(CloneId c) const;

    void match(CloneId a, CloneId b);

    // (lo, hi) pairs in lexicographic order.
    std::vector<std::pair<CloneId, CloneId>> pairs() const;

private:
    std::vector<CloneId> universe_;
    std::vector<CloneId> partner_;  // indexed by clone id, kNoClone = unmatched
    std::uint64_t matched_ = 0;
};

// Uniform perfect matching: shuffle the universe, pair consecutive entries.
CloneMatching sample_matching(std::span<const CloneId> universe, Rng& rng);

// (k-1)!! perfect matchings on k points; k even, k <= 20 keeps this exact.
std::uint64_t count_matchings(std::uint32_t k);

// Visits every perfect matching once. Guarded to |universe| <= 16.
void enumerate_matchings(
    std::span<const CloneId> universe,
    const std::function<void(const std::vector<std::pair<CloneId, CloneId>>&)>& visit);

// Collapses a complete matching on the full universe 0..n*d-1 to the
// d-regular multigraph it describes.
Graph project(const CloneMatching& m, std::uint32_t n, std::uint32_t d);

struct SimpleSampleReport {
    Graph graph;
    int attempts = 0;
};

// Uniform simple d-regular graph by rejection. Throws SamplingError with the
// attempt count if max_attempts matchings all project to multigraphs.
SimpleSampleReport sample_simple_regular(std::uint32_t n, std::uint32_t d, Rng& rng,
                                         int max_attempts = 1000);

// Counts over a complete matching whose universe is exactly
// A (clones) + B (clones) + all d clones of each vertex in C.
struct MatchingStats {
    std::uint64_t e_aa = 0;  // pairs inside A
    std::uint64_t e_ab = 0;  // pairs between A and B
    std::uint64_t e_ac = 0;  // pairs between A and clones of C
    std::vector<std::uint64_t> h;  // h[l]: vertices of C with exactly l ends into A
    std::uint64_t q = 0;           // sum of h[l] for l >= 2
    std::uint64_t normalizer = 0;  // N = |A| + |B| + d*|C| - 1
};

MatchingStats matching_stats(const CloneMatching& m, std::span<const CloneId> a,
                             std::span<const CloneId> b, std::span<const Vertex> c,
                             std::uint32_t d);

// Closed-form means for the same counts under the uniform matching. The h
// entries use the binomial leading-order form, reliable when |B| >= |A|
// (h_applicable reports that hypothesis); q_bound needs N >= 4.
struct ExpectedStats {
    double e_aa = 0, e_ab = 0, e_ac = 0;
    std::vector<double> h;
    double q_bound = 0;
    bool h_applicable = false;
    std::uint64_t normalizer = 0;
};

ExpectedStats expected_stats(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                             std::uint32_t d);

}  // namespace pushsim
