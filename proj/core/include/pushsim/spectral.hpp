#pragma once

#include <cstdint>
#include <vector>

#include "pushsim/common.hpp"
#include "pushsim/graph.hpp"

namespace pushsim {

struct SpectrumResult {
    std::vector<double> eigenvalues;  // ascending; multigraph loops add 2 on the diagonal
    double lambda1 = 0;               // largest eigenvalue (= d when connected)
    double lambda = 0;                // max |eig| over the rest of the spectrum
    double alon_boppana = 0;          // 2 sqrt(d-1), the floor lambda cannot beat
};

// Dense symmetric eigensolve. Throws CapacityError above the cap (default
// 4096): use estimate_lambda for bigger graphs.
SpectrumResult spectrum(const Graph& g, std::uint32_t cap = 4096);

struct LambdaEstimate {
    double lambda1 = 0;    // exactly d for a d-regular graph
    double lambda = 0;     // power-iteration estimate on the all-ones complement
    double tolerance = 0;  // residual-based error bar for lambda
    std::uint32_t iterations = 0;
};

LambdaEstimate estimate_lambda(const Graph& g, std::uint32_t max_iters = 2000,
                               std::uint64_t seed = 1);

struct MixingCheck {
    double lhs = 0;  // |e(U,W) - d|U||W|/n|
    double rhs = 0;  // lambda sqrt(|U||W|(1-|U|/n)(1-|W|/n))
    bool pass = false;
};

// Expander mixing inequality on disjoint vertex sets.
MixingCheck mixing_check(const Graph& g, const VertexSet& u, const VertexSet& w,
                         double lambda);

struct VarianceCheck {
    double mean = 0;           // of d_S(v) over uniform v
    double expected_mean = 0;  // d|S|/n, exact for regular graphs
    bool mean_exact = false;
    double variance = 0;
    double bound = 0;  // lambda^2 (|S|/n)(1 - |S|/n)
    bool pass = false;
};

VarianceCheck variance_bound_check(const Graph& g, const VertexSet& s, double lambda);

// Sampled (exhaustive when n <= 16) audit of the three regularity conditions
// a (p, eps)-typical graph satisfies: large sets see near-mean degrees into
// them outside a small exceptional set, small sets are hit hard by almost
// nobody, and every cut is near its expectation.
struct TypicalitySample {
    std::uint64_t size = 0;
    std::uint8_t condition = 0;   // 1 or 2 (which per-vertex condition applied)
    std::uint64_t x_count = 0;    // vertices violating the per-vertex bound
    double x_bound = 0;
    std::uint64_t cut = 0;        // e(S, V \ S)
    double cut_lo = 0, cut_hi = 0;
    bool per_vertex_pass = true;
    bool cut_pass = true;
};

struct TypicalityReport {
    bool exhaustive = false;
    double eps = 0;
    double p = 0;  // d/n
    std::uint64_t samples = 0;
    bool cond1_pass = true;
    bool cond2_pass = true;
    bool cond3_pass = true;
    bool pass = true;
    std::vector<TypicalitySample> detail;
};

TypicalityReport typicality_check(const Graph& g, double eps, std::uint32_t budget,
                                  std::uint64_t seed);

// Quadratic-residue graph on Z_q; q must be a prime = 1 mod 4. Degree
// (q-1)/2, second eigenvalue (sqrt(q)+1)/2 in absolute value.
Graph paley_graph(std::uint32_t q);

}  // namespace pushsim
