#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pushsim/common.hpp"

namespace pushsim {

// Leading-order broadcast-time constant: 1/ln(2(1-1/d)) - 1/(d ln(1-1/d)).
// Defined for real d > 2; decreasing in d with limit 1/ln 2 + 1.
double c_d(double d);

// Per-round survival factor 1 - p/(d(p + d u)). Needs p, u >= 0, not both 0.
double f_of(double p, double u, std::uint32_t d);

// One-step growth factor of the ratio r = p/u, as a function of r alone.
// g(0) returns the limit 2(1-1/d); g is increasing in x.
double g_ratio(double x, std::uint32_t d);

struct TheoryParams {
    std::uint32_t d = 3;
    std::uint64_t n = 0;
    double p_start = 0;  // 0 = default d * phase_threshold(n)
    double u_start = 0;  // 0 = default n - phase_threshold(n)
    double eps = 0.01;   // growth-phase cutoff parameter
    std::uint32_t horizon = 0;  // 0 = default ceil(10 c_d ln n); guarded above that
};

struct TheoryTrajectory {
    // Index k = rounds past the seeding state; entry 0 is the seed itself.
    std::vector<double> p, u, f, r;

    std::uint32_t t1 = 0;  // last index where the pure q^k growth envelope is tracked
    std::optional<std::uint32_t> t2;             // first index with p >= u ln^2 n
    std::optional<std::uint32_t> middle_rounds;  // first index with u <= phase_threshold(n)
    double q = 0;        // 2(1-1/d)
    double c = 0;        // c_d(d)
    bool drift_alarm = false;  // extended-precision spot checks disagreed
};

// Runs the two-variable recursion p' = (1-1/d) f p + d u (f - f^d),
// u' = f^d u from the seed state. Throws DivergenceError if the horizon is
// reached before u drops to the phase threshold.
TheoryTrajectory integrate(const TheoryParams& params);

struct PredictedT {
    double leading;     // c_d(d) * ln n
    double middle;      // rounds the recursion needs from seed to threshold
    double early_band;  // heuristic +- for the ramp-up to the threshold
    double late_band;   // heuristic +- for draining the last threshold-many
    double kappa;       // band multiplier in units of (ln ln n)^2
};

PredictedT predict_T(std::uint64_t n, std::uint32_t d, double kappa = 10.0);

}  // namespace pushsim
