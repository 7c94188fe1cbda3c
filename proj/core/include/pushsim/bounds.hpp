#pragma once

#include <cstdint>

namespace pushsim {

struct TailBound {
    double value = 1.0;        // clamped to [0, 1]
    bool informative = false;  // value < 0.5
    bool applicable = true;    // stated hypotheses hold
};

// Two-sided Chernoff tail 2 exp(-t^2 / (2(mu + t/3))) for sums of negatively
// correlated indicators with mean mu.
TailBound chernoff_tail(double mu, double t);

// Certifiable-deviation tail 4 exp(-t^2 / (16 r c^2 (m + t))) for functions
// of an m-term random permutation with Lipschitz constant c and certificate
// rate r.
TailBound talagrand_tail(double m, double t, double r, double c);

// Relative-deviation tail 4 exp(-eps^2 mu / (64 d (1 + eps))) for edge-count
// statistics of a uniform pairing on the clone set of a degree-d model.
// Outside mu > ln^2 n or eps > mu^{-1/2} the bound is reported but flagged
// as not applicable.
TailBound matching_stat_tail(double mu, double eps, std::uint32_t d, std::uint64_t n);

}  // namespace pushsim
