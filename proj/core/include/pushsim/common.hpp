#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace pushsim {

using Vertex = std::uint32_t;
using CloneId = std::uint32_t;

inline constexpr Vertex kNoVertex = 0xffffffffu;
inline constexpr CloneId kNoClone = 0xffffffffu;

// Rejection sampling ran out of attempts.
class SamplingError : public std::runtime_error {
public:
    SamplingError(const std::string& what, int attempts)
        : std::runtime_error(what), attempts_(attempts) {}
    int attempts() const noexcept { return attempts_; }

private:
    int attempts_;
};

// Input exceeds a hard resource cap (e.g. dense eigensolve size).
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numerical iteration left its guarded regime.
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Size scale separating the early / middle / late phases of a broadcast.
// The natural choice (ln n)^7 only drops below n around n ~ 3e9, so the
// n^(2/3) arm keeps the phases distinguishable at bench scale while agreeing
// with the polylog form asymptotically. Clamped to [1, n].
inline double phase_threshold(std::uint32_t n) {
    const double ln = std::log(double(n));
    const double v = std::min(std::pow(ln, 7.0), std::pow(double(n), 2.0 / 3.0));
    return std::clamp(v, 1.0, double(n));
}

}  // namespace pushsim
