#include "pushsim/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace pushsim {

namespace {

TailBound finish(double raw, bool applicable) {
    TailBound out;
    out.value = raw < 0.0 ? 0.0 : (raw > 1.0 ? 1.0 : raw);
    out.informative = out.value < 0.5;
    out.applicable = applicable;
    return out;
}

}  // namespace

TailBound chernoff_tail(double mu, double t) {
    if (!(mu >= 0.0) || !(t > 0.0)) {
        throw std::domain_error("chernoff_tail: need mu >= 0 and t > 0");
    }
    double raw = 2.0 * std::exp(-t * t / (2.0 * (mu + t / 3.0)));
    return finish(raw, true);
}

TailBound talagrand_tail(double m, double t, double r, double c) {
    if (!(m > 0.0) || !(t > 0.0) || !(r > 0.0) || !(c > 0.0)) {
        throw std::domain_error("talagrand_tail: all arguments must be positive");
    }
    double raw = 4.0 * std::exp(-t * t / (16.0 * r * c * c * (m + t)));
    return finish(raw, true);
}

TailBound matching_stat_tail(double mu, double eps, std::uint32_t d, std::uint64_t n) {
    if (!(mu > 0.0) || !(eps > 0.0) || d == 0 || n < 2) {
        throw std::domain_error("matching_stat_tail: need mu > 0, eps > 0, d >= 1, n >= 2");
    }
    double ln_n = std::log(double(n));
    bool applicable = mu > ln_n * ln_n && eps > 1.0 / std::sqrt(mu);
    double raw = 4.0 * std::exp(-eps * eps * mu / (64.0 * double(d) * (1.0 + eps)));
    return finish(raw, applicable);
}

}  // namespace pushsim
