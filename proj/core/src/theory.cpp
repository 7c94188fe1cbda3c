#include "pushsim/theory.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pushsim {

double c_d(double d) {
    if (!(d > 2.0))
        throw std::domain_error("c_d: defined for d > 2 (the ratio never grows at d = 2)");
    return 1.0 / std::log(2.0 * (1.0 - 1.0 / d)) - 1.0 / (d * std::log(1.0 - 1.0 / d));
}

double f_of(double p, double u, std::uint32_t d) {
    if (d == 0) throw std::invalid_argument("f_of: d must be positive");
    if (p < 0 || u < 0 || (p == 0 && u == 0))
        throw std::invalid_argument("f_of: need p, u >= 0 and not both zero");
    return 1.0 - p / (double(d) * (p + double(d) * u));
}

double g_ratio(double x, std::uint32_t d) {
    if (d < 3) throw std::invalid_argument("g_ratio: d must be at least 3");
    if (x < 0) throw std::domain_error("g_ratio: x must be nonnegative");
    const double dd = double(d);
    if (x == 0) return 2.0 * (1.0 - 1.0 / dd);  // limit as x -> 0+
    const double a = dd / x;
    return (1.0 - 1.0 / dd + a) * std::pow(1.0 - 1.0 / (dd * (1.0 + a)), -(dd - 1.0)) - a;
}

namespace {

template <typename Real>
void step(Real p, Real u, std::uint32_t d, Real& p_next, Real& u_next) {
    const Real dd = Real(d);
    const Real f = Real(1) - p / (dd * (p + dd * u));
    Real fd = Real(1);
    for (std::uint32_t i = 0; i < d; ++i) fd *= f;  // f^d without pow drift
    p_next = (Real(1) - Real(1) / dd) * f * p + dd * u * (f - fd);
    u_next = fd * u;
}

}  // namespace

TheoryTrajectory integrate(const TheoryParams& params) {
    const std::uint32_t d = params.d;
    const std::uint64_t n = params.n;
    if (d < 3) throw std::invalid_argument("integrate: d must be at least 3");
    if (n < 2) throw std::invalid_argument("integrate: n must be at least 2");

    const double theta = phase_threshold(std::uint32_t(n));
    double p = params.p_start > 0 ? params.p_start : double(d) * theta;
    double u = params.u_start > 0 ? params.u_start : double(n) - theta;
    if (!(p > 0) || !(u > 0) || u >= double(n))
        throw std::invalid_argument("integrate: need p > 0 and 0 < u < n");
    if (p > double(d) * double(n))
        throw std::invalid_argument("integrate: p exceeds the total end count");

    TheoryTrajectory out;
    out.c = c_d(double(d));
    out.q = 2.0 * (1.0 - 1.0 / double(d));

    const std::uint32_t default_horizon =
        std::uint32_t(std::ceil(10.0 * out.c * std::log(double(n))));
    const std::uint32_t horizon = params.horizon ? params.horizon : default_horizon;
    if (horizon > default_horizon)
        throw std::invalid_argument("integrate: horizon above the 10 c_d ln n guard");

    // Largest k with p_start q^k still below the eps n d growth budget; the
    // pure exponential envelope is only guaranteed up to there.
    const double budget = params.eps * double(n) * double(d) / p;
    out.t1 = budget <= 1.0 ? 0 : std::uint32_t(std::floor(std::log(budget) / std::log(out.q)));

    const double ln2n = std::pow(std::log(double(n)), 2.0);
    auto push_state = [&](double pp, double uu) {
        out.p.push_back(pp);
        out.u.push_back(uu);
        out.f.push_back(f_of(pp, uu, d));
        out.r.push_back(pp / uu);
        const std::uint32_t k = std::uint32_t(out.p.size()) - 1;
        if (!out.t2 && pp >= uu * ln2n) out.t2 = k;
        if (!out.middle_rounds && uu <= theta) out.middle_rounds = k;
    };
    push_state(p, u);

    for (std::uint32_t k = 1; k <= horizon; ++k) {
        double p_next, u_next;
        step<double>(p, u, d, p_next, u_next);
        if (k % 64 == 0) {
            long double lp, lu;
            step<long double>((long double)p, (long double)u, d, lp, lu);
            const double rp = std::abs(double(lp) - p_next) / std::max(1e-300, double(lp));
            const double ru = std::abs(double(lu) - u_next) / std::max(1e-300, double(lu));
            if (rp > 1e-8 || ru > 1e-8) out.drift_alarm = true;
        }
        p = p_next;
        u = u_next;
        push_state(p, u);
        if (out.middle_rounds && out.t2 && u < 0.5) break;
    }
    if (!out.middle_rounds)
        throw DivergenceError(
            "integrate: horizon " + std::to_string(horizon) +
            " reached with u still above the phase threshold");
    return out;
}

PredictedT predict_T(std::uint64_t n, std::uint32_t d, double kappa) {
    TheoryParams params;
    params.d = d;
    params.n = n;
    TheoryTrajectory traj = integrate(params);
    PredictedT out;
    out.leading = c_d(double(d)) * std::log(double(n));
    out.middle = double(traj.middle_rounds.value());
    const double band = kappa * std::pow(std::log(std::log(double(n))), 2.0);
    out.early_band = band;
    out.late_band = band;
    out.kappa = kappa;
    return out;
}

}  // namespace pushsim
