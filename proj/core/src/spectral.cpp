#include "pushsim/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "pushsim/rng.hpp"

namespace pushsim {

SpectrumResult spectrum(const Graph& g, std::uint32_t cap) {
    const std::uint32_t n = g.num_vertices();
    if (n > cap)
        throw CapacityError("spectrum: n = " + std::to_string(n) + " above dense cap " +
                            std::to_string(cap) + "; use estimate_lambda instead");
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (Vertex v = 0; v < n; ++v)
        for (Vertex u : g.ends(v)) a(v, u) += 0.5;  // both directions visit each pair
    a += a.transpose().eval();  // symmetrize exactly; loops end up as +2 diagonal

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("spectrum: eigensolver failed to converge");

    SpectrumResult out;
    out.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
    out.lambda1 = out.eigenvalues.back();
    out.lambda = n < 2 ? 0.0
                       : std::max(std::abs(out.eigenvalues.front()),
                                  std::abs(out.eigenvalues[n - 2]));
    out.alon_boppana = 2.0 * std::sqrt(double(g.degree()) - 1.0);
    return out;
}

LambdaEstimate estimate_lambda(const Graph& g, std::uint32_t max_iters, std::uint64_t seed) {
    const std::uint32_t n = g.num_vertices();
    const std::uint32_t d = g.degree();
    if (n < 2) throw std::invalid_argument("estimate_lambda: need n >= 2");

    Rng rng(seed);
    std::vector<double> x(n), y(n);
    for (double& v : x) v = rng.u01() - 0.5;

    auto project_and_normalize = [&](std::vector<double>& v) {
        double mean = 0;
        for (double e : v) mean += e;
        mean /= double(n);
        double norm = 0;
        for (double& e : v) {
            e -= mean;  // stay orthogonal to the all-ones top eigenvector
            norm += e * e;
        }
        norm = std::sqrt(norm);
        if (norm > 0)
            for (double& e : v) e /= norm;
        return norm;
    };
    project_and_normalize(x);

    double est = 0;
    std::uint32_t it = 0;
    for (; it < max_iters; ++it) {
        std::fill(y.begin(), y.end(), 0.0);
        for (Vertex v = 0; v < n; ++v)
            for (Vertex u : g.ends(v)) y[v] += x[u];
        const double norm = project_and_normalize(y);
        std::swap(x, y);
        if (it > 16 && std::abs(norm - est) < 1e-12 * std::max(1.0, est)) {
            est = norm;
            break;
        }
        est = norm;
    }

    // Residual ||Ax - rho x|| with rho the signed Rayleigh quotient bounds the
    // distance from rho to the nearest eigenvalue.
    std::fill(y.begin(), y.end(), 0.0);
    for (Vertex v = 0; v < n; ++v)
        for (Vertex u : g.ends(v)) y[v] += x[u];
    double rho = 0;
    for (std::uint32_t i = 0; i < n; ++i) rho += x[i] * y[i];
    double resid = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
        const double r = y[i] - rho * x[i];
        resid += r * r;
    }

    LambdaEstimate out;
    out.lambda1 = double(d);
    out.lambda = std::abs(rho);
    out.tolerance = std::sqrt(resid);
    out.iterations = it;
    return out;
}

MixingCheck mixing_check(const Graph& g, const VertexSet& u, const VertexSet& w,
                         double lambda) {
    const double n = double(g.num_vertices());
    const double e = double(edges_between(g, u, w));  // also enforces disjointness
    const double su = double(u.size()), sw = double(w.size());
    MixingCheck out;
    out.lhs = std::abs(e - double(g.degree()) * su * sw / n);
    out.rhs = lambda * std::sqrt(su * sw * (1.0 - su / n) * (1.0 - sw / n));
    out.pass = out.lhs <= out.rhs + 1e-9;
    return out;
}

VarianceCheck variance_bound_check(const Graph& g, const VertexSet& s, double lambda) {
    const std::uint32_t n = g.num_vertices();
    if (s.id_bound() > n)
        throw std::invalid_argument("variance_bound_check: vertex id out of range");
    std::vector<std::uint8_t> in_s(n, 0);
    for (Vertex v : s.members()) in_s[v] = 1;

    std::uint64_t sum = 0, sum_sq = 0;
    for (Vertex v = 0; v < n; ++v) {
        std::uint64_t deg_s = 0;
        for (Vertex u : g.ends(v)) deg_s += in_s[u];
        sum += deg_s;
        sum_sq += deg_s * deg_s;
    }

    VarianceCheck out;
    out.mean = double(sum) / double(n);
    out.expected_mean = double(g.degree()) * double(s.size()) / double(n);
    out.mean_exact = sum == std::uint64_t(g.degree()) * s.size();
    out.variance = double(sum_sq) / double(n) - out.mean * out.mean;
    const double frac = double(s.size()) / double(n);
    out.bound = lambda * lambda * frac * (1.0 - frac);
    out.pass = out.variance <= out.bound + 1e-9;
    return out;
}

namespace {

struct SubsetScan {
    std::uint64_t e_inside2 = 0;  // twice the internal edge count
    std::uint64_t x_cond1 = 0;    // outside vertices with degree into S off by > eps p|S|
    std::uint64_t x_cond2 = 0;    // outside vertices with degree into S above eps p n
};

SubsetScan scan_subset(const Graph& g, const std::vector<std::uint8_t>& in_s,
                       std::uint64_t s_size, double eps, double p) {
    SubsetScan out;
    const double mean = p * double(s_size);
    const double slack = eps * mean;
    const double small_cap = eps * p * double(g.num_vertices());
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
        std::uint64_t deg_s = 0;
        for (Vertex u : g.ends(v)) deg_s += in_s[u];
        if (in_s[v]) {
            out.e_inside2 += deg_s;
        } else {
            if (std::abs(double(deg_s) - mean) > slack) ++out.x_cond1;
            if (double(deg_s) > small_cap) ++out.x_cond2;
        }
    }
    return out;
}

TypicalitySample judge(const Graph& g, const std::vector<std::uint8_t>& in_s,
                       std::uint64_t s_size, double eps, double p, bool small_side) {
    const std::uint32_t n = g.num_vertices();
    const SubsetScan scan = scan_subset(g, in_s, s_size, eps, p);

    TypicalitySample out;
    out.size = s_size;
    out.condition = small_side ? 2 : 1;
    if (small_side) {
        out.x_count = scan.x_cond2;
        out.x_bound = eps * double(s_size);
    } else {
        out.x_count = scan.x_cond1;
        out.x_bound = 8.0 * double(n) / std::log(double(n));
    }
    out.per_vertex_pass = double(out.x_count) <= out.x_bound + 1e-9;

    out.cut = std::uint64_t(g.degree()) * s_size - scan.e_inside2;
    const double expect = double(s_size) * double(n - s_size) * p;
    const double band = 8.0 * std::sqrt(eps);
    out.cut_lo = expect * (1.0 - band);
    out.cut_hi = expect * (1.0 + band);
    out.cut_pass = double(out.cut) >= out.cut_lo - 1e-9 && double(out.cut) <= out.cut_hi + 1e-9;
    return out;
}

}  // namespace

TypicalityReport typicality_check(const Graph& g, double eps, std::uint32_t budget,
                                  std::uint64_t seed) {
    const std::uint32_t n = g.num_vertices();
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("typicality_check: eps must be in (0,1)");
    if (n < 3) throw std::invalid_argument("typicality_check: graph too small");

    TypicalityReport rep;
    rep.eps = eps;
    rep.p = double(g.degree()) / double(n);
    const double eps2n = eps * eps * double(n);

    auto absorb = [&](const TypicalitySample& s) {
        ++rep.samples;
        if (s.condition == 1 && !s.per_vertex_pass) rep.cond1_pass = false;
        if (s.condition == 2 && !s.per_vertex_pass) rep.cond2_pass = false;
        if (!s.cut_pass) rep.cond3_pass = false;
        rep.detail.push_back(s);
    };

    if (n <= 16) {
        rep.exhaustive = true;
        std::vector<std::uint8_t> in_s(n, 0);
        for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
            std::uint64_t s_size = 0;
            for (std::uint32_t v = 0; v < n; ++v) {
                in_s[v] = (mask >> v) & 1;
                s_size += in_s[v];
            }
            absorb(judge(g, in_s, s_size, eps, rep.p, double(s_size) <= eps2n));
        }
        rep.pass = rep.cond1_pass && rep.cond2_pass && rep.cond3_pass;
        return rep;
    }

    // Sampled strata: sizes straddling the regimes of the two per-vertex
    // conditions; every sampled set also feeds the cut condition.
    std::vector<std::pair<std::uint64_t, bool>> strata;  // (size, small_side)
    auto add_stratum = [&](double size, bool small_side) {
        const std::uint64_t s = std::uint64_t(std::llround(size));
        if (s < 1 || s > n - 1) return;
        if (small_side && double(s) > eps2n) return;
        if (!small_side && double(s) < eps2n) return;
        for (auto& [have, side] : strata)
            if (have == s && side == small_side) return;
        strata.emplace_back(s, small_side);
    };
    add_stratum(std::ceil(eps2n), false);
    add_stratum(std::ceil(2.0 * eps2n), false);
    add_stratum(std::floor(double(n) / 4.0), false);
    add_stratum(std::floor(double(n) / 2.0), false);
    add_stratum(std::ceil(std::sqrt(double(n))), true);
    add_stratum(std::floor(eps2n / 2.0), true);
    if (strata.empty())
        throw std::invalid_argument("typicality_check: no stratum fits this eps and n");

    const std::uint32_t per =
        std::max<std::uint32_t>(1, budget / std::uint32_t(strata.size()));
    Rng rng(seed);
    std::vector<std::uint8_t> in_s(n, 0);
    for (const auto& [size, small_side] : strata) {
        for (std::uint32_t i = 0; i < per; ++i) {
            VertexSet s = random_vertex_set(n, std::uint32_t(size), rng);
            std::fill(in_s.begin(), in_s.end(), 0);
            for (Vertex v : s.members()) in_s[v] = 1;
            absorb(judge(g, in_s, size, eps, rep.p, small_side));
        }
    }
    rep.pass = rep.cond1_pass && rep.cond2_pass && rep.cond3_pass;
    return rep;
}

Graph paley_graph(std::uint32_t q) {
    if (q < 5) throw std::invalid_argument("paley: q must be a prime = 1 mod 4");
    if (q % 4 != 1) throw std::invalid_argument("paley: q must be = 1 mod 4");
    for (std::uint32_t f = 2; std::uint64_t(f) * f <= q; ++f)
        if (q % f == 0) throw std::invalid_argument("paley: q must be prime");

    std::set<std::uint32_t> residues;
    for (std::uint64_t r = 1; r <= (q - 1) / 2; ++r)
        residues.insert(std::uint32_t(r * r % q));

    std::vector<std::pair<Vertex, Vertex>> edges;
    edges.reserve(std::size_t(q) * (q - 1) / 4);
    for (std::uint32_t u = 0; u < q; ++u)
        for (std::uint32_t v = u + 1; v < q; ++v)
            if (residues.count((v - u) % q)) edges.emplace_back(u, v);
    return Graph::from_edges(q, edges);
}

}  // namespace pushsim
