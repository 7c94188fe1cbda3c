#include "pushsim/config_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pushsim {

CloneMatching::CloneMatching(std::vector<CloneId> universe)
    : universe_(std::move(universe)) {
    std::sort(universe_.begin(), universe_.end());
    if (std::adjacent_find(universe_.begin(), universe_.end()) != universe_.end())
        throw std::invalid_argument("matching: duplicate clone id");
    if (universe_.size() % 2 != 0)
        throw std::invalid_argument("matching: universe size must be even");
    const std::size_t bound = universe_.empty() ? 0 : universe_.back() + 1;
    partner_.assign(bound, kNoClone);
}

bool CloneMatching::in_universe(CloneId c) const {
    return std::binary_search(universe_.begin(), universe_.end(), c);
}

CloneId CloneMatching::partner(CloneId c) const {
    if (c >= partner_.size() || !in_universe(c))
        throw std::invalid_argument("matching: clone not in universe");
    return partner_[c];
}

void CloneMatching::match(CloneId a, CloneId b) {
    if (a == b) throw std::invalid_argument("matching: cannot match a clone to itself");
    if (partner(a) != kNoClone || partner(b) != kNoClone)
        throw std::invalid_argument("matching: clone already matched");
    partner_[a] = b;
    partner_[b] = a;
    ++matched_;
}

std::vector<std::pair<CloneId, CloneId>> CloneMatching::pairs() const {
    std::vector<std::pair<CloneId, CloneId>> out;
    out.reserve(matched_);
    for (CloneId c : universe_) {
        CloneId p = partner_[c];
        if (p != kNoClone && c < p) out.emplace_back(c, p);
    }
    return out;  // universe_ sorted, so pairs come out lexicographic
}

CloneMatching sample_matching(std::span<const CloneId> universe, Rng& rng) {
    CloneMatching m(std::vector<CloneId>(universe.begin(), universe.end()));
    std::vector<CloneId> order(m.universe());
    for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[rng.below(i)]);
    for (std::size_t i = 0; i + 1 < order.size(); i += 2) m.match(order[i], order[i + 1]);
    return m;
}

std::uint64_t count_matchings(std::uint32_t k) {
    if (k % 2 != 0) throw std::invalid_argument("count_matchings: k must be even");
    if (k > 20) throw std::invalid_argument("count_matchings: k > 20 overflows the exact count");
    std::uint64_t v = 1;
    for (std::uint32_t i = 3; i < k; i += 2) v *= i;  // (k-1)!!
    return v;
}

namespace {

void enumerate_rec(std::vector<CloneId>& pool,
                   std::vector<std::pair<CloneId, CloneId>>& acc,
                   const std::function<void(const std::vector<std::pair<CloneId, CloneId>>&)>& visit) {
    if (pool.empty()) {
        visit(acc);
        return;
    }
    CloneId first = pool.front();
    for (std::size_t j = 1; j < pool.size(); ++j) {
        std::vector<CloneId> rest;
        rest.reserve(pool.size() - 2);
        for (std::size_t i = 1; i < pool.size(); ++i)
            if (i != j) rest.push_back(pool[i]);
        acc.emplace_back(first, pool[j]);
        enumerate_rec(rest, acc, visit);
        acc.pop_back();
    }
}

}  // namespace

void enumerate_matchings(
    std::span<const CloneId> universe,
    const std::function<void(const std::vector<std::pair<CloneId, CloneId>>&)>& visit) {
    if (universe.size() % 2 != 0)
        throw std::invalid_argument("enumerate_matchings: odd universe");
    if (universe.size() > 16)
        throw CapacityError("enumerate_matchings: universe larger than 16");
    std::vector<CloneId> pool(universe.begin(), universe.end());
    std::sort(pool.begin(), pool.end());
    std::vector<std::pair<CloneId, CloneId>> acc;
    enumerate_rec(pool, acc, visit);
}

Graph project(const CloneMatching& m, std::uint32_t n, std::uint32_t d) {
    if (!m.complete()) throw std::invalid_argument("project: matching incomplete");
    if (m.size() != std::size_t(n) * d)
        throw std::invalid_argument("project: universe is not the full clone set");
    if (!m.universe().empty() && m.universe().back() != std::uint64_t(n) * d - 1)
        throw std::invalid_argument("project: universe is not the full clone set");

    std::vector<Vertex> ends(std::size_t(n) * d);
    std::vector<std::uint32_t> fill(n, 0);
    for (auto [a, b] : m.pairs()) {
        Vertex u = a / d, v = b / d;
        ends[std::size_t(u) * d + fill[u]++] = v;
        ends[std::size_t(v) * d + fill[v]++] = u;
    }
    return Graph::from_ends(n, d, std::move(ends));
}

SimpleSampleReport sample_simple_regular(std::uint32_t n, std::uint32_t d, Rng& rng,
                                         int max_attempts) {
    if (n == 0 || d == 0) throw std::invalid_argument("sample: empty dimensions");
    if (std::uint64_t(n) * d % 2 != 0)
        throw std::invalid_argument("sample: n*d must be even");
    if (n < d + 1) throw std::invalid_argument("sample: need n >= d+1 for a simple graph");
    std::vector<CloneId> universe(std::size_t(n) * d);
    for (std::size_t i = 0; i < universe.size(); ++i) universe[i] = CloneId(i);
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        Graph g = project(sample_matching(universe, rng), n, d);
        if (g.is_simple()) return {std::move(g), attempt};
    }
    throw SamplingError("sample: no simple graph in " + std::to_string(max_attempts) +
                            " attempts",
                        max_attempts);
}

MatchingStats matching_stats(const CloneMatching& m, std::span<const CloneId> a,
                             std::span<const CloneId> b, std::span<const Vertex> c,
                             std::uint32_t d) {
    if (!m.complete()) throw std::invalid_argument("matching_stats: matching incomplete");
    if (d == 0) throw std::invalid_argument("matching_stats: d must be positive");

    enum Class : std::uint8_t { kA, kB, kC };
    // clone -> (class, index of owning C vertex where relevant)
    const std::size_t bound = m.universe().empty() ? 0 : m.universe().back() + 1;
    std::vector<std::uint8_t> cls(bound, 0xff);
    std::vector<std::uint32_t> c_index(bound, 0);

    auto place = [&](CloneId id, Class k, std::uint32_t idx) {
        if (id >= bound || !m.in_universe(id))
            throw std::invalid_argument("matching_stats: clone outside universe");
        if (cls[id] != 0xff)
            throw std::invalid_argument("matching_stats: A, B, C overlap");
        cls[id] = k;
        c_index[id] = idx;
    };
    for (CloneId id : a) place(id, kA, 0);
    for (CloneId id : b) place(id, kB, 0);
    for (std::uint32_t i = 0; i < c.size(); ++i)
        for (std::uint32_t slot = 0; slot < d; ++slot)
            place(CloneId(std::uint64_t(c[i]) * d + slot), kC, i);
    if (a.size() + b.size() + std::size_t(c.size()) * d != m.size())
        throw std::invalid_argument("matching_stats: classes do not cover the universe");

    MatchingStats out;
    out.h.assign(d + 1, 0);
    out.normalizer = a.size() + b.size() + std::uint64_t(c.size()) * d - 1;
    std::vector<std::uint32_t> hits(c.size(), 0);
    for (auto [x, y] : m.pairs()) {
        Class cx = Class(cls[x]), cy = Class(cls[y]);
        if (cx > cy) {
            std::swap(x, y);
            std::swap(cx, cy);
        }
        if (cx == kA && cy == kA) ++out.e_aa;
        else if (cx == kA && cy == kB) ++out.e_ab;
        else if (cx == kA && cy == kC) {
            ++out.e_ac;
            ++hits[c_index[y]];
        }
    }
    for (std::uint32_t i = 0; i < c.size(); ++i) ++out.h[hits[i]];
    for (std::uint32_t l = 2; l <= d; ++l) out.q += out.h[l];
    return out;
}

ExpectedStats expected_stats(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                             std::uint32_t d) {
    if (d == 0) throw std::invalid_argument("expected_stats: d must be positive");
    const std::uint64_t total = a + b + c * d;
    if (total < 2) throw std::invalid_argument("expected_stats: universe too small");
    ExpectedStats out;
    out.normalizer = total - 1;
    const double n = double(out.normalizer);
    out.e_aa = a < 2 ? 0.0 : double(a) * double(a - 1) / 2.0 / n;
    out.e_ab = double(a) * double(b) / n;
    out.e_ac = double(d) * double(a) * double(c) / n;
    out.q_bound = double(d) * d * double(a) * a * double(c) / (n * n);
    out.h_applicable = b >= a;
    out.h.assign(d + 1, 0.0);
    const double frac = double(a) / n;
    for (std::uint32_t l = 0; l <= d; ++l) {
        double binom = 1.0;
        for (std::uint32_t i = 0; i < l; ++i) binom = binom * double(d - i) / double(i + 1);
        out.h[l] = double(c) * binom * std::pow(frac, l) * std::pow(1.0 - frac, double(d - l));
    }
    return out;
}

}  // namespace pushsim
