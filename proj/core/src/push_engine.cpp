#include "pushsim/push_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "pushsim/rng.hpp"

namespace pushsim {

namespace {

void finish_phase_marks(ProtocolTrace& tr) {
    const double theta = phase_threshold(tr.n);
    if (1.0 >= theta) tr.T0 = 0;
    if (double(tr.n - 1) <= theta) tr.T1 = 0;
    for (const RoundRecord& r : tr.rounds) {
        if (!tr.T0 && double(r.informed) >= theta) tr.T0 = r.t;
        if (!tr.T1 && double(r.uninformed) <= theta) tr.T1 = r.t;
    }
}

}  // namespace

ProtocolTrace run_static(const Graph& g, Vertex start, std::uint64_t seed) {
    const std::uint32_t n = g.num_vertices();
    const std::uint32_t d = g.degree();
    if (start >= n) throw std::invalid_argument("run_static: start vertex out of range");

    ProtocolTrace tr;
    tr.n = n;
    tr.d = d;
    tr.mode = PushMode::kStatic;
    tr.seed = seed;
    tr.start = start;
    tr.informed_round.assign(n, ProtocolTrace::kNeverInformed);
    tr.informed_round[start] = 0;

    const std::uint64_t reach = bfs_layers(g, start).reached();

    Rng rng(seed);
    std::vector<std::uint8_t> informed(n, 0);
    informed[start] = 1;
    std::vector<Vertex> informed_list{start};
    informed_list.reserve(n);
    std::vector<Vertex> touched;

    std::uint32_t t = 0;
    while (informed_list.size() < reach) {
        ++t;
        touched.clear();
        const std::size_t cur = informed_list.size();
        for (std::size_t i = 0; i < cur; ++i) {
            const Vertex v = informed_list[i];
            const Vertex u = g.ends(v)[rng.below32(d)];
            if (!informed[u]) {
                informed[u] = 1;
                touched.push_back(u);
                tr.informed_round[u] = t;
            }
        }
        for (Vertex u : touched) informed_list.push_back(u);

        RoundRecord r;
        r.t = t;
        r.informed = informed_list.size();
        r.uninformed = n - informed_list.size();
        r.newly = touched.size();
        tr.rounds.push_back(std::move(r));
    }

    tr.coverage = reach;
    if (reach == n) tr.T = t;
    finish_phase_marks(tr);
    return tr;
}

IncrementalRun run_incremental(std::uint32_t n, std::uint32_t d, std::uint64_t seed,
                               Vertex start) {
    if (n == 0 || d == 0) throw std::invalid_argument("run_incremental: empty dimensions");
    if (std::uint64_t(n) * d % 2 != 0)
        throw std::invalid_argument("run_incremental: n*d must be even");
    if (start >= n) throw std::invalid_argument("run_incremental: start vertex out of range");

    const std::uint64_t m = std::uint64_t(n) * d;

    ProtocolTrace tr;
    tr.n = n;
    tr.d = d;
    tr.mode = PushMode::kIncremental;
    tr.seed = seed;
    tr.start = start;
    tr.informed_round.assign(n, ProtocolTrace::kNeverInformed);
    tr.informed_round[start] = 0;

    Rng rng(seed);

    std::vector<CloneId> match(m, kNoClone);
    std::vector<CloneId> unmatched(m);
    std::iota(unmatched.begin(), unmatched.end(), CloneId(0));
    std::vector<std::uint32_t> pos(m);
    std::iota(pos.begin(), pos.end(), 0u);
    auto remove_unmatched = [&](CloneId c) {
        const std::uint32_t i = pos[c];
        const CloneId last = unmatched.back();
        unmatched[i] = last;
        pos[last] = i;
        unmatched.pop_back();
    };

    std::vector<std::uint8_t> informed(n, 0);
    informed[start] = 1;
    std::vector<Vertex> informed_list{start};
    informed_list.reserve(n);

    std::uint64_t pool = d;  // unexposed ends owned by informed vertices
    std::vector<CloneId> selected;
    std::vector<std::uint32_t> sel_round(m, 0);
    std::vector<Vertex> touched;
    std::vector<std::uint16_t> hit_count(n, 0);

    std::uint32_t t = 0;
    while (informed_list.size() < n && pool > 0) {
        ++t;
        selected.clear();
        touched.clear();

        // Step 1: independent picks; a pick landing on an already exposed
        // end does nothing this round.
        const std::size_t cur = informed_list.size();
        for (std::size_t i = 0; i < cur; ++i) {
            const Vertex v = informed_list[i];
            const CloneId c = CloneId(std::uint64_t(v) * d + rng.below32(d));
            if (match[c] == kNoClone) {
                selected.push_back(c);
                sel_round[c] = t;
            }
        }
        std::sort(selected.begin(), selected.end());  // canonical (vertex, slot) order

        // Step 2: expose each still-unmatched pick against a uniform
        // unexposed end anywhere.
        std::uint64_t e_self = 0, e_au = 0;
        for (CloneId c : selected) {
            if (match[c] != kNoClone) continue;  // paired earlier within this round
            remove_unmatched(c);
            const CloneId p = unmatched[rng.below(unmatched.size())];
            match[c] = p;
            match[p] = c;
            remove_unmatched(p);

            const Vertex pv = Vertex(p / d);
            if (informed[pv]) {
                pool -= 2;
                if (sel_round[p] != t) ++e_self;  // landed on an unselected informed end
            } else {
                pool -= 1;
                ++e_au;
                if (hit_count[pv]++ == 0) touched.push_back(pv);
            }
        }

        // Close the round: hit vertices become informed together.
        std::vector<std::uint64_t> hist(d + 1, 0);
        for (Vertex u : touched) {
            ++hist[hit_count[u]];
            pool += d - hit_count[u];
            hit_count[u] = 0;
            informed[u] = 1;
            informed_list.push_back(u);
            tr.informed_round[u] = t;
        }

        RoundRecord r;
        r.t = t;
        r.informed = informed_list.size();
        r.uninformed = n - informed_list.size();
        r.newly = touched.size();
        r.pool = pool;
        r.selected = selected.size();
        r.self_hits = e_self;
        r.u_hits = e_au;
        r.hits.assign(hist.begin() + 1, hist.end());
        tr.rounds.push_back(std::move(r));
    }

    tr.coverage = informed_list.size();
    if (tr.coverage == n) tr.T = t;
    finish_phase_marks(tr);

    // Complete the pairing uniformly; the leftover randomness is independent
    // of everything the broadcast looked at.
    for (std::size_t i = unmatched.size(); i > 1; --i)
        std::swap(unmatched[i - 1], unmatched[rng.below(i)]);
    for (std::size_t i = 0; i + 1 < unmatched.size(); i += 2) {
        match[unmatched[i]] = unmatched[i + 1];
        match[unmatched[i + 1]] = unmatched[i];
    }

    std::vector<Vertex> ends(m);
    std::vector<std::uint32_t> fill(n, 0);
    for (CloneId c = 0; c < m; ++c) {
        const CloneId p = match[c];
        if (p > c) {
            const Vertex u = Vertex(c / d), v = Vertex(p / d);
            ends[std::size_t(u) * d + fill[u]++] = v;
            ends[std::size_t(v) * d + fill[v]++] = u;
        }
    }
    return {std::move(tr), Graph::from_ends(n, d, std::move(ends))};
}

bool ProtocolTrace::check_identities(std::string* why) const {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    std::uint64_t informed_prev = 1;
    std::uint64_t pool_prev = d;
    for (std::size_t i = 0; i < rounds.size(); ++i) {
        const RoundRecord& r = rounds[i];
        const std::string at = " at round " + std::to_string(r.t);
        if (r.t != i + 1) return fail("round index gap" + at);
        if (r.informed + r.uninformed != n) return fail("informed + uninformed != n" + at);
        if (r.informed != informed_prev + r.newly)
            return fail("informed count does not accumulate" + at);
        if (mode == PushMode::kIncremental) {
            if (!r.pool || !r.selected || !r.self_hits || !r.u_hits ||
                r.hits.size() != d)
                return fail("missing exposure bookkeeping" + at);
            std::uint64_t hit_sum = 0, weighted = 0;
            for (std::uint32_t l = 1; l <= d; ++l) {
                hit_sum += r.hits[l - 1];
                weighted += std::uint64_t(d - l) * r.hits[l - 1];
            }
            if (hit_sum != r.newly) return fail("hit histogram does not sum to newly" + at);
            if (r.newly > *r.u_hits) return fail("more new vertices than exposures" + at);
            if (*r.selected > pool_prev) return fail("selected exceeds pool" + at);
            // Exposure conservation: every selected end leaves the pool, an
            // exposure into the informed side removes one more, and each new
            // vertex brings its unexposed remainder.
            const std::uint64_t expect =
                pool_prev - *r.selected - *r.self_hits + weighted;
            if (*r.pool != expect) return fail("pool recursion mismatch" + at);
            pool_prev = *r.pool;
        }
        informed_prev = r.informed;
    }
    if (coverage != informed_prev) return fail("coverage does not match final informed count");
    if (T) {
        const std::uint64_t last_uninformed =
            rounds.empty() ? std::uint64_t(n) - 1 : rounds.back().uninformed;
        if (last_uninformed != 0) return fail("T set but uninformed vertices remain");
    }
    return true;
}

std::string trace_json(const ProtocolTrace& t) {
    nlohmann::json j;
    j["n"] = t.n;
    j["d"] = t.d;
    j["mode"] = t.mode == PushMode::kStatic ? "static" : "incremental";
    j["seed"] = t.seed;
    j["T"] = t.T ? nlohmann::json(*t.T) : nlohmann::json(nullptr);
    j["T0"] = t.T0 ? nlohmann::json(*t.T0) : nlohmann::json(nullptr);
    j["T1"] = t.T1 ? nlohmann::json(*t.T1) : nlohmann::json(nullptr);
    nlohmann::json rounds = nlohmann::json::array();
    for (const RoundRecord& r : t.rounds) {
        nlohmann::json jr;
        jr["t"] = r.t;
        jr["I"] = r.informed;
        jr["U"] = r.uninformed;
        jr["N"] = r.newly;
        jr["P"] = r.pool ? nlohmann::json(*r.pool) : nlohmann::json(nullptr);
        jr["A"] = r.selected ? nlohmann::json(*r.selected) : nlohmann::json(nullptr);
        jr["H"] = r.hits.empty() ? nlohmann::json(nullptr) : nlohmann::json(r.hits);
        rounds.push_back(std::move(jr));
    }
    j["rounds"] = std::move(rounds);
    return j.dump();
}

ConcentrationReport check_A_concentration(const ProtocolTrace& t) {
    if (t.mode != PushMode::kIncremental)
        throw std::invalid_argument("check_A_concentration: needs an incremental trace");
    ConcentrationReport rep;
    const double ln2 = std::pow(std::log(double(t.n)), 2.0);
    const double ln4 = ln2 * ln2;
    std::uint64_t pool_before = t.d;
    double bound_sum = 0;
    for (const RoundRecord& r : t.rounds) {
        if (pool_before > 0) {
            ConcentrationRound c;
            c.t = r.t;
            c.pool_before = pool_before;
            c.selected = r.selected.value_or(0);
            c.tolerance = double(pool_before) / (double(t.d) * ln2);
            c.bound = std::min(1.0, 2.0 * std::exp(-double(pool_before) /
                                                   (3.0 * double(t.d) * ln4)));
            const double dev =
                std::abs(double(c.selected) - double(pool_before) / double(t.d));
            c.violated = dev >= c.tolerance;
            rep.violations += c.violated;
            bound_sum += c.bound;
            ++rep.checked;
            rep.rounds.push_back(c);
        }
        pool_before = r.pool.value_or(0);
    }
    if (rep.checked) {
        rep.violation_rate = double(rep.violations) / double(rep.checked);
        rep.mean_bound = bound_sum / double(rep.checked);
    }
    return rep;
}

FinalPhaseReport final_phase_diagnostics(const ProtocolTrace& t, const Graph& g) {
    FinalPhaseReport rep;
    if (!t.T || !t.T1 || t.coverage != t.n) return rep;  // not applicable
    if (g.num_vertices() != t.n || g.degree() != t.d)
        throw std::invalid_argument("final_phase_diagnostics: graph does not match trace");
    rep.applicable = true;
    rep.rounds_after = *t.T - *t.T1;

    // Uninformed set right after round T1, then shrink it round by round.
    std::vector<std::vector<Vertex>> informed_at(*t.T + 1);
    std::vector<Vertex> current;
    for (Vertex v = 0; v < t.n; ++v)
        if (t.informed_round[v] > *t.T1) {
            current.push_back(v);
            informed_at[t.informed_round[v]].push_back(v);
        }
    for (std::uint32_t round = *t.T1; round < *t.T; ++round) {
        VertexSet s{std::vector<Vertex>(current)};
        FinalPhaseRound fr;
        fr.t = round;
        fr.s = s.size();
        fr.e_inside = edges_within(g, s);
        fr.e_cross = std::uint64_t(t.d) * fr.s - 2 * fr.e_inside;
        fr.dense_flag = double(fr.e_inside) >= 1.1 * double(fr.s);
        fr.expansion_flag = double(fr.e_cross) < double(t.d) * double(fr.s) / 4.0;
        rep.any_flag = rep.any_flag || fr.dense_flag || fr.expansion_flag;
        rep.rounds.push_back(fr);

        // Remove the vertices informed in round round+1.
        const auto& gone = informed_at[round + 1];
        if (!gone.empty()) {
            std::vector<Vertex> next;
            next.reserve(current.size() - gone.size());
            std::vector<std::uint8_t> dead(t.n, 0);
            for (Vertex v : gone) dead[v] = 1;
            for (Vertex v : current)
                if (!dead[v]) next.push_back(v);
            current = std::move(next);
        }
    }
    return rep;
}

}  // namespace pushsim
