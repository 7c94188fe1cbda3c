#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "pushsim/common.hpp"
#include "pushsim/config_model.hpp"
#include "pushsim/graph_io.hpp"
#include "pushsim/rng.hpp"

#include "../support/oracles.hpp"

using namespace pushsim;

namespace {

std::vector<CloneId> iota_universe(CloneId lo, std::uint32_t size) {
    std::vector<CloneId> u(size);
    std::iota(u.begin(), u.end(), lo);
    return u;
}

}  // namespace

TEST_SUITE("config-model") {

TEST_CASE("double factorial matching counts") {
    CHECK(count_matchings(0) == 1);
    CHECK(count_matchings(2) == 1);
    CHECK(count_matchings(4) == 3);
    CHECK(count_matchings(6) == 15);
    CHECK(count_matchings(8) == 105);
    CHECK(count_matchings(10) == 945);
    CHECK(count_matchings(20) == 654729075ULL);
    CHECK_THROWS_AS(count_matchings(3), std::invalid_argument);
    CHECK_THROWS_AS(count_matchings(22), std::invalid_argument);
}

TEST_CASE("enumeration visits every matching exactly once") {
    for (std::uint32_t k : {2u, 4u, 6u, 8u}) {
        const auto universe = iota_universe(10, k);
        std::map<std::vector<std::pair<CloneId, CloneId>>, int> seen;
        enumerate_matchings(universe, [&](const auto& pairs) {
            CHECK(pairs.size() == k / 2);
            ++seen[pairs];
        });
        CHECK(seen.size() == count_matchings(k));
        for (const auto& [pairs, times] : seen) CHECK(times == 1);
    }
    CHECK_THROWS_AS(enumerate_matchings(iota_universe(0, 5), [](const auto&) {}),
                    std::invalid_argument);
    CHECK_THROWS_AS(enumerate_matchings(iota_universe(0, 18), [](const auto&) {}),
                    CapacityError);
}

TEST_CASE("clone matching bookkeeping") {
    CloneMatching m(std::vector<CloneId>{5, 7, 9, 11});
    CHECK(m.size() == 4);
    CHECK(m.matched_pairs() == 0);
    CHECK_FALSE(m.complete());
    CHECK(m.in_universe(7));
    CHECK_FALSE(m.in_universe(6));

    m.match(7, 5);
    CHECK(m.matched_pairs() == 1);
    CHECK(m.partner(5) == 7);
    CHECK(m.partner(7) == 5);
    CHECK(m.is_matched(5));
    CHECK_FALSE(m.is_matched(9));
    CHECK_THROWS_AS(m.match(5, 9), std::invalid_argument);
    CHECK_THROWS_AS(m.match(9, 9), std::invalid_argument);
    CHECK_THROWS_AS(m.match(9, 6), std::invalid_argument);

    m.match(11, 9);
    CHECK(m.complete());
    CHECK(m.pairs() == std::vector<std::pair<CloneId, CloneId>>{{5, 7}, {9, 11}});

    CHECK_THROWS_AS(CloneMatching(std::vector<CloneId>{1, 2, 3}), std::invalid_argument);
    CHECK_THROWS_AS(CloneMatching(std::vector<CloneId>{1, 1}), std::invalid_argument);
}

TEST_CASE("sampled matchings are uniform") {
    Rng rng(1234);
    for (std::uint32_t k : {4u, 6u, 8u}) {
        const auto universe = iota_universe(0, k);
        std::map<std::vector<std::pair<CloneId, CloneId>>, std::size_t> index;
        enumerate_matchings(universe, [&](const auto& pairs) {
            const std::size_t next = index.size();
            index[pairs] = next;
        });
        std::vector<std::uint64_t> counts(index.size(), 0);
        const int draws = k == 8 ? 100000 : 30000;
        for (int i = 0; i < draws; ++i)
            ++counts[index.at(sample_matching(universe, rng).pairs())];
        const double stat = testsupport::chi2_uniform(counts);
        const double crit = testsupport::chi2_crit_99(std::uint32_t(counts.size()) - 1);
        INFO("k = ", k, " chi2 = ", stat, " crit = ", crit);
        CHECK(stat < crit);
    }
}

TEST_CASE("projection collapses matchings to multigraphs") {
    // n=2, d=3: the all-cross pairing is the triple edge
    CloneMatching cross(iota_universe(0, 6));
    cross.match(0, 3);
    cross.match(1, 4);
    cross.match(2, 5);
    const Graph triple = project(cross, 2, 3);
    CHECK(triple.degree() == 3);
    CHECK_FALSE(triple.is_simple());
    CHECK(triple.neighbors(0) == std::vector<Vertex>{1, 1, 1});

    // n=2, d=2: pairing within a vertex is a loop
    CloneMatching loops(iota_universe(0, 4));
    loops.match(0, 1);
    loops.match(2, 3);
    const Graph two_loops = project(loops, 2, 2);
    CHECK_FALSE(two_loops.is_simple());
    CHECK(two_loops.loops_at(0) == 1);
    CHECK(two_loops.loops_at(1) == 1);

    // n=4, d=3: an explicit pairing of distinct vertex pairs gives K4
    CloneMatching k4(iota_universe(0, 12));
    k4.match(0, 3);
    k4.match(1, 6);
    k4.match(2, 9);
    k4.match(4, 7);
    k4.match(5, 10);
    k4.match(8, 11);
    const Graph g = project(k4, 4, 3);
    CHECK(g.is_simple());
    CHECK(to_edge_csv(g) == "1,2\n1,3\n1,4\n2,3\n2,4\n3,4\n");

    CloneMatching incomplete(iota_universe(0, 4));
    incomplete.match(0, 1);
    CHECK_THROWS_AS(project(incomplete, 2, 2), std::invalid_argument);
    CloneMatching shifted(iota_universe(1, 4));
    shifted.match(1, 2);
    shifted.match(3, 4);
    CHECK_THROWS_AS(project(shifted, 2, 2), std::invalid_argument);
}

TEST_CASE("simplicity rate of projected matchings") {
    Rng rng(99);

    // n=4, d=3: exactly 1296 of the 11!! = 10395 pairings are simple
    const auto u12 = iota_universe(0, 12);
    int simple = 0;
    const int reps = 10000;
    for (int i = 0; i < reps; ++i)
        if (project(sample_matching(u12, rng), 4, 3).is_simple()) ++simple;
    CHECK(std::abs(double(simple) / reps - 1296.0 / 10395.0) < 0.012);

    // d=3 at n=1000 sits near the asymptotic rate e^{-2}
    const auto u3000 = iota_universe(0, 3000);
    simple = 0;
    for (int i = 0; i < 2000; ++i)
        if (project(sample_matching(u3000, rng), 1000, 3).is_simple()) ++simple;
    CHECK(std::abs(simple / 2000.0 - std::exp(-2.0)) < 0.03);
}

TEST_CASE("d=4 simplicity rate is stable in n") {
    Rng rng(7);
    const double expected = std::exp(-1.5 - 2.25);
    for (std::uint32_t n : {500u, 1000u, 2000u}) {
        const auto universe = iota_universe(0, n * 4);
        int simple = 0;
        const int reps = 3000;
        for (int i = 0; i < reps; ++i)
            if (project(sample_matching(universe, rng), n, 4).is_simple()) ++simple;
        INFO("n = ", n, " rate = ", simple / double(reps));
        CHECK(std::abs(simple / double(reps) - expected) < 0.009);
    }
}

TEST_CASE("rejection sampler returns simple graphs or a typed error") {
    Rng rng(5);
    const SimpleSampleReport rep = sample_simple_regular(10, 3, rng);
    CHECK(rep.graph.is_simple());
    CHECK(rep.graph.num_vertices() == 10);
    CHECK(rep.graph.degree() == 3);
    CHECK(rep.attempts >= 1);

    Rng a(5), b(5);
    const SimpleSampleReport r1 = sample_simple_regular(20, 3, a);
    const SimpleSampleReport r2 = sample_simple_regular(20, 3, b);
    CHECK(to_edge_csv(r1.graph) == to_edge_csv(r2.graph));
    CHECK(r1.attempts == r2.attempts);

    CHECK_THROWS_AS(sample_simple_regular(3, 3, rng), std::invalid_argument);
    CHECK_THROWS_AS(sample_simple_regular(3, 4, rng), std::invalid_argument);
    CHECK_THROWS_AS(sample_simple_regular(0, 3, rng), std::invalid_argument);

    // at d=8 a simple projection is a ~1e-7 event, so 3 attempts must fail
    try {
        sample_simple_regular(50, 8, rng, 3);
        FAIL("expected SamplingError");
    } catch (const SamplingError& e) {
        CHECK(e.attempts() == 3);
    }
}

TEST_CASE("accepted graphs are uniform over labeled simple graphs") {
    // 70 labeled cubic graphs on 6 vertices: 10 copies of K_{3,3}, 60 prisms
    Rng rng(2024);
    std::map<std::string, std::uint64_t> counts;
    const int reps = 35000;
    for (int i = 0; i < reps; ++i)
        ++counts[to_edge_csv(sample_simple_regular(6, 3, rng).graph)];
    CHECK(counts.size() == 70);
    std::vector<std::uint64_t> flat;
    for (const auto& [key, c] : counts) flat.push_back(c);
    const double stat = testsupport::chi2_uniform(flat);
    INFO("chi2 = ", stat);
    CHECK(stat < testsupport::chi2_crit_99(69));
}

TEST_CASE("matching statistics match their exact means on small universes") {
    const std::uint32_t d = 3;
    for (std::uint64_t a = 0; a <= 6; ++a) {
        for (std::uint64_t b = 0; b <= 6; ++b) {
            for (std::uint64_t c = 0; c <= 3; ++c) {
                const std::uint64_t total = a + b + c * d;
                if (total < 2 || total % 2 != 0 || total > 10) continue;

                std::vector<CloneId> a_ids = iota_universe(CloneId(c * d), std::uint32_t(a));
                std::vector<CloneId> b_ids =
                    iota_universe(CloneId(c * d + a), std::uint32_t(b));
                std::vector<Vertex> c_ids(c);
                std::iota(c_ids.begin(), c_ids.end(), Vertex(0));
                std::vector<CloneId> universe = iota_universe(0, std::uint32_t(c * d));
                universe.insert(universe.end(), a_ids.begin(), a_ids.end());
                universe.insert(universe.end(), b_ids.begin(), b_ids.end());

                std::uint64_t reps = 0, s_aa = 0, s_ab = 0, s_ac = 0, s_q = 0;
                enumerate_matchings(universe, [&](const auto& pairs) {
                    CloneMatching m(universe);
                    for (auto [x, y] : pairs) m.match(x, y);
                    const MatchingStats st = matching_stats(m, a_ids, b_ids, c_ids, d);
                    ++reps;
                    s_aa += st.e_aa;
                    s_ab += st.e_ab;
                    s_ac += st.e_ac;
                    s_q += st.q;
                    CHECK(st.normalizer == total - 1);
                });
                const ExpectedStats ex = expected_stats(a, b, c, d);
                INFO("a=", a, " b=", b, " c=", c);
                CHECK(double(s_aa) / double(reps) == doctest::Approx(ex.e_aa).epsilon(1e-12));
                CHECK(double(s_ab) / double(reps) == doctest::Approx(ex.e_ab).epsilon(1e-12));
                CHECK(double(s_ac) / double(reps) == doctest::Approx(ex.e_ac).epsilon(1e-12));
                if (ex.normalizer >= 4)
                    CHECK(double(s_q) / double(reps) <= ex.q_bound + 1e-12);
            }
        }
    }
}

TEST_CASE("expected statistics reproduce the closed-form examples") {
    const ExpectedStats one = expected_stats(3, 0, 1, 3);
    CHECK(one.normalizer == 5);
    CHECK(one.e_aa == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(one.e_ac == doctest::Approx(1.8).epsilon(1e-12));
    CHECK_FALSE(one.h_applicable);

    const ExpectedStats two = expected_stats(2, 2, 0, 3);
    CHECK(two.normalizer == 3);
    CHECK(two.e_aa == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(two.e_ab == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(two.h_applicable);

    CHECK_THROWS_AS(expected_stats(1, 0, 0, 3), std::invalid_argument);
    CHECK_THROWS_AS(expected_stats(2, 2, 1, 0), std::invalid_argument);
}

TEST_CASE("matching statistics validate their inputs") {
    const auto universe = iota_universe(0, 6);
    CloneMatching m(universe);
    m.match(0, 3);
    const std::vector<CloneId> a{3, 4, 5};
    const std::vector<CloneId> b{};
    const std::vector<Vertex> c{0};
    CHECK_THROWS_AS(matching_stats(m, a, b, c, 3), std::invalid_argument);
    m.match(1, 4);
    m.match(2, 5);
    // overlap: clone 3 is both in A and a clone of C vertex 1
    const std::vector<Vertex> c_overlap{0, 1};
    CHECK_THROWS_AS(matching_stats(m, a, b, c_overlap, 3), std::invalid_argument);
    // coverage: A + B + C clones must be the whole universe
    const std::vector<CloneId> a_short{3, 4};
    CHECK_THROWS_AS(matching_stats(m, a_short, b, c, 3), std::invalid_argument);

    const MatchingStats st = matching_stats(m, a, b, c, 3);
    CHECK(st.e_aa == 0);
    CHECK(st.e_ac == 3);
    CHECK(st.h == std::vector<std::uint64_t>{0, 0, 0, 1});
    CHECK(st.q == 1);
}

TEST_CASE("monte carlo statistics sit within three standard errors") {
    const std::uint64_t a = 200, b = 200, c = 500;
    const std::uint32_t d = 3;
    std::vector<CloneId> a_ids = iota_universe(CloneId(c * d), std::uint32_t(a));
    std::vector<CloneId> b_ids = iota_universe(CloneId(c * d + a), std::uint32_t(b));
    std::vector<Vertex> c_ids(c);
    std::iota(c_ids.begin(), c_ids.end(), Vertex(0));
    std::vector<CloneId> universe = iota_universe(0, std::uint32_t(c * d));
    universe.insert(universe.end(), a_ids.begin(), a_ids.end());
    universe.insert(universe.end(), b_ids.begin(), b_ids.end());

    const int reps = 10000;
    Rng rng(31337);
    std::vector<double> sum(4, 0), sum_sq(4, 0);
    std::vector<double> h_sum(d + 1, 0);
    for (int i = 0; i < reps; ++i) {
        const MatchingStats st =
            matching_stats(sample_matching(universe, rng), a_ids, b_ids, c_ids, d);
        const double vals[4] = {double(st.e_aa), double(st.e_ab), double(st.e_ac),
                                double(st.q)};
        for (int k = 0; k < 4; ++k) {
            sum[k] += vals[k];
            sum_sq[k] += vals[k] * vals[k];
        }
        for (std::uint32_t l = 0; l <= d; ++l) h_sum[l] += double(st.h[l]);
    }

    const ExpectedStats ex = expected_stats(a, b, c, d);
    const double targets[3] = {ex.e_aa, ex.e_ab, ex.e_ac};
    for (int k = 0; k < 3; ++k) {
        const double mean = sum[k] / reps;
        const double var = sum_sq[k] / reps - mean * mean;
        const double se = std::sqrt(var / reps);
        INFO("stat ", k, " mean ", mean, " target ", targets[k], " se ", se);
        CHECK(std::abs(mean - targets[k]) <= 3.0 * se);
    }

    CHECK(ex.h_applicable);
    for (std::uint32_t l = 1; l <= d; ++l) {
        const double mean = h_sum[l] / reps;
        INFO("h[", l, "] mean ", mean, " expected ", ex.h[l]);
        CHECK(std::abs(mean - ex.h[l]) <= 0.05 * ex.h[l]);
    }
    CHECK(sum[3] / reps <= ex.q_bound);
}

}  // TEST_SUITE
