#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include "lda/graph.hpp"
#include "lda/rng.hpp"

using lda::ExpansionParams;
using lda::SkeletonGraph;

namespace {

// the worked 4x6 example: check i touches these variables (0-indexed)
SkeletonGraph example_skeleton() {
    SkeletonGraph g;
    g.n = 6;
    g.m = 4;
    g.dv = 2;
    g.dc = 3;
    g.checks = {{0, 1, 4}, {1, 3, 5}, {2, 3, 4}, {0, 2, 5}};
    g.validate();
    return g;
}

ExpansionParams example_params() {
    ExpansionParams e;
    e.alpha = 1.2;
    e.bigA = 2.0;
    e.beta = 1.8;
    e.bigB = 2.0;
    e.epsilon = 0.15;
    e.vartheta = 0.429;
    return e;
}

// independent neighborhood-of-subset helper used by the oracles below
std::set<int> nbhd(const SkeletonGraph& g, const std::vector<int>& s,
                   bool vars_side) {
    std::set<int> out;
    if (vars_side) {
        const auto adj = g.variable_adjacency();
        for (int v : s)
            for (int c : adj[static_cast<std::size_t>(v)]) out.insert(c);
    } else {
        for (int c : s)
            for (int v : g.checks[static_cast<std::size_t>(c)]) out.insert(v);
    }
    return out;
}

// enumerate all size-k subsets of [0, universe)
template <typename Fn>
void each_subset(int universe, int k, Fn&& fn) {
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (true) {
        fn(idx);
        int i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == universe - k + i) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

// brute-force expansion check: returns true (and a witness) when some
// subset of size <= bound on the given side expands by less than factor
bool find_violation(const SkeletonGraph& g, bool vars_side, int bound,
                    double factor, std::vector<int>* witness) {
    const int universe = vars_side ? g.n : g.m;
    for (int k = 1; k <= std::min(bound, universe); ++k) {
        bool found = false;
        each_subset(universe, k, [&](const std::vector<int>& s) {
            if (found) return;
            const std::set<int> nb = nbhd(g, s, vars_side);
            if (static_cast<double>(nb.size()) <
                factor * static_cast<double>(k)) {
                *witness = s;
                found = true;
            }
        });
        if (found) return true;
    }
    return false;
}

double h2_oracle(double a) {
    if (a <= 0.0 || a >= 1.0) return 0.0;
    return -a * std::log2(a) - (1.0 - a) * std::log2(1.0 - a);
}

// straight-line retyping of the ten degree-threshold expressions
std::vector<double> threshold_oracle(double R, const ExpansionParams& e) {
    const double al = e.alpha, A = e.bigA, be = e.beta, B = e.bigB;
    const double eps = e.epsilon, th = e.vartheta;
    std::vector<double> t;
    t.push_back((h2_oracle((1 - R) / (2 * al)) + 1 - R) /
                (h2_oracle((1 - R) / (2 * al)) -
                 0.5 * h2_oracle((1 - R) / al)));
    t.push_back(R + 2 * al);
    t.push_back(A + 1);
    t.push_back((h2_oracle(eps) + (1 - R) * h2_oracle(A * eps / (1 - R))) /
                (h2_oracle(eps) -
                 A * eps / (1 - R) * h2_oracle((1 - R) / A)));
    t.push_back((1 - R + h2_oracle(be * (1 - R) / 2)) /
                (1 - be * (1 - R) / 2 * h2_oracle(1 / (be * (1 - R)))));
    t.push_back((2 + be * R) * (1 - R) / (2 - be * (1 - R)));
    t.push_back((1 - R) * (B + 1));
    t.push_back(((1 - R) * h2_oracle(th) + h2_oracle(B * th * (1 - R))) /
                (h2_oracle(th) -
                 B * th * (1 - R) * h2_oracle(1 / (B * (1 - R)))));
    t.push_back(((A + 1) * (1 - R) - A * eps * (2 - R)) / (1 - R - A * eps));
    t.push_back((B + 1 - th * B * (2 - R)) / (1 / (1 - R) - th * B));
    return t;
}

ExpansionParams random_valid_params(lda::Rng& rng, double* rate_out) {
    const double R = rng.uniform(0.25, 0.75);
    ExpansionParams e;
    e.alpha = rng.uniform(1.0, 2.0);
    e.bigA = e.alpha + rng.uniform(0.5, 3.0);
    const double blo = 1.0 / (1.0 - R), bhi = 2.0 / (1.0 - R);
    e.beta = blo + rng.uniform(0.15, 0.85) * (bhi - blo);
    e.bigB = e.beta + rng.uniform(0.5, 10.0);
    e.epsilon = rng.uniform(0.1, 0.9) * (1.0 - R) / e.bigA;
    e.vartheta = rng.uniform(0.1, 0.9) / (e.bigB * (1.0 - R));
    e.validate(R);
    *rate_out = R;
    return e;
}

}  // namespace

TEST_CASE("binary entropy") {
    CHECK(lda::binary_entropy(0.0) == 0.0);
    CHECK(lda::binary_entropy(1.0) == 0.0);
    CHECK(lda::binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-15));
    // high-precision reference values
    CHECK(lda::binary_entropy(0.11) ==
          doctest::Approx(0.499915958164528).epsilon(1e-13));
    CHECK(lda::binary_entropy(0.25) ==
          doctest::Approx(0.8112781244591328).epsilon(1e-13));
    for (double a : {0.05, 0.3, 0.47, 0.9})
        CHECK(lda::binary_entropy(a) ==
              doctest::Approx(lda::binary_entropy(1.0 - a)).epsilon(1e-14));
    CHECK_THROWS_AS(lda::binary_entropy(-0.1), std::domain_error);
    CHECK_THROWS_AS(lda::binary_entropy(1.1), std::domain_error);
}

TEST_CASE("skeleton validation and serialization") {
    const SkeletonGraph g = example_skeleton();
    CHECK(g.rate() == doctest::Approx(1.0 / 3).epsilon(1e-15));

    std::stringstream ss;
    g.save(ss);
    const SkeletonGraph back = SkeletonGraph::load(ss);
    CHECK(back == g);

    SkeletonGraph bad = g;
    bad.checks[0] = {0, 0, 4};  // parallel edge
    CHECK_THROWS(bad.validate());
}

TEST_CASE("sampling the standard ensemble") {
    SUBCASE("degrees and determinism") {
        const SkeletonGraph a = lda::sample_regular_graph(6, 2, 3, 42);
        const SkeletonGraph b = lda::sample_regular_graph(6, 2, 3, 42);
        CHECK(a == b);
        CHECK(a.m == 4);
        a.validate();
        const SkeletonGraph c = lda::sample_regular_graph(6, 2, 3, 43);
        CHECK(c.m == 4);  // usually different edges, always valid
        c.validate();
    }
    SUBCASE("divisibility is enforced") {
        CHECK_THROWS(lda::sample_regular_graph(5, 2, 3, 1));
    }
    SUBCASE("dv < dc is enforced") {
        CHECK_THROWS(lda::sample_regular_graph(6, 3, 3, 1));
    }
}

TEST_CASE("every potential edge appears with the symmetric frequency") {
    // on (n=6, dv=2, dc=3) there are 24 variable/check pairs carrying 12
    // edges, so each pair is present with probability 1/2 by symmetry
    const int trials = 10000;
    std::vector<int> hits(24, 0);
    for (int t = 0; t < trials; ++t) {
        const SkeletonGraph g =
            lda::sample_regular_graph(6, 2, 3, 9000 + static_cast<std::uint64_t>(t));
        for (int c = 0; c < 4; ++c)
            for (int v : g.checks[static_cast<std::size_t>(c)])
                ++hits[static_cast<std::size_t>(c * 6 + v)];
    }
    const double se = std::sqrt(0.25 / trials);
    for (int h : hits) {
        const double freq = static_cast<double>(h) / trials;
        CHECK(std::abs(freq - 0.5) <= 3 * se);
    }
}

TEST_CASE("neighborhood unions") {
    const SkeletonGraph g = example_skeleton();

    const std::vector<int> empty;
    CHECK(lda::neighborhood(g, empty, lda::Side::variables).empty());

    const std::vector<int> v0 = {0};
    CHECK(lda::neighborhood(g, v0, lda::Side::variables) ==
          std::vector<int>{0, 3});

    // checks {0,1} touch variables {0,1,3,4,5}
    const std::vector<int> t01 = {0, 1};
    CHECK(lda::neighborhood(g, t01, lda::Side::checks) ==
          std::vector<int>{0, 1, 3, 4, 5});
}

TEST_CASE("expansion parameter domain") {
    ExpansionParams e = example_params();
    CHECK_NOTHROW(e.validate(1.0 / 3));

    ExpansionParams bad = e;
    bad.alpha = 2.5;  // alpha must stay below A
    CHECK_THROWS_AS(bad.validate(1.0 / 3), std::invalid_argument);
    bad = e;
    bad.epsilon = 0.4;  // >= (1-R)/A = 1/3
    CHECK_THROWS_AS(bad.validate(1.0 / 3), std::invalid_argument);
    bad = e;
    bad.beta = 1.4;  // <= 1/(1-R)
    CHECK_THROWS_AS(bad.validate(1.0 / 3), std::invalid_argument);
    bad = e;
    bad.vartheta = 0.8;  // >= 1/(B(1-R))
    CHECK_THROWS_AS(bad.validate(1.0 / 3), std::invalid_argument);
}

TEST_CASE("default margins reproduce the canonical closures") {
    const ExpansionParams e =
        ExpansionParams::with_default_margins(1.0 / 3, 1.5, 4.0, 2.5, 9.0);
    CHECK(e.epsilon == doctest::Approx(1.0 / 7).epsilon(1e-15));
    CHECK(e.vartheta == doctest::Approx(1.0 / 7).epsilon(1e-15));
    const ExpansionParams e2 =
        ExpansionParams::with_default_margins(0.5, 1.2, 3.5, 2.8, 13.0);
    CHECK(e2.epsilon == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(e2.vartheta == doctest::Approx(2.0 / 15).epsilon(1e-15));
}

TEST_CASE("the worked example graph is certified") {
    const SkeletonGraph g = example_skeleton();
    const lda::ExpansionReport rep =
        lda::verify_expansion(g, example_params(), 12);
    CHECK(rep.exhaustive);
    CHECK(rep.all_certified());
    for (const char* name : {"L1", "L2", "R1", "R2"})
        CHECK(rep.property(name).verdict == lda::Verdict::certified);
}

namespace {

// variables 0,1 share both their checks (and so do 4,5): a four-cycle
// that caps |N({0,1})| at 2 and breaks vertex expansion with factor 2
SkeletonGraph cycle_pair_skeleton() {
    SkeletonGraph g;
    g.n = 6;
    g.m = 4;
    g.dv = 2;
    g.dc = 3;
    g.checks = {{0, 1, 2}, {0, 1, 3}, {2, 4, 5}, {3, 4, 5}};
    g.validate();
    return g;
}

ExpansionParams cycle_pair_params() {
    ExpansionParams e;
    e.alpha = 1.2;
    e.bigA = 2.0;
    e.beta = 1.8;
    e.bigB = 2.0;
    e.epsilon = 0.3;  // ceil(0.3*6) = 2: pairs must expand by A = 2
    e.vartheta = 0.429;
    return e;
}

}  // namespace

TEST_CASE("a four-cycle graph is falsified with a witness") {
    const SkeletonGraph g = cycle_pair_skeleton();
    const lda::ExpansionReport rep =
        lda::verify_expansion(g, cycle_pair_params(), 12);
    const lda::PropertyReport& l1 = rep.property("L1");
    CHECK(l1.verdict == lda::Verdict::falsified);
    REQUIRE(l1.witness.size() == 2);
    CHECK(nbhd(g, l1.witness, true).size() < 2 * l1.witness.size());
}

TEST_CASE("verifier agrees with the brute-force subset oracle") {
    lda::Rng rng(2024);
    for (int trial = 0; trial < 6; ++trial) {
        const SkeletonGraph g = lda::sample_regular_graph(
            12, 3, 4, 100 + static_cast<std::uint64_t>(trial));
        const double R = g.rate();
        const ExpansionParams e =
            ExpansionParams::with_default_margins(R, 1.1, 2.5, 1.5, 2.0);
        const lda::ExpansionReport rep = lda::verify_expansion(g, e, 12);
        REQUIRE(rep.exhaustive);

        struct Prop {
            const char* name;
            bool vars_side;
            int bound;
            double factor;
        };
        const double m = g.m;
        const Prop props[] = {
            {"L1", true, static_cast<int>(std::ceil(e.epsilon * g.n)), e.bigA},
            {"L2", true, static_cast<int>(std::ceil(m / (2 * e.alpha))),
             e.alpha},
            {"R1", false, static_cast<int>(std::floor(e.vartheta * m)), e.bigB},
            {"R2", false, static_cast<int>(std::floor(m / 2)), e.beta},
        };
        for (const Prop& p : props) {
            std::vector<int> witness;
            const bool violated =
                find_violation(g, p.vars_side, p.bound, p.factor, &witness);
            const lda::PropertyReport& r = rep.property(p.name);
            if (violated) {
                CHECK(r.verdict == lda::Verdict::falsified);
                REQUIRE_FALSE(r.witness.empty());
                CHECK(static_cast<double>(
                          nbhd(g, r.witness, p.vars_side).size()) <
                      p.factor * static_cast<double>(r.witness.size()));
            } else {
                CHECK(r.verdict == lda::Verdict::certified);
            }
        }
    }
}

TEST_CASE("sampled mode can falsify but never certifies") {
    const lda::ExpansionReport rep = lda::verify_expansion(
        cycle_pair_skeleton(), cycle_pair_params(), 12,
        lda::VerifyMode::sampled, 2000, 7);
    CHECK_FALSE(rep.exhaustive);
    CHECK(rep.property("L1").verdict == lda::Verdict::falsified);
    for (const char* name : {"L2", "R1", "R2"})
        CHECK(rep.property(name).verdict != lda::Verdict::certified);
}

TEST_CASE("check subsets always have many distinct neighbors") {
    // |N(T)| >= |T|/(1-R) for every check subset, by double counting edges
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const SkeletonGraph g = lda::sample_regular_graph(12, 3, 4, seed);
        const double inv = 1.0 / (1.0 - g.rate());
        for (int mask = 1; mask < (1 << g.m); ++mask) {
            std::vector<int> t;
            for (int c = 0; c < g.m; ++c)
                if (mask & (1 << c)) t.push_back(c);
            CHECK(static_cast<double>(nbhd(g, t, false).size()) >=
                  inv * static_cast<double>(t.size()) - 1e-9);
        }
    }
    const SkeletonGraph ex = example_skeleton();
    for (int mask = 1; mask < (1 << ex.m); ++mask) {
        std::vector<int> t;
        for (int c = 0; c < ex.m; ++c)
            if (mask & (1 << c)) t.push_back(c);
        CHECK(static_cast<double>(nbhd(ex, t, false).size()) >=
              1.5 * static_cast<double>(t.size()) - 1e-9);
    }
}

TEST_CASE("small-neighborhood variable subsets are alpha-compressed") {
    // contrapositive expansion on the certified example: any S with
    // |N(S)| < m/2 satisfies |S| <= |N(S)|/alpha
    const SkeletonGraph g = example_skeleton();
    const double alpha = example_params().alpha;
    for (int mask = 1; mask < (1 << g.n); ++mask) {
        std::vector<int> s;
        for (int v = 0; v < g.n; ++v)
            if (mask & (1 << v)) s.push_back(v);
        const double nn = static_cast<double>(nbhd(g, s, true).size());
        if (nn < g.m / 2.0)
            CHECK(static_cast<double>(s.size()) <= nn / alpha + 1e-9);
    }
}

TEST_CASE("degree threshold matches the straight-line oracle") {
    SUBCASE("reference parameter sets") {
        ExpansionParams p1;
        p1.alpha = 1.5;
        p1.bigA = 4.0;
        p1.beta = 2.5;
        p1.bigB = 9.0;
        p1.epsilon = 1.0 / 7;
        p1.vartheta = 1.0 / 7;
        const auto t1 = lda::variable_degree_threshold_terms(1.0 / 3, p1);
        const double expected1[] = {
            5.3258269931514,    3.3333333333333335, 5.0,
            28.574361436778712, 6.898192563373934,  5.666666666666667,
            6.666666666666667,  28.574361436778712, 25.0,
            36.666666666666664};
        for (int i = 0; i < 10; ++i)
            CHECK(t1[static_cast<std::size_t>(i)] ==
                  doctest::Approx(expected1[i]).epsilon(1e-12));
        CHECK(lda::variable_degree_threshold(1.0 / 3, p1) ==
              doctest::Approx(36.666666666666664).epsilon(1e-12));

        ExpansionParams p2;
        p2.alpha = 1.2;
        p2.bigA = 3.5;
        p2.beta = 2.8;
        p2.bigB = 13.0;
        p2.epsilon = 0.125;
        p2.vartheta = 2.0 / 15;
        const auto t2 = lda::variable_degree_threshold_terms(0.5, p2);
        const double expected2[] = {
            4.986037583511965,  2.9,   4.5,
            31.540527381356707, 3.4897333309740857, 2.8333333333333335,
            7.0,                28.60041637560244,  25.5,
            42.75};
        for (int i = 0; i < 10; ++i)
            CHECK(t2[static_cast<std::size_t>(i)] ==
                  doctest::Approx(expected2[i]).epsilon(1e-12));
        CHECK(lda::variable_degree_threshold(0.5, p2) ==
              doctest::Approx(42.75).epsilon(1e-12));
    }

    SUBCASE("random valid points term by term") {
        lda::Rng rng(31337);
        for (int trial = 0; trial < 100; ++trial) {
            double R = 0.0;
            const ExpansionParams e = random_valid_params(rng, &R);
            const auto terms = lda::variable_degree_threshold_terms(R, e);
            const std::vector<double> oracle = threshold_oracle(R, e);
            double mx = 0.0;
            for (int i = 0; i < 10; ++i) {
                CHECK(terms[static_cast<std::size_t>(i)] ==
                      doctest::Approx(oracle[static_cast<std::size_t>(i)])
                          .epsilon(1e-12));
                mx = std::max(mx, oracle[static_cast<std::size_t>(i)]);
            }
            CHECK(lda::variable_degree_threshold(R, e) ==
                  doctest::Approx(mx).epsilon(1e-12));
        }
    }

    SUBCASE("threshold is rejected outside the parameter domain") {
        ExpansionParams bad = example_params();
        bad.epsilon = 0.5;  // outside (0, (1-R)/A)
        CHECK_THROWS(lda::variable_degree_threshold(1.0 / 3, bad));
    }
}
