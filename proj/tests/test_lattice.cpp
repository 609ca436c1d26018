#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "lda/lattice.hpp"
#include "lda/rng.hpp"

using lda::ConstructionALattice;
using lda::FpMatrix;
using lda::Rational;
using lda::RationalMatrix;
using lda::SkeletonGraph;

namespace {

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

// independent membership check straight from the congruence definition
bool naive_member(const FpMatrix& h, std::span<const long long> x) {
    const long long p = h.modulus();
    for (int r = 0; r < h.rows(); ++r) {
        long long acc = 0;
        for (int c = 0; c < h.cols(); ++c) {
            const long long xc = ((x[static_cast<std::size_t>(c)] % p) + p) % p;
            acc = (acc + static_cast<long long>(h.at(r, c)) * xc) % p;
        }
        if (acc % p != 0) return false;
    }
    return true;
}

// walk all of [0,p)^n and count points of the lattice two ways
long long count_box_points(const ConstructionALattice& l) {
    const int n = l.dimension();
    const long long p = l.modulus();
    std::vector<long long> x(static_cast<std::size_t>(n), 0);
    long long via_contains = 0, via_naive = 0;
    while (true) {
        if (l.contains(x)) ++via_contains;
        if (naive_member(l.check_matrix(), x)) ++via_naive;
        int i = 0;
        while (i < n && x[static_cast<std::size_t>(i)] == p - 1) {
            x[static_cast<std::size_t>(i)] = 0;
            ++i;
        }
        if (i == n) break;
        ++x[static_cast<std::size_t>(i)];
    }
    REQUIRE(via_contains == via_naive);
    return via_contains;
}

FpMatrix small_check_matrix() {
    // 2x4 over F_3, rank 2
    FpMatrix h(2, 4, 3);
    const std::uint32_t rows[2][4] = {{1, 2, 0, 1}, {0, 1, 1, 2}};
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 4; ++c) h.set(r, c, rows[r][c]);
    return h;
}

std::vector<long long> row_as_ints(const lda::IntMatrix& m, int r) {
    std::vector<long long> out(static_cast<std::size_t>(m.cols));
    for (int c = 0; c < m.cols; ++c) out[static_cast<std::size_t>(c)] = m.at(r, c);
    return out;
}

}  // namespace

TEST_CASE("rational arithmetic normalizes") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(-2, -4) == Rational(1, 2));
    CHECK(Rational(3, -6) == Rational(-1, 2));
    CHECK(Rational(0, 5) == Rational(0));
    CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
    CHECK(Rational(1, 2) - Rational(1, 3) == Rational(1, 6));
    CHECK(Rational(2, 3) * Rational(3, 4) == Rational(1, 2));
    CHECK(Rational(2, 3) / Rational(4, 3) == Rational(1, 2));
    CHECK(Rational(7).is_integer());
    CHECK_FALSE(Rational(1, 2).is_integer());
    CHECK(Rational(1, 2).value() == 0.5);
}

TEST_CASE("rational matrices invert exactly") {
    RationalMatrix a(2, 2);
    a.at(0, 0) = Rational(2);
    a.at(0, 1) = Rational(1);
    a.at(1, 0) = Rational(5);
    a.at(1, 1) = Rational(3);
    CHECK(a.determinant() == Rational(1));
    const RationalMatrix inv = a.inverse();
    CHECK(inv.at(0, 0) == Rational(3));
    CHECK(inv.at(0, 1) == Rational(-1));
    CHECK(inv.at(1, 0) == Rational(-5));
    CHECK(inv.at(1, 1) == Rational(2));

    RationalMatrix s(2, 2);  // singular
    s.at(0, 0) = Rational(1);
    s.at(0, 1) = Rational(2);
    s.at(1, 0) = Rational(2);
    s.at(1, 1) = Rational(4);
    CHECK(s.determinant() == Rational(0));
    CHECK_THROWS(s.inverse());

    const RationalMatrix t = a.transposed();
    CHECK(t.at(0, 1) == Rational(5));
    CHECK(t.at(1, 0) == Rational(1));
}

TEST_CASE("integer and scaled-integer lattices") {
    const auto zn = ConstructionALattice::integer_lattice(3, 5);
    CHECK(zn.dimension() == 3);
    CHECK(zn.rank() == 0);
    CHECK(zn.volume_exponent() == 0);
    CHECK(zn.volume() == 1.0);
    CHECK(zn.code_dimension() == 3);
    const std::vector<long long> any = {7, -2, 0};
    CHECK(zn.contains(any));

    const auto pzn = ConstructionALattice::scaled_integer_lattice(3, 5);
    CHECK(pzn.rank() == 3);
    CHECK(pzn.volume() == 125.0);
    CHECK(pzn.code_dimension() == 0);
    const std::vector<long long> in = {5, -10, 0};
    const std::vector<long long> out = {5, -10, 1};
    CHECK(pzn.contains(in));
    CHECK_FALSE(pzn.contains(out));
}

TEST_CASE("membership matches the congruence definition") {
    const SkeletonGraph g = example_skeleton();
    lda::Rng rng(5150);
    for (std::uint64_t seed : {11ULL, 12ULL, 13ULL}) {
        const FpMatrix h = lda::randomize_skeleton(g, 7, seed);
        const ConstructionALattice l(h);
        CHECK(l.dimension() == 6);
        CHECK(l.volume_exponent() == l.rank());

        // lifted codewords plus p-multiples are members
        const FpMatrix& basis = l.code_basis();
        for (int r = 0; r < basis.rows(); ++r) {
            std::vector<long long> x(6, 0);
            for (int c = 0; c < 6; ++c)
                x[static_cast<std::size_t>(c)] =
                    static_cast<long long>(basis.at(r, c)) +
                    7 * (static_cast<long long>(rng.below(9)) - 4);
            CHECK(l.contains(x));
            CHECK(naive_member(h, x));
        }
        // random integer vectors agree with the oracle either way
        for (int t = 0; t < 200; ++t) {
            std::vector<long long> x(6, 0);
            for (auto& xi : x)
                xi = static_cast<long long>(rng.below(41)) - 20;
            CHECK(l.contains(x) == naive_member(h, x));
        }
        // scaled integer vectors always belong
        std::vector<long long> sc(6, 0);
        for (auto& xi : sc) xi = 7 * (static_cast<long long>(rng.below(7)) - 3);
        CHECK(l.contains(sc));

        const std::vector<long long> short_vec = {1, 2, 3};
        CHECK_THROWS(l.contains(short_vec));
    }
}

TEST_CASE("box census equals the coset count") {
    const ConstructionALattice l(small_check_matrix());
    CHECK(l.rank() == 2);
    CHECK(l.code_dimension() == 2);
    // p^n / vol = p^k points of the lattice inside [0,p)^n
    CHECK(count_box_points(l) == 9);
    CHECK(l.volume() == 9.0);  // 3^2
    CHECK(l.log_volume() == doctest::Approx(2 * std::log(3.0)).epsilon(1e-15));
}

TEST_CASE("generator rows form a triangular basis") {
    for (std::uint64_t seed : {3ULL, 4ULL}) {
        const FpMatrix h = lda::randomize_skeleton(example_skeleton(), 5, seed);
        const ConstructionALattice l(h);
        const lda::IntMatrix gen = lda::generator_rows(l);
        REQUIRE(gen.rows == 6);
        REQUIRE(gen.cols == 6);
        long long diag = 1;
        for (int r = 0; r < 6; ++r) {
            for (int c = 0; c < r; ++c) CHECK(gen.at(r, c) == 0);
            CHECK(gen.at(r, r) > 0);
            diag *= gen.at(r, r);
            CHECK(l.contains(row_as_ints(gen, r)));
        }
        CHECK(static_cast<double>(diag) == l.volume());

        RationalMatrix a(6, 6);
        for (int r = 0; r < 6; ++r)
            for (int c = 0; c < 6; ++c) a.at(r, c) = Rational(gen.at(r, c));
        CHECK(a.determinant() == Rational(diag));
    }
}

TEST_CASE("exact dual basis inverts the generator") {
    const FpMatrix h = lda::randomize_skeleton(example_skeleton(), 5, 99);
    const ConstructionALattice l(h);
    const lda::IntMatrix gen = lda::generator_rows(l);
    const RationalMatrix dual = lda::exact_dual_basis(l);
    REQUIRE(dual.rows() == 6);

    // rows of the dual pair to Kronecker deltas against generator rows
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            Rational dot(0);
            for (int c = 0; c < 6; ++c)
                dot = dot + dual.at(i, c) * Rational(gen.at(j, c));
            CHECK(dot == Rational(i == j ? 1 : 0));
        }

    RationalMatrix a(6, 6);
    for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 6; ++c) a.at(r, c) = Rational(gen.at(r, c));
    CHECK(a.determinant() * dual.determinant() == Rational(1));
}

TEST_CASE("scaled dual lattice") {
    const FpMatrix h = lda::randomize_skeleton(example_skeleton(), 3, 12);
    const ConstructionALattice l(h);
    const ConstructionALattice d = lda::scaled_dual_lattice(l);
    CHECK(d.dimension() == l.dimension());
    CHECK(d.modulus() == l.modulus());
    CHECK(d.check_matrix() == l.code_basis());

    SUBCASE("pairings vanish mod p") {
        // every point of d is p * (dual vector), so <x, y> = 0 mod p for
        // all x in l; verify on the full box census of both lattices
        const long long p = 3;
        const int n = 6;
        std::vector<std::vector<long long>> in_l, in_d;
        std::vector<long long> x(n, 0);
        while (true) {
            if (l.contains(x)) in_l.push_back(x);
            if (d.contains(x)) in_d.push_back(x);
            int i = 0;
            while (i < n && x[static_cast<std::size_t>(i)] == p - 1) {
                x[static_cast<std::size_t>(i)] = 0;
                ++i;
            }
            if (i == n) break;
            ++x[static_cast<std::size_t>(i)];
        }
        REQUIRE(!in_l.empty());
        REQUIRE(!in_d.empty());
        CHECK(static_cast<double>(in_l.size()) * in_d.size() ==
              std::pow(3.0, 6));  // p^k * p^(n-k)
        for (const auto& a : in_l)
            for (const auto& b : in_d) {
                long long dot = 0;
                for (int c = 0; c < n; ++c)
                    dot += a[static_cast<std::size_t>(c)] *
                           b[static_cast<std::size_t>(c)];
                CHECK(dot % p == 0);
            }
    }

    SUBCASE("taking the dual twice returns the original lattice") {
        const ConstructionALattice dd = lda::scaled_dual_lattice(d);
        CHECK(dd.volume() == l.volume());
        const lda::IntMatrix g1 = lda::generator_rows(l);
        const lda::IntMatrix g2 = lda::generator_rows(dd);
        for (int r = 0; r < 6; ++r) {
            CHECK(dd.contains(row_as_ints(g1, r)));
            CHECK(l.contains(row_as_ints(g2, r)));
        }
    }

    SUBCASE("volume product equals p^n") {
        CHECK(l.volume() * d.volume() ==
              std::pow(3.0, l.dimension()));
    }
}

TEST_CASE("rank-deficient matrices are handled") {
    FpMatrix h(3, 4, 3);
    const std::uint32_t rows[3][4] = {
        {1, 2, 0, 1}, {0, 1, 1, 2}, {1, 1, 2, 2}};  // row2 = row0 + 2*row1
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 4; ++c) h.set(r, c, rows[r][c]);
    const ConstructionALattice l(h);
    CHECK(l.rank() == 2);
    CHECK_FALSE(l.full_rank());
    CHECK(l.code_dimension() == 2);
    CHECK(count_box_points(l) == 9);
    const ConstructionALattice d = lda::scaled_dual_lattice(l);
    CHECK(d.volume() * l.volume() == std::pow(3.0, 4));
}

TEST_CASE("nested pair coset counts") {
    // full 2-row matrix over F_3 on 4 coordinates; fine uses only row 0
    const lda::NestedPair np = lda::nested_pair(small_check_matrix(), 1);
    CHECK(np.fine.rank() == 1);
    CHECK(np.coarse.rank() == 2);
    CHECK(np.ratio_exponent == 1);
    CHECK(np.nesting_ratio == 3);
    CHECK(count_box_points(np.fine) == 27);
    CHECK(count_box_points(np.coarse) == 9);

    // coarse points all belong to the fine lattice
    const long long p = 3;
    std::vector<long long> x(4, 0);
    while (true) {
        if (np.coarse.contains(x)) CHECK(np.fine.contains(x));
        int i = 0;
        while (i < 4 && x[static_cast<std::size_t>(i)] == p - 1) {
            x[static_cast<std::size_t>(i)] = 0;
            ++i;
        }
        if (i == 4) break;
        ++x[static_cast<std::size_t>(i)];
    }

    // boundary splits are legal: an empty fine check matrix gives Z^n,
    // the full matrix gives a self-nested pair with ratio 1
    const lda::NestedPair all = lda::nested_pair(small_check_matrix(), 2);
    CHECK(all.ratio_exponent == 0);
    CHECK(all.nesting_ratio == 1);
    CHECK_THROWS(lda::nested_pair(small_check_matrix(), -1));
    CHECK_THROWS(lda::nested_pair(small_check_matrix(), 3));
}

TEST_CASE("skeleton randomization") {
    const SkeletonGraph g = example_skeleton();
    const FpMatrix a = lda::randomize_skeleton(g, 11, 7);
    const FpMatrix b = lda::randomize_skeleton(g, 11, 7);
    CHECK(a == b);
    const FpMatrix c = lda::randomize_skeleton(g, 11, 8);
    CHECK_FALSE(a == c);

    // entries live only on the skeleton support
    const auto adj = g.variable_adjacency();
    for (int r = 0; r < 4; ++r)
        for (int col = 0; col < 6; ++col) {
            const auto& row = g.checks[static_cast<std::size_t>(r)];
            const bool on = std::find(row.begin(), row.end(), col) != row.end();
            if (!on) CHECK(a.at(r, col) == 0);
            CHECK(a.at(r, col) < 11);
        }

    // a fixed edge value is uniform over F_p across seeds
    const int trials = 2000;
    std::vector<int> counts(5, 0);
    for (int t = 0; t < trials; ++t) {
        const FpMatrix m =
            lda::randomize_skeleton(g, 5, 40000 + static_cast<std::uint64_t>(t));
        ++counts[m.at(0, 0)];
    }
    const double se = std::sqrt(0.2 * 0.8 / trials);
    for (int v = 0; v < 5; ++v)
        CHECK(std::abs(counts[static_cast<std::size_t>(v)] /
                           static_cast<double>(trials) -
                       0.2) <= 3 * se);
}

TEST_CASE("support image of check combinations") {
    const SkeletonGraph g = example_skeleton();
    const std::vector<std::uint32_t> zero = {0, 0, 0, 0};
    CHECK(lda::support_image(g, zero).empty());
    const std::vector<std::uint32_t> e0 = {1, 0, 0, 0};
    CHECK(lda::support_image(g, e0) == std::vector<int>{0, 1, 4});
    const std::vector<std::uint32_t> e01 = {1, 2, 0, 0};
    CHECK(lda::support_image(g, e01) == std::vector<int>{0, 1, 3, 4, 5});
}

TEST_CASE("syndrome distribution test") {
    const SkeletonGraph g = example_skeleton();
    const std::vector<std::uint32_t> e0 = {1, 0, 0, 0};
    const auto rep = lda::syndrome_distribution_test(g, 5, e0, 4000, 21);
    CHECK(rep.trials == 4000);
    CHECK(rep.support == std::vector<int>{0, 1, 4});
    CHECK(rep.off_support_all_zero);
    CHECK(rep.marginal_pvalues.size() == 3);
    CHECK(rep.passes(0.01));

    // a two-row combination spreads over the union support
    const std::vector<std::uint32_t> u2 = {1, 3, 0, 0};
    const auto rep2 = lda::syndrome_distribution_test(g, 5, u2, 4000, 22);
    CHECK(rep2.support == std::vector<int>{0, 1, 3, 4, 5});
    CHECK(rep2.off_support_all_zero);
    CHECK(rep2.passes(0.01));
}

TEST_CASE("full-rank monte carlo") {
    const SkeletonGraph g = example_skeleton();
    const auto r5 = lda::fullrank_monte_carlo(g, 5, 2000, 31);
    const auto r5b = lda::fullrank_monte_carlo(g, 5, 2000, 31);
    CHECK(r5.trials == 2000);
    CHECK(r5.frequency == r5b.frequency);  // deterministic
    CHECK(r5.frequency ==
          doctest::Approx(static_cast<double>(r5.failures) / r5.trials));
    CHECK(r5.ci.lo <= r5.frequency);
    CHECK(r5.ci.hi >= r5.frequency);

    // rank deficiency becomes rarer as p grows
    const auto r101 = lda::fullrank_monte_carlo(g, 101, 2000, 31);
    CHECK(r101.failures <= r5.failures);
}

TEST_CASE("bundle round trip") {
    const FpMatrix h = lda::randomize_skeleton(example_skeleton(), 11, 501);
    const ConstructionALattice l(h);
    const std::string path = "/tmp/lda_test_bundle.json";
    lda::save_bundle(l, "graphs/example.txt", path);
    std::string ref;
    const ConstructionALattice back = lda::load_bundle(path, &ref);
    CHECK(ref == "graphs/example.txt");
    CHECK(back.check_matrix() == l.check_matrix());
    CHECK(back.rank() == l.rank());
    CHECK(back.volume_exponent() == l.volume_exponent());
    std::remove(path.c_str());
}
