#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

#include "lda/fp.hpp"
#include "lda/rng.hpp"

using lda::FpMatrix;

namespace {

// Independent row-reduction oracle, written naively on purpose: scan for a
// pivot column-by-column, eliminate below, count pivots.
int naive_rank(std::vector<std::vector<std::uint32_t>> m, std::uint32_t p) {
    const std::size_t rows = m.size();
    if (rows == 0) return 0;
    const std::size_t cols = m[0].size();
    std::size_t pivot_row = 0;
    int rank = 0;
    for (std::size_t c = 0; c < cols && pivot_row < rows; ++c) {
        std::size_t sel = rows;
        for (std::size_t r = pivot_row; r < rows; ++r)
            if (m[r][c] != 0) {
                sel = r;
                break;
            }
        if (sel == rows) continue;
        std::swap(m[pivot_row], m[sel]);
        const std::uint64_t inv = lda::fp_inverse(m[pivot_row][c], p);
        for (std::size_t r = pivot_row + 1; r < rows; ++r) {
            if (m[r][c] == 0) continue;
            const std::uint64_t f = m[r][c] * inv % p;
            for (std::size_t cc = 0; cc < cols; ++cc)
                m[r][cc] = static_cast<std::uint32_t>(
                    (m[r][cc] + (p - f * m[pivot_row][cc] % p)) % p);
        }
        ++pivot_row;
        ++rank;
    }
    return rank;
}

FpMatrix from_rows(const std::vector<std::vector<std::uint32_t>>& rows,
                   std::uint32_t p) {
    FpMatrix m(static_cast<int>(rows.size()),
               static_cast<int>(rows.empty() ? 0 : rows[0].size()), p);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            m.set(static_cast<int>(r), static_cast<int>(c), rows[r][c]);
    return m;
}

// the worked 4x6 example skeleton: check i touches these variables
const std::vector<std::vector<int>> kExampleChecks = {
    {0, 1, 4}, {1, 3, 5}, {2, 3, 4}, {0, 2, 5}};

FpMatrix example_skeleton_ones(std::uint32_t p) {
    FpMatrix m(4, 6, p);
    for (int i = 0; i < 4; ++i)
        for (int v : kExampleChecks[static_cast<std::size_t>(i)])
            m.set(i, v, 1);
    return m;
}

}  // namespace

TEST_CASE("primality by trial division") {
    CHECK(lda::is_prime(2));
    CHECK(lda::is_prime(3));
    CHECK_FALSE(lda::is_prime(1));
    CHECK_FALSE(lda::is_prime(0));
    CHECK_FALSE(lda::is_prime(9));
    CHECK(lda::is_prime(2147483647ULL));  // 2^31 - 1
    CHECK_FALSE(lda::is_prime(2147483647ULL * 2147483647ULL));
}

TEST_CASE("smallest prime at or above a real bound") {
    CHECK(lda::smallest_prime_geq(2.0) == 2);
    CHECK(lda::smallest_prime_geq(1.0) == 2);
    CHECK(lda::smallest_prime_geq(8.0) == 11);

    // n = 6, lambda = 1.2: 6^1.2 = 8.585...
    const double x = std::pow(6.0, 1.2);
    CHECK(lda::smallest_prime_geq(x) == 11);

    // no prime was skipped: sweep the integers in [x, result)
    const std::uint32_t r = lda::smallest_prime_geq(x);
    for (std::uint64_t k = static_cast<std::uint64_t>(std::ceil(x)); k < r; ++k)
        CHECK_FALSE(lda::is_prime(k));

    CHECK_THROWS_AS(lda::smallest_prime_geq(1e12), std::overflow_error);
}

TEST_CASE("prime context picks the smallest admissible modulus") {
    const lda::PrimeContext ctx = lda::PrimeContext::make(6, 1.2);
    CHECK(ctx.p == 11);
    CHECK(ctx.n == 6);
    CHECK(static_cast<double>(ctx.p) >= std::pow(6.0, 1.2));
}

TEST_CASE("modular inverse") {
    for (std::uint32_t p : {2u, 3u, 5u, 11u, 101u})
        for (std::uint32_t a = 1; a < p; ++a)
            CHECK(static_cast<std::uint64_t>(a) * lda::fp_inverse(a, p) % p == 1);
}

TEST_CASE("rank on identity and zero matrices") {
    CHECK(FpMatrix::identity(4, 5).rank() == 4);
    CHECK(FpMatrix(3, 7, 7).rank() == 0);
}

TEST_CASE("rank equals the naive elimination oracle on random matrices") {
    lda::Rng rng(71);
    for (int trial = 0; trial < 60; ++trial) {
        const std::uint32_t p = trial % 2 == 0 ? 5 : 7;
        const int rows = 1 + static_cast<int>(rng.below(6));
        const int cols = 1 + static_cast<int>(rng.below(6));
        std::vector<std::vector<std::uint32_t>> raw(
            static_cast<std::size_t>(rows),
            std::vector<std::uint32_t>(static_cast<std::size_t>(cols), 0));
        for (auto& row : raw)
            for (auto& x : row) x = static_cast<std::uint32_t>(rng.below(p));
        const FpMatrix m = from_rows(raw, p);
        CHECK(m.rank() == naive_rank(raw, p));
        CHECK(m.rank() == m.transposed().rank());
    }
}

TEST_CASE("rank of the worked example skeleton with unit coefficients") {
    const FpMatrix m = example_skeleton_ones(5);
    std::vector<std::vector<std::uint32_t>> raw(4,
                                                std::vector<std::uint32_t>(6, 0));
    for (int i = 0; i < 4; ++i)
        for (int v : kExampleChecks[static_cast<std::size_t>(i)])
            raw[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)] = 1;
    CHECK(m.rank() == naive_rank(raw, 5));
}

TEST_CASE("nullspace of identity and zero-row matrices") {
    CHECK(FpMatrix::identity(3, 3).nullspace_basis().rows() == 0);

    const FpMatrix zero_row(1, 3, 5);
    const FpMatrix basis = zero_row.nullspace_basis();
    CHECK(basis.rows() == 3);
    CHECK(basis.rank() == 3);
}

TEST_CASE("nullspace basis matches the exhaustive kernel over F_7^5") {
    // fixed full-rank 2x5 check matrix
    const FpMatrix m = from_rows({{1, 2, 0, 6, 3}, {0, 5, 1, 1, 4}}, 7);
    REQUIRE(m.rank() == 2);
    const FpMatrix basis = m.nullspace_basis();
    CHECK(basis.rows() == 3);

    // every basis row is annihilated
    for (int r = 0; r < basis.rows(); ++r) {
        std::vector<std::uint32_t> v(5);
        for (int c = 0; c < 5; ++c) v[static_cast<std::size_t>(c)] = basis.at(r, c);
        for (std::uint32_t s : m.apply(v)) CHECK(s == 0);
    }

    // exhaustive: count kernel vectors of the matrix and vectors spanned by
    // the basis; both must equal 7^3
    std::int64_t kernel = 0;
    std::vector<std::uint32_t> v(5, 0);
    for (int a0 = 0; a0 < 7; ++a0)
        for (int a1 = 0; a1 < 7; ++a1)
            for (int a2 = 0; a2 < 7; ++a2)
                for (int a3 = 0; a3 < 7; ++a3)
                    for (int a4 = 0; a4 < 7; ++a4) {
                        v = {static_cast<std::uint32_t>(a0),
                             static_cast<std::uint32_t>(a1),
                             static_cast<std::uint32_t>(a2),
                             static_cast<std::uint32_t>(a3),
                             static_cast<std::uint32_t>(a4)};
                        bool in_kernel = true;
                        for (std::uint32_t s : m.apply(v))
                            if (s != 0) in_kernel = false;
                        if (in_kernel) ++kernel;
                    }
    CHECK(kernel == 343);
}

TEST_CASE("dual code identities") {
    const std::uint32_t p = 5;

    SUBCASE("full space and zero code swap") {
        lda::LinearCode full;
        full.p = p;
        full.n = 4;
        full.dimension = 4;
        full.basis = FpMatrix::identity(4, p);
        full.check = FpMatrix(0, 4, p);
        const lda::LinearCode dual = lda::dual_code(full);
        CHECK(dual.dimension == 0);
        const lda::LinearCode back = lda::dual_code(dual);
        CHECK(back.dimension == 4);
    }

    SUBCASE("random k=2 code in F_5^5: exhaustive orthogonality") {
        const FpMatrix gen = from_rows({{1, 0, 2, 3, 1}, {0, 1, 4, 0, 2}}, p);
        lda::LinearCode c;
        c.p = p;
        c.n = 5;
        c.dimension = 2;
        c.basis = gen;
        c.check = gen.nullspace_basis();  // placeholder check rows
        const lda::LinearCode dual = lda::dual_code(c);
        CHECK(c.dimension + dual.dimension == 5);

        // all p^2 x p^3 inner products vanish
        for (int m1 = 0; m1 < 25; ++m1) {
            std::vector<std::uint32_t> cw(5, 0);
            const std::uint32_t f0 = static_cast<std::uint32_t>(m1 % 5);
            const std::uint32_t f1 = static_cast<std::uint32_t>(m1 / 5);
            for (int j = 0; j < 5; ++j)
                cw[static_cast<std::size_t>(j)] =
                    (f0 * gen.at(0, j) + f1 * gen.at(1, j)) % p;
            for (int m2 = 0; m2 < 125; ++m2) {
                std::vector<std::uint32_t> dw(5, 0);
                int t = m2;
                for (int r = 0; r < dual.basis.rows(); ++r) {
                    const std::uint32_t f = static_cast<std::uint32_t>(t % 5);
                    t /= 5;
                    for (int j = 0; j < 5; ++j)
                        dw[static_cast<std::size_t>(j)] =
                            (dw[static_cast<std::size_t>(j)] +
                             f * dual.basis.at(r, j)) %
                            p;
                }
                std::uint64_t ip = 0;
                for (int j = 0; j < 5; ++j)
                    ip += static_cast<std::uint64_t>(
                              cw[static_cast<std::size_t>(j)]) *
                          dw[static_cast<std::size_t>(j)];
                CHECK(ip % p == 0);
            }
        }

        // involution: dual of dual has the same row space as the original
        const lda::LinearCode back = lda::dual_code(dual);
        CHECK(back.dimension == 2);
        for (int r = 0; r < back.basis.rows(); ++r) {
            std::vector<std::uint32_t> w(5);
            for (int j = 0; j < 5; ++j)
                w[static_cast<std::size_t>(j)] = back.basis.at(r, j);
            CHECK(lda::codeword_in(c, w));
        }
    }
}

TEST_CASE("code built from a check matrix") {
    const FpMatrix h = from_rows({{1, 1, 0, 0}, {0, 1, 2, 1}}, 3);
    const lda::LinearCode c = lda::code_from_check(h);
    CHECK(c.dimension == 2);
    for (int r = 0; r < c.basis.rows(); ++r) {
        std::vector<std::uint32_t> v(4);
        for (int j = 0; j < 4; ++j) v[static_cast<std::size_t>(j)] = c.basis.at(r, j);
        for (std::uint32_t s : h.apply(v)) CHECK(s == 0);
    }
}

TEST_CASE("matrix text round-trip") {
    lda::Rng rng(5);
    FpMatrix m(3, 5, 11);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 5; ++c) m.set(r, c, rng.below(11));
    std::stringstream ss;
    m.save(ss);
    const FpMatrix back = FpMatrix::load(ss);
    CHECK(back == m);
}

TEST_CASE("entries are always reduced to [0, p)") {
    FpMatrix m(1, 1, 7);
    m.set(0, 0, 23);
    CHECK(m.at(0, 0) == 2);
}
