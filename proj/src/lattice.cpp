#include "lda/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "lda/rng.hpp"

namespace lda {

FpMatrix randomize_skeleton(const SkeletonGraph& g, std::uint32_t p,
                            std::uint64_t seed) {
    g.validate();
    FpMatrix h(g.m, g.n, p);
    Rng rng(seed);
    for (int i = 0; i < g.m; ++i)
        for (int v : g.checks[i]) h.set(i, v, rng.below(p));
    return h;
}

std::vector<int> support_image(const SkeletonGraph& g,
                               std::span<const std::uint32_t> u) {
    if (static_cast<int>(u.size()) != g.m)
        throw std::invalid_argument("support_image: |u| != number of checks");
    std::vector<int> rows;
    for (int i = 0; i < g.m; ++i)
        if (u[i] != 0) rows.push_back(i);
    return neighborhood(g, rows, Side::checks);
}

ConstructionALattice::ConstructionALattice(FpMatrix h)
    : p_(h.modulus()), n_(h.cols()), h_(std::move(h)) {
    if (n_ <= 0)
        throw std::invalid_argument("ConstructionALattice: empty dimension");
    code_ = code_from_check(h_);
    rank_ = n_ - code_.dimension;
}

ConstructionALattice ConstructionALattice::integer_lattice(int n,
                                                           std::uint32_t p) {
    return ConstructionALattice(FpMatrix(0, n, p));
}

ConstructionALattice ConstructionALattice::scaled_integer_lattice(
    int n, std::uint32_t p) {
    return ConstructionALattice(FpMatrix::identity(n, p));
}

double ConstructionALattice::log_volume() const {
    return volume_exponent() * std::log(static_cast<double>(p_));
}

double ConstructionALattice::volume() const {
    return std::pow(static_cast<double>(p_), volume_exponent());
}

bool ConstructionALattice::contains(std::span<const long long> x) const {
    if (static_cast<int>(x.size()) != n_)
        throw std::invalid_argument("ConstructionALattice::contains: bad size");
    std::vector<std::uint32_t> residues(n_);
    const long long p = p_;
    for (int j = 0; j < n_; ++j)
        residues[j] = static_cast<std::uint32_t>(((x[j] % p) + p) % p);
    if (h_.rows() == 0) return true;
    for (std::uint32_t s : h_.apply(residues))
        if (s != 0) return false;
    return true;
}

ConstructionALattice scaled_dual_lattice(const ConstructionALattice& l) {
    // generator of the primal code is a parity check for the dual code
    if (l.code_basis().rows() == 0)
        return ConstructionALattice(FpMatrix(0, l.dimension(), l.modulus()));
    return ConstructionALattice(l.code_basis());
}

// --- rationals -------------------------------------------------------------

namespace {

long long checked_ll(__int128 v, const char* what) {
    if (v > INT64_MAX || v < INT64_MIN)
        throw std::overflow_error(std::string("rational overflow in ") + what);
    return static_cast<long long>(v);
}

}  // namespace

Rational::Rational(long long n) : num(n), den(1) {}

Rational::Rational(long long n, long long d) : num(n), den(d) {
    if (d == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den < 0) { num = -num; den = -den; }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
}

Rational operator+(Rational a, Rational b) {
    const __int128 n = static_cast<__int128>(a.num) * b.den +
                       static_cast<__int128>(b.num) * a.den;
    const __int128 d = static_cast<__int128>(a.den) * b.den;
    return Rational(checked_ll(n, "+"), checked_ll(d, "+"));
}

Rational operator-(Rational a, Rational b) {
    return a + Rational(-b.num, b.den);
}

Rational operator*(Rational a, Rational b) {
    // cross-reduce first to keep intermediates small
    const long long g1 = std::gcd(a.num < 0 ? -a.num : a.num, b.den);
    const long long g2 = std::gcd(b.num < 0 ? -b.num : b.num, a.den);
    const __int128 n = static_cast<__int128>(a.num / g1) * (b.num / g2);
    const __int128 d = static_cast<__int128>(a.den / g2) * (b.den / g1);
    return Rational(checked_ll(n, "*"), checked_ll(d, "*"));
}

Rational operator/(Rational a, Rational b) {
    if (b.num == 0) throw std::domain_error("Rational: division by zero");
    return a * Rational(b.den, b.num);
}

RationalMatrix::RationalMatrix(int rows, int cols)
    : rows_(rows), cols_(cols),
      a_(static_cast<std::size_t>(rows) * cols) {}

RationalMatrix RationalMatrix::transposed() const {
    RationalMatrix t(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
    return t;
}

RationalMatrix RationalMatrix::inverse() const {
    if (rows_ != cols_)
        throw std::invalid_argument("RationalMatrix::inverse: not square");
    const int n = rows_;
    RationalMatrix m = *this;
    RationalMatrix inv(n, n);
    for (int i = 0; i < n; ++i) inv.at(i, i) = Rational(1);
    for (int col = 0; col < n; ++col) {
        int pr = -1;
        for (int r = col; r < n; ++r)
            if (m.at(r, col).num != 0) { pr = r; break; }
        if (pr < 0) throw std::domain_error("RationalMatrix::inverse: singular");
        if (pr != col) {
            for (int c = 0; c < n; ++c) {
                std::swap(m.at(col, c), m.at(pr, c));
                std::swap(inv.at(col, c), inv.at(pr, c));
            }
        }
        const Rational piv = m.at(col, col);
        for (int c = 0; c < n; ++c) {
            m.at(col, c) = m.at(col, c) / piv;
            inv.at(col, c) = inv.at(col, c) / piv;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const Rational f = m.at(r, col);
            if (f.num == 0) continue;
            for (int c = 0; c < n; ++c) {
                m.at(r, c) = m.at(r, c) - f * m.at(col, c);
                inv.at(r, c) = inv.at(r, c) - f * inv.at(col, c);
            }
        }
    }
    return inv;
}

Rational RationalMatrix::determinant() const {
    if (rows_ != cols_)
        throw std::invalid_argument("RationalMatrix::determinant: not square");
    const int n = rows_;
    RationalMatrix m = *this;
    Rational det(1);
    for (int col = 0; col < n; ++col) {
        int pr = -1;
        for (int r = col; r < n; ++r)
            if (m.at(r, col).num != 0) { pr = r; break; }
        if (pr < 0) return Rational(0);
        if (pr != col) {
            for (int c = 0; c < n; ++c) std::swap(m.at(col, c), m.at(pr, c));
            det = det * Rational(-1);
        }
        det = det * m.at(col, col);
        const Rational piv = m.at(col, col);
        for (int r = col + 1; r < n; ++r) {
            const Rational f = m.at(r, col) / piv;
            if (f.num == 0) continue;
            for (int c = col; c < n; ++c)
                m.at(r, c) = m.at(r, c) - f * m.at(col, c);
        }
    }
    return det;
}

namespace {

// Hermite reduction of a stack of generating rows to a square upper
// triangular basis.  Plain integer row operations with Euclidean pivoting;
// entries stay small at the scales this is used for (|entry| <= p, n <= 16).
IntMatrix hermite_rows(IntMatrix m, int n) {
    const int rows = m.rows;
    for (int col = 0; col < n; ++col) {
        while (true) {
            // pick the row (>= col) with the smallest nonzero |entry| in col
            int best = -1;
            long long best_abs = 0;
            for (int r = col; r < rows; ++r) {
                const long long v = m.at(r, col) < 0 ? -m.at(r, col) : m.at(r, col);
                if (v != 0 && (best < 0 || v < best_abs)) { best = r; best_abs = v; }
            }
            if (best < 0)
                throw std::domain_error("hermite_rows: rank-deficient input");
            if (best != col)
                for (int c = 0; c < n; ++c) std::swap(m.at(col, c), m.at(best, c));
            bool clean = true;
            for (int r = col + 1; r < rows; ++r) {
                if (m.at(r, col) == 0) continue;
                // round-to-nearest quotient keeps coefficients small
                const long long q = std::llround(
                    static_cast<double>(m.at(r, col)) / m.at(col, col));
                for (int c = 0; c < n; ++c)
                    m.at(r, c) -= q * m.at(col, c);
                if (m.at(r, col) != 0) clean = false;
            }
            if (clean) break;
        }
        if (m.at(col, col) < 0)
            for (int c = 0; c < n; ++c) m.at(col, c) = -m.at(col, c);
    }
    IntMatrix out(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) out.at(r, c) = m.at(r, c);
    // canonical form: entries above each pivot reduced into [0, pivot)
    for (int col = 0; col < n; ++col) {
        const long long d = out.at(col, col);
        for (int r = 0; r < col; ++r) {
            long long q = out.at(r, col) / d;
            if (out.at(r, col) % d < 0) --q;  // floor division
            if (q != 0)
                for (int c = 0; c < n; ++c) out.at(r, c) -= q * out.at(col, c);
        }
    }
    return out;
}

}  // namespace

IntMatrix generator_rows(const ConstructionALattice& l) {
    const int n = l.dimension();
    const int k = l.code_dimension();
    IntMatrix stack(k + n, n);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < n; ++c)
            stack.at(r, c) = l.code_basis().at(r, c);
    for (int i = 0; i < n; ++i) stack.at(k + i, i) = l.modulus();
    IntMatrix basis = hermite_rows(std::move(stack), n);
    // diagonal product must equal vol = p^(n-k)
    __int128 det = 1;
    for (int i = 0; i < n; ++i) det *= basis.at(i, i);
    __int128 expect = 1;
    for (int i = 0; i < l.volume_exponent(); ++i) expect *= l.modulus();
    if (det != expect)
        throw std::logic_error("generator_rows: determinant != p^(n-k)");
    return basis;
}

RationalMatrix exact_dual_basis(const ConstructionALattice& l) {
    const IntMatrix a = generator_rows(l);
    RationalMatrix ra(a.rows, a.cols);
    for (int r = 0; r < a.rows; ++r)
        for (int c = 0; c < a.cols; ++c) ra.at(r, c) = Rational(a.at(r, c));
    return ra.inverse().transposed();
}

NestedPair nested_pair(const FpMatrix& h_coarse, int k_f) {
    if (k_f < 0 || k_f > h_coarse.rows())
        throw std::invalid_argument("nested_pair: k_f out of range");
    FpMatrix h_fine(k_f, h_coarse.cols(), h_coarse.modulus());
    for (int r = 0; r < k_f; ++r)
        for (int c = 0; c < h_coarse.cols(); ++c)
            h_fine.set(r, c, h_coarse.at(r, c));
    NestedPair pair{ConstructionALattice(std::move(h_fine)),
                    ConstructionALattice(h_coarse), 0, 0};
    pair.ratio_exponent = pair.coarse.rank() - pair.fine.rank();
    if (pair.ratio_exponent < 0)
        throw std::logic_error("nested_pair: coarse rank below fine rank");
    long long ratio = 1;
    for (int i = 0; i < pair.ratio_exponent; ++i) {
        if (ratio > (1LL << 60) / h_coarse.modulus())
            throw std::overflow_error("nested_pair: nesting ratio overflows");
        ratio *= h_coarse.modulus();
    }
    pair.nesting_ratio = ratio;
    return pair;
}

FullRankReport fullrank_monte_carlo(const SkeletonGraph& g, std::uint32_t p,
                                    int trials, std::uint64_t seed) {
    if (trials <= 0)
        throw std::invalid_argument("fullrank_monte_carlo: trials <= 0");
    FullRankReport rep;
    rep.trials = trials;
    for (int t = 0; t < trials; ++t) {
        const FpMatrix h = randomize_skeleton(g, p, derive_seed(seed, t));
        if (h.rank() < h.rows()) ++rep.failures;
    }
    rep.frequency = static_cast<double>(rep.failures) / trials;
    rep.ci = wilson_interval(rep.failures, trials);
    return rep;
}

bool SyndromeTestReport::passes(double significance) const {
    if (!off_support_all_zero) return false;
    for (double pv : marginal_pvalues)
        if (pv < significance) return false;
    return pair_pvalue >= significance;
}

SyndromeTestReport syndrome_distribution_test(const SkeletonGraph& g,
                                              std::uint32_t p,
                                              std::span<const std::uint32_t> u,
                                              int trials, std::uint64_t seed) {
    if (trials <= 0)
        throw std::invalid_argument("syndrome_distribution_test: trials <= 0");
    SyndromeTestReport rep;
    rep.trials = trials;
    rep.support = support_image(g, u);
    const int s = static_cast<int>(rep.support.size());
    std::vector<char> in_support(g.n, 0);
    for (int j : rep.support) in_support[j] = 1;

    // counts[c][v]: occurrences of value v at the c-th support coordinate
    std::vector<std::vector<std::int64_t>> counts(
        s, std::vector<std::int64_t>(p, 0));
    // joint counts on one deterministic random support pair
    int pair_a = -1, pair_b = -1;
    std::vector<std::int64_t> joint;
    if (s >= 2) {
        Rng pick(derive_seed(seed, 0x70A1Au));
        pair_a = static_cast<int>(pick.below(s));
        pair_b = static_cast<int>(pick.below(s - 1));
        if (pair_b >= pair_a) ++pair_b;
        joint.assign(static_cast<std::size_t>(p) * p, 0);
    }

    std::vector<std::uint32_t> uu(u.begin(), u.end());
    for (int t = 0; t < trials; ++t) {
        const FpMatrix h = randomize_skeleton(g, p, derive_seed(seed, t));
        const auto y = h.transposed().apply(uu);
        for (int j = 0; j < g.n; ++j) {
            if (!in_support[j] && y[j] != 0) rep.off_support_all_zero = false;
        }
        for (int c = 0; c < s; ++c) ++counts[c][y[rep.support[c]]];
        if (pair_a >= 0)
            ++joint[static_cast<std::size_t>(y[rep.support[pair_a]]) * p +
                    y[rep.support[pair_b]]];
    }

    const double expected = static_cast<double>(trials) / p;
    for (int c = 0; c < s; ++c) {
        double stat = 0.0;
        for (std::uint32_t v = 0; v < p; ++v) {
            const double d = counts[c][v] - expected;
            stat += d * d / expected;
        }
        rep.marginal_pvalues.push_back(
            chi_square_pvalue(stat, static_cast<int>(p) - 1));
    }
    if (pair_a >= 0) {
        const double ej = static_cast<double>(trials) / (static_cast<double>(p) * p);
        double stat = 0.0;
        for (std::size_t i = 0; i < joint.size(); ++i) {
            const double d = joint[i] - ej;
            stat += d * d / ej;
        }
        rep.pair_pvalue =
            chi_square_pvalue(stat, static_cast<int>(p) * static_cast<int>(p) - 1);
    }
    return rep;
}

// --- bundle ----------------------------------------------------------------

void save_bundle(const ConstructionALattice& l, const std::string& skeleton_ref,
                 const std::string& path) {
    nlohmann::ordered_json j;
    j["schema"] = "lda.bundle/1";
    j["n"] = l.dimension();
    j["p"] = l.modulus();
    j["skeleton_ref"] = skeleton_ref;
    nlohmann::ordered_json triplets = nlohmann::ordered_json::array();
    const FpMatrix& h = l.check_matrix();
    for (int r = 0; r < h.rows(); ++r)
        for (int c = 0; c < h.cols(); ++c)
            if (h.at(r, c) != 0)
                triplets.push_back({r, c, h.at(r, c)});
    j["H"] = std::move(triplets);
    j["rows"] = h.rows();
    j["rank"] = l.rank();
    j["volume_exponent"] = l.volume_exponent();
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << j.dump(2) << '\n';
}

ConstructionALattice load_bundle(const std::string& path,
                                 std::string* skeleton_ref) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    nlohmann::json j;
    f >> j;
    if (j.value("schema", "") != "lda.bundle/1")
        throw std::runtime_error("load_bundle: unknown schema in " + path);
    const int n = j.at("n").get<int>();
    const std::uint32_t p = j.at("p").get<std::uint32_t>();
    const int rows = j.at("rows").get<int>();
    FpMatrix h(rows, n, p);
    for (const auto& t : j.at("H")) {
        if (!t.is_array() || t.size() != 3)
            throw std::runtime_error("load_bundle: malformed triplet");
        h.set(t[0].get<int>(), t[1].get<int>(), t[2].get<std::uint64_t>());
    }
    ConstructionALattice l(std::move(h));
    if (l.rank() != j.at("rank").get<int>() ||
        l.volume_exponent() != j.at("volume_exponent").get<int>())
        throw std::runtime_error("load_bundle: stored rank metadata mismatch");
    if (skeleton_ref) *skeleton_ref = j.value("skeleton_ref", "");
    return l;
}

}  // namespace lda
