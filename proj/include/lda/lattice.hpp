#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lda/fp.hpp"
#include "lda/graph.hpp"
#include "lda/stats.hpp"

namespace lda {

// Replace each 1-entry of the skeleton by an i.i.d. uniform element of F_p
// (zero included, so the realized support may be a strict subset of the
// skeleton's).  Entries are drawn in row-major edge order, so the result is
// a pure function of (graph, p, seed).
FpMatrix randomize_skeleton(const SkeletonGraph& g, std::uint32_t p,
                            std::uint64_t seed);

// Coordinates that can be touched by the combination u of check rows:
// union of skeleton row supports over the support of u.  The syndrome
// H^T u is supported inside this set for every realization of H.
std::vector<int> support_image(const SkeletonGraph& g,
                               std::span<const std::uint32_t> u);

// Integer lattice obtained by lifting the nullspace code of H and adding
// p Z^n:  L = { x in Z^n : H x = 0 (mod p) }.
class ConstructionALattice {
public:
    explicit ConstructionALattice(FpMatrix h);

    // Z^n presented with modulus p (empty check matrix).
    static ConstructionALattice integer_lattice(int n, std::uint32_t p);
    // p Z^n (identity check matrix).
    static ConstructionALattice scaled_integer_lattice(int n, std::uint32_t p);

    int dimension() const { return n_; }
    std::uint32_t modulus() const { return p_; }
    const FpMatrix& check_matrix() const { return h_; }
    int rank() const { return rank_; }
    bool full_rank() const { return rank_ == h_.rows(); }

    // dimension of the underlying code; the lattice has p^k cosets of pZ^n
    int code_dimension() const { return n_ - rank_; }
    // vol = p^(n-k) = p^rank
    int volume_exponent() const { return rank_; }
    double log_volume() const;
    double volume() const;

    const FpMatrix& code_basis() const { return code_.basis; }
    const LinearCode& code() const { return code_; }

    bool contains(std::span<const long long> x) const;

private:
    std::uint32_t p_;
    int n_;
    FpMatrix h_;
    int rank_;
    LinearCode code_;
};

// The lattice p L* (an integer lattice): Construction A applied to the
// dual code.  Its check matrix is the code basis of L.
ConstructionALattice scaled_dual_lattice(const ConstructionALattice& l);

// --- exact integer / rational linear algebra (desk scale) ----------------

struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n);  // NOLINT(google-explicit-constructor)
    Rational(long long n, long long d);

    bool is_integer() const { return den == 1; }
    double value() const { return static_cast<double>(num) / den; }
    bool operator==(const Rational&) const = default;
};

Rational operator+(Rational a, Rational b);
Rational operator-(Rational a, Rational b);
Rational operator*(Rational a, Rational b);
Rational operator/(Rational a, Rational b);

class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(int rows, int cols);
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Rational& at(int r, int c) { return a_[static_cast<std::size_t>(r) * cols_ + c]; }
    const Rational& at(int r, int c) const {
        return a_[static_cast<std::size_t>(r) * cols_ + c];
    }
    RationalMatrix transposed() const;
    RationalMatrix inverse() const;  // Gauss-Jordan; throws if singular
    Rational determinant() const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<Rational> a_;
};

struct IntMatrix {
    int rows = 0, cols = 0;
    std::vector<long long> a;
    IntMatrix() = default;
    IntMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0) {}
    long long& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    long long at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

// Upper-triangular Hermite-form generator of the stacked rows (lifted code
// basis over p-scaled identity).  Rows generate L as an integer row
// lattice; the diagonal product equals p^(n-k).
IntMatrix generator_rows(const ConstructionALattice& l);

// Rows generate the dual lattice L*: returns (A^{-1})^T for A the
// generator of L, computed exactly over the rationals.
RationalMatrix exact_dual_basis(const ConstructionALattice& l);

// --- nested pairs ---------------------------------------------------------

struct NestedPair {
    ConstructionALattice fine;    // from the first k_f rows of H
    ConstructionALattice coarse;  // from all rows
    int ratio_exponent = 0;       // |fine/coarse| = p^ratio_exponent
    long long nesting_ratio = 0;
};

NestedPair nested_pair(const FpMatrix& h_coarse, int k_f);

// --- ensemble diagnostics --------------------------------------------------

struct FullRankReport {
    int trials = 0;
    int failures = 0;
    double frequency = 0.0;
    Interval ci;
};

// Frequency of rank-deficient realizations of the randomized skeleton.
FullRankReport fullrank_monte_carlo(const SkeletonGraph& g, std::uint32_t p,
                                    int trials, std::uint64_t seed);

struct SyndromeTestReport {
    int trials = 0;
    std::vector<int> support;  // support image of u
    bool off_support_all_zero = true;
    std::vector<double> marginal_pvalues;  // uniformity per support coordinate
    double pair_pvalue = 1.0;  // joint uniformity on one random support pair
    bool passes(double significance) const;
};

// Draws `trials` independent realizations of H and checks the distribution
// of the syndrome combination H^T u: coordinates outside the support image
// must be identically zero; inside they must be i.i.d. uniform.
SyndromeTestReport syndrome_distribution_test(const SkeletonGraph& g,
                                              std::uint32_t p,
                                              std::span<const std::uint32_t> u,
                                              int trials, std::uint64_t seed);

// --- lattice bundle (JSON) -------------------------------------------------

// Writes/reads {n, p, skeleton_ref, H (triplets), rank, volume_exponent}.
void save_bundle(const ConstructionALattice& l, const std::string& skeleton_ref,
                 const std::string& path);
ConstructionALattice load_bundle(const std::string& path,
                                 std::string* skeleton_ref = nullptr);

}  // namespace lda
