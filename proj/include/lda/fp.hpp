#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace lda {

// Largest admissible prime modulus.  Keeping p below 2^31 guarantees that a
// product of two residues fits in a 64-bit signed or unsigned integer, so
// all field arithmetic is done in plain uint64_t with one reduction.
inline constexpr std::uint64_t kMaxModulus = (1ULL << 31);

bool is_prime(std::uint64_t m);

// Smallest prime >= x.  Throws std::overflow_error if that prime would not
// be representable below kMaxModulus.
std::uint32_t smallest_prime_geq(double x);

// Dimension / prime pairing p ~ n^lambda used throughout the construction.
struct PrimeContext {
    int n = 0;
    double lambda = 0.0;
    std::uint32_t p = 0;

    static PrimeContext make(int n, double lambda);
};

// Modular inverse for prime modulus (Fermat).
std::uint32_t fp_inverse(std::uint32_t a, std::uint32_t p);

// Dense matrix over F_p.  Entries are always stored as the least
// non-negative residue in [0, p).
class FpMatrix {
public:
    FpMatrix() = default;
    FpMatrix(int rows, int cols, std::uint32_t p);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::uint32_t modulus() const { return p_; }

    std::uint32_t at(int r, int c) const { return a_[idx(r, c)]; }
    void set(int r, int c, std::uint64_t v) {
        a_[idx(r, c)] = static_cast<std::uint32_t>(v % p_);
    }

    static FpMatrix identity(int n, std::uint32_t p);

    FpMatrix transposed() const;

    // y = M x (mod p)
    std::vector<std::uint32_t> apply(std::span<const std::uint32_t> x) const;

    // Reduced row echelon form with deterministic pivoting: pivots are
    // chosen scanning columns left to right and rows top to bottom.
    FpMatrix rref(int* rank_out = nullptr) const;

    int rank() const;

    // Basis of the right nullspace {x : Mx = 0}, one vector per row,
    // ordered by ascending free column.  Empty matrix (0 rows) yields the
    // identity basis.
    FpMatrix nullspace_basis() const;

    bool operator==(const FpMatrix&) const = default;

    // Sparse text serialization:
    //   rows cols p
    //   r c value        (one line per nonzero, row-major order)
    void save(std::ostream& os) const;
    static FpMatrix load(std::istream& is);
    void save_file(const std::string& path) const;
    static FpMatrix load_file(const std::string& path);

private:
    std::size_t idx(int r, int c) const {
        return static_cast<std::size_t>(r) * cols_ + c;
    }
    int rows_ = 0;
    int cols_ = 0;
    std::uint32_t p_ = 2;
    std::vector<std::uint32_t> a_;
};

// A linear code over F_p given by a generator basis (rows span the code)
// and a parity check matrix (rows annihilate the code).
struct LinearCode {
    std::uint32_t p = 2;
    int n = 0;
    int dimension = 0;
    FpMatrix basis;   // dimension x n
    FpMatrix check;   // (rows may exceed n - dimension if redundant)
};

// Code whose parity-check matrix is M: basis = nullspace of M.
LinearCode code_from_check(const FpMatrix& m);

// Dual code: all vectors orthogonal to every codeword.  The generator of
// the input becomes the check of the dual and vice versa.
LinearCode dual_code(const LinearCode& c);

bool codeword_in(const LinearCode& c, std::span<const std::uint32_t> w);

}  // namespace lda
