#include "lda/fp.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace lda {

bool is_prime(std::uint64_t m) {
    if (m < 2) return false;
    if (m % 2 == 0) return m == 2;
    if (m % 3 == 0) return m == 3;
    // trial division over 6k +/- 1; moduli are < 2^31 so this is cheap
    for (std::uint64_t d = 5; d * d <= m; d += 6) {
        if (m % d == 0 || m % (d + 2) == 0) return false;
    }
    return true;
}

std::uint32_t smallest_prime_geq(double x) {
    if (!(x >= 0.0))
        throw std::invalid_argument("smallest_prime_geq: x must be >= 0");
    std::uint64_t m = x <= 2.0 ? 2 : static_cast<std::uint64_t>(std::ceil(x));
    for (; m < kMaxModulus; ++m) {
        if (is_prime(m)) return static_cast<std::uint32_t>(m);
    }
    throw std::overflow_error("smallest_prime_geq: prime exceeds modulus cap");
}

PrimeContext PrimeContext::make(int n, double lambda) {
    if (n < 1) throw std::invalid_argument("PrimeContext: n must be >= 1");
    if (lambda <= 0.0)
        throw std::invalid_argument("PrimeContext: lambda must be positive");
    PrimeContext ctx;
    ctx.n = n;
    ctx.lambda = lambda;
    ctx.p = smallest_prime_geq(std::pow(static_cast<double>(n), lambda));
    return ctx;
}

std::uint32_t fp_inverse(std::uint32_t a, std::uint32_t p) {
    if (a % p == 0) throw std::domain_error("fp_inverse: zero is not invertible");
    // Fermat: a^(p-2) mod p
    std::uint64_t base = a % p;
    std::uint64_t acc = 1;
    std::uint64_t e = p - 2;
    while (e > 0) {
        if (e & 1) acc = acc * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return static_cast<std::uint32_t>(acc);
}

FpMatrix::FpMatrix(int rows, int cols, std::uint32_t p)
    : rows_(rows), cols_(cols), p_(p) {
    if (rows < 0 || cols < 0)
        throw std::invalid_argument("FpMatrix: negative shape");
    if (p < 2 || p >= kMaxModulus || !is_prime(p))
        throw std::invalid_argument("FpMatrix: modulus must be a prime < 2^31");
    a_.assign(static_cast<std::size_t>(rows) * cols, 0);
}

FpMatrix FpMatrix::identity(int n, std::uint32_t p) {
    FpMatrix m(n, n, p);
    for (int i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

FpMatrix FpMatrix::transposed() const {
    FpMatrix t(cols_, rows_, p_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) t.set(c, r, at(r, c));
    return t;
}

std::vector<std::uint32_t> FpMatrix::apply(
    std::span<const std::uint32_t> x) const {
    if (static_cast<int>(x.size()) != cols_)
        throw std::invalid_argument("FpMatrix::apply: size mismatch");
    std::vector<std::uint32_t> y(rows_);
    for (int r = 0; r < rows_; ++r) {
        std::uint64_t acc = 0;
        for (int c = 0; c < cols_; ++c) {
            acc += static_cast<std::uint64_t>(at(r, c)) * (x[c] % p_) % p_;
            if (acc >= (1ULL << 62)) acc %= p_;
        }
        y[r] = static_cast<std::uint32_t>(acc % p_);
    }
    return y;
}

FpMatrix FpMatrix::rref(int* rank_out) const {
    FpMatrix m = *this;
    const std::uint64_t p = p_;
    int pivot_row = 0;
    for (int col = 0; col < cols_ && pivot_row < rows_; ++col) {
        int pr = -1;
        for (int r = pivot_row; r < rows_; ++r) {
            if (m.at(r, col) != 0) { pr = r; break; }
        }
        if (pr < 0) continue;
        if (pr != pivot_row) {
            for (int c = 0; c < cols_; ++c) {
                const std::uint32_t tmp = m.at(pivot_row, c);
                m.set(pivot_row, c, m.at(pr, c));
                m.set(pr, c, tmp);
            }
        }
        const std::uint64_t inv = fp_inverse(m.at(pivot_row, col), p_);
        for (int c = col; c < cols_; ++c)
            m.set(pivot_row, c, m.at(pivot_row, c) * inv % p);
        for (int r = 0; r < rows_; ++r) {
            if (r == pivot_row) continue;
            const std::uint64_t f = m.at(r, col);
            if (f == 0) continue;
            for (int c = col; c < cols_; ++c) {
                // r <- r - f * pivot  (mod p)
                const std::uint64_t sub = f * m.at(pivot_row, c) % p;
                m.set(r, c, (m.at(r, c) + p - sub) % p);
            }
        }
        ++pivot_row;
    }
    if (rank_out) *rank_out = pivot_row;
    return m;
}

int FpMatrix::rank() const {
    int r = 0;
    rref(&r);
    return r;
}

FpMatrix FpMatrix::nullspace_basis() const {
    int rank = 0;
    const FpMatrix r = rows_ > 0 ? rref(&rank) : *this;
    // locate pivot columns
    std::vector<int> pivot_col_of_row(rank, -1);
    std::vector<bool> is_pivot(cols_, false);
    {
        int row = 0;
        for (int col = 0; col < cols_ && row < rank; ++col) {
            if (r.at(row, col) != 0) {
                pivot_col_of_row[row] = col;
                is_pivot[col] = true;
                ++row;
            }
        }
    }
    FpMatrix basis(cols_ - rank, cols_, p_);
    int out = 0;
    for (int fc = 0; fc < cols_; ++fc) {
        if (is_pivot[fc]) continue;
        basis.set(out, fc, 1);
        for (int row = 0; row < rank; ++row) {
            const std::uint32_t v = r.at(row, fc);
            if (v != 0) basis.set(out, pivot_col_of_row[row], p_ - v);
        }
        ++out;
    }
    return basis;
}

void FpMatrix::save(std::ostream& os) const {
    os << rows_ << ' ' << cols_ << ' ' << p_ << '\n';
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c)
            if (at(r, c) != 0) os << r << ' ' << c << ' ' << at(r, c) << '\n';
}

FpMatrix FpMatrix::load(std::istream& is) {
    int rows = 0, cols = 0;
    std::uint32_t p = 0;
    if (!(is >> rows >> cols >> p))
        throw std::runtime_error("FpMatrix::load: bad header");
    FpMatrix m(rows, cols, p);
    int r = 0, c = 0;
    std::uint32_t v = 0;
    while (is >> r >> c >> v) {
        if (r < 0 || r >= rows || c < 0 || c >= cols)
            throw std::runtime_error("FpMatrix::load: entry out of range");
        if (v >= p) throw std::runtime_error("FpMatrix::load: value >= modulus");
        m.set(r, c, v);
    }
    return m;
}

void FpMatrix::save_file(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    save(f);
}

FpMatrix FpMatrix::load_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    return load(f);
}

LinearCode code_from_check(const FpMatrix& m) {
    LinearCode c;
    c.p = m.modulus();
    c.n = m.cols();
    c.check = m;
    c.basis = m.nullspace_basis();
    c.dimension = c.basis.rows();
    return c;
}

LinearCode dual_code(const LinearCode& c) {
    LinearCode d;
    d.p = c.p;
    d.n = c.n;
    d.check = c.basis;
    d.basis = c.basis.rows() > 0 ? c.basis.nullspace_basis()
                                 : FpMatrix::identity(c.n, c.p);
    d.dimension = d.basis.rows();
    return d;
}

bool codeword_in(const LinearCode& c, std::span<const std::uint32_t> w) {
    if (c.check.rows() == 0) return true;
    for (std::uint32_t s : c.check.apply(w))
        if (s != 0) return false;
    return true;
}

}  // namespace lda
