#include "lda/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lda/decode.hpp"
#include "lda/errors.hpp"
#include "lda/parallel.hpp"
#include "lda/rng.hpp"

namespace lda {

double log_unit_ball_volume(int n) {
    if (n < 0) throw std::invalid_argument("log_unit_ball_volume: n < 0");
    return 0.5 * n * std::log(std::numbers::pi) -
           std::lgamma(0.5 * n + 1.0);
}

double unit_ball_volume(int n) { return std::exp(log_unit_ball_volume(n)); }

namespace {

struct CountState {
    const BallSpec* ball;
    int n;
    std::int64_t visited = 0;
    std::int64_t budget = 0;
    std::int64_t count = 0;

    void tick() {
        if (++visited > budget)
            throw BudgetExceeded("count_integer_points: enumeration budget hit");
    }

    // depth-first over coordinates; rem2 = squared radius still available
    void walk(int depth, double rem2, int nonzeros) {
        if (depth == n) {
            ++count;
            return;
        }
        tick();
        const double y = ball->center[depth];
        const double r = std::sqrt(std::max(rem2, 0.0));
        const long long lo = static_cast<long long>(std::ceil(y - r));
        const long long hi = static_cast<long long>(std::floor(y + r));
        for (long long v = lo; v <= hi; ++v) {
            const double d = static_cast<double>(v) - y;
            const double rest = rem2 - d * d;
            if (rest < 0.0) continue;  // guard against sqrt rounding
            int nz = nonzeros + (v != 0 ? 1 : 0);
            if (ball->support_cap && nz > *ball->support_cap) continue;
            walk(depth + 1, rest, nz);
        }
    }
};

}  // namespace

std::int64_t count_integer_points(const BallSpec& ball, std::int64_t budget) {
    const int n = static_cast<int>(ball.center.size());
    if (n == 0) throw std::invalid_argument("count_integer_points: empty center");
    if (ball.radius < 0.0)
        throw std::invalid_argument("count_integer_points: negative radius");
    if (ball.support_cap && *ball.support_cap < 0)
        throw std::invalid_argument("count_integer_points: negative support cap");
    if (!ball.support_cap) {
        // cheap guard before starting the walk: the visited node count is
        // within a factor ~n of the raw box volume
        const double log_box = n * std::log(2.0 * ball.radius + 1.0);
        if (log_box > std::log(static_cast<double>(budget)) +
                          std::log(4.0 * static_cast<double>(n)))
            throw BudgetExceeded("count_integer_points: ball too large");
    }
    CountState st;
    st.ball = &ball;
    st.n = n;
    st.budget = budget;
    st.walk(0, ball.radius * ball.radius, 0);
    return st.count;
}

// --- exact CVP --------------------------------------------------------------

ExactCvp::ExactCvp(const ConstructionALattice& l, std::int64_t budget) : l_(l) {
    const int n = l.dimension();
    const int k = l.code_dimension();
    const std::uint32_t p = l.modulus();
    if (k == 0) {
        round_only_ = true;
        round_scale_ = p;  // lattice is pZ^n
        count_ = 1;
        return;
    }
    if (k == n) {
        round_only_ = true;
        round_scale_ = 1;  // lattice is all of Z^n
        count_ = 1;
        return;
    }
    round_only_ = false;
    double log_cosets = k * std::log(static_cast<double>(p));
    if (log_cosets > std::log(static_cast<double>(budget)))
        throw BudgetExceeded("ExactCvp: p^k cosets exceed budget");
    count_ = 1;
    for (int i = 0; i < k; ++i) count_ *= p;
    codewords_.assign(static_cast<std::size_t>(count_) * n, 0);
    // odometer over coefficient vectors; codeword updated incrementally by
    // adding one basis row per step
    const FpMatrix& basis = l.code_basis();
    std::vector<std::uint32_t> coeff(k, 0);
    std::vector<std::uint32_t> word(n, 0);
    for (std::int64_t idx = 0;; ++idx) {
        std::copy(word.begin(), word.end(),
                  codewords_.begin() + static_cast<std::size_t>(idx) * n);
        // increment odometer
        int pos = 0;
        while (pos < k) {
            ++coeff[pos];
            for (int c = 0; c < n; ++c) {
                word[c] += basis.at(pos, c);
                if (word[c] >= p) word[c] -= p;
            }
            if (coeff[pos] < p) break;
            // rolling over: coefficient went p -> 0, so the p additions of
            // this row cancel (p * row = 0 mod p); nothing to undo
            coeff[pos] = 0;
            ++pos;
        }
        if (pos == k) break;
    }
}

std::int64_t ExactCvp::cosets() const { return count_; }

namespace {

// round v to the nearest integer, halves toward minus infinity, which
// makes ties resolve to the lexicographically smaller lattice point
inline long long round_half_down(double v) {
    return static_cast<long long>(std::ceil(v - 0.5));
}

bool lex_less(const std::vector<long long>& a, const std::vector<long long>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
}

}  // namespace

CvpResult ExactCvp::decode(std::span<const double> x) const {
    const int n = l_.dimension();
    if (static_cast<int>(x.size()) != n)
        throw std::invalid_argument("ExactCvp::decode: bad input size");
    CvpResult best;
    best.point.resize(n);
    if (round_only_) {
        const double s = static_cast<double>(round_scale_);
        double d2 = 0.0;
        for (int j = 0; j < n; ++j) {
            best.point[j] = round_scale_ == 1
                                ? round_half_down(x[j])
                                : round_scale_ * round_half_down(x[j] / s);
            const double d = x[j] - static_cast<double>(best.point[j]);
            d2 += d * d;
        }
        best.distance = std::sqrt(d2);
        return best;
    }
    const std::uint32_t p = l_.modulus();
    const double pd = static_cast<double>(p);
    double best_d2 = -1.0;
    std::vector<long long> cand(n);
    for (std::int64_t i = 0; i < count_; ++i) {
        const std::uint32_t* w = &codewords_[static_cast<std::size_t>(i) * n];
        double d2 = 0.0;
        int j = 0;
        for (; j < n; ++j) {
            const double wj = static_cast<double>(w[j]);
            const long long z = round_half_down((x[j] - wj) / pd);
            cand[j] = static_cast<long long>(w[j]) +
                      static_cast<long long>(p) * z;
            const double d = x[j] - static_cast<double>(cand[j]);
            d2 += d * d;
            if (best_d2 >= 0.0 && d2 > best_d2) break;  // cannot improve
        }
        if (j < n) continue;  // aborted early, candidate is worse
        if (best_d2 < 0.0 || d2 < best_d2 ||
            (d2 == best_d2 && lex_less(cand, best.point))) {
            best_d2 = d2;
            best.point = cand;
        }
    }
    best.distance = std::sqrt(best_d2);
    return best;
}

CvpResult closest_point(const ConstructionALattice& l,
                        std::span<const double> x, std::int64_t budget) {
    return ExactCvp(l, budget).decode(x);
}

double second_moment_distance(const ConstructionALattice& l,
                              std::span<const double> x, std::int64_t budget) {
    const double d = closest_point(l, x, budget).distance;
    return d * d;
}

PackingResult packing_radius(const ConstructionALattice& l,
                             std::int64_t budget) {
    const int n = l.dimension();
    const std::uint32_t p = l.modulus();
    const ExactCvp enumr(l, budget);  // reuse the coset table
    PackingResult out;
    // candidate from the pZ^n sublattice
    double best_d2 = static_cast<double>(p) * p;
    out.shortest.assign(n, 0);
    out.shortest[0] = p;
    if (l.code_dimension() == n) {
        // Z^n: unit vector is shortest
        best_d2 = 1.0;
        out.shortest.assign(n, 0);
        out.shortest[0] = 1;
    } else if (l.code_dimension() > 0) {
        const std::int64_t cosets = enumr.cosets();
        std::vector<long long> cand(n);
        // walk every nonzero coset; its shortest member is the
        // coordinatewise reduction into (-p/2, p/2]
        for (std::int64_t i = 1; i < cosets; ++i) {
            double d2 = 0.0;
            bool zero = true;
            for (int j = 0; j < n; ++j) {
                const std::uint32_t w = enumr.coset_word(i, j);
                const long long r =
                    w <= p - w ? static_cast<long long>(w)
                               : static_cast<long long>(w) - p;
                cand[j] = r;
                if (r != 0) zero = false;
                d2 += static_cast<double>(r) * r;
                if (d2 > best_d2) break;
            }
            if (zero) continue;  // coefficients nonzero but codeword == 0
            if (d2 < best_d2) {
                best_d2 = d2;
                out.shortest = cand;
            }
        }
    }
    out.radius = 0.5 * std::sqrt(best_d2);
    return out;
}

double effective_radius(const ConstructionALattice& l) {
    const int n = l.dimension();
    return std::exp((l.log_volume() - log_unit_ball_volume(n)) / n);
}

NsmEstimate nsm_estimate(const ConstructionALattice& l, std::int64_t samples,
                         std::uint64_t seed, Quantizer quantizer, int workers,
                         std::int64_t budget) {
    if (samples <= 0) throw std::invalid_argument("nsm_estimate: samples <= 0");
    const int n = l.dimension();
    const double p = static_cast<double>(l.modulus());
    const double norm = n * std::exp(2.0 * l.log_volume() / n);

    std::optional<ExactCvp> cvp;
    double bp_sigma = 0.0;
    if (quantizer == Quantizer::exact_cvp) {
        cvp.emplace(l, budget);
    } else {
        bp_sigma = effective_radius(l) / std::sqrt(static_cast<double>(n));
    }

    std::vector<MeanAccumulator> partial(static_cast<std::size_t>(workers));
    for_each_chunk(samples, workers, [&](int w, std::int64_t b, std::int64_t e) {
        std::vector<double> x(n);
        MeanAccumulator& acc = partial[w];
        for (std::int64_t t = b; t < e; ++t) {
            Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
            for (int j = 0; j < n; ++j) x[j] = rng.uniform(0.0, p);
            double d2 = 0.0;
            if (cvp) {
                const CvpResult r = cvp->decode(x);
                d2 = r.distance * r.distance;
            } else {
                const auto r = lattice_decode_bp(l, x, bp_sigma, 50);
                for (int j = 0; j < n; ++j) {
                    const double d = x[j] - static_cast<double>(r.point[j]);
                    d2 += d * d;
                }
            }
            acc.add(d2 / norm);
        }
    });
    MeanAccumulator total;
    for (const auto& acc : partial) total.merge(acc);

    NsmEstimate est;
    est.mean = total.mean();
    est.half_width = kZ95 * total.stderr_mean();
    est.samples = samples;
    est.quantizer = quantizer;
    return est;
}

}  // namespace lda
