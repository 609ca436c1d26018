#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lda/lattice.hpp"

namespace lda {

// Volume of the n-dimensional unit Euclidean ball, pi^(n/2) / Gamma(n/2+1).
double unit_ball_volume(int n);
double log_unit_ball_volume(int n);

struct BallSpec {
    std::vector<double> center;
    double radius = 0.0;
    // if set, only count points with at most this many nonzero coordinates
    std::optional<int> support_cap;
};

// Number of integer points in the closed ball, by depth-first coordinate
// enumeration with radius pruning.  Throws BudgetExceeded when the visited
// node count would pass `budget`.
std::int64_t count_integer_points(const BallSpec& ball,
                                  std::int64_t budget = 50'000'000);

struct CvpResult {
    std::vector<long long> point;
    double distance = 0.0;
};

// Exact closest-vector queries by exhaustive coset enumeration: every one
// of the p^k code cosets of pZ^n is reduced per coordinate.  Construction
// cost and memory are O(p^k * n); refuses to build beyond `budget` cosets.
// Ties are broken toward the lexicographically smallest lattice point.
class ExactCvp {
public:
    explicit ExactCvp(const ConstructionALattice& l,
                      std::int64_t budget = 1'000'000);
    CvpResult decode(std::span<const double> x) const;

    // number of enumerated cosets (1 when the rounding fast path is active)
    std::int64_t cosets() const;
    std::uint32_t coset_word(std::int64_t coset, int coord) const {
        return codewords_[static_cast<std::size_t>(coset) * l_.dimension() +
                          coord];
    }

private:
    const ConstructionALattice& l_;
    bool round_only_;               // Z^n or pZ^n: plain rounding suffices
    std::uint32_t round_scale_ = 1;
    std::vector<std::uint32_t> codewords_;  // cosets * n residues
    std::int64_t count_ = 0;
};

CvpResult closest_point(const ConstructionALattice& l,
                        std::span<const double> x,
                        std::int64_t budget = 1'000'000);

double second_moment_distance(const ConstructionALattice& l,
                              std::span<const double> x,
                              std::int64_t budget = 1'000'000);

struct PackingResult {
    double radius = 0.0;               // half the minimum distance
    std::vector<long long> shortest;   // a shortest nonzero vector
};

// Packing radius via exact shortest-vector computation over the code
// cosets (per-coordinate reduction makes each coset's minimum explicit).
PackingResult packing_radius(const ConstructionALattice& l,
                             std::int64_t budget = 1'000'000);

// Radius of the ball with the same volume as a fundamental cell:
// (vol / V_n)^(1/n).
double effective_radius(const ConstructionALattice& l);

enum class Quantizer { exact_cvp, bp_approx };

struct NsmEstimate {
    double mean = 0.0;        // estimated normalized second moment
    double half_width = 0.0;  // 95% normal-approximation half width
    std::int64_t samples = 0;
    Quantizer quantizer = Quantizer::exact_cvp;
};

// Normalized second moment G(L) = E ||x - Q(x)||^2 / (n vol^(2/n)),
// estimated with x uniform on [0,p)^n (a fundamental domain of pZ^n, which
// tiles L's Voronoi regions).  Deterministic for fixed (seed, workers).
NsmEstimate nsm_estimate(const ConstructionALattice& l, std::int64_t samples,
                         std::uint64_t seed,
                         Quantizer quantizer = Quantizer::exact_cvp,
                         int workers = 1, std::int64_t budget = 1'000'000);

}  // namespace lda
