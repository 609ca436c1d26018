#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "lda/geometry.hpp"
#include "lda/lattice.hpp"

namespace lda {

// Posterior over residue classes mod p for a real observation y under
// Gaussian noise: mass(a) ~ sum_w exp(-(y - a - p w)^2 / (2 sigma^2)),
// window terms of the theta series on each side.  Log-domain inside;
// returned normalized to sum 1.
std::vector<double> coordinate_priors(double y, double sigma, std::uint32_t p,
                                      int window = 4);

// Length-N DFT for arbitrary N via Bluestein's chirp transform on a
// power-of-two FFT, so a transform costs O(N log N) rather than O(N^2).
// The plan itself is immutable; callers in hot loops pass a reusable
// workspace to avoid a heap allocation per transform.
class Dft {
public:
    struct Workspace {
        std::vector<std::complex<double>> buf;
        std::vector<std::complex<double>> buf2;
    };

    explicit Dft(int n);
    int size() const { return n_; }
    void forward(std::span<const std::complex<double>> in,
                 std::span<std::complex<double>> out, Workspace& work) const;
    // forward transform of a real sequence (skips the complex embedding)
    void forward_real(std::span<const double> in,
                      std::span<std::complex<double>> out,
                      Workspace& work) const;
    void inverse(std::span<const std::complex<double>> in,
                 std::span<std::complex<double>> out, Workspace& work) const;
    void forward(std::span<const std::complex<double>> in,
                 std::span<std::complex<double>> out) const;
    void inverse(std::span<const std::complex<double>> in,
                 std::span<std::complex<double>> out) const;

private:
    // one pass of the chirp convolution; the padded length is the smallest
    // 2^a 3^b >= 2n-1 so the pad waste stays small across prime sizes
    struct FftStage {
        int radix;
        int m;       // butterfly groups in this stage
        int stride;  // distance between group elements
        int tw;      // offset into the twiddle tables
    };

    void chirp_transform(std::span<const std::complex<double>> in,
                         std::span<std::complex<double>> out, bool conjugate,
                         Workspace& work) const;
    // self-sorting mixed-radix pass over the ping-pong pair (a, b);
    // returns whichever buffer holds the naturally ordered result
    std::complex<double>* run_fft(std::complex<double>* a,
                                  std::complex<double>* b, bool invert) const;
    int n_;
    int fft_len_;
    std::vector<FftStage> stages_;
    std::vector<std::complex<double>> tw_fwd_;
    std::vector<std::complex<double>> tw_inv_;
    std::vector<std::complex<double>> chirp_;      // e^{-i pi k^2 / n}
    std::vector<std::complex<double>> chirp_out_;  // chirp / fft_len
    std::vector<std::complex<double>> chirp_fft_;  // spectrum of the wrapped conjugate chirp
};

struct BpResult {
    std::vector<std::uint32_t> residues;
    bool converged = false;
    int iterations = 0;
};

struct BpOptions {
    int max_iters = 50;
    double damping = 0.0;   // 0 = pure flooding update
    bool early_stop = true; // stop once the hard decision satisfies H x = 0
};

// Sum-product decoder over F_p on the Tanner graph of H.  Check-to-variable
// messages are computed as cyclic convolutions over (Z_p, +) in the DFT
// domain with leave-one-out prefix/suffix products, so one iteration costs
// O(E p log p) for E edges.  Edges whose coefficient randomized to zero do
// not constrain their variable and are dropped from the graph (the count is
// reported via dropped_edges).
class BpDecoder {
public:
    explicit BpDecoder(const FpMatrix& h);
    // Variant that knows the intended skeleton, so edges randomized to a
    // zero coefficient can be counted (they are invisible in h itself).
    BpDecoder(const FpMatrix& h, const SkeletonGraph& skeleton);

    BpResult decode(const std::vector<std::vector<double>>& priors,
                    int max_iters) const;
    BpResult decode(const std::vector<std::vector<double>>& priors,
                    const BpOptions& options) const;

    // Normalized per-variable beliefs after the final iteration of the most
    // recent decode; on a cycle-free graph these are the exact marginals of
    // the code-constrained posterior.
    BpResult decode_with_beliefs(const std::vector<std::vector<double>>& priors,
                                 const BpOptions& options,
                                 std::vector<std::vector<double>>* beliefs) const;

    int variables() const { return n_; }
    int checks() const { return m_; }
    int dropped_edges() const { return dropped_; }

private:
    struct Edge {
        int check;
        int var;
        std::uint32_t coeff;
        std::uint32_t coeff_inv;
    };
    std::uint32_t p_;
    int n_ = 0;
    int m_ = 0;
    int dropped_ = 0;
    std::vector<Edge> edges_;
    // flat per-edge index tables so the iteration loop does table lookups
    // instead of 64-bit modular arithmetic per element
    std::vector<std::uint32_t> fwd_idx_;  // s -> coeff^{-1} s mod p
    std::vector<std::uint32_t> out_idx_;  // a -> -coeff a mod p
    std::vector<std::vector<int>> var_edges_;    // edge ids per variable
    std::vector<std::vector<int>> check_edges_;  // edge ids per check
    FpMatrix h_;
    Dft dft_;
};

// One-call functional form.
BpResult bp_decode(const FpMatrix& h,
                   const std::vector<std::vector<double>>& priors,
                   int max_iters, double damping = 0.0);

struct LatticeDecodeResult {
    std::vector<long long> point;
    bool converged = false;
    int iterations = 0;
};

// Belief-propagation lattice decoding: residues from the coset posterior,
// then each coordinate is lifted to the representative nearest to y.  If BP
// fails to converge the per-coordinate prior maximizer is lifted instead
// and the result is flagged unconverged.
LatticeDecodeResult lattice_decode_bp(const ConstructionALattice& l,
                                      std::span<const double> y, double sigma,
                                      int max_iters, int window = 4,
                                      double damping = 0.0);

// Maximum-likelihood (= closest point) decoding, for baselines.
CvpResult ml_decode(const ConstructionALattice& l, std::span<const double> y,
                    std::int64_t budget = 1'000'000);

}  // namespace lda
