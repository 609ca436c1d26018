#include "lda/decode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace lda {

std::vector<double> coordinate_priors(double y, double sigma, std::uint32_t p,
                                      int window) {
    if (sigma < 0.0) throw std::invalid_argument("coordinate_priors: sigma < 0");
    if (window < 0) throw std::invalid_argument("coordinate_priors: window < 0");
    std::vector<double> mass(p);
    if (sigma == 0.0) {
        // degenerate: all mass on the residue of the nearest integer
        const long long nearest = static_cast<long long>(std::ceil(y - 0.5));
        const long long r = ((nearest % p) + p) % p;
        mass.assign(p, 0.0);
        mass[static_cast<std::size_t>(r)] = 1.0;
        return mass;
    }
    const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
    // center the folding window on the residue class member nearest y
    std::vector<double> logmass(p);
    double mx = -std::numeric_limits<double>::infinity();
    for (std::uint32_t a = 0; a < p; ++a) {
        const double base =
            static_cast<double>(a) +
            p * std::floor((y - static_cast<double>(a)) / p + 0.5);
        double acc = 0.0;
        double biggest = -std::numeric_limits<double>::infinity();
        std::vector<double> terms;
        terms.reserve(2 * window + 1);
        for (int w = -window; w <= window; ++w) {
            const double d = y - (base + static_cast<double>(w) * p);
            terms.push_back(-d * d * inv2s2);
            biggest = std::max(biggest, terms.back());
        }
        for (double t : terms) acc += std::exp(t - biggest);
        logmass[a] = biggest + std::log(acc);
        mx = std::max(mx, logmass[a]);
    }
    double z = 0.0;
    for (std::uint32_t a = 0; a < p; ++a) {
        mass[a] = std::exp(logmass[a] - mx);
        z += mass[a];
    }
    for (double& v : mass) v /= z;
    return mass;
}

// --- Bluestein DFT -----------------------------------------------------------

namespace {

// smallest 2^a 3^b >= n; allowing a factor of three keeps the convolution
// padding within ~15% of the minimum instead of up to 2x for pure powers
// of two, so the transform cost follows the requested size much closer
int next_fft_len(int n) {
    long long best = 1;
    while (best < n) best <<= 1;
    for (long long t = 3; t < best; t *= 3) {
        long long v = t;
        while (v < n) v <<= 1;
        best = std::min(best, v);
    }
    return static_cast<int>(best);
}

}  // namespace

// Stockham autosort: every stage reads one buffer and writes the other, so
// input and output stay in natural order and no reversal pass is needed.
std::complex<double>* Dft::run_fft(std::complex<double>* a,
                                   std::complex<double>* b,
                                   bool invert) const {
    const double k3 = invert ? -0.5 * std::numbers::sqrt3 : 0.5 * std::numbers::sqrt3;
    const std::complex<double>* tw = (invert ? tw_inv_ : tw_fwd_).data();
    std::complex<double>* src = a;
    std::complex<double>* dst = b;
    for (const FftStage& st : stages_) {
        const int s = st.stride;
        const int m = st.m;
        const std::complex<double>* w = tw + st.tw;
        if (st.radix == 2) {
            for (int g = 0; g < m; ++g) {
                const std::complex<double> wg = w[g];
                const std::complex<double>* x0 = src + static_cast<std::size_t>(s) * g;
                const std::complex<double>* x1 = x0 + static_cast<std::size_t>(s) * m;
                std::complex<double>* y0 = dst + static_cast<std::size_t>(2 * s) * g;
                std::complex<double>* y1 = y0 + s;
                for (int q = 0; q < s; ++q) {
                    const std::complex<double> u = x0[q];
                    const std::complex<double> v = x1[q];
                    y0[q] = u + v;
                    y1[q] = (u - v) * wg;
                }
            }
        } else {
            for (int g = 0; g < m; ++g) {
                const std::complex<double> w1 = w[2 * g];
                const std::complex<double> w2 = w[2 * g + 1];
                const std::complex<double>* x0 = src + static_cast<std::size_t>(s) * g;
                const std::complex<double>* x1 = x0 + static_cast<std::size_t>(s) * m;
                const std::complex<double>* x2 = x1 + static_cast<std::size_t>(s) * m;
                std::complex<double>* y0 = dst + static_cast<std::size_t>(3 * s) * g;
                std::complex<double>* y1 = y0 + s;
                std::complex<double>* y2 = y1 + s;
                for (int q = 0; q < s; ++q) {
                    const std::complex<double> va = x0[q];
                    const std::complex<double> vb = x1[q];
                    const std::complex<double> vc = x2[q];
                    const std::complex<double> t1 = vb + vc;
                    const std::complex<double> t2 = va - 0.5 * t1;
                    const std::complex<double> u = vb - vc;
                    // i * k3 * u, the rotated difference of the outer legs
                    const std::complex<double> t3{-k3 * u.imag(), k3 * u.real()};
                    y0[q] = va + t1;
                    y1[q] = (t2 - t3) * w1;
                    y2[q] = (t2 + t3) * w2;
                }
            }
        }
        std::swap(src, dst);
    }
    return src;
}

Dft::Dft(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("Dft: size < 1");
    fft_len_ = next_fft_len(2 * n - 1);
    int len = fft_len_;
    int stride = 1;
    while (len > 1) {
        const int radix = (len % 2 == 0) ? 2 : 3;
        const int m = len / radix;
        stages_.push_back({radix, m, stride, static_cast<int>(tw_fwd_.size())});
        for (int g = 0; g < m; ++g) {
            for (int j = 1; j < radix; ++j) {
                const double ang = -2.0 * std::numbers::pi * j * g / len;
                tw_fwd_.push_back({std::cos(ang), std::sin(ang)});
            }
        }
        len = m;
        stride *= radix;
    }
    tw_inv_.resize(tw_fwd_.size());
    for (std::size_t i = 0; i < tw_fwd_.size(); ++i) tw_inv_[i] = std::conj(tw_fwd_[i]);
    chirp_.resize(n);
    chirp_out_.resize(n);
    for (int k = 0; k < n; ++k) {
        // k^2 mod 2n keeps the angle argument small and exact
        const long long k2 = (static_cast<long long>(k) * k) % (2LL * n);
        const double ang = -std::numbers::pi * static_cast<double>(k2) / n;
        chirp_[k] = {std::cos(ang), std::sin(ang)};
        // fold the 1/len of the inverse convolution pass into the output chirp
        chirp_out_[k] = chirp_[k] / static_cast<double>(fft_len_);
    }
    std::vector<std::complex<double>> b(fft_len_, {0.0, 0.0});
    std::vector<std::complex<double>> scratch(fft_len_);
    b[0] = std::conj(chirp_[0]);
    for (int k = 1; k < n; ++k) {
        b[k] = std::conj(chirp_[k]);
        b[fft_len_ - k] = std::conj(chirp_[k]);
    }
    const std::complex<double>* spec = run_fft(b.data(), scratch.data(), false);
    chirp_fft_.assign(spec, spec + fft_len_);
}

void Dft::chirp_transform(std::span<const std::complex<double>> in,
                          std::span<std::complex<double>> out, bool conjugate,
                          Workspace& work) const {
    auto& a = work.buf;
    auto& b = work.buf2;
    a.resize(fft_len_);
    b.resize(fft_len_);
    for (int k = 0; k < n_; ++k) {
        const std::complex<double> x = conjugate ? std::conj(in[k]) : in[k];
        a[k] = x * chirp_[k];
    }
    std::fill(a.begin() + n_, a.end(), std::complex<double>{0.0, 0.0});
    std::complex<double>* f = run_fft(a.data(), b.data(), false);
    for (int k = 0; k < fft_len_; ++k) f[k] *= chirp_fft_[k];
    std::complex<double>* other = (f == a.data()) ? b.data() : a.data();
    const std::complex<double>* g = run_fft(f, other, true);
    for (int k = 0; k < n_; ++k) {
        const std::complex<double> v = g[k] * chirp_out_[k];
        out[k] = conjugate ? std::conj(v) : v;
    }
}

void Dft::forward_real(std::span<const double> in,
                       std::span<std::complex<double>> out,
                       Workspace& work) const {
    auto& a = work.buf;
    auto& b = work.buf2;
    a.resize(fft_len_);
    b.resize(fft_len_);
    for (int k = 0; k < n_; ++k) a[k] = chirp_[k] * in[k];
    std::fill(a.begin() + n_, a.end(), std::complex<double>{0.0, 0.0});
    std::complex<double>* f = run_fft(a.data(), b.data(), false);
    for (int k = 0; k < fft_len_; ++k) f[k] *= chirp_fft_[k];
    std::complex<double>* other = (f == a.data()) ? b.data() : a.data();
    const std::complex<double>* g = run_fft(f, other, true);
    for (int k = 0; k < n_; ++k) out[k] = g[k] * chirp_out_[k];
}

void Dft::forward(std::span<const std::complex<double>> in,
                  std::span<std::complex<double>> out, Workspace& work) const {
    chirp_transform(in, out, false, work);
}

void Dft::inverse(std::span<const std::complex<double>> in,
                  std::span<std::complex<double>> out, Workspace& work) const {
    // IDFT(x) = conj(DFT(conj(x))) / n
    chirp_transform(in, out, true, work);
    const double s = 1.0 / n_;
    for (int k = 0; k < n_; ++k) out[k] *= s;
}

void Dft::forward(std::span<const std::complex<double>> in,
                  std::span<std::complex<double>> out) const {
    Workspace work;
    forward(in, out, work);
}

void Dft::inverse(std::span<const std::complex<double>> in,
                  std::span<std::complex<double>> out) const {
    Workspace work;
    inverse(in, out, work);
}

// --- sum-product decoder -----------------------------------------------------

BpDecoder::BpDecoder(const FpMatrix& h)
    : p_(h.modulus()), n_(h.cols()), m_(h.rows()), h_(h),
      dft_(static_cast<int>(h.modulus())) {
    var_edges_.resize(n_);
    check_edges_.resize(m_);
    for (int i = 0; i < m_; ++i) {
        for (int j = 0; j < n_; ++j) {
            const std::uint32_t c = h.at(i, j);
            if (c == 0) continue;
            const int id = static_cast<int>(edges_.size());
            edges_.push_back({i, j, c, fp_inverse(c, p_)});
            var_edges_[j].push_back(id);
            check_edges_[i].push_back(id);
        }
    }
    const std::size_t pp = p_;
    fwd_idx_.resize(edges_.size() * pp);
    out_idx_.resize(edges_.size() * pp);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const Edge& ed = edges_[e];
        for (std::uint32_t s = 0; s < p_; ++s) {
            fwd_idx_[e * pp + s] = static_cast<std::uint32_t>(
                static_cast<std::uint64_t>(ed.coeff_inv) * s % p_);
            out_idx_[e * pp + s] = static_cast<std::uint32_t>(
                (p_ - static_cast<std::uint64_t>(ed.coeff) * s % p_) % p_);
        }
    }
}

BpDecoder::BpDecoder(const FpMatrix& h, const SkeletonGraph& skeleton)
    : BpDecoder(h) {
    if (skeleton.m != m_ || skeleton.n != n_)
        throw std::invalid_argument("BpDecoder: skeleton shape mismatch");
    for (int i = 0; i < m_; ++i)
        for (int v : skeleton.checks[i])
            if (h.at(i, v) == 0) ++dropped_;
}

namespace {

void normalize(std::vector<double>& v) {
    double z = 0.0;
    for (double& x : v) {
        if (x < 0.0) x = 0.0;  // FFT round-off can leave tiny negatives
        z += x;
    }
    if (z <= 0.0) {
        // contradictory evidence annihilated the message; fall back to flat
        std::fill(v.begin(), v.end(), 1.0 / static_cast<double>(v.size()));
        return;
    }
    for (double& x : v) x /= z;
}

}  // namespace

BpResult BpDecoder::decode_with_beliefs(
    const std::vector<std::vector<double>>& priors, const BpOptions& options,
    std::vector<std::vector<double>>* beliefs_out) const {
    if (static_cast<int>(priors.size()) != n_)
        throw std::invalid_argument("BpDecoder: wrong number of priors");
    for (const auto& pr : priors)
        if (static_cast<int>(pr.size()) != static_cast<int>(p_))
            throw std::invalid_argument("BpDecoder: prior has wrong alphabet");
    if (options.damping < 0.0 || options.damping >= 1.0)
        throw std::invalid_argument("BpDecoder: damping outside [0,1)");

    const int p = static_cast<int>(p_);
    const std::size_t e_count = edges_.size();

    // messages in the probability domain, one length-p vector per edge
    std::vector<std::vector<double>> var_to_check(e_count);
    std::vector<std::vector<double>> check_to_var(
        e_count, std::vector<double>(p, 1.0 / p));
    for (std::size_t e = 0; e < e_count; ++e)
        var_to_check[e] = priors[edges_[e].var];

    std::vector<std::uint32_t> hard(n_);
    BpResult result;
    std::vector<std::complex<double>> scratch(p), freq(p);
    std::vector<std::vector<std::complex<double>>> edge_freq;
    std::vector<std::complex<double>> prefix, suffix;
    std::vector<double> fresh(p);
    Dft::Workspace dft_work;

    auto hard_decide = [&] {
        for (int j = 0; j < n_; ++j) {
            double best = -1.0;
            std::uint32_t arg = 0;
            for (int a = 0; a < p; ++a) {
                double b = priors[j][a];
                for (int e : var_edges_[j]) b *= check_to_var[e][a];
                if (b > best) { best = b; arg = static_cast<std::uint32_t>(a); }
            }
            hard[j] = arg;
        }
    };
    auto satisfied = [&] {
        for (std::uint32_t s : h_.apply(hard))
            if (s != 0) return false;
        return true;
    };

    int max_deg = 0;
    for (const auto& eids : check_edges_)
        max_deg = std::max(max_deg, static_cast<int>(eids.size()));
    prefix.assign(static_cast<std::size_t>(max_deg + 1) * p, {1.0, 0.0});
    suffix.assign(static_cast<std::size_t>(max_deg + 1) * p, {1.0, 0.0});

    int it = 0;
    for (; it < options.max_iters; ++it) {
        // check-to-variable update, one check at a time
        for (int i = 0; i < m_; ++i) {
            const auto& eids = check_edges_[i];
            const int deg = static_cast<int>(eids.size());
            if (deg == 0) continue;
            edge_freq.resize(deg);
            for (int t = 0; t < deg; ++t) {
                const auto& msg = var_to_check[eids[t]];
                const std::uint32_t* pre =
                    &fwd_idx_[static_cast<std::size_t>(eids[t]) * p_];
                // permute to the distribution of (coeff * x) mod p
                for (int s = 0; s < p; ++s) fresh[s] = msg[pre[s]];
                edge_freq[t].resize(p);
                dft_.forward_real(fresh, edge_freq[t], dft_work);
            }
            // leave-one-out products in the frequency domain; row 0 of the
            // prefix table stays all-ones, the suffix boundary row moves
            // with the degree and is re-armed here
            for (int s = 0; s < p; ++s) suffix[deg * p + s] = {1.0, 0.0};
            for (int t = 0; t < deg; ++t)
                for (int s = 0; s < p; ++s)
                    prefix[(t + 1) * p + s] = prefix[t * p + s] * edge_freq[t][s];
            for (int t = deg - 1; t >= 0; --t)
                for (int s = 0; s < p; ++s)
                    suffix[t * p + s] = suffix[(t + 1) * p + s] * edge_freq[t][s];
            for (int t = 0; t < deg; ++t) {
                for (int s = 0; s < p; ++s)
                    freq[s] = prefix[t * p + s] * suffix[(t + 1) * p + s];
                dft_.inverse(freq, scratch, dft_work);
                const std::uint32_t* idx =
                    &out_idx_[static_cast<std::size_t>(eids[t]) * p_];
                auto& out = check_to_var[eids[t]];
                // P[sum of the other terms = -coeff * a]; clamp FFT
                // round-off and normalize in the same pass
                double z = 0.0;
                for (int a = 0; a < p; ++a) {
                    double v = scratch[idx[a]].real();
                    if (v < 0.0) v = 0.0;
                    fresh[a] = v;
                    z += v;
                }
                if (options.damping > 0.0) {
                    if (z <= 0.0)
                        std::fill(fresh.begin(), fresh.end(), 1.0 / p);
                    else
                        for (int a = 0; a < p; ++a) fresh[a] /= z;
                    for (int a = 0; a < p; ++a)
                        fresh[a] = (1.0 - options.damping) * fresh[a] +
                                   options.damping * out[a];
                    normalize(fresh);
                    out.assign(fresh.begin(), fresh.end());
                } else if (z <= 0.0) {
                    // contradictory evidence annihilated the message
                    std::fill(out.begin(), out.end(), 1.0 / p);
                } else {
                    for (int a = 0; a < p; ++a) out[a] = fresh[a] / z;
                }
            }
        }
        // variable-to-check update
        for (int j = 0; j < n_; ++j) {
            for (int e : var_edges_[j]) {
                auto& out = var_to_check[e];
                for (int a = 0; a < p; ++a) {
                    double v = priors[j][a];
                    for (int e2 : var_edges_[j])
                        if (e2 != e) v *= check_to_var[e2][a];
                    out[a] = v;
                }
                normalize(out);
            }
        }
        if (options.early_stop) {
            hard_decide();
            if (satisfied()) {
                result.converged = true;
                ++it;
                break;
            }
        }
    }
    if (!options.early_stop || !result.converged) {
        hard_decide();
        result.converged = satisfied();
    }
    result.iterations = it;
    result.residues = hard;

    if (beliefs_out) {
        beliefs_out->assign(n_, std::vector<double>(p));
        for (int j = 0; j < n_; ++j) {
            auto& b = (*beliefs_out)[j];
            for (int a = 0; a < p; ++a) {
                double v = priors[j][a];
                for (int e : var_edges_[j]) v *= check_to_var[e][a];
                b[a] = v;
            }
            normalize(b);
        }
    }
    return result;
}

BpResult BpDecoder::decode(const std::vector<std::vector<double>>& priors,
                           const BpOptions& options) const {
    return decode_with_beliefs(priors, options, nullptr);
}

BpResult BpDecoder::decode(const std::vector<std::vector<double>>& priors,
                           int max_iters) const {
    BpOptions opt;
    opt.max_iters = max_iters;
    return decode(priors, opt);
}

BpResult bp_decode(const FpMatrix& h,
                   const std::vector<std::vector<double>>& priors,
                   int max_iters, double damping) {
    BpOptions opt;
    opt.max_iters = max_iters;
    opt.damping = damping;
    return BpDecoder(h).decode(priors, opt);
}

LatticeDecodeResult lattice_decode_bp(const ConstructionALattice& l,
                                      std::span<const double> y, double sigma,
                                      int max_iters, int window,
                                      double damping) {
    const int n = l.dimension();
    if (static_cast<int>(y.size()) != n)
        throw std::invalid_argument("lattice_decode_bp: bad input size");
    const std::uint32_t p = l.modulus();
    std::vector<std::vector<double>> priors(n);
    for (int j = 0; j < n; ++j)
        priors[j] = coordinate_priors(y[j], sigma, p, window);

    BpOptions opt;
    opt.max_iters = max_iters;
    opt.damping = damping;
    const BpResult bp = BpDecoder(l.check_matrix()).decode(priors, opt);

    std::vector<std::uint32_t> residues = bp.residues;
    if (!bp.converged) {
        // The hard decision does not satisfy the checks, so lifting it would
        // not give a lattice point.  Try the per-coordinate prior maximizers;
        // if those are not a codeword either, retreat to the zero codeword so
        // the output always lies in the lattice.
        for (int j = 0; j < n; ++j) {
            std::uint32_t r = 0;
            for (std::uint32_t a = 1; a < p; ++a)
                if (priors[j][a] > priors[j][r]) r = a;
            residues[j] = r;
        }
        bool codeword = true;
        for (std::uint32_t s : l.check_matrix().apply(residues))
            if (s != 0) { codeword = false; break; }
        if (!codeword) residues.assign(n, 0);
    }

    LatticeDecodeResult out;
    out.converged = bp.converged;
    out.iterations = bp.iterations;
    out.point.resize(n);
    const double pd = static_cast<double>(p);
    for (int j = 0; j < n; ++j) {
        // lift the residue to its representative nearest y_j
        const double r = static_cast<double>(residues[j]);
        const double z = std::floor((y[j] - r) / pd + 0.5);
        out.point[j] =
            static_cast<long long>(residues[j]) +
            static_cast<long long>(p) * static_cast<long long>(z);
    }
    return out;
}

CvpResult ml_decode(const ConstructionALattice& l, std::span<const double> y,
                    std::int64_t budget) {
    return closest_point(l, y, budget);
}

}  // namespace lda
