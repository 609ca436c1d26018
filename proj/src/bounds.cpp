#include "lda/bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "lda/errors.hpp"
#include "lda/geometry.hpp"
#include "lda/stats.hpp"

namespace lda {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double checked_ratio(double num, double den, const char* what) {
    if (den <= 0.0) throw std::domain_error(std::string(what) + ": non-positive denominator");
    return num / den;
}

double lse2(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// floor/ceil of analytically integer-valued expressions, nudged so that
// representation error does not shift the summation limits
long long floor_idx(double x) { return static_cast<long long>(std::floor(x + 1e-9)); }
long long ceil_idx(double x) { return static_cast<long long>(std::ceil(x - 1e-9)); }

// log V_n for real n (the bound displays treat dimension as continuous)
double log_ball_volume_real(double n) {
    return 0.5 * n * std::log(std::numbers::pi) - std::lgamma(0.5 * n + 1.0);
}

}  // namespace

ExpansionParams ParameterSet::expansion() const {
    ExpansionParams e;
    e.alpha = alpha;
    e.bigA = bigA;
    e.beta = beta;
    e.bigB = bigB;
    e.epsilon = epsilon;
    e.vartheta = vartheta;
    return e;
}

void ParameterSet::validate() const {
    if (!(rate > 0.0 && rate < 1.0))
        throw std::invalid_argument("ParameterSet: rate outside (0,1)");
    if (!(lambda > 0.0))
        throw std::invalid_argument("ParameterSet: lambda must be positive");
    expansion().validate(rate);
}

ParameterSet ParameterSet::with_default_margins(double rate, double lambda,
                                                double alpha, double bigA,
                                                double beta, double bigB) {
    ParameterSet ps;
    ps.rate = rate;
    ps.lambda = lambda;
    ps.alpha = alpha;
    ps.bigA = bigA;
    ps.beta = beta;
    ps.bigB = bigB;
    ps.epsilon = (1.0 - rate) / (bigA + 1.0 - rate);
    ps.vartheta = 1.0 / (bigB * (1.0 - rate) + 1.0);
    ps.validate();
    return ps;
}

std::array<double, 7> lambda_threshold_main_terms(const ParameterSet& ps) {
    const double R = ps.rate, A = ps.bigA, B = ps.bigB, al = ps.alpha;
    return {
        checked_ratio(1.0, R, "lambda_threshold_main"),
        checked_ratio(1.0, 1.0 - R, "lambda_threshold_main"),
        checked_ratio(2.0, A - 2.0 * (1.0 - R), "lambda_threshold_main"),
        checked_ratio(2.0, B * (1.0 - R) - 2.0 * (1.0 + R), "lambda_threshold_main"),
        checked_ratio(2.0, 1.0 - 1.0 / (A * B - 1.0) - 1.0 / A, "lambda_threshold_main"),
        checked_ratio(1.0, 2.0 * (al - 1.0 + R), "lambda_threshold_main"),
        checked_ratio(2.0 * B + 1.5, B * (1.0 - R) - 1.0, "lambda_threshold_main"),
    };
}

double lambda_threshold_main(const ParameterSet& ps) {
    double mx = kNegInf;
    for (double t : lambda_threshold_main_terms(ps)) mx = std::max(mx, t);
    return mx;
}

std::array<double, 5> lambda_threshold_mse_terms(const ParameterSet& ps) {
    const double R = ps.rate, A = ps.bigA, B = ps.bigB;
    return {
        checked_ratio(1.0, R, "lambda_threshold_mse"),
        checked_ratio(1.0, 1.0 - R, "lambda_threshold_mse"),
        checked_ratio(2.0, A - 2.0 * (1.0 + R), "lambda_threshold_mse"),
        checked_ratio(2.0, B * (1.0 - R) - 2.0 * (1.0 + R), "lambda_threshold_mse"),
        checked_ratio(2.0, 1.0 - 1.0 / (A * B - 1.0) - 1.0 / A, "lambda_threshold_mse"),
    };
}

double lambda_threshold_mse(const ParameterSet& ps) {
    double mx = kNegInf;
    for (double t : lambda_threshold_mse_terms(ps)) mx = std::max(mx, t);
    return mx;
}

std::array<double, 3> lambda_threshold_awgn_terms(const ParameterSet& ps) {
    const double R = ps.rate, A = ps.bigA, B = ps.bigB, al = ps.alpha;
    return {
        checked_ratio(1.0, 2.0 * (al - 1.0 + R), "lambda_threshold_awgn"),
        checked_ratio(3.0, 2.0 * (A - 1.0 + R), "lambda_threshold_awgn"),
        checked_ratio(1.0, B * (1.0 - R) - 1.0, "lambda_threshold_awgn"),
    };
}

double lambda_threshold_awgn(const ParameterSet& ps) {
    double mx = kNegInf;
    for (double t : lambda_threshold_awgn_terms(ps)) mx = std::max(mx, t);
    return mx;
}

std::array<double, 2> lambda_threshold_dual_terms(const ParameterSet& ps) {
    const double R = ps.rate, B = ps.bigB;
    return {
        checked_ratio(1.0, 2.0 * (1.0 - R), "lambda_threshold_dual"),
        checked_ratio(2.0 * B + 1.5, B * (1.0 - R) - 1.0, "lambda_threshold_dual"),
    };
}

double lambda_threshold_dual(const ParameterSet& ps) {
    const auto t = lambda_threshold_dual_terms(ps);
    return std::max(t[0], t[1]);
}

ThresholdComparison threshold_comparison(const ParameterSet& ps) {
    ThresholdComparison c;
    c.a_term_channel = checked_ratio(2.0, ps.bigA - 2.0 * (1.0 - ps.rate),
                                     "threshold_comparison");
    c.a_term_mse = checked_ratio(2.0, ps.bigA - 2.0 * (1.0 + ps.rate),
                                 "threshold_comparison");
    c.main_threshold = lambda_threshold_main(ps);
    c.mse_threshold = lambda_threshold_mse(ps);
    return c;
}

double delta_mse(const ParameterSet& ps) {
    const double R = ps.rate, A = ps.bigA, B = ps.bigB, lam = ps.lambda;
    return 0.5 * std::min(lam * (A - 2.0 * (1.0 + R)) - 2.0,
                          lam * (B * (1.0 - R) - 2.0 * (1.0 + R)) - 1.0);
}

DualConstants dual_constants(const ParameterSet& ps, double n) {
    ps.validate();
    if (!(n > 1.0)) throw std::invalid_argument("dual_constants: n must exceed 1");
    const double R = ps.rate, al = ps.alpha, lam = ps.lambda;
    const double lnn = std::log(n);

    DualConstants d;
    d.c1 = std::log(8.0 / (1.0 - (1.0 - R) / (2.0 * al))) /
           (lam * (1.0 - (1.0 - R) / al));
    const double u = d.c1 / ((1.0 - R) * lnn);
    if (!(u < 1.0))
        throw std::domain_error("dual_constants: zeta undefined, c1/((1-R)ln n) >= 1");
    const double log_zeta = (-4.0 / n) * lnn +
                            (4.0 * d.c1 / ((1.0 - R) * lnn)) *
                                std::log(d.c1 / (std::numbers::e * (1.0 - R) * lnn)) +
                            2.0 * std::log1p(-u);
    d.zeta_n = std::exp(log_zeta);
    d.log_r_eff_dual = R * lam * lnn - log_ball_volume_real(n) / n;
    d.log_r_n = d.log_r_eff_dual + log_zeta;
    return d;
}

double fullrank_failure_bound(double n, double lambda, double delta) {
    if (!(n >= 1.0)) throw std::invalid_argument("fullrank_failure_bound: n < 1");
    return std::exp(-(2.0 * lambda + delta) * std::log(n));
}

double variance_rho(const ParameterSet& ps, double n, double omega) {
    ps.validate();
    if (!(n > 1.0)) throw std::invalid_argument("variance_rho: n must exceed 1");
    const double log_r_eff = (1.0 - ps.rate) * ps.lambda * std::log(n) -
                             log_ball_volume_real(n) / n;
    return std::exp(log_r_eff) * (1.0 + std::pow(n, -omega));
}

VarianceTerms variance_terms(const ParameterSet& ps, double n, double rho,
                             std::int64_t count_budget,
                             std::optional<double> supplied_log_count) {
    ps.validate();
    if (!(n > 1.0) || !(rho > 0.0))
        throw std::invalid_argument("variance_terms: need n > 1 and rho > 0");
    const double R = ps.rate, A = ps.bigA, B = ps.bigB, lam = ps.lambda;
    const double lnn = std::log(n);
    const double lnp = lam * lnn;
    const double m = n * (1.0 - R);
    const long long M = floor_idx(m);

    VarianceTerms out;

    // |Z^n cap (x + rho B)|: supplied, exact around the origin, or the
    // upper sandwich bound V_n (rho + sqrt(n)/2)^n
    if (supplied_log_count) {
        out.log_count = *supplied_log_count;
        out.mode = CountMode::supplied;
    } else {
        out.mode = CountMode::surrogate;
        const double ni = std::round(n);
        if (ni == n && ni <= 12) {
            try {
                BallSpec ball;
                ball.center.assign(static_cast<std::size_t>(ni), 0.0);
                ball.radius = rho;
                out.log_count = std::log(static_cast<double>(
                    count_integer_points(ball, count_budget)));
                out.mode = CountMode::exact;
            } catch (const BudgetExceeded&) {
                out.mode = CountMode::surrogate;
            }
        }
        if (out.mode == CountMode::surrogate)
            out.log_count = log_ball_volume_real(n) +
                            n * std::log(rho + 0.5 * std::sqrt(n));
    }
    out.log_cal_e = 2.0 * out.log_count - 2.0 * m * lnp;

    // term 1: sum_{s=1}^{floor(n(1-R)/(A+1-R))} n^{s(2-lambda(A-2))}
    {
        LogSumAccumulator acc;
        const long long s_hi = floor_idx(m / (A + 1.0 - R));
        for (long long s = 1; s <= s_hi; ++s)
            acc.add(static_cast<double>(s) * (2.0 - lam * (A - 2.0)) * lnn);
        out.log_term1 = acc.value();
    }

    // terms 2 and 3 share the index set {i,j,t >= 0 : i+j+t = n(1-R),
    // j <= n(1-R)/(B(1-R)+1), i+j > 0}.  The factor (1+Bx/(n-Bx))^{(n-Bx+1)/2}
    // is only defined for Bx < n, which caps the usable i range; indices
    // beyond that cap are outside the display's domain and are skipped.
    const long long J = floor_idx(m / (B * (1.0 - R) + 1.0));
    const long long i_dom = floor_idx((n - 1e-9) / B - 1e-9);
    const long long cap = std::min(M, i_dom);
    auto log_g = [&](long long x, double n_exponent) {
        const double bx = B * static_cast<double>(x);
        return 0.5 * (n - bx + 1.0) * std::log1p(bx / (n - bx)) +
               static_cast<double>(x) * n_exponent * lnn;
    };

    // term 2 / calE: sum over (i,j) of g(i) g(j) with
    // g(x) = (1+Bx/(n-Bx))^{(n-Bx+1)/2} n^{x(1-lambda(B(1-R)-2))}
    {
        const double e2 = 1.0 - lam * (B * (1.0 - R) - 2.0);
        std::vector<double> prefix_all(static_cast<std::size_t>(cap) + 1);
        std::vector<double> prefix_pos(static_cast<std::size_t>(cap) + 1);
        double run_all = kNegInf, run_pos = kNegInf;
        for (long long x = 0; x <= cap; ++x) {
            const double lg = log_g(x, e2);
            run_all = lse2(run_all, lg);
            if (x >= 1) run_pos = lse2(run_pos, lg);
            prefix_all[static_cast<std::size_t>(x)] = run_all;
            prefix_pos[static_cast<std::size_t>(x)] = run_pos;
        }
        LogSumAccumulator acc;
        for (long long j = 0; j <= std::min(J, cap); ++j) {
            const long long icap = std::min(M - j, cap);
            const long long ilo = (j == 0) ? 1 : 0;
            if (icap < ilo) continue;
            const double pre = (j == 0) ? prefix_pos[static_cast<std::size_t>(icap)]
                                        : prefix_all[static_cast<std::size_t>(icap)];
            acc.add(log_g(j, e2) + pre);
        }
        out.log_term2_rel = acc.value();
        out.log_term2 = out.log_cal_e + out.log_term2_rel;
    }

    // term 3: for each (i,j,t), calE * g2(j) * n^{(j+t) q} * n^lambda / sqrt(calE)
    // with q = 1 + lambda(1/(AB-1) + 1/A - 1); reindex u = j+t (so i = M-u)
    {
        const double q = 1.0 + lam * (1.0 / (A * B - 1.0) + 1.0 / A - 1.0);
        std::vector<double> suffix(static_cast<std::size_t>(M) + 2, kNegInf);
        for (long long u = M; u >= 0; --u)
            suffix[static_cast<std::size_t>(u)] =
                lse2(suffix[static_cast<std::size_t>(u) + 1],
                     static_cast<double>(u) * q * lnn);
        double s_without_top = kNegInf;  // u in [0, M-1], for the j = 0 row
        for (long long u = 0; u < M; ++u)
            s_without_top =
                lse2(s_without_top, static_cast<double>(u) * q * lnn);
        const double e3 = lam * (2.0 - B * (1.0 - R));
        LogSumAccumulator acc;
        for (long long j = 0; j <= std::min(J, cap); ++j) {
            const double inner =
                (j == 0) ? s_without_top : suffix[static_cast<std::size_t>(j)];
            if (inner == kNegInf) continue;
            acc.add(log_g(j, e3) + inner);
        }
        out.log_term3_rel = lam * lnn - 0.5 * out.log_cal_e + acc.value();
        out.log_term3 = out.log_cal_e + out.log_term3_rel;
    }

    out.log_envelope_rel =
        std::log(3.0) - (2.0 * lam * R + delta_mse(ps)) * lnn;
    return out;
}

DualPackingPhis dual_packing_phis(const ParameterSet& ps, double n) {
    ps.validate();
    const double R = ps.rate, al = ps.alpha, be = ps.beta, B = ps.bigB;
    const double th = ps.vartheta, lam = ps.lambda;
    const double lnn = std::log(n);
    const double lnp = lam * lnn;
    const double m = n * (1.0 - R);
    const DualConstants dc = dual_constants(ps, n);

    DualPackingPhis out;
    out.phi1_exponent = 1.5 + lam + 2.0 * B - lam * B * (1.0 - R);
    out.phi1_exponent_negative = out.phi1_exponent < 0.0;

    // phi1 = sum_{t=1}^{floor(theta n(1-R))} (2^B (1-R))^t n^{t e1}
    {
        LogSumAccumulator acc;
        const long long t_hi = floor_idx(th * m);
        const double per_t = B * std::log(2.0) + std::log(1.0 - R) +
                             out.phi1_exponent * lnn;
        for (long long t = 1; t <= t_hi; ++t)
            acc.add(static_cast<double>(t) * per_t);
        out.log_phi1 = acc.value();
    }

    // phi2 = 2^{n(1-R)} p^{-(beta(1-R)-1) theta n(1-R)} (4/(beta theta (1-R)))^n
    out.log_phi2 = m * std::log(2.0) - (be * (1.0 - R) - 1.0) * th * m * lnp +
                   n * std::log(4.0 / (be * th * (1.0 - R)));

    // phi3 = sum over t of n^{n ln(8/(1-(1-R)/(2 alpha)))/ln n}
    //                      * n^{lambda(t - n(1-R)(1-(1-R)/alpha) - t/alpha)}
    {
        LogSumAccumulator acc;
        const double fixed = n * std::log(8.0 / (1.0 - (1.0 - R) / (2.0 * al)));
        const long long t_lo = ceil_idx(m / 2.0);
        const long long t_hi = floor_idx(n * (1.0 - R - dc.c1 / lnn));
        for (long long t = t_lo; t <= t_hi; ++t) {
            const double td = static_cast<double>(t);
            acc.add(fixed +
                    lam * (td - m * (1.0 - (1.0 - R) / al) - td / al) * lnn);
        }
        out.log_phi3 = acc.value();
    }

    // phi4 = n (e(1-R)ln n/c1)^{2 n c1/((1-R)ln n)} (1-c1/((1-R)ln n))^{-n} zeta^{n/2}
    {
        const double u = dc.c1 / ((1.0 - R) * lnn);
        out.log_phi4 = lnn +
                       (2.0 * n * u) *
                           std::log(std::numbers::e * (1.0 - R) * lnn / dc.c1) -
                       n * std::log1p(-u) + 0.5 * n * std::log(dc.zeta_n);
    }
    return out;
}

}  // namespace lda
