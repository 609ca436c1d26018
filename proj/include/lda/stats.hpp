#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace lda {

// 95% two-sided normal quantile, used for every confidence interval in the
// toolkit so that intervals from different experiments are comparable.
inline constexpr double kZ95 = 1.959963984540054;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// Wilson score interval for a binomial proportion.  Behaves sensibly at
// zero or full counts, unlike the Wald interval.
inline Interval wilson_interval(std::int64_t successes, std::int64_t trials,
                                double z = kZ95) {
    if (trials <= 0) throw std::invalid_argument("wilson_interval: trials <= 0");
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2.0 * n)) / denom;
    const double hw =
        z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    Interval ci;
    ci.lo = center - hw;
    ci.hi = center + hw;
    if (ci.lo < 0.0) ci.lo = 0.0;
    if (ci.hi > 1.0) ci.hi = 1.0;
    // rounding in center/hw must never push the band off the estimate
    if (ci.lo > phat) ci.lo = phat;
    if (ci.hi < phat) ci.hi = phat;
    return ci;
}

// Running mean / variance (Welford).
class MeanAccumulator {
public:
    void add(double x) {
        ++count_;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(count_);
        m2_ += d * (x - mean_);
    }
    // Merge another accumulator; used to combine per-worker partial sums in
    // a fixed order so results are reproducible for a given worker count.
    void merge(const MeanAccumulator& o) {
        if (o.count_ == 0) return;
        if (count_ == 0) { *this = o; return; }
        const double na = static_cast<double>(count_);
        const double nb = static_cast<double>(o.count_);
        const double d = o.mean_ - mean_;
        mean_ += d * nb / (na + nb);
        m2_ += o.m2_ + d * d * na * nb / (na + nb);
        count_ += o.count_;
    }
    std::int64_t count() const { return count_; }
    double mean() const { return mean_; }
    double variance() const {
        return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
    }
    double stderr_mean() const {
        return count_ > 0 ? std::sqrt(variance() / static_cast<double>(count_))
                          : 0.0;
    }

private:
    std::int64_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

namespace detail {

// Regularized incomplete gamma functions, series / continued fraction split
// as in the classic numerical recipes.  Sufficient accuracy for chi-square
// p-values at the sample sizes used here.
inline double gamma_p_series(double a, double x) {
    const double gln = std::lgamma(a);
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-15)
            return sum * std::exp(-x + a * std::log(x) - gln);
    }
    throw std::runtime_error("gamma_p_series: no convergence");
}

inline double gamma_q_contfrac(double a, double x) {
    const double gln = std::lgamma(a);
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-15)
            return std::exp(-x + a * std::log(x) - gln) * h;
    }
    throw std::runtime_error("gamma_q_contfrac: no convergence");
}

}  // namespace detail

// Upper regularized incomplete gamma Q(a, x) = Gamma(a,x)/Gamma(a).
inline double gamma_q(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw std::invalid_argument("gamma_q: bad args");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
    return detail::gamma_q_contfrac(a, x);
}

// Survival function of the chi-square distribution with dof degrees of
// freedom, i.e. the p-value of an observed statistic.
inline double chi_square_pvalue(double statistic, int dof) {
    if (dof <= 0) throw std::invalid_argument("chi_square_pvalue: dof <= 0");
    return gamma_q(0.5 * dof, 0.5 * statistic);
}

// Numerically stable log(sum(exp(...))) accumulator for log-domain sums.
class LogSumAccumulator {
public:
    void add(double log_term) {
        if (log_term == -std::numeric_limits<double>::infinity()) return;
        if (log_sum_ == -std::numeric_limits<double>::infinity()) {
            log_sum_ = log_term;
            return;
        }
        const double hi = log_sum_ > log_term ? log_sum_ : log_term;
        const double lo = log_sum_ > log_term ? log_term : log_sum_;
        log_sum_ = hi + std::log1p(std::exp(lo - hi));
    }
    double value() const { return log_sum_; }

private:
    double log_sum_ = -std::numeric_limits<double>::infinity();
};

}  // namespace lda
