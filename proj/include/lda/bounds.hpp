#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lda/graph.hpp"

namespace lda {

// Parameters of the random lattice family: code rate R, the prime-growth
// exponent lambda (p ~ n^lambda), and the six expansion constants of the
// underlying graph.  All bound evaluators below use the idealized convention
// log p = lambda * log n, so they are smooth functions of n rather than
// step functions over actual primes.
struct ParameterSet {
    double rate = 0.0;
    double lambda = 0.0;
    double alpha = 0.0;
    double bigA = 0.0;
    double beta = 0.0;
    double bigB = 0.0;
    double epsilon = 0.0;
    double vartheta = 0.0;

    ExpansionParams expansion() const;
    // Domain checks: 0 < R < 1, lambda > 0, plus the expansion-parameter
    // domain (1 <= alpha < A, 1/(1-R) < beta < min{2/(1-R), B}, margin
    // ranges for epsilon and vartheta).  Throws std::invalid_argument.
    void validate() const;
    // epsilon = (1-R)/(A+1-R), vartheta = 1/(B(1-R)+1): the margin closures
    // under which the variance and dual-packing bounds are stated.
    static ParameterSet with_default_margins(double rate, double lambda,
                                             double alpha, double bigA,
                                             double beta, double bigB);
};

// lambda must exceed the max of these brackets for the corresponding
// goodness statement.  Each *_terms function returns the individual bracket
// entries in display order; the plain function returns their maximum.
// Throws std::domain_error when a bracket denominator is not positive.
std::array<double, 7> lambda_threshold_main_terms(const ParameterSet& ps);
double lambda_threshold_main(const ParameterSet& ps);

std::array<double, 5> lambda_threshold_mse_terms(const ParameterSet& ps);
double lambda_threshold_mse(const ParameterSet& ps);

std::array<double, 3> lambda_threshold_awgn_terms(const ParameterSet& ps);
double lambda_threshold_awgn(const ParameterSet& ps);

std::array<double, 2> lambda_threshold_dual_terms(const ParameterSet& ps);
double lambda_threshold_dual(const ParameterSet& ps);

// The main and MSE threshold brackets disagree in one entry: one contains
// 2/(A-2(1-R)) where the other has 2/(A-2(1+R)).  Reports show both rather
// than guessing which sign is intended.
struct ThresholdComparison {
    double a_term_channel;  // 2/(A-2(1-R)), from the combined-goodness set
    double a_term_mse;      // 2/(A-2(1+R)), from the quantization set
    double main_threshold;
    double mse_threshold;
};
ThresholdComparison threshold_comparison(const ParameterSet& ps);

// delta = (1/2) min{lambda(A-2(1+R))-2, lambda(B(1-R)-2(1+R))-1}.
// Positive whenever the MSE-quantization hypotheses hold; may be <= 0
// outside them (callers decide whether that is an error).
double delta_mse(const ParameterSet& ps);

// Constants of the dual-packing argument at blocklength n:
//   c1     = ln(8/(1-(1-R)/(2 alpha))) / (lambda (1-(1-R)/alpha))
//   zeta_n = n^{-4/n} (c1/(e(1-R)ln n))^{4 c1/((1-R)ln n)} (1-c1/((1-R)ln n))^2
//   r_n    = p^R zeta_n / V_n^{1/n}   (the test radius; logs returned)
struct DualConstants {
    double c1 = 0.0;
    double zeta_n = 0.0;
    double log_r_n = 0.0;
    double log_r_eff_dual = 0.0;  // p^R / V_n^{1/n}
};
DualConstants dual_constants(const ParameterSet& ps, double n);

// n^{-(2 lambda + delta)}: the non-full-rank probability bound.
double fullrank_failure_bound(double n, double lambda, double delta);

// How the integer-point count inside the variance evaluation was obtained.
// Effective radius of a rate-R modulus-n^lambda instance (volume n^{lambda
// n(1-R)}), inflated by (1 + n^{-omega}); the radius the variance sums are
// evaluated at.
double variance_rho(const ParameterSet& ps, double n, double omega = 0.25);

enum class CountMode { supplied, exact, surrogate };

// The three variance bounds for the number of lattice points in a ball of
// radius rho, evaluated literally at finite n in the log domain.  The count
// factor calE(rho) = count^2 / p^{2n(1-R)} multiplies terms 2 and 3; the
// *_rel fields divide it back out, which is the ratio the Chebyshev step
// actually uses, and log_envelope_rel = log(3 n^{-2 lambda R - delta}) is
// the claimed asymptotic cap on each such ratio (advisory at finite n).
struct VarianceTerms {
    double log_term1 = 0.0;
    double log_term2 = 0.0;
    double log_term3 = 0.0;
    double log_term2_rel = 0.0;
    double log_term3_rel = 0.0;
    double log_count = 0.0;
    double log_cal_e = 0.0;
    double log_envelope_rel = 0.0;
    CountMode mode = CountMode::surrogate;
};
// The ball count is taken from supplied_log_count when given; otherwise it
// is enumerated exactly (origin-centered) when n is a small integer and the
// budget allows, else replaced by the upper sandwich bound V_n(rho+sqrt(n)/2)^n.
VarianceTerms variance_terms(const ParameterSet& ps, double n, double rho,
                             std::int64_t count_budget,
                             std::optional<double> supplied_log_count = {});

// The four dual-packing regime bounds (logs).  phi1's geometric sum only
// decays when 3/2 + lambda + 2B - lambda B(1-R) < 0; the exponent and its
// sign are reported so callers can flag parameters outside that hypothesis.
struct DualPackingPhis {
    double log_phi1 = 0.0;
    double log_phi2 = 0.0;
    double log_phi3 = 0.0;
    double log_phi4 = 0.0;
    double phi1_exponent = 0.0;
    bool phi1_exponent_negative = false;
};
DualPackingPhis dual_packing_phis(const ParameterSet& ps, double n);

// A labeled bound evaluated on an increasing n-grid, ready for emission.
struct BoundCurve {
    std::string label;
    std::vector<double> grid;
    std::vector<double> values;
};

}  // namespace lda
