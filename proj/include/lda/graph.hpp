#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lda/fp.hpp"

namespace lda {

// Biregular bipartite Tanner graph: n variable nodes of degree dv on the
// left, m = n*dv/dc check nodes of degree dc on the right.  The graph is
// simple (no parallel edges).  Design rate R = 1 - dv/dc.
struct SkeletonGraph {
    int n = 0;
    int m = 0;
    int dv = 0;
    int dc = 0;
    // checks[i] = sorted variable indices adjacent to check i
    std::vector<std::vector<int>> checks;

    double rate() const { return 1.0 - static_cast<double>(dv) / dc; }

    // vars[j] = sorted check indices adjacent to variable j
    std::vector<std::vector<int>> variable_adjacency() const;

    // 0/1 incidence matrix with one row per check.
    FpMatrix incidence_matrix(std::uint32_t p) const;

    void validate() const;  // throws on degree / simplicity violations

    // Text serialization:
    //   n m dv dc
    //   i: v1 v2 ... v_dc     (m lines, neighbor lists sorted)
    void save(std::ostream& os) const;
    static SkeletonGraph load(std::istream& is);
    void save_file(const std::string& path) const;
    static SkeletonGraph load_file(const std::string& path);

    bool operator==(const SkeletonGraph&) const = default;
};

// Uniform simple (dv, dc)-biregular graph via the configuration model with
// rejection of parallel edges.  Deterministic in seed.  Throws
// std::runtime_error if max_resamples rejections are exhausted.
SkeletonGraph sample_regular_graph(int n, int dv, int dc, std::uint64_t seed,
                                   int max_resamples = 10000);

enum class Side { variables, checks };

// Union of neighborhoods of the given nodes (sorted, deduplicated).
std::vector<int> neighborhood(const SkeletonGraph& g, std::span<const int> s,
                              Side side);

// Vertex-expansion parameters.  Constraints (with R the design rate):
//   1 <= alpha < bigA
//   1/(1-R) < beta < min(2/(1-R), bigB)
//   0 < epsilon < (1-R)/bigA
//   0 < vartheta < 1/(bigB*(1-R))
struct ExpansionParams {
    double alpha = 1.0;
    double bigA = 2.0;
    double beta = 1.5;
    double bigB = 2.0;
    double epsilon = 0.1;
    double vartheta = 0.1;

    void validate(double rate) const;  // throws std::invalid_argument

    // epsilon = (1-R)/(A+1-R), vartheta = 1/(B(1-R)+1); the canonical
    // closures of the two free parameters.
    static ExpansionParams with_default_margins(double rate, double alpha,
                                                double bigA, double beta,
                                                double bigB);
};

enum class Verdict { certified, falsified, undecided };

struct PropertyReport {
    std::string name;          // "L1", "L2", "R1", "R2"
    Verdict verdict = Verdict::undecided;
    double factor = 0.0;       // required expansion |N(S)| >= factor*|S|
    int size_bound = 0;        // property applies to subsets up to this size
    int checked_up_to = 0;     // largest subset size actually examined
    std::uint64_t subsets_checked = 0;
    std::vector<int> witness;  // a violating subset, if falsified
};

struct ExpansionReport {
    std::vector<PropertyReport> properties;  // L1, L2, R1, R2 in order
    bool exhaustive = true;

    bool all_certified() const;
    const PropertyReport& property(const std::string& name) const;
};

enum class VerifyMode { exhaustive, sampled };

// Checks the four expansion properties:
//   L1: |S| <= ceil(eps*n)            ==> |N(S)| >= A|S|
//   L2: |S| <= ceil(n(1-R)/(2 alpha)) ==> |N(S)| >= alpha|S|
//   R1: |T| <= vartheta*n*(1-R)       ==> |N(T)| >= B|T|
//   R2: |T| <= n(1-R)/2               ==> |N(T)| >= beta|T|
// Exhaustive mode enumerates all subsets up to min(size bound, cap) and can
// certify; sampled mode draws random subsets and can only falsify.
ExpansionReport verify_expansion(const SkeletonGraph& g,
                                 const ExpansionParams& params,
                                 int subset_size_cap = 12,
                                 VerifyMode mode = VerifyMode::exhaustive,
                                 std::uint64_t samples = 0,
                                 std::uint64_t seed = 0);

// Binary entropy in bits; h(0) = h(1) = 0, domain [0, 1].
double binary_entropy(double a);

// Smallest left degree for which a random graph is expander-good with high
// probability, as the max of ten closed-form expressions in the expansion
// parameters.  Throws std::domain_error if an entropy argument leaves (0,1)
// or a denominator vanishes.
double variable_degree_threshold(double rate, const ExpansionParams& params);
std::array<double, 10> variable_degree_threshold_terms(
    double rate, const ExpansionParams& params);

}  // namespace lda
