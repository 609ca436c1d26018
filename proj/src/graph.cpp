#include "lda/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "lda/rng.hpp"

namespace lda {

std::vector<std::vector<int>> SkeletonGraph::variable_adjacency() const {
    std::vector<std::vector<int>> vars(n);
    for (int i = 0; i < m; ++i)
        for (int v : checks[i]) vars[v].push_back(i);
    for (auto& a : vars) std::sort(a.begin(), a.end());
    return vars;
}

FpMatrix SkeletonGraph::incidence_matrix(std::uint32_t p) const {
    FpMatrix h(m, n, p);
    for (int i = 0; i < m; ++i)
        for (int v : checks[i]) h.set(i, v, 1);
    return h;
}

void SkeletonGraph::validate() const {
    if (n <= 0 || m <= 0 || dv <= 0 || dc <= 0)
        throw std::invalid_argument("SkeletonGraph: non-positive parameter");
    if (static_cast<long long>(n) * dv != static_cast<long long>(m) * dc)
        throw std::invalid_argument("SkeletonGraph: n*dv != m*dc");
    if (static_cast<int>(checks.size()) != m)
        throw std::invalid_argument("SkeletonGraph: wrong number of checks");
    std::vector<int> vdeg(n, 0);
    for (const auto& row : checks) {
        if (static_cast<int>(row.size()) != dc)
            throw std::invalid_argument("SkeletonGraph: check degree != dc");
        for (std::size_t k = 0; k < row.size(); ++k) {
            const int v = row[k];
            if (v < 0 || v >= n)
                throw std::invalid_argument("SkeletonGraph: variable out of range");
            if (k > 0 && row[k] <= row[k - 1])
                throw std::invalid_argument(
                    "SkeletonGraph: neighbor list not strictly increasing");
            ++vdeg[v];
        }
    }
    for (int v = 0; v < n; ++v)
        if (vdeg[v] != dv)
            throw std::invalid_argument("SkeletonGraph: variable degree != dv");
}

void SkeletonGraph::save(std::ostream& os) const {
    os << n << ' ' << m << ' ' << dv << ' ' << dc << '\n';
    for (int i = 0; i < m; ++i) {
        os << i << ':';
        for (int v : checks[i]) os << ' ' << v;
        os << '\n';
    }
}

SkeletonGraph SkeletonGraph::load(std::istream& is) {
    SkeletonGraph g;
    if (!(is >> g.n >> g.m >> g.dv >> g.dc))
        throw std::runtime_error("SkeletonGraph::load: bad header");
    g.checks.assign(g.m, {});
    std::string line;
    std::getline(is, line);  // rest of header line
    for (int i = 0; i < g.m; ++i) {
        if (!std::getline(is, line))
            throw std::runtime_error("SkeletonGraph::load: truncated file");
        std::istringstream ls(line);
        int idx = 0;
        char colon = 0;
        if (!(ls >> idx >> colon) || colon != ':' || idx != i)
            throw std::runtime_error("SkeletonGraph::load: bad check line");
        int v = 0;
        while (ls >> v) g.checks[i].push_back(v);
    }
    g.validate();
    return g;
}

void SkeletonGraph::save_file(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    save(f);
}

SkeletonGraph SkeletonGraph::load_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    return load(f);
}

SkeletonGraph sample_regular_graph(int n, int dv, int dc, std::uint64_t seed,
                                   int max_resamples) {
    if (n <= 0 || dv <= 0 || dc <= 0)
        throw std::invalid_argument("sample_regular_graph: non-positive arg");
    if ((static_cast<long long>(n) * dv) % dc != 0)
        throw std::invalid_argument("sample_regular_graph: dc must divide n*dv");
    if (dv >= dc)
        throw std::invalid_argument("sample_regular_graph: need dv < dc for R > 0");
    const int m = static_cast<int>(static_cast<long long>(n) * dv / dc);
    if (dc > n)
        throw std::invalid_argument("sample_regular_graph: dc > n cannot be simple");

    Rng rng(seed);
    const int sockets = n * dv;
    std::vector<int> match(sockets);
    for (int attempt = 0; attempt < max_resamples; ++attempt) {
        // uniform matching of variable sockets to check sockets
        for (int s = 0; s < sockets; ++s) match[s] = s;
        rng.shuffle(match);
        SkeletonGraph g;
        g.n = n; g.m = m; g.dv = dv; g.dc = dc;
        g.checks.assign(m, {});
        bool simple = true;
        for (int s = 0; s < sockets && simple; ++s) {
            const int v = s / dv;
            const int c = match[s] / dc;
            // reject parallel edges; degree-dc lists stay tiny so linear scan is fine
            for (int w : g.checks[c])
                if (w == v) { simple = false; break; }
            if (simple) g.checks[c].push_back(v);
        }
        if (!simple) continue;
        for (auto& row : g.checks) std::sort(row.begin(), row.end());
        g.validate();
        return g;
    }
    throw std::runtime_error(
        "sample_regular_graph: no simple graph found within resample budget");
}

std::vector<int> neighborhood(const SkeletonGraph& g, std::span<const int> s,
                              Side side) {
    std::vector<char> seen(side == Side::variables ? g.m : g.n, 0);
    if (side == Side::variables) {
        const auto vars = g.variable_adjacency();
        for (int v : s) {
            if (v < 0 || v >= g.n)
                throw std::invalid_argument("neighborhood: node out of range");
            for (int c : vars[v]) seen[c] = 1;
        }
    } else {
        for (int c : s) {
            if (c < 0 || c >= g.m)
                throw std::invalid_argument("neighborhood: node out of range");
            for (int v : g.checks[c]) seen[v] = 1;
        }
    }
    std::vector<int> out;
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (seen[i]) out.push_back(static_cast<int>(i));
    return out;
}

void ExpansionParams::validate(double rate) const {
    if (!(rate > 0.0) || !(rate < 1.0))
        throw std::invalid_argument("ExpansionParams: rate outside (0,1)");
    if (!(alpha >= 1.0) || !(alpha < bigA))
        throw std::invalid_argument("ExpansionParams: need 1 <= alpha < A");
    const double lo = 1.0 / (1.0 - rate);
    const double hi = std::min(2.0 / (1.0 - rate), bigB);
    if (!(beta > lo) || !(beta < hi))
        throw std::invalid_argument(
            "ExpansionParams: need 1/(1-R) < beta < min(2/(1-R), B)");
    if (!(epsilon > 0.0) || !(epsilon < (1.0 - rate) / bigA))
        throw std::invalid_argument("ExpansionParams: need 0 < eps < (1-R)/A");
    if (!(vartheta > 0.0) || !(vartheta < 1.0 / (bigB * (1.0 - rate))))
        throw std::invalid_argument(
            "ExpansionParams: need 0 < vartheta < 1/(B(1-R))");
}

ExpansionParams ExpansionParams::with_default_margins(double rate, double alpha,
                                                      double bigA, double beta,
                                                      double bigB) {
    ExpansionParams p;
    p.alpha = alpha;
    p.bigA = bigA;
    p.beta = beta;
    p.bigB = bigB;
    p.epsilon = (1.0 - rate) / (bigA + 1.0 - rate);
    p.vartheta = 1.0 / (bigB * (1.0 - rate) + 1.0);
    p.validate(rate);
    return p;
}

bool ExpansionReport::all_certified() const {
    for (const auto& p : properties)
        if (p.verdict != Verdict::certified) return false;
    return !properties.empty();
}

const PropertyReport& ExpansionReport::property(const std::string& name) const {
    for (const auto& p : properties)
        if (p.name == name) return p;
    throw std::invalid_argument("ExpansionReport: unknown property " + name);
}

namespace {

// Neighbor sets as 64-bit masks, for exhaustive subset enumeration on
// small graphs.
std::vector<std::uint64_t> neighbor_masks(const SkeletonGraph& g, Side side) {
    const int nodes = side == Side::variables ? g.n : g.m;
    std::vector<std::uint64_t> mask(nodes, 0);
    if (side == Side::variables) {
        for (int i = 0; i < g.m; ++i)
            for (int v : g.checks[i]) mask[v] |= 1ULL << i;
    } else {
        for (int i = 0; i < g.m; ++i)
            for (int v : g.checks[i]) mask[i] |= 1ULL << v;
    }
    return mask;
}

struct PropertySpec {
    std::string name;
    Side side;
    double factor;
    int size_bound;
};

// A subset S violates the property when |N(S)| < factor * |S|; the small
// slack absorbs floating-point noise in factor * |S|.
bool violates(int neighbors, double factor, int subset_size) {
    return neighbors < factor * subset_size - 1e-9;
}

PropertyReport check_exhaustive(const PropertySpec& spec,
                                const std::vector<std::uint64_t>& masks,
                                int subset_size_cap) {
    PropertyReport rep;
    rep.name = spec.name;
    rep.factor = spec.factor;
    rep.size_bound = spec.size_bound;
    const int nodes = static_cast<int>(masks.size());
    const int limit = std::max(std::min({spec.size_bound, subset_size_cap, nodes}), 0);
    rep.checked_up_to = limit;
    if (spec.size_bound <= 0) {
        rep.verdict = Verdict::certified;  // vacuous: no sizes in range
        return rep;
    }
    std::vector<int> idx;
    for (int s = 1; s <= limit; ++s) {
        // lexicographic enumeration of all size-s subsets
        idx.resize(s);
        for (int i = 0; i < s; ++i) idx[i] = i;
        while (true) {
            std::uint64_t nb = 0;
            for (int i : idx) nb |= masks[i];
            ++rep.subsets_checked;
            if (violates(std::popcount(nb), spec.factor, s)) {
                rep.verdict = Verdict::falsified;
                rep.witness = idx;
                return rep;
            }
            int i = s - 1;
            while (i >= 0 && idx[i] == nodes - s + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (int j = i + 1; j < s; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    rep.verdict =
        limit >= std::min(spec.size_bound, nodes) ? Verdict::certified
                                                  : Verdict::undecided;
    return rep;
}

// Sampled mode draws random subsets; it can falsify but never certify.
PropertyReport check_sampled(const PropertySpec& spec,
                             const std::vector<std::vector<int>>& adjacency,
                             int other_side, std::uint64_t samples, Rng& rng) {
    PropertyReport rep;
    rep.name = spec.name;
    rep.factor = spec.factor;
    rep.size_bound = spec.size_bound;
    const int nodes = static_cast<int>(adjacency.size());
    const int max_size = std::min(spec.size_bound, nodes);
    rep.checked_up_to = std::max(max_size, 0);
    if (spec.size_bound <= 0) {
        rep.verdict = Verdict::certified;
        return rep;
    }
    std::vector<int> pool(nodes);
    std::vector<char> seen(other_side);
    for (std::uint64_t t = 0; t < samples; ++t) {
        const int s =
            1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_size)));
        for (int i = 0; i < nodes; ++i) pool[i] = i;
        // partial Fisher-Yates: first s entries become the subset
        for (int i = 0; i < s; ++i) {
            const int j =
                i + static_cast<int>(rng.below(static_cast<std::uint64_t>(nodes - i)));
            std::swap(pool[i], pool[j]);
        }
        std::fill(seen.begin(), seen.end(), 0);
        int nb = 0;
        for (int i = 0; i < s; ++i)
            for (int w : adjacency[pool[i]])
                if (!seen[w]) { seen[w] = 1; ++nb; }
        ++rep.subsets_checked;
        if (violates(nb, spec.factor, s)) {
            rep.verdict = Verdict::falsified;
            rep.witness.assign(pool.begin(), pool.begin() + s);
            std::sort(rep.witness.begin(), rep.witness.end());
            return rep;
        }
    }
    rep.verdict = Verdict::undecided;
    return rep;
}

}  // namespace

ExpansionReport verify_expansion(const SkeletonGraph& g,
                                 const ExpansionParams& params,
                                 int subset_size_cap, VerifyMode mode,
                                 std::uint64_t samples, std::uint64_t seed) {
    g.validate();
    const double r = g.rate();
    params.validate(r);
    const double co_dim = g.n * (1.0 - r);  // = m, kept in the formulas' shape

    const std::array<PropertySpec, 4> specs = {{
        {"L1", Side::variables, params.bigA,
         static_cast<int>(std::ceil(params.epsilon * g.n - 1e-12))},
        {"L2", Side::variables, params.alpha,
         static_cast<int>(std::ceil(co_dim / (2.0 * params.alpha) - 1e-12))},
        {"R1", Side::checks, params.bigB,
         static_cast<int>(std::floor(params.vartheta * co_dim + 1e-12))},
        {"R2", Side::checks, params.beta,
         static_cast<int>(std::floor(co_dim / 2.0 + 1e-12))},
    }};

    ExpansionReport report;
    report.exhaustive = mode == VerifyMode::exhaustive;
    Rng rng(seed);
    if (mode == VerifyMode::exhaustive) {
        if (g.n > 64 || g.m > 64)
            throw std::invalid_argument(
                "verify_expansion: exhaustive mode limited to 64 nodes per side");
        const auto var_masks = neighbor_masks(g, Side::variables);
        const auto chk_masks = neighbor_masks(g, Side::checks);
        for (const auto& spec : specs) {
            const auto& masks =
                spec.side == Side::variables ? var_masks : chk_masks;
            report.properties.push_back(
                check_exhaustive(spec, masks, subset_size_cap));
        }
    } else {
        const auto vars = g.variable_adjacency();
        for (const auto& spec : specs) {
            const auto& adjacency =
                spec.side == Side::variables ? vars : g.checks;
            const int other = spec.side == Side::variables ? g.m : g.n;
            report.properties.push_back(
                check_sampled(spec, adjacency, other, samples, rng));
        }
    }
    return report;
}

double binary_entropy(double a) {
    if (!(a >= 0.0) || !(a <= 1.0))
        throw std::domain_error("binary_entropy: argument outside [0,1]");
    if (a == 0.0 || a == 1.0) return 0.0;
    return -a * std::log2(a) - (1.0 - a) * std::log2(1.0 - a);
}

namespace {

// entropy argument that must lie strictly inside (0,1) for the threshold
// expressions to make sense
double h2_open(double a) {
    if (!(a > 0.0) || !(a < 1.0))
        throw std::domain_error(
            "variable_degree_threshold: entropy argument outside (0,1)");
    return binary_entropy(a);
}

double guarded_div(double num, double den) {
    if (den == 0.0)
        throw std::domain_error("variable_degree_threshold: division by zero");
    return num / den;
}

}  // namespace

std::array<double, 10> variable_degree_threshold_terms(
    double rate, const ExpansionParams& ps) {
    ps.validate(rate);
    const double r = rate;
    const double cr = 1.0 - r;  // co-rate 1-R
    const double al = ps.alpha, A = ps.bigA, be = ps.beta, B = ps.bigB;
    const double eps = ps.epsilon, th = ps.vartheta;

    std::array<double, 10> t{};
    t[0] = guarded_div(h2_open(cr / (2.0 * al)) + cr,
                       h2_open(cr / (2.0 * al)) - 0.5 * h2_open(cr / al));
    t[1] = r + 2.0 * al;
    t[2] = A + 1.0;
    t[3] = guarded_div(h2_open(eps) + cr * h2_open(A * eps / cr),
                       h2_open(eps) - (A * eps / cr) * h2_open(cr / A));
    t[4] = guarded_div(cr + h2_open(be * cr / 2.0),
                       1.0 - (be * cr / 2.0) * h2_open(1.0 / (be * cr)));
    t[5] = guarded_div((2.0 + be * r) * cr, 2.0 - be * cr);
    t[6] = cr * (B + 1.0);
    t[7] = guarded_div(cr * h2_open(th) + h2_open(B * th * cr),
                       h2_open(th) - B * th * cr * h2_open(1.0 / (B * cr)));
    t[8] = guarded_div((A + 1.0) * cr - A * eps * (2.0 - r), cr - A * eps);
    t[9] = guarded_div(B + 1.0 - th * B * (2.0 - r), 1.0 / cr - th * B);
    return t;
}

double variable_degree_threshold(double rate, const ExpansionParams& ps) {
    const auto terms = variable_degree_threshold_terms(rate, ps);
    double mx = terms[0];
    for (double v : terms) mx = std::max(mx, v);
    return mx;
}

}  // namespace lda
