#include "lda/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "lda/decode.hpp"
#include "lda/errors.hpp"
#include "lda/parallel.hpp"
#include "lda/rng.hpp"

namespace lda {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double two_pi_e() { return 2.0 * std::numbers::pi * std::numbers::e; }

// x = c + p w for the transmitted codeword; with w = 0 the representative
// in [0, p)^n is itself a lattice point.
std::vector<long long> lift_codeword(std::span<const std::uint32_t> c) {
    std::vector<long long> x(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) x[i] = c[i];
    return x;
}

std::vector<std::uint32_t> random_codeword(const ConstructionALattice& l,
                                           Rng& rng) {
    const FpMatrix& basis = l.code_basis();
    const std::uint32_t p = l.modulus();
    std::vector<std::uint32_t> c(static_cast<std::size_t>(l.dimension()), 0);
    for (int i = 0; i < basis.rows(); ++i) {
        const std::uint64_t mi = rng.below(p);
        if (mi == 0) continue;
        for (int j = 0; j < basis.cols(); ++j)
            c[static_cast<std::size_t>(j)] = static_cast<std::uint32_t>(
                (c[static_cast<std::size_t>(j)] + mi * basis.at(i, j)) % p);
    }
    return c;
}

}  // namespace

double sigma_for_vnr(const ConstructionALattice& l, double vnr) {
    if (!(vnr > 0.0)) throw std::invalid_argument("sigma_for_vnr: vnr <= 0");
    const double vol_pow =
        std::exp(2.0 / l.dimension() * l.log_volume());
    return std::sqrt(vol_pow / (two_pi_e() * vnr));
}

ErrorRateCurve awgn_error_experiment(const ConstructionALattice& l,
                                     const AwgnConfig& cfg) {
    if (cfg.trials <= 0)
        throw std::invalid_argument("awgn_error_experiment: trials <= 0");
    const int n = l.dimension();
    const double vol_pow = std::exp(2.0 / n * l.log_volume());

    // shared decoder state, built once; decode paths are const
    std::optional<ExactCvp> cvp;
    if (cfg.decoder == DecoderKind::ml) cvp.emplace(l, cfg.cvp_budget);

    ErrorRateCurve curve;
    curve.rows.reserve(cfg.sigma_grid.size());
    for (double sigma : cfg.sigma_grid) {
        if (sigma < 0.0)
            throw std::invalid_argument("awgn_error_experiment: sigma < 0");
        const int workers = std::max(1, cfg.workers);
        std::vector<std::int64_t> errors(static_cast<std::size_t>(workers), 0);
        for_each_chunk(cfg.trials, workers, [&](int w, std::int64_t b,
                                                std::int64_t e) {
            std::vector<double> y(static_cast<std::size_t>(n));
            for (std::int64_t t = b; t < e; ++t) {
                // the noise stream depends only on the trial index, so the
                // same unit vector is reused across the whole sigma grid
                Rng noise(derive_seed(cfg.seed, 2 * static_cast<std::uint64_t>(t)));
                std::vector<long long> x(static_cast<std::size_t>(n), 0);
                if (cfg.random_codeword) {
                    Rng word(derive_seed(cfg.seed,
                                         2 * static_cast<std::uint64_t>(t) + 1));
                    x = lift_codeword(random_codeword(l, word));
                }
                for (int j = 0; j < n; ++j)
                    y[static_cast<std::size_t>(j)] =
                        static_cast<double>(x[static_cast<std::size_t>(j)]) +
                        sigma * noise.gaussian();

                bool error = false;
                if (cfg.decoder == DecoderKind::ml) {
                    const CvpResult r = cvp->decode(y);
                    error = r.point != x;
                } else {
                    const double s_eff = std::max(sigma, 1e-12);
                    const LatticeDecodeResult r =
                        lattice_decode_bp(l, y, s_eff, cfg.bp_iters);
                    error = r.point != x;
                }
                if (error) ++errors[static_cast<std::size_t>(w)];
            }
        });
        std::int64_t total = 0;
        for (std::int64_t c : errors) total += c;

        ErrorRatePoint row;
        row.sigma = sigma;
        row.vnr = sigma > 0.0
                      ? vol_pow / (two_pi_e() * sigma * sigma)
                      : std::numeric_limits<double>::infinity();
        row.trials = cfg.trials;
        row.errors = total;
        row.wer = static_cast<double>(total) / static_cast<double>(cfg.trials);
        row.ci = wilson_interval(total, cfg.trials);
        curve.rows.push_back(row);
    }
    return curve;
}

ExceedanceTable semi_norm_ergodic_check(NoiseKind kind,
                                        std::span<const int> n_grid,
                                        double delta, std::int64_t trials,
                                        std::uint64_t seed, int workers,
                                        int df) {
    if (trials <= 0)
        throw std::invalid_argument("semi_norm_ergodic_check: trials <= 0");
    if (kind == NoiseKind::student_t_iid && df < 3)
        throw std::invalid_argument(
            "semi_norm_ergodic_check: student_t needs df >= 3 for a finite "
            "variance to normalize by");
    const double t_scale =
        kind == NoiseKind::student_t_iid
            ? std::sqrt((static_cast<double>(df) - 2.0) / df)
            : 0.0;
    const double root3 = std::sqrt(3.0);

    ExceedanceTable table;
    table.kind = kind;
    table.delta = delta;
    table.df = kind == NoiseKind::student_t_iid ? df : 0;
    for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
        const int n = n_grid[gi];
        if (n <= 0)
            throw std::invalid_argument("semi_norm_ergodic_check: n <= 0");
        const double threshold = (1.0 + delta) * n;  // sigma^2 = 1 per component
        const int w = std::max(1, workers);
        std::vector<std::int64_t> exceed(static_cast<std::size_t>(w), 0);
        for_each_chunk(trials, w, [&](int wi, std::int64_t b, std::int64_t e) {
            for (std::int64_t t = b; t < e; ++t) {
                Rng rng(derive_seed(
                    seed, (static_cast<std::uint64_t>(gi) << 40) +
                              static_cast<std::uint64_t>(t)));
                double norm2 = 0.0;
                for (int j = 0; j < n; ++j) {
                    double z;
                    switch (kind) {
                        case NoiseKind::gaussian_iid: z = rng.gaussian(); break;
                        case NoiseKind::uniform_iid:
                            z = rng.uniform(-root3, root3);
                            break;
                        default: z = rng.student_t(df) * t_scale; break;
                    }
                    norm2 += z * z;
                }
                if (norm2 > threshold) ++exceed[static_cast<std::size_t>(wi)];
            }
        });
        std::int64_t total = 0;
        for (std::int64_t c : exceed) total += c;

        ExceedanceRow row;
        row.n = n;
        row.trials = trials;
        row.exceed = total;
        row.frequency = static_cast<double>(total) / static_cast<double>(trials);
        row.ci = wilson_interval(total, trials);
        table.rows.push_back(row);
    }
    return table;
}

SeedMetrics instance_metrics(const ConstructionALattice& l, std::uint64_t seed,
                             const GoodnessConfig& cfg) {
    SeedMetrics m;
    m.seed = seed;
    m.full_rank = l.full_rank();
    m.log_volume = l.log_volume();
    m.r_eff = effective_radius(l);
    m.r_pack = kNan;
    m.ratio = kNan;
    try {
        m.r_pack = packing_radius(l, cfg.cvp_budget).radius;
        m.ratio = m.r_pack / m.r_eff;
    } catch (const BudgetExceeded&) {
        m.skipped.push_back("r_pack");
    }
    if (cfg.nsm_samples > 0) {
        try {
            m.nsm = nsm_estimate(l, cfg.nsm_samples, derive_seed(seed, 1002),
                                 Quantizer::exact_cvp, cfg.workers,
                                 cfg.cvp_budget);
        } catch (const BudgetExceeded&) {
            m.skipped.push_back("nsm");
        }
    }
    if (cfg.wer_trials > 0 && !cfg.vnr_points.empty()) {
        AwgnConfig a;
        for (double vnr : cfg.vnr_points)
            a.sigma_grid.push_back(sigma_for_vnr(l, vnr));
        a.trials = cfg.wer_trials;
        a.decoder = cfg.wer_decoder;
        a.seed = derive_seed(seed, 1001);
        a.workers = cfg.workers;
        a.cvp_budget = cfg.cvp_budget;
        try {
            m.wer = awgn_error_experiment(l, a);
        } catch (const BudgetExceeded&) {
            m.skipped.push_back("wer");
        }
    }
    return m;
}

MetricsReport goodness_report(const SkeletonGraph& g, std::uint32_t p,
                              const GoodnessConfig& cfg) {
    if (cfg.seeds <= 0)
        throw std::invalid_argument("goodness_report: seeds <= 0");
    MetricsReport rep;
    rep.n = g.n;
    rep.p = p;
    rep.dv = g.dv;
    rep.dc = g.dc;
    rep.master_seed = cfg.master_seed;

    std::vector<double> r_effs, r_packs, ratios, nsms;
    for (int i = 0; i < cfg.seeds; ++i) {
        const std::uint64_t seed_i =
            derive_seed(cfg.master_seed, static_cast<std::uint64_t>(i));
        ConstructionALattice l(randomize_skeleton(g, p, seed_i));
        SeedMetrics m = instance_metrics(l, seed_i, cfg);
        if (m.full_rank) ++rep.fullrank_count;
        r_effs.push_back(m.r_eff);
        r_packs.push_back(m.r_pack);
        ratios.push_back(m.ratio);
        if (m.nsm.samples > 0) nsms.push_back(m.nsm.mean);
        rep.per_seed.push_back(std::move(m));
    }
    rep.median_r_eff = median(std::move(r_effs));
    rep.median_r_pack = median(std::move(r_packs));
    rep.median_ratio = median(std::move(ratios));
    rep.median_nsm = median(std::move(nsms));
    return rep;
}

double median(std::vector<double> v) {
    std::erase_if(v, [](double x) { return std::isnan(x); });
    if (v.empty()) return kNan;
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

// --- table emission ----------------------------------------------------------

namespace {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
    std::string s = os.str();
    // keep a float marker so the reader does not reparse 2.0 as an integer
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') out += '"';
    }
    out += '"';
    return out;
}

std::string cell_to_csv(const Cell& c) {
    if (std::holds_alternative<std::int64_t>(c))
        return std::to_string(std::get<std::int64_t>(c));
    if (std::holds_alternative<double>(c))
        return format_double(std::get<double>(c));
    return csv_quote(std::get<std::string>(c));
}

bool looks_integer(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9') return false;
    return true;
}

Cell csv_to_cell(const std::string& field, bool quoted) {
    if (quoted) return field;
    if (looks_integer(field)) return static_cast<std::int64_t>(std::strtoll(field.c_str(), nullptr, 10));
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end != field.c_str() && *end == '\0') return v;
    return field;  // unquoted legacy string
}

// one CSV record; returns fields plus per-field quoted flags
void split_csv_line(const std::string& line, std::vector<std::string>* fields,
                    std::vector<bool>* quoted) {
    fields->clear();
    quoted->clear();
    std::string cur;
    bool in_quotes = false, was_quoted = false;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        const char c = i < line.size() ? line[i] : ',';
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"' && cur.empty()) {
            in_quotes = true;
            was_quoted = true;
        } else if (c == ',') {
            fields->push_back(cur);
            quoted->push_back(was_quoted);
            cur.clear();
            was_quoted = false;
        } else {
            cur += c;
        }
    }
}

nlohmann::ordered_json cell_to_json(const Cell& c) {
    if (std::holds_alternative<std::int64_t>(c)) return std::get<std::int64_t>(c);
    if (std::holds_alternative<double>(c)) {
        const double v = std::get<double>(c);
        if (std::isfinite(v)) return v;
        return format_double(v);  // "inf" / "-inf" / "nan"
    }
    const std::string& s = std::get<std::string>(c);
    // those markers read back as doubles, so a string cell carrying one
    // would silently change type; refuse instead
    if (s == "inf" || s == "-inf" || s == "nan")
        throw std::invalid_argument(
            "emit: string cell collides with a non-finite number marker");
    return s;
}

Cell json_to_cell(const nlohmann::ordered_json& v) {
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_unsigned())
        return static_cast<std::int64_t>(v.get<std::uint64_t>());
    if (v.is_number_float()) return v.get<double>();
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return kNan;
        return s;
    }
    throw std::runtime_error("table cell is not a scalar");
}

}  // namespace

void Table::add_config(const std::string& key, const std::string& value) {
    config.emplace_back(key, value);
}
void Table::add_config(const std::string& key, double value) {
    config.emplace_back(key, format_double(value));
}
void Table::add_config(const std::string& key, std::int64_t value) {
    config.emplace_back(key, std::to_string(value));
}

Table to_table(const ErrorRateCurve& curve) {
    Table t;
    t.columns = {"sigma",  "vnr", "trials", "word_errors",
                 "wer",    "ci_low", "ci_hi"};
    for (const ErrorRatePoint& r : curve.rows)
        t.rows.push_back({r.sigma, r.vnr, r.trials, r.errors, r.wer, r.ci.lo,
                          r.ci.hi});
    return t;
}

Table to_table(const ExceedanceTable& table) {
    Table t;
    const char* kind = table.kind == NoiseKind::gaussian_iid ? "gaussian_iid"
                       : table.kind == NoiseKind::uniform_iid
                           ? "uniform_iid"
                           : "student_t_iid";
    t.add_config("noise", std::string(kind));
    t.add_config("delta", table.delta);
    if (table.kind == NoiseKind::student_t_iid)
        t.add_config("df", static_cast<std::int64_t>(table.df));
    t.columns = {"n", "trials", "exceed", "frequency", "ci_low", "ci_hi"};
    for (const ExceedanceRow& r : table.rows)
        t.rows.push_back({static_cast<std::int64_t>(r.n), r.trials, r.exceed,
                          r.frequency, r.ci.lo, r.ci.hi});
    return t;
}

Table to_table(const MetricsReport& rep) {
    Table t;
    t.add_config("n", static_cast<std::int64_t>(rep.n));
    t.add_config("p", static_cast<std::int64_t>(rep.p));
    t.add_config("dv", static_cast<std::int64_t>(rep.dv));
    t.add_config("dc", static_cast<std::int64_t>(rep.dc));
    t.add_config("master_seed", std::to_string(rep.master_seed));
    t.add_config("seeds", static_cast<std::int64_t>(rep.per_seed.size()));
    t.add_config("fullrank_count", static_cast<std::int64_t>(rep.fullrank_count));
    t.add_config("median_r_eff", rep.median_r_eff);
    t.add_config("median_r_pack", rep.median_r_pack);
    t.add_config("median_ratio", rep.median_ratio);
    t.add_config("median_nsm", rep.median_nsm);

    std::size_t wer_points = 0;
    for (const SeedMetrics& m : rep.per_seed)
        wer_points = std::max(wer_points, m.wer.rows.size());

    t.columns = {"seed",  "full_rank", "log_volume", "r_eff",
                 "r_pack", "ratio",    "nsm",        "nsm_half_width",
                 "nsm_samples", "skipped"};
    for (std::size_t j = 0; j < wer_points; ++j) {
        const std::string suffix = std::to_string(j);
        t.columns.push_back("sigma" + suffix);
        t.columns.push_back("vnr" + suffix);
        t.columns.push_back("wer" + suffix);
        t.columns.push_back("wer" + suffix + "_ci_low");
        t.columns.push_back("wer" + suffix + "_ci_hi");
    }
    for (const SeedMetrics& m : rep.per_seed) {
        std::vector<Cell> row;
        row.emplace_back(std::to_string(m.seed));
        row.emplace_back(static_cast<std::int64_t>(m.full_rank ? 1 : 0));
        row.emplace_back(m.log_volume);
        row.emplace_back(m.r_eff);
        row.emplace_back(m.r_pack);
        row.emplace_back(m.ratio);
        row.emplace_back(m.nsm.samples > 0 ? m.nsm.mean : kNan);
        row.emplace_back(m.nsm.samples > 0 ? m.nsm.half_width : kNan);
        row.emplace_back(m.nsm.samples);
        std::string skipped;
        for (const std::string& s : m.skipped) {
            if (!skipped.empty()) skipped += ';';
            skipped += s;
        }
        row.emplace_back(skipped);
        for (std::size_t j = 0; j < wer_points; ++j) {
            if (j < m.wer.rows.size()) {
                const ErrorRatePoint& r = m.wer.rows[j];
                row.emplace_back(r.sigma);
                row.emplace_back(r.vnr);
                row.emplace_back(r.wer);
                row.emplace_back(r.ci.lo);
                row.emplace_back(r.ci.hi);
            } else {
                for (int k = 0; k < 5; ++k) row.emplace_back(kNan);
            }
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::string emit_string(const Table& t, EmitFormat format) {
    for (const std::string& col : t.columns)
        if (col.find_first_of(",\"\n") != std::string::npos)
            throw std::invalid_argument("emit: column names must be plain");
    for (const std::vector<Cell>& row : t.rows)
        if (row.size() != t.columns.size())
            throw std::invalid_argument("emit: row width != column count");

    if (format == EmitFormat::csv) {
        std::ostringstream os;
        os << "# schema_version=1\n";
        for (const auto& [k, v] : t.config) os << "# " << k << '=' << v << '\n';
        for (std::size_t i = 0; i < t.columns.size(); ++i)
            os << (i ? "," : "") << t.columns[i];
        os << '\n';
        for (const std::vector<Cell>& row : t.rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                os << (i ? "," : "") << cell_to_csv(row[i]);
            os << '\n';
        }
        return os.str();
    }

    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["config"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : t.config) j["config"][k] = v;
    j["columns"] = t.columns;
    j["rows"] = nlohmann::ordered_json::array();
    for (const std::vector<Cell>& row : t.rows) {
        nlohmann::ordered_json jr = nlohmann::ordered_json::array();
        for (const Cell& c : row) jr.push_back(cell_to_json(c));
        j["rows"].push_back(std::move(jr));
    }
    return j.dump(2) + "\n";
}

void emit(const Table& t, EmitFormat format, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("emit: cannot open " + path);
    os << emit_string(t, format);
    if (!os) throw std::runtime_error("emit: write failed for " + path);
}

Table parse_table(const std::string& text) {
    const std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        throw std::runtime_error("parse_table: empty input");

    Table t;
    if (text[first] == '{') {
        const auto j = nlohmann::ordered_json::parse(text);
        for (const auto& [k, v] : j.at("config").items())
            t.config.emplace_back(k, v.get<std::string>());
        for (const auto& c : j.at("columns"))
            t.columns.push_back(c.get<std::string>());
        for (const auto& jr : j.at("rows")) {
            std::vector<Cell> row;
            for (const auto& c : jr) row.push_back(json_to_cell(c));
            t.rows.push_back(std::move(row));
        }
        return t;
    }

    std::istringstream is(text);
    std::string line;
    bool have_columns = false;
    std::vector<std::string> fields;
    std::vector<bool> quoted;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(line.find_first_not_of("# "));
            const std::size_t eq = body.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = body.substr(0, eq);
            if (key == "schema_version") continue;
            t.config.emplace_back(key, body.substr(eq + 1));
            continue;
        }
        split_csv_line(line, &fields, &quoted);
        if (!have_columns) {
            t.columns = fields;
            have_columns = true;
            continue;
        }
        std::vector<Cell> row;
        for (std::size_t i = 0; i < fields.size(); ++i)
            row.push_back(csv_to_cell(fields[i], quoted[i]));
        t.rows.push_back(std::move(row));
    }
    if (!have_columns) throw std::runtime_error("parse_table: no column row");
    return t;
}

Table read_table(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_table: cannot open " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_table(buf.str());
}

std::vector<std::string> validate_table_json(const std::string& text) {
    std::vector<std::string> issues;
    const auto j = nlohmann::ordered_json::parse(text, nullptr, false);
    if (j.is_discarded()) {
        issues.push_back("not valid JSON");
        return issues;
    }
    if (!j.is_object()) {
        issues.push_back("top level is not an object");
        return issues;
    }
    if (!j.contains("schema_version") ||
        !j["schema_version"].is_number_integer() ||
        j["schema_version"].get<std::int64_t>() != 1)
        issues.push_back("schema_version missing or != 1");
    if (!j.contains("config") || !j["config"].is_object()) {
        issues.push_back("config missing or not an object");
    } else {
        for (const auto& [k, v] : j["config"].items())
            if (!v.is_string())
                issues.push_back("config value for '" + k + "' is not a string");
    }
    if (!j.contains("columns") || !j["columns"].is_array()) {
        issues.push_back("columns missing or not an array");
    } else {
        for (const auto& c : j["columns"])
            if (!c.is_string()) issues.push_back("non-string column name");
    }
    if (!j.contains("rows") || !j["rows"].is_array()) {
        issues.push_back("rows missing or not an array");
    } else {
        const std::size_t width =
            j.contains("columns") && j["columns"].is_array()
                ? j["columns"].size()
                : 0;
        for (const auto& jr : j["rows"]) {
            if (!jr.is_array()) {
                issues.push_back("row is not an array");
                continue;
            }
            if (jr.size() != width) issues.push_back("row width != column count");
            for (const auto& c : jr)
                if (!c.is_number() && !c.is_string())
                    issues.push_back("row cell is not a number or string");
        }
    }
    return issues;
}

}  // namespace lda
