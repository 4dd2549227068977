#pragma once

// Command-line surface of the tlsub tool: argument parsing, the per-command
// suites and report serialization (JSON, plus a CSV decay table).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tlsub/errors.hpp"
#include "tlsub/fock_toeplitz.hpp"
#include "tlsub/jones_wenzl.hpp"
#include "tlsub/ktheory_fusion.hpp"
#include "tlsub/random.hpp"
#include "tlsub/tl_tensor.hpp"

namespace tlsub::cli {

enum class Command { Check, NormalForm, Jw, Verify, Boundary, KTheory, Dims };

inline const std::vector<std::pair<Command, std::string>> &command_names() {
    static const std::vector<std::pair<Command, std::string>> names = {
        {Command::Check, "check"},     {Command::NormalForm, "normal-form"},
        {Command::Jw, "jw"},           {Command::Verify, "verify"},
        {Command::Boundary, "boundary"}, {Command::KTheory, "ktheory"},
        {Command::Dims, "dims"}};
    return names;
}

inline std::string command_name(Command c) {
    for (const auto &[k, v] : command_names())
        if (k == c)
            return v;
    return "?";
}

inline std::string command_help(Command c) {
    switch (c) {
    case Command::Check: return "run every suite for one system";
    case Command::NormalForm: return "TL check, normal form and invariants";
    case Command::Jw: return "Jones-Wenzl tower, defining defects and decay";
    case Command::Verify: return "Fock relations, tails and commutators";
    case Command::Boundary: return "flatness modulo compacts and the boundary identity";
    case Command::KTheory: return "fusion rules, K-pairing matrix and K0";
    case Command::Dims: return "level dimensions d_n";
    }
    return "";
}

inline bool needs_system(Command c) {
    return c != Command::KTheory && c != Command::Dims;
}

struct RunConfig {
    Command command = Command::Check;
    std::optional<std::vector<Complex>> coeffs;
    std::optional<std::string> coeffs_text;
    std::optional<std::string> matrix_path;
    std::optional<CMatrix> matrix;
    std::optional<int> levels;
    std::optional<int> truncate;
    std::optional<int> m;
    std::optional<int> n;
    double tol = 1e-9;
    std::optional<std::string> out;
    std::optional<std::string> csv;
    bool timings = false;
    bool help = false;
    std::string help_text;
};

/// One complex number written as "re", "imi", "re+imi" or "re-imi" (e.g. "1", "-2.5i", "1e-3+i").
inline Complex parse_complex(const std::string &raw, const std::string &flag = "--coeffs") {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c)))
            s += c;
    auto fail = [&]() -> Complex {
        throw UsageError(flag + ": cannot parse complex number '" + raw + "'");
    };
    if (s.empty())
        return fail();
    auto number = [&](const std::string &t, bool imaginary) -> double {
        if (imaginary && (t.empty() || t == "+"))
            return 1.0;
        if (imaginary && t == "-")
            return -1.0;
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(t, &used);
        } catch (const std::exception &) {
            fail();
        }
        if (used != t.size())
            fail();
        return v;
    };
    if (s.back() != 'i')
        return {number(s, false), 0.0};
    const std::string body = s.substr(0, s.size() - 1);
    // split at the last sign that is not a leading sign or part of an exponent
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;)
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    if (split == std::string::npos)
        return {0.0, number(body, true)};
    return {number(body.substr(0, split), false), number(body.substr(split), true)};
}

inline std::vector<Complex> parse_coeffs(const std::string &text) {
    std::vector<Complex> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ','))
        out.push_back(parse_complex(tok));
    if (out.size() < 2)
        throw UsageError("--coeffs: need at least two comma-separated coefficients");
    return out;
}

/// Row-major JSON array of [re, im] pairs.
inline CMatrix load_matrix(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw UsageError("--matrix: cannot open '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception &e) {
        throw UsageError("--matrix: invalid JSON in '" + path + "': " + e.what());
    }
    if (!j.is_array() || j.empty())
        throw UsageError("--matrix: expected a non-empty 2D array");
    const auto rows = static_cast<Eigen::Index>(j.size());
    CMatrix m(rows, rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto &row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != rows)
            throw UsageError("--matrix: matrix is not square (row " + std::to_string(r) + ")");
        for (Eigen::Index c = 0; c < rows; ++c) {
            const auto &z = row[static_cast<std::size_t>(c)];
            if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
                throw UsageError("--matrix: entry (" + std::to_string(r) + "," +
                                 std::to_string(c) + ") is not a [re, im] pair");
            m(r, c) = Complex(z[0].get<double>(), z[1].get<double>());
        }
    }
    return m;
}

inline int default_levels(int m) { return m == 2 ? 6 : (m == 3 ? 5 : 4); }

/// Parses argv-style arguments (without the program name).
inline RunConfig parse_input(const std::vector<std::string> &args) {
    RunConfig cfg;
    CLI::App app{"Temperley-Lieb subproduct system checks", "tlsub"};
    app.require_subcommand(1);

    std::string coeffs, matrix, out, csv;
    int levels = 0, truncate = 0, m = 0, n = 0;
    double tol = cfg.tol;
    std::vector<std::pair<CLI::App *, Command>> subs;
    struct Opts {
        CLI::Option *coeffs, *matrix, *levels, *truncate, *m, *n, *tol, *out, *csv, *timings;
    };
    std::vector<Opts> opts;
    bool timings = false;
    for (const auto &[cmd, name] : command_names()) {
        CLI::App *sub = app.add_subcommand(name, command_help(cmd));
        Opts o{};
        o.coeffs = sub->add_option("--coeffs", coeffs, "coefficients a_1,...,a_m");
        o.matrix = sub->add_option("--matrix", matrix, "JSON file with the matrix of A");
        o.levels = sub->add_option("--levels", levels, "maximal Fock level N");
        o.truncate = sub->add_option("--truncate", truncate, "truncation T");
        o.m = sub->add_option("--m", m, "dimension m");
        o.n = sub->add_option("--n", n, "number of levels");
        o.tol = sub->add_option("--tol", tol, "residual threshold");
        o.out = sub->add_option("--out", out, "write the JSON report here");
        o.csv = sub->add_option("--csv", csv, "write the decay table here");
        o.timings = sub->add_flag("--timings", timings, "include wall-clock timings");
        subs.emplace_back(sub, cmd);
        opts.push_back(o);
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        cfg.help = true;
        cfg.help_text = app.help();
        return cfg;
    } catch (const CLI::ParseError &e) {
        throw UsageError(e.what());
    }

    std::size_t which = 0;
    for (std::size_t k = 0; k < subs.size(); ++k)
        if (subs[k].first->parsed())
            which = k;
    cfg.command = subs[which].second;
    const Opts &o = opts[which];

    if (o.coeffs->count() && o.matrix->count())
        throw UsageError("--coeffs and --matrix are mutually exclusive");
    if (o.coeffs->count()) {
        cfg.coeffs = parse_coeffs(coeffs);
        cfg.coeffs_text = coeffs;
    }
    if (o.matrix->count()) {
        cfg.matrix_path = matrix;
        cfg.matrix = load_matrix(matrix);
        if (cfg.matrix->rows() < 2)
            throw UsageError("--matrix: dimension must be at least 2");
    }
    if (needs_system(cfg.command) && !cfg.coeffs && !cfg.matrix)
        throw UsageError(command_name(cfg.command) + ": one of --coeffs or --matrix is required");
    auto positive = [](CLI::Option *opt, int v, int lo, std::optional<int> &dst) {
        if (!opt->count())
            return;
        if (v < lo)
            throw UsageError(opt->get_name() + ": must be at least " + std::to_string(lo));
        dst = v;
    };
    positive(o.levels, levels, 1, cfg.levels);
    positive(o.truncate, truncate, 1, cfg.truncate);
    positive(o.m, m, 2, cfg.m);
    positive(o.n, n, 0, cfg.n);
    if (o.tol->count()) {
        if (!(tol > 0))
            throw UsageError("--tol: must be positive");
        cfg.tol = tol;
    }
    if (o.out->count())
        cfg.out = out;
    if (o.csv->count())
        cfg.csv = csv;
    cfg.timings = timings;
    if (cfg.command == Command::Dims && !cfg.m && !cfg.coeffs && !cfg.matrix)
        throw UsageError("dims: --m is required");
    return cfg;
}


struct CheckResult {
    std::string name;
    double value = 0;
    double threshold = 0;
    bool pass = false;
};

struct DecayRow {
    int n = 0;
    double value = 0;
    double scaled = 0; ///< value / q^n
};

struct Report {
    std::string command;
    nlohmann::ordered_json input = nlohmann::ordered_json::object();
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    nlohmann::ordered_json data = nlohmann::ordered_json::object();
    std::vector<CheckResult> checks;
    std::string decay_name;
    std::vector<DecayRow> decay;
    std::vector<std::string> errors;
    bool resource_error = false;
    std::vector<std::pair<std::string, double>> timings;

    void check(const std::string &name, double value, double threshold) {
        checks.push_back({name, value, threshold, std::isfinite(value) && value <= threshold});
    }
    bool passed() const {
        return errors.empty() &&
               std::all_of(checks.begin(), checks.end(), [](const auto &c) { return c.pass; });
    }
};

inline int exit_code(const Report &r) {
    if (r.resource_error)
        return 3;
    return r.passed() ? 0 : 2;
}

namespace detail {

inline std::string format_double(double v) {
    if (!std::isfinite(v))
        return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Serializes with a fixed 17-significant-digit float format; key order is insertion order.
inline void write_json(std::ostream &os, const nlohmann::ordered_json &j, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(indent * depth), ' ');
    switch (j.type()) {
    case nlohmann::json::value_t::object: {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first)
                os << ",\n";
            first = false;
            os << pad << nlohmann::json(it.key()).dump() << ": ";
            write_json(os, it.value(), indent, depth + 1);
        }
        os << "\n" << close << "}";
        return;
    }
    case nlohmann::json::value_t::array: {
        const bool flat = std::none_of(j.begin(), j.end(),
                                       [](const auto &x) { return x.is_structured(); });
        if (flat) {
            os << "[";
            for (std::size_t k = 0; k < j.size(); ++k) {
                if (k)
                    os << ", ";
                write_json(os, j[k], indent, depth + 1);
            }
            os << "]";
            return;
        }
        os << "[\n";
        for (std::size_t k = 0; k < j.size(); ++k) {
            if (k)
                os << ",\n";
            os << pad;
            write_json(os, j[k], indent, depth + 1);
        }
        os << "\n" << close << "]";
        return;
    }
    case nlohmann::json::value_t::number_float:
        os << format_double(j.get<double>());
        return;
    default:
        os << j.dump();
    }
}

inline nlohmann::ordered_json complex_json(Complex z) { return {z.real(), z.imag()}; }

inline nlohmann::ordered_json complex_list(const std::vector<Complex> &v) {
    auto a = nlohmann::ordered_json::array();
    for (auto z : v)
        a.push_back(complex_json(z));
    return a;
}

} // namespace detail

inline nlohmann::ordered_json to_json(const Report &r) {
    nlohmann::ordered_json j;
    j["command"] = r.command;
    j["input"] = r.input;
    j["params"] = r.params;
    auto checks = nlohmann::ordered_json::array();
    for (const auto &c : r.checks) {
        nlohmann::ordered_json e;
        e["name"] = c.name;
        e["value"] = c.value;
        e["threshold"] = c.threshold;
        e["pass"] = c.pass;
        checks.push_back(e);
    }
    j["checks"] = checks;
    j["data"] = r.data;
    if (!r.decay.empty()) {
        nlohmann::ordered_json d;
        d["name"] = r.decay_name;
        auto rows = nlohmann::ordered_json::array();
        for (const auto &row : r.decay)
            rows.push_back({row.n, row.value, row.scaled});
        d["columns"] = {"n", "value", "value/q^n"};
        d["rows"] = rows;
        j["decay"] = d;
    }
    j["errors"] = r.errors;
    j["pass"] = r.passed();
    if (!r.timings.empty()) {
        nlohmann::ordered_json t;
        for (const auto &[k, v] : r.timings)
            t[k] = v;
        j["timings_seconds"] = t;
    }
    return j;
}

inline std::string to_json_string(const Report &r) {
    std::ostringstream os;
    detail::write_json(os, to_json(r), 2, 0);
    os << "\n";
    return os.str();
}

inline std::string decay_csv(const Report &r) {
    std::ostringstream os;
    os << "n,value,value/q^n\n";
    for (const auto &row : r.decay)
        os << row.n << "," << detail::format_double(row.value) << ","
           << detail::format_double(row.scaled) << "\n";
    return os.str();
}


/// 2^26 unless TLSUB_MAX_SCALARS holds a positive integer.
inline std::size_t scalar_budget() {
    const char *env = std::getenv("TLSUB_MAX_SCALARS");
    if (!env || !*env)
        return kDefaultScalarBudget;
    char *end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0' || v == 0)
        throw UsageError("TLSUB_MAX_SCALARS: expected a positive integer, got '" +
                         std::string(env) + "'");
    return static_cast<std::size_t>(v);
}

namespace detail {

class Stopwatch {
  public:
    Stopwatch(Report &r, bool enabled) : report_(r), enabled_(enabled) {}
    template <class F> auto time(const std::string &name, F &&f) {
        const auto t0 = std::chrono::steady_clock::now();
        if constexpr (std::is_void_v<decltype(f())>) {
            f();
            record(name, t0);
        } else {
            auto result = f();
            record(name, t0);
            return result;
        }
    }

  private:
    void record(const std::string &name, std::chrono::steady_clock::time_point t0) {
        if (enabled_)
            report_.timings.emplace_back(
                name, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    Report &report_;
    bool enabled_;
};

inline AntiLinearOp input_operator(const RunConfig &cfg) {
    if (cfg.matrix)
        return {*cfg.matrix};
    return antidiagonal_op(*cfg.coeffs);
}

/// The polynomial system; for matrix input it is read off the normal form.
inline TLSystem input_system(const RunConfig &cfg, Report &rep) {
    if (cfg.coeffs)
        return params_from_polynomial(*cfg.coeffs);
    const NormalForm nf = normal_form({*cfg.matrix});
    rep.data["system_from_normal_form"] = complex_list(nf.coeffs);
    return params_from_polynomial(nf.coeffs);
}

inline void record_params(Report &rep, const TLSystem &sys) {
    rep.params["m"] = sys.m;
    rep.params["lambda"] = sys.lambda;
    rep.params["q"] = sys.q;
    rep.params["t"] = sys.t;
    rep.params["tau"] = sys.tau ? nlohmann::ordered_json(*sys.tau) : nlohmann::ordered_json(nullptr);
}

inline void suite_check(const RunConfig &cfg, Report &rep) {
    const AntiLinearOp a = input_operator(cfg);
    const TLCheck c = tl_check(a, cfg.tol);
    rep.data["alpha"] = c.alpha;
    rep.data["lambda"] = c.lambda;
    rep.check("tl_condition", c.deviation, cfg.tol);
    const TLSystem sys = input_system(cfg, rep);
    record_params(rep, sys);
    rep.check("lambda_consistency", std::abs(c.lambda - sys.lambda) / sys.lambda, cfg.tol);
    const TLResiduals r = tl_relation_residuals(sys);
    rep.check("tl_relation_1", r.r1, cfg.tol);
    rep.check("tl_relation_2", r.r2, cfg.tol);
    rep.check("projection_formula", operator_norm(projection_of(sys) - sys.e), cfg.tol);
}

inline void suite_normal_form(const RunConfig &cfg, Report &rep) {
    const AntiLinearOp a = input_operator(cfg);
    const NormalForm nf = normal_form(a);
    const TLInvariants inv = invariants_of(a);
    const auto m = a.dim();
    rep.data["coeffs"] = complex_list(nf.coeffs);
    auto pairs = nlohmann::ordered_json::array();
    for (const auto &p : inv.pairs) {
        nlohmann::ordered_json e;
        e["beta"] = p.beta;
        e["z"] = complex_list(p.z);
        pairs.push_back(e);
    }
    rep.data["invariants"] = pairs;
    const AntiLinearOp an = normalized(a);
    rep.check("basis_unitary", operator_norm(nf.basis.adjoint() * nf.basis - identity(m)), cfg.tol);
    rep.check("conjugation",
              operator_norm(nf.basis.adjoint() * an.matrix * nf.basis.conjugate() -
                            antidiagonal_op(nf.coeffs).matrix),
              std::max(cfg.tol, 1e-8));
    double pairing = 0;
    for (Eigen::Index i = 0; i < m; ++i)
        pairing = std::max(pairing, std::abs(std::abs(nf.coeffs[i] * nf.coeffs[m - 1 - i]) - 1.0));
    rep.check("pair_products", pairing, std::max(cfg.tol, 1e-8));
    const TLSystem sys = params_from_polynomial(nf.coeffs);
    record_params(rep, sys);
}

inline void suite_jw(const RunConfig &cfg, Report &rep, Stopwatch &sw) {
    const TLSystem sys = input_system(cfg, rep);
    record_params(rep, sys);
    const int levels = cfg.levels.value_or(default_levels(sys.m));
    rep.params["levels"] = levels;
    const JWTower tw = sw.time("build_tower", [&] { return build_tower(sys, levels, scalar_budget()); });
    rep.data["dims"] = tw.dims;
    std::vector<std::int64_t> ranks;
    double rank_mismatch = 0, idem = 0, herm = 0, kill = 0;
    for (int n = 0; n <= levels; ++n) {
        const CMatrix &f = tw.f[n];
        const auto rank = static_cast<std::int64_t>(tw.bases[n].cols());
        ranks.push_back(rank);
        rank_mismatch = std::max(rank_mismatch, double(std::llabs(rank - tw.dims[n])));
        idem = std::max(idem, operator_norm(f * f - f));
        herm = std::max(herm, operator_norm(f - f.adjoint()));
        for (int i = 0; i + 2 <= n; ++i)
            kill = std::max(kill, jw_defining_defect(tw, n, i));
    }
    rep.data["ranks"] = ranks;
    rep.check("rank_equals_recurrence", rank_mismatch, 0.0);
    rep.check("idempotent", idem, cfg.tol);
    rep.check("self_adjoint", herm, cfg.tol);
    rep.check("kills_e_at_every_position", kill, cfg.tol);
    rep.decay_name = "wenzl_defect";
    sw.time("wenzl_defect", [&] {
        for (int n = 1; n < levels; ++n) {
            const double d = wenzl_defect(tw, n);
            rep.decay.push_back({n, d, d / std::pow(sys.q, n)});
        }
    });
}

inline FockOperators fock_for(const RunConfig &cfg, Report &rep, Stopwatch &sw, TLSystem &sys) {
    sys = input_system(cfg, rep);
    record_params(rep, sys);
    const int levels = cfg.levels.value_or(default_levels(sys.m));
    rep.params["levels"] = levels;
    return sw.time("build_fock", [&] { return build_fock(sys, levels, scalar_budget()); });
}

inline void suite_verify(const RunConfig &cfg, Report &rep, Stopwatch &sw) {
    TLSystem sys;
    const FockOperators ops = fock_for(cfg, rep, sw, sys);
    const RelationReport rel = sw.time("relations", [&] { return verify_relations(ops, cfg.tol); });
    for (const auto &[name, value] : rel.entries())
        rep.check("relation_" + name, value, cfg.tol);
    const TailReport tail = sw.time("tail", [&] { return tail_report(ops); });
    rep.check("tail_idempotent", tail.idempotent, cfg.tol);
    rep.check("tail_level_gap", tail.level_gap, cfg.tol);
    rep.check("tail_intertwining", tail.intertwining, cfg.tol);
    rep.check("right_row_sum", right_row_sum_residual(ops), cfg.tol);
    rep.check("s_star_is_contraction", s_vs_t_residual(ops), cfg.tol);
    double c1 = 0;
    rep.decay_name = "commutator_s_star_r";
    sw.time("commutators", [&] {
        for (int n = 0; n < ops.levels(); ++n) {
            const CommutatorNorms c = commutator_norms(ops, n);
            c1 = std::max(c1, c.c1);
            rep.decay.push_back({n, c.c2, c.c2 / std::pow(sys.q, n)});
        }
    });
    rep.check("commutator_s_r", c1, cfg.tol);
}

inline void suite_boundary(const RunConfig &cfg, Report &rep, Stopwatch &sw) {
    TLSystem sys;
    const FockOperators ops = fock_for(cfg, rep, sw, sys);
    Rng rng(20240521);
    std::vector<CMatrix> blocks;
    for (int n = 0; n <= ops.levels(); ++n)
        blocks.push_back(random_gaussian(ops.space.block_dim(n), ops.space.block_dim(n), rng));
    const CMatrix x = from_level_blocks(ops, blocks);
    const int top = ops.levels() - 1;
    double worst = 0;
    sw.time("theta_vs_psi", [&] {
        CMatrix tk = x;
        for (int k = 0; k <= top; ++k) {
            for (int n = 0; n + k <= top; ++n)
                worst = std::max(worst, operator_norm(level_block(ops, tk, n + k) -
                                                      psi_map(ops.tower, n, k, blocks[n])));
            tk = theta_map(ops, tk);
        }
    });
    rep.check("theta_power_matches_psi", worst, cfg.tol);
    rep.check("identity_is_flat", boundary_flatness(ops, ops.identity_op(), 0), cfg.tol);
    rep.decay_name = "flatness_s1_star_s1";
    const CMatrix w = word_matrix(ops, {{0, true}, {0, false}});
    sw.time("flatness", [&] {
        for (int n0 = 1; n0 <= top; ++n0) {
            const double f = boundary_flatness(ops, w, n0);
            rep.decay.push_back({n0, f, f / std::pow(sys.q, n0)});
        }
    });
}

inline void suite_ktheory(const RunConfig &cfg, Report &rep) {
    const int trunc = cfg.truncate.value_or(10);
    rep.params["truncate"] = trunc;
    const KPairingMatrix closed = pi_star_closed_form(trunc);
    const KPairingMatrix derived = pi_star_from_multiplicities(trunc);
    double mismatch = 0;
    for (std::size_t r = 0; r < closed.entries.size(); ++r)
        for (std::size_t c = 0; c < closed.entries[r].size(); ++c)
            mismatch += closed.entries[r][c] != derived.entries[r][c];
    rep.check("pi_star_constructions_agree", mismatch, 0.0);
    rep.data["pi_star"] = closed.entries;
    std::vector<std::int64_t> dets;
    double non_unimodular = 0;
    for (int t = 1; t <= trunc; ++t) {
        dets.push_back(integer_determinant(pi_star_closed_form(t).square()));
        non_unimodular += std::llabs(dets.back()) != 1;
    }
    rep.data["determinants"] = dets;
    rep.check("unimodular_every_truncation", non_unimodular, 0.0);
    double mult_mismatch = 0;
    for (int l = 0; l < trunc; ++l)
        for (int k = 0; k < trunc; ++k)
            mult_mismatch += mult_in_fock_rep(l, k, l + k + 1) != std::min(l, k) + 1;
    rep.check("fusion_multiplicity_closed_form", mult_mismatch, 0.0);
    std::vector<int> ms;
    if (cfg.m)
        ms = {*cfg.m};
    else if (cfg.coeffs)
        ms = {static_cast<int>(cfg.coeffs->size())};
    else if (cfg.matrix)
        ms = {static_cast<int>(cfg.matrix->rows())};
    else
        ms = {2, 3, 4};
    nlohmann::ordered_json k0;
    for (int m : ms)
        k0[std::to_string(m)] = k0_order(m).to_string();
    rep.data["k0"] = k0;
}

inline void suite_dims(const RunConfig &cfg, Report &rep) {
    const int m = cfg.m ? *cfg.m
                        : static_cast<int>(cfg.coeffs ? cfg.coeffs->size() : cfg.matrix->rows());
    const int n = cfg.n ? *cfg.n : cfg.levels.value_or(default_levels(m));
    rep.params["m"] = m;
    rep.params["n"] = n;
    const auto d = dims_by_recurrence(m, n);
    rep.data["dims"] = d;
    const double t = q_from_sum(m);
    double worst = 0;
    for (int k = 0; k <= n; ++k) {
        const double qi = q_integer(k + 1, t);
        worst = std::max(worst, std::abs(double(d[k]) - qi) / std::max(1.0, qi));
    }
    rep.check("matches_quantum_integers", worst, 1e-6);
}

} // namespace detail

/// Runs the suite for cfg. Mathematical failures are recorded in the report.
inline Report run_suite(const RunConfig &cfg) {
    Report rep;
    rep.command = command_name(cfg.command);
    if (cfg.coeffs)
        rep.input["coeffs"] = detail::complex_list(*cfg.coeffs);
    if (cfg.matrix_path)
        rep.input["matrix"] = *cfg.matrix_path;
    if (cfg.levels)
        rep.input["levels"] = *cfg.levels;
    if (cfg.truncate)
        rep.input["truncate"] = *cfg.truncate;
    if (cfg.m)
        rep.input["m"] = *cfg.m;
    if (cfg.n)
        rep.input["n"] = *cfg.n;
    rep.input["tol"] = cfg.tol;

    detail::Stopwatch sw(rep, cfg.timings);
    try {
        switch (cfg.command) {
        case Command::Check:
            detail::suite_check(cfg, rep);
            break;
        case Command::NormalForm:
            detail::suite_normal_form(cfg, rep);
            break;
        case Command::Jw:
            detail::suite_jw(cfg, rep, sw);
            break;
        case Command::Verify:
            detail::suite_verify(cfg, rep, sw);
            break;
        case Command::Boundary:
            detail::suite_boundary(cfg, rep, sw);
            break;
        case Command::KTheory:
            detail::suite_ktheory(cfg, rep);
            break;
        case Command::Dims:
            detail::suite_dims(cfg, rep);
            break;
        }
    } catch (const MemoryBudgetExceeded &e) {
        rep.errors.emplace_back(e.what());
        rep.resource_error = true;
    } catch (const UsageError &) {
        throw;
    } catch (const Error &e) {
        rep.errors.emplace_back(e.what());
    }
    return rep;
}

/// Whole tool: parse, run, write outputs. Returns the process exit code.
inline int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    try {
        const RunConfig cfg = parse_input(args);
        if (cfg.help) {
            out << cfg.help_text;
            return 0;
        }
        const Report rep = run_suite(cfg);
        const std::string json = to_json_string(rep);
        if (cfg.out) {
            std::ofstream f(*cfg.out);
            if (!f)
                throw UsageError("--out: cannot write '" + *cfg.out + "'");
            f << json;
            out << rep.command << ": " << (rep.passed() ? "pass" : "FAIL") << " (" << *cfg.out
                << ")\n";
        } else {
            out << json;
        }
        if (cfg.csv) {
            std::ofstream f(*cfg.csv);
            if (!f)
                throw UsageError("--csv: cannot write '" + *cfg.csv + "'");
            f << decay_csv(rep);
        }
        for (const auto &e : rep.errors)
            err << e << "\n";
        return exit_code(rep);
    } catch (const UsageError &e) {
        err << e.what() << "\n";
        return 1;
    }
}

} // namespace tlsub::cli
