// meanscope: scalar mean evaluation, positive-definiteness checks, norm
// inequality verification, counterexample search, continuity probes.
//
// Exit codes: 0 all checks passed, 1 at least one violation or a
// refutation where certification was expected, 2 configuration/input error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "meanscope/matrix_io.hpp"
#include "meanscope/posdef.hpp"
#include "meanscope/report_json.hpp"
#include "meanscope/scalar_means.hpp"
#include "meanscope/verifier.hpp"

namespace {

using namespace meanscope;

std::string fmt6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

void emit(const std::string& text, const std::string& output_path) {
    if (output_path.empty() || output_path == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(output_path);
    if (!out) throw std::runtime_error("cannot write output file: " + output_path);
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
    if (!out) throw std::runtime_error("failed writing output file: " + output_path);
}

void emit_json(const nlohmann::json& j, const std::string& output_path) {
    emit(j.dump(2), output_path);
}

// Shared sampling/report options.
struct CommonOpts {
    std::string dims;
    std::string ensembles;
    std::string norms;
    int samples = 200;
    std::uint64_t seed = 1729;
    double tolerance = 1e-9;
    double condition = 1e6;
    int threads = 0;
    std::string output;
    std::string format = "json";
};

void add_common(CLI::App* cmd, CommonOpts& o, bool sampling) {
    if (sampling) {
        cmd->add_option("--dims", o.dims, "comma-separated shapes, e.g. 3,5x5,8")
            ->envname("MEANSCOPE_DIMS");
        cmd->add_option("--ensembles", o.ensembles,
                        "comma-separated: gaussian-psd,rank-deficient-psd,ill-conditioned-psd")
            ->envname("MEANSCOPE_ENSEMBLES");
        cmd->add_option("--norms", o.norms, "comma-separated norm codes, e.g. tr,fro,kyfan:2")
            ->envname("MEANSCOPE_NORMS");
        cmd->add_option("--samples", o.samples, "total samples per configuration")
            ->envname("MEANSCOPE_SAMPLES");
        cmd->add_option("--tolerance", o.tolerance, "relative violation tolerance")
            ->envname("MEANSCOPE_TOLERANCE");
        cmd->add_option("--condition", o.condition,
                        "condition number target for ill-conditioned-psd")
            ->envname("MEANSCOPE_CONDITION");
    }
    cmd->add_option("--seed", o.seed, "master seed")->envname("MEANSCOPE_SEED");
    cmd->add_option("--threads", o.threads, "worker threads (0 = auto)")
        ->envname("MEANSCOPE_THREADS");
    cmd->add_option("--output", o.output, "output path (default: stdout)")
        ->envname("MEANSCOPE_OUTPUT");
    cmd->add_option("--format", o.format, "json, csv or pretty")
        ->envname("MEANSCOPE_FORMAT")
        ->check(CLI::IsMember({"json", "csv", "pretty"}));
}

void apply_sampling(ChainSpec& spec, const CommonOpts& o) {
    if (!o.dims.empty()) {
        spec.dims.clear();
        for (const std::string& d : split(o.dims, ',')) spec.dims.push_back(parse_dim(d));
    }
    if (!o.ensembles.empty()) {
        spec.ensembles.clear();
        for (const std::string& e : split(o.ensembles, ','))
            spec.ensembles.push_back(parse_ensemble(e));
    }
    if (!o.norms.empty()) {
        spec.norms.clear();
        for (const std::string& n : split(o.norms, ',')) spec.norms.push_back(NormKind::parse(n));
    }
    spec.samples = o.samples;
    spec.seed = o.seed;
    spec.tolerance_rel = o.tolerance;
    spec.condition_target = o.condition;
    spec.threads = o.threads;
}

// ---------------------------------------------------------------------------
// Pretty renderers (6 significant digits).
// ---------------------------------------------------------------------------

std::string pretty_chain(const ChainReport& r) {
    std::ostringstream out;
    out << "chain " << r.chain_id << "\n  terms:";
    for (const std::string& t : r.term_labels) out << ' ' << t;
    out << "\n  samples " << r.total_samples << " (" << r.samples_per_cell
        << " per cell), comparisons " << r.total_comparisons << ", evaluation errors "
        << r.evaluation_errors << "\n";
    out << "  min margin " << fmt6(r.min_margin) << ", min relative margin "
        << fmt6(r.min_rel_margin) << "\n";
    out << "  cells:\n";
    for (const CellSummary& c : r.cells)
        out << "    " << dim_code(c.dim) << ' ' << c.ensemble << ": min margin "
            << fmt6(c.min_margin) << " (rel " << fmt6(c.min_rel_margin) << "), errors "
            << c.errors << "\n";
    if (!r.violations.empty()) {
        out << "  violations (" << r.violations.size() << "):\n";
        for (const ComparisonRecord& v : r.violations)
            out << "    sample " << v.sample << ' ' << dim_code(v.dim) << ' ' << v.ensemble
                << ' ' << v.norm << ' ' << v.left_term << " vs " << v.right_term << ": margin "
                << fmt6(v.margin) << " (rel " << fmt6(v.rel_margin) << ")\n";
    }
    out << "  status: " << (r.pass ? "pass" : "fail") << "\n";
    return out.str();
}

std::string pretty_battery(const BatteryReport& r) {
    std::ostringstream out;
    out << "default battery: " << r.chains.size() << " chains\n";
    for (const ChainReport& c : r.chains)
        out << "  " << (c.pass ? "pass " : "FAIL ") << c.chain_id << ": min rel margin "
            << fmt6(c.min_rel_margin) << ", violations " << c.violations.size() << ", errors "
            << c.evaluation_errors << "\n";
    out << "total samples " << r.total_samples << ", comparisons " << r.total_comparisons
        << ", violations " << r.violation_count << ", errors " << r.evaluation_errors << "\n";
    out << "min relative margin " << fmt6(r.min_rel_margin) << "\n";
    out << "status: " << (r.pass ? "pass" : "fail") << "\n";
    return out.str();
}

std::string pretty_gram(const GramReport& r) {
    std::ostringstream out;
    out << "function " << r.function_id << ": " << verdict_name(r.verdict) << "\n";
    out << "  phi(0) = " << fmt6(r.phi0) << ", min eigenvalue " << fmt6(r.min_eigenvalue)
        << ", threshold " << fmt6(r.threshold) << "\n";
    for (const GridResult& g : r.grids) {
        out << "  grid W=" << fmt6(g.half_width) << " points=" << g.points
            << (g.jittered ? " jittered" : "");
        if (g.evaluation_failed)
            out << ": evaluation failed\n";
        else
            out << ": min eig " << fmt6(g.min_eigenvalue) << " (threshold " << fmt6(g.threshold)
                << ")\n";
    }
    return out.str();
}

std::string pretty_search(const SearchReport& r) {
    std::ostringstream out;
    out << "search " << r.lhs << " vs " << r.rhs << " on t in [" << fmt6(r.t_min) << ", "
        << fmt6(r.t_max) << "], " << r.grid_points << " points\n";
    out << "  ordering: " << r.ordering << "\n";
    for (const SearchWitness& w : r.witnesses)
        out << "  witness t=" << fmt6(w.t) << ": " << r.lhs << (w.sign > 0 ? " > " : " < ")
            << r.rhs << ", ratio " << fmt6(w.ratio) << ", relative difference "
            << fmt6(w.rel_diff) << "\n";
    if (!r.crossings.empty()) {
        out << "  crossings:";
        for (double c : r.crossings) out << ' ' << fmt6(c);
        out << "\n";
    }
    return out.str();
}

std::string pretty_bounds(const BoundReport& r) {
    std::ostringstream out;
    out << "bounds alpha=" << fmt6(r.alpha) << " beta=" << fmt6(r.beta) << ": "
        << r.total_samples << " samples, " << r.total_checks << " checks, errors "
        << r.evaluation_errors << "\n";
    auto line = [&](const char* name, const SlackSummary& s) {
        out << "  " << name << ": min slack " << fmt6(s.min_slack) << " (rel "
            << fmt6(s.min_rel_slack) << "), violations " << s.violations << "\n";
    };
    line("lower     ", r.lower);
    line("upper     ", r.upper);
    line("difference", r.difference);
    out << "status: " << (r.pass ? "pass" : "fail") << "\n";
    return out.str();
}

std::string pretty_continuity(const std::vector<ContinuityReport>& reports) {
    std::ostringstream out;
    for (const ContinuityReport& r : reports) {
        out << "probe " << r.family << " -> " << fmt6(r.target) << " (" << r.norm << " norm, dim "
            << r.dim << ")\n";
        int k = 0;
        for (const ContinuityStep& s : r.steps) {
            out << "  k=" << ++k << " param=" << fmt6(s.param) << " diff=" << fmt6(s.diff);
            if (s.rate_applies)
                out << " bound=" << fmt6(s.rate_bound) << (s.rate_ok ? "" : " VIOLATED");
            out << "\n";
        }
        out << "  final " << fmt6(r.final_diff) << ", monotone after k=3: "
            << (r.monotone_after_3 ? "yes" : "no") << ", rate ok: " << (r.rate_ok ? "yes" : "no")
            << ", status: " << (r.pass ? "pass" : "fail") << "\n";
    }
    return out.str();
}

// Renders a stored JSON report (any kind) as a pretty summary.
std::string pretty_stored(const nlohmann::json& j) {
    std::ostringstream out;
    const std::string kind = j.value("kind", "");
    if (kind.empty()) throw std::runtime_error("report has no kind field");
    out << kind << " report (schema " << j.value("schema_version", 0) << ")\n";
    auto show = [&](const char* key) {
        if (j.contains(key)) out << "  " << key << ": " << j.at(key).dump() << "\n";
    };
    if (kind == "chain") {
        show("chain_id");
        show("min_margin");
        show("min_rel_margin");
        show("total_samples");
        show("evaluation_errors");
        out << "  violations: " << j.value("violations", nlohmann::json::array()).size() << "\n";
        show("status");
    } else if (kind == "battery") {
        for (const auto& c : j.value("chains", nlohmann::json::array()))
            out << "  " << c.value("status", "?") << ' ' << c.value("chain_id", "?")
                << ": min rel margin " << c.value("min_rel_margin", 0.0) << "\n";
        show("violation_count");
        show("evaluation_errors");
        show("status");
    } else if (kind == "posdef" || kind == "posdef-suite") {
        if (j.contains("entries")) {
            for (const auto& e : j.at("entries"))
                out << "  " << e.value("verdict", "?") << " (expected " << e.value("expected", "?")
                    << ") " << e.value("function_id", "?") << "\n";
            show("status");
        } else {
            show("function_id");
            show("verdict");
            show("min_eigenvalue");
            show("threshold");
        }
    } else if (kind == "search") {
        show("lhs");
        show("rhs");
        show("ordering");
        out << "  witnesses: " << j.value("witnesses", nlohmann::json::array()).dump() << "\n";
    } else if (kind == "bounds") {
        show("alpha");
        show("beta");
        show("lower");
        show("upper");
        show("difference");
        show("status");
    } else if (kind == "continuity") {
        for (const auto& p : j.value("probes", nlohmann::json::array()))
            out << "  " << p.value("family", "?") << " -> " << p.value("target", 0.0)
                << ": final " << p.value("final_diff", 0.0) << ", " << p.value("status", "?")
                << "\n";
    } else {
        out << j.dump(2) << "\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Subcommand handlers.
// ---------------------------------------------------------------------------

struct ScalarOpts {
    std::string kind;
    double x = 1.0;
    double y = 1.0;
    std::string output;
    std::string format = "pretty";
};

int run_scalar(const ScalarOpts& o) {
    const MeanKind kind = MeanKind::parse(o.kind);
    double value;
    if (o.x > 0.0 && o.y > 0.0) {
        value = eval_mean(kind, o.x, o.y);
    } else if (o.y == 0.0 && o.x > 0.0) {
        value = mean_at_zero(kind, o.x);
    } else if (o.x == 0.0 && o.y > 0.0 && kind.symmetric()) {
        value = mean_at_zero(kind, o.y);
    } else if (o.x == 0.0 && o.y == 0.0) {
        value = 0.0;
    } else {
        throw std::invalid_argument("arguments must be nonnegative, and only symmetric means "
                                    "accept x = 0");
    }
    if (o.format == "json") {
        nlohmann::json j;
        j["schema_version"] = kReportSchemaVersion;
        j["kind"] = "scalar";
        j["mean"] = kind.code();
        j["x"] = o.x;
        j["y"] = o.y;
        j["value"] = value;
        emit_json(j, o.output);
    } else {
        emit(fmt6(value), o.output);
    }
    return 0;
}

struct PosdefOpts {
    std::string function;
    double alpha = 0.5;
    double beta = 1.0;
    int m = 1;
    std::string expect = "certified";
    double half_width = 80.0;
    int count = 64;
    std::string scales;
    std::optional<std::uint64_t> jitter_seed;
    double threshold_rel = 1e-10;
    bool fourier = false;
    std::string output;
    std::string format = "json";
};

int run_posdef(const PosdefOpts& o) {
    GridSpec grid;
    grid.half_width = o.half_width;
    grid.count = o.count;
    grid.jitter_seed = o.jitter_seed;
    if (!o.scales.empty()) {
        grid.scales.clear();
        for (const std::string& s : split(o.scales, ',')) grid.scales.push_back(std::stod(s));
    }

    auto run_one = [&](const std::string& id, const std::function<double(double)>& phi,
                       bool expect_certified) {
        GramReport r = check_positive_definite(id, phi, grid, o.threshold_rel);
        const bool matched = expect_certified ? r.verdict == PdVerdict::CertifiedOnGrids
                                              : r.verdict == PdVerdict::Refuted;
        return std::pair(std::move(r), matched);
    };

    if (!o.function.empty()) {
        if (o.expect != "certified" && o.expect != "refuted")
            throw std::invalid_argument("--expect must be certified or refuted");
        std::string id = o.function;
        auto [report, matched] =
            run_one(id, catalog_function(o.function, o.alpha, o.beta, o.m),
                    o.expect == "certified");
        nlohmann::json j = to_json(report);
        j["expected"] = o.expect == "certified" ? "certified-on-grids" : "refuted";
        j["matched"] = matched;
        if (o.fourier) {
            const double err =
                fourier_kernel_check(o.alpha, o.beta, {0.0, 0.5, 1.0, 2.0}, 120.0, 8001);
            j["fourier_max_error"] = err;
            matched = matched && err <= 1e-6;
            j["matched"] = matched;
        }
        if (o.format == "pretty")
            emit(pretty_gram(report) + "expected " + j["expected"].get<std::string>() + ": " +
                     (matched ? "ok" : "MISMATCH") + "\n",
                 o.output);
        else
            emit_json(j, o.output);
        return matched ? 0 : 1;
    }

    // Whole catalog.
    bool all_matched = true;
    nlohmann::json entries = nlohmann::json::array();
    std::string pretty;
    for (const PdCatalogEntry& entry : pd_catalog()) {
        auto [report, matched] = run_one(entry.id, entry.phi, entry.expected_certified);
        all_matched = all_matched && matched;
        nlohmann::json e = to_json(report);
        e.erase("schema_version");
        e.erase("kind");
        e["expected"] = entry.expected_certified ? "certified-on-grids" : "refuted";
        e["matched"] = matched;
        entries.push_back(std::move(e));
        if (o.format == "pretty")
            pretty += std::string(matched ? "ok   " : "MISS ") + entry.id + ": " +
                      verdict_name(report.verdict) + " (min eig " +
                      fmt6(report.min_eigenvalue) + ")\n";
    }
    if (o.format == "pretty") {
        pretty += std::string("status: ") + (all_matched ? "pass" : "fail") + "\n";
        emit(pretty, o.output);
    } else {
        nlohmann::json j;
        j["schema_version"] = kReportSchemaVersion;
        j["kind"] = "posdef-suite";
        j["entries"] = std::move(entries);
        j["status"] = all_matched ? "pass" : "fail";
        emit_json(j, o.output);
    }
    return all_matched ? 0 : 1;
}

struct VerifyOpts {
    std::string chain;
    std::optional<int> m, m1, m2;
    std::optional<double> alpha, beta;
    std::string input;
    bool bounds = false;
    CommonOpts common;
};

int run_verify(const VerifyOpts& o) {
    if (o.bounds) {
        BoundSpec spec;
        spec.alpha = o.alpha.value_or(0.5);
        spec.beta = o.beta.value_or(1.0);
        ChainSpec scratch;  // reuse the sampling-option plumbing
        apply_sampling(scratch, o.common);
        spec.norms = scratch.norms;
        spec.dims = o.common.dims.empty() ? spec.dims : scratch.dims;
        spec.ensembles = o.common.ensembles.empty() ? spec.ensembles : scratch.ensembles;
        spec.samples = scratch.samples;
        spec.seed = scratch.seed;
        spec.tolerance_rel = scratch.tolerance_rel;
        spec.condition_target = scratch.condition_target;
        spec.threads = scratch.threads;
        const BoundReport report = bound_check(spec);
        if (o.common.format == "pretty")
            emit(pretty_bounds(report), o.common.output);
        else if (o.common.format == "csv")
            throw std::invalid_argument("csv output is not defined for bound reports");
        else
            emit_json(to_json(report), o.common.output);
        return report.pass ? 0 : 1;
    }

    if (o.chain.empty() && o.input.empty()) {
        // Full default battery.
        std::vector<ChainSpec> specs = default_battery(o.common.seed, o.common.samples,
                                                       o.common.tolerance, o.common.threads);
        for (ChainSpec& s : specs) {
            CommonOpts partial = o.common;
            partial.samples = s.samples;
            partial.seed = s.seed;
            apply_sampling(s, partial);
        }
        const BatteryReport report = run_battery(specs);
        if (o.common.format == "pretty")
            emit(pretty_battery(report), o.common.output);
        else if (o.common.format == "csv")
            emit(battery_csv(report), o.common.output);
        else
            emit_json(to_json(report), o.common.output);
        return report.pass ? 0 : 1;
    }

    if (o.chain.empty())
        throw std::invalid_argument("--input requires --chain to name the inequality chain");

    ChainParams params;
    params.m = o.m;
    params.m1 = o.m1;
    params.m2 = o.m2;
    params.alpha = o.alpha;
    params.beta = o.beta;
    ChainSpec spec = builtin_chain(o.chain, params);
    apply_sampling(spec, o.common);

    ChainReport report;
    if (!o.input.empty()) {
        const std::vector<std::string> paths = split(o.input, ',');
        if (paths.size() != 3)
            throw std::invalid_argument("--input needs three paths: S,T,X");
        MeanTransformInput input{load_matrix(paths[0]), load_matrix(paths[1]),
                                 load_matrix(paths[2])};
        report = verify_chain_on_instance(spec, input);
    } else {
        report = verify_chain(spec);
    }
    if (o.common.format == "pretty")
        emit(pretty_chain(report), o.common.output);
    else if (o.common.format == "csv")
        emit(chain_csv(report), o.common.output);
    else
        emit_json(to_json(report), o.common.output);
    return report.pass ? 0 : 1;
}

struct SearchOpts {
    std::string lhs;
    std::string rhs;
    double t_min = 1e-6;
    double t_max = 1e6;
    int grid_points = 4096;
    int refine_iters = 60;
    std::string output;
    std::string format = "json";
};

int run_search(const SearchOpts& o) {
    const SearchReport report =
        counterexample_search(MeanKind::parse(o.lhs), MeanKind::parse(o.rhs), o.t_min, o.t_max,
                              o.grid_points, o.refine_iters);
    if (o.format == "pretty") {
        emit(pretty_search(report), o.output);
    } else if (o.format == "csv") {
        std::string csv = "t,sign,ratio,rel_diff\n";
        for (const SearchWitness& w : report.witnesses)
            csv += fmt17(w.t) + "," + std::to_string(w.sign) + "," + fmt17(w.ratio) + "," +
                   fmt17(w.rel_diff) + "\n";
        emit(csv, o.output);
    } else {
        emit_json(to_json(report), o.output);
    }
    return 0;
}

struct ContinuityOpts {
    std::string family;
    std::optional<double> target;
    int dim = 6;
    int k_max = 20;
    std::uint64_t seed = 1729;
    std::string norm = "tr";
    std::string output;
    std::string format = "json";
};

int run_continuity(const ContinuityOpts& o) {
    std::vector<ContinuityReport> reports;
    if (o.family.empty()) {
        reports = default_continuity_suite(o.dim, o.seed, o.k_max);
    } else {
        MeanFamily family;
        if (o.family == "G")
            family = MeanFamily::G;
        else if (o.family == "A")
            family = MeanFamily::A;
        else
            throw std::invalid_argument("--family must be G or A");
        const double target = o.target.value_or(o.family == "G" ? 1.0 : 0.5);
        ContinuityReport r =
            continuity_probe(family, target, geometric_sequence(target, o.k_max),
                             continuity_instance(o.dim, o.seed), NormKind::parse(o.norm));
        r.dim = o.dim;
        r.seed = o.seed;
        reports.push_back(std::move(r));
    }
    bool pass = true;
    for (const ContinuityReport& r : reports) pass = pass && r.pass;
    if (o.format == "pretty")
        emit(pretty_continuity(reports), o.output);
    else if (o.format == "csv")
        throw std::invalid_argument("csv output is not defined for continuity reports");
    else
        emit_json(continuity_suite_json(reports), o.output);
    return pass ? 0 : 1;
}

struct ReportOpts {
    std::string input;
    std::string output;
};

int run_report(const ReportOpts& o) {
    std::ifstream in(o.input);
    if (!in) throw std::runtime_error("cannot open report file: " + o.input);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::runtime_error("invalid JSON in " + o.input + ": " + e.what());
    }
    emit(pretty_stored(j), o.output);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical toolkit for operator mean norm inequalities"};
    app.require_subcommand(1);

    ScalarOpts scalar_opts;
    auto* scalar = app.add_subcommand("scalar", "evaluate a scalar mean");
    scalar->add_option("--kind", scalar_opts.kind, "mean code, e.g. A:0.5, LM, M:0.75")
        ->required();
    scalar->add_option("--x", scalar_opts.x, "first argument")->required();
    scalar->add_option("--y", scalar_opts.y, "second argument")->required();
    scalar->add_option("--output", scalar_opts.output, "output path (default: stdout)")
        ->envname("MEANSCOPE_OUTPUT");
    scalar->add_option("--format", scalar_opts.format, "json or pretty")
        ->envname("MEANSCOPE_FORMAT")
        ->check(CLI::IsMember({"json", "pretty"}));

    PosdefOpts posdef_opts;
    auto* posdef = app.add_subcommand(
        "posdef", "Gram-matrix positive definiteness checks (no --function: whole catalog)");
    posdef->add_option("--function", posdef_opts.function,
                       "sinh-ratio, hg-ratio, gl-ratio, la-ratio, mg-composite, am-composite, "
                       "hm-ratio, cosh");
    posdef->add_option("--alpha", posdef_opts.alpha, "first parameter");
    posdef->add_option("--beta", posdef_opts.beta, "second parameter (sinh-ratio)");
    posdef->add_option("--m", posdef_opts.m, "integer parameter (composites)");
    posdef->add_option("--expect", posdef_opts.expect, "certified or refuted")
        ->check(CLI::IsMember({"certified", "refuted"}));
    posdef->add_option("--half-width", posdef_opts.half_width, "base grid half width");
    posdef->add_option("--count", posdef_opts.count, "grid count (points = 2*floor(c/2)+1)");
    posdef->add_option("--scales", posdef_opts.scales, "comma-separated half widths");
    posdef->add_option("--jitter-seed", posdef_opts.jitter_seed, "seed for jittered grids");
    posdef->add_option("--threshold-rel", posdef_opts.threshold_rel,
                       "eigenvalue threshold, scaled by n*phi(0)");
    posdef->add_flag("--fourier", posdef_opts.fourier,
                     "also run the cosine-transform quadrature check (sinh-ratio only)");
    posdef->add_option("--output", posdef_opts.output, "output path (default: stdout)")
        ->envname("MEANSCOPE_OUTPUT");
    posdef->add_option("--format", posdef_opts.format, "json or pretty")
        ->envname("MEANSCOPE_FORMAT")
        ->check(CLI::IsMember({"json", "pretty"}));

    VerifyOpts verify_opts;
    auto* verify = app.add_subcommand(
        "verify", "verify norm inequality chains (no --chain: full default battery)");
    verify->add_option("--chain", verify_opts.chain,
                       "thm-2.5, thm-1.2, eq-3-final, prop-2.4, prop-2.3-H, prop-2.3-G, "
                       "prop-2.3-A, prop-2.7, rem-2.6");
    int m_flag = 0, m1_flag = 0, m2_flag = 0;
    double alpha_flag = 0.0, beta_flag = 0.0;
    auto* om = verify->add_option("--m", m_flag, "integer parameter (sets every m)");
    auto* om1 = verify->add_option("--m1", m1_flag, "first integer parameter");
    auto* om2 = verify->add_option("--m2", m2_flag, "second integer parameter");
    auto* oa = verify->add_option("--alpha", alpha_flag, "alpha parameter");
    auto* ob = verify->add_option("--beta", beta_flag, "beta parameter");
    verify->add_option("--input", verify_opts.input,
                       "run on explicit matrices: three paths S,T,X (text or .json)");
    verify->add_flag("--bounds", verify_opts.bounds,
                     "check the two-sided arithmetic-family bounds for (alpha, beta) instead "
                     "of a chain");
    add_common(verify, verify_opts.common, true);

    SearchOpts search_opts;
    auto* search = app.add_subcommand("search", "scalar counterexample search on (e^t, 1)");
    search->add_option("--lhs", search_opts.lhs, "left mean code")->required();
    search->add_option("--rhs", search_opts.rhs, "right mean code")->required();
    search->add_option("--t-min", search_opts.t_min, "grid start (t > 0)");
    search->add_option("--t-max", search_opts.t_max, "grid end");
    search->add_option("--grid-points", search_opts.grid_points, "log-spaced grid size");
    search->add_option("--refine-iters", search_opts.refine_iters, "bisection iterations");
    search->add_option("--output", search_opts.output, "output path (default: stdout)")
        ->envname("MEANSCOPE_OUTPUT");
    search->add_option("--format", search_opts.format, "json, csv or pretty")
        ->envname("MEANSCOPE_FORMAT")
        ->check(CLI::IsMember({"json", "csv", "pretty"}));

    ContinuityOpts continuity_opts;
    auto* continuity = app.add_subcommand(
        "continuity", "parameter-continuity probes (default: G->1, A->0.5, A->0)");
    continuity->add_option("--family", continuity_opts.family, "G or A");
    double target_flag = 0.0;
    auto* ot = continuity->add_option("--target", target_flag, "parameter limit");
    continuity->add_option("--dim", continuity_opts.dim, "instance dimension");
    continuity->add_option("--k-max", continuity_opts.k_max, "probe sequence length");
    continuity->add_option("--seed", continuity_opts.seed, "instance seed")
        ->envname("MEANSCOPE_SEED");
    continuity->add_option("--norm", continuity_opts.norm, "norm code (default tr)");
    continuity->add_option("--output", continuity_opts.output, "output path (default: stdout)")
        ->envname("MEANSCOPE_OUTPUT");
    continuity->add_option("--format", continuity_opts.format, "json or pretty")
        ->envname("MEANSCOPE_FORMAT")
        ->check(CLI::IsMember({"json", "pretty"}));

    ReportOpts report_opts;
    auto* report = app.add_subcommand("report", "pretty-print a stored JSON report");
    report->add_option("--input", report_opts.input, "report file")->required();
    report->add_option("--output", report_opts.output, "output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (scalar->parsed()) return run_scalar(scalar_opts);
        if (posdef->parsed()) return run_posdef(posdef_opts);
        if (verify->parsed()) {
            if (om->count()) verify_opts.m = m_flag;
            if (om1->count()) verify_opts.m1 = m1_flag;
            if (om2->count()) verify_opts.m2 = m2_flag;
            if (oa->count()) verify_opts.alpha = alpha_flag;
            if (ob->count()) verify_opts.beta = beta_flag;
            return run_verify(verify_opts);
        }
        if (search->parsed()) return run_search(search_opts);
        if (continuity->parsed()) {
            if (ot->count()) continuity_opts.target = target_flag;
            return run_continuity(continuity_opts);
        }
        if (report->parsed()) return run_report(report_opts);
        std::cerr << "no subcommand given\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
