#include "meanscope/report_json.hpp"

#include <cstdio>

namespace meanscope {

namespace {

using nlohmann::json;

json base(const char* kind) {
    json j;
    j["schema_version"] = kReportSchemaVersion;
    j["kind"] = kind;
    return j;
}

const char* status_text(bool pass) { return pass ? "pass" : "fail"; }

json record_json(const ComparisonRecord& r) {
    json j;
    j["sample"] = r.sample;
    j["dim"] = dim_code(r.dim);
    j["ensemble"] = r.ensemble;
    j["norm"] = r.norm;
    j["left_term"] = r.left_term;
    j["right_term"] = r.right_term;
    j["left_value"] = r.left_value;
    j["right_value"] = r.right_value;
    j["margin"] = r.margin;
    j["rel_margin"] = r.rel_margin;
    return j;
}

json error_json(const SampleError& e) {
    json j;
    j["sample"] = e.sample;
    j["dim"] = dim_code(e.dim);
    j["ensemble"] = e.ensemble;
    j["message"] = e.message;
    return j;
}

json chain_body(const ChainReport& r) {
    json j;
    j["chain_id"] = r.chain_id;
    j["terms"] = r.term_labels;
    if (r.norm_codes.empty())
        j["norms"] = "default-battery";
    else
        j["norms"] = r.norm_codes;
    j["seed"] = r.seed;
    j["tolerance_rel"] = r.tolerance_rel;
    j["samples_per_cell"] = r.samples_per_cell;
    j["total_samples"] = r.total_samples;
    j["total_comparisons"] = r.total_comparisons;
    j["evaluation_errors"] = r.evaluation_errors;
    j["min_margin"] = r.min_margin;
    j["min_rel_margin"] = r.min_rel_margin;
    json cells = json::array();
    for (const CellSummary& c : r.cells) {
        json cj;
        cj["dim"] = dim_code(c.dim);
        cj["ensemble"] = c.ensemble;
        cj["samples"] = c.samples;
        cj["errors"] = c.errors;
        cj["min_margin"] = c.min_margin;
        cj["min_rel_margin"] = c.min_rel_margin;
        cells.push_back(std::move(cj));
    }
    j["cells"] = std::move(cells);
    json violations = json::array();
    for (const ComparisonRecord& v : r.violations) violations.push_back(record_json(v));
    j["violations"] = std::move(violations);
    json errors = json::array();
    for (const SampleError& e : r.errors) errors.push_back(error_json(e));
    j["errors"] = std::move(errors);
    j["status"] = status_text(r.pass);
    return j;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void append_csv_rows(std::string& out, const ChainReport& r) {
    for (const ComparisonRecord& rec : r.records) {
        out += csv_escape(r.chain_id);
        out += ',';
        out += std::to_string(rec.sample);
        out += ',';
        out += dim_code(rec.dim);
        out += ',';
        out += csv_escape(rec.norm);
        out += ',';
        out += csv_escape(rec.left_term);
        out += ',';
        out += csv_escape(rec.right_term);
        out += ',';
        out += csv_num(rec.left_value);
        out += ',';
        out += csv_num(rec.right_value);
        out += ',';
        out += csv_num(rec.margin);
        out += '\n';
    }
}

constexpr const char* kCsvHeader =
    "chain_id,sample,dim,norm,left_term,right_term,left_value,right_value,margin\n";

}  // namespace

json to_json(const GramReport& r) {
    json j = base("posdef");
    j["function_id"] = r.function_id;
    json grid;
    grid["half_width"] = r.grid.half_width;
    grid["count"] = r.grid.count;
    if (r.grid.jitter_seed)
        grid["jitter_seed"] = *r.grid.jitter_seed;
    else
        grid["jitter_seed"] = nullptr;
    grid["scales"] = r.grid.scales;
    j["grid"] = std::move(grid);
    j["phi0"] = r.phi0;
    j["min_eigenvalue"] = r.min_eigenvalue;
    j["threshold"] = r.threshold;
    j["verdict"] = verdict_name(r.verdict);
    j["witness_points"] = r.witness_points;
    json grids = json::array();
    for (const GridResult& g : r.grids) {
        json gj;
        gj["half_width"] = g.half_width;
        gj["points"] = g.points;
        gj["jittered"] = g.jittered;
        gj["min_eigenvalue"] = g.min_eigenvalue;
        gj["threshold"] = g.threshold;
        gj["evaluation_failed"] = g.evaluation_failed;
        grids.push_back(std::move(gj));
    }
    j["grids"] = std::move(grids);
    return j;
}

json to_json(const ChainReport& r) {
    json j = base("chain");
    j.update(chain_body(r));
    return j;
}

json to_json(const BatteryReport& r) {
    json j = base("battery");
    json chains = json::array();
    for (const ChainReport& c : r.chains) chains.push_back(chain_body(c));
    j["chains"] = std::move(chains);
    j["total_samples"] = r.total_samples;
    j["total_comparisons"] = r.total_comparisons;
    j["evaluation_errors"] = r.evaluation_errors;
    j["violation_count"] = r.violation_count;
    j["min_margin"] = r.min_margin;
    j["min_rel_margin"] = r.min_rel_margin;
    j["status"] = status_text(r.pass);
    return j;
}

json to_json(const SearchReport& r) {
    json j = base("search");
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["t_min"] = r.t_min;
    j["t_max"] = r.t_max;
    j["grid_points"] = r.grid_points;
    j["refine_iters"] = r.refine_iters;
    j["noise_floor_rel"] = r.noise_floor_rel;
    j["ordering"] = r.ordering;
    json witnesses = json::array();
    for (const SearchWitness& w : r.witnesses) {
        json wj;
        wj["t"] = w.t;
        wj["sign"] = w.sign;
        wj["ratio"] = w.ratio;
        wj["rel_diff"] = w.rel_diff;
        witnesses.push_back(std::move(wj));
    }
    j["witnesses"] = std::move(witnesses);
    j["crossings"] = r.crossings;
    return j;
}

json to_json(const BoundReport& r) {
    json j = base("bounds");
    j["alpha"] = r.alpha;
    j["beta"] = r.beta;
    j["seed"] = r.seed;
    j["tolerance_rel"] = r.tolerance_rel;
    j["total_samples"] = r.total_samples;
    j["total_checks"] = r.total_checks;
    j["evaluation_errors"] = r.evaluation_errors;
    auto slack = [](const SlackSummary& s) {
        json sj;
        sj["min_slack"] = s.min_slack;
        sj["min_rel_slack"] = s.min_rel_slack;
        sj["violations"] = s.violations;
        return sj;
    };
    j["lower"] = slack(r.lower);
    j["upper"] = slack(r.upper);
    j["difference"] = slack(r.difference);
    json violations = json::array();
    for (const BoundViolation& v : r.violations) {
        json vj;
        vj["sample"] = v.sample;
        vj["dim"] = dim_code(v.dim);
        vj["ensemble"] = v.ensemble;
        vj["norm"] = v.norm;
        vj["inequality"] = v.inequality;
        vj["slack"] = v.slack;
        vj["rel_slack"] = v.rel_slack;
        violations.push_back(std::move(vj));
    }
    j["violations"] = std::move(violations);
    json errors = json::array();
    for (const SampleError& e : r.errors) errors.push_back(error_json(e));
    j["errors"] = std::move(errors);
    j["status"] = status_text(r.pass);
    return j;
}

namespace {

json continuity_body(const ContinuityReport& r) {
    json j;
    j["family"] = r.family;
    j["target"] = r.target;
    j["norm"] = r.norm;
    j["dim"] = r.dim;
    j["seed"] = r.seed;
    j["pass_threshold"] = r.pass_threshold;
    json steps = json::array();
    for (const ContinuityStep& s : r.steps) {
        json sj;
        sj["param"] = s.param;
        sj["diff"] = s.diff;
        sj["rate_applies"] = s.rate_applies;
        if (s.rate_applies) {
            sj["rate_bound"] = s.rate_bound;
            sj["rate_ok"] = s.rate_ok;
        }
        steps.push_back(std::move(sj));
    }
    j["steps"] = std::move(steps);
    j["final_diff"] = r.final_diff;
    j["monotone_after_3"] = r.monotone_after_3;
    j["rate_ok"] = r.rate_ok;
    j["status"] = status_text(r.pass);
    return j;
}

}  // namespace

json to_json(const ContinuityReport& r) {
    json j = base("continuity");
    j["probes"] = json::array({continuity_body(r)});
    return j;
}

json continuity_suite_json(const std::vector<ContinuityReport>& reports) {
    json j = base("continuity");
    json probes = json::array();
    for (const ContinuityReport& r : reports) probes.push_back(continuity_body(r));
    j["probes"] = std::move(probes);
    return j;
}

std::string chain_csv(const ChainReport& report) {
    std::string out = kCsvHeader;
    append_csv_rows(out, report);
    return out;
}

std::string battery_csv(const BatteryReport& report) {
    std::string out = kCsvHeader;
    for (const ChainReport& c : report.chains) append_csv_rows(out, c);
    return out;
}

}  // namespace meanscope
