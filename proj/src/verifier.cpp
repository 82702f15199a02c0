#include "meanscope/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "meanscope/hyperbolic.hpp"

namespace meanscope {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

// Index-chunked worker pool. Results must be written to per-index slots so
// the schedule cannot affect them.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
    int n = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (count < static_cast<std::size_t>(n)) n = static_cast<int>(count);
    if (n <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (int w = 0; w < n; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) break;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

// ---------------------------------------------------------------------------
// Terms.
// ---------------------------------------------------------------------------

std::string term_label(const ChainTerm& term) {
    if (const auto* mt = std::get_if<MeanTransformTerm>(&term)) return mt->kind.code();
    if (const auto* ps = std::get_if<PowerSumTerm>(&term))
        return "sum:" + power_sum_code(ps->id) + ":" + std::to_string(ps->m);
    const auto& in = std::get<IntegralTerm>(term);
    return "integral:" + std::to_string(in.nodes);
}

ChainTerm parse_term(const std::string& label) {
    if (label.rfind("sum:", 0) == 0) {
        const std::string rest = label.substr(4);
        const auto colon = rest.rfind(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("power sum term needs an m: " + label);
        const PowerSumId id = parse_power_sum_id(rest.substr(0, colon));
        const int m = std::stoi(rest.substr(colon + 1));
        return PowerSumTerm{id, m};
    }
    if (label.rfind("integral", 0) == 0) {
        IntegralTerm t;
        if (label.size() > 8) {
            if (label[8] != ':') throw std::invalid_argument("bad integral term: " + label);
            t.nodes = std::stoi(label.substr(9));
        }
        return t;
    }
    return MeanTransformTerm{MeanKind::parse(label)};
}

Eigen::MatrixXd apply_term(const ChainTerm& term, const SpectralDecomposition& s,
                           const SpectralDecomposition& t, const Eigen::MatrixXd& X) {
    if (const auto* mt = std::get_if<MeanTransformTerm>(&term))
        return mean_transform(mt->kind, s, t, X);
    if (const auto* ps = std::get_if<PowerSumTerm>(&term))
        return power_sum_representation(ps->id, ps->m, s, t, X);
    return log_mean_integral(s, t, X, std::get<IntegralTerm>(term).nodes);
}

std::string dim_code(const DimPair& d) {
    return std::to_string(d.n) + "x" + std::to_string(d.m);
}

DimPair parse_dim(const std::string& code) {
    const auto x = code.find('x');
    try {
        if (x == std::string::npos) {
            const int n = std::stoi(code);
            if (n < 1) throw std::invalid_argument("");
            return {n, n};
        }
        const int n = std::stoi(code.substr(0, x));
        const int m = std::stoi(code.substr(x + 1));
        if (n < 1 || m < 1) throw std::invalid_argument("");
        return {n, m};
    } catch (const std::exception&) {
        throw std::invalid_argument("bad dimension code '" + code + "' (use e.g. 3 or 3x5)");
    }
}

std::vector<DimPair> default_dims() { return {{2, 2}, {3, 3}, {5, 5}, {8, 8}, {3, 5}}; }

std::vector<EnsembleKind> default_ensembles_list() {
    return {EnsembleKind::GaussianPsd, EnsembleKind::RankDeficientPsd,
            EnsembleKind::IllConditionedPsd};
}

// ---------------------------------------------------------------------------
// verify_chain.
// ---------------------------------------------------------------------------

namespace {

struct Cell {
    DimPair dim;
    EnsembleKind kind;
    std::uint64_t seed;
    std::vector<NormKind> norms;
};

std::vector<NormKind> norms_for_dim(const std::vector<NormKind>& requested, const DimPair& d) {
    if (requested.empty()) return default_norm_battery(d.n, d.m);
    const int r = std::min(d.n, d.m);
    for (const NormKind& k : requested)
        if (k.variant() == NormKind::Variant::KyFan && k.k() > r)
            throw std::invalid_argument("norm " + k.code() + " exceeds rank for dims " +
                                        dim_code(d));
    return requested;
}

void validate_common(const std::vector<DimPair>& dims, const std::vector<EnsembleKind>& ensembles,
                     int samples, double tolerance_rel, double condition_target) {
    if (dims.empty()) throw std::invalid_argument("dims must be nonempty");
    for (const DimPair& d : dims)
        if (d.n < 1 || d.m < 1) throw std::invalid_argument("dims must be positive");
    if (ensembles.empty()) throw std::invalid_argument("ensembles must be nonempty");
    if (samples < 1) throw std::invalid_argument("samples must be positive");
    if (!(tolerance_rel > 0.0) || !std::isfinite(tolerance_rel))
        throw std::invalid_argument("tolerance_rel must be positive and finite");
    if (!(condition_target >= 1.0))
        throw std::invalid_argument("condition_target must be >= 1");
}

std::vector<Cell> make_cells(const std::vector<DimPair>& dims,
                             const std::vector<EnsembleKind>& ensembles,
                             const std::vector<NormKind>& norms, std::uint64_t seed) {
    std::vector<Cell> cells;
    cells.reserve(dims.size() * ensembles.size());
    std::uint64_t index = 0;
    for (const DimPair& d : dims) {
        const std::vector<NormKind> resolved = norms_for_dim(norms, d);
        for (EnsembleKind e : ensembles) {
            cells.push_back({d, e, mix_seed(seed, index), resolved});
            ++index;
        }
    }
    return cells;
}

struct SampleSlot {
    std::vector<ComparisonRecord> records;
    std::string error;
    bool failed = false;
};

double relative_margin(double margin, double left, double right) {
    const double scale = std::max(left, right);
    return scale > 0.0 ? margin / scale : 0.0;
}

ChainReport assemble_chain_report(const ChainSpec& spec, const std::vector<Cell>& cells,
                                  int per_cell, std::vector<SampleSlot>& slots) {
    ChainReport report;
    report.chain_id = spec.chain_id;
    for (const ChainTerm& t : spec.terms) report.term_labels.push_back(term_label(t));
    for (const NormKind& k : spec.norms) report.norm_codes.push_back(k.code());
    report.seed = spec.seed;
    report.tolerance_rel = spec.tolerance_rel;
    report.samples_per_cell = per_cell;
    report.total_samples = static_cast<long>(slots.size());

    report.cells.reserve(cells.size());
    for (const Cell& c : cells) {
        CellSummary cs;
        cs.dim = c.dim;
        cs.ensemble = ensemble_name(c.kind);
        cs.min_margin = kInf;
        cs.min_rel_margin = kInf;
        report.cells.push_back(cs);
    }

    report.min_margin = kInf;
    report.min_rel_margin = kInf;
    for (std::size_t task = 0; task < slots.size(); ++task) {
        SampleSlot& slot = slots[task];
        CellSummary& cell = report.cells[task / per_cell];
        ++cell.samples;
        if (slot.failed) {
            ++cell.errors;
            ++report.evaluation_errors;
            report.errors.push_back({static_cast<long>(task), cell.dim, cell.ensemble,
                                     slot.error});
            continue;
        }
        for (ComparisonRecord& r : slot.records) {
            report.min_margin = std::min(report.min_margin, r.margin);
            report.min_rel_margin = std::min(report.min_rel_margin, r.rel_margin);
            cell.min_margin = std::min(cell.min_margin, r.margin);
            cell.min_rel_margin = std::min(cell.min_rel_margin, r.rel_margin);
            if (r.rel_margin < -spec.tolerance_rel) report.violations.push_back(r);
            ++report.total_comparisons;
        }
        report.records.insert(report.records.end(),
                              std::make_move_iterator(slot.records.begin()),
                              std::make_move_iterator(slot.records.end()));
        slot.records.clear();
    }
    if (!std::isfinite(report.min_margin)) report.min_margin = 0.0;
    if (!std::isfinite(report.min_rel_margin)) report.min_rel_margin = 0.0;
    for (CellSummary& c : report.cells) {
        if (!std::isfinite(c.min_margin)) c.min_margin = 0.0;
        if (!std::isfinite(c.min_rel_margin)) c.min_rel_margin = 0.0;
    }
    report.pass = report.violations.empty() &&
                  report.evaluation_errors * 100 <= report.total_samples;
    return report;
}

void evaluate_chain_sample(const ChainSpec& spec, const Cell& cell, long sample_id,
                           const Instance& inst, SampleSlot& slot,
                           const std::string& ensemble_label) {
    const SpectralDecomposition sd = decompose_psd(inst.S);
    const SpectralDecomposition td = decompose_psd(inst.T);
    const std::size_t nt = spec.terms.size();
    std::vector<Eigen::VectorXd> sigma(nt);
    for (std::size_t i = 0; i < nt; ++i) {
        const Eigen::MatrixXd y = apply_term(spec.terms[i], sd, td, inst.X);
        if (!y.allFinite()) throw std::runtime_error("non-finite term value");
        sigma[i] = singular_values(y);
    }
    slot.records.reserve((nt - 1) * cell.norms.size());
    for (std::size_t i = 0; i + 1 < nt; ++i) {
        for (const NormKind& nk : cell.norms) {
            ComparisonRecord r;
            r.sample = sample_id;
            r.dim = cell.dim;
            r.ensemble = ensemble_label;
            r.norm = nk.code();
            r.left_term = term_label(spec.terms[i]);
            r.right_term = term_label(spec.terms[i + 1]);
            r.left_value = uinorm_from_singular_values(nk, sigma[i]);
            r.right_value = uinorm_from_singular_values(nk, sigma[i + 1]);
            r.margin = r.right_value - r.left_value;
            r.rel_margin = relative_margin(r.margin, r.left_value, r.right_value);
            slot.records.push_back(std::move(r));
        }
    }
}

}  // namespace

ChainReport verify_chain(const ChainSpec& spec) {
    if (spec.terms.size() < 2) throw std::invalid_argument("chain needs at least two terms");
    validate_common(spec.dims, spec.ensembles, spec.samples, spec.tolerance_rel,
                    spec.condition_target);

    const std::vector<Cell> cells = make_cells(spec.dims, spec.ensembles, spec.norms, spec.seed);
    const int per_cell =
        (spec.samples + static_cast<int>(cells.size()) - 1) / static_cast<int>(cells.size());
    const std::size_t total = cells.size() * static_cast<std::size_t>(per_cell);

    std::vector<SampleSlot> slots(total);
    parallel_for(total, spec.threads, [&](std::size_t task) {
        const Cell& cell = cells[task / per_cell];
        SampleSlot& slot = slots[task];
        try {
            const SampleEnsemble ens{cell.kind, spec.condition_target, cell.seed};
            const Instance inst =
                sample_instance(ens, cell.dim.n, cell.dim.m, task % per_cell);
            evaluate_chain_sample(spec, cell, static_cast<long>(task), inst, slot,
                                  ensemble_name(cell.kind));
        } catch (const std::exception& e) {
            slot.failed = true;
            slot.error = e.what();
            slot.records.clear();
        }
    });
    return assemble_chain_report(spec, cells, per_cell, slots);
}

ChainReport verify_chain_on_instance(const ChainSpec& spec, const MeanTransformInput& input) {
    if (spec.terms.size() < 2) throw std::invalid_argument("chain needs at least two terms");
    if (input.S.rows() != input.X.rows() || input.T.rows() != input.X.cols())
        throw std::invalid_argument("instance shapes are inconsistent");
    if (!(spec.tolerance_rel > 0.0) || !std::isfinite(spec.tolerance_rel))
        throw std::invalid_argument("tolerance_rel must be positive and finite");

    const DimPair dim{static_cast<int>(input.X.rows()), static_cast<int>(input.X.cols())};
    Cell cell{dim, EnsembleKind::GaussianPsd, spec.seed, norms_for_dim(spec.norms, dim)};
    std::vector<SampleSlot> slots(1);
    try {
        Instance inst{input.S, input.T, input.X};
        evaluate_chain_sample(spec, cell, 0, inst, slots[0], "explicit");
    } catch (const std::exception& e) {
        slots[0].failed = true;
        slots[0].error = e.what();
    }
    ChainReport report = assemble_chain_report(spec, {cell}, 1, slots);
    for (CellSummary& c : report.cells) c.ensemble = "explicit";
    for (SampleError& e : report.errors) e.ensemble = "explicit";
    // A single explicit instance has no error budget: any failure fails it.
    report.pass = report.violations.empty() && report.evaluation_errors == 0;
    return report;
}

// ---------------------------------------------------------------------------
// Built-in chains.
// ---------------------------------------------------------------------------

namespace {

int resolve_m(const ChainParams& p, const std::optional<int>& specific, int fallback,
              int minimum, const char* what) {
    const int m = specific.value_or(p.m.value_or(fallback));
    if (m < minimum)
        throw std::invalid_argument(std::string(what) + " requires m >= " +
                                    std::to_string(minimum));
    return m;
}

ChainTerm mean_term(MeanFamily f, double a = 0.0) { return MeanTransformTerm{MeanKind(f, a)}; }

}  // namespace

std::vector<std::string> builtin_chain_ids() {
    return {"thm-2.5",    "thm-1.2",    "eq-3-final", "prop-2.4", "prop-2.3-H",
            "prop-2.3-G", "prop-2.3-A", "prop-2.7",   "rem-2.6"};
}

ChainSpec builtin_chain(const std::string& chain_id, const ChainParams& params) {
    ChainSpec spec;
    char id[96];

    if (chain_id == "thm-2.5") {
        const int m1 = resolve_m(params, params.m1, 1, 1, "thm-2.5");
        const int m2 = resolve_m(params, params.m2, m1, 1, "thm-2.5");
        spec.terms = {mean_term(MeanFamily::M, m1 / (m1 + 1.0)),
                      mean_term(MeanFamily::G, 1.0 / m1), mean_term(MeanFamily::LM),
                      mean_term(MeanFamily::A, 1.0 / m2),
                      mean_term(MeanFamily::M, (m2 + 1.0) / m2)};
        std::snprintf(id, sizeof(id), "thm-2.5[m1=%d,m2=%d]", m1, m2);
    } else if (chain_id == "thm-1.2") {
        const int m1 = resolve_m(params, params.m1, 1, 1, "thm-1.2");
        const int m2 = resolve_m(params, params.m2, std::max(2, m1), 2, "thm-1.2");
        spec.terms = {mean_term(MeanFamily::GM), PowerSumTerm{PowerSumId::MOverMPlus1, m1},
                      IntegralTerm{}, PowerSumTerm{PowerSumId::MOverMMinus1, m2},
                      mean_term(MeanFamily::AM)};
        std::snprintf(id, sizeof(id), "thm-1.2[m1=%d,m2=%d]", m1, m2);
    } else if (chain_id == "eq-3-final") {
        const int m1 = resolve_m(params, params.m1, 1, 1, "eq-3-final");
        const int m2 = resolve_m(params, params.m2, std::max(2, m1), 2, "eq-3-final");
        spec.terms = {PowerSumTerm{PowerSumId::MOverMPlus1, m1},
                      PowerSumTerm{PowerSumId::GInvM, m1}, IntegralTerm{},
                      PowerSumTerm{PowerSumId::AInvM, m2},
                      PowerSumTerm{PowerSumId::MOverMMinus1, m2}};
        std::snprintf(id, sizeof(id), "eq-3-final[m1=%d,m2=%d]", m1, m2);
    } else if (chain_id == "prop-2.4") {
        const double a = params.alpha.value_or(0.5);
        if (!(std::abs(a) <= 1.0)) throw std::invalid_argument("prop-2.4 requires |alpha| <= 1");
        spec.terms = {mean_term(MeanFamily::H, a), mean_term(MeanFamily::G, a),
                      mean_term(MeanFamily::LM), mean_term(MeanFamily::A, a)};
        std::snprintf(id, sizeof(id), "prop-2.4[alpha=%s]", format_num(a).c_str());
    } else if (chain_id == "prop-2.3-H" || chain_id == "prop-2.3-G" ||
               chain_id == "prop-2.3-A") {
        const double a = params.alpha.value_or(0.5);
        const double b = params.beta.value_or(1.0);
        const double cap = chain_id == "prop-2.3-G" ? 2.0 : 1.0;
        if (!(0.0 <= a && a < b && b <= cap))
            throw std::invalid_argument(chain_id + " requires 0 <= alpha < beta <= " +
                                        format_num(cap));
        if (chain_id == "prop-2.3-H")
            spec.terms = {mean_term(MeanFamily::H, b), mean_term(MeanFamily::H, a)};
        else if (chain_id == "prop-2.3-G")
            spec.terms = {mean_term(MeanFamily::G, b), mean_term(MeanFamily::G, a)};
        else
            spec.terms = {mean_term(MeanFamily::A, a), mean_term(MeanFamily::A, b)};
        std::snprintf(id, sizeof(id), "%s[alpha=%s,beta=%s]", chain_id.c_str(),
                      format_num(a).c_str(), format_num(b).c_str());
    } else if (chain_id == "prop-2.7") {
        const int m = resolve_m(params, std::nullopt, 1, 1, "prop-2.7");
        spec.terms = {mean_term(MeanFamily::H, 1.0 / m),
                      mean_term(MeanFamily::M, m / (m + 1.0))};
        std::snprintf(id, sizeof(id), "prop-2.7[m=%d]", m);
    } else if (chain_id == "rem-2.6") {
        const int m = resolve_m(params, std::nullopt, 2, 2, "rem-2.6");
        spec.terms = {mean_term(MeanFamily::M, (m + 1.0) / m),
                      mean_term(MeanFamily::M, m / (m - 1.0))};
        std::snprintf(id, sizeof(id), "rem-2.6[m=%d]", m);
    } else {
        throw std::invalid_argument("unknown chain id: " + chain_id);
    }
    spec.chain_id = id;
    return spec;
}

std::vector<ChainSpec> default_battery(std::uint64_t seed, int samples, double tolerance_rel,
                                       int threads) {
    std::vector<ChainSpec> specs;
    auto add = [&](ChainSpec s) {
        s.samples = samples;
        s.tolerance_rel = tolerance_rel;
        s.threads = threads;
        s.seed = mix_seed(seed, specs.size());
        specs.push_back(std::move(s));
    };
    ChainParams p;
    for (auto [m1, m2] : {std::pair{1, 2}, {2, 3}, {3, 4}}) {
        p = {};
        p.m1 = m1;
        p.m2 = m2;
        add(builtin_chain("thm-1.2", p));
    }
    for (auto [m1, m2] : {std::pair{1, 2}, {2, 3}, {3, 4}}) {
        p = {};
        p.m1 = m1;
        p.m2 = m2;
        add(builtin_chain("eq-3-final", p));
    }
    for (int m : {1, 2, 3}) {
        p = {};
        p.m = m;
        add(builtin_chain("thm-2.5", p));
    }
    for (auto [m1, m2] : {std::pair{1, 2}, {2, 3}, {3, 4}}) {
        p = {};
        p.m1 = m1;
        p.m2 = m2;
        add(builtin_chain("thm-2.5", p));
    }
    for (double a : {0.25, 0.5, 1.0}) {
        p = {};
        p.alpha = a;
        add(builtin_chain("prop-2.4", p));
    }
    const std::vector<std::pair<double, double>> ab = {{0.0, 0.5}, {0.25, 0.75}, {0.5, 1.0}};
    for (auto [a, b] : ab) {
        p = {};
        p.alpha = a;
        p.beta = b;
        add(builtin_chain("prop-2.3-H", p));
    }
    for (auto [a, b] : ab) {
        p = {};
        p.alpha = a;
        p.beta = b;
        add(builtin_chain("prop-2.3-G", p));
    }
    {
        p = {};
        p.alpha = 1.0;
        p.beta = 2.0;
        add(builtin_chain("prop-2.3-G", p));
    }
    for (auto [a, b] : ab) {
        p = {};
        p.alpha = a;
        p.beta = b;
        add(builtin_chain("prop-2.3-A", p));
    }
    for (int m : {1, 2}) {
        p = {};
        p.m = m;
        add(builtin_chain("prop-2.7", p));
    }
    for (int m : {2, 3, 4}) {
        p = {};
        p.m = m;
        add(builtin_chain("rem-2.6", p));
    }
    return specs;
}

BatteryReport run_battery(const std::vector<ChainSpec>& specs) {
    BatteryReport battery;
    battery.min_margin = kInf;
    battery.min_rel_margin = kInf;
    battery.pass = true;
    for (const ChainSpec& spec : specs) {
        ChainReport r = verify_chain(spec);
        battery.total_samples += r.total_samples;
        battery.total_comparisons += r.total_comparisons;
        battery.evaluation_errors += r.evaluation_errors;
        battery.violation_count += static_cast<long>(r.violations.size());
        battery.min_margin = std::min(battery.min_margin, r.min_margin);
        battery.min_rel_margin = std::min(battery.min_rel_margin, r.min_rel_margin);
        battery.pass = battery.pass && r.pass;
        battery.chains.push_back(std::move(r));
    }
    if (!std::isfinite(battery.min_margin)) battery.min_margin = 0.0;
    if (!std::isfinite(battery.min_rel_margin)) battery.min_rel_margin = 0.0;
    return battery;
}

// ---------------------------------------------------------------------------
// Scalar counterexample search.
// ---------------------------------------------------------------------------

SearchReport counterexample_search(const MeanKind& lhs, const MeanKind& rhs, double t_min,
                                   double t_max, int grid_points, int refine_iters) {
    if (!(0.0 < t_min && t_min < t_max) || !std::isfinite(t_max))
        throw std::invalid_argument("search needs 0 < t_min < t_max < inf");
    if (grid_points < 16) throw std::invalid_argument("grid_points must be at least 16");
    if (refine_iters < 0) throw std::invalid_argument("refine_iters must be nonnegative");

    SearchReport report;
    report.lhs = lhs.code();
    report.rhs = rhs.code();
    report.t_min = t_min;
    report.t_max = t_max;
    report.grid_points = grid_points;
    report.refine_iters = refine_iters;

    // Work with g(t) = ln(lhs/rhs)(e^t, 1): same sign as the difference, no
    // overflow anywhere on the grid.
    auto log_gap = [&](double t) {
        return centered_log_mean(lhs, t) - centered_log_mean(rhs, t);
    };
    // Sign with a dead zone: relative differences below the noise floor
    // count as ties.
    auto classify = [&](double g) -> int {
        const double rel = std::expm1(g);
        if (std::abs(rel) <= report.noise_floor_rel * (std::exp(g) + 1.0)) return 0;
        return rel > 0.0 ? 1 : -1;
    };

    const double log_lo = std::log(t_min);
    const double step = (std::log(t_max) - log_lo) / (grid_points - 1);
    SearchWitness best_pos, best_neg;
    bool has_pos = false, has_neg = false;
    double prev_t = 0.0;
    int prev_sign = 0;
    bool have_prev = false;
    for (int i = 0; i < grid_points; ++i) {
        const double t = std::exp(log_lo + i * step);
        const double g = log_gap(t);
        const int sign = classify(g);
        const double rel = std::expm1(g);
        if (sign > 0 && (!has_pos || rel > best_pos.rel_diff)) {
            best_pos = {t, 1, std::exp(g), rel};
            has_pos = true;
        }
        if (sign < 0 && (!has_neg || rel < best_neg.rel_diff)) {
            best_neg = {t, -1, std::exp(g), rel};
            has_neg = true;
        }
        if (have_prev && sign != 0 && prev_sign != 0 && sign != prev_sign) {
            double lo = prev_t, hi = t;
            double glo = log_gap(lo);
            for (int it = 0; it < refine_iters; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double gm = log_gap(mid);
                if ((gm > 0.0) == (glo > 0.0)) {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            report.crossings.push_back(0.5 * (lo + hi));
        }
        if (sign != 0) {
            prev_t = t;
            prev_sign = sign;
            have_prev = true;
        }
    }
    if (has_pos) report.witnesses.push_back(best_pos);
    if (has_neg) report.witnesses.push_back(best_neg);
    if (has_pos && has_neg)
        report.ordering = "mixed";
    else if (has_pos)
        report.ordering = "lhs>=rhs";
    else if (has_neg)
        report.ordering = "lhs<=rhs";
    else
        report.ordering = "equal";
    return report;
}

// ---------------------------------------------------------------------------
// Bound check.
// ---------------------------------------------------------------------------

namespace {

struct BoundSlot {
    // Slack triples per norm, in cell-norm order.
    std::vector<std::array<double, 3>> slacks;
    std::vector<std::array<double, 3>> rel_slacks;
    std::string error;
    bool failed = false;
};

}  // namespace

BoundReport bound_check(const BoundSpec& spec) {
    if (!(0.0 < spec.alpha && spec.alpha < spec.beta && spec.beta <= 1.0))
        throw std::invalid_argument("bound check requires 0 < alpha < beta <= 1");
    validate_common(spec.dims, spec.ensembles, spec.samples, spec.tolerance_rel,
                    spec.condition_target);

    const std::vector<Cell> cells = make_cells(spec.dims, spec.ensembles, spec.norms, spec.seed);
    const int per_cell =
        (spec.samples + static_cast<int>(cells.size()) - 1) / static_cast<int>(cells.size());
    const std::size_t total = cells.size() * static_cast<std::size_t>(per_cell);

    const MeanKind lower_kind(MeanFamily::A, spec.alpha);
    const MeanKind upper_kind(MeanFamily::A, spec.beta);
    const double upper_factor = (2.0 * spec.beta - spec.alpha) / spec.alpha;
    const double diff_factor = 2.0 * (spec.beta - spec.alpha) / spec.alpha;

    std::vector<BoundSlot> slots(total);
    parallel_for(total, spec.threads, [&](std::size_t task) {
        const Cell& cell = cells[task / per_cell];
        BoundSlot& slot = slots[task];
        try {
            const SampleEnsemble ens{cell.kind, spec.condition_target, cell.seed};
            const Instance inst = sample_instance(ens, cell.dim.n, cell.dim.m, task % per_cell);
            const SpectralDecomposition sd = decompose_psd(inst.S);
            const SpectralDecomposition td = decompose_psd(inst.T);
            const Eigen::MatrixXd ya = mean_transform(lower_kind, sd, td, inst.X);
            const Eigen::MatrixXd yb = mean_transform(upper_kind, sd, td, inst.X);
            if (!ya.allFinite() || !yb.allFinite())
                throw std::runtime_error("non-finite transform value");
            const Eigen::VectorXd sa = singular_values(ya);
            const Eigen::VectorXd sb = singular_values(yb);
            const Eigen::VectorXd sdiff = singular_values(ya - yb);
            slot.slacks.reserve(cell.norms.size());
            slot.rel_slacks.reserve(cell.norms.size());
            for (const NormKind& nk : cell.norms) {
                const double na = uinorm_from_singular_values(nk, sa);
                const double nb = uinorm_from_singular_values(nk, sb);
                const double nd = uinorm_from_singular_values(nk, sdiff);
                const double lower = nb - na;
                const double upper = upper_factor * na - nb;
                const double diff = diff_factor * na - nd;
                slot.slacks.push_back({lower, upper, diff});
                slot.rel_slacks.push_back(
                    {relative_margin(lower, na, nb),
                     relative_margin(upper, upper_factor * na, nb),
                     relative_margin(diff, diff_factor * na, nd)});
            }
        } catch (const std::exception& e) {
            slot.failed = true;
            slot.error = e.what();
        }
    });

    BoundReport report;
    report.alpha = spec.alpha;
    report.beta = spec.beta;
    report.seed = spec.seed;
    report.tolerance_rel = spec.tolerance_rel;
    report.total_samples = static_cast<long>(total);
    report.lower.min_slack = report.upper.min_slack = report.difference.min_slack = kInf;
    report.lower.min_rel_slack = report.upper.min_rel_slack = report.difference.min_rel_slack =
        kInf;
    const char* names[3] = {"lower", "upper", "difference"};
    for (std::size_t task = 0; task < total; ++task) {
        const Cell& cell = cells[task / per_cell];
        BoundSlot& slot = slots[task];
        if (slot.failed) {
            ++report.evaluation_errors;
            report.errors.push_back({static_cast<long>(task), cell.dim,
                                     ensemble_name(cell.kind), slot.error});
            continue;
        }
        SlackSummary* sums[3] = {&report.lower, &report.upper, &report.difference};
        for (std::size_t j = 0; j < slot.slacks.size(); ++j) {
            for (int q = 0; q < 3; ++q) {
                const double s = slot.slacks[j][q];
                const double rs = slot.rel_slacks[j][q];
                sums[q]->min_slack = std::min(sums[q]->min_slack, s);
                sums[q]->min_rel_slack = std::min(sums[q]->min_rel_slack, rs);
                ++report.total_checks;
                if (rs < -spec.tolerance_rel) {
                    ++sums[q]->violations;
                    report.violations.push_back({static_cast<long>(task), cell.dim,
                                                 ensemble_name(cell.kind),
                                                 cell.norms[j].code(), names[q], s, rs});
                }
            }
        }
    }
    for (SlackSummary* s : {&report.lower, &report.upper, &report.difference}) {
        if (!std::isfinite(s->min_slack)) s->min_slack = 0.0;
        if (!std::isfinite(s->min_rel_slack)) s->min_rel_slack = 0.0;
    }
    report.pass = report.violations.empty() &&
                  report.evaluation_errors * 100 <= report.total_samples;
    return report;
}

// ---------------------------------------------------------------------------
// Continuity probes.
// ---------------------------------------------------------------------------

std::vector<double> geometric_sequence(double target, int k_max) {
    if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
    std::vector<double> seq;
    seq.reserve(k_max);
    for (int k = 1; k <= k_max; ++k) seq.push_back(target + std::ldexp(1.0, -k));
    return seq;
}

MeanTransformInput continuity_instance(int dim, std::uint64_t seed) {
    if (dim < 1) throw std::invalid_argument("dim must be positive");
    const SampleEnsemble ens{EnsembleKind::IllConditionedPsd, 10.0, seed};
    Instance inst = sample_instance(ens, dim, dim, 0);
    MeanTransformInput input{inst.S, inst.T, inst.X};
    const Eigen::MatrixXd am = mean_transform(MeanKind(MeanFamily::A, 1.0), input);
    const double scale = uinorm(NormKind::trace(), am);
    if (!(scale > 0.0)) throw std::runtime_error("degenerate continuity instance");
    input.X /= scale;
    return input;
}

ContinuityReport continuity_probe(MeanFamily family, double target,
                                  const std::vector<double>& sequence,
                                  const MeanTransformInput& input, const NormKind& norm,
                                  double pass_threshold) {
    if (family != MeanFamily::G && family != MeanFamily::A)
        throw std::invalid_argument("continuity probe supports families G and A");
    if (!(target >= 0.0))
        throw std::invalid_argument("continuity target must be nonnegative");
    if (sequence.empty()) throw std::invalid_argument("sequence must be nonempty");
    if (!(pass_threshold > 0.0)) throw std::invalid_argument("pass_threshold must be positive");

    ContinuityReport report;
    report.family = family_code(family);
    report.target = target;
    report.norm = norm.code();

    const SpectralDecomposition sd = decompose_psd(input.S);
    const SpectralDecomposition td = decompose_psd(input.T);
    const MeanKind target_kind(family, target);  // validates the target parameter
    const Eigen::MatrixXd base = mean_transform(target_kind, sd, td, input.X);
    const double rate_scale =
        uinorm(norm, mean_transform(MeanKind(MeanFamily::A, 1.0), sd, td, input.X));

    std::vector<Eigen::MatrixXd> values;
    values.reserve(sequence.size());
    for (double p : sequence)
        values.push_back(mean_transform(MeanKind(family, p), sd, td, input.X));

    report.steps.reserve(sequence.size());
    const bool a_family = family == MeanFamily::A;
    for (std::size_t i = 0; i < sequence.size(); ++i) {
        ContinuityStep step;
        step.param = sequence[i];
        step.diff = uinorm(norm, values[i] - base);
        if (a_family && target > 0.0 && sequence[i] < 1.0 && sequence[i] >= 0.5 * target) {
            // Rate vs the target: alpha = target, alpha' = sequence[i], beta = 1.
            step.rate_applies = true;
            step.rate_bound = 4.0 * std::abs(sequence[i] - target) / target * rate_scale;
            step.rate_ok = step.diff <= step.rate_bound * (1.0 + 1e-9);
        } else if (a_family && target == 0.0 && i + 1 < sequence.size() &&
                   sequence[i] < 1.0 && sequence[i + 1] > 0.0) {
            // Rate across the consecutive pair: alpha = seq[i+1], alpha' = seq[i].
            step.rate_applies = true;
            step.rate_bound =
                4.0 * (sequence[i] - sequence[i + 1]) / sequence[i + 1] * rate_scale;
            const double pair_diff = uinorm(norm, values[i] - values[i + 1]);
            step.rate_ok = pair_diff <= step.rate_bound * (1.0 + 1e-9);
        }
        report.steps.push_back(step);
    }

    report.final_diff = report.steps.back().diff;
    report.monotone_after_3 = true;
    for (std::size_t i = 2; i + 1 < report.steps.size(); ++i) {
        if (report.steps[i + 1].diff > report.steps[i].diff * (1.0 + 1e-9) + 1e-15)
            report.monotone_after_3 = false;
    }
    report.rate_ok = true;
    for (const ContinuityStep& s : report.steps)
        if (s.rate_applies && !s.rate_ok) report.rate_ok = false;
    report.pass =
        report.monotone_after_3 && report.rate_ok && report.final_diff <= pass_threshold;
    return report;
}

std::vector<ContinuityReport> default_continuity_suite(int dim, std::uint64_t seed, int k_max) {
    const MeanTransformInput input = continuity_instance(dim, seed);
    const NormKind norm = NormKind::trace();
    std::vector<ContinuityReport> reports;
    for (auto [family, target] : {std::pair{MeanFamily::G, 1.0}, {MeanFamily::A, 0.5},
                                  {MeanFamily::A, 0.0}}) {
        ContinuityReport r =
            continuity_probe(family, target, geometric_sequence(target, k_max), input, norm);
        r.dim = dim;
        r.seed = seed;
        reports.push_back(std::move(r));
    }
    return reports;
}

}  // namespace meanscope
