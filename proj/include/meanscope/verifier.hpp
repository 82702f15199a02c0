#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "meanscope/operator_means.hpp"
#include "meanscope/sampling.hpp"
#include "meanscope/scalar_means.hpp"
#include "meanscope/uinorms.hpp"

namespace meanscope {

// ---------------------------------------------------------------------------
// Chain terms. A chain is an ordered list of matrix expressions, smallest to
// largest: every adjacent pair (left, right) is expected to satisfy
// ||left|| <= ||right|| in every unitarily invariant norm.
// ---------------------------------------------------------------------------

struct MeanTransformTerm {
    MeanKind kind;
};

struct PowerSumTerm {
    PowerSumId id;
    int m = 1;
};

struct IntegralTerm {
    int nodes = 64;
};

using ChainTerm = std::variant<MeanTransformTerm, PowerSumTerm, IntegralTerm>;

// Labels: mean transforms use the MeanKind code ("A:0.5"), power sums
// "sum:G_inv_m:3", the integral "integral:64".
std::string term_label(const ChainTerm& term);
ChainTerm parse_term(const std::string& label);

Eigen::MatrixXd apply_term(const ChainTerm& term, const SpectralDecomposition& s,
                           const SpectralDecomposition& t, const Eigen::MatrixXd& X);

struct DimPair {
    int n = 0;
    int m = 0;
};

std::string dim_code(const DimPair& d);      // "3x5"
DimPair parse_dim(const std::string& code);  // "3" -> 3x3, "3x5" -> 3x5

std::vector<DimPair> default_dims();                // {2x2, 3x3, 5x5, 8x8, 3x5}
std::vector<EnsembleKind> default_ensembles_list(); // all three ensembles

struct ChainSpec {
    std::string chain_id;
    std::vector<ChainTerm> terms;
    std::vector<NormKind> norms;  // empty -> default battery for each dim
    std::vector<DimPair> dims = default_dims();
    std::vector<EnsembleKind> ensembles = default_ensembles_list();
    int samples = 200;  // total, split evenly (ceiling) over (dim, ensemble) cells
    std::uint64_t seed = 1729;
    double condition_target = 1e6;
    double tolerance_rel = 1e-9;
    int threads = 0;  // 0 -> hardware concurrency; never affects results
};

// One row per (sample, norm, adjacent pair). `ensemble` is the ensemble name,
// or "explicit" for runs on caller-supplied matrices.
struct ComparisonRecord {
    long sample = 0;  // global sample index, cell-major, thread-independent
    DimPair dim;
    std::string ensemble;
    std::string norm;
    std::string left_term;
    std::string right_term;
    double left_value = 0.0;
    double right_value = 0.0;
    double margin = 0.0;      // right - left
    double rel_margin = 0.0;  // margin / max(left, right), 0 when both vanish
};

struct CellSummary {
    DimPair dim;
    std::string ensemble;
    int samples = 0;
    int errors = 0;
    double min_margin = 0.0;
    double min_rel_margin = 0.0;
};

struct SampleError {
    long sample = 0;
    DimPair dim;
    std::string ensemble;
    std::string message;
};

struct ChainReport {
    std::string chain_id;
    std::vector<std::string> term_labels;
    std::vector<std::string> norm_codes;  // empty when the per-dim default battery is used
    std::uint64_t seed = 0;
    double tolerance_rel = 1e-9;
    int samples_per_cell = 0;
    long total_samples = 0;
    long total_comparisons = 0;
    long evaluation_errors = 0;
    double min_margin = 0.0;
    double min_rel_margin = 0.0;
    std::vector<CellSummary> cells;
    std::vector<ComparisonRecord> violations;  // rel_margin < -tolerance_rel
    std::vector<SampleError> errors;
    bool pass = false;  // no violations and errors within the 1% budget
    std::vector<ComparisonRecord> records;  // every comparison, for CSV export
};

// Randomized verification over seeded ensembles. Identical spec (including
// seed) gives an identical report for any thread count.
ChainReport verify_chain(const ChainSpec& spec);

// Same chain evaluated on one explicit instance instead of random samples.
ChainReport verify_chain_on_instance(const ChainSpec& spec, const MeanTransformInput& input);

// ---------------------------------------------------------------------------
// Built-in chains and the default battery.
// ---------------------------------------------------------------------------

struct ChainParams {
    std::optional<int> m;   // sets every m the chain uses
    std::optional<int> m1;  // overrides the first m
    std::optional<int> m2;  // overrides the second m
    std::optional<double> alpha;
    std::optional<double> beta;
};

// chain_id is one of: thm-2.5, thm-1.2, eq-3-final, prop-2.4, prop-2.3-H,
// prop-2.3-G, prop-2.3-A, prop-2.7, rem-2.6. The returned spec has the
// resolved parameters baked into its chain_id, e.g. "thm-2.5[m1=2,m2=3]".
ChainSpec builtin_chain(const std::string& chain_id, const ChainParams& params = {});
std::vector<std::string> builtin_chain_ids();

// Every built-in chain over a spread of parameters, ~30 configurations.
std::vector<ChainSpec> default_battery(std::uint64_t seed = 1729, int samples = 200,
                                       double tolerance_rel = 1e-9, int threads = 0);

struct BatteryReport {
    std::vector<ChainReport> chains;
    long total_samples = 0;
    long total_comparisons = 0;
    long evaluation_errors = 0;
    long violation_count = 0;
    double min_margin = 0.0;
    double min_rel_margin = 0.0;
    bool pass = false;
};

BatteryReport run_battery(const std::vector<ChainSpec>& specs);

// ---------------------------------------------------------------------------
// Scalar counterexample search.
// ---------------------------------------------------------------------------

struct SearchWitness {
    double t = 0.0;       // arguments (e^t, 1)
    int sign = 0;         // +1: lhs > rhs, -1: lhs < rhs
    double ratio = 1.0;   // lhs / rhs
    double rel_diff = 0.0;  // ratio - 1
};

struct SearchReport {
    std::string lhs;
    std::string rhs;
    double t_min = 0.0;
    double t_max = 0.0;
    int grid_points = 0;
    int refine_iters = 0;
    double noise_floor_rel = 1e-14;
    std::string ordering;  // "lhs<=rhs", "lhs>=rhs", "mixed", "equal"
    std::vector<SearchWitness> witnesses;  // strongest witness per present sign
    std::vector<double> crossings;         // bisected sign-change locations
};

// Scans lhs(e^t,1) - rhs(e^t,1) in the log domain over a log-spaced grid of
// positive t, bisecting each sign change. Differences within noise_floor_rel
// of the common scale count as ties.
SearchReport counterexample_search(const MeanKind& lhs, const MeanKind& rhs,
                                   double t_min = 1e-6, double t_max = 1e6,
                                   int grid_points = 4096, int refine_iters = 60);

// ---------------------------------------------------------------------------
// Two-sided bound check for the arithmetic-family transforms:
//   ||A_a X|| <= ||A_b X|| <= ((2b-a)/a) ||A_a X||        (0 < a < b <= 1)
//   ||A_a X - A_b X|| <= (2(b-a)/a) ||A_a X||
// ---------------------------------------------------------------------------

struct BoundSpec {
    double alpha = 0.5;
    double beta = 1.0;
    std::vector<NormKind> norms;  // empty -> default battery per dim
    std::vector<DimPair> dims = default_dims();
    std::vector<EnsembleKind> ensembles = default_ensembles_list();
    int samples = 200;
    std::uint64_t seed = 1729;
    double condition_target = 1e6;
    double tolerance_rel = 1e-9;
    int threads = 0;
};

struct SlackSummary {
    double min_slack = 0.0;      // raw, >= 0 expected
    double min_rel_slack = 0.0;  // slack / scale of the bounding side
    long violations = 0;
};

struct BoundViolation {
    long sample = 0;
    DimPair dim;
    std::string ensemble;
    std::string norm;
    std::string inequality;  // "lower", "upper", "difference"
    double slack = 0.0;
    double rel_slack = 0.0;
};

struct BoundReport {
    double alpha = 0.0;
    double beta = 0.0;
    std::uint64_t seed = 0;
    double tolerance_rel = 1e-9;
    long total_samples = 0;
    long total_checks = 0;
    long evaluation_errors = 0;
    SlackSummary lower;       // ||A_b X|| - ||A_a X||
    SlackSummary upper;       // ((2b-a)/a)||A_a X|| - ||A_b X||
    SlackSummary difference;  // (2(b-a)/a)||A_a X|| - ||A_a X - A_b X||
    std::vector<BoundViolation> violations;
    std::vector<SampleError> errors;
    bool pass = false;
};

BoundReport bound_check(const BoundSpec& spec);

// ---------------------------------------------------------------------------
// Parameter-continuity probes.
// ---------------------------------------------------------------------------

struct ContinuityStep {
    double param = 0.0;
    double diff = 0.0;        // ||F_param X - F_target X||
    double rate_bound = 0.0;  // (4|a'-a|/a) ||A_1 X|| where the hypothesis applies
    bool rate_applies = false;
    bool rate_ok = true;
};

struct ContinuityReport {
    std::string family;  // "G" or "A"
    double target = 0.0;
    std::string norm;
    int dim = 0;
    std::uint64_t seed = 0;
    double pass_threshold = 1e-6;
    std::vector<ContinuityStep> steps;
    double final_diff = 0.0;
    bool monotone_after_3 = false;  // nonincreasing from the third step on
    bool rate_ok = false;
    bool pass = false;
};

// Measures ||family_param(S,T) X - family_target(S,T) X|| along the sequence.
// For the A family the explicit rate bound (4|a'-a|/a)||A_1 X|| is checked
// against the target when target > 0, and across consecutive sequence pairs
// when target = 0.
ContinuityReport continuity_probe(MeanFamily family, double target,
                                  const std::vector<double>& sequence,
                                  const MeanTransformInput& input, const NormKind& norm,
                                  double pass_threshold = 1e-6);

// target + 2^-k for k = 1..k_max.
std::vector<double> geometric_sequence(double target, int k_max);

// Fixed dim x dim instance with mildly spread spectra (condition 10), X
// scaled so the trace norm of the arithmetic-mean transform is 1.
MeanTransformInput continuity_instance(int dim, std::uint64_t seed);

// The three standard probes: (G, 1), (A, 0.5), (A, 0).
std::vector<ContinuityReport> default_continuity_suite(int dim = 6, std::uint64_t seed = 1729,
                                                       int k_max = 20);

}  // namespace meanscope
