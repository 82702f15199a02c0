// Acceptance gate: ten checks covering the scalar mean catalog, the operator
// transforms, the positive definiteness lab, the norm inequality battery and
// report determinism. Prints one line per criterion and exits nonzero if any
// fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "meanscope/operator_means.hpp"
#include "meanscope/posdef.hpp"
#include "meanscope/report_json.hpp"
#include "meanscope/sampling.hpp"
#include "meanscope/scalar_means.hpp"
#include "meanscope/uinorms.hpp"
#include "meanscope/verifier.hpp"
#include "test_support.hpp"

using namespace meanscope;

namespace {

int g_failures = 0;

struct Reporter {
    std::string detail;
    bool ok = true;

    // Records the first failing comparison with context.
    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

bool close_rel(double got, double want, double tol) {
    const double scale = std::max({std::abs(got), std::abs(want), 1e-300});
    return std::abs(got - want) <= tol * scale;
}

// --------------------------------------------------------------------------
// 1. Scalar identity suite: 10^4 random (x, y, alpha).
// --------------------------------------------------------------------------
Reporter criterion_scalar_identities() {
    Reporter r;
    Rng64 rng(1729);
    for (int i = 0; i < 10000 && r.ok; ++i) {
        const double x = testsupport::log_uniform(rng, 1e-3, 1e3);
        const double y = testsupport::log_uniform(rng, 1e-3, 1e3);
        const double a = rng.uniform(0.05, 0.95);
        const double c = testsupport::log_uniform(rng, 1e-2, 1e2);

        const MeanKind A(MeanFamily::A, a), G(MeanFamily::G, a), H(MeanFamily::H, a);
        const MeanKind P(MeanFamily::P, a), Q(MeanFamily::Q, a);
        const MeanKind S(MeanFamily::Stolarsky, a), B(MeanFamily::Binomial, a);
        const MeanKind D(MeanFamily::DualBinomial, a), E(MeanFamily::ExpMean, a);
        const MeanKind M(MeanFamily::M, rng.uniform(-2.0, 3.0));
        const MeanKind LMk(MeanFamily::LM);

        for (const MeanKind& k : {A, G, H, M, S, B, LMk}) {
            const double v = eval_mean(k, x, y);
            r.require(close_rel(v, eval_mean(k, y, x), 1e-10), "symmetry for " + k.code());
            r.require(close_rel(eval_mean(k, c * x, c * y), c * v, 1e-10),
                      "homogeneity for " + k.code());
            const double lo = std::min(x, y), hi = std::max(x, y);
            r.require(v >= lo * (1 - 1e-10) && v <= hi * (1 + 1e-10),
                      "betweenness for " + k.code());
        }

        // H_a = G_2a, and evenness of A, G, H in the parameter.
        r.require(close_rel(eval_mean(H, x, y),
                            eval_mean(MeanKind(MeanFamily::G, 2 * a), x, y), 1e-12),
                  "H_a = G_2a");
        for (MeanFamily f : {MeanFamily::A, MeanFamily::G, MeanFamily::H}) {
            r.require(close_rel(eval_mean(MeanKind(f, a), x, y),
                                eval_mean(MeanKind(f, -a), x, y), 1e-12),
                      "evenness in alpha");
        }

        // P/Q composition identities.
        const double p = eval_mean(P, x, y), q = eval_mean(Q, x, y);
        r.require(close_rel(eval_mean(A, x, y), (p + q) / 2, 1e-12), "A = (P+Q)/2");
        r.require(close_rel(eval_mean(G, x, y), std::sqrt(p * q), 1e-12), "G = sqrt(PQ)");
        r.require(close_rel(eval_mean(H, x, y), 2 * p * q / (p + q), 1e-12),
                  "H = harmonic(P, Q)");

        // The four geometric bridges through the Stolarsky mean.
        const double s = eval_mean(S, x, y);
        auto bridge = [&](const MeanKind& lhs, const MeanKind& core, const char* name) {
            const double want =
                std::pow(eval_mean(core, x, y), a) * std::pow(s, 1 - a);
            r.require(close_rel(eval_mean(lhs, x, y), want, 1e-10), name);
        };
        bridge(A, B, "A = B^a S^(1-a)");
        bridge(G, MeanKind(MeanFamily::GM), "G = GM^a S^(1-a)");
        bridge(H, D, "H = D^a S^(1-a)");
        bridge(LMk, E, "LM = E^a S^(1-a)");
    }
    return r;
}

// --------------------------------------------------------------------------
// 2. Limit suite on fixed grids.
// --------------------------------------------------------------------------
Reporter criterion_limits() {
    Reporter r;
    std::vector<std::pair<double, double>> wide, narrow;
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
            wide.emplace_back(1e-3 * std::pow(1e6, i / 9.0), 1e-3 * std::pow(1e6, j / 9.0));
            // Ratios in [0.8, 1.25]: the regime where a parameter step of
            // 1e-4 moves the power difference mean by well under 1e-6.
            const double base = 0.5 + i * 0.4;
            narrow.emplace_back(base, base * (0.8 + 0.45 * j / 9.0));
        }
    }
    for (const auto& [x, y] : wide) {
        if (x == y) continue;
        const double lm = eval_mean(MeanKind(MeanFamily::LM), x, y);
        for (MeanFamily f : {MeanFamily::A, MeanFamily::G, MeanFamily::H}) {
            const double v = eval_mean(MeanKind(f, 1e-6), x, y);
            r.require(std::abs(v - lm) <= 1e-8 * lm, "limit alpha -> 0 toward LM");
        }
        r.require(close_rel(eval_mean(MeanKind(MeanFamily::M, 0.5), x, y),
                            eval_mean(MeanKind(MeanFamily::GM), x, y), 1e-12),
                  "M_1/2 = GM");
        r.require(close_rel(eval_mean(MeanKind(MeanFamily::M, 2.0), x, y),
                            eval_mean(MeanKind(MeanFamily::AM), x, y), 1e-12),
                  "M_2 = AM");
        // Toward alpha = 1 the implementation must track the closed form to
        // oracle accuracy even on wide ratios.
        for (double da : {1e-4, -1e-4}) {
            const MeanKind m(MeanFamily::M, 1.0 + da);
            r.require(close_rel(eval_mean(m, x, y),
                                static_cast<double>(testsupport::naive_mean(m, x, y)), 1e-10),
                      "M near alpha = 1 vs closed form");
        }
    }
    for (const auto& [x, y] : narrow) {
        const double lm = eval_mean(MeanKind(MeanFamily::LM), x, y);
        for (double da : {1e-4, -1e-4}) {
            const double v = eval_mean(MeanKind(MeanFamily::M, 1.0 + da), x, y);
            r.require(std::abs(v - lm) <= 1e-6 * lm, "M_alpha -> LM at alpha = 1 +/- 1e-4");
        }
    }
    return r;
}

// --------------------------------------------------------------------------
// 3. Representation equivalence over 100 seeded instances.
// --------------------------------------------------------------------------
Reporter criterion_representations() {
    Reporter r;
    const EnsembleKind kinds[] = {EnsembleKind::GaussianPsd, EnsembleKind::RankDeficientPsd,
                                  EnsembleKind::IllConditionedPsd};
    for (int i = 0; i < 100 && r.ok; ++i) {
        const int n = 2 + i % 5;  // dims 2..6
        const SampleEnsemble ens{kinds[i % 3], 1e6, mix_seed(1729, i)};
        const Instance inst = sample_instance(ens, n, n, i);
        const SpectralDecomposition s = decompose_psd(inst.S);
        const SpectralDecomposition t = decompose_psd(inst.T);
        for (PowerSumId id : {PowerSumId::GInvM, PowerSumId::AInvM, PowerSumId::MOverMPlus1,
                              PowerSumId::MOverMMinus1}) {
            const int m_lo = (id == PowerSumId::AInvM || id == PowerSumId::MOverMMinus1) ? 2 : 1;
            for (int m = m_lo; m <= 5; ++m) {
                const Eigen::MatrixXd sum = power_sum_representation(id, m, s, t, inst.X);
                const Eigen::MatrixXd direct =
                    mean_transform(corresponding_mean(id, m), s, t, inst.X);
                const double gap = (sum - direct).norm();
                r.require(gap <= 1e-10 * (1.0 + direct.norm()),
                          power_sum_code(id) + " m=" + std::to_string(m) + " gap " + fmt(gap));
            }
        }
    }
    for (int i = 0; i < 100 && r.ok; ++i) {
        const int n = 2 + i % 7;  // dims 2..8
        const SampleEnsemble ens{kinds[i % 3], 1e6, mix_seed(4242, i)};
        const Instance inst = sample_instance(ens, n, n, i);
        const SpectralDecomposition s = decompose_psd(inst.S);
        const SpectralDecomposition t = decompose_psd(inst.T);
        const Eigen::MatrixXd integral = log_mean_integral(s, t, inst.X, 64);
        const Eigen::MatrixXd lm = mean_transform(MeanKind(MeanFamily::LM), s, t, inst.X);
        const double gap = (integral - lm).norm();
        r.require(gap <= 1e-8 * (1.0 + lm.norm()), "integral vs LM transform, gap " + fmt(gap));
    }
    return r;
}

// --------------------------------------------------------------------------
// 4. Full default chain battery.
// --------------------------------------------------------------------------
BatteryReport run_default_battery(int threads) {
    return run_battery(default_battery(1729, 200, 1e-9, threads));
}

Reporter criterion_battery(BatteryReport& out) {
    Reporter r;
    out = run_default_battery(0);
    r.require(out.chains.size() == 30, "battery has 30 configurations");
    r.require(out.violation_count == 0,
              "violations: " + std::to_string(out.violation_count) + ", min rel margin " +
                  fmt(out.min_rel_margin));
    r.require(out.evaluation_errors == 0, "evaluation errors");
    r.require(out.pass, "battery pass flag");
    return r;
}

// --------------------------------------------------------------------------
// 5. The remark-2.8 refutation: mixed scalar ordering and a refuted ratio.
// --------------------------------------------------------------------------
Reporter criterion_refutation() {
    Reporter r;
    const SearchReport s = counterexample_search(MeanKind(MeanFamily::H, 1.0 / 3.0),
                                                 MeanKind(MeanFamily::M, 0.75));
    r.require(s.ordering == "mixed", "ordering is " + s.ordering);
    bool pos = false, neg = false;
    for (const SearchWitness& w : s.witnesses) {
        if (w.sign > 0 && std::abs(w.rel_diff) > 1e-6) pos = true;
        if (w.sign < 0 && std::abs(w.rel_diff) > 1e-6) neg = true;
    }
    r.require(pos, "positive witness above 1e-6");
    r.require(neg, "negative witness above 1e-6");
    const GramReport g =
        check_positive_definite("hm-ratio(m=3)", catalog_function("hm-ratio", 0, 0, 3));
    r.require(g.verdict == PdVerdict::Refuted, "ratio verdict " + verdict_name(g.verdict));
    r.require(g.min_eigenvalue < -g.threshold, "refutation clears the threshold");
    return r;
}

// --------------------------------------------------------------------------
// 6. PD catalog margins: certified kernels stay above -1e-8 * n * phi(0).
// --------------------------------------------------------------------------
Reporter criterion_pd_catalog() {
    Reporter r;
    for (const PdCatalogEntry& entry : pd_catalog()) {
        const GramReport g = check_positive_definite(entry.id, entry.phi);
        if (entry.expected_certified) {
            r.require(g.verdict == PdVerdict::CertifiedOnGrids,
                      entry.id + ": " + verdict_name(g.verdict));
            for (const GridResult& grid : g.grids) {
                r.require(!grid.evaluation_failed, entry.id + ": grid evaluation failed");
                r.require(grid.min_eigenvalue >= -1e-8 * grid.points * g.phi0,
                          entry.id + ": min eig " + fmt(grid.min_eigenvalue) + " on " +
                              std::to_string(grid.points) + " points");
            }
        } else {
            r.require(g.verdict == PdVerdict::Refuted,
                      entry.id + ": " + verdict_name(g.verdict));
        }
    }
    return r;
}

// --------------------------------------------------------------------------
// 7. Fourier kernel reconstruction.
// --------------------------------------------------------------------------
Reporter criterion_fourier() {
    Reporter r;
    const std::vector<double> ts = {0.0, 0.5, 1.0, 2.0};
    const double e1 = fourier_kernel_check(0.5, 1.0, ts, 120.0, 8001);
    r.require(e1 <= 1e-6, "(1/2, 1) error " + fmt(e1));
    const double e2 = fourier_kernel_check(0.25, 0.5, ts, 120.0, 8001);
    r.require(e2 <= 1e-6, "(1/4, 1/2) error " + fmt(e2));
    return r;
}

// --------------------------------------------------------------------------
// 8. Two-sided arithmetic-family bounds.
// --------------------------------------------------------------------------
Reporter criterion_bounds() {
    Reporter r;
    const std::pair<double, double> pairs[] = {{0.25, 0.5}, {0.25, 0.75}, {0.5, 1.0}};
    for (const auto& [a, b] : pairs) {
        BoundSpec spec;
        spec.alpha = a;
        spec.beta = b;
        spec.samples = 100;
        spec.seed = 1729;
        spec.tolerance_rel = 1e-9;
        const BoundReport report = bound_check(spec);
        const std::string tag = "(" + fmt(a) + ", " + fmt(b) + ")";
        r.require(report.pass, tag + " failed");
        r.require(report.violations.empty(),
                  tag + " violations: " + std::to_string(report.violations.size()));
        r.require(report.evaluation_errors == 0, tag + " evaluation errors");
    }
    return r;
}

// --------------------------------------------------------------------------
// 9. Continuity probes at dim 6.
// --------------------------------------------------------------------------
Reporter criterion_continuity() {
    Reporter r;
    const std::vector<ContinuityReport> suite = default_continuity_suite(6, 1729, 20);
    r.require(suite.size() == 3, "three probes");
    for (const ContinuityReport& probe : suite) {
        const std::string tag = probe.family + " -> " + fmt(probe.target);
        r.require(probe.monotone_after_3, tag + ": not monotone after k=3");
        r.require(probe.final_diff <= 1e-6, tag + ": final diff " + fmt(probe.final_diff));
        r.require(probe.rate_ok, tag + ": rate bound violated");
        r.require(probe.pass, tag + ": probe failed");
    }
    return r;
}

// --------------------------------------------------------------------------
// 10. Byte-identical battery reports across thread counts.
// --------------------------------------------------------------------------
Reporter criterion_determinism(const BatteryReport& reference) {
    Reporter r;
    const std::string base = to_json(reference).dump();
    const std::string one = to_json(run_default_battery(1)).dump();
    const std::string four = to_json(run_default_battery(4)).dump();
    r.require(base == one, "threads=1 report differs");
    r.require(base == four, "threads=4 report differs");
    r.require(!base.empty() && base.find("\"schema_version\":1") != std::string::npos,
              "schema_version missing");
    return r;
}

void report(int index, const std::string& label, const std::function<Reporter()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    Reporter r;
    try {
        r = fn();
    } catch (const std::exception& e) {
        r.ok = false;
        r.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %2d: %s (%.2f s)%s%s\n", r.ok ? "PASS" : "FAIL", index,
                label.c_str(), secs, r.ok ? "" : " -- ", r.detail.c_str());
    std::fflush(stdout);
    if (!r.ok) ++g_failures;
}

}  // namespace

int main() {
    BatteryReport battery;
    report(1, "scalar identity suite, 10^4 samples", criterion_scalar_identities);
    report(2, "limit suite toward LM, GM and AM", criterion_limits);
    report(3, "power sum and integral representations", criterion_representations);
    report(4, "full default chain battery", [&] { return criterion_battery(battery); });
    report(5, "mixed ordering witnesses and refuted ratio", criterion_refutation);
    report(6, "positive definiteness catalog margins", criterion_pd_catalog);
    report(7, "fourier kernel reconstruction", criterion_fourier);
    report(8, "two-sided arithmetic-family bounds", criterion_bounds);
    report(9, "parameter continuity probes", criterion_continuity);
    report(10, "thread-count independent reports", [&] { return criterion_determinism(battery); });

    if (g_failures == 0) {
        std::printf("acceptance: all 10 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) failed\n", g_failures);
    return 1;
}
