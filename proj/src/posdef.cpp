#include "meanscope/posdef.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "meanscope/hyperbolic.hpp"
#include "meanscope/quadrature.hpp"
#include "meanscope/sampling.hpp"

namespace meanscope {

namespace {

constexpr std::uint64_t kDefaultJitterSeed = 0x6A3F19C4D7E25B01ULL;
constexpr double kEvennessRelTol = 1e-12;

void validate_spec(const GridSpec& spec, double threshold_rel) {
    if (!(spec.half_width > 0.0) || !std::isfinite(spec.half_width))
        throw std::invalid_argument("grid half_width must be positive and finite");
    if (spec.count < 2 || spec.count > 512)
        throw std::invalid_argument("grid count must lie in [2, 512]");
    for (double s : spec.scales)
        if (!(s > 0.0) || !std::isfinite(s))
            throw std::invalid_argument("grid scales must be positive and finite");
    if (!(threshold_rel > 0.0) || !std::isfinite(threshold_rel))
        throw std::invalid_argument("threshold_rel must be positive and finite");
}

}  // namespace

std::string verdict_name(PdVerdict v) {
    switch (v) {
        case PdVerdict::CertifiedOnGrids: return "certified-on-grids";
        case PdVerdict::Refuted: return "refuted";
        case PdVerdict::Inconclusive: return "inconclusive";
    }
    throw std::logic_error("unreachable verdict");
}

std::vector<double> make_symmetric_grid(double half_width, int count) {
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw std::invalid_argument("grid half_width must be positive and finite");
    if (count < 2 || count > 512) throw std::invalid_argument("grid count must lie in [2, 512]");
    const int m = count / 2;
    std::vector<double> pts;
    pts.reserve(2 * m + 1);
    for (int k = m; k >= 1; --k) pts.push_back(-(half_width * k) / m);
    pts.push_back(0.0);
    for (int k = 1; k <= m; ++k) pts.push_back((half_width * k) / m);
    return pts;
}

std::vector<double> make_jittered_grid(double half_width, int count, std::uint64_t seed) {
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw std::invalid_argument("grid half_width must be positive and finite");
    if (count < 2 || count > 512) throw std::invalid_argument("grid count must lie in [2, 512]");
    const int m = count / 2;
    const double spacing = half_width / m;
    Rng64 rng(seed);
    std::vector<double> pos(m);
    for (int k = 1; k <= m; ++k)
        pos[k - 1] = (half_width * k) / m + rng.uniform(-0.25, 0.25) * spacing;
    std::vector<double> pts;
    pts.reserve(2 * m + 1);
    for (int k = m - 1; k >= 0; --k) pts.push_back(-pos[k]);
    pts.push_back(0.0);
    for (int k = 0; k < m; ++k) pts.push_back(pos[k]);
    return pts;
}

Eigen::MatrixXd gram_matrix(const std::function<double(double)>& phi,
                            const std::vector<double>& points) {
    const int n = static_cast<int>(points.size());
    Eigen::MatrixXd g(n, n);
    std::unordered_map<double, double> cache;
    cache.reserve(static_cast<std::size_t>(n) * 2);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const double d = std::abs(points[i] - points[j]);
            auto it = cache.find(d);
            double v;
            if (it != cache.end()) {
                v = it->second;
            } else {
                v = phi(d);
                cache.emplace(d, v);
            }
            g(i, j) = v;
            g(j, i) = v;
        }
    }
    return g;
}

GramReport check_positive_definite(const std::string& function_id,
                                   const std::function<double(double)>& phi,
                                   const GridSpec& spec, double threshold_rel) {
    validate_spec(spec, threshold_rel);
    const std::vector<double> scales =
        spec.scales.empty() ? std::vector<double>{spec.half_width} : spec.scales;

    GramReport report;
    report.function_id = function_id;
    report.grid = spec;

    const double phi0 = phi(0.0);
    if (!std::isfinite(phi0) || !(phi0 > 0.0))
        throw std::domain_error("phi(0) must be finite and positive");
    report.phi0 = phi0;

    // Evenness probes. A kernel of a real positive measure is even; reject
    // asymmetric inputs before they silently poison a symmetrized Gram.
    for (double w : scales) {
        for (double f : {0.33, 0.71, 1.0}) {
            const double t = f * w;
            const double a = phi(t);
            const double b = phi(-t);
            if (!std::isfinite(a) || !std::isfinite(b)) continue;
            if (std::abs(a - b) > kEvennessRelTol * std::max(std::abs(a), std::abs(b)))
                throw std::domain_error("phi is not even at t = " + std::to_string(t));
        }
    }

    // Grid sweep plan.
    struct Plan {
        std::vector<double> pts;
        double half_width;
        bool jittered;
    };
    std::vector<Plan> plans;
    const std::uint64_t jitter_base = spec.jitter_seed.value_or(kDefaultJitterSeed);
    for (std::size_t si = 0; si < scales.size(); ++si) {
        const double w = scales[si];
        std::vector<int> ladder;
        for (int c : {8, 16, 32, 64})
            if (c <= spec.count) ladder.push_back(c);
        if (ladder.empty() || ladder.back() != spec.count) ladder.push_back(spec.count);
        for (int c : ladder) plans.push_back({make_symmetric_grid(w, c), w, false});
        plans.push_back(
            {make_jittered_grid(w, spec.count, mix_seed(jitter_base, si)), w, true});
    }

    // Necessary condition: phi(t) <= phi(0) everywhere. A strong violation
    // refutes immediately via the 2x2 Gram on {0, t}.
    double worst_value = phi0;
    double worst_point = 0.0;
    bool any_violation = false;
    for (const Plan& plan : plans) {
        for (double t : plan.pts) {
            if (t <= 0.0) continue;
            const double v = phi(t);
            if (!std::isfinite(v)) continue;  // surfaces as a failed grid below
            if (v > phi0 * (1.0 + kEvennessRelTol) && v > worst_value) {
                worst_value = v;
                worst_point = t;
                any_violation = true;
            }
        }
    }
    const double strong_margin = 2.0 * threshold_rel * phi0;
    if (any_violation && worst_value - phi0 > strong_margin) {
        report.verdict = PdVerdict::Refuted;
        report.min_eigenvalue = phi0 - worst_value;
        report.threshold = strong_margin;
        report.witness_points = {0.0, worst_point};
        GridResult g;
        g.half_width = worst_point;
        g.points = 2;
        g.min_eigenvalue = report.min_eigenvalue;
        g.threshold = strong_margin;
        report.grids.push_back(g);
        return report;
    }
    const bool gray_zone = any_violation;

    // Full Gram eigenvalue sweep.
    bool any_failed = false;
    bool have_min = false;
    const GridResult* refuting = nullptr;
    const Plan* refuting_plan = nullptr;
    std::size_t min_index = 0;
    for (const Plan& plan : plans) {
        GridResult g;
        g.half_width = plan.half_width;
        g.points = static_cast<int>(plan.pts.size());
        g.jittered = plan.jittered;
        g.threshold = threshold_rel * g.points * phi0;
        bool ok = true;
        Eigen::MatrixXd gram;
        try {
            gram = gram_matrix(phi, plan.pts);
            if (!gram.allFinite()) ok = false;
        } catch (const std::exception&) {
            ok = false;
        }
        if (ok) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
            if (es.info() != Eigen::Success) ok = false;
            else g.min_eigenvalue = es.eigenvalues().minCoeff();
        }
        g.evaluation_failed = !ok;
        if (!ok) any_failed = true;
        report.grids.push_back(g);
        const GridResult& stored = report.grids.back();
        if (ok && (!have_min || stored.min_eigenvalue < report.min_eigenvalue)) {
            have_min = true;
            report.min_eigenvalue = stored.min_eigenvalue;
            report.threshold = stored.threshold;
            min_index = report.grids.size() - 1;
        }
    }
    for (std::size_t i = 0; i < report.grids.size(); ++i) {
        const GridResult& g = report.grids[i];
        if (!g.evaluation_failed && g.min_eigenvalue < -g.threshold) {
            if (refuting == nullptr || g.min_eigenvalue < refuting->min_eigenvalue) {
                refuting = &g;
                refuting_plan = &plans[i];
            }
        }
    }

    if (refuting != nullptr) {
        report.verdict = PdVerdict::Refuted;
        report.min_eigenvalue = refuting->min_eigenvalue;
        report.threshold = refuting->threshold;
        report.witness_points = refuting_plan->pts;
    } else if (any_failed || gray_zone || !have_min) {
        report.verdict = PdVerdict::Inconclusive;
    } else {
        report.verdict = PdVerdict::CertifiedOnGrids;
        report.witness_points = plans[min_index].pts;
    }
    return report;
}

double sinh_ratio_kernel_density(double alpha, double beta, double s) {
    if (!(alpha > 0.0) || !(alpha < beta) || !(beta <= 2.0))
        throw std::invalid_argument("density requires 0 < alpha < beta <= 2");
    const double gamma = M_PI * alpha / beta;
    const double c = M_PI * std::abs(s) / beta;
    if (c > 30.0) {
        const double e = std::exp(-c);
        return (std::sin(gamma) / beta) * e / (1.0 + 2.0 * std::cos(gamma) * e + e * e);
    }
    return std::sin(gamma) / (2.0 * beta * (std::cosh(c) + std::cos(gamma)));
}

double fourier_kernel_check(double alpha, double beta, const std::vector<double>& t_values,
                            double half_width, int quad_points) {
    if (!(alpha > 0.0) || !(alpha < beta) || !(beta <= 2.0))
        throw std::invalid_argument("fourier check requires 0 < alpha < beta <= 2");
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw std::invalid_argument("half_width must be positive and finite");
    if (quad_points < 9) throw std::invalid_argument("quad_points must be at least 9");

    const double ratio = beta / alpha;
    double worst = 0.0;
    for (double t : t_values) {
        if (!std::isfinite(t)) throw std::invalid_argument("t values must be finite");
        auto integrand = [alpha, beta, t](double s) {
            return std::cos(t * s) * sinh_ratio_kernel_density(alpha, beta, s);
        };
        const double coarse = integrate_even_simpson(integrand, half_width, quad_points);
        const double fine = integrate_even_simpson(integrand, half_width, 2 * quad_points - 1);
        if (ratio * std::abs(fine - coarse) > 1e-4)
            throw std::runtime_error("cosine-transform quadrature did not converge");
        const double integral = fine + (fine - coarse) / 15.0;
        const double target = std::exp(ln_sinh_over(alpha * t) - ln_sinh_over(beta * t));
        worst = std::max(worst, std::abs(ratio * integral - target));
    }
    return worst;
}

std::function<double(double)> phi_sinh_ratio(double alpha, double beta) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha) || !(beta > 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("sinh-ratio requires alpha >= 0 and beta > 0");
    return [alpha, beta](double t) {
        return std::exp(ln_sinh_over(alpha * t) - ln_sinh_over(beta * t));
    };
}

std::function<double(double)> phi_inv_cosh(double alpha) {
    if (!std::isfinite(alpha)) throw std::invalid_argument("alpha must be finite");
    return [alpha](double t) { return std::exp(-ln_cosh(0.5 * alpha * t)); };
}

std::function<double(double)> phi_z_over_sinh(double alpha) {
    if (!std::isfinite(alpha)) throw std::invalid_argument("alpha must be finite");
    return [alpha](double t) { return std::exp(-ln_sinh_over(0.5 * alpha * t)); };
}

std::function<double(double)> phi_tanh_over_z(double alpha) {
    if (!std::isfinite(alpha)) throw std::invalid_argument("alpha must be finite");
    return [alpha](double t) {
        const double z = 0.5 * alpha * t;
        return std::exp(ln_sinh_over(z) - ln_cosh(z));
    };
}

std::function<double(double)> phi_mean_ratio(const MeanKind& numerator,
                                             const MeanKind& denominator, RatioScale scale) {
    return [numerator, denominator, scale](double t) {
        return eval_ratio(numerator, denominator, t, scale);
    };
}

namespace {

std::string with_alpha(const std::string& base, double alpha) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s(alpha=%g)", base.c_str(), alpha);
    return buf;
}

std::string with_m(const std::string& base, int m) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s(m=%d)", base.c_str(), m);
    return buf;
}

MeanKind mk(MeanFamily f, double a = 0.0) { return MeanKind(f, a); }

}  // namespace

std::vector<PdCatalogEntry> pd_catalog() {
    std::vector<PdCatalogEntry> cat;

    auto add = [&cat](std::string id, std::function<double(double)> phi, bool certified) {
        cat.push_back({std::move(id), std::move(phi), certified});
    };

    // sinh ratios (beta/alpha) sinh(alpha t)/sinh(beta t), alpha < beta.
    for (auto [a, b] : {std::pair{0.0, 1.0}, {0.25, 0.5}, {0.5, 1.0}, {1.0, 2.0}}) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "sinh-ratio(alpha=%g,beta=%g)", a, b);
        add(buf, phi_sinh_ratio(a, b), true);
    }

    // H_alpha / G_alpha = 1/cosh(alpha t / 2), G_alpha / L_alpha =
    // (alpha t/2)/sinh(alpha t/2), L_alpha / A_alpha = tanh(alpha t/2)/(alpha t/2),
    // each at arguments (e^t, 1).
    for (double a : {0.25, 0.5, 1.0}) {
        add(with_alpha("hg-ratio", a), phi_inv_cosh(a), true);
        add(with_alpha("gl-ratio", a), phi_z_over_sinh(a), true);
        add(with_alpha("la-ratio", a), phi_tanh_over_z(a), true);
    }

    // M_{m/(m+1)} / G_{1/m} and A_{1/m} / M_{(m+1)/m} at (e^{2t}, 1).
    for (int m : {1, 2, 3, 4}) {
        add(with_m("mg-composite", m),
            phi_mean_ratio(mk(MeanFamily::M, m / (m + 1.0)), mk(MeanFamily::G, 1.0 / m),
                           RatioScale::Exp2T),
            true);
        add(with_m("am-composite", m),
            phi_mean_ratio(mk(MeanFamily::A, 1.0 / m), mk(MeanFamily::M, (m + 1.0) / m),
                           RatioScale::Exp2T),
            true);
    }

    // H_{1/m} / M_{m/(m+1)} at (e^{2t}, 1): positive definite for m = 1, 2
    // and indefinite from m = 3 on.
    for (int m : {1, 2}) {
        add(with_m("hm-ratio", m),
            phi_mean_ratio(mk(MeanFamily::H, 1.0 / m), mk(MeanFamily::M, m / (m + 1.0)),
                           RatioScale::Exp2T),
            true);
    }
    add(with_m("hm-ratio", 3),
        phi_mean_ratio(mk(MeanFamily::H, 1.0 / 3.0), mk(MeanFamily::M, 0.75),
                       RatioScale::Exp2T),
        false);

    // Known non-examples.
    add("sinh-ratio(alpha=1,beta=0.5)", phi_sinh_ratio(1.0, 0.5), false);
    add("cosh", [](double t) { return std::cosh(t); }, false);

    return cat;
}

std::function<double(double)> catalog_function(const std::string& id, double alpha, double beta,
                                               int m) {
    if (id == "sinh-ratio") return phi_sinh_ratio(alpha, beta);
    if (id == "hg-ratio") return phi_inv_cosh(alpha);
    if (id == "gl-ratio") return phi_z_over_sinh(alpha);
    if (id == "la-ratio") return phi_tanh_over_z(alpha);
    if (id == "cosh") return [](double t) { return std::cosh(t); };
    if (m < 1) throw std::invalid_argument(id + " requires m >= 1");
    if (id == "mg-composite")
        return phi_mean_ratio(mk(MeanFamily::M, m / (m + 1.0)), mk(MeanFamily::G, 1.0 / m),
                              RatioScale::Exp2T);
    if (id == "am-composite")
        return phi_mean_ratio(mk(MeanFamily::A, 1.0 / m), mk(MeanFamily::M, (m + 1.0) / m),
                              RatioScale::Exp2T);
    if (id == "hm-ratio")
        return phi_mean_ratio(mk(MeanFamily::H, 1.0 / m), mk(MeanFamily::M, m / (m + 1.0)),
                              RatioScale::Exp2T);
    throw std::invalid_argument("unknown function id: " + id);
}

}  // namespace meanscope
