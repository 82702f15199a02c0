#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "meanscope/scalar_means.hpp"

namespace meanscope {

// Sampling plan for Gram-matrix positive definiteness checks. The sweep
// enumerates, for every half-width in `scales`, uniform grids with the count
// ladder {8, 16, 32, 64} capped at `count`, plus one jittered grid at
// `count`. Grids are symmetric about 0 and include 0, so a grid built from
// count c has 2*floor(c/2) + 1 points; counts are capped so no grid exceeds
// 512 points.
struct GridSpec {
    double half_width = 80.0;
    int count = 64;
    std::optional<std::uint64_t> jitter_seed;  // empty -> fixed default stream
    std::vector<double> scales = {1.0, 5.0, 20.0, 80.0};
};

enum class PdVerdict { CertifiedOnGrids, Refuted, Inconclusive };

std::string verdict_name(PdVerdict v);

struct GridResult {
    double half_width = 0.0;
    int points = 0;
    bool jittered = false;
    double min_eigenvalue = 0.0;
    double threshold = 0.0;
    bool evaluation_failed = false;
};

struct GramReport {
    std::string function_id;
    GridSpec grid;
    double phi0 = 0.0;
    double min_eigenvalue = 0.0;  // most negative value seen, with its threshold below
    double threshold = 0.0;
    PdVerdict verdict = PdVerdict::Inconclusive;
    std::vector<double> witness_points;
    std::vector<GridResult> grids;
};

// Symmetric grid helpers used by the sweep; exposed for tests.
std::vector<double> make_symmetric_grid(double half_width, int count);
std::vector<double> make_jittered_grid(double half_width, int count, std::uint64_t seed);

// [phi(t_i - t_j)] with one evaluation per distinct |t_i - t_j|, so the
// result is exactly symmetric.
Eigen::MatrixXd gram_matrix(const std::function<double(double)>& phi,
                            const std::vector<double>& points);

// Checks evenness and phi(0) > 0, applies the necessary condition
// phi(t) <= phi(0) at every sampled point, then sweeps Gram minimum
// eigenvalues with per-grid threshold threshold_rel * n * phi(0).
GramReport check_positive_definite(const std::string& function_id,
                                   const std::function<double(double)>& phi,
                                   const GridSpec& spec = {}, double threshold_rel = 1e-10);

// Density whose cosine transform reproduces (beta/alpha) sinh(alpha t) /
// sinh(beta t); requires 0 < alpha < beta <= 2. Strictly positive and even.
double sinh_ratio_kernel_density(double alpha, double beta, double s);

// Max over t_values of |(beta/alpha) * integral - (beta/alpha) sinh(alpha t)
// / sinh(beta t)|, integrating cos(t s) * density(s) over |s| <= half_width
// by composite Simpson with Richardson refinement. Throws if doubling the
// point count moves the integral by more than 1e-4.
double fourier_kernel_check(double alpha, double beta, const std::vector<double>& t_values,
                            double half_width, int quad_points);

// Named even functions for the PD lab and the CLI.
std::function<double(double)> phi_sinh_ratio(double alpha, double beta);  // (b/a) sinh(at)/sinh(bt)
std::function<double(double)> phi_inv_cosh(double alpha);                 // 1/cosh(at/2)
std::function<double(double)> phi_z_over_sinh(double alpha);              // (at/2)/sinh(at/2)
std::function<double(double)> phi_tanh_over_z(double alpha);              // tanh(at/2)/(at/2)
std::function<double(double)> phi_mean_ratio(const MeanKind& numerator,
                                             const MeanKind& denominator, RatioScale scale);

struct PdCatalogEntry {
    std::string id;          // id with parameters baked in, e.g. "hg-ratio(alpha=0.5)"
    std::function<double(double)> phi;
    bool expected_certified = true;
};

// The battery of ratio functions whose positive definiteness drives the norm
// inequality chains, plus known non-examples.
std::vector<PdCatalogEntry> pd_catalog();

// Builds the function named by a CLI-style id: sinh-ratio, hg-ratio,
// gl-ratio, la-ratio, mg-composite, am-composite, hm-ratio, cosh.
std::function<double(double)> catalog_function(const std::string& id, double alpha, double beta,
                                               int m);

}  // namespace meanscope
