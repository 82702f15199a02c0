#pragma once

#include <Eigen/Dense>
#include <string>

#include "meanscope/scalar_means.hpp"

namespace meanscope {

// Eigendecomposition of a positive semidefinite matrix, eigenvalues sorted
// descending and clamped so none is negative.
struct SpectralDecomposition {
    int dimension = 0;
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;
};

// A pair of positive semidefinite matrices and the (possibly rectangular)
// matrix they act on from either side: S is n x n, T is m x m, X is n x m.
struct MeanTransformInput {
    Eigen::MatrixXd S;
    Eigen::MatrixXd T;
    Eigen::MatrixXd X;
};

// Symmetrizes, eigensolves and clamps. Rejects matrices that are not square,
// not symmetric to 1e-12 * ||S||_F, or have an eigenvalue below
// -clamp_rel * lambda_max. Eigenvalues within clamp_rel * lambda_max of zero
// are snapped to exactly zero so rank deficiency is represented exactly.
SpectralDecomposition decompose_psd(const Eigen::MatrixXd& S, double clamp_rel = 1e-10);

// U diag(lambda^p) U^T for p in [0, 1], with 0^p := 0 throughout; at p = 0
// this is the support projection.
Eigen::MatrixXd frac_power(const SpectralDecomposition& d, double p);

// Two-sided mean transform: Y = U (W . (U^T X V)) V^T where
// W_ij = mean(lambda_i, mu_j), using the continuous zero-argument extension
// when an eigenvalue is zero. "." is the entrywise product.
Eigen::MatrixXd mean_transform(const MeanKind& kind, const SpectralDecomposition& s,
                               const SpectralDecomposition& t, const Eigen::MatrixXd& X,
                               const EvalPolicy& policy = {});
Eigen::MatrixXd mean_transform(const MeanKind& kind, const MeanTransformInput& input,
                               const EvalPolicy& policy = {});

// Finite sums of fractional power sandwiches S^a X T^b that reproduce
// particular mean transforms exactly.
enum class PowerSumId {
    GInvM,          // (1/m) sum_{k=1..m} S^[(2k-1)/2m] X T^[(2m-2k+1)/2m]
    AInvM,          // (1/m) (sum_{k=0..m} S^[k/m] X T^[(m-k)/m] - (S X + X T)/2)
    MOverMPlus1,    // (1/m) sum_{k=1..m} S^[k/(m+1)] X T^[(m+1-k)/(m+1)]
    MOverMMinus1,   // (1/m) sum_{k=0..m-1} S^[k/(m-1)] X T^[(m-1-k)/(m-1)]
};

PowerSumId parse_power_sum_id(const std::string& code);
std::string power_sum_code(PowerSumId id);

// The mean whose transform the sum reproduces: G:1/m, A:1/m, M:m/(m+1),
// M:m/(m-1) respectively.
MeanKind corresponding_mean(PowerSumId id, int m);

// m >= 1 for GInvM and MOverMPlus1, m >= 2 for AInvM and MOverMMinus1.
// Zero exponents contribute identity factors (the continuous lambda -> 0
// limit of lambda^p at p = 0, not the support projection); this keeps the
// sums equal to their mean transforms on singular inputs as well.
Eigen::MatrixXd power_sum_representation(PowerSumId id, int m, const SpectralDecomposition& s,
                                         const SpectralDecomposition& t,
                                         const Eigen::MatrixXd& X);
Eigen::MatrixXd power_sum_representation(PowerSumId id, int m, const MeanTransformInput& input);

// Gauss-Legendre approximation of the integral over nu in [0, 1] of
// S^nu X T^(1-nu); nodes >= 2. Converges to the LM transform.
Eigen::MatrixXd log_mean_integral(const SpectralDecomposition& s, const SpectralDecomposition& t,
                                  const Eigen::MatrixXd& X, int nodes = 64);
Eigen::MatrixXd log_mean_integral(const MeanTransformInput& input, int nodes = 64);

}  // namespace meanscope
