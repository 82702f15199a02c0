#include "meanscope/operator_means.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "meanscope/quadrature.hpp"

namespace meanscope {

SpectralDecomposition decompose_psd(const Eigen::MatrixXd& S, double clamp_rel) {
    if (S.rows() != S.cols() || S.size() == 0)
        throw std::invalid_argument("decompose_psd: matrix must be square and nonempty");
    if (!(clamp_rel >= 0.0)) throw std::invalid_argument("decompose_psd: bad clamp threshold");
    const double fro = S.norm();
    if ((S - S.transpose()).norm() > 1e-12 * fro)
        throw std::invalid_argument("decompose_psd: matrix is not symmetric");
    const Eigen::MatrixXd sym = 0.5 * (S + S.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("decompose_psd: eigensolver did not converge");

    SpectralDecomposition d;
    d.dimension = static_cast<int>(S.rows());
    d.eigenvalues = solver.eigenvalues().reverse();
    d.eigenvectors = solver.eigenvectors().rowwise().reverse();
    const double lmax = std::max(d.eigenvalues[0], 0.0);
    const double tol = clamp_rel * lmax;
    for (int i = 0; i < d.dimension; ++i) {
        if (d.eigenvalues[i] < -tol)
            throw std::domain_error("decompose_psd: matrix is not positive semidefinite");
        if (std::abs(d.eigenvalues[i]) <= tol) d.eigenvalues[i] = 0.0;
    }
    return d;
}

Eigen::MatrixXd frac_power(const SpectralDecomposition& d, double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::domain_error("frac_power: exponent must lie in [0, 1]");
    Eigen::VectorXd powered(d.dimension);
    for (int i = 0; i < d.dimension; ++i)
        powered[i] = d.eigenvalues[i] > 0.0 ? std::pow(d.eigenvalues[i], p) : 0.0;
    return d.eigenvectors * powered.asDiagonal() * d.eigenvectors.transpose();
}

Eigen::MatrixXd mean_transform(const MeanKind& kind, const SpectralDecomposition& s,
                               const SpectralDecomposition& t, const Eigen::MatrixXd& X,
                               const EvalPolicy& policy) {
    const int n = s.dimension;
    const int m = t.dimension;
    if (X.rows() != n || X.cols() != m)
        throw std::invalid_argument("mean_transform: shape mismatch");
    Eigen::MatrixXd W(n, m);
    for (int i = 0; i < n; ++i) {
        const double lam = s.eigenvalues[i];
        for (int j = 0; j < m; ++j) {
            const double mu = t.eigenvalues[j];
            if (lam > 0.0 && mu > 0.0)
                W(i, j) = eval_mean(kind, lam, mu, policy);
            else if (lam == 0.0 && mu == 0.0)
                W(i, j) = 0.0;
            else
                W(i, j) = mean_at_zero(kind, lam + mu);
        }
    }
    const Eigen::MatrixXd Z = s.eigenvectors.transpose() * X * t.eigenvectors;
    return s.eigenvectors * W.cwiseProduct(Z) * t.eigenvectors.transpose();
}

Eigen::MatrixXd mean_transform(const MeanKind& kind, const MeanTransformInput& input,
                               const EvalPolicy& policy) {
    return mean_transform(kind, decompose_psd(input.S), decompose_psd(input.T), input.X, policy);
}

PowerSumId parse_power_sum_id(const std::string& code) {
    if (code == "G_inv_m") return PowerSumId::GInvM;
    if (code == "A_inv_m") return PowerSumId::AInvM;
    if (code == "M_m_over_m_plus_1") return PowerSumId::MOverMPlus1;
    if (code == "M_m_over_m_minus_1") return PowerSumId::MOverMMinus1;
    throw std::invalid_argument("parse_power_sum_id: unknown id '" + code + "'");
}

std::string power_sum_code(PowerSumId id) {
    switch (id) {
        case PowerSumId::GInvM:
            return "G_inv_m";
        case PowerSumId::AInvM:
            return "A_inv_m";
        case PowerSumId::MOverMPlus1:
            return "M_m_over_m_plus_1";
        case PowerSumId::MOverMMinus1:
            return "M_m_over_m_minus_1";
    }
    throw std::logic_error("power_sum_code: unknown id");
}

MeanKind corresponding_mean(PowerSumId id, int m) {
    switch (id) {
        case PowerSumId::GInvM:
            return MeanKind(MeanFamily::G, 1.0 / m);
        case PowerSumId::AInvM:
            return MeanKind(MeanFamily::A, 1.0 / m);
        case PowerSumId::MOverMPlus1:
            return MeanKind(MeanFamily::M, static_cast<double>(m) / (m + 1));
        case PowerSumId::MOverMMinus1:
            return MeanKind(MeanFamily::M, static_cast<double>(m) / (m - 1));
    }
    throw std::logic_error("corresponding_mean: unknown id");
}

namespace {

Eigen::MatrixXd sandwich(const SpectralDecomposition& s, double es,
                         const SpectralDecomposition& t, double et, const Eigen::MatrixXd& X) {
    Eigen::MatrixXd term = X;
    if (es > 0.0) term = frac_power(s, es) * term;
    if (et > 0.0) term = term * frac_power(t, et);
    return term;
}

}  // namespace

Eigen::MatrixXd power_sum_representation(PowerSumId id, int m, const SpectralDecomposition& s,
                                         const SpectralDecomposition& t,
                                         const Eigen::MatrixXd& X) {
    if (X.rows() != s.dimension || X.cols() != t.dimension)
        throw std::invalid_argument("power_sum_representation: shape mismatch");
    const int min_m = (id == PowerSumId::AInvM || id == PowerSumId::MOverMMinus1) ? 2 : 1;
    if (m < min_m)
        throw std::invalid_argument("power_sum_representation: m must be >= " +
                                    std::to_string(min_m) + " for " + power_sum_code(id));

    std::vector<std::pair<double, double>> exponents;
    switch (id) {
        case PowerSumId::GInvM:
            for (int k = 1; k <= m; ++k)
                exponents.emplace_back((2.0 * k - 1.0) / (2.0 * m), (2.0 * m - 2.0 * k + 1.0) / (2.0 * m));
            break;
        case PowerSumId::AInvM:
            for (int k = 0; k <= m; ++k)
                exponents.emplace_back(static_cast<double>(k) / m, static_cast<double>(m - k) / m);
            break;
        case PowerSumId::MOverMPlus1:
            for (int k = 1; k <= m; ++k)
                exponents.emplace_back(static_cast<double>(k) / (m + 1),
                                       static_cast<double>(m + 1 - k) / (m + 1));
            break;
        case PowerSumId::MOverMMinus1:
            for (int k = 0; k <= m - 1; ++k)
                exponents.emplace_back(static_cast<double>(k) / (m - 1),
                                       static_cast<double>(m - 1 - k) / (m - 1));
            break;
    }

    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(X.rows(), X.cols());
    for (const auto& [es, et] : exponents) acc += sandwich(s, es, t, et, X);
    if (id == PowerSumId::AInvM)
        acc -= 0.5 * (frac_power(s, 1.0) * X + X * frac_power(t, 1.0));
    return acc / static_cast<double>(m);
}

Eigen::MatrixXd power_sum_representation(PowerSumId id, int m, const MeanTransformInput& input) {
    return power_sum_representation(id, m, decompose_psd(input.S), decompose_psd(input.T),
                                    input.X);
}

Eigen::MatrixXd log_mean_integral(const SpectralDecomposition& s, const SpectralDecomposition& t,
                                  const Eigen::MatrixXd& X, int nodes) {
    if (X.rows() != s.dimension || X.cols() != t.dimension)
        throw std::invalid_argument("log_mean_integral: shape mismatch");
    if (nodes < 2) throw std::invalid_argument("log_mean_integral: need at least 2 nodes");
    const QuadratureRule rule = gauss_legendre_01(nodes);
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(X.rows(), X.cols());
    for (int q = 0; q < nodes; ++q)
        acc += rule.weights[q] * sandwich(s, rule.nodes[q], t, 1.0 - rule.nodes[q], X);
    return acc;
}

Eigen::MatrixXd log_mean_integral(const MeanTransformInput& input, int nodes) {
    return log_mean_integral(decompose_psd(input.S), decompose_psd(input.T), input.X, nodes);
}

}  // namespace meanscope
