#include "meanscope/sampling.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace meanscope {

double NormalSampler::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = rng_.uniform01();
    const double u2 = rng_.uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

EnsembleKind parse_ensemble(const std::string& name) {
    if (name == "gaussian-psd") return EnsembleKind::GaussianPsd;
    if (name == "rank-deficient-psd") return EnsembleKind::RankDeficientPsd;
    if (name == "ill-conditioned-psd") return EnsembleKind::IllConditionedPsd;
    throw std::invalid_argument("unknown ensemble: " + name);
}

std::string ensemble_name(EnsembleKind kind) {
    switch (kind) {
        case EnsembleKind::GaussianPsd: return "gaussian-psd";
        case EnsembleKind::RankDeficientPsd: return "rank-deficient-psd";
        case EnsembleKind::IllConditionedPsd: return "ill-conditioned-psd";
    }
    throw std::logic_error("unreachable ensemble kind");
}

Eigen::MatrixXd gaussian_dense(int n, int m, NormalSampler& sampler) {
    Eigen::MatrixXd a(n, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) a(i, j) = sampler.next();
    return a;
}

Eigen::MatrixXd gaussian_psd(int n, NormalSampler& sampler) {
    const Eigen::MatrixXd a = gaussian_dense(n, n, sampler);
    Eigen::MatrixXd s = a * a.transpose();
    // Round-off can leave s very slightly asymmetric; symmetrize exactly.
    s = 0.5 * (s + s.transpose()).eval();
    return s;
}

namespace {

// Eigendecomposition with eigenvalues in descending order.
void spectrum_desc(const Eigen::MatrixXd& s, Eigen::VectorXd& evals,
                   Eigen::MatrixXd& evecs) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigendecomposition failed during sampling");
    evals = es.eigenvalues().reverse();
    evecs = es.eigenvectors().rowwise().reverse();
}

// Zeroes the smallest ceil(n/3) eigenvalues.
Eigen::MatrixXd drop_tail(const Eigen::MatrixXd& s) {
    const int n = static_cast<int>(s.rows());
    Eigen::VectorXd evals;
    Eigen::MatrixXd evecs;
    spectrum_desc(s, evals, evecs);
    const int zeros = (n + 2) / 3;
    for (int i = n - zeros; i < n; ++i) evals(i) = 0.0;
    Eigen::MatrixXd out = evecs * evals.asDiagonal() * evecs.transpose();
    return 0.5 * (out + out.transpose()).eval();
}

// Remaps the spectrum geometrically onto [max/condition, max].
Eigen::MatrixXd stretch_condition(const Eigen::MatrixXd& s, double condition) {
    const int n = static_cast<int>(s.rows());
    Eigen::VectorXd evals;
    Eigen::MatrixXd evecs;
    spectrum_desc(s, evals, evecs);
    const double top = evals(0);
    if (!(top > 0.0))
        throw std::runtime_error("degenerate sample while conditioning spectrum");
    if (n > 1) {
        for (int i = 0; i < n; ++i) {
            const double f = static_cast<double>(i) / (n - 1);
            evals(i) = top * std::pow(condition, -f);
        }
    }
    Eigen::MatrixXd out = evecs * evals.asDiagonal() * evecs.transpose();
    return 0.5 * (out + out.transpose()).eval();
}

} // namespace

Instance sample_instance(const SampleEnsemble& ensemble, int n, int m,
                         std::uint64_t sample_index) {
    if (n < 1 || m < 1) throw std::invalid_argument("matrix dimensions must be positive");
    if (ensemble.kind == EnsembleKind::IllConditionedPsd &&
        !(ensemble.condition_target >= 1.0))
        throw std::invalid_argument("condition_target must be >= 1");

    const std::uint64_t base = mix_seed(ensemble.seed, sample_index);
    NormalSampler s_sampler(mix_seed(base, 1));
    NormalSampler t_sampler(mix_seed(base, 2));
    NormalSampler x_sampler(mix_seed(base, 3));

    Instance inst;
    inst.S = gaussian_psd(n, s_sampler);
    inst.T = gaussian_psd(m, t_sampler);
    inst.X = gaussian_dense(n, m, x_sampler);

    switch (ensemble.kind) {
        case EnsembleKind::GaussianPsd:
            break;
        case EnsembleKind::RankDeficientPsd:
            if (n > 1) inst.S = drop_tail(inst.S);
            if (m > 1) inst.T = drop_tail(inst.T);
            break;
        case EnsembleKind::IllConditionedPsd:
            inst.S = stretch_condition(inst.S, ensemble.condition_target);
            inst.T = stretch_condition(inst.T, ensemble.condition_target);
            break;
    }
    return inst;
}

} // namespace meanscope
