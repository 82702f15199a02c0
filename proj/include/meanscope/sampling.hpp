#pragma once

// Deterministic random ensembles of positive semidefinite test instances.
//
// Every sample is derived from (seed, sample_index) through a splitmix64
// chain, so results are bitwise reproducible regardless of how samples are
// distributed across threads.

#include <Eigen/Dense>

#include <cstdint>
#include <string>

namespace meanscope {

// splitmix64 finalizer. Decorrelates consecutive seeds.
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Derives a stream seed from a base seed and an index.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(seed + 0x9E3779B97F4A7C15ULL * (index + 1));
}

// Minimal counter-based generator: splitmix64 over an incrementing state.
class Rng64 {
public:
    explicit Rng64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() { return splitmix64(state_++); }

    // Uniform in (0, 1), never exactly 0 or 1.
    double uniform01() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Uniform in [lo, hi].
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

private:
    std::uint64_t state_;
};

// Standard normal deviates via Box-Muller on uniform01 pairs.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}

    double next();

private:
    Rng64 rng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

enum class EnsembleKind {
    GaussianPsd,      // S = A A^T with A ~ N(0,1) entries
    RankDeficientPsd, // gaussian-psd with the smallest third of the spectrum zeroed
    IllConditionedPsd // gaussian-psd with eigenvalues remapped to a fixed condition number
};

EnsembleKind parse_ensemble(const std::string& name);
std::string ensemble_name(EnsembleKind kind);

struct SampleEnsemble {
    EnsembleKind kind = EnsembleKind::GaussianPsd;
    double condition_target = 1e6; // only used by IllConditionedPsd
    std::uint64_t seed = 0;
};

// One verification instance: positive semidefinite S (n x n), T (m x m) and
// a dense coupling matrix X (n x m).
struct Instance {
    Eigen::MatrixXd S;
    Eigen::MatrixXd T;
    Eigen::MatrixXd X;
};

// Draws the sample at position sample_index of the ensemble stream.
// Depends only on (ensemble.seed, sample_index, n, m).
Instance sample_instance(const SampleEnsemble& ensemble, int n, int m,
                         std::uint64_t sample_index);

// S = A A^T for an n x k standard Gaussian A (k = n by default).
Eigen::MatrixXd gaussian_psd(int n, NormalSampler& sampler);

// Dense n x m matrix with independent N(0,1) entries.
Eigen::MatrixXd gaussian_dense(int n, int m, NormalSampler& sampler);

} // namespace meanscope
