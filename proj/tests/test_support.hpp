#pragma once

// Shared test helpers: an independent long-double evaluation route for every
// mean family (raw closed forms in x and y, no shared code with the library's
// centered-log path), plus small random-matrix utilities.

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "meanscope/sampling.hpp"
#include "meanscope/scalar_means.hpp"

namespace testsupport {

using meanscope::MeanFamily;
using meanscope::MeanKind;

// Raw closed forms. Valid for x, y > 0, x != y, away from removable
// parameter singularities (callers avoid alpha in {0, 1} where a family has
// a limit there, except where handled below).
inline long double naive_mean(const MeanKind& kind, long double x, long double y) {
    const long double a = kind.alpha();
    if (x == y) return x;
    const long double lx = std::log(x), ly = std::log(y);
    switch (kind.family()) {
        case MeanFamily::AM:
            return (x + y) / 2.0L;
        case MeanFamily::GM:
            return std::sqrt(x * y);
        case MeanFamily::HM:
            return 2.0L * x * y / (x + y);
        case MeanFamily::LM:
            return (x - y) / (lx - ly);
        case MeanFamily::P:
            return a * std::pow(x, a) * (x - y) / (std::pow(x, a) - std::pow(y, a));
        case MeanFamily::Q:
            return a * std::pow(y, a) * (x - y) / (std::pow(x, a) - std::pow(y, a));
        case MeanFamily::A:
            if (a == 0.0L) return (x - y) / (lx - ly);
            return a * (x - y) * (std::pow(x, a) + std::pow(y, a)) /
                   (2.0L * (std::pow(x, a) - std::pow(y, a)));
        case MeanFamily::G:
            if (a == 0.0L) return (x - y) / (lx - ly);
            return a * (x - y) * std::pow(x * y, a / 2.0L) /
                   (std::pow(x, a) - std::pow(y, a));
        case MeanFamily::H:
            if (a == 0.0L) return (x - y) / (lx - ly);
            return 2.0L * a * (x - y) * std::pow(x * y, a) /
                   (std::pow(x, 2.0L * a) - std::pow(y, 2.0L * a));
        case MeanFamily::L:
            return (x - y) / (lx - ly);
        case MeanFamily::M:
            if (a == 1.0L) return (x - y) / (lx - ly);
            if (a == 0.0L) return x * y * (lx - ly) / (x - y);  // conjugate of LM
            return (a - 1.0L) * (std::pow(x, a) - std::pow(y, a)) /
                   (a * (std::pow(x, a - 1.0L) - std::pow(y, a - 1.0L)));
        case MeanFamily::Stolarsky:
            if (a == 0.0L) return (x - y) / (lx - ly);
            if (a == 1.0L)  // identric mean
                return std::exp(-1.0L) * std::pow(std::pow(x, x) / std::pow(y, y),
                                                  1.0L / (x - y));
            return std::pow((std::pow(x, a) - std::pow(y, a)) / (a * (x - y)),
                            1.0L / (a - 1.0L));
        case MeanFamily::Binomial:
            if (a == 0.0L) return std::sqrt(x * y);
            return std::pow((std::pow(x, a) + std::pow(y, a)) / 2.0L, 1.0L / a);
        case MeanFamily::DualBinomial:
            if (a == 0.0L) return std::sqrt(x * y);
            return x * y /
                   std::pow((std::pow(x, a) + std::pow(y, a)) / 2.0L, 1.0L / a);
        case MeanFamily::ExpMean:
            if (a == 0.0L) return std::sqrt(x * y);
            return std::pow((std::pow(x, a) - std::pow(y, a)) / (a * (lx - ly)),
                            1.0L / a);
    }
    throw std::logic_error("naive_mean: unhandled family");
}

inline double rel_gap(double got, long double want) {
    const long double scale = std::max<long double>(std::abs(want), 1e-300L);
    return static_cast<double>(std::abs(static_cast<long double>(got) - want) / scale);
}

// Log-uniform positive scalar in [lo, hi].
inline double log_uniform(meanscope::Rng64& rng, double lo, double hi) {
    return lo * std::exp(rng.uniform01() * std::log(hi / lo));
}

// Random orthogonal matrix from the QR factorization of a Gaussian matrix,
// with the sign convention fixed so R has a nonnegative diagonal.
inline Eigen::MatrixXd random_orthogonal(int n, meanscope::NormalSampler& sampler) {
    Eigen::MatrixXd A = meanscope::gaussian_dense(n, n, sampler);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
    Eigen::MatrixXd Q = qr.householderQ();
    Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i)
        if (R(i, i) < 0) Q.col(i) *= -1.0;
    return Q;
}

}  // namespace testsupport
