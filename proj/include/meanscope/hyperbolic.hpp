#pragma once

#include <cmath>

// Log-domain hyperbolic helpers. All mean evaluations reduce to sums and
// differences of these, so they must stay finite and accurate for arguments
// from denormal scale up to |z| ~ 1e5.

namespace meanscope {

// Default switch point below which ln(sinh(z)/z) uses its even Taylor
// series. With four series terms the truncation error is below 1e-17 for
// any threshold up to 1e-2.
inline constexpr double kSinhSeriesThreshold = 1e-4;

// ln(cosh(z)). Uses cosh(z) - 1 = 2 sinh^2(z/2) at moderate arguments and
// the asymptotic form beyond, so it never overflows.
inline double ln_cosh(double z) noexcept {
    const double a = std::abs(z);
    if (a > 20.0)
        return a - 0.69314718055994531 + std::log1p(std::exp(-2.0 * a));
    const double s = std::sinh(0.5 * a);
    return std::log1p(2.0 * s * s);
}

// ln(sinh(z)/z), even in z, with value 0 at z = 0.
inline double ln_sinh_over(double z, double series_threshold = kSinhSeriesThreshold) noexcept {
    const double a = std::abs(z);
    if (a < series_threshold) {
        const double w = a * a;
        return w * (1.0 / 6.0 + w * (-1.0 / 180.0 + w * (1.0 / 2835.0 - w * (1.0 / 37800.0))));
    }
    if (a > 20.0)
        return a - std::log(2.0 * a) + std::log1p(-std::exp(-2.0 * a));
    return std::log(std::sinh(a) / a);
}

// d/dz ln(sinh(z)/z) = coth(z) - 1/z, odd in z. The direct form cancels
// badly near 0, hence the series branch.
inline double d_ln_sinh_over(double z) noexcept {
    const double a = std::abs(z);
    double r;
    if (a < 0.1) {
        const double w = a * a;
        r = a * (1.0 / 3.0 + w * (-1.0 / 45.0 + w * (2.0 / 945.0 - w * (1.0 / 4725.0))));
    } else {
        r = 1.0 / std::tanh(a) - 1.0 / a;
    }
    return z < 0.0 ? -r : r;
}

// d^2/dz^2 ln(sinh(z)/z) = 1/z^2 - 1/sinh^2(z), even in z, value 1/3 at 0.
inline double d2_ln_sinh_over(double z) noexcept {
    const double a = std::abs(z);
    if (a < 0.1) {
        const double w = a * a;
        return 1.0 / 3.0 + w * (-1.0 / 15.0 + w * (2.0 / 189.0 - w * (1.0 / 675.0)));
    }
    if (a > 20.0)
        return 1.0 / (a * a);
    const double s = std::sinh(a);
    return 1.0 / (a * a) - 1.0 / (s * s);
}

}  // namespace meanscope
