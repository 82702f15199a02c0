#pragma once

#include <functional>
#include <vector>

namespace meanscope {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre rule with n nodes on [-1, 1], n >= 1.
QuadratureRule gauss_legendre(int n);

// The same rule mapped to [0, 1].
QuadratureRule gauss_legendre_01(int n);

// Integral of an even function over [-half_width, half_width], computed as
// twice the composite Simpson integral over [0, half_width] with `points`
// samples (rounded up to an odd count >= 3).
double integrate_even_simpson(const std::function<double(double)>& f, double half_width,
                              int points);

}  // namespace meanscope
