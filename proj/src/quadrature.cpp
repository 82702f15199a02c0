#include "meanscope/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace meanscope {

QuadratureRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        // One polishing pass so dp matches the converged node.
        {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.weights[i] = w;
        rule.nodes[n - 1 - i] = x;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) {
        rule.nodes[n / 2] = 0.0;
    }
    return rule;
}

QuadratureRule gauss_legendre_01(int n) {
    QuadratureRule rule = gauss_legendre(n);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = 0.5 * (rule.nodes[i] + 1.0);
        rule.weights[i] *= 0.5;
    }
    return rule;
}

double integrate_even_simpson(const std::function<double(double)>& f, double half_width,
                              int points) {
    if (!(half_width > 0.0)) throw std::invalid_argument("integrate_even_simpson: bad half width");
    if (points < 3) points = 3;
    if (points % 2 == 0) ++points;
    const double h = half_width / (points - 1);
    double sum = f(0.0) + f(half_width);
    for (int i = 1; i < points - 1; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f(i * h);
    return 2.0 * sum * h / 3.0;
}

}  // namespace meanscope
