#include "cusplab/quadrature.hpp"

#include <cmath>

namespace cusplab {

GaussLegendre::GaussLegendre(int n) : nodes_(n), weights_(n) {
    // Newton iteration from the Chebyshev-based initial guess.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        nodes_[i] = -x;
        nodes_[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights_[i] = w;
        weights_[n - 1 - i] = w;
    }
}

double GaussLegendre::integrate(const std::function<double(double)>& f, double a, double b) const {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (size_t i = 0; i < nodes_.size(); ++i)
        acc += weights_[i] * f(mid + half * nodes_[i]);
    return acc * half;
}

const GaussLegendre& gauss64() {
    static const GaussLegendre rule(64);
    return rule;
}

} // namespace cusplab
