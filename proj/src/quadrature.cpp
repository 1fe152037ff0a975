#include "triwork/quadrature.hpp"

#include "triwork/errors.hpp"
#include "triwork/quantum.hpp"

#include <cmath>

namespace triwork {

GaussLegendre gauss_legendre(int n) {
    if (n < 1) throw ArgumentError("gauss_legendre: n must be positive");
    GaussLegendre rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

std::vector<double> periodic_nodes(int n) {
    if (n < 1) throw ArgumentError("periodic_nodes: n must be positive");
    std::vector<double> t(n);
    for (int k = 0; k < n; ++k) t[k] = kTwoPi * k / n;
    return t;
}

} // namespace triwork
