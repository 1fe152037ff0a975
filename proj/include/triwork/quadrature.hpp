#pragma once

#include <vector>

namespace triwork {

struct GaussLegendre {
    std::vector<double> nodes;   // in (-1, 1), ascending
    std::vector<double> weights; // sum to 2
};

// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
GaussLegendre gauss_legendre(int n);

// Nodes of the n-point uniform trapezoid rule on a period [0, 2 pi); for a
// periodic integrand the rule is the plain mean over these nodes.
std::vector<double> periodic_nodes(int n);

} // namespace triwork
