#pragma once

#include "triwork/quantum.hpp"

#include <doctest.h>

#include <random>
#include <vector>

namespace testing_support {

using namespace triwork;

inline Direction random_direction(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return Direction::from_angles(std::acos(1.0 - 2.0 * u(rng)), kTwoPi * u(rng));
}

inline PureState random_pure(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> g;
    Vector v(1 << n);
    for (int i = 0; i < v.size(); ++i) v(i) = Complex(g(rng), g(rng));
    return PureState(n, v / v.norm());
}

// Random mixed state of random rank: G G^dagger / Tr.
inline DensityMatrix random_mixed(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> g;
    std::uniform_int_distribution<int> rank_dist(1, 1 << n);
    const int dim = 1 << n;
    const int rank = rank_dist(rng);
    Matrix gm(dim, rank);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < rank; ++c) gm(r, c) = Complex(g(rng), g(rng));
    Matrix m = gm * gm.adjoint();
    m /= m.trace().real();
    m = 0.5 * (m + m.adjoint()).eval();
    return DensityMatrix(n, m);
}

inline DensityMatrix random_product(std::mt19937_64& rng) {
    return dm_from_pure(product_state({random_direction(rng), random_direction(rng), random_direction(rng)}));
}

// Mixture of 1..8 random pure product states.
inline DensityMatrix random_separable(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> count(1, 8);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    const int k = count(rng);
    std::vector<double> w(static_cast<std::size_t>(k));
    double total = 0.0;
    for (double& x : w) total += (x = u(rng));
    std::vector<WeightedState> parts;
    for (int i = 0; i < k; ++i) parts.push_back({w[static_cast<std::size_t>(i)] / total, random_product(rng)});
    return mix(parts);
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

} // namespace testing_support

// Absolute-tolerance comparison: |a - b| <= tol.
#define CHECK_NEAR(a, b, tol)                                                              \
    do {                                                                                   \
        const double check_near_a_ = (a);                                                  \
        const double check_near_b_ = (b);                                                  \
        INFO("actual " << check_near_a_ << ", expected " << check_near_b_ << ", tol " << (tol)); \
        CHECK(std::abs(check_near_a_ - check_near_b_) <= (tol));                           \
    } while (false)
