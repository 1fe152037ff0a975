#pragma once

#include "triwork/optimize.hpp"
#include "triwork/quantum.hpp"

#include <array>

namespace triwork {

// Measurement directions of the tripartite Mermin operator; primed settings
// are the second choice at each site.
struct MerminSettings {
    Direction a1, a1p; // Alice
    Direction a2, a2p; // Bob
    Direction a3, a3p; // Charlie

    // Six (theta, phi) pairs in the order a1, a1p, a2, a2p, a3, a3p.
    static MerminSettings from_angles(const std::array<double, 12>& angles);
    std::array<double, 12> angles() const;
};

// Settings reaching <B3> = 4 on (|000> + |111>)/sqrt 2: the x/y family with
// a3 = -y, i.e. B3 = XXX - XYY - YXY - YYX.
MerminSettings ghz_optimal_settings();

// (s1 s2' + s1' s2) s3 + (s1 s2 - s1' s2') s3', s_i = a_i . sigma.
Matrix mermin_operator(const MerminSettings& s);

// Re Tr(rho B3); throws NumericalIntegrityError if |Im| >= 1e-10.
double mermin_expectation(const DensityMatrix& rho, const MerminSettings& s);

struct MerminOptimum {
    double value = 0.0;
    MerminSettings settings;
    long n_evaluations = 0;
    std::optional<std::string> warning;
};

struct MerminSearchConfig {
    int n_starts = 20;
    double simplex_tol = 1e-7;
    int max_iters = 20000;
    int restarts = 3; // simplex restarts from the incumbent per start
    std::uint64_t seed = 20070101;
};

// Multi-start simplex over the 12 setting angles. Starts come from a
// seed-rotated Kronecker (golden-ratio) low-discrepancy sequence.
MerminOptimum max_mermin(const DensityMatrix& rho, const MerminSearchConfig& cfg = {});

} // namespace triwork
