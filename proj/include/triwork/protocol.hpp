#pragma once

// Shot-level Monte Carlo of the work-extraction protocols. Outcomes are drawn
// from the exact joint distribution; work is estimated from the empirical
// conditional entropies (plug-in estimator, optionally Miller-Madow).

#include "triwork/quantum.hpp"
#include "triwork/work.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <utility>

namespace triwork {

enum class SamplingMode {
    ExactJoint,         // inverse CDF over the joint outcome distribution
    SequentialCollapse, // measure site by site on the collapsed state
};

struct ProtocolRunConfig {
    DensityMatrix state;
    // Tripartite: z is the z-measurer's axis, u the axis of the u-measurer
    // and of work extraction. Bipartite: z is Alice's axis, u is Bob's.
    Direction z;
    Direction u;
    long shots = 100000;
    std::uint64_t seed = 1;
    SamplingMode mode = SamplingMode::ExactJoint;
    bool miller_madow = false;
    Roles roles{}; // tripartite only
};

struct ProtocolEstimate {
    double empirical_work = 0.0;
    double analytic_work = 0.0;
    double abs_error = 0.0;
    long shots = 0;
    // Tripartite: (z-measurer outcome, u-measurer outcome). Bipartite: (A, B).
    std::map<std::pair<int, int>, long> branch_counts;
};

// Optional transcript: JSON lines {"shot":s,"i":..,"j":..,"k":..}; the
// bipartite protocol writes {"shot","role","i","j"} with i, j the A, B outcomes.
ProtocolEstimate simulate_tripartite(const ProtocolRunConfig& cfg, std::ostream* transcript = nullptr);
ProtocolEstimate simulate_bipartite(const ProtocolRunConfig& cfg, std::ostream* transcript = nullptr);

// Plug-in conditional entropy of the last bit given the others from counts
// indexed by bit string (last bit least significant).
double plugin_conditional_entropy(std::span<const long> counts, bool miller_madow);

} // namespace triwork
