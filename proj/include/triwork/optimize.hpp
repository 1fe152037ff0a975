#pragma once

#include "triwork/quantum.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace triwork {

struct OptimizerConfig {
    int n_theta = 32;          // coarse cells, uniform in cos(theta)
    int n_phi = 64;
    int n_starts = 5;          // simplex refinements from the best coarse cells
    double simplex_tol = 1e-7; // radians
    int max_iters = 2000;
    std::uint64_t seed = 20070101;
    int scalar_grid = 64;      // grid points for 1-D searches before golden section
    double scalar_tol = 1e-6;  // golden-section width in the 1-D argument

    void validate() const;
};

enum class SearchMode { Max, Min };

const char* to_string(SearchMode mode);

struct SphereOptimum {
    double value = 0.0;
    double theta = 0.0;
    double phi = 0.0;
    SearchMode mode = SearchMode::Max;
    long n_evaluations = 0;
    double best_coarse_value = 0.0;
    std::optional<std::string> warning;

    Direction direction() const { return Direction::from_angles(theta, phi); }
};

struct ScalarOptimum {
    double value = 0.0;
    double argmax = 0.0;
    long n_evaluations = 0;
};

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0; // minimized value
    int iterations = 0;
    long n_evaluations = 0;
    bool converged = false;
};

// Nelder-Mead minimization. Stops when the simplex diameter (infinity norm)
// drops below tol and the spread of vertex values is below value_tol, or
// after max_iters iterations.
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x0, const std::vector<double>& step, double tol,
                          int max_iters, double value_tol = 1e-13);

using SphereObjective = std::function<double(const Direction&)>;

// Coarse scan over (cos theta, phi) plus both poles, then simplex refinement
// from the best n_starts cells. Deterministic for a fixed config.
SphereOptimum optimize_sphere(const SphereObjective& objective, SearchMode mode, const OptimizerConfig& cfg);

// Simplex refinement only, started from the given directions (warm start).
SphereOptimum refine_sphere(const SphereObjective& objective, SearchMode mode, const OptimizerConfig& cfg,
                            const std::vector<Direction>& starts, double step);

struct ScalarDomain {
    double lo;
    double hi;
    bool periodic = false; // objective(lo) == objective(hi); argmax reported in [lo, hi)
};

// Grid scan plus golden-section refinement around the best grid point.
ScalarOptimum maximize_scalar(const std::function<double(double)>& objective, ScalarDomain domain,
                              const OptimizerConfig& cfg);

enum class StateClass { SeparableConsistent, WConsistent, GhzConsistent };

const char* to_string(StateClass c);

struct Classification {
    StateClass label;
    SphereOptimum max_work;
    SphereOptimum min_work;
};

// Reference optima used by the decision rule.
inline constexpr double kGhzMaxWork = 1.0;
inline constexpr double kGhzMinWork = 0.1619;
inline constexpr double kWMaxWork = 7.0 / 9.0;
inline constexpr double kWMinWork = 0.1696;
inline constexpr double kSeparableSlack = 1e-3;

// Promise problem: rho is separable, GHZ-class or W-class. Separable when the
// largest work over z stays at the 1/3 bound; otherwise the larger maximum
// points to GHZ. The minima break ties only when the maxima are inconclusive.
Classification classify_state(const DensityMatrix& rho, const OptimizerConfig& cfg);

} // namespace triwork
