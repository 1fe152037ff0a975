#pragma once

// Werner-type (isotropic) families p |psi><psi| + (1-p) I/8 and the mixing
// thresholds at which each separability criterion starts to be violated.

#include "triwork/mermin.hpp"
#include "triwork/optimize.hpp"
#include "triwork/work.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace triwork {

enum class Family { Ghz, W };
enum class Criterion { Thermo3, ThermoSphere, Mermin };

struct WernerFamily {
    Family base = Family::Ghz;
    std::string description;

    static WernerFamily ghz() { return {Family::Ghz, "ghz-werner"}; }
    static WernerFamily w() { return {Family::W, "w-werner"}; }
};

const char* to_string(Family f);
const char* to_string(Criterion c);
Family parse_family(const std::string& s);
Criterion parse_criterion(const std::string& s);

PureState base_state(const WernerFamily& family);
DensityMatrix werner_state(const WernerFamily& family, double p);

struct ThresholdConfig {
    double tol = 5e-4;
    OptimizerConfig optimizer;
    QuadratureConfig quadrature;
    MerminSearchConfig mermin;
    int sphere_search_theta = 24; // sphere-average resolution while searching z
    int sphere_search_phi = 48;
    double monotonicity_noise = 1e-6;
    int monotonicity_samples = 5;
};

struct Margin {
    double value = 0.0; // positive <=> the criterion is violated
    double objective = 0.0;
    double bound = 0.0;
    std::optional<Direction> argmax_z;
    std::optional<std::string> warning;
};

// The separable maximum of the z-fixed sphere average, derived once by
// optimizing over product states and cached per quadrature resolution.
struct SphereBound {
    double value = 0.0;
    double check_value = 0.0;
    Direction argmax;
    std::string derivation;
};

const SphereBound& separable_sphere_bound(const ThresholdConfig& cfg);

// max_z W - 1/3, max_z W_sphere - separable sphere bound, or max <B3> - 2.
Margin violation_objective(const WernerFamily& family, double p, Criterion criterion, const ThresholdConfig& cfg);

struct ThresholdResult {
    WernerFamily family;
    Criterion criterion = Criterion::Thermo3;
    double p_star = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    double tol = 0.0;
    double objective_at_star = 0.0; // criterion value (not the margin) at p_star
    double bound = 0.0;
    std::optional<Direction> argmax_z;
    std::vector<std::string> warnings;
};

// Bisection on p. Requires margin(0) < 0 < margin(1) (NoThresholdError) and
// non-decreasing margins at interior samples (MonotonicityError).
ThresholdResult find_threshold(const WernerFamily& family, Criterion criterion, const ThresholdConfig& cfg);

struct TableRow {
    WernerFamily family;
    std::string criterion; // thermo3 | thermo-sphere | mermin | distillability
    std::optional<ThresholdResult> result;
    std::optional<double> reference_value;
    std::string source; // computed | external

    std::optional<double> abs_error() const;
};

inline constexpr double kReferenceGhzThermo3 = 0.6521;
inline constexpr double kReferenceWThermo3 = 0.6981;
inline constexpr double kReferenceGhzMermin = 0.5;
inline constexpr double kReferenceWMermin = 0.6566;
inline constexpr double kReferenceGhzSphere = 0.8392;
inline constexpr double kReferenceWSphere = 0.9057;
inline constexpr double kDistillableGhz = 0.3226; // literature value, never computed
inline constexpr double kTableTolerance = 5e-3;

std::optional<double> reference_threshold(Family f, Criterion c);

// Four Table I cells, optionally the two sphere-averaged cells, and the
// external distillability reference row.
std::vector<TableRow> table1(const ThresholdConfig& cfg, bool include_sphere = true);

nlohmann::json to_json(const ThresholdResult& r, std::optional<double> reference_value, const std::string& source);
nlohmann::json to_json(const TableRow& row);
std::string table_to_csv(const std::vector<TableRow>& rows);

} // namespace triwork
