#pragma once

// Entropy and extractable-work functionals. Work is in bits (kT ln 2 = 1):
// a qubit whose outcome along u has distribution (p, 1-p) yields 1 - H(p).

#include "triwork/optimize.hpp"
#include "triwork/quantum.hpp"

#include <array>
#include <map>
#include <optional>
#include <span>

namespace triwork {

double binary_entropy(double p);

// H(target outcome | outcomes of the measured sites), every site measured
// along the given directions. Branches below kBranchCutoff contribute 0.
double conditional_entropy(const DensityMatrix& rho, const SiteDirection& target,
                           std::span<const SiteDirection> measured);

// H(C(u) | A(z), B(u)) for a 3-qubit state.
double cond_entropy_tri(const DensityMatrix& rho, const Direction& z, const Direction& u);

// 1 - H(C(u) | A(z), B(u)).
double work_zu(const DensityMatrix& rho, const Direction& z, const Direction& u);

struct MeasurementTriad {
    Direction x_axis;
    Direction y_axis;
    Direction z_axis;
    double frame_angle_phi = 0.0;
};

// x(0) is the global z axis projected orthogonally to z (global x when z is
// within 1e-9 of the poles); x(phi) is x(0) rotated about z by phi, y = z cross x.
MeasurementTriad build_triad(const Direction& z, double phi);

// Which site plays which role in the three-axis protocol. The default is the
// fixed-role protocol: Alice measures along z, Bob along u, Charlie extracts.
struct Roles {
    Site z_measurer = Site::A;
    Site u_measurer = Site::B;
    Site extractor = Site::C;
};

// (1/3) sum over u in {x(phi), y(phi), z} of the work along u.
double w_phi(const DensityMatrix& rho, const Direction& z, double phi, const Roles& roles = {});

enum class Axis { X = 0, Y = 1, Z = 2 };

struct WorkReport {
    Direction z_direction;
    std::array<double, 3> per_axis_work{}; // indexed by Axis
    double w_phi = 0.0;                    // at argmax_phi
    double w_max = 0.0;
    double argmax_phi = 0.0;
    long n_evaluations = 0;

    double axis(Axis a) const { return per_axis_work[static_cast<std::size_t>(a)]; }
};

// max over the frame angle phi in [0, pi/2) of w_phi.
WorkReport work_W(const DensityMatrix& rho, const Direction& z, const OptimizerConfig& cfg,
                  const Roles& roles = {});

struct FrameMinimum {
    double value = 0.0;
    double argmin_phi = 0.0;
};

// min over the frame angle of w_phi; the worst-case frame for a given z.
FrameMinimum work_W_frame_min(const DensityMatrix& rho, const Direction& z, const OptimizerConfig& cfg);

// For each site acting as extractor, the frame-maximized work with the other
// two sites measuring along z and u. Both assignments of the two measuring
// roles are tried and the larger value is kept.
std::map<Site, double> site_work_profile(const DensityMatrix& rho, const Direction& z, const OptimizerConfig& cfg);

// 1 - (H(A(a)|B(b)) + H(B(b)|A(a))) / 2 for a two-qubit state.
double xi_bipartite(const DensityMatrix& rho, const Direction& a, const Direction& b);
// Angles on the x-z great circle: direction (sin t, 0, cos t).
double xi_bipartite(const DensityMatrix& rho, double theta_a, double theta_b);

struct QuadratureConfig {
    int circle_nodes = 720;  // checked against 2x nodes
    int sphere_theta = 64;   // Gauss-Legendre nodes in cos(theta); checked at 2x
    int sphere_phi = 128;    // uniform nodes in phi; checked at 2x
    double tol = 1e-5;       // max |coarse - fine| before AccuracyError
    int search_circle_nodes = 120; // resolution used while searching circle normals
    OptimizerConfig circle_search{.n_theta = 8, .n_phi = 16, .n_starts = 3, .simplex_tol = 1e-6};

    void validate() const;
};

struct QuadratureEstimate {
    double value = 0.0;       // at the default resolution
    double check_value = 0.0; // at doubled resolution
    int nodes = 0;            // total nodes at the default resolution
    std::optional<Direction> circle_normal; // maximizing great circle, when one was searched
};

// Uniform average of f over the great circle with the given normal.
double great_circle_average(const std::function<double(const Direction&)>& f, const Direction& normal, int nodes);
// Area-uniform sphere average of f (Gauss-Legendre in cos theta x uniform phi).
double sphere_average(const std::function<double(const Direction&)>& f, int n_theta, int n_phi);

// Great-circle average of xi(d, d), maximized over the circle orientation.
QuadratureEstimate xi_capital(const DensityMatrix& rho, const QuadratureConfig& quad);
// Sphere average of xi(d, d).
QuadratureEstimate xi_capital_sphere(const DensityMatrix& rho, const QuadratureConfig& quad);
// Tripartite great-circle criterion: per-site 1 - H(site(d) | other two (d)),
// averaged over the three sites and the maximizing great circle.
QuadratureEstimate xi_capital_tri(const DensityMatrix& rho, const QuadratureConfig& quad);

// Sphere average over u of work_zu(rho, z, u), z fixed.
QuadratureEstimate work_W_sphere(const DensityMatrix& rho, const Direction& z, const QuadratureConfig& quad);
// Unchecked variant at an explicit resolution (used inside searches).
double work_sphere_average(const DensityMatrix& rho, const Direction& z, int n_theta, int n_phi);

} // namespace triwork
