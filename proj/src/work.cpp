#include "triwork/work.hpp"

#include "triwork/errors.hpp"
#include "triwork/parallel.hpp"
#include "triwork/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace triwork {

namespace {

void require_qubits(const DensityMatrix& rho, int n, const char* what) {
    if (rho.n_qubits() != n) {
        throw ShapeError(std::string(what) + " needs a " + std::to_string(n) + "-qubit state");
    }
}

// Conditional entropy of bit `target` given the bits in `cond_mask`, read from
// a full outcome distribution over n bits (bit of site s = n-1-s).
double conditional_entropy_bits(const std::vector<double>& probs, int n, int target, int cond_mask) {
    const int dim = 1 << n;
    const int tbit = 1 << (n - 1 - target);
    // Accumulate p(cond) and p(cond, target=0) keyed by the conditioning bits.
    std::array<double, 8> p_cond{};
    std::array<double, 8> p_zero{};
    for (int b = 0; b < dim; ++b) {
        const int key = b & cond_mask;
        p_cond[key] += probs[b];
        if ((b & tbit) == 0) p_zero[key] += probs[b];
    }
    double h = 0.0;
    for (int key = 0; key < dim; ++key) {
        if ((key & ~cond_mask) != 0) continue;
        if (p_cond[key] < kBranchCutoff) continue;
        h += p_cond[key] * binary_entropy(std::clamp(p_zero[key] / p_cond[key], 0.0, 1.0));
    }
    return h;
}

double frame_work(const DensityMatrix& rho, const MeasurementTriad& t, const Roles& roles,
                  std::array<double, 3>* per_axis = nullptr) {
    const Direction* axes[3] = {&t.x_axis, &t.y_axis, &t.z_axis};
    double total = 0.0;
    for (int a = 0; a < 3; ++a) {
        const SiteDirection measured[] = {{roles.z_measurer, t.z_axis}, {roles.u_measurer, *axes[a]}};
        const double w = 1.0 - conditional_entropy(rho, {roles.extractor, *axes[a]}, measured);
        if (per_axis) (*per_axis)[a] = w;
        total += w;
    }
    return total / 3.0;
}

void check_roles(const Roles& r) {
    const int mask = (1 << index_of(r.z_measurer)) | (1 << index_of(r.u_measurer)) | (1 << index_of(r.extractor));
    if (mask != 0b111) throw ArgumentError("roles must assign three distinct sites");
}

// Orthonormal pair spanning the plane orthogonal to `normal`.
std::pair<Vec3, Vec3> plane_basis(const Direction& normal) {
    const MeasurementTriad t = build_triad(normal, 0.0);
    return {t.x_axis.vector(), t.y_axis.vector()};
}

double tri_symmetric_work(const DensityMatrix& rho, const Direction& d) {
    double total = 0.0;
    for (int s = 0; s < 3; ++s) {
        const Site target = static_cast<Site>(s);
        const SiteDirection others[] = {{static_cast<Site>((s + 1) % 3), d}, {static_cast<Site>((s + 2) % 3), d}};
        total += 1.0 - conditional_entropy(rho, {target, d}, others);
    }
    return total / 3.0;
}

QuadratureEstimate checked_circle_search(const std::function<double(const Direction&)>& f,
                                         const QuadratureConfig& quad, const char* what) {
    quad.validate();
    const auto objective = [&](const Direction& normal) {
        return great_circle_average(f, normal, quad.search_circle_nodes);
    };
    // Restricting to the upper hemisphere is unnecessary: n and -n give the same circle.
    const SphereOptimum best = optimize_sphere(objective, SearchMode::Max, quad.circle_search);
    const Direction normal = best.direction();
    QuadratureEstimate est;
    est.value = great_circle_average(f, normal, quad.circle_nodes);
    est.check_value = great_circle_average(f, normal, 2 * quad.circle_nodes);
    est.nodes = quad.circle_nodes;
    est.circle_normal = normal;
    if (std::abs(est.value - est.check_value) > quad.tol) {
        throw AccuracyError(std::string(what) + " great-circle quadrature not converged", est.value, est.check_value,
                            quad.tol);
    }
    return est;
}

QuadratureEstimate checked_sphere(const std::function<double(const Direction&)>& f, const QuadratureConfig& quad,
                                  const char* what) {
    quad.validate();
    QuadratureEstimate est;
    est.value = sphere_average(f, quad.sphere_theta, quad.sphere_phi);
    est.check_value = sphere_average(f, 2 * quad.sphere_theta, 2 * quad.sphere_phi);
    est.nodes = quad.sphere_theta * quad.sphere_phi;
    if (std::abs(est.value - est.check_value) > quad.tol) {
        throw AccuracyError(std::string(what) + " sphere quadrature not converged", est.value, est.check_value,
                            quad.tol);
    }
    return est;
}

} // namespace

double binary_entropy(double p) {
    if (!(p >= -1e-12 && p <= 1.0 + 1e-12)) {
        throw DomainError("binary_entropy: probability " + std::to_string(p) + " outside [0, 1]");
    }
    p = std::clamp(p, 0.0, 1.0);
    const double q = 1.0 - p;
    double h = 0.0;
    if (p > 0.0) h -= p * std::log2(p);
    if (q > 0.0) h -= q * std::log2(q);
    return h;
}

double conditional_entropy(const DensityMatrix& rho, const SiteDirection& target,
                           std::span<const SiteDirection> measured) {
    const int n = rho.n_qubits();
    std::array<Direction, kMaxQubits> dirs;
    int used = 0;
    int cond_mask = 0;
    auto claim = [&](const SiteDirection& sd) {
        const int s = index_of(sd.site);
        if (s < 0 || s >= n) throw IndexError("conditional_entropy: site out of range");
        if (used & (1 << s)) throw ArgumentError("conditional_entropy: duplicate site");
        used |= 1 << s;
        dirs[static_cast<std::size_t>(s)] = sd.direction;
    };
    claim(target);
    for (const auto& m : measured) {
        claim(m);
        cond_mask |= 1 << (n - 1 - index_of(m.site));
    }
    // Unlisted sites are marginalized; the basis chosen for them is irrelevant.
    const auto probs = outcome_distribution(rho, std::span<const Direction>(dirs.data(), static_cast<std::size_t>(n)));
    return conditional_entropy_bits(probs, n, index_of(target.site), cond_mask);
}

double cond_entropy_tri(const DensityMatrix& rho, const Direction& z, const Direction& u) {
    require_qubits(rho, 3, "cond_entropy_tri");
    const SiteDirection measured[] = {{Site::A, z}, {Site::B, u}};
    return conditional_entropy(rho, {Site::C, u}, measured);
}

double work_zu(const DensityMatrix& rho, const Direction& z, const Direction& u) {
    return std::clamp(1.0 - cond_entropy_tri(rho, z, u), 0.0, 1.0);
}

MeasurementTriad build_triad(const Direction& z, double phi) {
    const Vec3& zv = z.vector();
    Vec3 ref(0.0, 0.0, 1.0);
    if (std::abs(zv.dot(ref)) > 1.0 - 1e-9) ref = Vec3(1.0, 0.0, 0.0);
    const Vec3 x0 = (ref - ref.dot(zv) * zv).normalized();
    const Vec3 y0 = zv.cross(x0);
    const Vec3 x = std::cos(phi) * x0 + std::sin(phi) * y0;
    const Vec3 y = zv.cross(x);
    return {Direction::from_vector(x), Direction::from_vector(y), z, phi};
}

double w_phi(const DensityMatrix& rho, const Direction& z, double phi, const Roles& roles) {
    require_qubits(rho, 3, "w_phi");
    check_roles(roles);
    return frame_work(rho, build_triad(z, phi), roles);
}

WorkReport work_W(const DensityMatrix& rho, const Direction& z, const OptimizerConfig& cfg, const Roles& roles) {
    require_qubits(rho, 3, "work_W");
    check_roles(roles);
    // The three-axis mean has period pi/2 in the frame angle (x -> y, y -> -x).
    const ScalarOptimum best = maximize_scalar([&](double phi) { return w_phi(rho, z, phi, roles); },
                                               {0.0, kPi / 2, true}, cfg);
    WorkReport report;
    report.z_direction = z;
    report.argmax_phi = best.argmax;
    report.w_phi = frame_work(rho, build_triad(z, best.argmax), roles, &report.per_axis_work);
    report.w_max = report.w_phi;
    report.n_evaluations = best.n_evaluations + 1;
    return report;
}

FrameMinimum work_W_frame_min(const DensityMatrix& rho, const Direction& z, const OptimizerConfig& cfg) {
    require_qubits(rho, 3, "work_W_frame_min");
    const ScalarOptimum best =
        maximize_scalar([&](double phi) { return -w_phi(rho, z, phi); }, {0.0, kPi / 2, true}, cfg);
    return {w_phi(rho, z, best.argmax), best.argmax};
}

std::map<Site, double> site_work_profile(const DensityMatrix& rho, const Direction& z, const OptimizerConfig& cfg) {
    require_qubits(rho, 3, "site_work_profile");
    std::map<Site, double> out;
    for (int s = 0; s < 3; ++s) {
        const Site ex = static_cast<Site>(s);
        const Site p = static_cast<Site>((s + 1) % 3);
        const Site q = static_cast<Site>((s + 2) % 3);
        const double a = work_W(rho, z, cfg, {p, q, ex}).w_max;
        const double b = work_W(rho, z, cfg, {q, p, ex}).w_max;
        out[ex] = std::max(a, b);
    }
    return out;
}

double xi_bipartite(const DensityMatrix& rho, const Direction& a, const Direction& b) {
    require_qubits(rho, 2, "xi_bipartite");
    const Direction dirs[] = {a, b};
    const auto probs = outcome_distribution(rho, dirs);
    const double h_a_given_b = conditional_entropy_bits(probs, 2, 0, 0b01);
    const double h_b_given_a = conditional_entropy_bits(probs, 2, 1, 0b10);
    return 1.0 - 0.5 * (h_a_given_b + h_b_given_a);
}

double xi_bipartite(const DensityMatrix& rho, double theta_a, double theta_b) {
    return xi_bipartite(rho, Direction::from_vector(Vec3(std::sin(theta_a), 0.0, std::cos(theta_a))),
                        Direction::from_vector(Vec3(std::sin(theta_b), 0.0, std::cos(theta_b))));
}

void QuadratureConfig::validate() const {
    if (circle_nodes < 4 || search_circle_nodes < 4) throw ArgumentError("circle quadrature needs at least 4 nodes");
    if (sphere_theta < 2 || sphere_phi < 4) throw ArgumentError("sphere quadrature grid too small");
    if (!(tol > 0.0)) throw ArgumentError("quadrature tol must be positive");
    circle_search.validate();
}

double great_circle_average(const std::function<double(const Direction&)>& f, const Direction& normal, int nodes) {
    const auto [e1, e2] = plane_basis(normal);
    const auto ts = periodic_nodes(nodes);
    double total = 0.0;
    for (double t : ts) total += f(Direction::from_vector(std::cos(t) * e1 + std::sin(t) * e2));
    return total / nodes;
}

double sphere_average(const std::function<double(const Direction&)>& f, int n_theta, int n_phi) {
    const GaussLegendre gl = gauss_legendre(n_theta);
    const auto phis = periodic_nodes(n_phi);
    // Rows are independent; sum them in index order for a schedule-free result.
    const auto rows = parallel_map<double>(gl.nodes.size(), [&](std::size_t i) {
        const double c = gl.nodes[i];
        const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        double row = 0.0;
        for (double p : phis) row += f(Direction::from_vector(Vec3(s * std::cos(p), s * std::sin(p), c)));
        return gl.weights[i] * row;
    });
    double total = 0.0;
    for (double r : rows) total += r;
    return total / (2.0 * n_phi);
}

QuadratureEstimate xi_capital(const DensityMatrix& rho, const QuadratureConfig& quad) {
    require_qubits(rho, 2, "xi_capital");
    return checked_circle_search([&](const Direction& d) { return xi_bipartite(rho, d, d); }, quad, "xi_capital");
}

QuadratureEstimate xi_capital_sphere(const DensityMatrix& rho, const QuadratureConfig& quad) {
    require_qubits(rho, 2, "xi_capital_sphere");
    return checked_sphere([&](const Direction& d) { return xi_bipartite(rho, d, d); }, quad, "xi_capital_sphere");
}

QuadratureEstimate xi_capital_tri(const DensityMatrix& rho, const QuadratureConfig& quad) {
    require_qubits(rho, 3, "xi_capital_tri");
    return checked_circle_search([&](const Direction& d) { return tri_symmetric_work(rho, d); }, quad,
                                 "xi_capital_tri");
}

QuadratureEstimate work_W_sphere(const DensityMatrix& rho, const Direction& z, const QuadratureConfig& quad) {
    require_qubits(rho, 3, "work_W_sphere");
    return checked_sphere([&](const Direction& u) { return work_zu(rho, z, u); }, quad, "work_W_sphere");
}

double work_sphere_average(const DensityMatrix& rho, const Direction& z, int n_theta, int n_phi) {
    require_qubits(rho, 3, "work_sphere_average");
    return sphere_average([&](const Direction& u) { return work_zu(rho, z, u); }, n_theta, n_phi);
}

} // namespace triwork
