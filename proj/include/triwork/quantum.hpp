#pragma once

// Dense linear algebra for 1-3 qubit states.
//
// Conventions:
//   * site A is the most significant tensor factor: basis index = 4a + 2b + c
//   * single-qubit Bloch ket cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>
//   * projector(d, s) = (I + (-1)^s d.sigma) / 2, outcome 0 is "along d"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

namespace triwork {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Mat2 = Eigen::Matrix2cd;
using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

inline constexpr double kNormTol = 1e-12;
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = -1e-10;
inline constexpr double kBranchCutoff = 1e-14;
inline constexpr int kMaxQubits = 3;

enum class Site : int { A = 0, B = 1, C = 2 };

inline constexpr int index_of(Site s) { return static_cast<int>(s); }
char site_label(Site s);

// Unit vector on the Bloch sphere. Angles are canonical: theta in [0, pi],
// phi in [0, 2 pi), phi = 0 at the poles.
class Direction {
public:
    Direction() : Direction(from_angles(0.0, 0.0)) {}

    // Any real (theta, phi) is accepted and folded onto the canonical range.
    static Direction from_angles(double theta, double phi);
    // Normalizes v; throws DomainError on the zero vector.
    static Direction from_vector(const Vec3& v);

    static Direction x_axis() { return from_angles(kPi / 2, 0.0); }
    static Direction y_axis() { return from_angles(kPi / 2, kPi / 2); }
    static Direction z_axis() { return from_angles(0.0, 0.0); }

    double theta() const noexcept { return theta_; }
    double phi() const noexcept { return phi_; }
    const Vec3& vector() const noexcept { return vec_; }

    Direction opposite() const { return from_vector(-vec_); }
    double dot(const Direction& o) const noexcept { return vec_.dot(o.vec_); }

private:
    Direction(double theta, double phi, const Vec3& v) : theta_(theta), phi_(phi), vec_(v) {}

    double theta_;
    double phi_;
    Vec3 vec_;
};

class PureState {
public:
    // Throws InvalidArity for n outside {1,2,3}, ShapeError on a length
    // mismatch and InvariantViolation when the norm is not 1.
    PureState(int n_qubits, Vector amplitudes);

    int n_qubits() const noexcept { return n_; }
    int dim() const noexcept { return 1 << n_; }
    const Vector& amplitudes() const noexcept { return amps_; }
    Complex operator[](int i) const { return amps_(i); }

    PureState with_global_phase(double alpha) const;

private:
    int n_;
    Vector amps_;
};

class DensityMatrix {
public:
    // Validates Hermiticity, unit trace and positivity; throws
    // InvariantViolation naming the first invariant that fails.
    DensityMatrix(int n_qubits, Matrix m);

    static DensityMatrix maximally_mixed(int n_qubits);

    int n_qubits() const noexcept { return n_; }
    int dim() const noexcept { return 1 << n_; }
    const Matrix& matrix() const noexcept { return m_; }
    Complex operator()(int r, int c) const { return m_(r, c); }

    double purity() const;
    Eigen::VectorXd eigenvalues() const;

private:
    struct Unchecked {};
    DensityMatrix(int n_qubits, Matrix m, Unchecked) : n_(n_qubits), m_(std::move(m)) {}
    friend DensityMatrix dm_from_pure(const PureState&);

    int n_;
    Matrix m_;
};

struct Projector {
    Direction direction;
    int outcome = 0;
    Mat2 matrix;
};

struct SiteProjector {
    Site site;
    Projector projector;
};

struct SiteDirection {
    Site site;
    Direction direction;
};

struct WeightedState {
    double weight;
    DensityMatrix state;
};

struct BranchState {
    double probability;
    DensityMatrix state;
};

PureState ghz_state();
PureState w_state();
PureState bell_singlet();
PureState basis_state(int n_qubits, int index);
PureState product_state(std::span<const Direction> dirs);
PureState product_state(std::initializer_list<Direction> dirs);

DensityMatrix dm_from_pure(const PureState& psi);
DensityMatrix mix(std::span<const WeightedState> components);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

Vector bloch_ket(const Direction& d);
Mat2 pauli_dot(const Vec3& n);
Projector projector(const Direction& d, int outcome);
Matrix embed(const Mat2& op, Site site, int n_qubits);

double joint_prob(const DensityMatrix& rho, std::span<const SiteProjector> assignments);
BranchState conditional_state(const DensityMatrix& rho, std::span<const SiteProjector> assignments);
DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<Site> keep);

// Full outcome distribution when every site is measured along dirs[site].
// Entry b is the probability of the bit string b (site A most significant).
std::vector<double> outcome_distribution(const DensityMatrix& rho, std::span<const Direction> dirs);

} // namespace triwork
