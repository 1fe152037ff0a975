#include "triwork/quantum.hpp"

#include "triwork/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace triwork {

namespace {

void check_qubits(int n) {
    if (n < 1 || n > kMaxQubits) {
        throw InvalidArity("qubit count must be 1, 2 or 3 (got " + std::to_string(n) + ")");
    }
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Vector kron(const Vector& a, const Vector& b) {
    Vector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

void check_sites(std::span<const SiteProjector> assignments, int n) {
    int seen = 0;
    for (const auto& a : assignments) {
        const int s = index_of(a.site);
        if (s < 0 || s >= n) {
            throw IndexError("site " + std::string(1, site_label(a.site)) + " out of range for " +
                             std::to_string(n) + " qubits");
        }
        if (seen & (1 << s)) {
            throw ArgumentError("duplicate site " + std::string(1, site_label(a.site)));
        }
        seen |= 1 << s;
    }
}

Matrix projected_operator(std::span<const SiteProjector> assignments, int n) {
    Matrix op = Matrix::Identity(1 << n, 1 << n);
    for (const auto& a : assignments) {
        op = op * embed(a.projector.matrix, a.site, n);
    }
    return op;
}

} // namespace

char site_label(Site s) { return static_cast<char>('A' + index_of(s)); }

Direction Direction::from_angles(double theta, double phi) {
    const Vec3 v(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
    if (theta >= 0.0 && theta <= kPi) {
        double p = std::fmod(phi, kTwoPi);
        if (p < 0) p += kTwoPi;
        if (p >= kTwoPi) p = 0.0;
        if (theta == 0.0 || theta == kPi) p = 0.0;
        return {theta, p, Vec3(std::sin(theta) * std::cos(p), std::sin(theta) * std::sin(p), std::cos(theta))};
    }
    return from_vector(v);
}

Direction Direction::from_vector(const Vec3& v) {
    const double norm = v.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw DomainError("direction vector must be finite and non-zero");
    }
    const Vec3 u = v / norm;
    const double theta = std::acos(std::clamp(u.z(), -1.0, 1.0));
    double phi = 0.0;
    if (std::hypot(u.x(), u.y()) > 0.0) {
        phi = std::atan2(u.y(), u.x());
        if (phi < 0) phi += kTwoPi;
        if (phi >= kTwoPi) phi = 0.0;
    }
    return {theta, phi, Vec3(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta))};
}

PureState::PureState(int n_qubits, Vector amplitudes) : n_(n_qubits), amps_(std::move(amplitudes)) {
    check_qubits(n_);
    if (amps_.size() != (Eigen::Index{1} << n_)) {
        throw ShapeError("amplitude vector length " + std::to_string(amps_.size()) + " != 2^" +
                         std::to_string(n_));
    }
    const double dev = std::abs(amps_.squaredNorm() - 1.0);
    if (dev > kNormTol) {
        throw InvariantViolation("unit norm", "|<psi|psi> - 1| = " + fmt(dev));
    }
}

PureState PureState::with_global_phase(double alpha) const {
    return {n_, Vector(amps_ * std::polar(1.0, alpha))};
}

DensityMatrix::DensityMatrix(int n_qubits, Matrix m) : n_(n_qubits), m_(std::move(m)) {
    check_qubits(n_);
    const int d = 1 << n_;
    if (m_.rows() != d || m_.cols() != d) {
        throw ShapeError("density matrix must be " + std::to_string(d) + "x" + std::to_string(d));
    }
    if (!m_.allFinite()) {
        throw InvariantViolation("finite entries", "matrix contains NaN or Inf");
    }
    const double herm = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > kHermitianTol) {
        throw InvariantViolation("hermitian", "max |M - M^dagger| = " + fmt(herm));
    }
    const double tr = std::abs(m_.trace() - Complex(1.0, 0.0));
    if (tr > kTraceTol) {
        throw InvariantViolation("unit trace", "|Tr M - 1| = " + fmt(tr));
    }
    const double min_eig = eigenvalues().minCoeff();
    if (min_eig < kPsdTol) {
        throw InvariantViolation("positive semidefinite", "min eigenvalue = " + fmt(min_eig));
    }
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
    check_qubits(n_qubits);
    const int d = 1 << n_qubits;
    return {n_qubits, Matrix(Matrix::Identity(d, d) / static_cast<double>(d))};
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

Eigen::VectorXd DensityMatrix::eigenvalues() const {
    // Solver reads the lower triangle only; symmetrize so tiny asymmetries
    // do not bias the spectrum.
    const Matrix h = 0.5 * (m_ + m_.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

PureState ghz_state() {
    Vector v = Vector::Zero(8);
    v(0) = v(7) = 1.0 / std::sqrt(2.0);
    return {3, v};
}

PureState w_state() {
    Vector v = Vector::Zero(8);
    v(1) = v(2) = v(4) = 1.0 / std::sqrt(3.0);
    return {3, v};
}

PureState bell_singlet() {
    Vector v = Vector::Zero(4);
    v(1) = 1.0 / std::sqrt(2.0);
    v(2) = -1.0 / std::sqrt(2.0);
    return {2, v};
}

PureState basis_state(int n_qubits, int index) {
    check_qubits(n_qubits);
    if (index < 0 || index >= (1 << n_qubits)) {
        throw IndexError("basis index " + std::to_string(index) + " out of range");
    }
    Vector v = Vector::Zero(1 << n_qubits);
    v(index) = 1.0;
    return {n_qubits, v};
}

Vector bloch_ket(const Direction& d) {
    Vector v(2);
    v(0) = std::cos(d.theta() / 2);
    v(1) = std::polar(std::sin(d.theta() / 2), d.phi());
    return v;
}

PureState product_state(std::span<const Direction> dirs) {
    if (dirs.empty() || dirs.size() > static_cast<std::size_t>(kMaxQubits)) {
        throw InvalidArity("product_state takes 1 to 3 directions (got " + std::to_string(dirs.size()) + ")");
    }
    Vector v = bloch_ket(dirs[0]);
    for (std::size_t i = 1; i < dirs.size(); ++i) v = kron(v, bloch_ket(dirs[i]));
    // Renormalize away the last ulp so the norm invariant holds at 1e-12.
    v /= v.norm();
    return {static_cast<int>(dirs.size()), v};
}

PureState product_state(std::initializer_list<Direction> dirs) {
    return product_state(std::span<const Direction>(dirs.begin(), dirs.size()));
}

DensityMatrix dm_from_pure(const PureState& psi) {
    Matrix m = psi.amplitudes() * psi.amplitudes().adjoint();
    m = 0.5 * (m + m.adjoint());
    return {psi.n_qubits(), std::move(m), DensityMatrix::Unchecked{}};
}

DensityMatrix mix(std::span<const WeightedState> components) {
    if (components.empty()) throw NormalizationError("mixture has no components");
    const int n = components.front().state.n_qubits();
    double total = 0.0;
    for (const auto& c : components) {
        if (c.weight < 0.0) throw NormalizationError("negative mixture weight " + std::to_string(c.weight));
        if (c.state.n_qubits() != n) throw ShapeError("mixture components have different qubit counts");
        total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-10) {
        throw NormalizationError("mixture weights sum to " + std::to_string(total));
    }
    Matrix m = Matrix::Zero(1 << n, 1 << n);
    for (const auto& c : components) m += c.weight * c.state.matrix();
    return {n, std::move(m)};
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    const int n = a.n_qubits() + b.n_qubits();
    check_qubits(n);
    return {n, kron(a.matrix(), b.matrix())};
}

Mat2 pauli_dot(const Vec3& n) {
    Mat2 m;
    m << Complex(n.z(), 0), Complex(n.x(), -n.y()), Complex(n.x(), n.y()), Complex(-n.z(), 0);
    return m;
}

Projector projector(const Direction& d, int outcome) {
    if (outcome != 0 && outcome != 1) throw ArgumentError("projector outcome must be 0 or 1");
    const double s = outcome == 0 ? 1.0 : -1.0;
    Mat2 p = 0.5 * (Mat2::Identity() + s * pauli_dot(d.vector()));
    return {d, outcome, p};
}

Matrix embed(const Mat2& op, Site site, int n_qubits) {
    check_qubits(n_qubits);
    const int s = index_of(site);
    if (s < 0 || s >= n_qubits) {
        throw IndexError("site " + std::string(1, site_label(site)) + " out of range for " +
                         std::to_string(n_qubits) + " qubits");
    }
    Matrix out = Matrix::Identity(1, 1);
    for (int k = 0; k < n_qubits; ++k) {
        out = kron(out, k == s ? Matrix(op) : Matrix(Matrix::Identity(2, 2)));
    }
    return out;
}

double joint_prob(const DensityMatrix& rho, std::span<const SiteProjector> assignments) {
    check_sites(assignments, rho.n_qubits());
    const double p = (rho.matrix() * projected_operator(assignments, rho.n_qubits())).trace().real();
    return std::clamp(p, 0.0, 1.0);
}

BranchState conditional_state(const DensityMatrix& rho, std::span<const SiteProjector> assignments) {
    const int n = rho.n_qubits();
    check_sites(assignments, n);
    if (assignments.size() >= static_cast<std::size_t>(n)) {
        throw ArgumentError("conditional_state needs at least one unmeasured site");
    }
    const Matrix op = projected_operator(assignments, n);
    const double p = std::clamp((rho.matrix() * op).trace().real(), 0.0, 1.0);
    if (p < kBranchCutoff) throw ZeroProbabilityBranch(p);

    Matrix projected = op * rho.matrix() * op.adjoint() / p;
    projected = 0.5 * (projected + projected.adjoint());
    projected /= projected.trace().real();

    std::vector<Site> keep;
    for (int s = 0; s < n; ++s) {
        const bool measured = std::any_of(assignments.begin(), assignments.end(),
                                          [s](const SiteProjector& a) { return index_of(a.site) == s; });
        if (!measured) keep.push_back(static_cast<Site>(s));
    }
    return {p, partial_trace(DensityMatrix(n, std::move(projected)), keep)};
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<Site> keep) {
    const int n = rho.n_qubits();
    if (keep.empty()) throw ArgumentError("partial_trace: keep set is empty");
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    for (Site s : keep) {
        if (index_of(s) < 0 || index_of(s) >= n) throw IndexError("partial_trace: site out of range");
    }
    const int k = static_cast<int>(keep.size());
    if (k == n) return rho;

    std::vector<Site> traced;
    for (int s = 0; s < n; ++s) {
        if (std::find(keep.begin(), keep.end(), static_cast<Site>(s)) == keep.end()) {
            traced.push_back(static_cast<Site>(s));
        }
    }
    auto compose = [n](std::span<const Site> kept, int kept_bits, std::span<const Site> rest, int rest_bits) {
        int idx = 0;
        const int nk = static_cast<int>(kept.size());
        const int nr = static_cast<int>(rest.size());
        for (int i = 0; i < nk; ++i) {
            idx |= ((kept_bits >> (nk - 1 - i)) & 1) << (n - 1 - index_of(kept[i]));
        }
        for (int i = 0; i < nr; ++i) {
            idx |= ((rest_bits >> (nr - 1 - i)) & 1) << (n - 1 - index_of(rest[i]));
        }
        return idx;
    };

    const int dk = 1 << k;
    const int dt = 1 << (n - k);
    Matrix out = Matrix::Zero(dk, dk);
    for (int r = 0; r < dk; ++r) {
        for (int c = 0; c < dk; ++c) {
            Complex acc = 0.0;
            for (int t = 0; t < dt; ++t) {
                acc += rho(compose(keep, r, traced, t), compose(keep, c, traced, t));
            }
            out(r, c) = acc;
        }
    }
    out = 0.5 * (out + out.adjoint());
    return {k, std::move(out)};
}

std::vector<double> outcome_distribution(const DensityMatrix& rho, std::span<const Direction> dirs) {
    const int n = rho.n_qubits();
    if (dirs.size() != static_cast<std::size_t>(n)) {
        throw ShapeError("outcome_distribution needs one direction per qubit");
    }
    // Columns of the local basis change are the outcome-0 and outcome-1 kets.
    Matrix basis = Matrix::Identity(1, 1);
    for (const auto& d : dirs) {
        Matrix u(2, 2);
        u.col(0) = bloch_ket(d);
        u.col(1) = bloch_ket(d.opposite());
        basis = kron(basis, u);
    }
    const int dim = 1 << n;
    const Matrix rotated = rho.matrix() * basis;
    std::vector<double> probs(dim);
    for (int b = 0; b < dim; ++b) {
        probs[b] = std::max(0.0, basis.col(b).dot(rotated.col(b)).real());
    }
    return probs;
}

} // namespace triwork
