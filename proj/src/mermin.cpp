#include "triwork/mermin.hpp"

#include "triwork/errors.hpp"
#include "triwork/parallel.hpp"

#include <cmath>

namespace triwork {

namespace {

Matrix kron3(const Mat2& a, const Mat2& b, const Mat2& c) {
    Matrix out(8, 8);
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
            out(i, j) = a(i >> 2, j >> 2) * b((i >> 1) & 1, (j >> 1) & 1) * c(i & 1, j & 1);
        }
    }
    return out;
}

// Additive recurrence with generalized golden ratios (phi_d: x^{d+1} = x + 1),
// offset by a seed-derived shift; consecutive points fill [0,1)^d evenly.
std::array<double, 12> low_discrepancy_point(std::size_t k, std::uint64_t seed) {
    double g = 2.0;
    for (int i = 0; i < 50; ++i) g = std::pow(1.0 + g, 1.0 / 13.0);
    std::array<double, 12> x{};
    std::uint64_t state = seed;
    double alpha = 1.0;
    for (std::size_t d = 0; d < 12; ++d) {
        alpha /= g;
        // splitmix64 step for the per-dimension shift
        state += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        z ^= z >> 31;
        const double shift = static_cast<double>(z >> 11) * 0x1.0p-53;
        const double v = shift + alpha * static_cast<double>(k + 1);
        x[d] = v - std::floor(v);
    }
    return x;
}

} // namespace

MerminSettings MerminSettings::from_angles(const std::array<double, 12>& a) {
    auto d = [&](int k) { return Direction::from_angles(a[2 * k], a[2 * k + 1]); };
    return {d(0), d(1), d(2), d(3), d(4), d(5)};
}

std::array<double, 12> MerminSettings::angles() const {
    const Direction* ds[] = {&a1, &a1p, &a2, &a2p, &a3, &a3p};
    std::array<double, 12> out{};
    for (int k = 0; k < 6; ++k) {
        out[2 * k] = ds[k]->theta();
        out[2 * k + 1] = ds[k]->phi();
    }
    return out;
}

MerminSettings ghz_optimal_settings() {
    const Direction x = Direction::x_axis();
    const Direction y = Direction::y_axis();
    return {x, y, x, y, y.opposite(), x};
}

Matrix mermin_operator(const MerminSettings& s) {
    const Mat2 s1 = pauli_dot(s.a1.vector());
    const Mat2 s1p = pauli_dot(s.a1p.vector());
    const Mat2 s2 = pauli_dot(s.a2.vector());
    const Mat2 s2p = pauli_dot(s.a2p.vector());
    const Mat2 s3 = pauli_dot(s.a3.vector());
    const Mat2 s3p = pauli_dot(s.a3p.vector());
    Matrix b = kron3(s1, s2p, s3) + kron3(s1p, s2, s3) + kron3(s1, s2, s3p) - kron3(s1p, s2p, s3p);
    return 0.5 * (b + b.adjoint());
}

double mermin_expectation(const DensityMatrix& rho, const MerminSettings& s) {
    if (rho.n_qubits() != 3) throw ShapeError("mermin_expectation needs a 3-qubit state");
    const Complex v = (rho.matrix() * mermin_operator(s)).trace();
    if (std::abs(v.imag()) >= 1e-10) {
        throw NumericalIntegrityError("Tr(rho B3) has imaginary part " + std::to_string(v.imag()));
    }
    return v.real();
}

MerminOptimum max_mermin(const DensityMatrix& rho, const MerminSearchConfig& cfg) {
    if (rho.n_qubits() != 3) throw ShapeError("max_mermin needs a 3-qubit state");
    if (cfg.n_starts < 1) throw ArgumentError("max_mermin: n_starts must be positive");
    auto f = [&](const std::vector<double>& x) {
        std::array<double, 12> a{};
        std::copy(x.begin(), x.end(), a.begin());
        return -mermin_expectation(rho, MerminSettings::from_angles(a));
    };

    struct Run {
        SimplexResult best;
        long evals = 0;
        bool converged = true;
    };
    auto runs = parallel_map<Run>(static_cast<std::size_t>(cfg.n_starts), [&](std::size_t k) {
        const auto u = low_discrepancy_point(k, cfg.seed);
        std::vector<double> x0(12);
        for (int i = 0; i < 6; ++i) {
            x0[2 * i] = std::acos(1.0 - 2.0 * u[2 * i]);
            x0[2 * i + 1] = kTwoPi * u[2 * i + 1];
        }
        Run run;
        std::vector<double> step(12, 0.5);
        for (int r = 0; r <= cfg.restarts; ++r) {
            SimplexResult res = nelder_mead(f, x0, step, cfg.simplex_tol, cfg.max_iters);
            run.evals += res.n_evaluations;
            const bool improved = r == 0 || res.value < run.best.value - 1e-12;
            if (r == 0 || res.value < run.best.value) run.best = res;
            run.converged = res.converged;
            if (!improved) break;
            x0 = run.best.x;
            std::fill(step.begin(), step.end(), 0.05);
        }
        return run;
    });

    MerminOptimum out;
    std::size_t best = 0;
    bool all_converged = true;
    for (std::size_t k = 0; k < runs.size(); ++k) {
        out.n_evaluations += runs[k].evals;
        all_converged = all_converged && runs[k].converged;
        if (runs[k].best.value < runs[best].best.value) best = k;
    }
    std::array<double, 12> a{};
    std::copy(runs[best].best.x.begin(), runs[best].best.x.end(), a.begin());
    out.settings = MerminSettings::from_angles(a);
    out.value = mermin_expectation(rho, out.settings);
    if (!all_converged) out.warning = "simplex hit max_iters before simplex_tol";
    return out;
}

} // namespace triwork
