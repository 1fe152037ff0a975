#include "triwork/optimize.hpp"

#include "triwork/errors.hpp"
#include "triwork/parallel.hpp"
#include "triwork/work.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace triwork {

void OptimizerConfig::validate() const {
    if (n_theta < 8 || n_phi < 8) throw ArgumentError("coarse grid must be at least 8x8");
    if (!(simplex_tol > 0.0)) throw ArgumentError("simplex_tol must be positive");
    if (n_starts < 1) throw ArgumentError("n_starts must be at least 1");
    if (max_iters < 1) throw ArgumentError("max_iters must be at least 1");
    if (scalar_grid < 4) throw ArgumentError("scalar_grid must be at least 4");
    if (!(scalar_tol > 0.0)) throw ArgumentError("scalar_tol must be positive");
}

const char* to_string(SearchMode mode) { return mode == SearchMode::Max ? "max" : "min"; }

const char* to_string(StateClass c) {
    switch (c) {
    case StateClass::SeparableConsistent: return "SEPARABLE-CONSISTENT";
    case StateClass::WConsistent: return "W-CONSISTENT";
    case StateClass::GhzConsistent: return "GHZ-CONSISTENT";
    }
    return "?";
}

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                          const std::vector<double>& step, double tol, int max_iters, double value_tol) {
    const std::size_t n = x0.size();
    if (step.size() != n) throw ShapeError("nelder_mead: step size mismatch");

    std::vector<std::vector<double>> pts(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step[i];
    std::vector<double> vals(n + 1);
    long evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        return f(x);
    };
    for (std::size_t i = 0; i <= n; ++i) vals[i] = eval(pts[i]);

    std::vector<std::size_t> order(n + 1);
    SimplexResult res;
    int it = 0;
    for (; it < max_iters; ++it) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        const auto& best = pts[order.front()];

        double diameter = 0.0;
        for (std::size_t k = 1; k <= n; ++k) {
            for (std::size_t d = 0; d < n; ++d) {
                diameter = std::max(diameter, std::abs(pts[order[k]][d] - best[d]));
            }
        }
        const double spread = vals[order.back()] - vals[order.front()];
        if (diameter < tol || (spread <= value_tol && diameter < std::sqrt(tol))) {
            res.converged = true;
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t d = 0; d < n; ++d) centroid[d] += pts[order[k]][d] / static_cast<double>(n);
        }
        const std::size_t worst = order.back();
        auto along = [&](double t) {
            std::vector<double> x(n);
            for (std::size_t d = 0; d < n; ++d) x[d] = centroid[d] + t * (pts[worst][d] - centroid[d]);
            return x;
        };

        auto xr = along(-1.0);
        const double fr = eval(xr);
        if (fr < vals[order.front()]) {
            auto xe = along(-2.0);
            const double fe = eval(xe);
            if (fe < fr) {
                pts[worst] = std::move(xe);
                vals[worst] = fe;
            } else {
                pts[worst] = std::move(xr);
                vals[worst] = fr;
            }
            continue;
        }
        if (fr < vals[order[n - 1]]) {
            pts[worst] = std::move(xr);
            vals[worst] = fr;
            continue;
        }
        const bool outside = fr < vals[worst];
        auto xc = along(outside ? -0.5 : 0.5);
        const double fc = eval(xc);
        if (fc < (outside ? fr : vals[worst])) {
            pts[worst] = std::move(xc);
            vals[worst] = fc;
            continue;
        }
        // Shrink toward the best vertex.
        const auto anchor = pts[order.front()];
        for (std::size_t k = 1; k <= n; ++k) {
            auto& p = pts[order[k]];
            for (std::size_t d = 0; d < n; ++d) p[d] = anchor[d] + 0.5 * (p[d] - anchor[d]);
            vals[order[k]] = eval(p);
        }
    }
    const auto best_it = std::min_element(vals.begin(), vals.end());
    res.x = pts[static_cast<std::size_t>(best_it - vals.begin())];
    res.value = *best_it;
    res.iterations = it;
    res.n_evaluations = evals;
    return res;
}

namespace {

struct Candidate {
    double theta;
    double phi;
    double value;
    int cell; // -1 / -2 for the north / south pole
};

// Larger is better after sign adjustment.
double score(double v, SearchMode mode) { return mode == SearchMode::Max ? v : -v; }

SphereOptimum refine_from(const SphereObjective& objective, SearchMode mode, const OptimizerConfig& cfg,
                          const std::vector<std::pair<double, double>>& starts, double step_theta, double step_phi,
                          double best_coarse, long coarse_evals) {
    struct Refined {
        SimplexResult simplex;
    };
    auto refined = parallel_map<Refined>(starts.size(), [&](std::size_t k) {
        auto f = [&](const std::vector<double>& x) {
            return -score(objective(Direction::from_angles(x[0], x[1])), mode);
        };
        return Refined{nelder_mead(f, {starts[k].first, starts[k].second}, {step_theta, step_phi}, cfg.simplex_tol,
                                   cfg.max_iters)};
    });

    SphereOptimum out;
    out.mode = mode;
    out.best_coarse_value = best_coarse;
    out.n_evaluations = coarse_evals;
    bool all_converged = true;
    std::size_t best = 0;
    for (std::size_t k = 0; k < refined.size(); ++k) {
        out.n_evaluations += refined[k].simplex.n_evaluations;
        all_converged = all_converged && refined[k].simplex.converged;
        if (refined[k].simplex.value < refined[best].simplex.value) best = k;
    }

    Direction dir = Direction::from_angles(refined[best].simplex.x[0], refined[best].simplex.x[1]);
    double value = objective(dir);
    ++out.n_evaluations;
    if (score(value, mode) < score(best_coarse, mode)) {
        // Refinement must never lose to the coarse scan; fall back to the
        // start that produced the coarse optimum (always starts[0]).
        dir = Direction::from_angles(starts.front().first, starts.front().second);
        value = objective(dir);
        ++out.n_evaluations;
    }
    if (std::sin(dir.theta()) < cfg.simplex_tol) {
        // Within the simplex resolution of a pole: report the pole itself
        // (phi = 0) unless that costs more than rounding noise.
        const Direction pole = Direction::from_angles(dir.theta() < kPi / 2 ? 0.0 : kPi, 0.0);
        const double pole_value = objective(pole);
        ++out.n_evaluations;
        if (score(pole_value, mode) >= score(value, mode) - 1e-12) {
            dir = pole;
            value = pole_value;
        }
    }
    out.value = value;
    out.theta = dir.theta();
    out.phi = dir.phi();
    if (!all_converged) {
        out.warning = "simplex refinement hit max_iters (" + std::to_string(cfg.max_iters) +
                      ") before reaching simplex_tol";
    }
    return out;
}

} // namespace

SphereOptimum optimize_sphere(const SphereObjective& objective, SearchMode mode, const OptimizerConfig& cfg) {
    cfg.validate();
    const int nt = cfg.n_theta;
    const int np = cfg.n_phi;
    const std::size_t cells = static_cast<std::size_t>(nt) * static_cast<std::size_t>(np);

    auto coarse = parallel_map<Candidate>(cells + 2, [&](std::size_t k) {
        if (k >= cells) {
            const double theta = k == cells ? 0.0 : kPi;
            return Candidate{theta, 0.0, objective(Direction::from_angles(theta, 0.0)), k == cells ? -1 : -2};
        }
        const int i = static_cast<int>(k) / np;
        const int j = static_cast<int>(k) % np;
        const double theta = std::acos(1.0 - (2.0 * i + 1.0) / nt);
        const double phi = kTwoPi * j / np;
        return Candidate{theta, phi, objective(Direction::from_angles(theta, phi)), static_cast<int>(k)};
    });

    std::vector<std::size_t> order(coarse.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return score(coarse[a].value, mode) > score(coarse[b].value, mode);
    });

    // Pick the best cells, skipping grid neighbours of cells already chosen so
    // the starts sample distinct basins.
    auto adjacent = [&](const Candidate& a, const Candidate& b) {
        if (a.cell < 0 || b.cell < 0) return a.cell == b.cell;
        const int di = std::abs(a.cell / np - b.cell / np);
        int dj = std::abs(a.cell % np - b.cell % np);
        dj = std::min(dj, np - dj);
        return di <= 1 && dj <= 1;
    };
    std::vector<std::pair<double, double>> starts;
    std::vector<std::size_t> chosen;
    for (std::size_t idx : order) {
        if (static_cast<int>(chosen.size()) >= cfg.n_starts) break;
        const bool near = std::any_of(chosen.begin(), chosen.end(),
                                      [&](std::size_t c) { return adjacent(coarse[c], coarse[idx]); });
        if (near && !chosen.empty()) continue;
        chosen.push_back(idx);
        starts.emplace_back(coarse[idx].theta, coarse[idx].phi);
    }

    const double step_theta = kPi / nt;
    const double step_phi = kTwoPi / np;
    return refine_from(objective, mode, cfg, starts, step_theta, step_phi, coarse[order.front()].value,
                       static_cast<long>(coarse.size()));
}

SphereOptimum refine_sphere(const SphereObjective& objective, SearchMode mode, const OptimizerConfig& cfg,
                            const std::vector<Direction>& starts, double step) {
    cfg.validate();
    if (starts.empty()) throw ArgumentError("refine_sphere needs at least one start");
    std::vector<double> vals;
    for (const auto& d : starts) vals.push_back(objective(d));
    std::size_t best = 0;
    for (std::size_t k = 1; k < vals.size(); ++k) {
        if (score(vals[k], mode) > score(vals[best], mode)) best = k;
    }
    std::vector<std::pair<double, double>> pts{{starts[best].theta(), starts[best].phi()}};
    for (std::size_t k = 0; k < starts.size(); ++k) {
        if (k != best) pts.emplace_back(starts[k].theta(), starts[k].phi());
    }
    return refine_from(objective, mode, cfg, pts, step, step, vals[best], static_cast<long>(starts.size()));
}

ScalarOptimum maximize_scalar(const std::function<double(double)>& objective, ScalarDomain domain,
                              const OptimizerConfig& cfg) {
    cfg.validate();
    if (!(domain.hi > domain.lo)) throw ArgumentError("maximize_scalar: empty domain");
    const int n = cfg.scalar_grid;
    const double width = domain.hi - domain.lo;
    const double h = width / n;

    ScalarOptimum out;
    out.argmax = domain.lo;
    out.value = objective(domain.lo);
    out.n_evaluations = 1;
    // Closed domains also probe the right end so boundary maxima are seen.
    const int last = domain.periodic ? n - 1 : n;
    for (int k = 1; k <= last; ++k) {
        const double x = domain.lo + k * h;
        const double v = objective(x);
        ++out.n_evaluations;
        if (v > out.value) {
            out.value = v;
            out.argmax = x;
        }
    }

    double a = out.argmax - h;
    double b = out.argmax + h;
    if (!domain.periodic) {
        a = std::max(a, domain.lo);
        b = std::min(b, domain.hi);
    }
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = objective(c);
    double fd = objective(d);
    out.n_evaluations += 2;
    while (b - a > cfg.scalar_tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = objective(d);
        }
        ++out.n_evaluations;
    }
    const double xm = 0.5 * (a + b);
    const double fm = objective(xm);
    ++out.n_evaluations;
    if (fm > out.value) {
        out.value = fm;
        out.argmax = xm;
    }
    if (domain.periodic) {
        out.argmax = domain.lo + std::fmod(std::fmod(out.argmax - domain.lo, width) + width, width);
    }
    return out;
}

Classification classify_state(const DensityMatrix& rho, const OptimizerConfig& cfg) {
    auto max_obj = [&](const Direction& z) { return work_W(rho, z, cfg).w_max; };
    auto min_obj = [&](const Direction& z) { return work_W_frame_min(rho, z, cfg).value; };
    SphereOptimum hi = optimize_sphere(max_obj, SearchMode::Max, cfg);
    if (hi.value <= 1.0 / 3.0 + kSeparableSlack) {
        return {StateClass::SeparableConsistent, hi, SphereOptimum{}};
    }
    SphereOptimum lo = optimize_sphere(min_obj, SearchMode::Min, cfg);

    const double max_mid = 0.5 * (kGhzMaxWork + kWMaxWork);
    const double min_mid = 0.5 * (kGhzMinWork + kWMinWork);
    StateClass label;
    if (std::abs(hi.value - max_mid) > 0.02) {
        label = hi.value > max_mid ? StateClass::GhzConsistent : StateClass::WConsistent;
    } else {
        label = lo.value < min_mid ? StateClass::GhzConsistent : StateClass::WConsistent;
    }
    return {label, hi, lo};
}

} // namespace triwork
