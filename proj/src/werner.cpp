#include "triwork/werner.hpp"

#include "triwork/errors.hpp"
#include "triwork/format.hpp"
#include "triwork/parallel.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace triwork {

const char* to_string(Family f) { return f == Family::Ghz ? "ghz-werner" : "w-werner"; }

const char* to_string(Criterion c) {
    switch (c) {
    case Criterion::Thermo3: return "thermo3";
    case Criterion::ThermoSphere: return "thermo-sphere";
    case Criterion::Mermin: return "mermin";
    }
    return "?";
}

Family parse_family(const std::string& s) {
    if (s == "ghz-werner" || s == "ghz") return Family::Ghz;
    if (s == "w-werner" || s == "w") return Family::W;
    throw ArgumentError("unknown family '" + s + "' (expected ghz-werner or w-werner)");
}

Criterion parse_criterion(const std::string& s) {
    if (s == "thermo3") return Criterion::Thermo3;
    if (s == "thermo-sphere") return Criterion::ThermoSphere;
    if (s == "mermin") return Criterion::Mermin;
    throw ArgumentError("unknown criterion '" + s + "' (expected thermo3, thermo-sphere or mermin)");
}

PureState base_state(const WernerFamily& family) { return family.base == Family::Ghz ? ghz_state() : w_state(); }

DensityMatrix werner_state(const WernerFamily& family, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("mixing probability " + std::to_string(p) + " outside [0, 1]");
    const WeightedState parts[] = {{p, dm_from_pure(base_state(family))},
                                   {1.0 - p, DensityMatrix::maximally_mixed(3)}};
    return mix(parts);
}

const SphereBound& separable_sphere_bound(const ThresholdConfig& cfg) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::unique_ptr<SphereBound>> cache;
    const auto key = std::make_pair(cfg.quadrature.sphere_theta, cfg.quadrature.sphere_phi);
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return *it->second;

    // For a product state only Charlie's factor matters; A and B sit at |0>
    // and z is the global z axis. Search Charlie's Bloch direction.
    const Direction zero = Direction::z_axis();
    auto product = [&](const Direction& c) { return dm_from_pure(product_state({zero, zero, c})); };
    OptimizerConfig search = cfg.optimizer;
    search.n_theta = 8;
    search.n_phi = 16;
    search.n_starts = 2;
    search.simplex_tol = 1e-5;
    const SphereOptimum best = optimize_sphere(
        [&](const Direction& c) {
            return work_sphere_average(product(c), zero, cfg.sphere_search_theta, cfg.sphere_search_phi);
        },
        SearchMode::Max, search);
    const QuadratureEstimate est = work_W_sphere(product(best.direction()), zero, cfg.quadrature);

    auto bound = std::make_unique<SphereBound>();
    bound->value = est.value;
    bound->check_value = est.check_value;
    bound->argmax = best.direction();
    std::ostringstream os;
    os << "max over product states |0,0,c> of the z-fixed sphere average; c* = (" << best.theta << ", "
       << best.phi << "), " << cfg.quadrature.sphere_theta << "x" << cfg.quadrature.sphere_phi << " nodes";
    bound->derivation = os.str();
    return *cache.emplace(key, std::move(bound)).first->second;
}

namespace {

double criterion_bound(Criterion c, const ThresholdConfig& cfg) {
    switch (c) {
    case Criterion::Thermo3: return 1.0 / 3.0;
    case Criterion::ThermoSphere: return separable_sphere_bound(cfg).value;
    case Criterion::Mermin: return 2.0;
    }
    return 0.0;
}

SphereObjective z_objective(const DensityMatrix& rho, Criterion c, const ThresholdConfig& cfg) {
    if (c == Criterion::Thermo3) {
        return [&rho, &cfg](const Direction& z) { return work_W(rho, z, cfg.optimizer).w_max; };
    }
    return [&rho, &cfg](const Direction& z) {
        return work_sphere_average(rho, z, cfg.sphere_search_theta, cfg.sphere_search_phi);
    };
}

// Margin with an optional warm start: refine only from the given directions.
Margin evaluate(const WernerFamily& family, double p, Criterion criterion, const ThresholdConfig& cfg,
                const std::vector<Direction>* warm) {
    const DensityMatrix rho = werner_state(family, p);
    Margin m;
    m.bound = criterion_bound(criterion, cfg);
    if (criterion == Criterion::Mermin) {
        const MerminOptimum opt = max_mermin(rho, cfg.mermin);
        m.objective = opt.value;
        m.warning = opt.warning;
    } else {
        const SphereObjective f = z_objective(rho, criterion, cfg);
        const SphereOptimum opt = warm ? refine_sphere(f, SearchMode::Max, cfg.optimizer, *warm, 0.05)
                                       : optimize_sphere(f, SearchMode::Max, cfg.optimizer);
        m.objective = opt.value;
        m.argmax_z = opt.direction();
        m.warning = opt.warning;
    }
    m.value = m.objective - m.bound;
    return m;
}

} // namespace

Margin violation_objective(const WernerFamily& family, double p, Criterion criterion, const ThresholdConfig& cfg) {
    return evaluate(family, p, criterion, cfg, nullptr);
}

ThresholdResult find_threshold(const WernerFamily& family, Criterion criterion, const ThresholdConfig& cfg) {
    if (!(cfg.tol > 0.0 && cfg.tol < 1.0)) throw ArgumentError("threshold tol must be in (0, 1)");
    ThresholdResult out;
    out.family = family;
    out.criterion = criterion;
    out.tol = cfg.tol;
    auto note = [&](const Margin& m) {
        if (m.warning && out.warnings.size() < 8) out.warnings.push_back(*m.warning);
    };

    const Margin at0 = violation_objective(family, 0.0, criterion, cfg);
    const Margin at1 = violation_objective(family, 1.0, criterion, cfg);
    note(at0);
    note(at1);
    if (!(at0.value < 0.0 && at1.value > 0.0)) {
        std::ostringstream os;
        os << to_string(criterion) << " on " << family.description << ": margin(0) = " << at0.value
           << ", margin(1) = " << at1.value << "; no sign change to bisect";
        throw NoThresholdError(os.str());
    }

    // Interior samples double as the monotonicity spot-check and a tighter
    // starting bracket.
    const int k = cfg.monotonicity_samples;
    std::vector<double> ps{0.0};
    std::vector<Margin> ms{at0};
    for (int i = 1; i <= k; ++i) {
        ps.push_back(static_cast<double>(i) / (k + 1));
        ms.push_back(violation_objective(family, ps.back(), criterion, cfg));
        note(ms.back());
    }
    ps.push_back(1.0);
    ms.push_back(at1);
    for (std::size_t i = 1; i < ms.size(); ++i) {
        if (ms[i].value < ms[i - 1].value - cfg.monotonicity_noise) {
            std::ostringstream os;
            os << "margin decreases from " << ms[i - 1].value << " at p=" << ps[i - 1] << " to " << ms[i].value
               << " at p=" << ps[i] << "; bisection unsound";
            throw MonotonicityError(os.str());
        }
    }
    std::size_t first_pos = 1;
    while (ms[first_pos].value <= 0.0) ++first_pos;
    double lo = ps[first_pos - 1];
    double hi = ps[first_pos];
    Margin at_hi = ms[first_pos];

    // Warm-started bisection; the argmax drifts continuously with p. A final
    // cold search at both bracket ends guards against a missed optimum.
    for (int attempt = 0; attempt < 3; ++attempt) {
        std::vector<Direction> warm;
        if (at_hi.argmax_z) warm.push_back(*at_hi.argmax_z);
        while (hi - lo > cfg.tol) {
            const double mid = 0.5 * (lo + hi);
            const Margin m = evaluate(family, mid, criterion, cfg, warm.empty() ? nullptr : &warm);
            note(m);
            if (m.value > 0.0) {
                hi = mid;
                at_hi = m;
            } else {
                lo = mid;
            }
            if (m.argmax_z) warm = {*m.argmax_z};
        }
        if (criterion == Criterion::Mermin) break;
        const Margin cold_lo = violation_objective(family, lo, criterion, cfg);
        note(cold_lo);
        if (cold_lo.value > 0.0) {
            // Warm search missed the optimum below lo; resume from the
            // previous sample point with the new upper end.
            hi = lo;
            at_hi = cold_lo;
            lo = ps[first_pos - 1];
            continue;
        }
        at_hi = violation_objective(family, hi, criterion, cfg);
        note(at_hi);
        break;
    }

    out.p_star = hi;
    out.bracket_lo = lo;
    out.bracket_hi = hi;
    out.argmax_z = at_hi.argmax_z;
    out.bound = at_hi.bound;
    out.objective_at_star = at_hi.objective;
    if (criterion == Criterion::ThermoSphere && at_hi.argmax_z) {
        // Report the criterion value at full, convergence-checked resolution.
        out.objective_at_star = work_W_sphere(werner_state(family, hi), *at_hi.argmax_z, cfg.quadrature).value;
    }
    return out;
}

std::optional<double> TableRow::abs_error() const {
    if (!result || !reference_value) return std::nullopt;
    return std::abs(result->p_star - *reference_value);
}

std::optional<double> reference_threshold(Family f, Criterion c) {
    const bool ghz = f == Family::Ghz;
    switch (c) {
    case Criterion::Thermo3: return ghz ? kReferenceGhzThermo3 : kReferenceWThermo3;
    case Criterion::Mermin: return ghz ? kReferenceGhzMermin : kReferenceWMermin;
    case Criterion::ThermoSphere: return ghz ? kReferenceGhzSphere : kReferenceWSphere;
    }
    return std::nullopt;
}

std::vector<TableRow> table1(const ThresholdConfig& cfg, bool include_sphere) {
    std::vector<std::pair<WernerFamily, Criterion>> cells = {
        {WernerFamily::ghz(), Criterion::Thermo3},
        {WernerFamily::ghz(), Criterion::Mermin},
        {WernerFamily::w(), Criterion::Thermo3},
        {WernerFamily::w(), Criterion::Mermin},
    };
    if (include_sphere) {
        cells.emplace_back(WernerFamily::ghz(), Criterion::ThermoSphere);
        cells.emplace_back(WernerFamily::w(), Criterion::ThermoSphere);
        // Computing the cached bound up front keeps the cells independent.
        separable_sphere_bound(cfg);
    }
    auto results = parallel_map<ThresholdResult>(
        cells.size(), [&](std::size_t i) { return find_threshold(cells[i].first, cells[i].second, cfg); });

    std::vector<TableRow> rows;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        rows.push_back({cells[i].first, to_string(cells[i].second), results[i],
                        reference_threshold(cells[i].first.base, cells[i].second), "computed"});
    }
    rows.push_back({WernerFamily::ghz(), "distillability", std::nullopt, kDistillableGhz, "external"});
    return rows;
}

nlohmann::json to_json(const ThresholdResult& r, std::optional<double> reference_value, const std::string& source) {
    nlohmann::json j;
    j["family"] = r.family.description;
    j["criterion"] = to_string(r.criterion);
    j["p_star"] = r.p_star;
    j["bracket"] = {r.bracket_lo, r.bracket_hi};
    j["tol"] = r.tol;
    j["paper_value"] = reference_value ? nlohmann::json(*reference_value) : nlohmann::json(nullptr);
    j["source"] = source;
    return j;
}

nlohmann::json to_json(const TableRow& row) {
    nlohmann::json j;
    if (row.result) {
        j = to_json(*row.result, row.reference_value, row.source);
        j["objective_at_star"] = row.result->objective_at_star;
        j["bound"] = row.result->bound;
    } else {
        j["family"] = row.family.description;
        j["criterion"] = row.criterion;
        j["p_star"] = nullptr;
        j["bracket"] = nullptr;
        j["tol"] = nullptr;
        j["paper_value"] = row.reference_value ? nlohmann::json(*row.reference_value) : nlohmann::json(nullptr);
        j["source"] = row.source;
    }
    const auto err = row.abs_error();
    j["abs_error"] = err ? nlohmann::json(*err) : nlohmann::json(nullptr);
    return j;
}

std::string table_to_csv(const std::vector<TableRow>& rows) {
    std::ostringstream os;
    os << "family,criterion,p_star,bracket_lo,bracket_hi,paper_value,abs_error,source\n";
    auto opt = [](std::optional<double> v) { return v ? format_number(*v) : std::string(); };
    for (const auto& r : rows) {
        os << r.family.description << ',' << r.criterion << ',';
        if (r.result) {
            os << format_number(r.result->p_star) << ',' << format_number(r.result->bracket_lo) << ','
               << format_number(r.result->bracket_hi);
        } else {
            os << ",,";
        }
        os << ',' << opt(r.reference_value) << ',' << opt(r.abs_error()) << ',' << r.source << '\n';
    }
    return os.str();
}

} // namespace triwork
