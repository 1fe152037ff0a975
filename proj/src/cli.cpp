#include "triwork/cli.hpp"

#include "triwork/errors.hpp"
#include "triwork/format.hpp"
#include "triwork/mermin.hpp"
#include "triwork/optimize.hpp"
#include "triwork/parallel.hpp"
#include "triwork/protocol.hpp"
#include "triwork/state_io.hpp"
#include "triwork/werner.hpp"
#include "triwork/work.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

namespace triwork {

nlohmann::json RunManifest::to_json() const {
    return {{"command", command},
            {"config_hash", config_hash},
            {"tool_version", tool_version},
            {"wall_time", wall_time},
            {"results", results}};
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string config_hash(const nlohmann::json& inputs) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(inputs.dump())));
    return buf;
}

namespace {

struct CommandOutput {
    nlohmann::json inputs;
    nlohmann::json results;
    std::string text;
    int exit_code = kExitOk;
};

double parse_double(const std::string& s, const std::string& what) {
    double v = 0.0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw ArgumentError("cannot parse " + what + " '" + s + "' as a number");
    return v;
}

Direction parse_direction(const std::string& s, bool degrees, const std::string& what) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw ArgumentError(what + " must be THETA,PHI (got '" + s + "')");
    double theta = parse_double(s.substr(0, comma), what + " theta");
    double phi = parse_double(s.substr(comma + 1), what + " phi");
    if (degrees) {
        theta *= kPi / 180.0;
        phi *= kPi / 180.0;
    }
    return Direction::from_angles(theta, phi);
}

nlohmann::json direction_json(const Direction& d) { return {{"theta", d.theta()}, {"phi", d.phi()}}; }

nlohmann::json optimum_json(const SphereOptimum& o) {
    nlohmann::json j{{"value", o.value},
                     {"theta", o.theta},
                     {"phi", o.phi},
                     {"mode", to_string(o.mode)},
                     {"n_evaluations", o.n_evaluations},
                     {"best_coarse_value", o.best_coarse_value}};
    j["warning"] = o.warning ? nlohmann::json(*o.warning) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json work_report_json(const WorkReport& r) {
    return {{"z", direction_json(r.z_direction)},
            {"per_axis_work", {{"x", r.axis(Axis::X)}, {"y", r.axis(Axis::Y)}, {"z", r.axis(Axis::Z)}}},
            {"w_phi", r.w_phi},
            {"w_max", r.w_max},
            {"argmax_phi", r.argmax_phi}};
}

std::ofstream open_output(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    return f;
}

// ---- commands --------------------------------------------------------------

struct BoundOptions {
    bool sphere = false;
    int resolution = 0; // 0: library default
};

CommandOutput cmd_bipartite_bound(const BoundOptions& o) {
    CommandOutput c;
    QuadratureConfig quad;
    if (o.resolution > 0) {
        if (o.sphere) {
            quad.sphere_theta = o.resolution;
            quad.sphere_phi = 2 * o.resolution;
        } else {
            quad.circle_nodes = o.resolution;
        }
    }
    quad.validate();
    c.inputs = {{"sphere", o.sphere},
                {"circle_nodes", quad.circle_nodes},
                {"sphere_theta", quad.sphere_theta},
                {"sphere_phi", quad.sphere_phi},
                {"tol", quad.tol}};
    const auto rho = dm_from_pure(basis_state(2, 0));
    double value = 0.0;
    double check = 0.0;
    int nodes = 0;
    bool converged = true;
    try {
        const auto est = o.sphere ? xi_capital_sphere(rho, quad) : xi_capital(rho, quad);
        value = est.value;
        check = est.check_value;
        nodes = est.nodes;
    } catch (const AccuracyError& e) {
        value = e.coarse();
        check = e.fine();
        nodes = o.sphere ? quad.sphere_theta * quad.sphere_phi : quad.circle_nodes;
        converged = false;
        c.exit_code = kExitAccuracy;
    }
    c.results = {{"quantity", o.sphere ? "xi_sphere" : "xi_great_circle"},
                 {"state", "|00>"},
                 {"value", value},
                 {"check_value", check},
                 {"abs_diff", std::abs(value - check)},
                 {"tol", quad.tol},
                 {"nodes", nodes},
                 {"converged", converged}};
    std::ostringstream t;
    t << (o.sphere ? "Xi_BS(|00>) = " : "Xi(|00>) = ") << format_number(value) << "  (check " << format_number(check)
      << " at 2x nodes, |diff| " << format_number(std::abs(value - check)) << ", tol " << format_number(quad.tol)
      << ")\n";
    if (!converged) t << "warning: quadrature not converged at " << nodes << " nodes\n";
    c.text = t.str();
    return c;
}

struct WorkOptions {
    std::string state = "ghz";
    std::string z = "0,0";
    bool degrees = false;
};

CommandOutput cmd_work(const WorkOptions& o) {
    CommandOutput c;
    const auto rho = resolve_state(o.state);
    if (rho.n_qubits() != 3) throw ShapeError("work needs a 3-qubit state");
    const Direction z = parse_direction(o.z, o.degrees, "--z");
    const OptimizerConfig cfg;
    c.inputs = {{"state", o.state}, {"z", direction_json(z)}, {"scalar_grid", cfg.scalar_grid},
                {"scalar_tol", cfg.scalar_tol}};
    const WorkReport r = work_W(rho, z, cfg);
    c.results = work_report_json(r);
    std::ostringstream t;
    t << "z = (" << format_number(z.theta()) << ", " << format_number(z.phi()) << ")\n"
      << "work along x, y, z at argmax phi: " << format_number(r.axis(Axis::X)) << ", "
      << format_number(r.axis(Axis::Y)) << ", " << format_number(r.axis(Axis::Z)) << "\n"
      << "W = " << format_number(r.w_max) << " at phi = " << format_number(r.argmax_phi) << "\n";
    c.text = t.str();
    return c;
}

struct ScanOptions {
    std::string state = "ghz";
    std::string mode = "max";
    std::string grid = "32x64";
    std::string out;
};

CommandOutput cmd_scan(const ScanOptions& o) {
    CommandOutput c;
    std::unique_ptr<std::ofstream> csv;
    if (!o.out.empty()) csv = std::make_unique<std::ofstream>(open_output(o.out));
    const auto rho = resolve_state(o.state);
    if (rho.n_qubits() != 3) throw ShapeError("scan needs a 3-qubit state");
    if (o.mode != "max" && o.mode != "min") throw ArgumentError("--mode must be max or min");
    const SearchMode mode = o.mode == "max" ? SearchMode::Max : SearchMode::Min;
    const auto x = o.grid.find('x');
    if (x == std::string::npos) throw ArgumentError("--grid must be TxP (got '" + o.grid + "')");
    OptimizerConfig cfg;
    cfg.n_theta = static_cast<int>(parse_double(o.grid.substr(0, x), "--grid"));
    cfg.n_phi = static_cast<int>(parse_double(o.grid.substr(x + 1), "--grid"));
    cfg.validate();
    c.inputs = {{"state", o.state}, {"mode", o.mode}, {"n_theta", cfg.n_theta}, {"n_phi", cfg.n_phi},
                {"n_starts", cfg.n_starts}, {"simplex_tol", cfg.simplex_tol}, {"seed", cfg.seed}};

    const SphereObjective objective = [&](const Direction& z) {
        return mode == SearchMode::Max ? work_W(rho, z, cfg).w_max : work_W_frame_min(rho, z, cfg).value;
    };
    const SphereOptimum best = optimize_sphere(objective, mode, cfg);
    c.results = optimum_json(best);
    if (csv) {
        // Cell centres, uniform in cos(theta).
        const std::size_t cells = static_cast<std::size_t>(cfg.n_theta) * static_cast<std::size_t>(cfg.n_phi);
        const auto values = parallel_map<double>(cells, [&](std::size_t k) {
            const int i = static_cast<int>(k) / cfg.n_phi;
            const int jj = static_cast<int>(k) % cfg.n_phi;
            const double theta = std::acos(1.0 - 2.0 * (i + 0.5) / cfg.n_theta);
            const double phi = kTwoPi * (jj + 0.5) / cfg.n_phi;
            return objective(Direction::from_angles(theta, phi));
        });
        *csv << "theta,phi,W\n";
        for (std::size_t k = 0; k < cells; ++k) {
            const int i = static_cast<int>(k) / cfg.n_phi;
            const int jj = static_cast<int>(k) % cfg.n_phi;
            *csv << format_number(std::acos(1.0 - 2.0 * (i + 0.5) / cfg.n_theta)) << ','
                 << format_number(kTwoPi * (jj + 0.5) / cfg.n_phi) << ',' << format_number(values[k]) << '\n';
        }
        if (!*csv) throw IoError("write failed for '" + o.out + "'");
    }
    std::ostringstream t;
    t << o.mode << " W = " << format_number(best.value) << " at theta = " << format_number(best.theta)
      << ", phi = " << format_number(best.phi) << " (" << best.n_evaluations << " evaluations)\n";
    if (best.warning) t << "warning: " << *best.warning << "\n";
    c.text = t.str();
    return c;
}

struct ThresholdOptions {
    std::string family = "ghz-werner";
    std::string criterion = "thermo3";
    double tol = 5e-4;
};

std::string describe_row(const TableRow& row) {
    std::ostringstream t;
    t << row.family.description << "  " << row.criterion << "  ";
    if (row.result) {
        t << "p* = " << format_number(row.result->p_star) << "  [" << format_number(row.result->bracket_lo) << ", "
          << format_number(row.result->bracket_hi) << "]";
    } else {
        t << "p* = (not computed)";
    }
    if (row.reference_value) t << "  reference " << format_number(*row.reference_value);
    if (const auto e = row.abs_error()) t << "  |diff| " << format_number(*e);
    t << "  (" << row.source << ")\n";
    if (row.result) {
        for (const auto& w : row.result->warnings) t << "  warning: " << w << "\n";
    }
    return t.str();
}

CommandOutput cmd_threshold(const ThresholdOptions& o) {
    CommandOutput c;
    const Family fam = parse_family(o.family);
    const Criterion crit = parse_criterion(o.criterion);
    ThresholdConfig cfg;
    cfg.tol = o.tol;
    c.inputs = {{"family", to_string(fam)}, {"criterion", to_string(crit)}, {"tol", cfg.tol},
                {"seed", cfg.optimizer.seed}, {"n_theta", cfg.optimizer.n_theta}, {"n_phi", cfg.optimizer.n_phi}};
    const WernerFamily family = fam == Family::Ghz ? WernerFamily::ghz() : WernerFamily::w();
    const ThresholdResult r = find_threshold(family, crit, cfg);
    const auto reference = reference_threshold(fam, crit);
    c.results = to_json(r, reference, "computed");
    TableRow row{family, to_string(crit), r, reference, "computed"};
    c.text = describe_row(row);
    return c;
}

struct TableOptions {
    bool csv = false;
    bool no_sphere = false;
};

CommandOutput cmd_table1(const TableOptions& o) {
    CommandOutput c;
    const ThresholdConfig cfg;
    c.inputs = {{"include_sphere", !o.no_sphere}, {"tol", cfg.tol}, {"seed", cfg.optimizer.seed}};
    const auto rows = table1(cfg, !o.no_sphere);
    c.results = nlohmann::json::array();
    std::string text;
    for (const auto& row : rows) {
        c.results.push_back(to_json(row));
        text += describe_row(row);
        if (const auto e = row.abs_error(); e && row.source == "computed" && *e > kTableTolerance) {
            c.exit_code = kExitAccuracy;
        }
    }
    c.text = o.csv ? table_to_csv(rows) : text;
    return c;
}

struct SimulateOptions {
    std::string state;
    std::string z = "1.5707963267948966,0";
    std::string u = "1.5707963267948966,0";
    bool degrees = false;
    long shots = 100000;
    std::uint64_t seed = 1;
    std::string transcript;
    bool bipartite = false;
    bool sequential = false;
    bool miller_madow = false;
};

CommandOutput cmd_simulate(const SimulateOptions& o) {
    CommandOutput c;
    const std::string state = o.state.empty() ? (o.bipartite ? "singlet" : "ghz") : o.state;
    ProtocolRunConfig cfg{resolve_state(state), parse_direction(o.z, o.degrees, "--z"),
                          parse_direction(o.u, o.degrees, "--u")};
    cfg.shots = o.shots;
    cfg.seed = o.seed;
    cfg.mode = o.sequential ? SamplingMode::SequentialCollapse : SamplingMode::ExactJoint;
    cfg.miller_madow = o.miller_madow;
    c.inputs = {{"state", state}, {"z", direction_json(cfg.z)}, {"u", direction_json(cfg.u)},
                {"shots", cfg.shots}, {"seed", cfg.seed}, {"protocol", o.bipartite ? "bipartite" : "tripartite"},
                {"sampling", o.sequential ? "sequential" : "exact"}, {"miller_madow", o.miller_madow}};
    if (o.bipartite && (o.shots < 2 || o.shots % 2 != 0)) {
        throw PreconditionError("bipartite protocol needs an even, positive number of shots (got " +
                                std::to_string(o.shots) + ")");
    }
    std::unique_ptr<std::ofstream> transcript;
    if (!o.transcript.empty()) transcript = std::make_unique<std::ofstream>(open_output(o.transcript));
    const ProtocolEstimate e =
        o.bipartite ? simulate_bipartite(cfg, transcript.get()) : simulate_tripartite(cfg, transcript.get());
    if (transcript && !*transcript) throw IoError("write failed for '" + o.transcript + "'");
    nlohmann::json counts = nlohmann::json::array();
    for (const auto& [key, n] : e.branch_counts) counts.push_back({{"i", key.first}, {"j", key.second}, {"count", n}});
    c.results = {{"empirical_work", e.empirical_work}, {"analytic_work", e.analytic_work},
                 {"abs_error", e.abs_error},           {"shots", e.shots},
                 {"seed", cfg.seed},                   {"branch_counts", counts}};
    std::ostringstream t;
    t << "empirical work " << format_number(e.empirical_work) << ", analytic " << format_number(e.analytic_work)
      << ", |diff| " << format_number(e.abs_error) << " over " << e.shots << " shots\n";
    c.text = t.str();
    return c;
}

struct ClassifyOptions {
    std::string state;
};

CommandOutput cmd_classify(const ClassifyOptions& o) {
    CommandOutput c;
    const auto rho = resolve_state(o.state);
    if (rho.n_qubits() != 3) throw ShapeError("classify needs a 3-qubit state");
    const OptimizerConfig cfg;
    c.inputs = {{"state", o.state}, {"n_theta", cfg.n_theta}, {"n_phi", cfg.n_phi}, {"seed", cfg.seed}};
    const Classification r = classify_state(rho, cfg);
    c.results = {{"label", to_string(r.label)},
                 {"max_work", optimum_json(r.max_work)},
                 {"min_work", optimum_json(r.min_work)}};
    c.text = std::string(to_string(r.label)) + "  (max W " + format_number(r.max_work.value) + ", min W " +
             format_number(r.min_work.value) + ")\n";
    return c;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const AccuracyError*>(&e) || dynamic_cast<const NumericalIntegrityError*>(&e)) {
        return kExitAccuracy;
    }
    if (dynamic_cast<const IoError*>(&e)) return kExitIo;
    if (dynamic_cast<const PreconditionError*>(&e) || dynamic_cast<const NoThresholdError*>(&e) ||
        dynamic_cast<const MonotonicityError*>(&e)) {
        return kExitPrecondition;
    }
    return kExitInput;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Thermodynamic work-extraction criteria for three-qubit entanglement", "triwork"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);
    bool json = false;
    std::string manifest_path;
    app.add_flag("--json", json, "Emit the results payload as JSON");
    app.add_option("--manifest", manifest_path, "Also write a run manifest (JSON) to this path");

    BoundOptions bound;
    auto* sub_bound = app.add_subcommand("bipartite-bound", "Great-circle (or sphere) bound for |00>");
    sub_bound->add_flag("--sphere", bound.sphere, "Average over the whole sphere");
    sub_bound->add_option("--resolution", bound.resolution, "Quadrature nodes (theta nodes with --sphere)")
        ->check(CLI::PositiveNumber);

    WorkOptions work;
    auto* sub_work = app.add_subcommand("work", "Three-axis work report for one z");
    sub_work->add_option("--state", work.state, "ghz | w | product | mixed | FILE");
    sub_work->add_option("--z", work.z, "THETA,PHI in radians");
    sub_work->add_flag("--degrees", work.degrees, "Angles in degrees");

    ScanOptions scan;
    auto* sub_scan = app.add_subcommand("scan", "Optimize the work over z");
    sub_scan->add_option("--state", scan.state, "ghz | w | product | mixed | FILE");
    sub_scan->add_option("--mode", scan.mode, "max | min");
    sub_scan->add_option("--grid", scan.grid, "Coarse grid TxP");
    sub_scan->add_option("--out", scan.out, "CSV of (theta, phi, W) on the grid");

    ThresholdOptions thr;
    auto* sub_thr = app.add_subcommand("threshold", "Mixing threshold for one family and criterion");
    sub_thr->add_option("--family", thr.family, "ghz-werner | w-werner");
    sub_thr->add_option("--criterion", thr.criterion, "thermo3 | thermo-sphere | mermin");
    sub_thr->add_option("--tol", thr.tol, "Bisection width")->check(CLI::PositiveNumber);

    TableOptions tab;
    auto* sub_tab = app.add_subcommand("table1", "All thresholds with reference values");
    sub_tab->add_flag("--csv", tab.csv, "CSV instead of text");
    sub_tab->add_flag("--no-sphere", tab.no_sphere, "Skip the slow sphere-averaged cells");
    sub_tab->add_flag("--json", json, "Emit JSON");

    SimulateOptions sim;
    auto* sub_sim = app.add_subcommand("simulate", "Monte Carlo run of the extraction protocol");
    sub_sim->add_option("--state", sim.state, "ghz | w | product | mixed | singlet | zero2 | FILE");
    sub_sim->add_option("--z", sim.z, "THETA,PHI: z-measurer axis (Alice's axis with --bipartite)");
    sub_sim->add_option("--u", sim.u, "THETA,PHI: measurement and extraction axis (Bob's with --bipartite)");
    sub_sim->add_flag("--degrees", sim.degrees, "Angles in degrees");
    sub_sim->add_option("--shots", sim.shots, "Number of shots")->check(CLI::PositiveNumber);
    sub_sim->add_option("--seed", sim.seed, "RNG seed");
    sub_sim->add_option("--transcript", sim.transcript, "JSON-lines per-shot transcript");
    sub_sim->add_flag("--bipartite", sim.bipartite, "Two-qubit role-exchange protocol");
    sub_sim->add_flag("--sequential", sim.sequential, "Sample by sequential collapse");
    sub_sim->add_flag("--miller-madow", sim.miller_madow, "Bias-corrected entropy estimate");

    ClassifyOptions cls;
    auto* sub_cls = app.add_subcommand("classify", "Separable / GHZ / W discrimination");
    sub_cls->add_option("--state", cls.state, "ghz | w | product | mixed | FILE")->required();

    for (auto* sub : {sub_bound, sub_work, sub_scan, sub_thr, sub_sim, sub_cls}) {
        sub->add_flag("--json", json, "Emit JSON");
    }
    for (auto* sub : {sub_bound, sub_work, sub_scan, sub_thr, sub_tab, sub_sim, sub_cls}) {
        sub->add_option("--manifest", manifest_path, "Also write a run manifest (JSON) to this path");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    }

    const auto start = std::chrono::steady_clock::now();
    CommandOutput result;
    std::string command;
    try {
        if (*sub_bound) {
            command = "bipartite-bound";
            result = cmd_bipartite_bound(bound);
        } else if (*sub_work) {
            command = "work";
            result = cmd_work(work);
        } else if (*sub_scan) {
            command = "scan";
            result = cmd_scan(scan);
        } else if (*sub_thr) {
            command = "threshold";
            result = cmd_threshold(thr);
        } else if (*sub_tab) {
            command = "table1";
            result = cmd_table1(tab);
        } else if (*sub_sim) {
            command = "simulate";
            result = cmd_simulate(sim);
        } else {
            command = "classify";
            result = cmd_classify(cls);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }

    if (json) {
        out << result.results.dump(2) << '\n';
    } else {
        out << result.text;
    }
    if (!manifest_path.empty()) {
        RunManifest m;
        m.command = command;
        m.config_hash = config_hash({{"command", command}, {"inputs", result.inputs}});
        m.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        m.results = result.results;
        std::ofstream f(manifest_path);
        if (!f || !(f << m.to_json().dump(2) << '\n')) {
            err << "error: cannot write manifest '" << manifest_path << "'\n";
            return kExitIo;
        }
    }
    if (result.exit_code == kExitAccuracy) err << "error: accuracy check failed\n";
    return result.exit_code;
}

} // namespace triwork
