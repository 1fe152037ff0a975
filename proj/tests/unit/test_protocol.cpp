#include "test_support.hpp"

#include "triwork/errors.hpp"
#include "triwork/protocol.hpp"
#include "triwork/rng.hpp"

#include <nlohmann/json.hpp>

#include <sstream>

using namespace triwork;
using namespace testing_support;

namespace {

long total(const ProtocolEstimate& e) {
    long n = 0;
    for (const auto& [k, c] : e.branch_counts) n += c;
    return n;
}

} // namespace

TEST_SUITE("protocol-sim") {

TEST_CASE("philox known-answer vectors") {
    using B = Philox4x32::Block;
    CHECK(Philox4x32(0)(B{0, 0, 0, 0}) == B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32(~0ull)(B{~0u, ~0u, ~0u, ~0u}) == B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32(0x299f31d0a4093822ull)(B{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}) ==
          B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
    const auto u = Philox4x32(42).uniforms(7, 1);
    for (double x : u) {
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
    }
}

TEST_CASE("tripartite reference runs") {
    ProtocolRunConfig cfg{dm_from_pure(ghz_state()), Direction::x_axis(), Direction::x_axis()};
    cfg.shots = 100000;
    cfg.seed = 2024;
    const auto g = simulate_tripartite(cfg);
    CHECK(g.abs_error <= 0.01);
    CHECK(g.analytic_work == doctest::Approx(1.0));
    CHECK(total(g) == cfg.shots);
    CHECK(g.abs_error == std::abs(g.empirical_work - g.analytic_work));

    ProtocolRunConfig zero{dm_from_pure(basis_state(3, 0)), Direction::z_axis(), Direction::z_axis()};
    zero.shots = 777;
    const auto z = simulate_tripartite(zero);
    CHECK(z.empirical_work == 1.0);
    CHECK(z.analytic_work == 1.0);
    CHECK(z.abs_error == 0.0);

    ProtocolRunConfig mixed{DensityMatrix::maximally_mixed(3), Direction::x_axis(), Direction::y_axis()};
    mixed.shots = 100000;
    const auto m = simulate_tripartite(mixed);
    CHECK(std::abs(m.empirical_work) <= 0.01);
    // Plug-in entropy is biased low, so empirical work sits at or above the analytic 0.
    CHECK(m.empirical_work >= m.analytic_work - 1e-12);
}

TEST_CASE("bipartite reference runs") {
    ProtocolRunConfig singlet{dm_from_pure(bell_singlet()), Direction::from_angles(0.8, 0.0),
                              Direction::from_angles(0.8, 0.0)};
    singlet.shots = 100000;
    const auto s = simulate_bipartite(singlet);
    CHECK(std::abs(s.empirical_work - 1.0) <= 0.01);
    CHECK(total(s) == singlet.shots);

    ProtocolRunConfig poles{dm_from_pure(basis_state(2, 0)), Direction::z_axis(), Direction::z_axis()};
    poles.shots = 1000;
    CHECK(simulate_bipartite(poles).empirical_work == 1.0);

    ProtocolRunConfig equator{dm_from_pure(basis_state(2, 0)), Direction::x_axis(), Direction::x_axis()};
    equator.shots = 100000;
    const auto e = simulate_bipartite(equator);
    CHECK(std::abs(e.empirical_work) <= 0.01);
    CHECK_NEAR(e.analytic_work, 0.0, 1e-12);

    singlet.shots = 3;
    CHECK_THROWS_AS(simulate_bipartite(singlet), PreconditionError);
}

TEST_CASE("preconditions") {
    ProtocolRunConfig bad{dm_from_pure(bell_singlet()), Direction::x_axis(), Direction::x_axis()};
    CHECK_THROWS_AS(simulate_tripartite(bad), ShapeError);
    ProtocolRunConfig none{dm_from_pure(ghz_state()), Direction::x_axis(), Direction::x_axis()};
    none.shots = 0;
    CHECK_THROWS_AS(simulate_tripartite(none), ArgumentError);
}

TEST_CASE("determinism and sampling modes") {
    std::mt19937_64 rng(15);
    ProtocolRunConfig cfg{random_mixed(rng, 3), random_direction(rng), random_direction(rng)};
    cfg.shots = 20000;
    cfg.seed = 99;
    const auto a = simulate_tripartite(cfg);
    const auto b = simulate_tripartite(cfg);
    CHECK(a.empirical_work == b.empirical_work);
    CHECK(a.branch_counts == b.branch_counts);
    cfg.mode = SamplingMode::SequentialCollapse;
    const auto s = simulate_tripartite(cfg);
    CHECK(s.analytic_work == a.analytic_work);
    CHECK(std::abs(s.empirical_work - s.analytic_work) <= 0.05);
    cfg.miller_madow = true;
    const auto mm = simulate_tripartite(cfg);
    CHECK(mm.empirical_work <= s.empirical_work);
}

TEST_CASE("branch frequencies stay inside a 5 sigma band") {
    const auto rho = dm_from_pure(w_state());
    const Direction z = Direction::from_angles(0.7, 0.2), u = Direction::from_angles(1.9, 2.5);
    const Direction dirs[] = {z, u, u};
    const auto probs = outcome_distribution(rho, dirs);
    int inside = 0;
    const int runs = 100;
    for (int seed = 0; seed < runs; ++seed) {
        ProtocolRunConfig cfg{rho, z, u};
        cfg.shots = 20000;
        cfg.seed = static_cast<std::uint64_t>(seed);
        const auto e = simulate_tripartite(cfg);
        bool ok = true;
        for (const auto& [key, count] : e.branch_counts) {
            const double p = probs[static_cast<std::size_t>(4 * key.first + 2 * key.second)] +
                             probs[static_cast<std::size_t>(4 * key.first + 2 * key.second + 1)];
            const double f = static_cast<double>(count) / static_cast<double>(cfg.shots);
            ok = ok && std::abs(f - p) <= 5.0 * std::sqrt(p * (1 - p) / static_cast<double>(cfg.shots)) + 1e-12;
        }
        inside += ok;
    }
    CHECK(inside >= 99);
}

TEST_CASE("median error shrinks with more shots") {
    const auto rho = dm_from_pure(w_state());
    const Direction z = Direction::from_angles(0.7, 0.2), u = Direction::from_angles(1.9, 2.5);
    auto median_error = [&](long shots) {
        std::vector<double> errs;
        for (int seed = 0; seed < 20; ++seed) {
            ProtocolRunConfig cfg{rho, z, u};
            cfg.shots = shots;
            cfg.seed = static_cast<std::uint64_t>(1000 + seed);
            errs.push_back(simulate_tripartite(cfg).abs_error);
        }
        std::nth_element(errs.begin(), errs.begin() + 10, errs.end());
        return errs[10];
    };
    CHECK(median_error(40000) <= median_error(10000));
}

TEST_CASE("transcripts") {
    ProtocolRunConfig cfg{dm_from_pure(ghz_state()), Direction::z_axis(), Direction::x_axis()};
    cfg.shots = 10;
    std::ostringstream os;
    const auto e = simulate_tripartite(cfg, &os);
    std::istringstream lines(os.str());
    std::string line;
    long n = 0;
    std::map<std::pair<int, int>, long> counts;
    while (std::getline(lines, line)) {
        const auto j = nlohmann::json::parse(line);
        CHECK(j["shot"] == n);
        ++counts[{j["i"].get<int>(), j["j"].get<int>()}];
        ++n;
    }
    CHECK(n == 10);
    for (const auto& [k, c] : counts) CHECK(e.branch_counts.at(k) == c);

    ProtocolRunConfig bi{dm_from_pure(bell_singlet()), Direction::x_axis(), Direction::x_axis()};
    bi.shots = 4;
    std::ostringstream bo;
    simulate_bipartite(bi, &bo);
    CHECK(bo.str().find("\"role\":\"B-measures\"") != std::string::npos);
}

TEST_CASE("plug-in conditional entropy") {
    const long uniform[] = {25, 25, 25, 25};
    CHECK_NEAR(plugin_conditional_entropy(uniform, false), 1.0, 1e-15);
    const long determined[] = {50, 0, 0, 50};
    CHECK(plugin_conditional_entropy(determined, false) == 0.0);
    CHECK(plugin_conditional_entropy(determined, true) == 0.0);
    const long mixed[] = {30, 10, 0, 0};
    CHECK(plugin_conditional_entropy(mixed, true) > plugin_conditional_entropy(mixed, false));
}

} // TEST_SUITE
