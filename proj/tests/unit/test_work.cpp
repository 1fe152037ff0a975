#include "test_support.hpp"

#include "triwork/errors.hpp"
#include "triwork/work.hpp"

using namespace triwork;
using namespace testing_support;

TEST_SUITE("thermo-work") {

TEST_CASE("binary entropy") {
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK_NEAR(binary_entropy(0.5), 1.0, 1e-15);
    CHECK(binary_entropy(-5e-13) == 0.0);
    CHECK(binary_entropy(1.0 + 5e-13) == 0.0);
    CHECK_THROWS_AS(binary_entropy(-1e-6), DomainError);
    CHECK_THROWS_AS(binary_entropy(1.01), DomainError);
    CHECK_THROWS_AS(binary_entropy(std::nan("")), DomainError);
}

TEST_CASE("conditional entropy and work on reference states") {
    const auto mixed = DensityMatrix::maximally_mixed(3);
    const auto zero = dm_from_pure(basis_state(3, 0));
    std::mt19937_64 rng(21);
    for (int k = 0; k < 5; ++k) {
        const auto z = random_direction(rng);
        const auto u = random_direction(rng);
        CHECK_NEAR(cond_entropy_tri(mixed, z, u), 1.0, 1e-12);
        CHECK_NEAR(work_zu(mixed, z, u), 0.0, 1e-12);
    }
    CHECK(cond_entropy_tri(zero, Direction::z_axis(), Direction::z_axis()) == doctest::Approx(0.0));
    const auto ghz = dm_from_pure(ghz_state());
    // Every axis of the phi = 0 frame around x gives a full bit; other frames
    // lose work on the axis that leaves the x-z plane.
    const auto t = build_triad(Direction::x_axis(), 0.0);
    for (const auto& u : {t.x_axis, t.y_axis, t.z_axis}) CHECK_NEAR(work_zu(ghz, Direction::x_axis(), u), 1.0, 1e-9);
    CHECK(w_phi(ghz, Direction::x_axis(), 0.4) < 1.0 - 1e-3);
}

TEST_CASE("build_triad") {
    std::mt19937_64 rng(8);
    std::vector<Direction> zs = {Direction::x_axis(), Direction::z_axis(), Direction::from_angles(kPi, 0.0),
                                 Direction::from_angles(1e-12, 0.3)};
    for (int k = 0; k < 100; ++k) zs.push_back(random_direction(rng));
    for (const auto& z : zs) {
        for (double phi : {0.0, 0.7, 2.9}) {
            const auto t = build_triad(z, phi);
            const Vec3 x = t.x_axis.vector(), y = t.y_axis.vector(), zz = t.z_axis.vector();
            CHECK(std::abs(x.dot(y)) < 1e-12);
            CHECK(std::abs(x.dot(zz)) < 1e-12);
            CHECK(std::abs(y.dot(zz)) < 1e-12);
            CHECK((x.cross(y) - zz).norm() < 1e-12);
            CHECK((zz - z.vector()).norm() < 1e-15);
        }
    }
    // z = global x: x(0) is global z.
    const auto t = build_triad(Direction::x_axis(), 0.0);
    CHECK((t.x_axis.vector() - Vec3(0, 0, 1)).norm() < 1e-12);
    // Degenerate z: reference falls back to global x.
    const auto d = build_triad(Direction::z_axis(), 0.0);
    CHECK((d.x_axis.vector() - Vec3(1, 0, 0)).norm() < 1e-12);
    CHECK((d.y_axis.vector() - Vec3(0, 1, 0)).norm() < 1e-12);
}

TEST_CASE("w_phi and work_W") {
    const OptimizerConfig cfg;
    const auto zero = dm_from_pure(basis_state(3, 0));
    const auto ghz = dm_from_pure(ghz_state());
    const auto w = dm_from_pure(w_state());
    for (double phi : {0.0, 0.5, 1.4}) {
        CHECK_NEAR(w_phi(zero, Direction::z_axis(), phi), 1.0 / 3.0, 1e-12);
        CHECK_NEAR(w_phi(DensityMatrix::maximally_mixed(3), Direction::from_angles(1.0, 2.0), phi),
               0.0, 1e-12);
    }
    const auto rg = work_W(ghz, Direction::x_axis(), cfg);
    CHECK_NEAR(rg.w_max, 1.0, 1e-9);
    const auto rw = work_W(w, Direction::z_axis(), cfg);
    CHECK_NEAR(rw.w_max, 7.0 / 9.0, 1e-9);
    const auto rp = work_W(zero, Direction::z_axis(), cfg);
    CHECK_NEAR(rp.w_max, 1.0 / 3.0, 1e-12);

    std::mt19937_64 rng(4);
    for (int k = 0; k < 20; ++k) {
        const auto rho = random_mixed(rng, 3);
        const auto r = work_W(rho, random_direction(rng), cfg);
        const double mean = (r.axis(Axis::X) + r.axis(Axis::Y) + r.axis(Axis::Z)) / 3.0;
        CHECK(std::abs(r.w_phi - mean) < 1e-12);
        CHECK(r.w_phi == r.w_max);
        CHECK(r.argmax_phi >= 0.0);
        CHECK(r.argmax_phi < kPi / 2);
        for (double a : r.per_axis_work) {
            CHECK(a >= -1e-12);
            CHECK(a <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("frame angle has period pi/2") {
    std::mt19937_64 rng(12);
    for (int k = 0; k < 20; ++k) {
        const auto rho = random_mixed(rng, 3);
        const auto z = random_direction(rng);
        const double phi = 0.3 + k * 0.1;
        CHECK_NEAR(w_phi(rho, z, phi), w_phi(rho, z, phi + kPi / 2), 1e-12);
    }
}

TEST_CASE("site_work_profile") {
    const OptimizerConfig cfg;
    // Singlet on AB, maximally mixed C.
    const auto sigma = tensor(dm_from_pure(bell_singlet()), DensityMatrix::maximally_mixed(1));
    const auto prof = site_work_profile(sigma, Direction::x_axis(), cfg);
    CHECK(prof.at(Site::C) <= 1.0 / 3.0 + 1e-9);
    CHECK_NEAR(prof.at(Site::A), 1.0, 1e-9);
    CHECK_NEAR(prof.at(Site::B), 1.0, 1e-9);
    const auto zero = site_work_profile(dm_from_pure(basis_state(3, 0)), Direction::z_axis(), cfg);
    for (const auto& [site, value] : zero) CHECK(value <= 1.0 / 3.0 + 1e-9);
}

TEST_CASE("xi_bipartite") {
    const auto singlet = dm_from_pure(bell_singlet());
    const auto zero = dm_from_pure(basis_state(2, 0));
    for (double t : {0.0, 0.6, 1.9, kPi}) CHECK_NEAR(xi_bipartite(singlet, t, t), 1.0, 1e-12);
    CHECK(xi_bipartite(zero, 0.0, 0.0) == doctest::Approx(1.0));
    CHECK_NEAR(xi_bipartite(zero, kPi / 2, kPi / 2), 0.0, 1e-12);
    CHECK_THROWS_AS(xi_bipartite(dm_from_pure(ghz_state()), 0.0, 0.0), ShapeError);
}

TEST_CASE("xi_capital and xi_capital_sphere") {
    const QuadratureConfig quad;
    const auto zero = dm_from_pure(basis_state(2, 0));
    const auto singlet = dm_from_pure(bell_singlet());
    const auto mixed = DensityMatrix::maximally_mixed(2);
    CHECK_NEAR(xi_capital(zero, quad).value, 0.4427, 1e-3);
    CHECK_NEAR(xi_capital(mixed, quad).value, 0.0, 1e-12);
    CHECK_NEAR(xi_capital(singlet, quad).value, 1.0, 1e-12);
    CHECK_NEAR(xi_capital_sphere(zero, quad).value, 0.2787, 1e-3);
    CHECK_NEAR(xi_capital_sphere(mixed, quad).value, 0.0, 1e-12);
    CHECK_NEAR(xi_capital_sphere(singlet, quad).value, 1.0, 1e-12);

    QuadratureConfig coarse = quad;
    coarse.circle_nodes = 16;
    CHECK_THROWS_AS(xi_capital(zero, coarse), AccuracyError);
    QuadratureConfig invalid = quad;
    invalid.circle_nodes = 0;
    CHECK_THROWS_AS(invalid.validate(), ArgumentError);
}

TEST_CASE("xi_capital_tri") {
    const QuadratureConfig quad;
    CHECK_NEAR(xi_capital_tri(DensityMatrix::maximally_mixed(3), quad).value, 0.0, 1e-12);
    CHECK_NEAR(xi_capital_tri(dm_from_pure(basis_state(3, 0)), quad).value, 0.4427, 1e-3);
    CHECK(xi_capital_tri(dm_from_pure(ghz_state()), quad).value > 0.4427);
}

TEST_CASE("work_W_sphere") {
    const QuadratureConfig quad;
    CHECK_NEAR(work_W_sphere(DensityMatrix::maximally_mixed(3), Direction::z_axis(), quad).value,
               0.0, 1e-12);
    CHECK_NEAR(work_W_sphere(dm_from_pure(basis_state(3, 0)), Direction::z_axis(), quad).value,
               0.2787, 1e-3);
}

} // TEST_SUITE
