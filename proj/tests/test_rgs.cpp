#include <doctest.h>

#include <cmath>

#include "anisodec/errors.hpp"
#include "anisodec/quadrature.hpp"
#include "anisodec/rgs.hpp"

using namespace anisodec;
using constants::pi;

namespace {
const double lambda = 1.56e-6;
const PhotonMode mode = PhotonMode::from_wavelength(lambda, {0, 0, 1}, {1, 0, 0}, 1e5);
const DielectricRod fig2b(0.8e-6, 25e-9, 4.0);

Vec3 random_unit(CounterRng& rng) {
    const double z = 2.0 * rng.uniform() - 1.0, phi = 2.0 * pi * rng.uniform();
    const double s = std::sqrt(1.0 - z * z);
    return {s * std::cos(phi), s * std::sin(phi), z};
}
}  // namespace

TEST_CASE("rod susceptibilities") {
    const DielectricRod r(1e-6, 1e-8, 3.0);
    CHECK(r.chi_parallel() == 2.0);
    CHECK(r.chi_perpendicular() == 1.0);
    CHECK(r.delta_chi() == 1.0);
    CHECK(r.perpendicular_ratio() + r.anisotropy_ratio() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(DielectricRod(1e-6, 1e-8, 0.5), DomainError);
    CHECK_THROWS_AS(DielectricRod(0.0, 1e-8, 2.0), DomainError);
}

TEST_CASE("internal polarization") {
    const DielectricRod r(1e-6, 1e-8, 3.0);
    const Vec3 eps{1, 0, 0};
    const Vec3 u_perp = internal_polarization(r, {0, 1, 0}, eps);
    CHECK(u_perp.x == doctest::Approx(0.5));
    CHECK(norm(u_perp - 0.5 * eps) < 1e-15);
    const Vec3 u_par = internal_polarization(r, eps, eps);
    CHECK(norm(u_par - eps) < 1e-15);
    // m at 45 degrees to eps_p in the x-z plane: u = 0.75 x + 0.25 z.
    const Vec3 u45 = internal_polarization(r, normalized(Vec3{1, 0, 1}), eps);
    CHECK(u45.x == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(u45.y == 0.0);
    CHECK(u45.z == doctest::Approx(0.25).epsilon(1e-15));
    CHECK_THROWS_AS(internal_polarization(DielectricRod(1e-6, 1e-8, 1.0), eps, eps), DomainError);
    CHECK(norm(internal_polarization_ratio(DielectricRod(1e-6, 1e-8, 1.0), eps, eps) - eps) < 1e-15);
}

TEST_CASE("vector amplitude") {
    CounterRng rng(3);
    for (int i = 0; i < 1000; ++i) {
        const Vec3 n_out = random_unit(rng), m = random_unit(rng);
        const auto F = vector_amplitude(fig2b, mode, n_out, m).value;
        REQUIRE(std::abs(dot(n_out, F)) <= 1e-14 * norm(F));
    }
    const double pref = fig2b.volume() * fig2b.chi_parallel() * std::pow(mode.wavenumber(), 2) / (4.0 * pi);
    // Forward direction with m along eps_p: F = pref eps_p.
    const auto fwd = vector_amplitude(fig2b, mode, {0, 0, 1}, {1, 0, 0});
    CHECK(fwd.value.x == doctest::Approx(6.0833360460363404e-9).epsilon(1e-13));
    CHECK(fwd.value.x == doctest::Approx(pref).epsilon(1e-13));

    // Short rod: sinc -> 1 and |F| is the point-dipole value.
    const DielectricRod tiny(1e-12, 1e-13, 4.0);
    const Vec3 n_out = normalized(Vec3{0.3, 0.7, -0.2}), m = normalized(Vec3{0.1, -0.5, 0.6});
    const Vec3 u = internal_polarization(tiny, m, mode.polarization());
    const double p0 = tiny.volume() * tiny.chi_parallel() * std::pow(mode.wavenumber(), 2) / (4.0 * pi);
    CHECK(norm(vector_amplitude(tiny, mode, n_out, m).value) ==
          doctest::Approx(p0 * norm(cross(n_out, cross(n_out, u)))).epsilon(1e-12));
    CHECK_FALSE(vector_amplitude(tiny, mode, n_out, m).thin_rod_warning);
    CHECK(vector_amplitude(DielectricRod(1e-6, 1e-6, 12.0), mode, n_out, m).thin_rod_warning);
}

TEST_CASE("scattering rate gamma0 |b|^2") {
    CHECK(scattering_rate_gamma0(DielectricRod(0.8e-6, 25e-9, 1.0), mode) == 0.0);
    const PhotonMode twice = PhotonMode::from_wavelength(lambda, {0, 0, 1}, {1, 0, 0}, 2e5);
    CHECK(scattering_rate_gamma0(fig2b, twice) / scattering_rate_gamma0(fig2b, mode) ==
          doctest::Approx(4.0).epsilon(1e-15));
    CHECK(scattering_rate_gamma0(fig2b, mode) == doctest::Approx(32313910951.618651).epsilon(1e-13));
}

TEST_CASE("jump function") {
    const Vec3 R{1e-7, -2e-7, 3e-7};
    const Vec3 m = normalized(Vec3{0.3, 0.2, 0.9});
    // Forward direction: no phase, no sinc.
    const auto bf = PolarizationBasis::for_direction({0, 0, 1});
    const Vec3 u = internal_polarization(fig2b, m, mode.polarization());
    for (int s = 0; s < 2; ++s)
        CHECK(std::abs(jump_function_B(fig2b, mode, {0, 0, 1}, s, R, m) - std::sqrt(1.5) * dot(bf[s], u)) < 1e-15);
    CHECK_THROWS_AS(jump_function_B(fig2b, mode, {0, 0, 1}, 2, R, m), DomainError);

    // Polarization sum is basis independent.
    const Vec3 n_out = normalized(Vec3{0.4, -0.8, 0.3});
    const auto b = PolarizationBasis::for_direction(n_out);
    double sum = 0.0, rotated = 0.0;
    for (int s = 0; s < 2; ++s) sum += std::norm(jump_function_B(fig2b, mode, n_out, s, R, m));
    for (double ang : {0.3, 1.1}) {
        const Vec3 e1 = std::cos(ang) * b.e1 + std::sin(ang) * b.e2;
        const Vec3 e2 = -std::sin(ang) * b.e1 + std::cos(ang) * b.e2;
        rotated = std::norm(jump_function_B(fig2b, mode, n_out, e1, R, m)) +
                  std::norm(jump_function_B(fig2b, mode, n_out, e2, R, m));
        CHECK(rotated == doctest::Approx(sum).epsilon(1e-14));
    }
    CHECK(std::norm(jump_function_B(fig2b, mode, n_out, 0, R, m)) +
              std::norm(jump_function_B(fig2b, mode, n_out, 1, R, m)) ==
          doctest::Approx(std::norm(jump_function_B(fig2b, mode, n_out, 0, R, -m)) +
                          std::norm(jump_function_B(fig2b, mode, n_out, 1, R, -m)))
              .epsilon(1e-14));
}

TEST_CASE("jump function normalization for a point dipole") {
    const DielectricRod point(1e-12, 1e-13, 1.0 + 1e-9);  // k l << 1 and dchi -> 0
    const Vec3 m = normalized(Vec3{0.3, 0.2, 0.9});
    const auto total = integrate_sphere(SphereGrid::cached(default_sphere_order), [&](const Vec3& n_out) {
        double s2 = 0.0;
        for (int s = 0; s < 2; ++s) s2 += std::norm(jump_function_B(point, mode, n_out, s, {}, m));
        return complex(s2 / (4.0 * pi));
    });
    CHECK(total.value.real() == doctest::Approx(1.0).epsilon(1e-8));

    // Point-particle limit: the polarization sum no longer depends on orientation.
    const Vec3 n_out = normalized(Vec3{0.5, 0.1, 0.2});
    auto sum = [&](const Vec3& mm) {
        return std::norm(jump_function_B(point, mode, n_out, 0, {}, mm)) +
               std::norm(jump_function_B(point, mode, n_out, 1, {}, mm));
    };
    CHECK(sum({1, 0, 0}) == doctest::Approx(sum({0, 1, 0})).epsilon(1e-8));
}

TEST_CASE("laser potential") {
    const double full = -constants::eps0 * fig2b.chi_parallel() * fig2b.volume() * 1e10 / 4.0;
    CHECK(laser_potential(fig2b, mode, {1, 0, 0}) == doctest::Approx(full).epsilon(1e-14));
    CHECK(laser_potential(fig2b, mode, {0, 1, 0}) ==
          doctest::Approx(-constants::eps0 * fig2b.chi_perpendicular() * fig2b.volume() * 1e10 / 4.0).epsilon(1e-14));
    CounterRng rng(5);
    for (int i = 0; i < 1000; ++i) {
        const Vec3 m = random_unit(rng);
        REQUIRE(laser_potential(fig2b, mode, {1, 0, 0}) <= laser_potential(fig2b, mode, m));
        REQUIRE(laser_potential(fig2b, mode, m) == doctest::Approx(laser_potential(fig2b, mode, -m)).epsilon(1e-15));
    }
}
