#include <doctest.h>

#include <cmath>

#include "anisodec/errors.hpp"
#include "anisodec/quadrature.hpp"
#include "anisodec/units.hpp"

using namespace anisodec;
using constants::pi;

namespace {
const GasEnvironment helium(300.0, 4.002602 * constants::amu, 1e20);
}

TEST_CASE("maxwell-boltzmann density at the origin") {
    const double expect = std::pow(2.0 * pi * helium.momentum_variance(), -1.5);
    CHECK(maxwell_boltzmann_pdf(helium, 0.0) == doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("maxwell-boltzmann normalization and second moment") {
    const auto grid = RadialGrid::maxwell_boltzmann(helium);
    auto moment = [&](int n) {
        return integrate_radial(grid, [&](double p) {
                   return complex(4.0 * pi * p * p * std::pow(p, n) * maxwell_boltzmann_pdf(helium, p));
               }).value.real();
    };
    CHECK(std::abs(moment(0) - 1.0) < 1e-10);
    CHECK(moment(2) / (3.0 * helium.momentum_variance()) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("gas environment rejects unphysical input") {
    CHECK_THROWS_AS(GasEnvironment(0.0, 1e-26, 1e20), DomainError);
    CHECK_THROWS_AS(GasEnvironment(300.0, -1.0, 1e20), DomainError);
    CHECK_THROWS_AS(GasEnvironment(300.0, 1e-26, -1.0), DomainError);
}

TEST_CASE("planck density") {
    const BlackBodyEnvironment env(300.0);
    const auto grid = RadialGrid::planck(env);
    const auto norm = integrate_radial(grid, [&](double k) { return complex(planck_wavenumber_pdf(env, k).density); });
    CHECK(std::abs(norm.value.real() - 1.0) < 1e-8);
    CHECK(env.photon_density() / BlackBodyEnvironment(150.0).photon_density() == doctest::Approx(8.0).epsilon(1e-8));
    CHECK_THROWS_AS(planck_wavenumber_pdf(env, 0.0), DomainError);
    CHECK_THROWS_AS(planck_wavenumber_pdf(env, -1.0), DomainError);
}

TEST_CASE("unit conversions") {
    CHECK(convert_debye(1.0) == doctest::Approx(3.33564e-30).epsilon(1e-6));
    CHECK(convert_polarizability_volume(0.0) == 0.0);
    CHECK(convert_polarizability_volume(0.2) ==
          doctest::Approx(4.0 * pi * constants::eps0 * 2e-31).epsilon(1e-15));
    CHECK(to_debye(convert_debye(5.0)) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(to_polarizability_volume(convert_polarizability_volume(0.2)) == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("photon mode validation") {
    CHECK_THROWS_AS(PhotonMode(1e7, {0, 0, 1}, {0, 0, 1}, 1.0), DomainError);  // polarization not transverse
    CHECK_THROWS_AS(PhotonMode(-1.0, {0, 0, 1}, {1, 0, 0}, 1.0), DomainError);
    const PhotonMode m = PhotonMode::from_wavelength(1.56e-6, {0, 0, 2}, {3, 0, 0}, 1e5);
    CHECK(m.wavenumber() == doctest::Approx(2.0 * pi / 1.56e-6));
    CHECK(m.direction().z() == 1.0);
    CHECK(m.polarization().x() == 1.0);
}
