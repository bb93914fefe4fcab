#include "anisodec/units.hpp"

#include <cmath>

#include "anisodec/errors.hpp"

namespace anisodec {

using detail::require;

GasEnvironment::GasEnvironment(double temperature_K, double mass_kg, double density_per_m3)
    : temperature(temperature_K), particle_mass(mass_kg), number_density(density_per_m3) {
    require(temperature > 0.0 && std::isfinite(temperature), "temperature_K", "must be positive");
    require(particle_mass > 0.0 && std::isfinite(particle_mass), "gas_mass_kg", "must be positive");
    require(number_density > 0.0 && std::isfinite(number_density), "number_density_per_m3", "must be positive");
}

PhotonMode::PhotonMode(double wavenumber, const Vec3& direction, const Vec3& polarization, double field_amplitude)
    : k_(wavenumber), n_(direction), eps_(polarization), e0_(field_amplitude) {
    require(k_ > 0.0 && std::isfinite(k_), "wavenumber", "must be positive");
    require(e0_ >= 0.0 && std::isfinite(e0_), "field_amplitude_V_per_m", "must be non-negative");
    require(std::abs(dot(n_.vec(), eps_.vec())) < 1e-12, "polarization",
            "must be perpendicular to the propagation direction");
}

PhotonMode PhotonMode::from_wavelength(double wavelength, const Vec3& direction, const Vec3& polarization,
                                       double field_amplitude) {
    require(wavelength > 0.0, "wavelength_m", "must be positive");
    return {2.0 * constants::pi / wavelength, direction, polarization, field_amplitude};
}

BlackBodyEnvironment::BlackBodyEnvironment(double temperature_K) : temperature(temperature_K) {
    require(temperature > 0.0 && std::isfinite(temperature), "temperature_K", "must be positive");
}

double BlackBodyEnvironment::photon_density() const {
    const double kt = thermal_wavenumber();
    return 2.0 * constants::zeta3 * kt * kt * kt / (constants::pi * constants::pi);
}

double maxwell_boltzmann_pdf(const GasEnvironment& gas, double p) {
    const double var = gas.momentum_variance();
    return std::pow(2.0 * constants::pi * var, -1.5) * std::exp(-p * p / (2.0 * var));
}

PlanckDensity planck_wavenumber_pdf(const BlackBodyEnvironment& env, double k) {
    require(k > 0.0, "wavenumber", "must be positive");
    const double ng = env.photon_density();
    const double x = k / env.thermal_wavenumber();
    return {k * k / (ng * constants::pi * constants::pi * std::expm1(x)), ng};
}

}  // namespace anisodec
