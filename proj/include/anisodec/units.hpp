#pragma once

// Physical constants, unit conversions and the environment momentum
// distributions. Everything is SI; conversions happen at the API boundary.

#include <numbers>

#include "anisodec/vec3.hpp"

namespace anisodec {

namespace constants {
// CODATA 2018, frozen.
inline constexpr double hbar = 1.054571817e-34;     // J s
inline constexpr double k_B = 1.380649e-23;         // J / K
inline constexpr double c = 299792458.0;            // m / s
inline constexpr double eps0 = 8.8541878128e-12;    // F / m
inline constexpr double amu = 1.66053906660e-27;    // kg
inline constexpr const char* version = "CODATA-2018";

inline constexpr double pi = std::numbers::pi;
// Riemann zeta values used by the black-body averages.
inline constexpr double zeta3 = 1.202056903159594;
inline constexpr double zeta7 = 1.008349277381923;
inline constexpr double zeta11 = 1.000494188604119;
}  // namespace constants

/// Ideal background gas in thermal equilibrium.
struct GasEnvironment {
    double temperature;     // K
    double particle_mass;   // kg
    double number_density;  // 1/m^3

    GasEnvironment(double temperature_K, double mass_kg, double density_per_m3);

    /// m k_B T, the variance of one Cartesian momentum component.
    double momentum_variance() const { return particle_mass * constants::k_B * temperature; }
};

/// Single running-wave laser mode, E(r) = E0 eps_p exp(i k n.r).
class PhotonMode {
public:
    PhotonMode(double wavenumber, const Vec3& direction, const Vec3& polarization, double field_amplitude);

    static PhotonMode from_wavelength(double wavelength, const Vec3& direction, const Vec3& polarization,
                                      double field_amplitude);

    double wavenumber() const { return k_; }
    const UnitVector& direction() const { return n_; }
    const UnitVector& polarization() const { return eps_; }
    double field_amplitude() const { return e0_; }
    double angular_frequency() const { return constants::c * k_; }

private:
    double k_;
    UnitVector n_;
    UnitVector eps_;
    double e0_;
};

struct BlackBodyEnvironment {
    double temperature;  // K

    explicit BlackBodyEnvironment(double temperature_K);

    /// Thermal wavenumber k_B T / (hbar c).
    double thermal_wavenumber() const { return constants::k_B * temperature / (constants::hbar * constants::c); }

    /// Photon number density 2 zeta(3) (k_B T / hbar c)^3 / pi^2.
    double photon_density() const;
};

/// Isotropic Maxwell-Boltzmann density of the 3-D momentum, evaluated at |p| = p.
/// Normalized so that the integral over d^3p is one.
double maxwell_boltzmann_pdf(const GasEnvironment& gas, double p);

struct PlanckDensity {
    double density;         // per unit wavenumber, integrates to one over k
    double photon_density;  // n_g, 1/m^3
};

/// Normalized Planck wavenumber distribution k^2 / (n_g pi^2 [exp(hbar c k / k_B T) - 1]).
PlanckDensity planck_wavenumber_pdf(const BlackBodyEnvironment& env, double k);

inline constexpr double debye_in_SI = 1e-21 / constants::c;  // C m

/// Debye -> C m.
constexpr double convert_debye(double debye) { return debye * debye_in_SI; }
constexpr double to_debye(double coulomb_metre) { return coulomb_metre / debye_in_SI; }

/// Polarizability volume alpha / (4 pi eps0) in cubic angstrom -> alpha in C m^2 / V.
constexpr double convert_polarizability_volume(double cubic_angstrom) {
    return 4.0 * constants::pi * constants::eps0 * cubic_angstrom * 1e-30;
}
constexpr double to_polarizability_volume(double alpha_SI) {
    return alpha_SI / (4.0 * constants::pi * constants::eps0 * 1e-30);
}

}  // namespace anisodec
