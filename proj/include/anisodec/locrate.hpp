#pragma once

// Spatio-orientational localization rates F and phase frequencies G.
//
// A coherence <R Omega| rho |R' Omega'> decays as exp(-(F - iG) t). For gas
// scattering
//
//   F = n_g/(2m) int dp p^3 mu(p) int d^2n d^2n' |f(pn',pn;Omega) e^{ipR.(n-n')/hbar} - f(pn',pn;Omega')|^2
//   G = n_g/m    int dp p^3 mu(p) int d^2n d^2n' Im[f f'^* e^{ipR.(n-n')/hbar}]
//
// with mu the 3-D Maxwell-Boltzmann density evaluated at |p| = p. The n'
// integral is reduced analytically: the amplitude depends on n' only through
// xi = n.n', the azimuth around n integrates the plane-wave phase to a Bessel
// J0, and the remaining xi integral is done on a rule graded towards xi = +-1
// (closed form at R = 0). The n integral uses the product sphere grid and the
// p integral a Gauss-Legendre rule on [0, 8 sqrt(m k_B T)].

#include <limits>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "anisodec/quadrature.hpp"
#include "anisodec/rgs.hpp"
#include "anisodec/units.hpp"
#include "anisodec/vdw.hpp"

namespace anisodec {

/// Arguments of a coherence: separation R - R' and the two symmetry axes.
struct PairConfiguration {
    Vec3 separation;
    UnitVector m1;
    UnitVector m2;

    /// Pure orientational pair at angle theta, m1 = z and m2 in the x-z plane.
    static PairConfiguration orientational(double theta);
};

struct RateResult {
    double rate = 0.0;              ///< 1/s
    double quadrature_error = 0.0;  ///< 1/s
    /// Reference rate used for normalized output (gamma or gamma0 |b|^2), NaN if unset.
    double reference_rate = std::numeric_limits<double>::quiet_NaN();
    /// rate / reference_rate, evaluated as a finite limit where the reference vanishes.
    double normalized = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::pair<std::string, double>> inputs;
    std::vector<std::string> warnings;
    bool converged = true;
};

struct GasRateOptions {
    int sphere_order = default_sphere_order;
    int radial_nodes = default_radial_nodes;
};

struct GasRates {
    RateResult localization;  ///< F
    RateResult phase;         ///< G (may be negative)
};

/// F and G together; they share every amplitude evaluation.
GasRates gas_rates(const AnisotropicPotential& pot, const GasEnvironment& gas, const PairConfiguration& cfg,
                   const GasRateOptions& opts = {});

RateResult localization_rate_gas(const AnisotropicPotential& pot, const GasEnvironment& gas,
                                 const PairConfiguration& cfg, const GasRateOptions& opts = {});

RateResult phase_frequency_gas(const AnisotropicPotential& pot, const GasEnvironment& gas,
                               const PairConfiguration& cfg, const GasRateOptions& opts = {});

struct PhotonRateOptions {
    int sphere_order = default_sphere_order;
    int radial_nodes = default_radial_nodes;  ///< Planck average only
};

/// F = (gamma0 |b|^2 / 2) sum_s int d^2n'/4pi |B_{n's}(R, Omega) - B_{n's}(R', Omega')|^2
/// for a single running-wave mode. Depends on m1 and m2 individually.
RateResult localization_rate_photon(const DielectricRod& rod, const PhotonMode& mode, const PairConfiguration& cfg,
                                    const PhotonRateOptions& opts = {});

/// Monochromatic, unpolarized, isotropic illumination at wavenumber k with
/// field amplitude E0 per incoming wave.
struct Monochromatic {
    double wavenumber;
    double field_amplitude;
};

using WavenumberDistribution = std::variant<Monochromatic, BlackBodyEnvironment>;

/// Orientational rate (R = 0) averaged over incoming direction, polarization
/// and wavenumber. Depends only on m1.m2.
RateResult photon_rate_isotropic_average(const DielectricRod& rod, const WavenumberDistribution& dist,
                                         const PairConfiguration& cfg, const PhotonRateOptions& opts = {});

/// Dimensionless isotropic rate F / (gamma0 |b|^2) at wavenumber k, finite at eps_r = 1.
Estimate<double> isotropic_photon_rate_normalized(const DielectricRod& rod, double k, const Vec3& m1,
                                                  const Vec3& m2, int sphere_order = default_sphere_order);

/// The isotropic rate is a quadratic form in the susceptibility ratios
/// alpha = chi_perp/chi_par and delta = dchi/chi_par,
///   F / (gamma0 |b|^2) = alpha^2 aa + 2 alpha delta ab + delta^2 bb,
/// whose coefficients depend only on k l and the two orientations. They are
/// stored on the fine grid and on the half-order grid for error estimation.
struct IsotropicPhotonCoefficients {
    double aa = 0.0, ab = 0.0, bb = 0.0;
    double aa_coarse = 0.0, ab_coarse = 0.0, bb_coarse = 0.0;
    std::size_t terms = 0;

    Estimate<double> normalized_rate(const DielectricRod& rod) const;
};

IsotropicPhotonCoefficients isotropic_photon_coefficients(double k_ell, const Vec3& m1, const Vec3& m2,
                                                          int sphere_order = default_sphere_order);

/// Reference rate for figure normalization: gamma0 |b|^2 of the same rod
/// geometry with chi_par = 1, so that F / reference scales as chi_par^2 and
/// vanishes for a transparent rod.
double unit_susceptibility_rate(const DielectricRod& rod, const WavenumberDistribution& dist);

// Curve sweeps over the angle between m1 and m2 (R = 0), parallel over points.
std::vector<GasRates> gas_rate_curve(const AnisotropicPotential& pot, const GasEnvironment& gas,
                                     const std::vector<double>& thetas, const GasRateOptions& opts = {});

/// One curve per rod. Rods sharing a length share the angular integrals.
std::vector<std::vector<RateResult>> isotropic_photon_rate_curves(const std::vector<DielectricRod>& rods,
                                                                  const WavenumberDistribution& dist,
                                                                  const std::vector<double>& thetas,
                                                                  const PhotonRateOptions& opts = {});

/// Thermal momentum sqrt(2 m k_B T) (most probable speed times mass).
double thermal_momentum(const GasEnvironment& gas);

}  // namespace anisodec
