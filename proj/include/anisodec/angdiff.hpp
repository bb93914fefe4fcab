#pragma once

// Pure angular-momentum diffusion in the limit of weak anisotropy: diffusion
// coefficients for gas, laser and thermal-radiation scattering, the resulting
// orientational localization rate, and the angular-momentum populations of an
// initial j = 0 state.

#include <string>
#include <vector>

#include "anisodec/quadrature.hpp"
#include "anisodec/rgs.hpp"
#include "anisodec/units.hpp"
#include "anisodec/vdw.hpp"

namespace anisodec {

enum class DiffusionSource { gas, rayleigh_gans, blackbody };

const char* to_string(DiffusionSource s);

struct DiffusionCoefficient {
    double D = 0.0;          ///< (J s)^2 / s
    double abs_error = 0.0;  ///< quadrature error, zero for closed forms
    DiffusionSource source = DiffusionSource::gas;
};

/// gamma = n_g / (2 m hbar^2 cos^2[pi/(s-1)]) ((s-3)/(s(s-1)))^2
///         int dp int dxi mu(p) p^5 sigma0^2 exp[-2 (1 - xi^2) Re chi0] |(1 - xi^2) chi0 - 1|^2,
/// with sigma0, chi0 the a = 0 cross section and width. Only the real part of
/// chi0 enters the exponent, as in |exp(-(1 - xi^2) chi0)|^2.
Estimate<double> gas_diffusion_rate(const AnisotropicPotential& pot, const GasEnvironment& gas,
                                    int radial_nodes = default_radial_nodes);

/// D = 2 gamma (hbar a)^2 / 15.
DiffusionCoefficient diffusion_coefficient_gas(const AnisotropicPotential& pot, const GasEnvironment& gas,
                                               int radial_nodes = default_radial_nodes);

/// D_R = gamma0 |b|^2 hbar^2 [(dchi/chi_par)^2 / 3 + (k l)^4 / 540].
DiffusionCoefficient diffusion_coefficient_rg(const DielectricRod& rod, const PhotonMode& mode);

/// D_bb = 40 c (hbar chi_par V0)^2 / pi^3 (k_B T / hbar c)^7
///        [zeta(7) (dchi/chi_par)^2 + 28 zeta(11) (k_B T l / hbar c)^4].
DiffusionCoefficient diffusion_coefficient_blackbody(const DielectricRod& rod, const BlackBodyEnvironment& env);

/// F = (D / hbar^2) |m1 x m2|^2.
double small_anisotropy_rate(double D, const Vec3& m1, const Vec3& m2);

struct PopulationVector {
    std::vector<double> p;  ///< p[j], j = 0..j_max
    double t = 0.0;
    double D = 0.0;
    double tau = 0.0;  ///< D t / hbar^2
    double tail = 0.0;  ///< |1 - sum p|
    bool truncated = false;  ///< j_max cap reached before the tail fell below 1e-8
    int nodes = 0;  ///< Gauss-Legendre nodes used in cos(theta)

    int j_max() const { return static_cast<int>(p.size()) - 1; }
};

inline constexpr int population_j_cap = 4096;
inline constexpr double population_tail_tolerance = 1e-8;

/// p_t(j) = (2j+1)/2 int_{-1}^{1} dx P_j(x) exp(-(D t / hbar^2)(1 - x^2)).
/// j_max <= 0 selects ceil(6 sqrt(D t / hbar^2)) + 32. The range is extended
/// until the missing mass is below 1e-8, up to population_j_cap.
PopulationVector populations(double D, double t, int j_max = 0);

/// Same with tau = D t / hbar^2 given directly.
PopulationVector populations_at(double tau, int j_max = 0);

/// (2j+1) / (4 tau) exp(-(j + 1/2)^2 / (4 tau)), tau = D t / hbar^2.
double gaussian_asymptote(double D, double t, int j);
double gaussian_asymptote_at(double tau, int j);

/// sum_j j (j+1) p(j), in units of hbar^2.
double second_moment(const PopulationVector& pv);

}  // namespace anisodec
