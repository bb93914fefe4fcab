#pragma once

// Eikonal scattering off the homogeneous anisotropic potential
//
//     V(r, cos T) = -C / r^s (1 + a cos^2 T),   cos T = m . r / r,
//
// with the total cross section from the optical theorem and Schiff's formula
// and the small-angle amplitude f = f_fwd exp(-|n x n'|^2 chi_a).
//
// The small-angle form is used at all scattering angles. Collisions with
// |n x n'| of order one destroy coherence completely, so the shape of the
// amplitude there does not affect localization rates. Note that the form is
// also peaked at exact backscattering (n' = -n), where |n x n'| vanishes again.

#include "anisodec/vec3.hpp"

namespace anisodec {

struct AnisotropicPotential {
    double strength;    ///< C, J m^s
    int exponent;       ///< s
    double anisotropy;  ///< a

    /// Requires C > 0, s >= 4 and a > -1 (so 1 + a cos^2 T > 0 everywhere).
    AnisotropicPotential(double C, int s, double a);

    AnisotropicPotential with_anisotropy(double a) const { return {strength, exponent, a}; }
};

/// Dipole-induced-dipole interaction: s = 6, a = 3, C = alpha0 d0^2 / (32 pi^2 eps0^2).
/// alpha0 in C m^2 / V, d0 in C m.
AnisotropicPotential dipole_induced_dipole(double alpha0, double d0);

/// Orientation-dependent eikonal scattering of a gas particle of mass
/// `gas_mass` off an anisotropic potential. Orientation enters only through
/// cos T = n . m of the incoming direction, and only as cos^2 T.
class EikonalScatterer {
public:
    EikonalScatterer(const AnisotropicPotential& potential, double gas_mass);

    const AnisotropicPotential& potential() const { return pot_; }
    double gas_mass() const { return mass_; }
    bool supports_amplitude() const { return pot_.exponent >= 6; }

    /// sigma_a(p n; Omega), m^2.
    double cross_section(double p, double cos_theta) const;
    /// Forward amplitude f_fwd(p n; Omega), m. Its phase is exp(i pi (s-3) / 2(s-1)).
    complex forward_amplitude(double p, double cos_theta) const;
    /// Width coefficient chi_a(p n; Omega). Its phase is exp(-i pi / (s-1)). Requires s >= 6.
    complex chi(double p, double cos_theta) const;
    /// f(p n', p n; Omega) in the small-angle form.
    complex amplitude(double p, const Vec3& n, const Vec3& n_out, const Vec3& m) const;

    // Separable pieces used by the rate integrals:
    //   sigma = cross_section_scale(p) * anisotropy_factor(cos^2 T)
    //   f_fwd = forward_coefficient() * p * sigma
    //   chi   = chi_coefficient() * p^2 * sigma
    double cross_section_scale(double p) const;
    double anisotropy_factor(double cos2) const;
    complex forward_coefficient() const { return fwd_coeff_; }
    complex chi_coefficient() const;

    /// The a = 0 reductions sigma_0(p) and chi_0(p).
    double isotropic_cross_section(double p) const { return cross_section_scale(p); }
    complex isotropic_chi(double p) const { return chi_coefficient() * p * p * cross_section_scale(p); }

private:
    AnisotropicPotential pot_;
    double mass_;
    double power_;        // 2 / (s - 1)
    double sigma_coeff_;  // sigma = sigma_coeff_ * p^-power_ * h(c)
    double aniso_c0_;     // 1 + a (s-1) / 2s
    double aniso_c1_;     // a (s-3) / 2s
    complex fwd_coeff_;
    complex chi_coeff_;
};

// Free-function forms.
double total_cross_section(const AnisotropicPotential& pot, double gas_mass, double p, double cos_theta);
complex forward_amplitude(const AnisotropicPotential& pot, double gas_mass, double p, double cos_theta);
complex chi_a(const AnisotropicPotential& pot, double gas_mass, double p, double cos_theta);
complex amplitude(const AnisotropicPotential& pot, double gas_mass, double p, const Vec3& n, const Vec3& n_out,
                  const Vec3& m);

}  // namespace anisodec
