#pragma once

// Rayleigh-Gans scattering of a running laser wave off a thin dielectric rod.
// The mode volume never appears: photon-number factors are eliminated in
// favour of the classical field amplitude E0.

#include <array>

#include "anisodec/units.hpp"
#include "anisodec/vec3.hpp"

namespace anisodec {

class DielectricRod {
public:
    DielectricRod(double length, double radius, double permittivity);

    double length() const { return length_; }
    double radius() const { return radius_; }
    double permittivity() const { return eps_r_; }

    /// pi l a0^2
    double volume() const { return constants::pi * length_ * radius_ * radius_; }

    double chi_parallel() const { return eps_r_ - 1.0; }
    double chi_perpendicular() const { return 2.0 * (eps_r_ - 1.0) / (eps_r_ + 1.0); }
    double delta_chi() const { return (eps_r_ - 1.0) * (eps_r_ - 1.0) / (eps_r_ + 1.0); }

    // Ratios to chi_parallel, written so they stay finite at eps_r = 1.
    double perpendicular_ratio() const { return 2.0 / (eps_r_ + 1.0); }
    double anisotropy_ratio() const { return (eps_r_ - 1.0) / (eps_r_ + 1.0); }

    /// Thin-rod condition k^2 a0^2 (eps_r - 1) < 1.
    bool thin_rod_valid(double k) const { return k * k * radius_ * radius_ * (eps_r_ - 1.0) < 1.0; }

private:
    double length_, radius_, eps_r_;
};

/// Orthonormal polarization pair transverse to a scattering direction.
struct PolarizationBasis {
    Vec3 e1, e2;

    static PolarizationBasis for_direction(const Vec3& n_out);
    const Vec3& operator[](int s) const { return s == 0 ? e1 : e2; }
};

/// u(Omega) = (chi_perp/chi_par) eps_p + (dchi/chi_par)(m.eps_p) m. Not unit length.
/// Throws DomainError for a transparent rod (eps_r = 1).
Vec3 internal_polarization(const DielectricRod& rod, const Vec3& m, const Vec3& eps_p);

/// u(Omega) with the ratio forms, valid down to eps_r = 1.
Vec3 internal_polarization_ratio(const DielectricRod& rod, const Vec3& m, const Vec3& eps_p);

struct VectorAmplitude {
    Vec3 value;                      ///< m
    bool thin_rod_warning = false;   ///< k^2 a0^2 (eps_r - 1) >= 1
};

/// F(p n', p n; Omega) = -(V0 chi_par k^2 / 4 pi) n' x (n' x u) sinc[(k l / 2) m.(n - n')].
/// The amplitude is real; its projection on n' vanishes identically.
VectorAmplitude vector_amplitude(const DielectricRod& rod, const PhotonMode& mode, const Vec3& n_out,
                                 const Vec3& m);

/// gamma0 |b|^2 = eps0 E0^2 chi_par^2 V0^2 k^3 / (12 pi hbar), the total
/// point-dipole scattering rate of the mode (1/s).
double scattering_rate_gamma0(const DielectricRod& rod, const PhotonMode& mode);

/// Jump function B_{n's}(R, Omega) = sqrt(3/2) exp(i k (n - n').R) eps_{n's}.u sinc[(k l/2) m.(n - n')],
/// polarization index s in {0, 1} of PolarizationBasis::for_direction(n_out).
complex jump_function_B(const DielectricRod& rod, const PhotonMode& mode, const Vec3& n_out, int s, const Vec3& R,
                        const Vec3& m);

/// Same, with an explicit polarization vector eps (must be unit and transverse to n_out).
complex jump_function_B(const DielectricRod& rod, const PhotonMode& mode, const Vec3& n_out, const Vec3& eps,
                        const Vec3& R, const Vec3& m);

/// H_L(Omega) = hbar U0 |b|^2 [chi_perp/chi_par + (dchi/chi_par)(m.eps_p)^2], with
/// hbar U0 |b|^2 = -eps0 chi_par V0 E0^2 / 4. Most negative for m parallel to eps_p.
double laser_potential(const DielectricRod& rod, const PhotonMode& mode, const Vec3& m);

}  // namespace anisodec
