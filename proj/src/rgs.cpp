#include "anisodec/rgs.hpp"

#include <cmath>

#include "anisodec/errors.hpp"
#include "anisodec/special.hpp"

namespace anisodec {

using constants::pi;
using detail::require;

DielectricRod::DielectricRod(double length, double radius, double permittivity)
    : length_(length), radius_(radius), eps_r_(permittivity) {
    require(length_ > 0.0 && std::isfinite(length_), "rod_length_m", "must be positive");
    require(radius_ > 0.0 && std::isfinite(radius_), "rod_radius_m", "must be positive");
    require(eps_r_ >= 1.0 && std::isfinite(eps_r_), "permittivity", "must be at least 1");
}

PolarizationBasis PolarizationBasis::for_direction(const Vec3& n_out) {
    const auto [e1, e2] = transverse_basis(n_out);
    return {e1, e2};
}

Vec3 internal_polarization(const DielectricRod& rod, const Vec3& m, const Vec3& eps_p) {
    require(rod.chi_parallel() > 0.0, "permittivity", "transparent rod (eps_r = 1) has no internal polarization");
    return (rod.chi_perpendicular() / rod.chi_parallel()) * eps_p +
           (rod.delta_chi() / rod.chi_parallel()) * dot(m, eps_p) * m;
}

Vec3 internal_polarization_ratio(const DielectricRod& rod, const Vec3& m, const Vec3& eps_p) {
    return rod.perpendicular_ratio() * eps_p + rod.anisotropy_ratio() * dot(m, eps_p) * m;
}

VectorAmplitude vector_amplitude(const DielectricRod& rod, const PhotonMode& mode, const Vec3& n_out,
                                 const Vec3& m) {
    const double k = mode.wavenumber();
    const Vec3 u = internal_polarization_ratio(rod, m, mode.polarization());
    const double s = sinc(0.5 * k * rod.length() * dot(m, mode.direction().vec() - n_out));
    const double pref = -rod.volume() * rod.chi_parallel() * k * k / (4.0 * pi) * s;
    return {pref * cross(n_out, cross(n_out, u)), !rod.thin_rod_valid(k)};
}

double scattering_rate_gamma0(const DielectricRod& rod, const PhotonMode& mode) {
    const double e0 = mode.field_amplitude();
    const double chi = rod.chi_parallel();
    const double v0 = rod.volume();
    const double k = mode.wavenumber();
    return constants::eps0 * e0 * e0 * chi * chi * v0 * v0 * k * k * k / (12.0 * pi * constants::hbar);
}

complex jump_function_B(const DielectricRod& rod, const PhotonMode& mode, const Vec3& n_out, const Vec3& eps,
                        const Vec3& R, const Vec3& m) {
    const double k = mode.wavenumber();
    const Vec3 q = mode.direction().vec() - n_out;
    const Vec3 u = internal_polarization(rod, m, mode.polarization());
    const double amp = std::sqrt(1.5) * dot(eps, u) * sinc(0.5 * k * rod.length() * dot(m, q));
    const double phase = k * dot(q, R);
    return amp * complex(std::cos(phase), std::sin(phase));
}

complex jump_function_B(const DielectricRod& rod, const PhotonMode& mode, const Vec3& n_out, int s, const Vec3& R,
                        const Vec3& m) {
    require(s == 0 || s == 1, "polarization_index", "must be 0 or 1");
    return jump_function_B(rod, mode, n_out, PolarizationBasis::for_direction(n_out)[s], R, m);
}

double laser_potential(const DielectricRod& rod, const PhotonMode& mode, const Vec3& m) {
    const double e0 = mode.field_amplitude();
    const double c = dot(m, mode.polarization().vec());
    // -eps0 V0 E0^2 / 4 * (chi_par * [chi_perp/chi_par + dchi/chi_par c^2])
    return -constants::eps0 * rod.volume() * e0 * e0 / 4.0 * (rod.chi_perpendicular() + rod.delta_chi() * c * c);
}

}  // namespace anisodec
