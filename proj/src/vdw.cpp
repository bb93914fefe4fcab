#include "anisodec/vdw.hpp"

#include <cmath>

#include "anisodec/errors.hpp"
#include "anisodec/units.hpp"

namespace anisodec {

using constants::hbar;
using constants::pi;
using detail::require;

AnisotropicPotential::AnisotropicPotential(double C, int s, double a) : strength(C), exponent(s), anisotropy(a) {
    require(strength > 0.0 && std::isfinite(strength), "C", "potential strength must be positive");
    require(exponent >= 4, "s", "exponent must be at least 4");
    require(anisotropy > -1.0 && std::isfinite(anisotropy), "a", "anisotropy must exceed -1");
}

AnisotropicPotential dipole_induced_dipole(double alpha0, double d0) {
    require(alpha0 > 0.0, "alpha0", "polarizability must be positive");
    require(d0 > 0.0, "d0", "dipole moment must be positive");
    const double eps0 = constants::eps0;
    return {alpha0 * d0 * d0 / (32.0 * pi * pi * eps0 * eps0), 6, 3.0};
}

EikonalScatterer::EikonalScatterer(const AnisotropicPotential& potential, double gas_mass)
    : pot_(potential), mass_(gas_mass) {
    require(mass_ > 0.0 && std::isfinite(mass_), "gas_mass_kg", "must be positive");
    const double s = pot_.exponent;
    const double a = pot_.anisotropy;
    power_ = 2.0 / (s - 1.0);
    const double g_ratio = std::tgamma((s - 1.0) / 2.0) / std::tgamma(s / 2.0);
    const double base = std::sqrt(pi) * mass_ * pot_.strength / hbar * g_ratio;
    sigma_coeff_ = 2.0 * pi * std::sin(0.5 * pi * (s - 3.0) / (s - 1.0)) * std::tgamma((s - 3.0) / (s - 1.0)) *
                   std::pow(base, power_);
    aniso_c0_ = 1.0 + a * (s - 1.0) / (2.0 * s);
    aniso_c1_ = a * (s - 3.0) / (2.0 * s);
    const double cos_s = std::cos(pi / (s - 1.0));
    fwd_coeff_ = std::polar(1.0 / (4.0 * pi * hbar * cos_s), 0.5 * pi * (s - 3.0) / (s - 1.0));
    if (pot_.exponent >= 6) {
        const double g3 = std::tgamma((s - 3.0) / (s - 1.0));
        const double mag = 1.0 / (8.0 * hbar * hbar) / (2.0 * pi * cos_s) * std::tgamma((s - 5.0) / (s - 1.0)) /
                           (g3 * g3);
        chi_coeff_ = std::polar(mag, -pi / (s - 1.0));
    }
}

double EikonalScatterer::cross_section_scale(double p) const { return sigma_coeff_ * std::pow(p, -power_); }

double EikonalScatterer::anisotropy_factor(double cos2) const {
    return std::pow(aniso_c0_ - aniso_c1_ * cos2, power_);
}

complex EikonalScatterer::chi_coefficient() const {
    if (!supports_amplitude())
        throw DomainError("s", "amplitude width chi_a needs s >= 6 (Gamma((s-5)/(s-1)) has a pole at s = 5)");
    return chi_coeff_;
}

double EikonalScatterer::cross_section(double p, double cos_theta) const {
    require(p > 0.0 && std::isfinite(p), "p", "momentum must be positive");
    require(std::abs(cos_theta) <= 1.0 + 1e-12, "cos_theta", "must lie in [-1, 1]");
    return cross_section_scale(p) * anisotropy_factor(cos_theta * cos_theta);
}

complex EikonalScatterer::forward_amplitude(double p, double cos_theta) const {
    return fwd_coeff_ * (p * cross_section(p, cos_theta));
}

complex EikonalScatterer::chi(double p, double cos_theta) const {
    return chi_coefficient() * (p * p * cross_section(p, cos_theta));
}

complex EikonalScatterer::amplitude(double p, const Vec3& n, const Vec3& n_out, const Vec3& m) const {
    const double c = dot(n, m);
    const double sigma = cross_section(p, c);
    const complex w = chi_coefficient() * (p * p * sigma);
    return fwd_coeff_ * (p * sigma) * std::exp(-cross_norm2(n, n_out) * w);
}

double total_cross_section(const AnisotropicPotential& pot, double gas_mass, double p, double cos_theta) {
    return EikonalScatterer(pot, gas_mass).cross_section(p, cos_theta);
}

complex forward_amplitude(const AnisotropicPotential& pot, double gas_mass, double p, double cos_theta) {
    return EikonalScatterer(pot, gas_mass).forward_amplitude(p, cos_theta);
}

complex chi_a(const AnisotropicPotential& pot, double gas_mass, double p, double cos_theta) {
    return EikonalScatterer(pot, gas_mass).chi(p, cos_theta);
}

complex amplitude(const AnisotropicPotential& pot, double gas_mass, double p, const Vec3& n, const Vec3& n_out,
                  const Vec3& m) {
    return EikonalScatterer(pot, gas_mass).amplitude(p, n, n_out, m);
}

}  // namespace anisodec
