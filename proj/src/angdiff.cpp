#include "anisodec/angdiff.hpp"

#include <cmath>

#include "anisodec/errors.hpp"
#include "anisodec/special.hpp"

namespace anisodec {

using constants::hbar;
using constants::pi;
using detail::require;

const char* to_string(DiffusionSource s) {
    switch (s) {
        case DiffusionSource::gas: return "gas";
        case DiffusionSource::rayleigh_gans: return "rayleigh-gans";
        case DiffusionSource::blackbody: return "blackbody";
    }
    return "unknown";
}

namespace {

double gamma_sum(const EikonalScatterer& sc, const GasEnvironment& gas, const RadialGrid& radial, int panel_nodes) {
    const complex chic = sc.chi_coefficient();
    double acc = 0.0;
    for (std::size_t k = 0; k < radial.size(); ++k) {
        const double p = radial.nodes()[k];
        const double sigma = sc.isotropic_cross_section(p);
        const complex chi0 = chic * (p * p * sigma);
        const AxialRule rule = AxialRule::graded(2.0 * chi0.real(), 0.0, panel_nodes);
        double inner = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double xi = rule.nodes[i];
            const double s2 = (1.0 - xi) * (1.0 + xi);
            inner += rule.weights[i] * std::exp(-2.0 * s2 * chi0.real()) * std::norm(s2 * chi0 - 1.0);
        }
        acc += radial.weights()[k] * maxwell_boltzmann_pdf(gas, p) * std::pow(p, 5) * sigma * sigma * inner;
    }
    return acc;
}

}  // namespace

Estimate<double> gas_diffusion_rate(const AnisotropicPotential& pot, const GasEnvironment& gas, int radial_nodes) {
    require(radial_nodes >= 4, "radial_nodes", "must be at least 4");
    const EikonalScatterer sc(pot, gas.particle_mass);
    if (!sc.supports_amplitude()) throw DomainError("s", "the diffusion rate needs chi_0, which requires s >= 6");
    const double s = pot.exponent;
    const double cs = std::cos(pi / (s - 1.0));
    const double shape = (s - 3.0) / (s * (s - 1.0));
    const double pref = gas.number_density / (2.0 * gas.particle_mass * hbar * hbar * cs * cs) * shape * shape;

    const RadialGrid radial = RadialGrid::maxwell_boltzmann(gas, radial_nodes);
    const double fine = gamma_sum(sc, gas, radial, 12);
    const double half_radial = gamma_sum(sc, gas, radial.with_nodes(radial_nodes / 2), 12);
    const double half_axial = gamma_sum(sc, gas, radial, 6);
    const double err = std::max(std::abs(fine - half_radial), std::abs(fine - half_axial)) +
                       detail::rounding_floor(std::abs(fine), radial.size() * 64);
    return {pref * fine, pref * err, ErrorMethod::refinement_difference};
}

DiffusionCoefficient diffusion_coefficient_gas(const AnisotropicPotential& pot, const GasEnvironment& gas,
                                               int radial_nodes) {
    const auto g = gas_diffusion_rate(pot, gas, radial_nodes);
    const double f = 2.0 * (hbar * pot.anisotropy) * (hbar * pot.anisotropy) / 15.0;
    return {f * g.value, f * g.abs_error, DiffusionSource::gas};
}

DiffusionCoefficient diffusion_coefficient_rg(const DielectricRod& rod, const PhotonMode& mode) {
    const double d = rod.anisotropy_ratio();
    const double kl = mode.wavenumber() * rod.length();
    const double bracket = d * d / 3.0 + std::pow(kl, 4) / 540.0;
    return {scattering_rate_gamma0(rod, mode) * hbar * hbar * bracket, 0.0, DiffusionSource::rayleigh_gans};
}

DiffusionCoefficient diffusion_coefficient_blackbody(const DielectricRod& rod, const BlackBodyEnvironment& env) {
    const double kt = env.thermal_wavenumber();
    const double d = rod.anisotropy_ratio();
    const double x = hbar * rod.chi_parallel() * rod.volume();
    const double bracket = constants::zeta7 * d * d + 28.0 * constants::zeta11 * std::pow(kt * rod.length(), 4);
    return {40.0 * constants::c * x * x / (pi * pi * pi) * std::pow(kt, 7) * bracket, 0.0,
            DiffusionSource::blackbody};
}

double small_anisotropy_rate(double D, const Vec3& m1, const Vec3& m2) {
    require(D >= 0.0, "D", "diffusion coefficient must be non-negative");
    return D / (hbar * hbar) * cross_norm2(m1, m2);
}

namespace {

double tail_mass(const std::vector<double>& p) {
    double sum = 0.0;
    // Small terms first.
    for (auto it = p.rbegin(); it != p.rend(); ++it) sum += *it;
    return std::abs(1.0 - sum);
}

std::vector<double> population_values(double tau, int j_max, int nodes) {
    const auto& gl = gauss_legendre(nodes);
    std::vector<double> p(j_max + 1, 0.0);
    std::vector<double> leg(j_max + 1);
    // Symmetric nodes: accumulate x >= 0 only and use the parity of P_j.
    const std::size_t n = gl.nodes.size();
    for (std::size_t i = n / 2; i < n; ++i) {
        const double x = gl.nodes[i];
        double w = gl.weights[i] * std::exp(-tau * (1.0 - x) * (1.0 + x));
        if (x == 0.0) w *= 0.5;
        legendre_table(x, leg);
        for (int j = 0; j <= j_max; j += 2) p[j] += 2.0 * w * leg[j];
    }
    for (int j = 0; j <= j_max; ++j) p[j] *= 0.5 * (2.0 * j + 1.0);
    return p;
}

}  // namespace

PopulationVector populations_at(double tau, int j_max) {
    require(tau >= 0.0 && std::isfinite(tau), "t", "D t / hbar^2 must be finite and non-negative");
    PopulationVector pv;
    pv.tau = tau;
    int jm = j_max > 0 ? j_max : static_cast<int>(std::ceil(6.0 * std::sqrt(tau))) + 32;
    jm = std::min(jm, population_j_cap);
    for (;;) {
        // exp(tau x^2) needs polynomial degree ~ 12 sqrt(tau) to resolve; P_j adds j.
        const int nodes = std::max(512, jm + static_cast<int>(std::ceil(12.0 * std::sqrt(tau))) + 64);
        pv.p = population_values(tau, jm, nodes);
        pv.nodes = nodes;
        pv.tail = tail_mass(pv.p);
        if (pv.tail < population_tail_tolerance) break;
        if (jm >= population_j_cap) {
            pv.truncated = true;
            break;
        }
        jm = std::min(2 * jm, population_j_cap);
    }
    return pv;
}

PopulationVector populations(double D, double t, int j_max) {
    require(D >= 0.0 && std::isfinite(D), "D", "diffusion coefficient must be non-negative");
    require(t >= 0.0 && std::isfinite(t), "t", "time must be non-negative");
    PopulationVector pv = populations_at(D * t / (hbar * hbar), j_max);
    pv.D = D;
    pv.t = t;
    return pv;
}

double gaussian_asymptote_at(double tau, int j) {
    require(tau > 0.0, "t", "D t / hbar^2 must be positive");
    require(j >= 0, "j", "must be non-negative");
    const double jh = j + 0.5;
    return (2.0 * j + 1.0) / (4.0 * tau) * std::exp(-jh * jh / (4.0 * tau));
}

double gaussian_asymptote(double D, double t, int j) { return gaussian_asymptote_at(D * t / (hbar * hbar), j); }

double second_moment(const PopulationVector& pv) {
    double sum = 0.0;
    for (int j = pv.j_max(); j >= 0; --j) sum += static_cast<double>(j) * (j + 1.0) * pv.p[j];
    return sum;
}

}  // namespace anisodec
