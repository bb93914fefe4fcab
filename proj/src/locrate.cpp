#include "anisodec/locrate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "anisodec/errors.hpp"
#include "anisodec/parallel.hpp"
#include "anisodec/special.hpp"

namespace anisodec {

using constants::pi;

PairConfiguration PairConfiguration::orientational(double theta) {
    return {Vec3{}, UnitVector::trusted({0.0, 0.0, 1.0}),
            UnitVector::trusted({std::sin(theta), 0.0, std::cos(theta)})};
}

double thermal_momentum(const GasEnvironment& gas) { return std::sqrt(2.0 * gas.momentum_variance()); }

namespace {

constexpr double nonconvergence_fraction = 0.05;

// Errors at the rounding level of the total scattering rate `natural` are
// accepted even when the rate itself vanishes (diagonal configurations).
constexpr double rounding_fraction = 1e-10;

void flag_convergence(RateResult& r, double scale, double natural) {
    if (r.quadrature_error > nonconvergence_fraction * scale && r.quadrature_error > rounding_fraction * natural) {
        r.converged = false;
        std::ostringstream os;
        os << "quadrature error " << r.quadrature_error << " exceeds 5% of " << scale;
        r.warnings.push_back(os.str());
    }
}

// ---------------------------------------------------------------------------
// Gas

// 2 pi int dxi exp(-z (1 - xi^2)) exp(i (1 - xi) q_par) J0(sqrt(1 - xi^2) q_perp),
// the n' integral of the cross term for a plane-wave phase exp(i q.(n - n')).
complex displaced_kernel(complex z, double q_par, double q_perp) {
    const AxialRule rule = AxialRule::graded(z.real(), std::hypot(q_par, q_perp) + 2.0 * std::abs(z.imag()));
    complex sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double xi = rule.nodes[i];
        const double s2 = (1.0 - xi) * (1.0 + xi);
        const double bessel = q_perp == 0.0 ? 1.0 : std::cyl_bessel_j(0.0, std::sqrt(s2) * q_perp);
        sum += rule.weights[i] * bessel * std::exp(-z * s2 + complex(0.0, (1.0 - xi) * q_par));
    }
    return 2.0 * pi * sum;
}

struct GasSums {
    double F = 0.0;          // sum of w |f e^{i phi} - f'|^2
    double G = 0.0;          // sum of w Im(f f'^* e^{i phi})
    double magnitude = 0.0;  // sum of w (|f|^2 + |f'|^2), the scale of the cancellation in F
    std::size_t terms = 0;
};

GasSums gas_sums(const EikonalScatterer& sc, const GasEnvironment& gas, const PairConfiguration& cfg,
                 const SphereGrid& sphere, const RadialGrid& radial) {
    const Vec3& m1 = cfg.m1;
    const Vec3& m2 = cfg.m2;
    const Vec3 R = cfg.separation;
    const bool displaced = norm2(R) > 0.0;
    // Per node: anisotropy factors, quadrature weight and the components of
    // R along and across n (per unit of p / hbar). Without displacement the
    // integrand depends on n only through (n.m1)^2 and (n.m2)^2, so nodes
    // related by symmetry are merged.
    std::vector<double> h1, h2, wn, qpar, qperp;
    std::map<std::pair<long long, long long>, std::size_t> merged;
    const auto nodes = sphere.nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double c1 = dot(nodes[i], m1);
        const double c2 = dot(nodes[i], m2);
        if (!displaced) {
            const auto key = std::make_pair(std::llround(c1 * c1 * 1e13), std::llround(c2 * c2 * 1e13));
            const auto [it, fresh] = merged.emplace(key, wn.size());
            if (!fresh) {
                wn[it->second] += sphere.weights()[i];
                continue;
            }
        }
        h1.push_back(sc.anisotropy_factor(c1 * c1));
        h2.push_back(sc.anisotropy_factor(c2 * c2));
        wn.push_back(sphere.weights()[i]);
        const double par = dot(R, nodes[i]);
        qpar.push_back(par);
        qperp.push_back(std::sqrt(std::max(0.0, norm2(R) - par * par)));
    }
    const std::size_t nn = wn.size();
    const complex fwd = sc.forward_coefficient();
    const complex chic = sc.chi_coefficient();

    GasSums out;
    const auto ps = radial.nodes();
    const auto wp = radial.weights();
    for (std::size_t k = 0; k < ps.size(); ++k) {
        const double p = ps[k];
        const double measure = wp[k] * p * p * p * maxwell_boltzmann_pdf(gas, p);
        if (measure == 0.0) continue;
        const double scale = sc.cross_section_scale(p);
        const double q = p / constants::hbar;
        double f_acc = 0.0, g_acc = 0.0, m_acc = 0.0;
        for (std::size_t i = 0; i < nn; ++i) {
            const double s1 = scale * h1[i];
            const double s2 = scale * h2[i];
            const complex a1 = fwd * (p * s1);
            const complex a2 = fwd * (p * s2);
            const complex z1 = chic * (p * p * s1);
            const complex z2 = chic * (p * p * s2);
            const double d1 = std::norm(a1) * exp_sin2_sphere_integral(2.0 * z1.real()).real();
            // Identical anisotropy factors give bitwise identical terms, so the
            // diagonal cancels exactly.
            const double d2 = h1[i] == h2[i] ? d1 : std::norm(a2) * exp_sin2_sphere_integral(2.0 * z2.real()).real();
            const complex zc = z1 + std::conj(z2);
            const complex kernel =
                displaced ? displaced_kernel(zc, q * qpar[i], q * qperp[i]) : exp_sin2_sphere_integral(zc);
            const complex cross = a1 * std::conj(a2) * kernel;
            f_acc += wn[i] * (d1 + d2 - 2.0 * cross.real());
            g_acc += wn[i] * cross.imag();
            m_acc += wn[i] * (d1 + d2);
        }
        if (!std::isfinite(f_acc) || !std::isfinite(g_acc))
            detail::throw_non_finite("gas_rates", k, "p = " + std::to_string(p));
        out.F += measure * f_acc;
        out.G += measure * g_acc;
        out.magnitude += measure * m_acc;
    }
    out.terms = nodes.size() * ps.size();
    return out;
}

std::vector<std::pair<std::string, double>> gas_inputs(const AnisotropicPotential& pot, const GasEnvironment& gas,
                                                       const PairConfiguration& cfg, const GasRateOptions& opts) {
    const Vec3& m1 = cfg.m1;
    const Vec3& m2 = cfg.m2;
    const double pth = thermal_momentum(gas);
    return {{"C_J_m^s", pot.strength},
            {"s", static_cast<double>(pot.exponent)},
            {"a", pot.anisotropy},
            {"temperature_K", gas.temperature},
            {"gas_mass_kg", gas.particle_mass},
            {"number_density_per_m3", gas.number_density},
            {"separation_m", norm(cfg.separation)},
            {"separation_over_thermal_wavelength", pth * norm(cfg.separation) / constants::hbar},
            {"m1_dot_m2", dot(m1, m2)},
            {"sphere_order", static_cast<double>(opts.sphere_order)},
            {"radial_nodes", static_cast<double>(opts.radial_nodes)}};
}

}  // namespace

GasRates gas_rates(const AnisotropicPotential& pot, const GasEnvironment& gas, const PairConfiguration& cfg,
                   const GasRateOptions& opts) {
    detail::require(opts.sphere_order >= 2, "sphere_order", "must be at least 2");
    detail::require(opts.radial_nodes >= 4, "radial_nodes", "must be at least 4");
    const EikonalScatterer sc(pot, gas.particle_mass);
    if (!sc.supports_amplitude())
        throw DomainError("s", "localization rates need the small-angle amplitude, which requires s >= 6");

    const RadialGrid radial = RadialGrid::maxwell_boltzmann(gas, opts.radial_nodes);
    const SphereGrid& sphere = SphereGrid::cached(opts.sphere_order);
    const GasSums fine = gas_sums(sc, gas, cfg, sphere, radial);
    const GasSums half_sphere = gas_sums(sc, gas, cfg, SphereGrid::cached(opts.sphere_order / 2), radial);
    const GasSums half_radial = gas_sums(sc, gas, cfg, sphere, radial.with_nodes(opts.radial_nodes / 2));

    const double pref_f = gas.number_density / (2.0 * gas.particle_mass);
    const double pref_g = gas.number_density / gas.particle_mass;
    const double floor = detail::rounding_floor(pref_f * fine.magnitude, fine.terms);

    GasRates out;
    auto& F = out.localization;
    F.rate = pref_f * fine.F;
    F.quadrature_error =
        pref_f * std::max(std::abs(fine.F - half_sphere.F), std::abs(fine.F - half_radial.F)) + floor;
    auto& G = out.phase;
    G.rate = pref_g * fine.G;
    G.quadrature_error =
        pref_g * std::max(std::abs(fine.G - half_sphere.G), std::abs(fine.G - half_radial.G)) + 2.0 * floor;
    F.inputs = G.inputs = gas_inputs(pot, gas, cfg, opts);
    flag_convergence(F, std::abs(F.rate), pref_f * fine.magnitude);
    // G may pass through zero; measure its error against the decay rate scale.
    flag_convergence(G, std::max(std::abs(G.rate), std::abs(F.rate)), pref_f * fine.magnitude);
    return out;
}

RateResult localization_rate_gas(const AnisotropicPotential& pot, const GasEnvironment& gas,
                                 const PairConfiguration& cfg, const GasRateOptions& opts) {
    return gas_rates(pot, gas, cfg, opts).localization;
}

RateResult phase_frequency_gas(const AnisotropicPotential& pot, const GasEnvironment& gas,
                               const PairConfiguration& cfg, const GasRateOptions& opts) {
    return gas_rates(pot, gas, cfg, opts).phase;
}

std::vector<GasRates> gas_rate_curve(const AnisotropicPotential& pot, const GasEnvironment& gas,
                                     const std::vector<double>& thetas, const GasRateOptions& opts) {
    detail::require(!thetas.empty(), "theta_grid", "must contain at least one angle");
    std::vector<GasRates> out(thetas.size());
    parallel_for(thetas.size(), [&](std::size_t i) {
        out[i] = gas_rates(pot, gas, PairConfiguration::orientational(thetas[i]), opts);
    });
    return out;
}

// ---------------------------------------------------------------------------
// Photons, single mode

RateResult localization_rate_photon(const DielectricRod& rod, const PhotonMode& mode, const PairConfiguration& cfg,
                                    const PhotonRateOptions& opts) {
    detail::require(opts.sphere_order >= 2, "sphere_order", "must be at least 2");
    const double k = mode.wavenumber();
    const Vec3 n = mode.direction();
    const Vec3& m1 = cfg.m1;
    const Vec3& m2 = cfg.m2;
    const Vec3 R = cfg.separation;
    // Ratio forms: F / (gamma0 |b|^2) stays finite at eps_r = 1.
    const double amp = std::sqrt(1.5);
    const Vec3 u1 = internal_polarization_ratio(rod, m1, mode.polarization());
    const Vec3 u2 = internal_polarization_ratio(rod, m2, mode.polarization());
    const double half_kl = 0.5 * k * rod.length();

    auto integrand = [&](const Vec3& n_out) -> complex {
        const Vec3 q = n - n_out;
        const Vec3 v1 = (amp * sinc(half_kl * dot(m1, q))) * u1;
        const Vec3 v2 = (amp * sinc(half_kl * dot(m2, q))) * u2;
        const double cphi = std::cos(k * dot(q, R));
        const double a1 = dot(n_out, v1);
        const double a2 = dot(n_out, v2);
        // sum_s |eps_s . w|^2 = |w|^2 - |n'.w|^2 with w = e^{i phi} v1 - v2.
        const double w2 = norm2(v1) + norm2(v2) - 2.0 * cphi * dot(v1, v2);
        const double nw2 = a1 * a1 + a2 * a2 - 2.0 * cphi * a1 * a2;
        return 0.5 * (w2 - nw2) / (4.0 * pi);
    };
    const auto est = integrate_sphere(SphereGrid::cached(opts.sphere_order), integrand);

    RateResult r;
    r.reference_rate = scattering_rate_gamma0(rod, mode);
    r.normalized = est.value.real();
    r.rate = r.reference_rate * r.normalized;
    r.quadrature_error = r.reference_rate * est.abs_error;
    r.inputs = {{"rod_length_m", rod.length()},
                {"rod_radius_m", rod.radius()},
                {"permittivity", rod.permittivity()},
                {"wavenumber_per_m", k},
                {"field_amplitude_V_per_m", mode.field_amplitude()},
                {"separation_m", norm(R)},
                {"m1_dot_m2", dot(m1, m2)},
                {"sphere_order", static_cast<double>(opts.sphere_order)}};
    if (!rod.thin_rod_valid(k)) r.warnings.emplace_back("thin-rod condition k^2 a0^2 (eps_r - 1) < 1 violated");
    flag_convergence(r, std::abs(r.rate), r.reference_rate);
    return r;
}

// ---------------------------------------------------------------------------
// Photons, isotropic unpolarized illumination
//
// Averaging over the incoming polarization eps (uniform on the circle
// perpendicular to n) and summing over outgoing polarizations gives
//
//   F / (gamma0 |b|^2) = (3/8) <<Q(Delta)>>_{n, n'},
//   Delta = alpha (s1 - s2) I + delta (s1 m1 m1^T - s2 m2 m2^T),
//   Q(Delta) = |Delta|_F^2 - |Delta n|^2 - |Delta n'|^2 + (n.Delta n')^2,
//
// with s_i = sinc[(k l/2) m_i.(n - n')] and <<.>> the average over both
// directions. Q is quadratic in (alpha, delta), so three angular integrals
// serve every permittivity.

namespace {

struct Coeffs {
    double aa = 0.0, ab = 0.0, bb = 0.0;
};

Coeffs isotropic_sums(double k_ell, const Vec3& m1, const Vec3& m2, const SphereGrid& grid) {
    const auto nodes = grid.nodes();
    const auto w = grid.weights();
    const std::size_t nn = nodes.size();
    const double h = 0.5 * k_ell;
    const double mu = dot(m1, m2);
    // sin(h (c_n - c_n')) = sin(h c_n) cos(h c_n') - cos(h c_n) sin(h c_n').
    std::vector<double> c1(nn), c2(nn), sn1(nn), cs1(nn), sn2(nn), cs2(nn);
    for (std::size_t i = 0; i < nn; ++i) {
        c1[i] = dot(nodes[i], m1);
        c2[i] = dot(nodes[i], m2);
        sn1[i] = std::sin(h * c1[i]);
        cs1[i] = std::cos(h * c1[i]);
        sn2[i] = std::sin(h * c2[i]);
        cs2[i] = std::cos(h * c2[i]);
    }
    auto sinc_diff = [h](double ca, double cb, double sa, double caa, double sb, double cbb) {
        const double x = h * (ca - cb);
        if (std::abs(x) < 1e-4) {
            const double x2 = x * x;
            return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
        }
        return (sa * cbb - caa * sb) / x;
    };

    Coeffs acc;
    for (std::size_t i = 0; i < nn; ++i) {
        const Vec3& n = nodes[i];
        Coeffs row;
        for (std::size_t j = 0; j < nn; ++j) {
            const Vec3& np = nodes[j];
            const double s1 = sinc_diff(c1[i], c1[j], sn1[i], cs1[i], sn1[j], cs1[j]);
            const double s2 = sinc_diff(c2[i], c2[j], sn2[i], cs2[i], sn2[j], cs2[j]);
            const double d = s1 - s2;
            const double xi = dot(n, np);
            // A = d I, B = s1 m1 m1^T - s2 m2 m2^T.
            const double nbn = s1 * c1[i] * c1[i] - s2 * c2[i] * c2[i];
            const double pbp = s1 * c1[j] * c1[j] - s2 * c2[j] * c2[j];
            const double nbp = s1 * c1[i] * c1[j] - s2 * c2[i] * c2[j];
            const double bn2 = s1 * s1 * c1[i] * c1[i] + s2 * s2 * c2[i] * c2[i] - 2.0 * s1 * s2 * c1[i] * c2[i] * mu;
            const double bp2 = s1 * s1 * c1[j] * c1[j] + s2 * s2 * c2[j] * c2[j] - 2.0 * s1 * s2 * c1[j] * c2[j] * mu;
            const double bf2 = s1 * s1 + s2 * s2 - 2.0 * s1 * s2 * mu * mu;
            const double qa = d * d * (1.0 + xi * xi);
            const double qab = d * d - d * nbn - d * pbp + d * xi * nbp;
            const double qb = bf2 - bn2 - bp2 + nbp * nbp;
            row.aa += w[j] * qa;
            row.ab += w[j] * qab;
            row.bb += w[j] * qb;
        }
        acc.aa += w[i] * row.aa;
        acc.ab += w[i] * row.ab;
        acc.bb += w[i] * row.bb;
    }
    const double norm = 3.0 / 8.0 / (16.0 * pi * pi);
    acc.aa *= norm;
    acc.ab *= norm;
    acc.bb *= norm;
    if (!std::isfinite(acc.aa) || !std::isfinite(acc.ab) || !std::isfinite(acc.bb))
        detail::throw_non_finite("isotropic_photon_coefficients", 0, "k l = " + std::to_string(k_ell));
    return acc;
}

double quadratic_form(const DielectricRod& rod, double aa, double ab, double bb) {
    const double al = rod.perpendicular_ratio();
    const double de = rod.anisotropy_ratio();
    return al * al * aa + 2.0 * al * de * ab + de * de * bb;
}

}  // namespace

IsotropicPhotonCoefficients isotropic_photon_coefficients(double k_ell, const Vec3& m1, const Vec3& m2,
                                                          int sphere_order) {
    detail::require(k_ell >= 0.0 && std::isfinite(k_ell), "k_ell", "must be non-negative");
    detail::require(sphere_order >= 2, "sphere_order", "must be at least 2");
    const SphereGrid& grid = SphereGrid::cached(sphere_order);
    const Coeffs fine = isotropic_sums(k_ell, m1, m2, grid);
    const Coeffs coarse = isotropic_sums(k_ell, m1, m2, SphereGrid::cached(sphere_order / 2));
    return {fine.aa, fine.ab, fine.bb, coarse.aa, coarse.ab, coarse.bb, grid.size() * grid.size()};
}

Estimate<double> IsotropicPhotonCoefficients::normalized_rate(const DielectricRod& rod) const {
    const double fine = quadratic_form(rod, aa, ab, bb);
    const double coarse = quadratic_form(rod, aa_coarse, ab_coarse, bb_coarse);
    // Terms are O(1); the rounding floor is set by their magnitude, not by the result.
    const double scale = quadratic_form(rod, std::abs(aa), std::abs(ab), std::abs(bb));
    return {fine, std::abs(fine - coarse) + detail::rounding_floor(scale, terms),
            ErrorMethod::refinement_difference};
}

Estimate<double> isotropic_photon_rate_normalized(const DielectricRod& rod, double k, const Vec3& m1,
                                                  const Vec3& m2, int sphere_order) {
    detail::require(k > 0.0, "wavenumber", "must be positive");
    return isotropic_photon_coefficients(k * rod.length(), m1, m2, sphere_order).normalized_rate(rod);
}

double unit_susceptibility_rate(const DielectricRod& rod, const WavenumberDistribution& dist) {
    const double v0 = rod.volume();
    if (const auto* mono = std::get_if<Monochromatic>(&dist)) {
        const double k = mono->wavenumber;
        const double e0 = mono->field_amplitude;
        return constants::eps0 * e0 * e0 * v0 * v0 * k * k * k / (12.0 * pi * constants::hbar);
    }
    // n_g c sigma(k) averaged over Planck, sigma = V0^2 k^4 / 6 pi, n_g <k^4> = 720 zeta(7) k_T^7 / pi^2.
    const double kt = std::get<BlackBodyEnvironment>(dist).thermal_wavenumber();
    return constants::c * v0 * v0 / (6.0 * pi) * 720.0 * constants::zeta7 * std::pow(kt, 7) / (pi * pi);
}

namespace {

void validate_distribution(const WavenumberDistribution& dist) {
    if (const auto* mono = std::get_if<Monochromatic>(&dist)) {
        detail::require(mono->wavenumber > 0.0 && std::isfinite(mono->wavenumber), "wavenumber",
                        "must be positive");
        detail::require(mono->field_amplitude >= 0.0 && std::isfinite(mono->field_amplitude),
                        "field_amplitude_V_per_m", "must be non-negative");
    }
}

// Rates for several rods sharing one length, from the angular coefficients.
// For black-body light the coefficients are tabulated at every Planck node.
struct IsotropicTable {
    std::vector<double> k, weight;  // weight = w_k n_g mu(k) c k^4 / 6 pi (per unit V0^2 chi_par^2)
    std::vector<IsotropicPhotonCoefficients> coeffs;
    // Half-node Planck rule for the radial error estimate.
    std::vector<double> k_half, weight_half;
    std::vector<IsotropicPhotonCoefficients> coeffs_half;
};

IsotropicTable isotropic_table(double length, const WavenumberDistribution& dist, const Vec3& m1, const Vec3& m2,
                               const PhotonRateOptions& opts) {
    IsotropicTable t;
    if (const auto* mono = std::get_if<Monochromatic>(&dist)) {
        t.k = {mono->wavenumber};
        t.weight = {1.0};
        t.coeffs = {isotropic_photon_coefficients(mono->wavenumber * length, m1, m2, opts.sphere_order)};
        return t;
    }
    const auto& env = std::get<BlackBodyEnvironment>(dist);
    auto fill = [&](int nodes, std::vector<double>& ks, std::vector<double>& ws,
                    std::vector<IsotropicPhotonCoefficients>& cs) {
        const RadialGrid grid = RadialGrid::planck(env, nodes);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double k = grid.nodes()[i];
            const auto pdf = planck_wavenumber_pdf(env, k);
            ks.push_back(k);
            ws.push_back(grid.weights()[i] * pdf.photon_density * pdf.density * constants::c * std::pow(k, 4) /
                         (6.0 * pi));
            cs.push_back(isotropic_photon_coefficients(k * length, m1, m2, opts.sphere_order));
        }
    };
    fill(opts.radial_nodes, t.k, t.weight, t.coeffs);
    fill(std::max(2, opts.radial_nodes / 2), t.k_half, t.weight_half, t.coeffs_half);
    return t;
}

RateResult isotropic_result(const DielectricRod& rod, const WavenumberDistribution& dist, const IsotropicTable& t,
                            const PairConfiguration& cfg, const PhotonRateOptions& opts) {
    RateResult r;
    const double chi = rod.chi_parallel();
    const double v0 = rod.volume();
    r.inputs = {{"rod_length_m", rod.length()}, {"rod_radius_m", rod.radius()},
                {"permittivity", rod.permittivity()}, {"m1_dot_m2", dot(cfg.m1.vec(), cfg.m2.vec())},
                {"sphere_order", static_cast<double>(opts.sphere_order)}};
    if (const auto* mono = std::get_if<Monochromatic>(&dist)) {
        const auto est = t.coeffs[0].normalized_rate(rod);
        r.reference_rate = scattering_rate_gamma0(rod, PhotonMode(mono->wavenumber, {0, 0, 1}, {1, 0, 0},
                                                                  mono->field_amplitude));
        r.normalized = est.value;
        r.rate = r.reference_rate * est.value;
        r.quadrature_error = r.reference_rate * est.abs_error;
        r.inputs.emplace_back("wavenumber_per_m", mono->wavenumber);
        r.inputs.emplace_back("field_amplitude_V_per_m", mono->field_amplitude);
        if (!rod.thin_rod_valid(mono->wavenumber))
            r.warnings.emplace_back("thin-rod condition k^2 a0^2 (eps_r - 1) < 1 violated");
    } else {
        // Normalized by the Planck-averaged total scattering rate so that the
        // ratio stays finite at eps_r = 1.
        auto average = [&](const std::vector<double>& ws, const std::vector<IsotropicPhotonCoefficients>& cs,
                           double& sphere_err) {
            double num = 0.0, den = 0.0;
            sphere_err = 0.0;
            for (std::size_t i = 0; i < ws.size(); ++i) {
                const auto est = cs[i].normalized_rate(rod);
                num += ws[i] * est.value;
                den += ws[i];
                sphere_err += ws[i] * est.abs_error;
            }
            sphere_err /= den;
            return num / den;
        };
        double sphere_err = 0.0, unused = 0.0;
        const double fine = average(t.weight, t.coeffs, sphere_err);
        const double half = average(t.weight_half, t.coeffs_half, unused);
        const auto& env = std::get<BlackBodyEnvironment>(dist);
        double den = 0.0;
        for (double w : t.weight) den += w;
        r.reference_rate = chi * chi * v0 * v0 * den;
        r.normalized = fine;
        r.rate = r.reference_rate * fine;
        r.quadrature_error = r.reference_rate * (sphere_err + std::abs(fine - half));
        r.inputs.emplace_back("temperature_K", env.temperature);
        r.inputs.emplace_back("radial_nodes", static_cast<double>(opts.radial_nodes));
        if (!rod.thin_rod_valid(30.0 * env.thermal_wavenumber()))
            r.warnings.emplace_back("thin-rod condition violated within the Planck cutoff");
    }
    flag_convergence(r, std::abs(r.rate), r.reference_rate);
    return r;
}

}  // namespace

RateResult photon_rate_isotropic_average(const DielectricRod& rod, const WavenumberDistribution& dist,
                                         const PairConfiguration& cfg, const PhotonRateOptions& opts) {
    detail::require(norm2(cfg.separation) == 0.0, "separation_m",
                    "the isotropic average is defined for purely orientational pairs (R = 0)");
    validate_distribution(dist);
    const IsotropicTable t = isotropic_table(rod.length(), dist, cfg.m1, cfg.m2, opts);
    return isotropic_result(rod, dist, t, cfg, opts);
}

std::vector<std::vector<RateResult>> isotropic_photon_rate_curves(const std::vector<DielectricRod>& rods,
                                                                  const WavenumberDistribution& dist,
                                                                  const std::vector<double>& thetas,
                                                                  const PhotonRateOptions& opts) {
    detail::require(!thetas.empty(), "theta_grid", "must contain at least one angle");
    detail::require(!rods.empty(), "permittivities", "must contain at least one rod");
    validate_distribution(dist);
    // Group rods by length so the angular integrals are shared.
    std::map<double, std::vector<std::size_t>> by_length;
    for (std::size_t r = 0; r < rods.size(); ++r) by_length[rods[r].length()].push_back(r);
    std::vector<double> lengths;
    for (const auto& [len, idx] : by_length) lengths.push_back(len);

    std::vector<std::vector<RateResult>> out(rods.size(), std::vector<RateResult>(thetas.size()));
    const std::size_t jobs = thetas.size() * lengths.size();
    parallel_for(jobs, [&](std::size_t job) {
        const std::size_t ti = job / lengths.size();
        const double len = lengths[job % lengths.size()];
        const auto cfg = PairConfiguration::orientational(thetas[ti]);
        const IsotropicTable t = isotropic_table(len, dist, cfg.m1, cfg.m2, opts);
        for (std::size_t r : by_length.at(len)) out[r][ti] = isotropic_result(rods[r], dist, t, cfg, opts);
    });
    return out;
}

}  // namespace anisodec
