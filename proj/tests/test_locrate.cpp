#include <doctest.h>

#include <cmath>

#include "anisodec/angdiff.hpp"
#include "anisodec/errors.hpp"
#include "anisodec/locrate.hpp"
#include "peaked_sampler.hpp"

using namespace anisodec;
using constants::pi;

namespace {

const GasEnvironment helium(300.0, 4.002602 * constants::amu, 1e20);
const AnisotropicPotential fig1 = dipole_induced_dipole(convert_polarizability_volume(0.2), convert_debye(5.0));
const GasRateOptions coarse{15, 32};

Vec3 rotate_xyz(const Vec3& v) { return rotate(rotate(v, {1, 0, 0}, 0.7), {0, 1, 0}, -1.3); }

PairConfiguration pair(double theta, const Vec3& R = {}) {
    auto c = PairConfiguration::orientational(theta);
    c.separation = R;
    return c;
}

// Monte-Carlo form of the gas rates: sample p from the Maxwell-Boltzmann law
// and n' around n, so that int dp p^3 mu int d^2n d^2n' X = 4 pi E[p X w].
GasRates gas_mc(const PairConfiguration& cfg, std::size_t n, std::uint64_t seed) {
    const EikonalScatterer sc(fig1, helium.particle_mass);
    SamplerSpec spec{SamplerSpec::Kind::maxwell_momentum_pair, helium.momentum_variance(), seed};
    const double pref = 4.0 * pi * helium.number_density / helium.particle_mass;
    auto terms = [&](const Sample& s) {
        const double lambda = 4.0 * sc.isotropic_chi(s.p).real();
        const auto pk = testing::sample_peaked_xi(0.5 * (s.n2.z + 1.0), lambda);
        const auto tb = transverse_basis(s.n);
        const double phi = std::atan2(s.n2.y, s.n2.x);
        const double st = std::sqrt(std::max(0.0, 1.0 - pk.xi * pk.xi));
        const Vec3 n_out = pk.xi * s.n + st * (std::cos(phi) * tb[0] + std::sin(phi) * tb[1]);
        const complex ph = std::exp(complex(0.0, s.p * dot(cfg.separation, s.n - n_out) / constants::hbar));
        const complex f1 = sc.amplitude(s.p, s.n, n_out, cfg.m1) * ph;
        const complex f2 = sc.amplitude(s.p, s.n, n_out, cfg.m2);
        return std::pair{pk.weight * s.p * std::norm(f1 - f2), pk.weight * s.p * (f1 * std::conj(f2)).imag()};
    };
    const auto F = mc_oracle(spec, [&](const Sample& s) { return terms(s).first; }, n);
    const auto G = mc_oracle(spec, [&](const Sample& s) { return terms(s).second; }, n);
    GasRates out;
    out.localization.rate = 0.5 * pref * F.value;
    out.localization.quadrature_error = 0.5 * pref * F.abs_error;
    out.phase.rate = pref * G.value;
    out.phase.quadrature_error = pref * G.abs_error;
    return out;
}

}  // namespace

TEST_CASE("gas rate vanishes on the diagonal") {
    const auto r = gas_rates(fig1, helium, pair(0.0), coarse);
    CHECK(std::abs(r.localization.rate) <= r.localization.quadrature_error);
    CHECK(std::abs(r.phase.rate) <= r.phase.quadrature_error + 1e-12 * std::abs(r.localization.rate));
    CHECK(r.localization.converged);
}

TEST_CASE("gas rate symmetry and rotation invariance") {
    for (double t : {0.3, 1.0}) {
        const auto a = localization_rate_gas(fig1, helium, pair(t), coarse);
        const auto b = localization_rate_gas(fig1, helium, pair(pi - t), coarse);
        CHECK(std::abs(a.rate - b.rate) <= a.quadrature_error + b.quadrature_error);
        PairConfiguration rc{{}, UnitVector(rotate_xyz(pair(t).m1)), UnitVector(rotate_xyz(pair(t).m2))};
        const auto c = localization_rate_gas(fig1, helium, rc, coarse);
        CHECK(std::abs(a.rate - c.rate) <= a.quadrature_error + c.quadrature_error);
    }
}

TEST_CASE("gas rate increases with angle and anisotropy") {
    double prev_a = 0.0;
    for (double a : {0.5, 1.0, 2.0, 3.0}) {
        const auto pot = fig1.with_anisotropy(a);
        double prev = 0.0;
        for (double t : {0.2, 0.6, 1.0, 1.4, pi / 2}) {
            const double F = localization_rate_gas(pot, helium, pair(t), coarse).rate;
            CHECK(F > prev);
            prev = F;
        }
        CHECK(prev > prev_a);
        prev_a = prev;
    }
}

TEST_CASE("small anisotropy reproduces the diffusion rate") {
    const auto pot = fig1.with_anisotropy(0.01);
    const double D = diffusion_coefficient_gas(pot, helium).D;
    const auto r = localization_rate_gas(pot, helium, pair(pi / 2));
    CHECK(r.rate / small_anisotropy_rate(D, pair(pi / 2).m1, pair(pi / 2).m2) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("phase frequency swaps sign with the configurations") {
    const Vec3 R{1.5e-11, 0.0, 0.5e-11};
    const auto g = phase_frequency_gas(fig1, helium, pair(pi / 4, R), coarse);
    PairConfiguration swapped{-R, pair(pi / 4).m2, pair(pi / 4).m1};
    const auto h = phase_frequency_gas(fig1, helium, swapped, coarse);
    CHECK(std::abs(g.rate + h.rate) <= g.quadrature_error + h.quadrature_error);
    CHECK(std::abs(g.rate) > 10.0 * g.quadrature_error);
}

TEST_CASE("gas rates agree with the monte-carlo oracle") {
    const auto cfg = pair(pi / 4, {1.5e-11, 0.0, 0.5e-11});
    const auto q = gas_rates(fig1, helium, cfg);
    const auto mc = gas_mc(cfg, 400000, 11);
    const double sF = std::hypot(q.localization.quadrature_error, mc.localization.quadrature_error);
    const double sG = std::hypot(q.phase.quadrature_error, mc.phase.quadrature_error);
    CHECK(std::abs(q.localization.rate - mc.localization.rate) <= 3.0 * sF);
    CHECK(std::abs(q.phase.rate - mc.phase.rate) <= 3.0 * sG);
    CHECK(mc.localization.quadrature_error < 0.05 * mc.localization.rate);
}

TEST_CASE("gas rates are nonnegative off the diagonal") {
    CounterRng rng(17);
    for (int i = 0; i < 6; ++i) {
        const Vec3 R{2e-11 * rng.uniform(), -1e-11 * rng.uniform(), 3e-11 * rng.uniform()};
        const auto r = localization_rate_gas(fig1, helium, pair(pi * rng.uniform(), R), coarse);
        CHECK(r.rate >= -r.quadrature_error);
    }
}

TEST_CASE("gas rate input validation") {
    CHECK_THROWS_AS(gas_rate_curve(fig1, helium, {}), DomainError);
    CHECK_THROWS_AS(localization_rate_gas(AnisotropicPotential(1e-60, 4, 1.0), helium, pair(1.0)), DomainError);
    const auto r = localization_rate_gas(fig1, helium, pair(1.0, {1e-11, 0, 0}), coarse);
    bool echoed = false;
    for (const auto& [k, v] : r.inputs) echoed |= k == "separation_over_thermal_wavelength";
    CHECK(echoed);
}

// ---------------------------------------------------------------------------

namespace {
const PhotonMode laser = PhotonMode::from_wavelength(1.56e-6, {0, 0, 1}, {1, 0, 0}, 1e5);
}

TEST_CASE("single-mode photon rate vanishes for identical configurations") {
    const DielectricRod rod(0.8e-6, 25e-9, 4.0);
    PairConfiguration cfg{{}, UnitVector(0.3, 0.4, 0.5), UnitVector(0.3, 0.4, 0.5)};
    const auto r = localization_rate_photon(rod, laser, cfg);
    CHECK(std::abs(r.rate) <= r.quadrature_error);
    CHECK(localization_rate_photon(DielectricRod(0.8e-6, 25e-9, 1.0), laser, pair(1.0)).rate == 0.0);
}

TEST_CASE("single-mode photon rate depends on each orientation") {
    const DielectricRod rod(0.8e-6, 25e-9, 4.0);
    // Same relative angle, different orientation relative to the polarization.
    PairConfiguration a{{}, UnitVector(1, 0, 0), UnitVector(0, 1, 0)};
    PairConfiguration b{{}, UnitVector(0, 0, 1), UnitVector(0, 1, 0)};
    const auto ra = localization_rate_photon(rod, laser, a);
    const auto rb = localization_rate_photon(rod, laser, b);
    CHECK(std::abs(ra.rate - rb.rate) > 10.0 * (ra.quadrature_error + rb.quadrature_error));
}

TEST_CASE("single-mode photon rate agrees with the monte-carlo oracle") {
    const DielectricRod rod(1e-9, 1e-10, 1.0 + 1e-6);  // point dipole
    const PairConfiguration cfg{{0.2e-6, 0.1e-6, 0.3e-6}, UnitVector(0, 0, 1), UnitVector(1, 0, 1)};
    const auto q = localization_rate_photon(rod, laser, cfg);
    SamplerSpec spec{SamplerSpec::Kind::uniform_sphere};
    const auto mc = mc_oracle(
        spec,
        [&](const Sample& s) {
            double acc = 0.0;
            for (int p = 0; p < 2; ++p)
                acc += std::norm(jump_function_B(rod, laser, s.n, p, cfg.separation, cfg.m1) -
                                 jump_function_B(rod, laser, s.n, p, {}, cfg.m2));
            return 0.5 * acc;
        },
        200000);
    const double g0 = scattering_rate_gamma0(rod, laser);
    CHECK(std::abs(q.rate - g0 * mc.value) <= 3.0 * std::hypot(q.quadrature_error, g0 * mc.abs_error));
    CHECK(q.normalized == doctest::Approx(q.rate / g0).epsilon(1e-12));
}

TEST_CASE("isotropic photon rate") {
    const DielectricRod rod(0.8e-6, 25e-9, 4.0);
    const WavenumberDistribution light = Monochromatic{2.0 * pi / 1.56e-6, 1e5};
    const auto zero = photon_rate_isotropic_average(rod, light, pair(0.0));
    CHECK(std::abs(zero.rate) <= zero.quadrature_error);

    const auto a = photon_rate_isotropic_average(rod, light, pair(0.9));
    PairConfiguration rc{{}, UnitVector(rotate_xyz(pair(0.9).m1)), UnitVector(rotate_xyz(pair(0.9).m2))};
    const auto b = photon_rate_isotropic_average(rod, light, rc);
    CHECK(std::abs(a.rate - b.rate) <= a.quadrature_error + b.quadrature_error + 1e-12 * a.rate);
    CHECK_THROWS_AS(photon_rate_isotropic_average(rod, light, pair(0.9, {1e-7, 0, 0})), DomainError);
    CHECK(photon_rate_isotropic_average(DielectricRod(0.8e-6, 25e-9, 1.0), light, pair(0.9)).rate == 0.0);
}

TEST_CASE("isotropic photon rate equals the average of single-mode rates") {
    // Average the single-mode rate over incoming directions and the two polarizations.
    const DielectricRod rod(0.4e-6, 20e-9, 3.0);
    const double k = 2.0 * pi / 1.56e-6;
    const auto cfg = pair(1.1);
    const auto& g = SphereGrid::cached(11);
    double avg = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Vec3 n = g.nodes()[i];
        const auto tb = transverse_basis(n);
        for (const auto& e : tb)
            avg += g.weights()[i] / (8.0 * pi) *
                   localization_rate_photon(rod, PhotonMode(k, n, e, 1e5), cfg, {15, 16}).normalized;
    }
    const auto iso = isotropic_photon_rate_normalized(rod, k, cfg.m1, cfg.m2);
    CHECK(avg == doctest::Approx(iso.value).epsilon(1e-6));
}

TEST_CASE("isotropic coefficients reproduce the direct rate") {
    const double k = 2.0 * pi / 1.56e-6;
    const auto cfg = pair(0.7);
    const auto c = isotropic_photon_coefficients(k * 0.8e-6, cfg.m1, cfg.m2);
    for (double eps : {1.0, 2.0, 12.0}) {
        const DielectricRod rod(0.8e-6, 25e-9, eps);
        CHECK(c.normalized_rate(rod).value ==
              doctest::Approx(isotropic_photon_rate_normalized(rod, k, cfg.m1, cfg.m2).value).epsilon(1e-12));
    }
}

TEST_CASE("black-body average of the isotropic rate") {
    const DielectricRod rod(10e-9, 1e-9, 2.0);
    const WavenumberDistribution bb = BlackBodyEnvironment(300.0);
    const auto r = photon_rate_isotropic_average(rod, bb, pair(pi / 2));
    CHECK(r.rate > 0.0);
    CHECK(r.quadrature_error < 0.01 * r.rate);
    // Short compared with the thermal wavelength: the pi/2 rate is D_bb / hbar^2.
    const double D = diffusion_coefficient_blackbody(rod, BlackBodyEnvironment(300.0)).D;
    CHECK(r.rate == doctest::Approx(D / (constants::hbar * constants::hbar)).epsilon(0.01));
}
