#include <doctest.h>

#include <cmath>
#include <numeric>

#include "anisodec/quadrature.hpp"
#include "anisodec/special.hpp"

using namespace anisodec;
using constants::pi;

TEST_CASE("gauss-legendre rule") {
    const auto& r = gauss_legendre(20);
    CHECK(std::accumulate(r.weights.begin(), r.weights.end(), 0.0) == doctest::Approx(2.0).epsilon(1e-14));
    double x38 = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) x38 += r.weights[i] * std::pow(r.nodes[i], 38);
    CHECK(x38 == doctest::Approx(2.0 / 39.0).epsilon(1e-13));
}

TEST_CASE("sphere integrals") {
    const auto& g = SphereGrid::cached(default_sphere_order);
    CHECK(std::abs(integrate_sphere(g, [](const Vec3&) { return complex(1.0); }).value - 4.0 * pi) < 1e-12);
    CHECK(std::abs(integrate_sphere(g, [](const Vec3& n) { return complex(n.z * n.z); }).value - 4.0 * pi / 3.0) <
          1e-10);
    const Vec3 v = Vec3{1.0, 2.0, 2.0};  // |v| = 3
    const auto pw = integrate_sphere(g, [&](const Vec3& n) { return std::exp(complex(0.0, dot(n, v))); });
    CHECK(std::abs(pw.value - 4.0 * pi * sinc(3.0)) < 1e-8);
    CHECK(pw.abs_error < 1e-6);
}

TEST_CASE("double sphere integrals") {
    const auto& g = SphereGrid::cached(9);
    CHECK(std::abs(integrate_double_sphere(g, [](const Vec3&, const Vec3&) { return complex(1.0); }).value -
                   16.0 * pi * pi) < 1e-10);
    CHECK(std::abs(integrate_double_sphere(g, [](const Vec3& a, const Vec3& b) { return complex(dot(a, b)); }).value) <
          1e-10);
    CHECK(std::abs(integrate_double_sphere(g, [](const Vec3& a, const Vec3& b) {
                       return complex(cross_norm2(a, b));
                   }).value -
                   16.0 * pi * pi * 2.0 / 3.0) < 1e-8);
}

TEST_CASE("radial integrals") {
    const double s = 2.5;
    const auto grid = RadialGrid::on_interval(12.0 * s, 64);
    const auto m2 = integrate_radial(grid, [&](double x) { return complex(x * x * std::exp(-x * x / (2 * s * s))); });
    CHECK(std::abs(m2.value.real() - std::sqrt(pi / 2.0) * s * s * s) < 1e-10);
    CHECK(integrate_radial(grid, [](double) { return complex(0.0); }).value == complex(0.0));

    // Thermal <p^5> of helium at 300 K against the Gamma-function moment.
    const GasEnvironment he(300.0, 4.002602 * constants::amu, 1e20);
    const auto p5 = integrate_radial(RadialGrid::maxwell_boltzmann(he), [&](double p) {
        return complex(4.0 * pi * p * p * std::pow(p, 5) * maxwell_boltzmann_pdf(he, p));
    });
    CHECK(p5.value.real() == doctest::Approx(1.5229000681953533e-115).epsilon(1e-8));
}

TEST_CASE("non-finite integrand reports the node") {
    const auto& g = SphereGrid::cached(3);
    CHECK_THROWS_AS(integrate_sphere(g, [](const Vec3&) { return complex(NAN); }), NumericalError);
    const auto r = RadialGrid::on_interval(1.0, 8);
    CHECK_THROWS_WITH_AS(integrate_radial(r, [](double) { return complex(INFINITY); }),
                         doctest::Contains("integrate_radial"), NumericalError);
}

TEST_CASE("monte-carlo oracle agrees with the deterministic rules") {
    const auto& g = SphereGrid::cached(default_sphere_order);
    const Vec3 v{1.0, 2.0, 2.0};
    SamplerSpec one{SamplerSpec::Kind::uniform_sphere};
    const auto mc1 = mc_oracle(one, [&](const Sample& s) { return std::cos(dot(s.n, v)); }, 200000);
    const auto q1 = integrate_sphere(g, [&](const Vec3& n) { return complex(std::cos(dot(n, v))); });
    CHECK(std::abs(4.0 * pi * mc1.value - q1.value.real()) < 3.0 * 4.0 * pi * mc1.abs_error);
    CHECK(mc1.method == ErrorMethod::mc_stderr);

    SamplerSpec two{SamplerSpec::Kind::uniform_sphere_pair};
    const auto mc2 = mc_oracle(two, [](const Sample& s) { return cross_norm2(s.n, s.n2); }, 200000);
    CHECK(std::abs(mc2.value - 2.0 / 3.0) < 3.0 * mc2.abs_error);

    const GasEnvironment he(300.0, 4.002602 * constants::amu, 1e20);
    SamplerSpec mb{SamplerSpec::Kind::maxwell_momentum, he.momentum_variance()};
    const double scale = std::pow(he.momentum_variance(), 2.5);
    const auto mc3 = mc_oracle(mb, [&](const Sample& s) { return std::pow(s.p, 5) / scale; }, 200000);
    CHECK(std::abs(mc3.value * scale - 1.5229000681953533e-115) < 3.0 * mc3.abs_error * scale);
}

TEST_CASE("monte-carlo oracle is deterministic for a fixed seed") {
    SamplerSpec s{SamplerSpec::Kind::uniform_sphere};
    auto f = [](const Sample& x) { return x.n.z * x.n.z; };
    CHECK(mc_oracle(s, f, 10000).value == mc_oracle(s, f, 10000).value);
    s.seed = 7;
    CHECK(mc_oracle(s, f, 10000).value != mc_oracle(SamplerSpec{}, f, 10000).value);
}

TEST_CASE("axial rule integrates a sharply peaked envelope") {
    for (double z : {0.5, 5.0, 50.0, 5000.0}) {
        const auto r = AxialRule::graded(z);
        double acc = 0.0;
        for (std::size_t i = 0; i < r.nodes.size(); ++i)
            acc += r.weights[i] * std::exp(-z * (1.0 - r.nodes[i] * r.nodes[i]));
        CHECK(2.0 * pi * acc == doctest::Approx(exp_sin2_sphere_integral(z).real()).epsilon(1e-12));
    }
}

TEST_CASE("special functions") {
    CHECK(sinc(0.0) == 1.0);
    CHECK(sinc(1e-9) == doctest::Approx(1.0));
    CHECK(sinc(3.0) == doctest::Approx(std::sin(3.0) / 3.0).epsilon(1e-15));
    // Continuity across the series / quadrature / asymptotic branches.
    for (double r : {1.999999, 2.0, 59.99999, 60.0}) {
        const complex z = std::polar(r, -0.6);
        const complex a = exp_sin2_sphere_integral(z * (1 - 1e-9));
        const complex b = exp_sin2_sphere_integral(z);
        CHECK(std::abs(a - b) < 1e-7 * std::abs(b));
    }
    CHECK(std::abs(exp_sin2_sphere_integral(0.0) - 4.0 * pi) < 1e-14);
    double P[6];
    legendre_table(0.3, P);
    CHECK(P[5] == doctest::Approx((63 * std::pow(0.3, 5) - 70 * std::pow(0.3, 3) + 15 * 0.3) / 8).epsilon(1e-14));
}
