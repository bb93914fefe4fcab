#pragma once

// Deterministic quadrature over the unit sphere, the sphere x sphere product,
// the radial momentum axis, and the polar axis of a forward-peaked amplitude,
// plus a seeded Monte-Carlo oracle used for independent cross-checks.

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "anisodec/errors.hpp"
#include "anisodec/units.hpp"
#include "anisodec/vec3.hpp"

namespace anisodec {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Cached n-point rule; safe to call concurrently.
const GaussLegendreRule& gauss_legendre(int n);

enum class ErrorMethod { refinement_difference, mc_stderr };

const char* to_string(ErrorMethod m);

template <class T>
struct Estimate {
    T value{};
    double abs_error = 0.0;
    ErrorMethod method = ErrorMethod::refinement_difference;
};

/// Product rule on S^2: Gauss-Legendre in cos(theta) times the periodic
/// trapezoid in phi. A grid of order L has (L+1) x 2(L+1) nodes and is exact
/// for every spherical harmonic with l <= 2L+1.
class SphereGrid {
public:
    static SphereGrid product(int order);

    /// Process-wide cached product grid.
    static const SphereGrid& cached(int order);

    int order() const { return order_; }
    std::size_t size() const { return nodes_.size(); }
    std::span<const Vec3> nodes() const { return nodes_; }
    std::span<const double> weights() const { return weights_; }

private:
    int order_ = 0;
    std::vector<Vec3> nodes_;
    std::vector<double> weights_;
};

inline constexpr int default_sphere_order = 29;

enum class RadialWeight { none, gaussian, maxwell_boltzmann, planck };

/// Gauss-Legendre rule on [0, upper] for integrals over a radial momentum or
/// wavenumber. The weight tag records which density the cutoff was chosen for;
/// integrate_radial always integrates h(p) dp.
class RadialGrid {
public:
    static RadialGrid on_interval(double upper, int n, RadialWeight weight = RadialWeight::none);
    /// [0, 8 sqrt(m k_B T)], 64 nodes by default.
    static RadialGrid maxwell_boltzmann(const GasEnvironment& gas, int n = 64);
    /// [0, 30 k_B T / (hbar c)], 64 nodes by default.
    static RadialGrid planck(const BlackBodyEnvironment& env, int n = 64);

    /// Same interval and weight tag with a different node count.
    RadialGrid with_nodes(int n) const { return on_interval(upper_, n, weight_); }

    double upper() const { return upper_; }
    RadialWeight weight() const { return weight_; }
    std::size_t size() const { return nodes_.size(); }
    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> weights() const { return weights_; }

private:
    double upper_ = 0.0;
    RadialWeight weight_ = RadialWeight::none;
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

inline constexpr int default_radial_nodes = 64;

/// Rule for integrals over xi = n.n' in [-1, 1] whose integrand carries a
/// factor exp(-decay (1 - xi^2)) and oscillates with angular frequency up to
/// `oscillation` in xi. Composite Gauss-Legendre panels are packed towards
/// xi = +-1 and truncated where the envelope drops below 1e-18.
struct AxialRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    static AxialRule graded(double decay, double oscillation = 0.0, int panel_nodes = 12);
};

namespace detail {
[[noreturn]] void throw_non_finite(const char* where, std::size_t index, const std::string& node);
double rounding_floor(double magnitude, std::size_t terms);

template <class F>
complex sum_sphere(const SphereGrid& grid, F& f) {
    complex acc = 0.0;
    const auto nodes = grid.nodes();
    const auto w = grid.weights();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const complex v = f(nodes[i]);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            const auto& n = nodes[i];
            throw_non_finite("integrate_sphere", i,
                             std::to_string(n.x) + "," + std::to_string(n.y) + "," + std::to_string(n.z));
        }
        acc += w[i] * v;
    }
    return acc;
}
}  // namespace detail

/// Sum w_i f(n_i). The error is the difference to the half-order grid.
template <class F>
Estimate<complex> integrate_sphere(const SphereGrid& grid, F&& f) {
    const complex fine = detail::sum_sphere(grid, f);
    const complex coarse = detail::sum_sphere(SphereGrid::cached(std::max(1, grid.order() / 2)), f);
    return {fine, std::abs(fine - coarse) + detail::rounding_floor(std::abs(fine), grid.size()),
            ErrorMethod::refinement_difference};
}

/// Tensor-product integral of g(n, n') over S^2 x S^2.
template <class G>
Estimate<complex> integrate_double_sphere(const SphereGrid& grid, G&& g) {
    auto run = [&g](const SphereGrid& sg) {
        complex acc = 0.0;
        const auto nodes = sg.nodes();
        const auto w = sg.weights();
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            complex inner = 0.0;
            for (std::size_t j = 0; j < nodes.size(); ++j) {
                const complex v = g(nodes[i], nodes[j]);
                if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                    detail::throw_non_finite("integrate_double_sphere", i * nodes.size() + j,
                                             "pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
                inner += w[j] * v;
            }
            acc += w[i] * inner;
        }
        return acc;
    };
    const complex fine = run(grid);
    const complex coarse = run(SphereGrid::cached(std::max(1, grid.order() / 2)));
    return {fine, std::abs(fine - coarse) + detail::rounding_floor(std::abs(fine), grid.size() * grid.size()),
            ErrorMethod::refinement_difference};
}

/// Integral of h(p) dp over the grid interval; error from the half-node rule.
template <class H>
Estimate<complex> integrate_radial(const RadialGrid& grid, H&& h) {
    auto run = [&h](const RadialGrid& rg) {
        complex acc = 0.0;
        const auto p = rg.nodes();
        const auto w = rg.weights();
        for (std::size_t i = 0; i < p.size(); ++i) {
            const complex v = h(p[i]);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                detail::throw_non_finite("integrate_radial", i, std::to_string(p[i]));
            acc += w[i] * v;
        }
        return acc;
    };
    const complex fine = run(grid);
    const complex coarse = run(grid.with_nodes(std::max(2, static_cast<int>(grid.size()) / 2)));
    return {fine, std::abs(fine - coarse) + detail::rounding_floor(std::abs(fine), grid.size()),
            ErrorMethod::refinement_difference};
}

// ---------------------------------------------------------------------------
// Monte-Carlo oracle

/// SplitMix64 stream keyed by (seed, stream index). Satisfies
/// UniformRandomBitGenerator, so it plugs into <random> distributions.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }
    result_type operator()();

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

inline constexpr std::uint64_t default_mc_seed = 20161124;

/// What the oracle draws per sample.
struct SamplerSpec {
    enum class Kind {
        uniform_sphere,         ///< one direction, density 1/(4 pi)
        uniform_sphere_pair,    ///< two independent directions
        maxwell_momentum,       ///< 3-D Maxwell-Boltzmann momentum vector
        maxwell_momentum_pair,  ///< Maxwell momentum plus an independent direction
    };
    Kind kind = Kind::uniform_sphere;
    double momentum_variance = 1.0;  ///< m k_B T for the Maxwell samplers
    std::uint64_t seed = default_mc_seed;
};

/// One draw. Unused members are left at their defaults.
struct Sample {
    Vec3 n;        ///< first direction (momentum direction for Maxwell samplers)
    Vec3 n2;       ///< second direction
    double p = 0;  ///< momentum magnitude
};

/// Plain Monte-Carlo mean of f over the sampler distribution, with its
/// standard error. Multiply by the measure (e.g. 4 pi) yourself.
Estimate<double> mc_oracle(const SamplerSpec& spec, const std::function<double(const Sample&)>& f,
                           std::size_t n_samples);

}  // namespace anisodec
