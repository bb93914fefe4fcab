#include "anisodec/quadrature.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <random>

namespace anisodec {

namespace {

GaussLegendreRule compute_gauss_legendre(int n) {
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(constants::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Recompute the derivative at the converged node.
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int n) {
    if (n < 1) throw DomainError("gauss_legendre", "node count must be positive");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GaussLegendreRule>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<GaussLegendreRule>(compute_gauss_legendre(n));
    return *slot;
}

const char* to_string(ErrorMethod m) {
    switch (m) {
        case ErrorMethod::refinement_difference: return "refinement-difference";
        case ErrorMethod::mc_stderr: return "mc-stderr";
    }
    return "?";
}

SphereGrid SphereGrid::product(int order) {
    if (order < 1) throw DomainError("sphere_order", "must be at least 1");
    const int n_theta = order + 1;
    const int n_phi = 2 * (order + 1);
    const auto& gl = gauss_legendre(n_theta);
    SphereGrid grid;
    grid.order_ = order;
    grid.nodes_.reserve(static_cast<std::size_t>(n_theta) * n_phi);
    grid.weights_.reserve(grid.nodes_.capacity());
    const double dphi = 2.0 * constants::pi / n_phi;
    for (int i = 0; i < n_theta; ++i) {
        const double ct = gl.nodes[i];
        const double st = std::sqrt((1.0 - ct) * (1.0 + ct));
        for (int j = 0; j < n_phi; ++j) {
            const double phi = j * dphi;
            grid.nodes_.push_back({st * std::cos(phi), st * std::sin(phi), ct});
            grid.weights_.push_back(gl.weights[i] * dphi);
        }
    }
    return grid;
}

const SphereGrid& SphereGrid::cached(int order) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<SphereGrid>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[order];
    if (!slot) slot = std::make_unique<SphereGrid>(product(order));
    return *slot;
}

RadialGrid RadialGrid::on_interval(double upper, int n, RadialWeight weight) {
    if (!(upper > 0.0) || !std::isfinite(upper)) throw DomainError("radial_upper", "must be positive");
    const auto& gl = gauss_legendre(n);
    RadialGrid g;
    g.upper_ = upper;
    g.weight_ = weight;
    g.nodes_.resize(n);
    g.weights_.resize(n);
    for (int i = 0; i < n; ++i) {
        g.nodes_[i] = 0.5 * upper * (gl.nodes[i] + 1.0);
        g.weights_[i] = 0.5 * upper * gl.weights[i];
    }
    return g;
}

RadialGrid RadialGrid::maxwell_boltzmann(const GasEnvironment& gas, int n) {
    return on_interval(8.0 * std::sqrt(gas.momentum_variance()), n, RadialWeight::maxwell_boltzmann);
}

RadialGrid RadialGrid::planck(const BlackBodyEnvironment& env, int n) {
    return on_interval(30.0 * env.thermal_wavenumber(), n, RadialWeight::planck);
}

AxialRule AxialRule::graded(double decay, double oscillation, int panel_nodes) {
    decay = std::max(decay, 0.0);
    oscillation = std::abs(oscillation);
    // Envelope exp(-decay t (2 - t)) with t = 1 - |xi|; cut where it is below e^-42.
    constexpr double cutoff_exponent = 42.0;
    double t_cut = 1.0;
    if (decay > cutoff_exponent) t_cut = 1.0 - std::sqrt(1.0 - cutoff_exponent / decay);
    // Panels start at the envelope scale 1 / decay and double outwards, but
    // never exceed a quarter oscillation period.
    double cap = 0.5;
    if (oscillation > 0.0) cap = std::min(cap, 4.0 / oscillation);
    double width = decay > 0.0 ? std::min(cap, 1.0 / decay) : cap;
    std::vector<std::pair<double, double>> panels;
    for (double a = 0.0; a < t_cut - 1e-15;) {
        const double w = std::min(width, t_cut - a);
        panels.emplace_back(a, w);
        a += w;
        width = std::min(2.0 * width, cap);
    }

    const auto& gl = gauss_legendre(panel_nodes);
    AxialRule rule;
    rule.nodes.reserve(2 * panels.size() * panel_nodes);
    rule.weights.reserve(rule.nodes.capacity());
    for (int side = 0; side < 2; ++side) {
        const double sign = side == 0 ? 1.0 : -1.0;
        for (const auto& [a, h] : panels) {
            for (int i = 0; i < panel_nodes; ++i) {
                const double t = a + 0.5 * h * (gl.nodes[i] + 1.0);
                rule.nodes.push_back(sign * (1.0 - t));
                rule.weights.push_back(0.5 * h * gl.weights[i]);
            }
        }
    }
    return rule;
}

namespace detail {

void throw_non_finite(const char* where, std::size_t index, const std::string& node) {
    throw NumericalError(std::string(where) + ": non-finite integrand at node " + std::to_string(index) + " [" +
                         node + "]");
}

double rounding_floor(double magnitude, std::size_t terms) {
    return 4.0 * std::numeric_limits<double>::epsilon() * magnitude * std::sqrt(static_cast<double>(terms));
}

}  // namespace detail

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix64(seed ^ splitmix64(stream + 0x632BE59BD9B4E019ULL))) {}

CounterRng::result_type CounterRng::operator()() { return splitmix64(key_ + 0x9E3779B97F4A7C15ULL * counter_++); }

namespace {

Vec3 uniform_direction(CounterRng& rng) {
    const double z = 2.0 * rng.uniform() - 1.0;
    const double phi = 2.0 * constants::pi * rng.uniform();
    const double s = std::sqrt((1.0 - z) * (1.0 + z));
    return {s * std::cos(phi), s * std::sin(phi), z};
}

}  // namespace

Estimate<double> mc_oracle(const SamplerSpec& spec, const std::function<double(const Sample&)>& f,
                           std::size_t n_samples) {
    if (n_samples < 10000) throw DomainError("n_samples", "Monte-Carlo oracle needs at least 1e4 samples");
    CounterRng rng(spec.seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(spec.momentum_variance));
    // Welford accumulation.
    double mean = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        Sample s;
        switch (spec.kind) {
            case SamplerSpec::Kind::uniform_sphere:
                s.n = uniform_direction(rng);
                break;
            case SamplerSpec::Kind::uniform_sphere_pair:
                s.n = uniform_direction(rng);
                s.n2 = uniform_direction(rng);
                break;
            case SamplerSpec::Kind::maxwell_momentum:
            case SamplerSpec::Kind::maxwell_momentum_pair: {
                Vec3 p{normal(rng), normal(rng), normal(rng)};
                s.p = norm(p);
                s.n = s.p > 0.0 ? p / s.p : Vec3{0.0, 0.0, 1.0};
                if (spec.kind == SamplerSpec::Kind::maxwell_momentum_pair) s.n2 = uniform_direction(rng);
                break;
            }
        }
        const double v = f(s);
        if (!std::isfinite(v)) detail::throw_non_finite("mc_oracle", i, "sample");
        const double delta = v - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (v - mean);
    }
    const double var = m2 / static_cast<double>(n_samples - 1);
    return {mean, std::sqrt(var / static_cast<double>(n_samples)), ErrorMethod::mc_stderr};
}

}  // namespace anisodec
