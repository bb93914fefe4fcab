#pragma once

// Importance sampling of xi = n.n' for integrands peaked at xi = +-1, as the
// small-angle amplitude is. Mixture of a uniform density and truncated
// exponentials in 1 - xi and 1 + xi with rate lambda, one third each.

#include <cmath>

namespace anisodec::testing {

struct PeakedXi {
    double xi;
    double weight;  ///< (1/2) / q(xi): converts to an average over uniform xi
};

inline PeakedXi sample_peaked_xi(double u, double lambda) {
    const int comp = std::min(2, static_cast<int>(3.0 * u));
    const double v = 3.0 * u - comp;
    double xi;
    if (lambda < 1e-6 || comp == 0) {
        xi = 2.0 * v - 1.0;
    } else {
        const double y = -std::log1p(-v * -std::expm1(-2.0 * lambda)) / lambda;
        xi = comp == 1 ? 1.0 - y : y - 1.0;
    }
    auto g = [&](double y) {
        return lambda < 1e-6 ? 0.5 : lambda * std::exp(-lambda * y) / -std::expm1(-2.0 * lambda);
    };
    const double q = (0.5 + g(1.0 - xi) + g(1.0 + xi)) / 3.0;
    return {xi, 0.5 / q};
}

}  // namespace anisodec::testing
