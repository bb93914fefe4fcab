#include "anisodec/special.hpp"

#include <cmath>

#include "anisodec/errors.hpp"
#include "anisodec/quadrature.hpp"

namespace anisodec {

double sinc(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
    }
    return std::sin(x) / x;
}

namespace {

constexpr double two_pi = 2.0 * constants::pi;

complex series_branch(complex z) {
    // 2 sum_k (-z)^k / k! * I_k, with I_k = int_0^1 (1 - xi^2)^k dxi = (2k)!! / (2k+1)!!.
    complex term = 1.0;  // (-z)^k / k!
    double moment = 1.0;
    complex sum = 1.0;
    for (int k = 1; k < 60; ++k) {
        term *= -z / static_cast<double>(k);
        moment *= 2.0 * k / (2.0 * k + 1.0);
        const complex add = term * moment;
        sum += add;
        if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return 2.0 * sum;
}

complex quadrature_branch(complex z) {
    const AxialRule rule = AxialRule::graded(z.real(), 2.0 * std::abs(z.imag()), 16);
    complex sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double xi = rule.nodes[i];
        sum += rule.weights[i] * std::exp(-z * ((1.0 - xi) * (1.0 + xi)));
    }
    return sum;
}

complex asymptotic_branch(complex z) {
    const complex inv = 1.0 / (2.0 * z);
    complex term = 1.0;
    complex sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        const complex next = term * (2.0 * k - 1.0) * inv;
        if (std::abs(next) > std::abs(term)) break;  // past the smallest term
        term = next;
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum / z;
}

}  // namespace

complex exp_sin2_sphere_integral(complex z) {
    if (z.real() < 0.0 || !std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw DomainError("exp_sin2_sphere_integral", "requires finite z with Re z >= 0");
    const double r = std::abs(z);
    complex xi_integral;
    if (r < 2.0) {
        xi_integral = series_branch(z);
    } else if (r < 60.0 || z.real() < 0.5 * r) {
        xi_integral = quadrature_branch(z);
    } else {
        xi_integral = asymptotic_branch(z);
    }
    return two_pi * xi_integral;
}

void legendre_table(double x, std::span<double> out) {
    if (out.empty()) return;
    out[0] = 1.0;
    if (out.size() == 1) return;
    out[1] = x;
    for (std::size_t j = 2; j < out.size(); ++j) {
        const double jj = static_cast<double>(j);
        out[j] = ((2.0 * jj - 1.0) * x * out[j - 1] - (jj - 1.0) * out[j - 2]) / jj;
    }
}

}  // namespace anisodec
