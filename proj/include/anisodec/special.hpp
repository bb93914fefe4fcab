#pragma once

#include <span>

#include "anisodec/vec3.hpp"

namespace anisodec {

/// sin(x) / x, continuous at zero.
double sinc(double x);

/// Solid-angle integral over n' of exp(-z |n x n'|^2) for Re z >= 0,
/// i.e. 2 pi times the integral of exp(-z (1 - xi^2)) over xi in [-1, 1].
///
/// Power series for |z| < 2, composite Gauss-Legendre on a graded axial rule
/// for 2 <= |z| < 60, and the large-|z| expansion (1/z) sum (2k-1)!!/(2z)^k
/// beyond. Relative accuracy is ~1e-14 on all three branches.
complex exp_sin2_sphere_integral(complex z);

/// Fills out[j] = P_j(x) for j = 0..out.size()-1 by upward recurrence.
void legendre_table(double x, std::span<double> out);

}  // namespace anisodec
