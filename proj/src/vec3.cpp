#include "anisodec/vec3.hpp"

#include "anisodec/errors.hpp"

namespace anisodec {

UnitVector::UnitVector(const Vec3& v) {
    const double n = norm(v);
    if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("unit_vector", "zero or non-finite direction");
    v_ = v / n;
}

std::array<Vec3, 2> transverse_basis(const Vec3& n) {
    const double ax = std::abs(n.x), ay = std::abs(n.y), az = std::abs(n.z);
    Vec3 axis;
    if (ax <= ay && ax <= az) {
        axis = {1.0, 0.0, 0.0};
    } else if (ay <= az) {
        axis = {0.0, 1.0, 0.0};
    } else {
        axis = {0.0, 0.0, 1.0};
    }
    const Vec3 e1 = normalized(axis - dot(axis, n) * n);
    return {e1, cross(n, e1)};
}

Vec3 rotate(const Vec3& v, const Vec3& axis, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return c * v + s * cross(axis, v) + (1.0 - c) * dot(axis, v) * axis;
}

}  // namespace anisodec
