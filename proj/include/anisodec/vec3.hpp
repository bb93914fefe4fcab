#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace anisodec {

using complex = std::complex<double>;

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    constexpr Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    constexpr Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    constexpr Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    constexpr Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

    friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
    friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
    friend constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
    friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
    friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
    friend constexpr Vec3 operator/(Vec3 a, double s) { return a *= (1.0 / s); }
};

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
constexpr double norm2(const Vec3& a) { return dot(a, a); }
inline Vec3 normalized(const Vec3& a) { return a / norm(a); }

/// |a x b|^2 without forming the cross product's square root.
constexpr double cross_norm2(const Vec3& a, const Vec3& b) {
    const Vec3 c = cross(a, b);
    return dot(c, c);
}

/// Complex 3-vector, used for vector scattering amplitudes.
struct CVec3 {
    complex x, y, z;

    CVec3() = default;
    CVec3(complex x_, complex y_, complex z_) : x(x_), y(y_), z(z_) {}
    CVec3(const Vec3& v) : x(v.x), y(v.y), z(v.z) {}  // NOLINT(google-explicit-constructor)

    CVec3& operator+=(const CVec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    CVec3& operator-=(const CVec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    CVec3& operator*=(complex s) { x *= s; y *= s; z *= s; return *this; }

    friend CVec3 operator+(CVec3 a, const CVec3& b) { return a += b; }
    friend CVec3 operator-(CVec3 a, const CVec3& b) { return a -= b; }
    friend CVec3 operator*(complex s, CVec3 a) { return a *= s; }
    friend CVec3 operator*(CVec3 a, complex s) { return a *= s; }
};

/// Bilinear (non-conjugating) product with a real vector.
inline complex dot(const Vec3& a, const CVec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline complex dot(const CVec3& b, const Vec3& a) { return dot(a, b); }

inline double norm2(const CVec3& a) { return std::norm(a.x) + std::norm(a.y) + std::norm(a.z); }

/// A direction on the unit sphere. Construction normalizes and rejects
/// zero or non-finite input.
class UnitVector {
public:
    UnitVector() = default;
    explicit UnitVector(const Vec3& v);
    UnitVector(double x, double y, double z) : UnitVector(Vec3{x, y, z}) {}

    /// Wraps a vector already known to be unit length (|v| = 1 within 1e-12).
    static UnitVector trusted(const Vec3& v) {
        UnitVector u;
        u.v_ = v;
        return u;
    }

    static UnitVector from_polar(double theta, double phi) {
        const double s = std::sin(theta);
        return trusted({s * std::cos(phi), s * std::sin(phi), std::cos(theta)});
    }

    const Vec3& vec() const { return v_; }
    operator const Vec3&() const { return v_; }  // NOLINT(google-explicit-constructor)
    double x() const { return v_.x; }
    double y() const { return v_.y; }
    double z() const { return v_.z; }

    UnitVector operator-() const { return trusted(-v_); }

private:
    Vec3 v_{0.0, 0.0, 1.0};
};

/// Orthonormal pair spanning the plane perpendicular to `n`, built by
/// Gram-Schmidt against the coordinate axis with the smallest |component|.
std::array<Vec3, 2> transverse_basis(const Vec3& n);

/// Rotates `v` about the unit axis `axis` by `angle` (Rodrigues).
Vec3 rotate(const Vec3& v, const Vec3& axis, double angle);

}  // namespace anisodec
