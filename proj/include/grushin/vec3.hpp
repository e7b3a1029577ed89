#pragma once

#include <array>
#include <cmath>

namespace grushin {

// Point or vector in R^3 with coordinates (x1, x2, y).
struct Vec3 {
    double x1 = 0.0;
    double x2 = 0.0;
    double y = 0.0;

    double& operator[](int i) { return i == 0 ? x1 : (i == 1 ? x2 : y); }
    double operator[](int i) const { return i == 0 ? x1 : (i == 1 ? x2 : y); }

    Vec3& operator+=(const Vec3& o) { x1 += o.x1; x2 += o.x2; y += o.y; return *this; }
    Vec3& operator-=(const Vec3& o) { x1 -= o.x1; x2 -= o.x2; y -= o.y; return *this; }
    Vec3& operator*=(double s) { x1 *= s; x2 *= s; y *= s; return *this; }

    friend Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
    friend Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
    friend Vec3 operator*(Vec3 a, double s) { return a *= s; }
    friend Vec3 operator*(double s, Vec3 a) { return a *= s; }
    friend Vec3 operator/(Vec3 a, double s) { return a *= 1.0 / s; }
    friend Vec3 operator-(Vec3 a) { return a *= -1.0; }
    friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x1 * b.x1 + a.x2 * b.x2 + a.y * b.y; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.x2 * b.y - a.y * b.x2, a.y * b.x1 - a.x1 * b.y, a.x1 * b.x2 - a.x2 * b.x1};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

// |x| = sqrt(x1^2 + x2^2), the distance to the y-axis.
inline double horizontal_norm(const Vec3& p) { return std::hypot(p.x1, p.x2); }

// Axis-aligned box [lo, hi].
struct Box {
    Vec3 lo;
    Vec3 hi;

    Vec3 extent() const { return hi - lo; }
    Vec3 center() const { return (lo + hi) * 0.5; }
    bool contains(const Vec3& p) const {
        return p.x1 >= lo.x1 && p.x1 <= hi.x1 && p.x2 >= lo.x2 && p.x2 <= hi.x2 && p.y >= lo.y &&
               p.y <= hi.y;
    }
    bool strictly_contains(const Vec3& p) const {
        return p.x1 > lo.x1 && p.x1 < hi.x1 && p.x2 > lo.x2 && p.x2 < hi.x2 && p.y > lo.y && p.y < hi.y;
    }
    bool degenerate() const {
        return !(hi.x1 > lo.x1) || !(hi.x2 > lo.x2) || !(hi.y > lo.y);
    }
};

}  // namespace grushin
