#ifndef GAC_VEC3_HPP
#define GAC_VEC3_HPP

#include <array>
#include <cmath>

namespace gac {

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline Vec3 add(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }

inline Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

inline Vec3 scale(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

// Row-major 3x3 rotation matrix.
struct Mat3 {
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    static Mat3 identity() { return Mat3{}; }

    Vec3 apply(const Vec3& v) const {
        return {m[0] * v[0] + m[1] * v[1] + m[2] * v[2],
                m[3] * v[0] + m[4] * v[1] + m[5] * v[2],
                m[6] * v[0] + m[7] * v[1] + m[8] * v[2]};
    }

    Mat3 compose(const Mat3& rhs) const {  // this * rhs
        Mat3 out;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) s += m[r * 3 + k] * rhs.m[k * 3 + c];
                out.m[r * 3 + c] = s;
            }
        return out;
    }
};

// Rodrigues rotation about a unit axis.
inline Mat3 rotation_about_axis(const Vec3& unit_axis, double angle_rad) {
    const double c = std::cos(angle_rad);
    const double s = std::sin(angle_rad);
    const double t = 1.0 - c;
    const double x = unit_axis[0], y = unit_axis[1], z = unit_axis[2];
    Mat3 r;
    r.m = {t * x * x + c,     t * x * y - s * z, t * x * z + s * y,
           t * x * y + s * z, t * y * y + c,     t * y * z - s * x,
           t * x * z - s * y, t * y * z + s * x, t * z * z + c};
    return r;
}

// Minimal rotation carrying direction `from` onto direction `to`.
// Inputs need not be normalized. Antiparallel inputs rotate 180 degrees
// about an arbitrary perpendicular axis.
inline Mat3 rotation_between(const Vec3& from, const Vec3& to) {
    const double nf = norm(from);
    const double nt = norm(to);
    if (nf == 0.0 || nt == 0.0) return Mat3::identity();
    const Vec3 f = scale(from, 1.0 / nf);
    const Vec3 t = scale(to, 1.0 / nt);
    const Vec3 axis = cross(f, t);
    const double sin_a = norm(axis);
    const double cos_a = dot(f, t);
    if (sin_a < 1e-15) {
        if (cos_a > 0.0) return Mat3::identity();
        // pick any axis perpendicular to f
        Vec3 perp = std::fabs(f[0]) < 0.9 ? cross(f, Vec3{1, 0, 0}) : cross(f, Vec3{0, 1, 0});
        return rotation_about_axis(scale(perp, 1.0 / norm(perp)), 3.14159265358979323846);
    }
    return rotation_about_axis(scale(axis, 1.0 / sin_a), std::atan2(sin_a, cos_a));
}

}  // namespace gac

#endif  // GAC_VEC3_HPP
