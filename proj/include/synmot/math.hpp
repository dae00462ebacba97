#pragma once

// Small fixed-size linear algebra for the pipeline: 3-vectors, 4x4
// transforms, and the yaw/pitch/roll convention shared by cameras and
// objects (intrinsic, applied about world-up, then body-right, then
// body-forward).

#include <array>
#include <cmath>
#include <limits>

namespace synmot {

inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double d) { return d * kPi / 180.0; }
inline double rad_to_deg(double r) { return r * 180.0 / kPi; }

struct Vec2 {
    double x = 0.0, y = 0.0;
    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }
};

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(const Vec3& a) {
    double n = norm(a);
    return n > 0.0 ? a * (1.0 / n) : a;
}

// Row-major 3x3 rotation.
struct Mat3 {
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    static Mat3 identity() { return {}; }

    Vec3 operator*(const Vec3& v) const {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
                m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z};
    }
    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) s += m[i * 3 + k] * o.m[k * 3 + j];
                r.m[i * 3 + j] = s;
            }
        return r;
    }
    Mat3 transposed() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.m[i * 3 + j] = m[j * 3 + i];
        return r;
    }
    double det() const {
        return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
               m[2] * (m[3] * m[7] - m[4] * m[6]);
    }

    static Mat3 rot_x(double a) {
        double c = std::cos(a), s = std::sin(a);
        Mat3 r;
        r.m = {1, 0, 0, 0, c, -s, 0, s, c};
        return r;
    }
    static Mat3 rot_y(double a) {
        double c = std::cos(a), s = std::sin(a);
        Mat3 r;
        r.m = {c, 0, s, 0, 1, 0, -s, 0, c};
        return r;
    }
    static Mat3 rot_z(double a) {
        double c = std::cos(a), s = std::sin(a);
        Mat3 r;
        r.m = {c, -s, 0, s, c, 0, 0, 0, 1};
        return r;
    }
};

// Body-to-world rotation from yaw (about world up +y), pitch (about body
// right +x), roll (about body forward +z), composed intrinsically.
// Zero angles give the identity: body axes coincide with world axes.
// A level, upright camera (image-down = world-down) therefore has
// roll = pi, since camera +y points down in the image.
inline Mat3 rotation_from_ypr(double yaw, double pitch, double roll) {
    return Mat3::rot_y(yaw) * Mat3::rot_x(pitch) * Mat3::rot_z(roll);
}

// Rigid transform p -> R*p + t.
struct Transform {
    Mat3 rot;
    Vec3 trans;

    static Transform identity() { return {}; }

    Vec3 operator*(const Vec3& p) const { return rot * p + trans; }
    Transform operator*(const Transform& o) const {
        // (this o o)(p) = R1*(R2*p + t2) + t1
        return {rot * o.rot, rot * o.trans + trans};
    }
    Transform inverse() const {
        Mat3 rt = rot.transposed();
        return {rt, -(rt * trans)};
    }
};

struct Box2 {
    double left = 0.0, top = 0.0, right = 0.0, bottom = 0.0;

    double width() const { return right - left; }
    double height() const { return bottom - top; }
    double area() const { return std::max(0.0, width()) * std::max(0.0, height()); }
    bool empty() const { return right <= left || bottom <= top; }
};

inline double iou(const Box2& a, const Box2& b) {
    double il = std::max(a.left, b.left);
    double it = std::max(a.top, b.top);
    double ir = std::min(a.right, b.right);
    double ib = std::min(a.bottom, b.bottom);
    double inter = std::max(0.0, ir - il) * std::max(0.0, ib - it);
    double uni = a.area() + b.area() - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

inline double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

inline constexpr double kInfDepth = std::numeric_limits<double>::infinity();

}  // namespace synmot
