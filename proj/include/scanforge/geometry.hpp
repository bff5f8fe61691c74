#pragma once

#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "scanforge/errors.hpp"

namespace scanforge {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

// normalize into [0, 360)
inline double wrap_deg(double deg) {
    double a = std::fmod(deg, 360.0);
    if (a < 0.0) a += 360.0;
    if (a >= 360.0) a = 0.0;
    return a;
}

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    Vec2 normalized() const {
        double n = norm();
        if (n < 1e-12) throw DegenerateGeometry("cannot normalize zero-length vector");
        return {x / n, y / n};
    }
};

// Meters; Z is up, the floor lies in the XY-plane.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    Vec2 xy() const { return {x, y}; }
    bool is_finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
};

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

using Mat3 = std::array<std::array<double, 3>, 3>;

// Orthonormal, determinant +1 (checked to 1e-9 after construction). Inputs
// within 1e-6 of orthonormal are re-orthonormalized; anything further off is
// rejected as degenerate.
class Rotation3 {
public:
    Rotation3() : m_{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}} {}

    static Rotation3 identity() { return Rotation3(); }

    // CCW about +Z; 0 degrees faces +X.
    static Rotation3 yaw_deg(double deg) {
        double c = std::cos(deg_to_rad(deg));
        double s = std::sin(deg_to_rad(deg));
        Rotation3 r;
        r.m_ = {{{c, -s, 0}, {s, c, 0}, {0, 0, 1}}};
        return r;
    }

    static Rotation3 from_matrix(const Mat3& m);

    double at(int row, int col) const { return m_[row][col]; }

    Vec3 apply(const Vec3& p) const {
        return {m_[0][0] * p.x + m_[0][1] * p.y + m_[0][2] * p.z,
                m_[1][0] * p.x + m_[1][1] * p.y + m_[1][2] * p.z,
                m_[2][0] * p.x + m_[2][1] * p.y + m_[2][2] * p.z};
    }

    Rotation3 transposed() const {
        Rotation3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.m_[i][j] = m_[j][i];
        return r;
    }

    Rotation3 operator*(const Rotation3& o) const {
        Rotation3 r;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) s += m_[i][k] * o.m_[k][j];
                r.m_[i][j] = s;
            }
        }
        return r;
    }

    double determinant() const;
    bool is_orthonormal(double tol) const;

private:
    Mat3 m_;
};

// Rotation followed by translation: p -> R*p + t.
struct RigidTransform {
    Rotation3 rotation;
    Vec3 translation;

    static RigidTransform identity() { return {}; }
    static RigidTransform from_translation(const Vec3& t) {
        return {Rotation3::identity(), t};
    }
    static RigidTransform from_yaw_translation(double yaw_deg, const Vec3& t) {
        return {Rotation3::yaw_deg(yaw_deg), t};
    }
};

// b first, then a.
RigidTransform compose(const RigidTransform& a, const RigidTransform& b);
Vec3 apply(const RigidTransform& t, const Vec3& p);
RigidTransform invert(const RigidTransform& t);

struct Aabb {
    Vec3 min;
    Vec3 max;

    Aabb(const Vec3& lo, const Vec3& hi) : min(lo), max(hi) {
        if (!(lo.x <= hi.x && lo.y <= hi.y && lo.z <= hi.z))
            throw DegenerateGeometry("box min exceeds max");
    }

    static Aabb from_center_size(const Vec3& center, const Vec3& size) {
        Vec3 h = size * 0.5;
        return Aabb(center - h, center + h);
    }

    bool contains(const Vec3& p) const {
        return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y &&
               p.z >= min.z && p.z <= max.z;
    }

    bool intersects(const Aabb& o) const {
        return min.x <= o.max.x && o.min.x <= max.x && min.y <= o.max.y &&
               o.min.y <= max.y && min.z <= o.max.z && o.min.z <= max.z;
    }
};

// Euclidean distance between nearest boundary points; 0 when overlapping
// or touching.
double aabb_gap(const Aabb& a, const Aabb& b);

// Simple counter-clockwise polygon in the XY-plane, at least 3 vertices.
class Polygon2 {
public:
    explicit Polygon2(std::vector<Vec2> vertices);

    const std::vector<Vec2>& vertices() const { return verts_; }

    double area() const;  // shoelace; throws DegenerateGeometry below 1e-9
    Vec2 centroid() const;
    bool contains(const Vec2& p) const;  // boundary counts as inside
    std::pair<Vec2, Vec2> bounding_box() const;

private:
    std::vector<Vec2> verts_;
};

inline double polygon_area(const Polygon2& p) { return p.area(); }

// Angle in [0, 360) measured clockwise from `front` to `to_target`.
double clockwise_angle_deg(const Vec2& front, const Vec2& to_target);

// Slab test against the segment origin + t * normalize(dir), t in [0, max_dist].
bool ray_hits_aabb(const Vec3& origin, const Vec3& dir, const Aabb& box,
                   double max_dist);

}  // namespace scanforge
