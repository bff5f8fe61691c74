#include "scanforge/geometry.hpp"

#include <algorithm>
#include <limits>

namespace scanforge {

namespace {

Vec3 column(const Mat3& m, int j) { return {m[0][j], m[1][j], m[2][j]}; }

}  // namespace

Rotation3 Rotation3::from_matrix(const Mat3& m) {
    Vec3 c0 = column(m, 0);
    Vec3 c1 = column(m, 1);
    Vec3 c2 = column(m, 2);

    double n0 = c0.norm();
    if (n0 < 1e-12) throw DegenerateGeometry("rotation column is zero");
    Vec3 u0 = c0 * (1.0 / n0);
    Vec3 v1 = c1 - u0 * c1.dot(u0);
    double n1 = v1.norm();
    if (n1 < 1e-12) throw DegenerateGeometry("rotation columns are collinear");
    Vec3 u1 = v1 * (1.0 / n1);
    Vec3 u2 = u0.cross(u1);

    auto deviation = [](const Vec3& a, const Vec3& b) {
        return std::max({std::fabs(a.x - b.x), std::fabs(a.y - b.y),
                         std::fabs(a.z - b.z)});
    };
    double drift = std::max({deviation(c0, u0), deviation(c1, u1), deviation(c2, u2)});
    if (drift > 1e-6)
        throw DegenerateGeometry("matrix is not a rotation (drift beyond 1e-6)");

    Rotation3 r;
    r.m_ = {{{u0.x, u1.x, u2.x}, {u0.y, u1.y, u2.y}, {u0.z, u1.z, u2.z}}};
    return r;
}

double Rotation3::determinant() const {
    return m_[0][0] * (m_[1][1] * m_[2][2] - m_[1][2] * m_[2][1]) -
           m_[0][1] * (m_[1][0] * m_[2][2] - m_[1][2] * m_[2][0]) +
           m_[0][2] * (m_[1][0] * m_[2][1] - m_[1][1] * m_[2][0]);
}

bool Rotation3::is_orthonormal(double tol) const {
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double dot = 0.0;
            for (int k = 0; k < 3; ++k) dot += m_[k][i] * m_[k][j];
            double expected = (i == j) ? 1.0 : 0.0;
            if (std::fabs(dot - expected) > tol) return false;
        }
    }
    return std::fabs(determinant() - 1.0) <= tol;
}

RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
    return {a.rotation * b.rotation, a.rotation.apply(b.translation) + a.translation};
}

Vec3 apply(const RigidTransform& t, const Vec3& p) {
    return t.rotation.apply(p) + t.translation;
}

RigidTransform invert(const RigidTransform& t) {
    Rotation3 rt = t.rotation.transposed();
    return {rt, rt.apply(t.translation) * -1.0};
}

double aabb_gap(const Aabb& a, const Aabb& b) {
    auto axis_gap = [](double amin, double amax, double bmin, double bmax) {
        return std::max({amin - bmax, bmin - amax, 0.0});
    };
    double dx = axis_gap(a.min.x, a.max.x, b.min.x, b.max.x);
    double dy = axis_gap(a.min.y, a.max.y, b.min.y, b.max.y);
    double dz = axis_gap(a.min.z, a.max.z, b.min.z, b.max.z);
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

namespace {

double signed_area(const std::vector<Vec2>& v) {
    double s = 0.0;
    for (size_t i = 0; i < v.size(); ++i) {
        const Vec2& p = v[i];
        const Vec2& q = v[(i + 1) % v.size()];
        s += p.x * q.y - q.x * p.y;
    }
    return 0.5 * s;
}

int orientation(const Vec2& a, const Vec2& b, const Vec2& c) {
    double d = (b - a).cross(c - a);
    if (d > 1e-12) return 1;
    if (d < -1e-12) return -1;
    return 0;
}

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
    return p.x >= std::min(a.x, b.x) - 1e-12 && p.x <= std::max(a.x, b.x) + 1e-12 &&
           p.y >= std::min(a.y, b.y) - 1e-12 && p.y <= std::max(a.y, b.y) + 1e-12;
}

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    int o1 = orientation(a, b, c);
    int o2 = orientation(a, b, d);
    int o3 = orientation(c, d, a);
    int o4 = orientation(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

double point_segment_distance(const Vec2& a, const Vec2& b, const Vec2& p) {
    Vec2 ab = b - a;
    double len2 = ab.dot(ab);
    if (len2 < 1e-24) return (p - a).norm();
    double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + ab * t)).norm();
}

}  // namespace

Polygon2::Polygon2(std::vector<Vec2> vertices) : verts_(std::move(vertices)) {
    if (verts_.size() < 3)
        throw DegenerateGeometry("polygon needs at least 3 vertices");
    for (const Vec2& v : verts_)
        if (!std::isfinite(v.x) || !std::isfinite(v.y))
            throw DegenerateGeometry("polygon vertex is not finite");
    if (!(signed_area(verts_) > 0.0))
        throw DegenerateGeometry("polygon must wind counter-clockwise");
    size_t n = verts_.size();
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            // skip edges sharing a vertex
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            if (segments_intersect(verts_[i], verts_[(i + 1) % n], verts_[j],
                                   verts_[(j + 1) % n]))
                throw DegenerateGeometry("polygon is self-intersecting");
        }
    }
}

double Polygon2::area() const {
    double a = signed_area(verts_);
    if (a < 1e-9) throw DegenerateGeometry("polygon area below 1e-9");
    return a;
}

Vec2 Polygon2::centroid() const {
    double a = 0.0;
    double cx = 0.0;
    double cy = 0.0;
    size_t n = verts_.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec2& p = verts_[i];
        const Vec2& q = verts_[(i + 1) % n];
        double w = p.x * q.y - q.x * p.y;
        a += w;
        cx += (p.x + q.x) * w;
        cy += (p.y + q.y) * w;
    }
    if (std::fabs(a) < 1e-18) throw DegenerateGeometry("degenerate polygon centroid");
    return {cx / (3.0 * a), cy / (3.0 * a)};
}

bool Polygon2::contains(const Vec2& p) const {
    size_t n = verts_.size();
    for (size_t i = 0; i < n; ++i) {
        if (point_segment_distance(verts_[i], verts_[(i + 1) % n], p) < 1e-9)
            return true;
    }
    bool inside = false;
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = verts_[i];
        const Vec2& b = verts_[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            double x_cross = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
            if (p.x < x_cross) inside = !inside;
        }
    }
    return inside;
}

std::pair<Vec2, Vec2> Polygon2::bounding_box() const {
    Vec2 lo{std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
    Vec2 hi{-std::numeric_limits<double>::infinity(),
            -std::numeric_limits<double>::infinity()};
    for (const Vec2& v : verts_) {
        lo.x = std::min(lo.x, v.x);
        lo.y = std::min(lo.y, v.y);
        hi.x = std::max(hi.x, v.x);
        hi.y = std::max(hi.y, v.y);
    }
    return {lo, hi};
}

double clockwise_angle_deg(const Vec2& front, const Vec2& to_target) {
    if (front.norm() < 1e-12 || to_target.norm() < 1e-12)
        throw DegenerateGeometry("direction vector has zero length");
    double ccw = rad_to_deg(std::atan2(front.cross(to_target), front.dot(to_target)));
    return wrap_deg(-ccw);
}

bool ray_hits_aabb(const Vec3& origin, const Vec3& dir, const Aabb& box,
                   double max_dist) {
    double n = dir.norm();
    if (n < 1e-12) return false;
    Vec3 d = dir * (1.0 / n);

    double t_lo = 0.0;
    double t_hi = max_dist;
    const double o[3] = {origin.x, origin.y, origin.z};
    const double dv[3] = {d.x, d.y, d.z};
    const double lo[3] = {box.min.x, box.min.y, box.min.z};
    const double hi[3] = {box.max.x, box.max.y, box.max.z};
    for (int axis = 0; axis < 3; ++axis) {
        if (std::fabs(dv[axis]) < 1e-15) {
            if (o[axis] < lo[axis] || o[axis] > hi[axis]) return false;
            continue;
        }
        double inv = 1.0 / dv[axis];
        double t1 = (lo[axis] - o[axis]) * inv;
        double t2 = (hi[axis] - o[axis]) * inv;
        if (t1 > t2) std::swap(t1, t2);
        t_lo = std::max(t_lo, t1);
        t_hi = std::min(t_hi, t2);
        if (t_lo > t_hi) return false;
    }
    return true;
}

}  // namespace scanforge
