#include "scanforge_ref/kernels_serial.hpp"

#include <algorithm>
#include <cmath>

namespace scanforge::ref {

namespace {

// winding-number point-in-polygon, boundary inclusive
bool polygon_contains_ref(const Polygon2& polygon, const Vec2& p) {
    const auto& v = polygon.vertices();
    size_t n = v.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec2& a = v[i];
        const Vec2& b = v[(i + 1) % n];
        Vec2 ab = b - a;
        double len2 = ab.dot(ab);
        double t = len2 > 1e-24 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
        if ((p - (a + ab * t)).norm() < 1e-9) return true;
    }
    int winding = 0;
    for (size_t i = 0; i < n; ++i) {
        const Vec2& a = v[i];
        const Vec2& b = v[(i + 1) % n];
        if (a.y <= p.y) {
            if (b.y > p.y && (b - a).cross(p - a) > 0) ++winding;
        } else {
            if (b.y <= p.y && (b - a).cross(p - a) < 0) --winding;
        }
    }
    return winding != 0;
}

struct WorldFootprint {
    Vec2 corners[4];
};

WorldFootprint world_footprint(const ObjectInstance& obj) {
    double c = std::cos(deg_to_rad(obj.yaw_deg));
    double s = std::sin(deg_to_rad(obj.yaw_deg));
    double hx = obj.size.x * 0.5;
    double hy = obj.size.y * 0.5;
    WorldFootprint f;
    const double sx[4] = {-hx, hx, hx, -hx};
    const double sy[4] = {-hy, -hy, hy, hy};
    for (int k = 0; k < 4; ++k) {
        f.corners[k] = {obj.position.x + sx[k] * c - sy[k] * s,
                        obj.position.y + sx[k] * s + sy[k] * c};
    }
    return f;
}

double point_segment_dist(const Vec2& a, const Vec2& b, const Vec2& p) {
    Vec2 ab = b - a;
    double len2 = ab.dot(ab);
    double t = len2 > 1e-24 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
    return (p - (a + ab * t)).norm();
}

bool point_in_convex_quad(const WorldFootprint& f, const Vec2& p) {
    for (int k = 0; k < 4; ++k) {
        Vec2 a = f.corners[k];
        Vec2 b = f.corners[(k + 1) % 4];
        if ((b - a).cross(p - a) < 0) return false;
    }
    return true;
}

bool footprint_blocks(const WorldFootprint& f, const Vec2& p, double inflate) {
    if (point_in_convex_quad(f, p)) return true;
    for (int k = 0; k < 4; ++k) {
        if (point_segment_dist(f.corners[k], f.corners[(k + 1) % 4], p) <= inflate)
            return true;
    }
    return false;
}

}  // namespace

OccupancyGrid build_occupancy_grid_serial(const Room& room, double cell_size,
                                          double agent_radius) {
    auto [lo, hi] = room.floor_polygon.bounding_box();
    OccupancyGrid grid;
    grid.cell_size = cell_size;
    grid.origin = lo;
    grid.width = std::max(1, int(std::ceil((hi.x - lo.x) / cell_size)));
    grid.height = std::max(1, int(std::ceil((hi.y - lo.y) / cell_size)));
    grid.blocked.assign(size_t(grid.width) * grid.height, 0);

    std::vector<WorldFootprint> footprints;
    for (const ObjectInstance& obj : room.objects)
        if (!obj.navigable) footprints.push_back(world_footprint(obj));

    for (int j = 0; j < grid.height; ++j) {
        for (int i = 0; i < grid.width; ++i) {
            Vec2 c = grid.cell_center(i, j);
            bool blocked = !polygon_contains_ref(room.floor_polygon, c);
            if (!blocked) {
                for (const WorldFootprint& f : footprints) {
                    if (footprint_blocks(f, c, agent_radius)) {
                        blocked = true;
                        break;
                    }
                }
            }
            grid.blocked[size_t(j) * grid.width + i] = blocked ? 1 : 0;
        }
    }
    return grid;
}

namespace {

// interval-clipping segment/box intersection
bool segment_hits_box_ref(const Vec3& origin, const Vec3& target, const Aabb& box) {
    double t_enter = 0.0;
    double t_exit = 1.0;
    const double o[3] = {origin.x, origin.y, origin.z};
    const double e[3] = {target.x, target.y, target.z};
    const double lo[3] = {box.min.x, box.min.y, box.min.z};
    const double hi[3] = {box.max.x, box.max.y, box.max.z};
    for (int axis = 0; axis < 3; ++axis) {
        double d = e[axis] - o[axis];
        if (std::fabs(d) < 1e-15) {
            if (o[axis] < lo[axis] || o[axis] > hi[axis]) return false;
            continue;
        }
        double a = (lo[axis] - o[axis]) / d;
        double b = (hi[axis] - o[axis]) / d;
        if (a > b) std::swap(a, b);
        t_enter = std::max(t_enter, a);
        t_exit = std::min(t_exit, b);
        if (t_enter > t_exit) return false;
    }
    return true;
}

double angle_diff_deg(double a, double b) {
    double d = std::fabs(wrap_deg(a) - wrap_deg(b));
    return d > 180.0 ? 360.0 - d : d;
}

}  // namespace

std::vector<std::string> visible_objects_serial(const CameraPose& pose,
                                                const Room& room, double hfov_deg,
                                                double max_range) {
    std::vector<Aabb> boxes;
    boxes.reserve(room.objects.size());
    for (const ObjectInstance& obj : room.objects) boxes.push_back(world_aabb(obj));

    std::vector<std::pair<double, std::string>> hits;
    for (size_t t = 0; t < room.objects.size(); ++t) {
        const ObjectInstance& obj = room.objects[t];
        std::vector<Vec3> points = {obj.position};
        for (double x : {boxes[t].min.x, boxes[t].max.x})
            for (double y : {boxes[t].min.y, boxes[t].max.y})
                for (double z : {boxes[t].min.z, boxes[t].max.z})
                    points.push_back({x, y, z});

        bool seen = false;
        for (const Vec3& pt : points) {
            Vec3 d = pt - pose.position;
            double dist = d.norm();
            if (dist > max_range) continue;
            if (dist > 1e-12) {
                Vec2 dxy = d.xy();
                if (dxy.norm() >= 1e-12) {
                    double bearing = rad_to_deg(std::atan2(dxy.y, dxy.x));
                    if (angle_diff_deg(bearing, pose.yaw_deg) > hfov_deg * 0.5)
                        continue;
                }
                bool occluded = false;
                for (size_t o = 0; o < room.objects.size(); ++o) {
                    if (o == t) continue;
                    if (segment_hits_box_ref(pose.position, pt, boxes[o])) {
                        occluded = true;
                        break;
                    }
                }
                if (occluded) continue;
            }
            seen = true;
            break;
        }
        if (seen) hits.push_back({distance(obj.position, pose.position), obj.object_id});
    }
    std::sort(hits.begin(), hits.end());
    std::vector<std::string> ids;
    for (auto& [d, id] : hits) ids.push_back(std::move(id));
    return ids;
}

void annotate_visibility_serial(std::vector<FrameRecord>& frames, const Room& room,
                                double hfov_deg, double max_range) {
    for (FrameRecord& frame : frames)
        frame.visible_object_ids =
            visible_objects_serial(frame.pose, room, hfov_deg, max_range);
}

}  // namespace scanforge::ref
