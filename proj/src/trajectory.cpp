#include "scanforge/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "scanforge/jsonio.hpp"
#include "scanforge/random.hpp"

namespace scanforge {

std::string to_string(ScanPhase phase) {
    switch (phase) {
        case ScanPhase::orbit: return "orbit";
        case ScanPhase::rot_start: return "rot_start";
        case ScanPhase::traverse: return "traverse";
        case ScanPhase::rot_end: return "rot_end";
    }
    return "orbit";
}

ScanPhase scan_phase_from_string(const std::string& s) {
    if (s == "orbit") return ScanPhase::orbit;
    if (s == "rot_start") return ScanPhase::rot_start;
    if (s == "traverse") return ScanPhase::traverse;
    if (s == "rot_end") return ScanPhase::rot_end;
    throw ValidationError("phase", s, "unknown scan phase");
}

ScanTrajectory orbit_scan(const Room& room, uint64_t seed, const ScanParams& params) {
    auto [lo, hi] = room.floor_polygon.bounding_box();
    double shorter = std::min(hi.x - lo.x, hi.y - lo.y);
    if (shorter < 1.0)
        throw RoomTooSmall("room " + room.room_id +
                           ": floor bounding box shorter side is below 1 m");

    // diameter is two-thirds of the shorter side
    double radius = shorter / 3.0;
    Vec2 center = room.floor_polygon.centroid();

    Rng rng(seed);
    double start_angle = rng.uniform(0.0, 360.0);
    double direction = rng.coin() ? 1.0 : -1.0;

    ScanTrajectory traj;
    traj.scan_id = room.room_id + "/orbit";
    traj.frames.reserve(72);
    for (int i = 0; i < 72; ++i) {
        double angle = start_angle + direction * 5.0 * i;
        double rad = deg_to_rad(angle);
        CameraPose pose;
        pose.position = {center.x + radius * std::cos(rad),
                         center.y + radius * std::sin(rad), params.eye_height};
        pose.yaw_deg = wrap_deg(angle + 180.0);  // gaze at the center
        pose.pitch_deg = 0.0;
        traj.frames.push_back({traj.scan_id, i, ScanPhase::orbit, pose, {}});
    }
    annotate_visibility(traj.frames, room, params.hfov_deg, params.max_range);
    return traj;
}

namespace {

// object footprint prepared for point tests in its local frame
struct Footprint {
    Vec2 center;
    double cos_yaw;
    double sin_yaw;
    double half_x;
    double half_y;
};

std::vector<Footprint> collect_obstacles(const Room& room) {
    std::vector<Footprint> out;
    for (const ObjectInstance& obj : room.objects) {
        if (obj.navigable) continue;
        out.push_back({obj.position.xy(), std::cos(deg_to_rad(obj.yaw_deg)),
                       std::sin(deg_to_rad(obj.yaw_deg)), obj.size.x * 0.5,
                       obj.size.y * 0.5});
    }
    return out;
}

// point within the footprint after Minkowski inflation by `inflate`
bool in_inflated_footprint(const Footprint& f, const Vec2& p, double inflate) {
    double dx = p.x - f.center.x;
    double dy = p.y - f.center.y;
    double lx = dx * f.cos_yaw + dy * f.sin_yaw;
    double ly = -dx * f.sin_yaw + dy * f.cos_yaw;
    double ex = std::max(std::fabs(lx) - f.half_x, 0.0);
    double ey = std::max(std::fabs(ly) - f.half_y, 0.0);
    return ex * ex + ey * ey <= inflate * inflate;
}

}  // namespace

OccupancyGrid build_occupancy_grid(const Room& room, double cell_size,
                                   double agent_radius) {
    if (!(cell_size > 0.0))
        throw ValidationError("cell_size", room.room_id, "must be > 0");
    if (agent_radius < 0.0)
        throw ValidationError("agent_radius", room.room_id, "must be >= 0");

    auto [lo, hi] = room.floor_polygon.bounding_box();
    OccupancyGrid grid;
    grid.cell_size = cell_size;
    grid.origin = lo;
    grid.width = std::max(1, int(std::ceil((hi.x - lo.x) / cell_size)));
    grid.height = std::max(1, int(std::ceil((hi.y - lo.y) / cell_size)));
    grid.blocked.assign(size_t(grid.width) * grid.height, 0);

    const std::vector<Footprint> obstacles = collect_obstacles(room);
    const Polygon2& polygon = room.floor_polygon;
    const int w = grid.width;
    const int h = grid.height;

#pragma omp parallel for schedule(static)
    for (int j = 0; j < h; ++j) {
        for (int i = 0; i < w; ++i) {
            Vec2 c = grid.cell_center(i, j);
            bool blocked = !polygon.contains(c);
            if (!blocked) {
                for (const Footprint& f : obstacles) {
                    if (in_inflated_footprint(f, c, agent_radius)) {
                        blocked = true;
                        break;
                    }
                }
            }
            grid.blocked[size_t(j) * w + i] = blocked ? 1 : 0;
        }
    }
    return grid;
}

namespace {

std::optional<std::pair<int, int>> snap_to_free(const OccupancyGrid& g,
                                                const Vec2& p, double max_snap) {
    if (auto cell = g.cell_of(p)) {
        if (!g.is_blocked(cell->first, cell->second)) return cell;
    }
    std::optional<std::pair<int, int>> best;
    double best_dist = max_snap;
    for (int j = 0; j < g.height; ++j) {
        for (int i = 0; i < g.width; ++i) {
            if (g.is_blocked(i, j)) continue;
            double d = (g.cell_center(i, j) - p).norm();
            if (d < best_dist - 1e-12 ||
                (std::fabs(d - best_dist) <= 1e-12 && best &&
                 std::make_pair(i, j) < *best)) {
                best_dist = d;
                best = std::make_pair(i, j);
            }
        }
    }
    return best;
}

std::optional<std::pair<int, int>> nearest_free_cell(const OccupancyGrid& g,
                                                     const Vec2& p) {
    return snap_to_free(g, p, std::numeric_limits<double>::infinity());
}

struct PathCounts {
    int straight = 0;
    int diagonal = 0;
};

// Distances are kept as (straight, diagonal) step counts so that two
// independent searches report bit-identical lengths.
std::optional<std::vector<std::pair<int, int>>> dijkstra_cells(
    const OccupancyGrid& g, std::pair<int, int> start, std::pair<int, int> goal,
    PathCounts* counts_out) {
    const int w = g.width;
    const int h = g.height;
    const double straight_cost = g.cell_size;
    const double diag_cost = g.cell_size * std::sqrt(2.0);

    std::vector<double> dist(size_t(w) * h, std::numeric_limits<double>::infinity());
    std::vector<int> prev(size_t(w) * h, -1);
    std::vector<PathCounts> counts(size_t(w) * h);
    std::vector<uint8_t> done(size_t(w) * h, 0);

    auto idx = [w](int i, int j) { return size_t(j) * w + i; };

    using Entry = std::tuple<double, int, int>;  // (dist, i, j)
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> pq;
    dist[idx(start.first, start.second)] = 0.0;
    pq.emplace(0.0, start.first, start.second);

    static const int di[8] = {-1, -1, -1, 0, 0, 1, 1, 1};
    static const int dj[8] = {-1, 0, 1, -1, 1, -1, 0, 1};

    while (!pq.empty()) {
        auto [d, i, j] = pq.top();
        pq.pop();
        size_t u = idx(i, j);
        if (done[u]) continue;
        done[u] = 1;
        if (i == goal.first && j == goal.second) break;
        for (int n = 0; n < 8; ++n) {
            int ni = i + di[n];
            int nj = j + dj[n];
            if (!g.in_bounds(ni, nj) || g.is_blocked(ni, nj)) continue;
            bool diag = di[n] != 0 && dj[n] != 0;
            PathCounts nc = counts[u];
            if (diag)
                ++nc.diagonal;
            else
                ++nc.straight;
            double nd = nc.straight * straight_cost + nc.diagonal * diag_cost;
            size_t v = idx(ni, nj);
            if (nd < dist[v]) {
                dist[v] = nd;
                prev[v] = int(u);
                counts[v] = nc;
                pq.emplace(nd, ni, nj);
            }
        }
    }

    size_t gidx = idx(goal.first, goal.second);
    if (!done[gidx] && !(start == goal)) return std::nullopt;

    std::vector<std::pair<int, int>> cells;
    for (int at = int(gidx); at != -1; at = prev[size_t(at)]) {
        cells.push_back({int(size_t(at) % w), int(size_t(at) / w)});
        if (cells.back() == start) break;
    }
    std::reverse(cells.begin(), cells.end());
    if (counts_out) *counts_out = counts[gidx];
    return cells;
}

}  // namespace

NavPath shortest_path(const OccupancyGrid& grid, const Vec2& start, const Vec2& goal) {
    auto s = snap_to_free(grid, start, 0.5);
    auto t = snap_to_free(grid, goal, 0.5);
    if (!s) throw NoPath("start is not within 0.5 m of a free cell");
    if (!t) throw NoPath("goal is not within 0.5 m of a free cell");

    PathCounts counts;
    auto cells = dijkstra_cells(grid, *s, *t, &counts);
    if (!cells) throw NoPath("goal unreachable from start");

    NavPath path;
    path.waypoints.reserve(cells->size());
    for (auto [i, j] : *cells) path.waypoints.push_back(grid.cell_center(i, j));
    path.length = counts.straight * grid.cell_size +
                  counts.diagonal * (grid.cell_size * std::sqrt(2.0));
    return path;
}

std::vector<std::pair<std::string, std::string>> sample_candidate_pairs(
    const Room& room, uint64_t seed, int candidate_pairs) {
    std::vector<std::string> ids;
    ids.reserve(room.objects.size());
    for (const ObjectInstance& obj : room.objects) ids.push_back(obj.object_id);
    std::sort(ids.begin(), ids.end());

    std::vector<std::pair<std::string, std::string>> pairs;
    for (size_t a = 0; a < ids.size(); ++a)
        for (size_t b = a + 1; b < ids.size(); ++b)
            pairs.push_back({ids[a], ids[b]});

    Rng rng(child_seed(seed, "pairs"));
    rng.shuffle(pairs);
    if (int(pairs.size()) > candidate_pairs) pairs.resize(size_t(candidate_pairs));
    return pairs;
}

namespace {

double segment_heading_deg(const Vec2& a, const Vec2& b) {
    return wrap_deg(rad_to_deg(std::atan2(b.y - a.y, b.x - a.x)));
}

// position and travel heading at arc length s along the waypoint polyline
std::pair<Vec2, double> point_along(const std::vector<Vec2>& wp, double s,
                                    double fallback_heading) {
    if (wp.size() < 2) return {wp.empty() ? Vec2{} : wp.front(), fallback_heading};
    double walked = 0.0;
    for (size_t k = 0; k + 1 < wp.size(); ++k) {
        double seg = (wp[k + 1] - wp[k]).norm();
        if (s <= walked + seg || k + 2 == wp.size()) {
            double t = seg > 1e-12 ? std::clamp((s - walked) / seg, 0.0, 1.0) : 0.0;
            return {wp[k] + (wp[k + 1] - wp[k]) * t, segment_heading_deg(wp[k], wp[k + 1])};
        }
        walked += seg;
    }
    return {wp.back(), fallback_heading};
}

ScanTrajectory build_nav_trajectory(const Room& room, const std::string& scan_id,
                                    const NavPath& path, const ScanParams& params) {
    ScanTrajectory traj;
    traj.scan_id = scan_id;
    traj.frames.reserve(72);

    const std::vector<Vec2>& wp = path.waypoints;
    double start_heading = 0.0;
    double end_heading = 0.0;
    for (size_t k = 0; k + 1 < wp.size(); ++k) {
        if ((wp[k + 1] - wp[k]).norm() > 1e-12) {
            start_heading = segment_heading_deg(wp[k], wp[k + 1]);
            break;
        }
    }
    for (size_t k = wp.size(); k >= 2; --k) {
        if ((wp[k - 1] - wp[k - 2]).norm() > 1e-12) {
            end_heading = segment_heading_deg(wp[k - 2], wp[k - 1]);
            break;
        }
    }

    int frame = 0;
    Vec2 start = wp.front();
    for (int i = 0; i < 30; ++i, ++frame) {
        CameraPose pose{{start.x, start.y, params.eye_height},
                        wrap_deg(start_heading + 12.0 * i), 0.0};
        traj.frames.push_back({scan_id, frame, ScanPhase::rot_start, pose, {}});
    }
    for (int i = 1; i <= 12; ++i, ++frame) {
        auto [pos, heading] = point_along(wp, path.length * i / 12.0, start_heading);
        CameraPose pose{{pos.x, pos.y, params.eye_height}, heading, 0.0};
        traj.frames.push_back({scan_id, frame, ScanPhase::traverse, pose, {}});
    }
    Vec2 goal = wp.back();
    for (int i = 0; i < 30; ++i, ++frame) {
        CameraPose pose{{goal.x, goal.y, params.eye_height},
                        wrap_deg(end_heading + 12.0 * i), 0.0};
        traj.frames.push_back({scan_id, frame, ScanPhase::rot_end, pose, {}});
    }
    annotate_visibility(traj.frames, room, params.hfov_deg, params.max_range);
    return traj;
}

}  // namespace

NavScanResult navigation_scan_result(const Room& room, uint64_t seed,
                                     int candidate_pairs, const ScanParams& params) {
    if (candidate_pairs < 2)
        throw ValidationError("candidate_pairs", room.room_id, "must be >= 2");
    if (room.objects.size() < 2)
        throw InsufficientPaths("room " + room.room_id + ": fewer than 2 objects");

    auto pairs = sample_candidate_pairs(room, seed, candidate_pairs);
    OccupancyGrid grid = build_occupancy_grid(room, params.cell_size,
                                              params.agent_radius);

    auto object_position = [&](const std::string& id) -> Vec2 {
        for (const ObjectInstance& obj : room.objects)
            if (obj.object_id == id) return obj.position.xy();
        throw ValidationError("object_id", id, "not found in room");
    };

    struct Candidate {
        std::pair<std::string, std::string> pair;
        NavPath path;
    };
    std::vector<Candidate> reachable;
    for (const auto& pr : pairs) {
        auto a = nearest_free_cell(grid, object_position(pr.first));
        auto b = nearest_free_cell(grid, object_position(pr.second));
        if (!a || !b) continue;
        PathCounts counts;
        auto cells = dijkstra_cells(grid, *a, *b, &counts);
        if (!cells) continue;
        NavPath path;
        for (auto [i, j] : *cells) path.waypoints.push_back(grid.cell_center(i, j));
        path.length = counts.straight * grid.cell_size +
                      counts.diagonal * (grid.cell_size * std::sqrt(2.0));
        reachable.push_back({pr, std::move(path)});
    }
    if (reachable.size() < 2)
        throw InsufficientPaths("room " + room.room_id +
                                ": fewer than 2 reachable candidate pairs");

    std::stable_sort(reachable.begin(), reachable.end(),
                     [](const Candidate& a, const Candidate& b) {
                         if (a.path.length != b.path.length)
                             return a.path.length > b.path.length;
                         return a.pair < b.pair;
                     });

    NavScanResult result;
    for (int k = 0; k < 2; ++k) {
        const Candidate& c = reachable[size_t(k)];
        std::string scan_id = room.room_id + "/nav" + std::to_string(k);
        result.trajectories.push_back(
            build_nav_trajectory(room, scan_id, c.path, params));
        result.selected_pairs.push_back(c.pair);
        result.path_lengths.push_back(c.path.length);
    }
    return result;
}

std::vector<ScanTrajectory> navigation_scan(const Room& room, uint64_t seed,
                                            int candidate_pairs,
                                            const ScanParams& params) {
    return navigation_scan_result(room, seed, candidate_pairs, params).trajectories;
}

namespace {

struct VisibilityTarget {
    const ObjectInstance* object;
    Aabb box;
    std::vector<Vec3> test_points;  // centroid + 8 box corners
};

std::vector<VisibilityTarget> prepare_targets(const Room& room) {
    std::vector<VisibilityTarget> targets;
    targets.reserve(room.objects.size());
    for (const ObjectInstance& obj : room.objects) {
        Aabb box = world_aabb(obj);
        std::vector<Vec3> pts;
        pts.reserve(9);
        pts.push_back(obj.position);
        for (double x : {box.min.x, box.max.x})
            for (double y : {box.min.y, box.max.y})
                for (double z : {box.min.z, box.max.z}) pts.push_back({x, y, z});
        targets.push_back({&obj, box, std::move(pts)});
    }
    return targets;
}

std::vector<std::string> visible_from(const CameraPose& pose,
                                      const std::vector<VisibilityTarget>& targets,
                                      double hfov_deg, double max_range) {
    Vec2 front{std::cos(deg_to_rad(pose.yaw_deg)), std::sin(deg_to_rad(pose.yaw_deg))};
    double cos_half = std::cos(deg_to_rad(hfov_deg * 0.5));

    std::vector<std::pair<double, std::string>> hits;
    for (size_t t = 0; t < targets.size(); ++t) {
        const VisibilityTarget& target = targets[t];
        bool seen = false;
        for (const Vec3& pt : target.test_points) {
            Vec3 d = pt - pose.position;
            double dist = d.norm();
            if (dist > max_range) continue;
            if (dist > 1e-12) {
                Vec2 dxy = d.xy();
                double nxy = dxy.norm();
                if (nxy >= 1e-12 && dxy.dot(front) < cos_half * nxy) continue;
                bool occluded = false;
                for (size_t o = 0; o < targets.size(); ++o) {
                    if (o == t) continue;
                    if (ray_hits_aabb(pose.position, d, targets[o].box, dist)) {
                        occluded = true;
                        break;
                    }
                }
                if (occluded) continue;
            }
            seen = true;
            break;
        }
        if (seen)
            hits.push_back({distance(target.object->position, pose.position),
                            target.object->object_id});
    }
    std::sort(hits.begin(), hits.end());
    std::vector<std::string> ids;
    ids.reserve(hits.size());
    for (auto& [d, id] : hits) ids.push_back(std::move(id));
    return ids;
}

}  // namespace

std::vector<std::string> visible_objects(const CameraPose& pose, const Room& room,
                                         double hfov_deg, double max_range) {
    if (!(hfov_deg > 0.0 && hfov_deg < 180.0))
        throw ValidationError("hfov_deg", room.room_id, "must lie in (0, 180)");
    return visible_from(pose, prepare_targets(room), hfov_deg, max_range);
}

void annotate_visibility(std::vector<FrameRecord>& frames, const Room& room,
                         double hfov_deg, double max_range) {
    if (!(hfov_deg > 0.0 && hfov_deg < 180.0))
        throw ValidationError("hfov_deg", room.room_id, "must lie in (0, 180)");
    const auto targets = prepare_targets(room);
    const int n = int(frames.size());
#pragma omp parallel for schedule(static)
    for (int f = 0; f < n; ++f) {
        frames[size_t(f)].visible_object_ids =
            visible_from(frames[size_t(f)].pose, targets, hfov_deg, max_range);
    }
}

std::string frame_to_json_line(const FrameRecord& frame) {
    std::string out = "{\"scan_id\":" + quoted(frame.scan_id);
    out += ",\"frame_index\":" + std::to_string(frame.frame_index);
    out += ",\"phase\":" + quoted(to_string(frame.phase));
    out += ",\"pose\":{\"position\":[" + fmt_f6(frame.pose.position.x) + "," +
           fmt_f6(frame.pose.position.y) + "," + fmt_f6(frame.pose.position.z) + "]";
    out += ",\"yaw_deg\":" + fmt_f6(frame.pose.yaw_deg);
    out += ",\"pitch_deg\":" + fmt_f6(frame.pose.pitch_deg) + "}";
    out += ",\"visible_object_ids\":" + json_string_array(frame.visible_object_ids);
    out += "}";
    return out;
}

std::string frames_to_jsonl(const std::vector<FrameRecord>& frames) {
    std::string out;
    for (const FrameRecord& f : frames) {
        out += frame_to_json_line(f);
        out += "\n";
    }
    return out;
}

std::vector<FrameRecord> parse_frames_jsonl(const std::string& text) {
    std::vector<FrameRecord> frames;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(e.what(), lineno, 1);
        }
        try {
            FrameRecord f;
            f.scan_id = j.at("scan_id").get<std::string>();
            f.frame_index = j.at("frame_index").get<int>();
            f.phase = scan_phase_from_string(j.at("phase").get<std::string>());
            const auto& pose = j.at("pose");
            const auto& pos = pose.at("position");
            f.pose.position = {pos[0].get<double>(), pos[1].get<double>(),
                               pos[2].get<double>()};
            f.pose.yaw_deg = pose.at("yaw_deg").get<double>();
            f.pose.pitch_deg = pose.at("pitch_deg").get<double>();
            for (const auto& id : j.at("visible_object_ids"))
                f.visible_object_ids.push_back(id.get<std::string>());
            frames.push_back(std::move(f));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(e.what(), lineno, 1);
        }
    }
    return frames;
}

}  // namespace scanforge
