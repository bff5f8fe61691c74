#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scanforge/scene.hpp"

namespace scanforge {

enum class ScanPhase { orbit, rot_start, traverse, rot_end };

std::string to_string(ScanPhase phase);
ScanPhase scan_phase_from_string(const std::string& s);

struct CameraPose {
    Vec3 position;          // meters
    double yaw_deg = 0.0;   // heading in XY, CCW from +X
    double pitch_deg = 0.0; // 0 = level
};

struct FrameRecord {
    std::string scan_id;
    int frame_index = 0;
    ScanPhase phase = ScanPhase::orbit;
    CameraPose pose;
    std::vector<std::string> visible_object_ids;  // nearest first
};

struct ScanTrajectory {
    std::string scan_id;
    std::vector<FrameRecord> frames;
};

struct ScanParams {
    double hfov_deg = 90.0;
    double max_range = 20.0;
    double cell_size = 0.1;
    double agent_radius = 0.25;
    double eye_height = 1.5;
};

// Discretized floor map standing in for a baked navigation mesh. Covers the
// floor polygon's bounding box; cells outside the polygon are blocked.
struct OccupancyGrid {
    double cell_size = 0.1;
    Vec2 origin;  // min corner of the covered box
    int width = 0;
    int height = 0;
    std::vector<uint8_t> blocked;

    bool is_blocked(int i, int j) const { return blocked[size_t(j) * width + i] != 0; }
    bool in_bounds(int i, int j) const {
        return i >= 0 && i < width && j >= 0 && j < height;
    }
    Vec2 cell_center(int i, int j) const {
        return {origin.x + (i + 0.5) * cell_size, origin.y + (j + 0.5) * cell_size};
    }
    std::optional<std::pair<int, int>> cell_of(const Vec2& p) const {
        int i = int(std::floor((p.x - origin.x) / cell_size));
        int j = int(std::floor((p.y - origin.y) / cell_size));
        if (!in_bounds(i, j)) return std::nullopt;
        return std::make_pair(i, j);
    }
};

struct NavPath {
    std::vector<Vec2> waypoints;  // 4/8-adjacent free cell centers
    double length = 0.0;          // meters
};

// Circular sweep at eye height around the floor centroid: 72 frames, one
// every 5 degrees, camera facing the center. Start angle and direction come
// from the seed.
ScanTrajectory orbit_scan(const Room& room, uint64_t seed,
                          const ScanParams& params = {});

// Cell blocked iff its center is outside the floor polygon or inside the
// agent-inflated yaw-rotated footprint of a non-navigable object.
OccupancyGrid build_occupancy_grid(const Room& room, double cell_size,
                                   double agent_radius);

// Dijkstra over 8-connected free cells; straight moves cost cell_size,
// diagonals cell_size * sqrt(2). Endpoints off the free set snap to the
// nearest free cell within 0.5 m. Throws NoPath when unreachable.
NavPath shortest_path(const OccupancyGrid& grid, const Vec2& start, const Vec2& goal);

std::vector<std::pair<std::string, std::string>> sample_candidate_pairs(
    const Room& room, uint64_t seed, int candidate_pairs);

struct NavScanResult {
    std::vector<ScanTrajectory> trajectories;  // longest first
    std::vector<std::pair<std::string, std::string>> selected_pairs;
    std::vector<double> path_lengths;
};

// Seeded candidate object pairs, shortest paths between their nearest free
// cells, the two longest kept. Per path: 30 rotation frames at the start
// (12 degree steps), 12 traverse frames at uniform arc length, 30 rotation
// frames at the goal — 72 frames.
NavScanResult navigation_scan_result(const Room& room, uint64_t seed,
                                     int candidate_pairs,
                                     const ScanParams& params = {});

std::vector<ScanTrajectory> navigation_scan(const Room& room, uint64_t seed,
                                            int candidate_pairs,
                                            const ScanParams& params = {});

// An object is visible when one of its centroid or world-box corners falls
// inside the horizontal FOV wedge within max_range and the sight ray to that
// point is not cut by another object's box. Nearest first.
std::vector<std::string> visible_objects(const CameraPose& pose, const Room& room,
                                         double hfov_deg, double max_range);

// Fills visible_object_ids for every frame. Parallel over frames.
void annotate_visibility(std::vector<FrameRecord>& frames, const Room& room,
                         double hfov_deg, double max_range);

std::string frame_to_json_line(const FrameRecord& frame);
std::string frames_to_jsonl(const std::vector<FrameRecord>& frames);
std::vector<FrameRecord> parse_frames_jsonl(const std::string& text);

}  // namespace scanforge
