#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "scanforge/trajectory.hpp"

namespace scanforge {

struct LocalMapEntry {
    std::string object_id;
    std::string category;
    Vec3 local_position;  // relative to the reference object, world axes
};

// Per-frame object set; the reference object sits at the local origin.
struct LocalFrameMap {
    int frame_index = 0;
    std::string reference_object_id;
    std::vector<LocalMapEntry> entries;
};

struct GlobalMapEntry {
    std::string object_id;
    std::string category;
    Vec3 position;
};

// Scene-wide object set in one coordinate system, ids unique after merging.
struct GlobalMap {
    std::vector<GlobalMapEntry> entries;
};

struct GridMap {
    double cell_size = 1.0;
    std::map<std::pair<long long, long long>, std::vector<std::string>> cells;
};

struct PositionDescription {
    std::string object_id;
    std::string text;
};

// output[i] composes deltas[0..=i] in order; empty in, empty out.
std::vector<RigidTransform> accumulate_transforms(
    const std::vector<RigidTransform>& deltas);

inline Vec3 local_to_global(const RigidTransform& frame_transform, const Vec3& local) {
    return apply(frame_transform, local);
}

// Entries with equal category within distance_threshold are unioned
// transitively; merged position is the member mean, merged id the smallest
// member id. Output sorted by id.
GlobalMap merge_duplicates(const std::vector<GlobalMapEntry>& raw,
                           double distance_threshold);

// Floor-rule cell index, corrected so i*s <= v < (i+1)*s holds exactly in
// double arithmetic.
std::pair<long long, long long> grid_cell_of(double cell_size, double x, double y);

GridMap quantize_to_grid(const GlobalMap& map, double cell_size);

// English offsets relative to "the reference point", left/right then
// front/behind then above/below, 0.1 m rounding, 0.05 m dead zone.
std::string describe_position(const Vec3& reference, const Vec3& target,
                              const Vec2& reference_front);

// Visible objects of one frame, positions relative to the reference object's
// centroid. Throws ReferenceNotVisible.
LocalFrameMap build_local_map(const FrameRecord& frame, const Room& room,
                              const std::string& reference_object_id);

// Ground-truth map straight from room annotations (identity frame).
GlobalMap global_map_from_room(const Room& room);

// Ordered (key, description) pairs keyed by category; repeat categories get
// " 2", " 3" suffixes. First map entry is the reference point.
std::vector<std::pair<std::string, std::string>> build_description_map(
    const GlobalMap& map, const Vec2& reference_front);

std::string global_map_to_json(const GlobalMap& map);
GlobalMap global_map_from_json(const std::string& text);
std::string grid_map_to_json(const GridMap& grid);
std::string description_map_to_json(
    const std::vector<std::pair<std::string, std::string>>& descriptions);

}  // namespace scanforge
