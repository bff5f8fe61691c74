#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "scanforge/geometry.hpp"

namespace scanforge {

struct ObjectInstance {
    std::string object_id;   // unique within its room
    std::string category;    // lowercase
    Vec3 position;           // centroid, meters
    double yaw_deg = 0.0;    // CCW about +Z, 0 = facing +X
    Vec3 size;               // full extents before yaw, all > 0
    bool navigable = false;  // true: agents may walk over it
};

// World-space box of the yaw-rotated object.
Aabb world_aabb(const ObjectInstance& obj);

struct Room {
    std::string room_id;
    std::string room_type;
    Polygon2 floor_polygon;
    double ceiling_height = 0.0;
    std::vector<ObjectInstance> objects;
};

struct Scene {
    std::string scene_id;
    std::vector<Room> rooms;
};

// Throws ValidationError naming the offending field and entity.
void validate_room(const Room& room);
void validate_scene(const Scene& scene);

// Strict mode rejects unknown fields; lenient ignores them.
Scene parse_scene(std::string_view text, bool lenient = false);
std::string serialize_scene(const Scene& scene);

// One single-room scene per input room, scene_id = parent + "/" + room_id.
std::vector<Scene> disassemble(const Scene& scene);

// Keeps single-room scenes whose type is whitelisted and which hold at least
// min_objects objects; input order preserved.
std::vector<Scene> filter_rooms(const std::vector<Scene>& rooms,
                                const std::set<std::string>& type_whitelist,
                                int min_objects);

const std::set<std::string>& default_room_type_whitelist();

}  // namespace scanforge
