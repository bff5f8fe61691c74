#include "scanforge/scene.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <string>

#include "json.hpp"

namespace scanforge {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

Aabb world_aabb(const ObjectInstance& obj) {
    double c = std::cos(deg_to_rad(obj.yaw_deg));
    double s = std::sin(deg_to_rad(obj.yaw_deg));
    double hx = obj.size.x * 0.5;
    double hy = obj.size.y * 0.5;
    double hz = obj.size.z * 0.5;

    double ex = std::fabs(c) * hx + std::fabs(s) * hy;
    double ey = std::fabs(s) * hx + std::fabs(c) * hy;
    Vec3 lo{obj.position.x - ex, obj.position.y - ey, obj.position.z - hz};
    Vec3 hi{obj.position.x + ex, obj.position.y + ey, obj.position.z + hz};
    return Aabb(lo, hi);
}

void validate_room(const Room& room) {
    if (room.room_id.empty())
        throw ValidationError("room_id", "<room>", "must be nonempty");
    if (room.room_type.empty())
        throw ValidationError("room_type", room.room_id, "must be nonempty");
    if (!(room.ceiling_height > 0.0))
        throw ValidationError("ceiling_height", room.room_id, "must be > 0");
    std::set<std::string> seen;
    for (const ObjectInstance& obj : room.objects) {
        if (obj.object_id.empty())
            throw ValidationError("object_id", room.room_id, "must be nonempty");
        if (!seen.insert(obj.object_id).second)
            throw ValidationError("object_id", obj.object_id,
                                  "duplicate id within room " + room.room_id);
        if (!(obj.size.x > 0.0 && obj.size.y > 0.0 && obj.size.z > 0.0) ||
            !obj.size.is_finite())
            throw ValidationError("size", obj.object_id, "extents must be > 0");
        if (!obj.position.is_finite())
            throw ValidationError("position", obj.object_id, "must be finite");
        if (!std::isfinite(obj.yaw_deg))
            throw ValidationError("yaw_deg", obj.object_id, "must be finite");
        if (!room.floor_polygon.contains(obj.position.xy()))
            throw ValidationError("position", obj.object_id,
                                  "centroid lies outside the floor polygon");
    }
}

void validate_scene(const Scene& scene) {
    if (scene.scene_id.empty())
        throw ValidationError("scene_id", "<scene>", "must be nonempty");
    if (scene.rooms.empty())
        throw ValidationError("rooms", scene.scene_id, "at least one room required");
    std::set<std::string> ids;
    for (const Room& room : scene.rooms) {
        if (!ids.insert(room.room_id).second)
            throw ValidationError("room_id", room.room_id, "duplicate room id");
        validate_room(room);
    }
}

namespace {

std::string lowercased(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    return s;
}

[[noreturn]] void wrap_parse_error(const json::parse_error& e, std::string_view text) {
    size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    if (byte > text.size()) byte = text.size();
    int line = 1;
    int col = 1;
    for (size_t i = 0; i < byte; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    throw ParseError(e.what(), line, col);
}

const json& require(const json& obj, const char* key, const std::string& entity) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw ValidationError(key, entity, "missing required field");
    return *it;
}

void check_known_fields(const json& obj, std::initializer_list<const char*> known,
                        const std::string& entity, bool lenient) {
    if (lenient) return;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool found = false;
        for (const char* k : known)
            if (it.key() == k) found = true;
        if (!found)
            throw ValidationError(it.key(), entity, "unknown field (strict mode)");
    }
}

double as_number(const json& v, const char* key, const std::string& entity) {
    if (!v.is_number())
        throw ValidationError(key, entity, "expected a number");
    return v.get<double>();
}

std::string as_string(const json& v, const char* key, const std::string& entity) {
    if (!v.is_string())
        throw ValidationError(key, entity, "expected a string");
    return v.get<std::string>();
}

Vec3 as_vec3(const json& v, const char* key, const std::string& entity) {
    if (!v.is_array() || v.size() != 3)
        throw ValidationError(key, entity, "expected an array of 3 numbers");
    return {as_number(v[0], key, entity), as_number(v[1], key, entity),
            as_number(v[2], key, entity)};
}

ObjectInstance parse_object(const json& j, bool lenient) {
    if (!j.is_object())
        throw ValidationError("objects", "<object>", "expected an object record");
    std::string id = as_string(require(j, "object_id", "<object>"), "object_id",
                               "<object>");
    check_known_fields(j,
                       {"object_id", "category", "position", "yaw_deg", "size",
                        "navigable"},
                       id, lenient);
    ObjectInstance obj;
    obj.object_id = id;
    obj.category = lowercased(as_string(require(j, "category", id), "category", id));
    obj.position = as_vec3(require(j, "position", id), "position", id);
    obj.yaw_deg = as_number(require(j, "yaw_deg", id), "yaw_deg", id);
    obj.size = as_vec3(require(j, "size", id), "size", id);
    if (j.contains("navigable")) {
        if (!j["navigable"].is_boolean())
            throw ValidationError("navigable", id, "expected a boolean");
        obj.navigable = j["navigable"].get<bool>();
    }
    return obj;
}

Room parse_room(const json& j, bool lenient) {
    if (!j.is_object())
        throw ValidationError("rooms", "<room>", "expected an object record");
    std::string id = as_string(require(j, "room_id", "<room>"), "room_id", "<room>");
    check_known_fields(
        j, {"room_id", "room_type", "floor_polygon", "ceiling_height", "objects"},
        id, lenient);

    const json& poly = require(j, "floor_polygon", id);
    if (!poly.is_array())
        throw ValidationError("floor_polygon", id, "expected an array of [x,y] pairs");
    std::vector<Vec2> verts;
    verts.reserve(poly.size());
    for (const json& v : poly) {
        if (!v.is_array() || v.size() != 2)
            throw ValidationError("floor_polygon", id, "expected [x,y] pairs");
        verts.push_back({as_number(v[0], "floor_polygon", id),
                         as_number(v[1], "floor_polygon", id)});
    }

    Polygon2 polygon = [&] {
        try {
            return Polygon2(std::move(verts));
        } catch (const DegenerateGeometry& e) {
            throw ValidationError("floor_polygon", id, e.what());
        }
    }();

    Room room{id,
              as_string(require(j, "room_type", id), "room_type", id),
              std::move(polygon),
              as_number(require(j, "ceiling_height", id), "ceiling_height", id),
              {}};

    const json& objs = require(j, "objects", id);
    if (!objs.is_array())
        throw ValidationError("objects", id, "expected an array");
    for (const json& o : objs) room.objects.push_back(parse_object(o, lenient));
    return room;
}

}  // namespace

Scene parse_scene(std::string_view text, bool lenient) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        wrap_parse_error(e, text);
    }
    if (!doc.is_object())
        throw ValidationError("<root>", "<scene>", "expected a top-level object");
    std::string id =
        as_string(require(doc, "scene_id", "<scene>"), "scene_id", "<scene>");
    check_known_fields(doc, {"scene_id", "rooms"}, id, lenient);

    Scene scene;
    scene.scene_id = id;
    const json& rooms = require(doc, "rooms", id);
    if (!rooms.is_array())
        throw ValidationError("rooms", id, "expected an array");
    for (const json& r : rooms) scene.rooms.push_back(parse_room(r, lenient));

    validate_scene(scene);
    return scene;
}

std::string serialize_scene(const Scene& scene) {
    ordered_json doc;
    doc["scene_id"] = scene.scene_id;
    doc["rooms"] = ordered_json::array();
    for (const Room& room : scene.rooms) {
        ordered_json r;
        r["room_id"] = room.room_id;
        r["room_type"] = room.room_type;
        ordered_json poly = ordered_json::array();
        for (const Vec2& v : room.floor_polygon.vertices())
            poly.push_back({v.x, v.y});
        r["floor_polygon"] = std::move(poly);
        r["ceiling_height"] = room.ceiling_height;
        r["objects"] = ordered_json::array();
        for (const ObjectInstance& obj : room.objects) {
            ordered_json o;
            o["object_id"] = obj.object_id;
            o["category"] = obj.category;
            o["position"] = {obj.position.x, obj.position.y, obj.position.z};
            o["yaw_deg"] = obj.yaw_deg;
            o["size"] = {obj.size.x, obj.size.y, obj.size.z};
            o["navigable"] = obj.navigable;
            r["objects"].push_back(std::move(o));
        }
        doc["rooms"].push_back(std::move(r));
    }
    return doc.dump(2) + "\n";
}

std::vector<Scene> disassemble(const Scene& scene) {
    std::vector<Scene> out;
    out.reserve(scene.rooms.size());
    for (const Room& room : scene.rooms) {
        Scene single{scene.scene_id + "/" + room.room_id, {room}};
        out.push_back(std::move(single));
    }
    return out;
}

std::vector<Scene> filter_rooms(const std::vector<Scene>& rooms,
                                const std::set<std::string>& type_whitelist,
                                int min_objects) {
    std::vector<Scene> kept;
    for (const Scene& s : rooms) {
        if (s.rooms.size() != 1)
            throw ValidationError("rooms", s.scene_id, "expected a single-room scene");
        const Room& room = s.rooms.front();
        if (type_whitelist.count(room.room_type) == 0) continue;
        if (int(room.objects.size()) < min_objects) continue;
        kept.push_back(s);
    }
    return kept;
}

const std::set<std::string>& default_room_type_whitelist() {
    static const std::set<std::string> kWhitelist = {
        "bedroom", "kitchen", "bathroom", "living room", "dining room",
        "storage room"};
    return kWhitelist;
}

}  // namespace scanforge
