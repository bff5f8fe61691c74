#include "scanforge/cognition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"
#include "scanforge/jsonio.hpp"

namespace scanforge {

std::vector<RigidTransform> accumulate_transforms(
    const std::vector<RigidTransform>& deltas) {
    std::vector<RigidTransform> out;
    out.reserve(deltas.size());
    RigidTransform running = RigidTransform::identity();
    for (const RigidTransform& d : deltas) {
        running = compose(running, d);
        out.push_back(running);
    }
    return out;
}

namespace {

struct UnionFind {
    std::vector<size_t> parent;
    explicit UnionFind(size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), size_t(0));
    }
    size_t find(size_t a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    }
    void unite(size_t a, size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

GlobalMap merge_duplicates(const std::vector<GlobalMapEntry>& raw,
                           double distance_threshold) {
    if (!(distance_threshold > 0.0))
        throw ValidationError("distance_threshold", "merge_duplicates", "must be > 0");

    UnionFind uf(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) {
        for (size_t j = i + 1; j < raw.size(); ++j) {
            if (raw[i].category != raw[j].category) continue;
            if (distance(raw[i].position, raw[j].position) <= distance_threshold)
                uf.unite(i, j);
        }
    }

    std::map<size_t, std::vector<size_t>> groups;
    for (size_t i = 0; i < raw.size(); ++i) groups[uf.find(i)].push_back(i);

    GlobalMap merged;
    merged.entries.reserve(groups.size());
    for (auto& [root, members] : groups) {
        Vec3 mean{};
        std::string id = raw[members.front()].object_id;
        for (size_t m : members) {
            mean = mean + raw[m].position;
            id = std::min(id, raw[m].object_id);
        }
        mean = mean * (1.0 / double(members.size()));
        merged.entries.push_back({id, raw[members.front()].category, mean});
    }
    std::sort(merged.entries.begin(), merged.entries.end(),
              [](const GlobalMapEntry& a, const GlobalMapEntry& b) {
                  return a.object_id < b.object_id;
              });
    return merged;
}

std::pair<long long, long long> grid_cell_of(double cell_size, double x, double y) {
    auto index = [cell_size](double v) {
        long long i = (long long)std::floor(v / cell_size);
        // pin down the floor rule against division rounding
        while (double(i + 1) * cell_size <= v) ++i;
        while (double(i) * cell_size > v) --i;
        return i;
    };
    return {index(x), index(y)};
}

GridMap quantize_to_grid(const GlobalMap& map, double cell_size) {
    if (!(cell_size > 0.0))
        throw ValidationError("cell_size", "quantize_to_grid", "must be > 0");
    GridMap grid;
    grid.cell_size = cell_size;
    for (const GlobalMapEntry& e : map.entries) {
        auto cell = grid_cell_of(cell_size, e.position.x, e.position.y);
        grid.cells[cell].push_back(e.object_id);
    }
    return grid;
}

std::string describe_position(const Vec3& reference, const Vec3& target,
                              const Vec2& reference_front) {
    Vec2 front = reference_front.normalized();
    Vec2 left{-front.y, front.x};
    Vec3 d = target - reference;

    double leftward = d.xy().dot(left);
    double forward = d.xy().dot(front);
    double upward = d.z;

    struct Component {
        double magnitude;
        const char* phrase;
        bool of_form;  // connects with "of the reference point"
    };
    const double kDeadZone = 0.05;
    std::vector<Component> parts;
    if (std::fabs(leftward) >= kDeadZone)
        parts.push_back({std::fabs(leftward),
                         leftward > 0 ? "to the left" : "to the right", true});
    if (std::fabs(forward) >= kDeadZone)
        parts.push_back({std::fabs(forward), forward > 0 ? "in front" : "behind",
                         forward > 0});
    if (std::fabs(upward) >= kDeadZone)
        parts.push_back({std::fabs(upward), upward > 0 ? "above" : "below", false});

    if (parts.empty()) return "at the reference point";

    std::string out = "locate ";
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += " and ";
        double rounded = std::round(parts[i].magnitude * 10.0) / 10.0;
        out += fmt_f1(rounded);
        out += " meters ";
        out += parts[i].phrase;
    }
    out += parts.back().of_form ? " of the reference point" : " the reference point";
    return out;
}

LocalFrameMap build_local_map(const FrameRecord& frame, const Room& room,
                              const std::string& reference_object_id) {
    bool reference_seen =
        std::find(frame.visible_object_ids.begin(), frame.visible_object_ids.end(),
                  reference_object_id) != frame.visible_object_ids.end();
    if (!reference_seen)
        throw ReferenceNotVisible("reference object '" + reference_object_id +
                                  "' is not visible in frame " +
                                  std::to_string(frame.frame_index));

    auto find_object = [&](const std::string& id) -> const ObjectInstance& {
        for (const ObjectInstance& obj : room.objects)
            if (obj.object_id == id) return obj;
        throw ValidationError("object_id", id, "visible id not present in room");
    };

    const Vec3 origin = find_object(reference_object_id).position;
    LocalFrameMap map;
    map.frame_index = frame.frame_index;
    map.reference_object_id = reference_object_id;
    for (const std::string& id : frame.visible_object_ids) {
        const ObjectInstance& obj = find_object(id);
        map.entries.push_back({id, obj.category, obj.position - origin});
    }
    return map;
}

GlobalMap global_map_from_room(const Room& room) {
    GlobalMap map;
    map.entries.reserve(room.objects.size());
    for (const ObjectInstance& obj : room.objects)
        map.entries.push_back({obj.object_id, obj.category, obj.position});
    return map;
}

std::vector<std::pair<std::string, std::string>> build_description_map(
    const GlobalMap& map, const Vec2& reference_front) {
    if (map.entries.empty())
        throw InvalidQuery("cannot describe an empty global map");
    const Vec3 reference = map.entries.front().position;

    std::map<std::string, int> seen;
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(map.entries.size());
    for (const GlobalMapEntry& e : map.entries) {
        int n = ++seen[e.category];
        std::string key =
            n == 1 ? e.category : e.category + " " + std::to_string(n);
        out.push_back({key, describe_position(reference, e.position, reference_front)});
    }
    return out;
}

std::string global_map_to_json(const GlobalMap& map) {
    nlohmann::ordered_json doc;
    doc["entries"] = nlohmann::ordered_json::array();
    for (const GlobalMapEntry& e : map.entries) {
        nlohmann::ordered_json entry;
        entry["object_id"] = e.object_id;
        entry["category"] = e.category;
        entry["position"] = {e.position.x, e.position.y, e.position.z};
        doc["entries"].push_back(std::move(entry));
    }
    return doc.dump(2) + "\n";
}

GlobalMap global_map_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.what(), 1, int(e.byte));
    }
    GlobalMap map;
    for (const auto& e : doc.at("entries")) {
        const auto& pos = e.at("position");
        map.entries.push_back({e.at("object_id").get<std::string>(),
                               e.at("category").get<std::string>(),
                               {pos[0].get<double>(), pos[1].get<double>(),
                                pos[2].get<double>()}});
    }
    return map;
}

std::string grid_map_to_json(const GridMap& grid) {
    nlohmann::ordered_json doc;
    doc["cell_size"] = grid.cell_size;
    doc["cells"] = nlohmann::ordered_json::array();
    for (const auto& [cell, ids] : grid.cells) {
        nlohmann::ordered_json c;
        c["i"] = cell.first;
        c["j"] = cell.second;
        c["object_ids"] = ids;
        doc["cells"].push_back(std::move(c));
    }
    return doc.dump(2) + "\n";
}

std::string description_map_to_json(
    const std::vector<std::pair<std::string, std::string>>& descriptions) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::object();
    for (const auto& [key, text] : descriptions) doc[key] = text;
    return doc.dump(2) + "\n";
}

}  // namespace scanforge
