#include "doctest.h"
#include "scanforge/random.hpp"
#include "scanforge/scene.hpp"
#include "test_support.hpp"

using namespace scanforge;

namespace {

const char* kMinimalScene = R"({
  "scene_id": "mini",
  "rooms": [
    {
      "room_id": "r1",
      "room_type": "bedroom",
      "floor_polygon": [[0,0],[4,0],[4,4],[0,4]],
      "ceiling_height": 2.5,
      "objects": [
        {"object_id": "bed_1", "category": "bed", "position": [2,2,0.3],
         "yaw_deg": 0, "size": [2.0,1.6,0.6], "navigable": false}
      ]
    }
  ]
})";

bool objects_equal(const ObjectInstance& a, const ObjectInstance& b) {
    return a.object_id == b.object_id && a.category == b.category &&
           test::vec_close(a.position, b.position, 1e-12) &&
           a.yaw_deg == b.yaw_deg && test::vec_close(a.size, b.size, 1e-12) &&
           a.navigable == b.navigable;
}

bool scenes_equal(const Scene& a, const Scene& b) {
    if (a.scene_id != b.scene_id || a.rooms.size() != b.rooms.size()) return false;
    for (size_t r = 0; r < a.rooms.size(); ++r) {
        const Room& ra = a.rooms[r];
        const Room& rb = b.rooms[r];
        if (ra.room_id != rb.room_id || ra.room_type != rb.room_type ||
            ra.ceiling_height != rb.ceiling_height ||
            ra.objects.size() != rb.objects.size())
            return false;
        const auto& va = ra.floor_polygon.vertices();
        const auto& vb = rb.floor_polygon.vertices();
        if (va.size() != vb.size()) return false;
        for (size_t i = 0; i < va.size(); ++i)
            if (va[i].x != vb[i].x || va[i].y != vb[i].y) return false;
        for (size_t i = 0; i < ra.objects.size(); ++i)
            if (!objects_equal(ra.objects[i], rb.objects[i])) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("parse_scene accepts a minimal valid file") {
    Scene scene = parse_scene(kMinimalScene);
    CHECK(scene.scene_id == "mini");
    REQUIRE(scene.rooms.size() == 1);
    CHECK(scene.rooms[0].objects.size() == 1);
    CHECK(scene.rooms[0].objects[0].category == "bed");
}

TEST_CASE("parse_scene reports the missing field and entity") {
    std::string text = R"({
      "scene_id": "mini",
      "rooms": [{
        "room_id": "r1", "room_type": "bedroom",
        "floor_polygon": [[0,0],[4,0],[4,4],[0,4]],
        "ceiling_height": 2.5,
        "objects": [{"object_id": "bed_1", "category": "bed",
                     "position": [2,2,0.3], "yaw_deg": 0}]
      }]
    })";
    try {
        parse_scene(text);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.field == "size");
        CHECK(e.entity == "bed_1");
    }
}

TEST_CASE("parse_scene rejects malformed syntax with a position") {
    try {
        parse_scene("{\n  \"scene_id\": \"x\",\n  rooms: []\n}");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line >= 2);
    }
}

TEST_CASE("strict mode rejects unknown fields, lenient ignores them") {
    std::string text = R"({
      "scene_id": "mini", "mystery": 1,
      "rooms": [{
        "room_id": "r1", "room_type": "bedroom",
        "floor_polygon": [[0,0],[4,0],[4,4],[0,4]],
        "ceiling_height": 2.5, "objects": []
      }]
    })";
    CHECK_THROWS_AS(parse_scene(text), ValidationError);
    CHECK(parse_scene(text, true).scene_id == "mini");
}

TEST_CASE("parse_scene enforces room and object invariants") {
    SUBCASE("ceiling must be positive") {
        std::string text = R"({"scene_id":"s","rooms":[{"room_id":"r","room_type":"bedroom",
          "floor_polygon":[[0,0],[4,0],[4,4],[0,4]],"ceiling_height":0,"objects":[]}]})";
        CHECK_THROWS_AS(parse_scene(text), ValidationError);
    }
    SUBCASE("centroid outside the floor polygon") {
        std::string text = R"({"scene_id":"s","rooms":[{"room_id":"r","room_type":"bedroom",
          "floor_polygon":[[0,0],[4,0],[4,4],[0,4]],"ceiling_height":2.5,
          "objects":[{"object_id":"o1","category":"bed","position":[9,9,0.3],
                      "yaw_deg":0,"size":[1,1,1],"navigable":false}]}]})";
        CHECK_THROWS_AS(parse_scene(text), ValidationError);
    }
    SUBCASE("duplicate object ids") {
        std::string text = R"({"scene_id":"s","rooms":[{"room_id":"r","room_type":"bedroom",
          "floor_polygon":[[0,0],[4,0],[4,4],[0,4]],"ceiling_height":2.5,
          "objects":[
            {"object_id":"o1","category":"bed","position":[1,1,0.3],"yaw_deg":0,"size":[1,1,1],"navigable":false},
            {"object_id":"o1","category":"desk","position":[3,3,0.3],"yaw_deg":0,"size":[1,1,1],"navigable":false}
          ]}]})";
        CHECK_THROWS_AS(parse_scene(text), ValidationError);
    }
    SUBCASE("clockwise floor polygon") {
        std::string text = R"({"scene_id":"s","rooms":[{"room_id":"r","room_type":"bedroom",
          "floor_polygon":[[0,0],[0,4],[4,4],[4,0]],"ceiling_height":2.5,"objects":[]}]})";
        CHECK_THROWS_AS(parse_scene(text), ValidationError);
    }
}

TEST_CASE("bundled two-room fixture parses to 2 rooms and 7 objects") {
    Scene scene = parse_scene(test::read_fixture("two_room_scene.json"));
    REQUIRE(scene.rooms.size() == 2);
    size_t total = 0;
    for (const Room& room : scene.rooms) total += room.objects.size();
    CHECK(total == 7);
}

TEST_CASE("serialize then parse round-trips structurally") {
    Scene original = parse_scene(test::read_fixture("two_room_scene.json"));
    Scene reparsed = parse_scene(serialize_scene(original));
    CHECK(scenes_equal(original, reparsed));
}

TEST_CASE("disassemble splits per room") {
    Scene single = parse_scene(kMinimalScene);
    auto parts = disassemble(single);
    REQUIRE(parts.size() == 1);
    CHECK(parts[0].scene_id == "mini/r1");
    CHECK(parts[0].rooms.size() == 1);

    Scene scene = parse_scene(test::read_fixture("two_room_scene.json"));
    auto rooms = disassemble(scene);
    REQUIRE(rooms.size() == 2);
    CHECK(rooms[0].scene_id == "apartment01/bedroom_a");
    CHECK(rooms[1].scene_id == "apartment01/living_a");
    CHECK(rooms[0].rooms[0].objects.size() == 4);  // per-room partition by hand
    CHECK(rooms[1].rooms[0].objects.size() == 3);

    size_t total = 0;
    for (const Scene& s : rooms) total += s.rooms[0].objects.size();
    CHECK(total == 7);
}

TEST_CASE("mangled scene files raise domain errors only") {
    std::string fixture = test::read_fixture("two_room_scene.json");
    Rng rng(1234);
    for (int trial = 0; trial < 200; ++trial) {
        std::string mangled = fixture;
        if (trial % 2 == 0) {
            mangled.resize(size_t(rng.next_below(fixture.size())));
        } else {
            size_t pos = size_t(rng.next_below(fixture.size()));
            mangled[pos] = char('!' + rng.next_below(90));
        }
        try {
            parse_scene(mangled);
        } catch (const Error&) {
            // ParseError or ValidationError are the only acceptable outcomes
        }
    }
}

TEST_CASE("filter_rooms applies whitelist and object minimum") {
    Scene scene = parse_scene(test::read_fixture("filter_fixture.json"));
    auto rooms = disassemble(scene);
    auto kept = filter_rooms(rooms, default_room_type_whitelist(), 3);
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].rooms[0].room_type == "bedroom");
    CHECK(kept[1].rooms[0].room_type == "living room");

    // full whitelist and zero minimum is a no-op
    std::set<std::string> all_types;
    for (const Scene& s : rooms) all_types.insert(s.rooms[0].room_type);
    auto unfiltered = filter_rooms(rooms, all_types, 0);
    CHECK(unfiltered.size() == rooms.size());

    // explicit whitelisting admits the synthesis-only types
    Scene office{"s", {Room{"o1", "office",
                            Polygon2({{0, 0}, {4, 0}, {4, 4}, {0, 4}}), 2.5, {}}}};
    auto office_kept = filter_rooms({office}, {"office"}, 0);
    CHECK(office_kept.size() == 1);
    CHECK(filter_rooms({office}, default_room_type_whitelist(), 0).empty());
}
