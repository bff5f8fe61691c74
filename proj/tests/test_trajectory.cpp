#include <cmath>

#include "doctest.h"
#include "scanforge/trajectory.hpp"
#include "scanforge_ref/kernels_serial.hpp"
#include "scanforge_ref/oracles.hpp"
#include "test_support.hpp"

using namespace scanforge;

namespace {

Room empty_room(double w, double h) {
    return Room{"r1", "bedroom", Polygon2({{0, 0}, {w, 0}, {w, h}, {0, h}}), 2.5, {}};
}

double yaw_step(double from, double to) {
    double d = wrap_deg(to - from);
    return d > 180.0 ? d - 360.0 : d;
}

}  // namespace

TEST_CASE("orbit_scan constants on a 6x4 room") {
    Room room = empty_room(6, 4);
    ScanTrajectory traj = orbit_scan(room, 42);
    REQUIRE(traj.frames.size() == 72);

    Vec2 center = room.floor_polygon.centroid();
    double radius = 4.0 / 3.0;  // shorter side over three
    double first_step = yaw_step(traj.frames[0].pose.yaw_deg,
                                 traj.frames[1].pose.yaw_deg);
    CHECK(std::fabs(std::fabs(first_step) - 5.0) < 1e-9);

    for (size_t i = 0; i < traj.frames.size(); ++i) {
        const FrameRecord& f = traj.frames[i];
        CHECK(f.frame_index == int(i));
        CHECK(f.phase == ScanPhase::orbit);
        CHECK(f.pose.position.z == 1.5);
        CHECK(f.pose.pitch_deg == 0.0);
        double dist = (f.pose.position.xy() - center).norm();
        CHECK(std::fabs(dist - radius) < 1e-9);
        if (i > 0) {
            double step = yaw_step(traj.frames[i - 1].pose.yaw_deg, f.pose.yaw_deg);
            CHECK(step == doctest::Approx(first_step).epsilon(1e-9));
        }
    }
}

TEST_CASE("orbit_scan is deterministic and rejects tiny rooms") {
    Room room = empty_room(5, 4);
    std::string once = frames_to_jsonl(orbit_scan(room, 7).frames);
    std::string twice = frames_to_jsonl(orbit_scan(room, 7).frames);
    CHECK(once == twice);
    CHECK(once != frames_to_jsonl(orbit_scan(room, 8).frames));

    Room tiny = empty_room(0.8, 5);
    CHECK_THROWS_AS(orbit_scan(tiny, 1), RoomTooSmall);
}

TEST_CASE("occupancy grid of an empty room is free inside") {
    Room room = empty_room(4, 4);
    OccupancyGrid grid = build_occupancy_grid(room, 0.1, 0.25);
    CHECK(grid.width == 40);
    CHECK(grid.height == 40);
    for (int j = 0; j < grid.height; ++j)
        for (int i = 0; i < grid.width; ++i) CHECK_FALSE(grid.is_blocked(i, j));
}

TEST_CASE("navigable objects never block") {
    Room room = empty_room(4, 4);
    room.objects.push_back({"rug_1", "rug", {2, 2, 0.01}, 0, {3.8, 3.8, 0.02}, true});
    OccupancyGrid grid = build_occupancy_grid(room, 0.1, 0.25);
    for (int j = 0; j < grid.height; ++j)
        for (int i = 0; i < grid.width; ++i) CHECK_FALSE(grid.is_blocked(i, j));
}

TEST_CASE("blocked cells match the per-cell footprint oracle") {
    Room room = empty_room(4, 4);
    room.objects.push_back({"table_1", "table", {2, 2, 0.35}, 30.0, {1, 1, 0.7}, false});
    OccupancyGrid grid = build_occupancy_grid(room, 0.1, 0.25);
    OccupancyGrid oracle = ref::build_occupancy_grid_serial(room, 0.1, 0.25);
    REQUIRE(grid.blocked.size() == oracle.blocked.size());
    CHECK(grid.blocked == oracle.blocked);

    bool any_blocked = false;
    for (uint8_t b : grid.blocked) any_blocked |= b != 0;
    CHECK(any_blocked);
}

TEST_CASE("parallel and serial occupancy kernels agree on random rooms") {
    for (uint64_t seed : {11ull, 22ull, 33ull, 44ull, 55ull}) {
        Room room = ref::make_random_room(seed, 12);
        OccupancyGrid par = build_occupancy_grid(room, 0.1, 0.25);
        OccupancyGrid ser = ref::build_occupancy_grid_serial(room, 0.1, 0.25);
        CHECK(par.blocked == ser.blocked);
    }
}

TEST_CASE("shortest_path on an empty room is near-straight") {
    Room room = empty_room(6, 4);
    OccupancyGrid grid = build_occupancy_grid(room, 0.1, 0.25);
    NavPath path = shortest_path(grid, {1.05, 2.05}, {3.05, 2.05});
    CHECK(std::fabs(path.length - 2.0) <= 0.1 + 1e-9);

    double waypoint_sum = 0.0;
    for (size_t i = 1; i < path.waypoints.size(); ++i)
        waypoint_sum += (path.waypoints[i] - path.waypoints[i - 1]).norm();
    CHECK(std::fabs(waypoint_sum - path.length) < 1e-9);
}

TEST_CASE("shortest_path routes through a door gap and matches the oracle exactly") {
    Room room = empty_room(6, 4);
    // wall across the room with a gap near the top
    room.objects.push_back({"wall_1", "divider", {3, 1.25, 1}, 0, {0.2, 2.5, 2}, false});
    OccupancyGrid grid = build_occupancy_grid(room, 0.1, 0.25);

    Vec2 start{1.0, 2.0};
    Vec2 goal{5.0, 2.0};
    NavPath path = shortest_path(grid, start, goal);

    // must detour above the wall (gap side)
    double max_y = 0.0;
    for (const Vec2& w : path.waypoints) max_y = std::max(max_y, w.y);
    CHECK(max_y > 2.5);

    auto s = grid.cell_of(start);
    auto g = grid.cell_of(goal);
    REQUIRE(s.has_value());
    REQUIRE(g.has_value());
    auto oracle = ref::dijkstra_length_ref(grid, *s, *g);
    REQUIRE(oracle.has_value());
    CHECK(path.length == *oracle);  // bit-exact by construction

    double waypoint_sum = 0.0;
    for (size_t i = 1; i < path.waypoints.size(); ++i) {
        waypoint_sum += (path.waypoints[i] - path.waypoints[i - 1]).norm();
        // consecutive waypoints are 4- or 8-adjacent free cell centers
        double dx = std::fabs(path.waypoints[i].x - path.waypoints[i - 1].x);
        double dy = std::fabs(path.waypoints[i].y - path.waypoints[i - 1].y);
        CHECK(dx <= grid.cell_size + 1e-9);
        CHECK(dy <= grid.cell_size + 1e-9);
        CHECK(dx + dy > 1e-9);
        auto cell = grid.cell_of(path.waypoints[i]);
        REQUIRE(cell.has_value());
        CHECK_FALSE(grid.is_blocked(cell->first, cell->second));
    }
    CHECK(std::fabs(waypoint_sum - path.length) < 1e-9);
}

TEST_CASE("shortest_path reports NoPath for sealed goals") {
    Room room = empty_room(6, 6);
    // box walls sealing the center
    room.objects.push_back({"w1", "divider", {3, 1.5, 1}, 0, {3.0, 0.2, 2}, false});
    room.objects.push_back({"w2", "divider", {3, 4.5, 1}, 0, {3.0, 0.2, 2}, false});
    room.objects.push_back({"w3", "divider", {1.5, 3, 1}, 0, {0.2, 3.0, 2}, false});
    room.objects.push_back({"w4", "divider", {4.5, 3, 1}, 0, {0.2, 3.0, 2}, false});
    OccupancyGrid grid = build_occupancy_grid(room, 0.1, 0.25);
    CHECK_THROWS_AS(shortest_path(grid, {0.5, 0.5}, {3.0, 3.0}), NoPath);
}

TEST_CASE("shortest_path snaps endpoints within half a meter") {
    Room room = empty_room(6, 4);
    room.objects.push_back({"crate_1", "crate", {1, 2, 0.5}, 0, {0.3, 0.3, 1}, false});
    OccupancyGrid grid = build_occupancy_grid(room, 0.1, 0.25);
    // start sits on the crate; snapping must find a nearby free cell
    NavPath path = shortest_path(grid, {1.0, 2.0}, {5.0, 2.0});
    CHECK(path.length > 0.0);
    auto start_cell = grid.cell_of(path.waypoints.front());
    REQUIRE(start_cell.has_value());
    CHECK_FALSE(grid.is_blocked(start_cell->first, start_cell->second));
}

TEST_CASE("navigation_scan emits 30+12+30 frames with 12 degree steps") {
    Scene scene = parse_scene(test::read_fixture("nav_room.json"));
    const Room& room = scene.rooms.front();
    NavScanResult result = navigation_scan_result(room, 9, 10);
    REQUIRE(result.trajectories.size() == 2);
    CHECK(result.path_lengths[0] >= result.path_lengths[1]);

    for (const ScanTrajectory& traj : result.trajectories) {
        REQUIRE(traj.frames.size() == 72);
        int rot_start = 0, traverse = 0, rot_end = 0;
        for (size_t i = 0; i < traj.frames.size(); ++i) {
            const FrameRecord& f = traj.frames[i];
            CHECK(f.frame_index == int(i));
            CHECK(f.pose.position.z == 1.5);
            switch (f.phase) {
                case ScanPhase::rot_start: ++rot_start; break;
                case ScanPhase::traverse: ++traverse; break;
                case ScanPhase::rot_end: ++rot_end; break;
                default: FAIL("unexpected phase");
            }
        }
        CHECK(rot_start == 30);
        CHECK(traverse == 12);
        CHECK(rot_end == 30);

        for (int i = 1; i < 30; ++i) {
            double step = yaw_step(traj.frames[size_t(i - 1)].pose.yaw_deg,
                                   traj.frames[size_t(i)].pose.yaw_deg);
            CHECK(step == doctest::Approx(12.0).epsilon(1e-9));
        }
        for (int i = 43; i < 72; ++i) {
            double step = yaw_step(traj.frames[size_t(i - 1)].pose.yaw_deg,
                                   traj.frames[size_t(i)].pose.yaw_deg);
            CHECK(step == doctest::Approx(12.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("navigation_scan picks the two longest sampled pairs") {
    Scene scene = parse_scene(test::read_fixture("nav_room.json"));
    const Room& room = scene.rooms.front();
    const uint64_t seed = 17;
    NavScanResult result = navigation_scan_result(room, seed, 10);

    OccupancyGrid grid = build_occupancy_grid(room, 0.1, 0.25);
    auto object_xy = [&](const std::string& id) {
        for (const ObjectInstance& obj : room.objects)
            if (obj.object_id == id) return obj.position.xy();
        FAIL("unknown id");
        return Vec2{};
    };

    std::vector<double> oracle_lengths;
    for (const auto& pr : sample_candidate_pairs(room, seed, 10)) {
        auto a = ref::nearest_free_cell_ref(grid, object_xy(pr.first));
        auto b = ref::nearest_free_cell_ref(grid, object_xy(pr.second));
        if (!a || !b) continue;
        auto len = ref::dijkstra_length_ref(grid, *a, *b);
        if (len) oracle_lengths.push_back(*len);
    }
    REQUIRE(oracle_lengths.size() >= 2);
    std::sort(oracle_lengths.rbegin(), oracle_lengths.rend());
    CHECK(result.path_lengths[0] == oracle_lengths[0]);
    CHECK(result.path_lengths[1] == oracle_lengths[1]);
}

TEST_CASE("navigation traverse frames stay on free cells") {
    Scene scene = parse_scene(test::read_fixture("nav_room.json"));
    const Room& room = scene.rooms.front();
    OccupancyGrid grid = build_occupancy_grid(room, 0.1, 0.25);
    for (const ScanTrajectory& traj : navigation_scan(room, 23, 10)) {
        for (const FrameRecord& f : traj.frames) {
            if (f.phase != ScanPhase::traverse) continue;
            auto cell = grid.cell_of(f.pose.position.xy());
            REQUIRE(cell.has_value());
            CHECK_FALSE(grid.is_blocked(cell->first, cell->second));
        }
    }
}

TEST_CASE("navigation_scan determinism and failure modes") {
    Scene scene = parse_scene(test::read_fixture("nav_room.json"));
    const Room& room = scene.rooms.front();

    std::string once, twice;
    for (const ScanTrajectory& t : navigation_scan(room, 5, 10))
        once += frames_to_jsonl(t.frames);
    for (const ScanTrajectory& t : navigation_scan(room, 5, 10))
        twice += frames_to_jsonl(t.frames);
    CHECK(once == twice);

    Room lonely = empty_room(5, 5);
    lonely.objects.push_back({"only_1", "crate", {2, 2, 0.5}, 0, {1, 1, 1}, false});
    CHECK_THROWS_AS(navigation_scan(lonely, 1, 10), InsufficientPaths);
    CHECK_THROWS_AS(navigation_scan(room, 1, 1), ValidationError);
}

TEST_CASE("visible_objects basics") {
    Room room = empty_room(10, 10);
    room.objects.push_back({"ahead_1", "crate", {7, 5, 0.5}, 0, {1, 1, 1}, false});
    CameraPose pose{{5, 5, 1.5}, 0.0, 0.0};
    auto seen = visible_objects(pose, room, 90.0, 20.0);
    REQUIRE(seen.size() == 1);
    CHECK(seen[0] == "ahead_1");

    CameraPose reversed{{5, 5, 1.5}, 180.0, 0.0};
    CHECK(visible_objects(reversed, room, 90.0, 20.0).empty());
}

TEST_CASE("a full-height divider occludes and matches the reference kernel") {
    Room room = empty_room(10, 10);
    room.objects.push_back({"target_1", "crate", {8, 5, 1.0}, 0, {0.6, 0.6, 2.0}, false});
    room.objects.push_back(
        {"divider_1", "divider", {6.5, 5, 1.4}, 0, {0.3, 6.0, 2.8}, false});
    CameraPose pose{{5, 5, 1.5}, 0.0, 0.0};

    auto seen = visible_objects(pose, room, 90.0, 20.0);
    CHECK(std::find(seen.begin(), seen.end(), "target_1") == seen.end());
    CHECK(std::find(seen.begin(), seen.end(), "divider_1") != seen.end());

    auto oracle = ref::visible_objects_serial(pose, room, 90.0, 20.0);
    CHECK(seen == oracle);
}

TEST_CASE("visibility is monotone in field of view and range") {
    Rng rng(808);
    for (uint64_t seed : {1ull, 2ull, 3ull}) {
        Room room = ref::make_random_room(seed, 10);
        for (int trial = 0; trial < 10; ++trial) {
            auto [lo, hi] = room.floor_polygon.bounding_box();
            CameraPose pose{{rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y), 1.5},
                            rng.uniform(0.0, 360.0), 0.0};
            auto narrow = visible_objects(pose, room, 60.0, 6.0);
            auto wide = visible_objects(pose, room, 120.0, 6.0);
            auto far = visible_objects(pose, room, 60.0, 20.0);
            for (const std::string& id : narrow) {
                CHECK(std::find(wide.begin(), wide.end(), id) != wide.end());
                CHECK(std::find(far.begin(), far.end(), id) != far.end());
            }
        }
    }
}

TEST_CASE("parallel visibility annotation matches the serial reference") {
    for (uint64_t seed : {4ull, 9ull, 16ull}) {
        Room room = ref::make_random_room(seed, 12);
        ScanTrajectory traj = orbit_scan(room, seed);
        std::vector<FrameRecord> serial_frames = traj.frames;
        ref::annotate_visibility_serial(serial_frames, room, 90.0, 20.0);
        for (size_t i = 0; i < traj.frames.size(); ++i)
            CHECK(traj.frames[i].visible_object_ids ==
                  serial_frames[i].visible_object_ids);
    }
}

TEST_CASE("frame records serialize with six decimals and round-trip") {
    FrameRecord frame{"room/orbit", 3, ScanPhase::traverse,
                      {{1.23456789, -2.5, 1.5}, 271.125, 0.0},
                      {"a_1", "b_2"}};
    std::string line = frame_to_json_line(frame);
    CHECK(line.find("1.234568") != std::string::npos);
    CHECK(line.find("-2.500000") != std::string::npos);
    CHECK(line.find("\"phase\":\"traverse\"") != std::string::npos);

    auto parsed = parse_frames_jsonl(line + "\n");
    REQUIRE(parsed.size() == 1);
    CHECK(parsed[0].scan_id == "room/orbit");
    CHECK(parsed[0].frame_index == 3);
    CHECK(parsed[0].visible_object_ids == std::vector<std::string>{"a_1", "b_2"});
}
