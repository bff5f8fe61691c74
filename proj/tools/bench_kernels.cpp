// Times the OpenMP kernels against their serial reference implementations on
// a synthetic room and verifies that both produce identical output.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "scanforge/random.hpp"
#include "scanforge/trajectory.hpp"
#include "scanforge_ref/kernels_serial.hpp"

using namespace scanforge;

namespace {

double ms_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start)
        .count();
}

Room make_bench_room(int objects) {
    Room room{"bench_room", "living room",
              Polygon2({{0, 0}, {16, 0}, {16, 12}, {0, 12}}), 3.0, {}};
    Rng rng(7);
    for (int i = 0; i < objects; ++i) {
        ObjectInstance obj;
        obj.category = "box";
        obj.object_id = "box_" + std::to_string(i);
        obj.size = {rng.uniform(0.3, 1.2), rng.uniform(0.3, 1.2), rng.uniform(0.3, 2.0)};
        obj.position = {rng.uniform(0.8, 15.2), rng.uniform(0.8, 11.2),
                        obj.size.z * 0.5};
        obj.yaw_deg = rng.uniform(0.0, 360.0);
        room.objects.push_back(std::move(obj));
    }
    return room;
}

}  // namespace

int main(int argc, char** argv) {
    int objects = 80;
    double cell = 0.025;
    int frames = 288;
    int repeat = 3;

    CLI::App app{"serial vs OpenMP kernel benchmark"};
    app.add_option("--objects", objects, "obstacle count");
    app.add_option("--cell", cell, "grid cell size, m");
    app.add_option("--frames", frames, "camera frames for visibility");
    app.add_option("--repeat", repeat, "timing repetitions");
    CLI11_PARSE(app, argc, argv);

    Room room = make_bench_room(objects);

    std::printf("%-24s %10s %10s %8s %s\n", "kernel", "serial ms", "openmp ms",
                "speedup", "match");

    // occupancy grid rasterization
    {
        OccupancyGrid serial_grid;
        OccupancyGrid parallel_grid;
        double t_serial = 0.0;
        double t_parallel = 0.0;
        for (int r = 0; r < repeat; ++r) {
            auto t0 = std::chrono::steady_clock::now();
            serial_grid = ref::build_occupancy_grid_serial(room, cell, 0.25);
            t_serial += ms_since(t0);
            auto t1 = std::chrono::steady_clock::now();
            parallel_grid = build_occupancy_grid(room, cell, 0.25);
            t_parallel += ms_since(t1);
        }
        bool match = serial_grid.blocked == parallel_grid.blocked;
        std::printf("%-24s %10.2f %10.2f %8.2fx %s\n", "occupancy_grid",
                    t_serial / repeat, t_parallel / repeat,
                    t_parallel > 0 ? t_serial / t_parallel : 0.0,
                    match ? "yes" : "NO");
    }

    // per-frame visibility annotation
    {
        std::vector<FrameRecord> camera_frames;
        Rng rng(11);
        for (int i = 0; i < frames; ++i) {
            CameraPose pose{{rng.uniform(1.0, 15.0), rng.uniform(1.0, 11.0), 1.5},
                            rng.uniform(0.0, 360.0), 0.0};
            camera_frames.push_back({"bench", i, ScanPhase::orbit, pose, {}});
        }
        std::vector<FrameRecord> serial_frames = camera_frames;
        std::vector<FrameRecord> parallel_frames = camera_frames;
        double t_serial = 0.0;
        double t_parallel = 0.0;
        for (int r = 0; r < repeat; ++r) {
            auto t0 = std::chrono::steady_clock::now();
            ref::annotate_visibility_serial(serial_frames, room, 90.0, 20.0);
            t_serial += ms_since(t0);
            auto t1 = std::chrono::steady_clock::now();
            annotate_visibility(parallel_frames, room, 90.0, 20.0);
            t_parallel += ms_since(t1);
        }
        bool match = true;
        for (size_t i = 0; i < serial_frames.size(); ++i)
            if (serial_frames[i].visible_object_ids !=
                parallel_frames[i].visible_object_ids)
                match = false;
        std::printf("%-24s %10.2f %10.2f %8.2fx %s\n", "frame_visibility",
                    t_serial / repeat, t_parallel / repeat,
                    t_parallel > 0 ? t_serial / t_parallel : 0.0,
                    match ? "yes" : "NO");
    }
    return 0;
}
