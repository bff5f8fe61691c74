#pragma once

#include "scanforge/trajectory.hpp"

// Serial reference implementations of the parallel kernels. Independent code
// paths kept for testing and benchmarking; not linked into the CLI.
namespace scanforge::ref {

OccupancyGrid build_occupancy_grid_serial(const Room& room, double cell_size,
                                          double agent_radius);

std::vector<std::string> visible_objects_serial(const CameraPose& pose,
                                                const Room& room, double hfov_deg,
                                                double max_range);

void annotate_visibility_serial(std::vector<FrameRecord>& frames, const Room& room,
                                double hfov_deg, double max_range);

}  // namespace scanforge::ref
