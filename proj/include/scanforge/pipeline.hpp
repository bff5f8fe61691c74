#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "scanforge/qa.hpp"
#include "scanforge/scene.hpp"
#include "scanforge/trajectory.hpp"

namespace scanforge {

struct PipelineConfig {
    uint64_t seed = 0;
    std::vector<std::string> whitelist{"bedroom",     "kitchen",
                                       "bathroom",    "living room",
                                       "dining room", "storage room"};
    int min_objects = 3;
    double cell_size = 0.1;
    double agent_radius = 0.25;
    double hfov = 90.0;
    double max_range = 20.0;
    double contact_epsilon = 0.05;
    int per_type = 2;
    int candidate_pairs = 10;
    bool lenient = false;

    std::set<std::string> whitelist_set() const {
        return {whitelist.begin(), whitelist.end()};
    }
    ScanParams scan_params() const {
        return {hfov, max_range, cell_size, agent_radius, 1.5};
    }
    void validate() const;
};

// Overlays fields found in the config file onto `base`; unknown keys are
// rejected.
PipelineConfig load_config(const std::string& json_text, PipelineConfig base = {});

std::string sanitize_for_path(const std::string& id);

struct PipelineSummary {
    std::vector<std::string> room_ids;  // kept single-room scene ids, in order
    size_t files_written = 0;
};

// Disassemble, filter, then per room: room.json, orbit.jsonl, nav.jsonl,
// qa.jsonl and the three cognition exports. Parallel across rooms; output
// bytes do not depend on the thread count.
PipelineSummary run_pipeline(const Scene& scene, const std::filesystem::path& out_dir,
                             const PipelineConfig& config, int threads = 0);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace scanforge
