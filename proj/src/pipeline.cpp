#include "scanforge/pipeline.hpp"

#include <atomic>
#include <fstream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "json.hpp"
#include "scanforge/cognition.hpp"
#include "scanforge/random.hpp"

namespace scanforge {

void PipelineConfig::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0))
            throw ValidationError(name, "config", "must be > 0");
    };
    positive(cell_size, "cell_size");
    positive(agent_radius, "agent_radius");
    positive(hfov, "hfov");
    positive(max_range, "max_range");
    positive(contact_epsilon, "contact_epsilon");
    if (per_type < 1) throw ValidationError("per_type", "config", "must be >= 1");
    if (candidate_pairs < 2)
        throw ValidationError("candidate_pairs", "config", "must be >= 2");
    if (min_objects < 0)
        throw ValidationError("min_objects", "config", "must be >= 0");
}

PipelineConfig load_config(const std::string& json_text, PipelineConfig base) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.what(), 1, int(e.byte));
    }
    if (!doc.is_object())
        throw ValidationError("<root>", "config", "expected a top-level object");

    static const std::set<std::string> kKnown = {
        "seed",      "whitelist",   "min_objects",     "cell_size",
        "agent_radius", "hfov",     "max_range",       "contact_epsilon",
        "per_type",  "candidate_pairs", "lenient"};
    for (auto it = doc.begin(); it != doc.end(); ++it)
        if (kKnown.find(it.key()) == kKnown.end())
            throw ValidationError(it.key(), "config", "unknown field");

    if (doc.contains("seed")) base.seed = doc["seed"].get<uint64_t>();
    if (doc.contains("whitelist"))
        base.whitelist = doc["whitelist"].get<std::vector<std::string>>();
    if (doc.contains("min_objects")) base.min_objects = doc["min_objects"].get<int>();
    if (doc.contains("cell_size")) base.cell_size = doc["cell_size"].get<double>();
    if (doc.contains("agent_radius"))
        base.agent_radius = doc["agent_radius"].get<double>();
    if (doc.contains("hfov")) base.hfov = doc["hfov"].get<double>();
    if (doc.contains("max_range")) base.max_range = doc["max_range"].get<double>();
    if (doc.contains("contact_epsilon"))
        base.contact_epsilon = doc["contact_epsilon"].get<double>();
    if (doc.contains("per_type")) base.per_type = doc["per_type"].get<int>();
    if (doc.contains("candidate_pairs"))
        base.candidate_pairs = doc["candidate_pairs"].get<int>();
    if (doc.contains("lenient")) base.lenient = doc["lenient"].get<bool>();
    base.validate();
    return base;
}

std::string sanitize_for_path(const std::string& id) {
    std::string out;
    out.reserve(id.size());
    for (char c : id) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                  (c >= '0' && c <= '9') || c == '.' || c == '-' || c == '_';
        out += ok ? c : '_';
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << content;
    if (!out.good()) throw IoError("failed writing " + path.string());
}

namespace {

size_t process_room(const Scene& single, const std::filesystem::path& dir,
                    const PipelineConfig& cfg) {
    const Room& room = single.rooms.front();
    uint64_t room_seed = child_seed(cfg.seed, single.scene_id);
    ScanParams params = cfg.scan_params();
    size_t files = 0;

    write_file(dir / "room.json", serialize_scene(single));
    ++files;

    try {
        ScanTrajectory orbit = orbit_scan(room, child_seed(room_seed, "orbit"), params);
        write_file(dir / "orbit.jsonl", frames_to_jsonl(orbit.frames));
        ++files;
    } catch (const RoomTooSmall&) {
        // room cannot host an orbit; skip the artifact
    }

    try {
        auto nav = navigation_scan(room, child_seed(room_seed, "nav"),
                                   cfg.candidate_pairs, params);
        std::string out;
        for (const ScanTrajectory& traj : nav) out += frames_to_jsonl(traj.frames);
        write_file(dir / "nav.jsonl", out);
        ++files;
    } catch (const InsufficientPaths&) {
    }

    {
        auto items = generate_qa_for_room(room, child_seed(room_seed, "qa"),
                                          cfg.per_type, single.scene_id,
                                          {cfg.contact_epsilon});
        std::ostringstream out;
        emit_dataset(items, out);
        write_file(dir / "qa.jsonl", out.str());
        ++files;
    }

    {
        GlobalMap map = merge_duplicates(global_map_from_room(room).entries, 0.5);
        write_file(dir / "map3d.json", global_map_to_json(map));
        write_file(dir / "grid2d.json", grid_map_to_json(quantize_to_grid(map, 1.0)));
        write_file(dir / "description.json",
                   description_map_to_json(build_description_map(map, {1.0, 0.0})));
        files += 3;
    }
    return files;
}

}  // namespace

PipelineSummary run_pipeline(const Scene& scene, const std::filesystem::path& out_dir,
                             const PipelineConfig& config, int threads) {
    config.validate();
    auto kept = filter_rooms(disassemble(scene), config.whitelist_set(),
                             config.min_objects);

    std::filesystem::create_directories(out_dir / "rooms");
    std::vector<std::filesystem::path> dirs;
    dirs.reserve(kept.size());
    for (const Scene& single : kept) {
        dirs.push_back(out_dir / "rooms" / sanitize_for_path(single.scene_id));
        std::filesystem::create_directories(dirs.back());
    }

    int worker_count = threads;
#ifdef _OPENMP
    if (worker_count <= 0) worker_count = omp_get_max_threads();
#else
    worker_count = 1;
#endif

    // exceptions must not escape the parallel region
    std::atomic<size_t> files{0};
    std::vector<std::string> errors(kept.size());
    std::atomic<bool> failed{false};
    const int n = int(kept.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(worker_count)
#endif
    for (int i = 0; i < n; ++i) {
        try {
            files += process_room(kept[size_t(i)], dirs[size_t(i)], config);
        } catch (const std::exception& e) {
            errors[size_t(i)] = e.what();
            failed = true;
        }
    }
    if (failed) {
        for (const std::string& e : errors)
            if (!e.empty()) throw Error(e);
    }

    PipelineSummary summary;
    for (const Scene& single : kept) summary.room_ids.push_back(single.scene_id);
    summary.files_written = files.load();
    return summary;
}

}  // namespace scanforge
