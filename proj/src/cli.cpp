#include "scanforge/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "scanforge/cognition.hpp"
#include "scanforge/evaluation.hpp"
#include "scanforge/pipeline.hpp"
#include "scanforge/prompts.hpp"

namespace scanforge {

namespace {

Scene load_single_room_scene(const std::string& path, bool lenient) {
    Scene scene = parse_scene(read_file(path), lenient);
    if (scene.rooms.size() != 1)
        throw ValidationError("rooms", scene.scene_id,
                              "expected a single-room scene file");
    return scene;
}

Vec2 parse_front(const std::string& text) {
    std::istringstream in(text);
    double x = 0.0;
    double y = 0.0;
    char comma = 0;
    if (!(in >> x >> comma >> y) || comma != ',')
        throw ValidationError("front", text, "expected \"x,y\"");
    return {x, y};
}

int env_threads() {
    const char* env = std::getenv("SCANFORGE_THREADS");
    if (!env) return 0;
    int v = std::atoi(env);
    if (v < 1) return 0;
    return std::min(v, 256);
}

std::string find_config_path(const std::vector<std::string>& args) {
    for (size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
    }
    return "";
}

}  // namespace

int dispatch(const std::vector<std::string>& args) {
    // flags > config file > defaults
    PipelineConfig cfg;
    try {
        std::string config_path = find_config_path(args);
        if (!config_path.empty()) cfg = load_config(read_file(config_path), cfg);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    CLI::App app{"Deterministic indoor-scene scanning, spatial QA generation and "
                 "evaluation toolkit"};
    app.name("scanforge");
    app.require_subcommand(1);

    std::string config_path_opt;
    app.add_option("--config", config_path_opt, "config file (same notation as scenes)")
        ->expected(1);
    // already consumed by the prescan above; registered per subcommand so the
    // flag is accepted in either position
    auto accept_config = [&config_path_opt](CLI::App* sub) {
        sub->add_option("--config", config_path_opt, "config file")->expected(1);
    };

    // disassemble
    auto* cmd_dis = app.add_subcommand("disassemble",
                                       "split a multi-room scene into room files");
    std::string dis_scene, dis_out_dir;
    bool lenient = cfg.lenient;
    cmd_dis->add_option("--scene", dis_scene, "scene file")->required();
    cmd_dis->add_option("--out-dir", dis_out_dir, "output directory")->required();
    cmd_dis->add_flag("--lenient", lenient, "ignore unknown fields");

    // scan
    auto* cmd_scan = app.add_subcommand("scan", "simulate an orbit or navigation scan");
    std::string scan_room, scan_mode, scan_out;
    uint64_t scan_seed = cfg.seed;
    double opt_cell = cfg.cell_size;
    double opt_radius = cfg.agent_radius;
    double opt_hfov = cfg.hfov;
    double opt_range = cfg.max_range;
    int opt_pairs = cfg.candidate_pairs;
    cmd_scan->add_option("--room", scan_room, "single-room scene file")->required();
    cmd_scan->add_option("--mode", scan_mode, "orbit|nav")
        ->required()
        ->check(CLI::IsMember({"orbit", "nav"}));
    cmd_scan->add_option("--seed", scan_seed, "random seed");
    cmd_scan->add_option("--out", scan_out, "trajectory output file")->required();
    cmd_scan->add_option("--cell-size", opt_cell, "occupancy grid cell size, m");
    cmd_scan->add_option("--agent-radius", opt_radius, "agent radius, m");
    cmd_scan->add_option("--hfov", opt_hfov, "horizontal field of view, deg");
    cmd_scan->add_option("--max-range", opt_range, "visibility range, m");
    cmd_scan->add_option("--candidate-pairs", opt_pairs, "sampled object pairs");
    cmd_scan->add_flag("--lenient", lenient, "ignore unknown fields");

    // qa
    auto* cmd_qa = app.add_subcommand("qa", "generate question-answer pairs");
    std::string qa_room, qa_out;
    uint64_t qa_seed = cfg.seed;
    int qa_per_type = cfg.per_type;
    double qa_epsilon = cfg.contact_epsilon;
    cmd_qa->add_option("--room", qa_room, "single-room scene file")->required();
    cmd_qa->add_option("--seed", qa_seed, "random seed");
    cmd_qa->add_option("--per-type", qa_per_type, "questions per category");
    cmd_qa->add_option("--contact-epsilon", qa_epsilon, "contact threshold, m");
    cmd_qa->add_option("--out", qa_out, "QA output file")->required();
    cmd_qa->add_flag("--lenient", lenient, "ignore unknown fields");

    // cognition
    auto* cmd_cog = app.add_subcommand("cognition",
                                       "export a scene-cognition representation");
    std::string cog_room, cog_map, cog_repr, cog_out, cog_front = "1,0";
    double cog_cell = 1.0;
    double cog_merge = 0.5;
    cmd_cog->add_option("--room", cog_room, "single-room scene file");
    cmd_cog->add_option("--map", cog_map, "global map file");
    cmd_cog->add_option("--repr", cog_repr, "map3d|grid2d|description")
        ->required()
        ->check(CLI::IsMember({"map3d", "grid2d", "description"}));
    cmd_cog->add_option("--cell-size", cog_cell, "grid cell size, m");
    cmd_cog->add_option("--front", cog_front, "reference front \"x,y\"");
    cmd_cog->add_option("--merge-threshold", cog_merge, "duplicate merge distance, m");
    cmd_cog->add_option("--out", cog_out, "output file")->required();
    cmd_cog->add_flag("--lenient", lenient, "ignore unknown fields");

    // prompt
    auto* cmd_prompt = app.add_subcommand("prompt", "assemble a reasoning prompt");
    std::string prompt_question, prompt_scene_file, prompt_out;
    cmd_prompt->add_option("--question", prompt_question, "question text")->required();
    cmd_prompt->add_option("--scene-file", prompt_scene_file,
                           "rendered scene representation file")
        ->required();
    cmd_prompt->add_option("--out", prompt_out, "output file (stdout when omitted)");

    // eval
    auto* cmd_eval = app.add_subcommand("eval", "score predictions against gold QA");
    std::string eval_pred, eval_gold, eval_out;
    cmd_eval->add_option("--pred", eval_pred, "prediction file")->required();
    cmd_eval->add_option("--gold", eval_gold, "gold QA file")->required();
    cmd_eval->add_option("--out", eval_out, "report file (stdout when omitted)");

    // pipeline
    auto* cmd_pipe = app.add_subcommand("pipeline", "run the full pipeline");
    std::string pipe_scene, pipe_out_dir;
    cmd_pipe->add_option("--scene", pipe_scene, "scene file")->required();
    cmd_pipe->add_option("--out-dir", pipe_out_dir, "output directory")->required();
    cmd_pipe->add_option("--seed", cfg.seed, "root seed");
    cmd_pipe->add_option("--min-objects", cfg.min_objects, "room object minimum");
    cmd_pipe->add_option("--cell-size", cfg.cell_size, "occupancy cell size, m");
    cmd_pipe->add_option("--agent-radius", cfg.agent_radius, "agent radius, m");
    cmd_pipe->add_option("--hfov", cfg.hfov, "horizontal field of view, deg");
    cmd_pipe->add_option("--max-range", cfg.max_range, "visibility range, m");
    cmd_pipe->add_option("--contact-epsilon", cfg.contact_epsilon,
                         "contact threshold, m");
    cmd_pipe->add_option("--per-type", cfg.per_type, "questions per category");
    cmd_pipe->add_option("--candidate-pairs", cfg.candidate_pairs,
                         "sampled object pairs");
    cmd_pipe->add_option("--whitelist", cfg.whitelist, "room types to keep")
        ->delimiter(',');
    cmd_pipe->add_flag("--lenient", cfg.lenient, "ignore unknown fields");

    for (CLI::App* sub : {cmd_dis, cmd_scan, cmd_qa, cmd_cog, cmd_prompt, cmd_eval,
                          cmd_pipe})
        accept_config(sub);

    std::vector<const char*> argv;
    argv.push_back("scanforge");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*cmd_dis) {
            Scene scene = parse_scene(read_file(dis_scene), lenient);
            std::filesystem::path out_dir(dis_out_dir);
            std::filesystem::create_directories(out_dir);
            auto singles = disassemble(scene);
            for (const Scene& s : singles)
                write_file(out_dir / (sanitize_for_path(s.scene_id) + ".json"),
                           serialize_scene(s));
            std::cout << "wrote " << singles.size() << " room files\n";
            return 0;
        }

        if (*cmd_scan) {
            Scene scene = load_single_room_scene(scan_room, lenient);
            const Room& room = scene.rooms.front();
            ScanParams params{opt_hfov, opt_range, opt_cell, opt_radius, 1.5};
            std::string out;
            if (scan_mode == "orbit") {
                out = frames_to_jsonl(orbit_scan(room, scan_seed, params).frames);
            } else {
                for (const ScanTrajectory& traj :
                     navigation_scan(room, scan_seed, opt_pairs, params))
                    out += frames_to_jsonl(traj.frames);
            }
            write_file(scan_out, out);
            return 0;
        }

        if (*cmd_qa) {
            Scene scene = load_single_room_scene(qa_room, lenient);
            auto items = generate_qa_for_room(scene.rooms.front(), qa_seed,
                                              qa_per_type, scene.scene_id,
                                              {qa_epsilon});
            std::ostringstream out;
            emit_dataset(items, out);
            write_file(qa_out, out.str());
            return 0;
        }

        if (*cmd_cog) {
            if (cog_room.empty() == cog_map.empty())
                throw ValidationError("input", "cognition",
                                      "exactly one of --room or --map is required");
            GlobalMap map;
            if (!cog_room.empty()) {
                Scene scene = load_single_room_scene(cog_room, lenient);
                map = merge_duplicates(global_map_from_room(scene.rooms.front()).entries,
                                       cog_merge);
            } else {
                map = global_map_from_json(read_file(cog_map));
            }
            ReprKind kind = repr_kind_from_string(cog_repr);
            std::string out;
            if (kind == ReprKind::map3d) {
                out = global_map_to_json(map);
            } else if (kind == ReprKind::grid2d) {
                out = grid_map_to_json(quantize_to_grid(map, cog_cell));
            } else {
                out = description_map_to_json(
                    build_description_map(map, parse_front(cog_front)));
            }
            write_file(cog_out, out);
            return 0;
        }

        if (*cmd_prompt) {
            std::string scene_text = read_file(prompt_scene_file);
            ReasoningPlan plan = reasoning_plan(classify_question(prompt_question));
            std::string rendered = assemble_prompt(scene_text, prompt_question, plan);
            if (prompt_out.empty())
                std::cout << rendered;
            else
                write_file(prompt_out, rendered);
            return 0;
        }

        if (*cmd_eval) {
            EvalReport report = evaluate_files(eval_gold, eval_pred);
            std::string text = report_to_text(report);
            if (eval_out.empty())
                std::cout << text;
            else
                write_file(eval_out, text);
            return 0;
        }

        if (*cmd_pipe) {
            cfg.validate();
            Scene scene = parse_scene(read_file(pipe_scene), cfg.lenient);
            PipelineSummary summary =
                run_pipeline(scene, pipe_out_dir, cfg, env_threads());
            std::cout << "processed " << summary.room_ids.size() << " rooms, wrote "
                      << summary.files_written << " files\n";
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

}  // namespace scanforge
