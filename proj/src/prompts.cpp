#include "scanforge/prompts.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "scanforge/jsonio.hpp"

namespace scanforge {

std::string to_string(ReprKind kind) {
    switch (kind) {
        case ReprKind::map3d: return "map3d";
        case ReprKind::grid2d: return "grid2d";
        case ReprKind::description: return "description";
    }
    return "description";
}

ReprKind repr_kind_from_string(const std::string& s) {
    if (s == "map3d") return ReprKind::map3d;
    if (s == "grid2d") return ReprKind::grid2d;
    if (s == "description") return ReprKind::description;
    throw ValidationError("repr", s, "expected map3d, grid2d or description");
}

namespace {

std::string lowercased(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    return s;
}

bool has(const std::string& text, const char* needle) {
    return text.find(needle) != std::string::npos;
}

}  // namespace

QaCategory classify_question(const std::string& question) {
    if (question.empty()) throw UnclassifiedQuestion("empty question");
    std::string q = lowercased(question);

    if (has(q, "which side") || has(q, "viewpoint at") ||
        (has(q, "facing") && has(q, "where is")))
        return QaCategory::relative_direction;
    if (has(q, "closest to")) return QaCategory::relative_distance;
    if (has(q, "distance between") || has(q, "distance from") || has(q, "how far"))
        return QaCategory::absolute_distance;
    if (has(q, "how many") || has(q, "total number of"))
        return QaCategory::object_count;
    if (has(q, "size of the room in square meters") || has(q, "size of this room"))
        return QaCategory::room_size;
    if (has(q, "longest side") || has(q, "shortest side") || has(q, "how tall") ||
        (has(q, "square meters") && has(q, "size of")))
        return QaCategory::object_size;
    if (has(q, "type of this room") || has(q, "type of room") ||
        has(q, "most likely type") || has(q, "is this space a"))
        return QaCategory::room_type;
    if (has(q, "gap between") || has(q, "touching"))
        return QaCategory::contact_relationship;
    if (has(q, "enough space to put") || has(q, "feasible to place"))
        return QaCategory::operation_feasibility;

    throw UnclassifiedQuestion("no rule matches: " + question);
}

ReasoningPlan reasoning_plan(QaCategory category) {
    static const std::map<QaCategory, std::vector<std::string>> kPlans = {
        {QaCategory::relative_distance,
         {"Identify all objects mentioned in the question.",
          "Estimate the spatial coordinates of each relevant object from the scene "
          "representation.",
          "Compute the pairwise distances between the reference object and each "
          "candidate object.",
          "Select the candidate object with the minimum distance as the answer."}},
        {QaCategory::object_count,
         {"Identify the object category the question asks about.",
          "Scan the scene representation and collect every instance of that "
          "category.",
          "Discard duplicate sightings of the same instance.",
          "Count qualifying instances and report the total."}},
        {QaCategory::object_size,
         {"Identify the object the question asks about.",
          "Locate that object in the scene representation.",
          "Estimate its physical dimensions along each axis.",
          "Compute the requested measure (side length, height or footprint area) "
          "and report it in the asked unit."}},
        {QaCategory::room_size,
         {"Identify the visible floor boundary of the room.",
          "Estimate the room extents along both horizontal axes.",
          "Compute the enclosed floor area from those extents.",
          "Report the area in square meters."}},
        {QaCategory::room_type,
         {"List the salient objects present in the scene.",
          "Match the object set against typical room inventories.",
          "Weigh which room function the strongest evidence supports.",
          "Answer with the most likely room type."}},
        {QaCategory::absolute_distance,
         {"Identify the two objects named in the question.",
          "Estimate the spatial coordinates of both objects.",
          "Compute the straight-line distance between their centers.",
          "Report the distance in meters."}},
        {QaCategory::relative_direction,
         {"Identify the standing object, the facing object and the query object.",
          "Compute the viewing direction from the standing object toward the "
          "facing object.",
          "Compute the clockwise angle from that direction to the query object.",
          "Map the angle to front, right, back or left and answer."}},
        {QaCategory::contact_relationship,
         {"Identify the two objects named in the question.",
          "Estimate the position and extents of each object.",
          "Compute the smallest gap between their boundaries.",
          "Decide whether the gap is effectively zero and answer yes or no."}},
        {QaCategory::operation_feasibility,
         {"Identify the movable object and the supporting or containing object.",
          "Retrieve the dimensions of both objects.",
          "Compare length and width in both orientations, and height when the "
          "object must fit inside.",
          "Answer yes when the movable object fits, otherwise no."}},
    };
    return {category, kPlans.at(category)};
}

std::string render_representation(const GlobalMap& map, ReprKind kind,
                                  double cell_size, const Vec2& reference_front) {
    if (map.entries.empty())
        throw InvalidQuery("cannot render an empty global map");

    if (kind == ReprKind::map3d) {
        std::map<std::string, int> seen;
        std::string out;
        for (const GlobalMapEntry& e : map.entries) {
            int n = ++seen[e.category];
            std::string key =
                n == 1 ? e.category : e.category + " " + std::to_string(n);
            out += key + ": (" + fmt_f1(e.position.x) + ", " + fmt_f1(e.position.y) +
                   ", " + fmt_f1(e.position.z) + ")\n";
        }
        return out;
    }

    if (kind == ReprKind::grid2d) {
        GridMap grid = quantize_to_grid(map, cell_size);
        std::map<std::string, std::string> category_of;
        for (const GlobalMapEntry& e : map.entries)
            category_of[e.object_id] = e.category;
        std::string out;
        for (const auto& [cell, ids] : grid.cells) {
            out += "cell (" + std::to_string(cell.first) + ", " +
                   std::to_string(cell.second) + "): ";
            for (size_t i = 0; i < ids.size(); ++i) {
                if (i) out += ", ";
                out += category_of[ids[i]];
            }
            out += "\n";
        }
        return out;
    }

    return description_map_to_json(build_description_map(map, reference_front));
}

std::string assemble_prompt(const std::string& scene_text, const std::string& question,
                            const ReasoningPlan& plan) {
    if (scene_text.empty() || question.empty() || plan.steps.size() < 2)
        throw InvalidQuery("prompt needs scene text, question and a plan");
    for (const std::string& step : plan.steps)
        if (step.empty()) throw InvalidQuery("plan steps must be nonempty");

    std::string out = "[Scene Representation]\n";
    out += scene_text;
    out += "\n\n[Question]\n";
    out += question;
    out += "\n\n[Reasoning Steps]\n";
    for (size_t i = 0; i < plan.steps.size(); ++i)
        out += std::to_string(i + 1) + ". " + plan.steps[i] + "\n";
    return out;
}

PromptBundle make_prompt_bundle(const GlobalMap& map, ReprKind kind, double cell_size,
                                const Vec2& reference_front,
                                const std::string& question) {
    PromptBundle bundle;
    bundle.kind = kind;
    bundle.scene_text = render_representation(map, kind, cell_size, reference_front);
    bundle.question = question;
    bundle.plan = reasoning_plan(classify_question(question));
    bundle.rendered = assemble_prompt(bundle.scene_text, bundle.question, bundle.plan);
    return bundle;
}

const std::string& frame_analysis_prompt() {
    static const std::string kPrompt = R"([Task]
You are given a video (multiple frames) capturing an indoor scene. Your goal is to recognize {categories_of_interest} objects, analyze the spatial layout of the scene, and describe the relative position of each object.

[Instructions]
1. Per-frame analysis:
- For each frame, choose one object as a **local reference point**.
- Predict the relative position of all other objects with respect to this local reference point.
- Express relative positions using simple terms like "left", "right", "front", "behind", "above", "below", and approximate distances (e.g., "2 meters to the right").

2. Global scene layout:
- Take the **local reference point from the first frame** as the **global reference point** for the whole video.
- Use overlapping objects between frames to align frames together.
- Gradually build the spatial descriptions for all objects relative to the global reference point.

[Rules]
- If a category has multiple instances (e.g., two chairs), describe each instance separately.
- Preserve the real-world spatial relationships and distances as accurately as possible.
- Use clear and consistent directional and distance terms.

[Output Format]
ONLY Return the result as a JSON dictionary following STRICTLY this format:
{
    "category name": "global reference point",
    "another category name": "Position description relative to the global reference point",
    ...
}

Example:
{
    "chair": "The chair is located 1.5 meters to the left and 0.5 meters behind the global reference point",
    "table": "The table is located 2 meters to the right of the global reference point",
    "lamp": "The lamp is located 1 meter above and 1 meter behind the global reference point"
}
)";
    return kPrompt;
}

}  // namespace scanforge
