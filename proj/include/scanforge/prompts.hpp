#pragma once

#include <string>
#include <vector>

#include "scanforge/cognition.hpp"
#include "scanforge/qa.hpp"

namespace scanforge {

struct ReasoningPlan {
    QaCategory category = QaCategory::object_count;
    std::vector<std::string> steps;  // at least 2, all nonempty
};

enum class ReprKind { map3d, grid2d, description };
std::string to_string(ReprKind kind);
ReprKind repr_kind_from_string(const std::string& s);

struct PromptBundle {
    ReprKind kind = ReprKind::description;
    std::string scene_text;
    std::string question;
    ReasoningPlan plan;
    std::string rendered;
};

// Deterministic pattern rules over the template pool; unknown phrasing
// raises UnclassifiedQuestion rather than guessing.
QaCategory classify_question(const std::string& question);

ReasoningPlan reasoning_plan(QaCategory category);

// map3d: one "<key>: (x, y, z)" line per object. grid2d: one
// "cell (i, j): members" line per occupied cell. description: JSON
// dictionary of per-object position descriptions.
std::string render_representation(const GlobalMap& map, ReprKind kind,
                                  double cell_size, const Vec2& reference_front);

// scene section, question section, numbered plan steps, in that order.
std::string assemble_prompt(const std::string& scene_text, const std::string& question,
                            const ReasoningPlan& plan);

PromptBundle make_prompt_bundle(const GlobalMap& map, ReprKind kind, double cell_size,
                                const Vec2& reference_front,
                                const std::string& question);

// Static per-frame scene-analysis prompt shipped with the library; the copy
// under assets/prompts/ is the same text.
const std::string& frame_analysis_prompt();

}  // namespace scanforge
