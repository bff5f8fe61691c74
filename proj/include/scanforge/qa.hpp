#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "scanforge/scene.hpp"

namespace scanforge {

enum class QaCategory {
    object_count,
    object_size,
    room_size,
    room_type,
    relative_distance,
    absolute_distance,
    relative_direction,
    contact_relationship,
    operation_feasibility,
};

const std::vector<QaCategory>& all_qa_categories();
std::string to_string(QaCategory c);
QaCategory qa_category_from_string(const std::string& s);

enum class AnswerType { number, choice, binary, text };
std::string to_string(AnswerType t);
AnswerType answer_type_from_string(const std::string& s);

enum class Unit { meters, square_meters, none };
std::string to_string(Unit u);
Unit unit_from_string(const std::string& s);

enum class SizeVariant { longest_side, shortest_side, height, footprint_area };
enum class PlacementMode { on_top, inside };

// Viewer-relative quadrant, clockwise half-open spans:
// front [315,45), right [45,135), back [135,225), left [225,315).
enum class Direction { front, right, back, left };
std::string to_string(Direction d);
Direction classify_clockwise_angle(double theta_deg);

struct QaProvenance {
    std::string oracle;  // rule that produced the answer, e.g. "centroid_distance"
    std::vector<std::string> operands;
};

struct QaItem {
    std::string qa_id;
    std::string scene_id;
    std::string room_id;
    QaCategory category = QaCategory::object_count;
    std::string question;
    AnswerType answer_type = AnswerType::number;
    std::string answer;           // canonical string; numbers use one decimal
    double answer_number = 0.0;   // valid when answer_type == number
    Unit unit = Unit::none;
    std::vector<std::string> options;  // exactly 4 for choice, else empty
    QaProvenance provenance;
};

void validate_qa_item(const QaItem& item);

inline double round_to_tenth(double v) { return std::round(v * 10.0) / 10.0; }

// Candidate with the minimum centroid distance; ties break to the smaller id.
std::string nearest_object(const ObjectInstance& reference,
                           const std::vector<ObjectInstance>& candidates);

double centroid_distance(const ObjectInstance& a, const ObjectInstance& b);

// Front is viewer -> facing_target in the XY plane; the query point is
// classified by its clockwise angle from that front.
Direction direction_of(const Vec3& viewer_pos, const Vec3& facing_target,
                       const Vec3& query);

bool is_in_contact(const ObjectInstance& a, const ObjectInstance& b, double epsilon);

// on_top: footprint must fit the support footprint, 90-degree swap allowed.
// inside: additionally the height must fit.
bool placement_feasible(const ObjectInstance& movable, const ObjectInstance& support,
                        PlacementMode mode);

std::pair<double, Unit> object_size_answer(const ObjectInstance& obj,
                                           SizeVariant variant);

struct QaGenParams {
    double contact_epsilon = 0.05;
};

std::vector<QaItem> generate_qa_for_room(const Room& room, uint64_t seed,
                                         int per_type,
                                         const std::string& scene_id = "",
                                         const QaGenParams& params = {});

// One record per line; returns the line count. Throws IoError on failure.
size_t emit_dataset(const std::vector<QaItem>& items, std::ostream& sink);

std::string qa_item_to_json_line(const QaItem& item);
std::vector<QaItem> parse_qa_jsonl(const std::string& text);

}  // namespace scanforge
