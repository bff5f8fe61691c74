#include "scanforge/qa.hpp"

#include <algorithm>
#include <cstring>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "scanforge/jsonio.hpp"
#include "scanforge/random.hpp"

namespace scanforge {

const std::vector<QaCategory>& all_qa_categories() {
    static const std::vector<QaCategory> kAll = {
        QaCategory::object_count,       QaCategory::object_size,
        QaCategory::room_size,          QaCategory::room_type,
        QaCategory::relative_distance,  QaCategory::absolute_distance,
        QaCategory::relative_direction, QaCategory::contact_relationship,
        QaCategory::operation_feasibility};
    return kAll;
}

std::string to_string(QaCategory c) {
    switch (c) {
        case QaCategory::object_count: return "object_count";
        case QaCategory::object_size: return "object_size";
        case QaCategory::room_size: return "room_size";
        case QaCategory::room_type: return "room_type";
        case QaCategory::relative_distance: return "relative_distance";
        case QaCategory::absolute_distance: return "absolute_distance";
        case QaCategory::relative_direction: return "relative_direction";
        case QaCategory::contact_relationship: return "contact_relationship";
        case QaCategory::operation_feasibility: return "operation_feasibility";
    }
    return "object_count";
}

QaCategory qa_category_from_string(const std::string& s) {
    for (QaCategory c : all_qa_categories())
        if (to_string(c) == s) return c;
    throw ValidationError("category", s, "unknown question category");
}

std::string to_string(AnswerType t) {
    switch (t) {
        case AnswerType::number: return "number";
        case AnswerType::choice: return "choice";
        case AnswerType::binary: return "binary";
        case AnswerType::text: return "text";
    }
    return "number";
}

AnswerType answer_type_from_string(const std::string& s) {
    if (s == "number") return AnswerType::number;
    if (s == "choice") return AnswerType::choice;
    if (s == "binary") return AnswerType::binary;
    if (s == "text") return AnswerType::text;
    throw ValidationError("answer_type", s, "unknown answer type");
}

std::string to_string(Unit u) {
    switch (u) {
        case Unit::meters: return "meters";
        case Unit::square_meters: return "square_meters";
        case Unit::none: return "none";
    }
    return "none";
}

Unit unit_from_string(const std::string& s) {
    if (s == "meters") return Unit::meters;
    if (s == "square_meters") return Unit::square_meters;
    if (s == "none") return Unit::none;
    throw ValidationError("unit", s, "unknown unit");
}

std::string to_string(Direction d) {
    switch (d) {
        case Direction::front: return "front";
        case Direction::right: return "right";
        case Direction::back: return "back";
        case Direction::left: return "left";
    }
    return "front";
}

Direction classify_clockwise_angle(double theta_deg) {
    double t = wrap_deg(theta_deg);
    if (t < 45.0) return Direction::front;
    if (t < 135.0) return Direction::right;
    if (t < 225.0) return Direction::back;
    if (t < 315.0) return Direction::left;
    return Direction::front;
}

void validate_qa_item(const QaItem& item) {
    if (item.qa_id.empty())
        throw ValidationError("qa_id", item.qa_id, "must be nonempty");
    if (item.question.empty())
        throw ValidationError("question", item.qa_id, "must be nonempty");
    if (item.provenance.oracle.empty())
        throw ValidationError("provenance", item.qa_id, "must name an oracle");
    if (item.answer_type == AnswerType::choice) {
        if (item.options.size() != 4)
            throw ValidationError("options", item.qa_id, "choice needs 4 options");
        if (std::find(item.options.begin(), item.options.end(), item.answer) ==
            item.options.end())
            throw ValidationError("answer", item.qa_id, "answer not among options");
    } else if (!item.options.empty()) {
        throw ValidationError("options", item.qa_id, "only choice items carry options");
    }
    if (item.answer_type == AnswerType::number) {
        if (!std::isfinite(item.answer_number) || item.answer_number < 0.0)
            throw ValidationError("answer", item.qa_id,
                                  "number answers must be finite and >= 0");
    }
    if (item.answer_type == AnswerType::binary && item.answer != "yes" &&
        item.answer != "no")
        throw ValidationError("answer", item.qa_id, "binary answers are yes/no");
}

std::string nearest_object(const ObjectInstance& reference,
                           const std::vector<ObjectInstance>& candidates) {
    if (candidates.empty())
        throw InvalidQuery("nearest_object needs at least one candidate");
    const ObjectInstance* best = nullptr;
    double best_dist = 0.0;
    for (const ObjectInstance& c : candidates) {
        double d = distance(reference.position, c.position);
        if (!best || d < best_dist ||
            (d == best_dist && c.object_id < best->object_id)) {
            best = &c;
            best_dist = d;
        }
    }
    return best->object_id;
}

double centroid_distance(const ObjectInstance& a, const ObjectInstance& b) {
    return distance(a.position, b.position);
}

Direction direction_of(const Vec3& viewer_pos, const Vec3& facing_target,
                       const Vec3& query) {
    Vec2 front = (facing_target - viewer_pos).xy();
    Vec2 to_query = (query - viewer_pos).xy();
    if (front.norm() < 1e-9 || to_query.norm() < 1e-9)
        throw DegenerateGeometry("direction_of: coincident points in the XY plane");
    return classify_clockwise_angle(clockwise_angle_deg(front, to_query));
}

bool is_in_contact(const ObjectInstance& a, const ObjectInstance& b, double epsilon) {
    if (epsilon < 0.0)
        throw ValidationError("epsilon", a.object_id, "must be >= 0");
    return aabb_gap(world_aabb(a), world_aabb(b)) <= epsilon;
}

bool placement_feasible(const ObjectInstance& movable, const ObjectInstance& support,
                        PlacementMode mode) {
    double mx = movable.size.x;
    double my = movable.size.y;
    double sx = support.size.x;
    double sy = support.size.y;
    bool fits = (mx < sx && my < sy) || (my < sx && mx < sy);
    if (mode == PlacementMode::inside) fits = fits && movable.size.z < support.size.z;
    return fits;
}

std::pair<double, Unit> object_size_answer(const ObjectInstance& obj,
                                           SizeVariant variant) {
    switch (variant) {
        case SizeVariant::longest_side:
            return {round_to_tenth(std::max({obj.size.x, obj.size.y, obj.size.z})),
                    Unit::meters};
        case SizeVariant::shortest_side:
            return {round_to_tenth(std::min({obj.size.x, obj.size.y, obj.size.z})),
                    Unit::meters};
        case SizeVariant::height:
            return {round_to_tenth(obj.size.z), Unit::meters};
        case SizeVariant::footprint_area:
            return {round_to_tenth(obj.size.x * obj.size.y), Unit::square_meters};
    }
    return {0.0, Unit::none};
}

namespace {

std::string plural(const std::string& category) {
    size_t space = category.rfind(' ');
    std::string head = space == std::string::npos ? "" : category.substr(0, space + 1);
    std::string word = space == std::string::npos ? category : category.substr(space + 1);
    if (word.empty()) return category + "s";

    auto ends_with = [&](const char* suffix) {
        size_t n = std::strlen(suffix);
        return word.size() >= n && word.compare(word.size() - n, n, suffix) == 0;
    };
    auto is_vowel = [](char c) {
        return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
    };

    if (ends_with("s") || ends_with("x") || ends_with("z") || ends_with("ch") ||
        ends_with("sh"))
        return head + word + "es";
    if (word.size() >= 2 && word.back() == 'y' && !is_vowel(word[word.size() - 2]))
        return head + word.substr(0, word.size() - 1) + "ies";
    if (ends_with("fe")) return head + word.substr(0, word.size() - 2) + "ves";
    if (ends_with("f")) return head + word.substr(0, word.size() - 1) + "ves";
    return head + word + "s";
}

std::string the_(const std::string& category) { return "the " + category; }

const char* size_variant_name(SizeVariant v) {
    switch (v) {
        case SizeVariant::longest_side: return "longest_side";
        case SizeVariant::shortest_side: return "shortest_side";
        case SizeVariant::height: return "height";
        case SizeVariant::footprint_area: return "footprint_area";
    }
    return "longest_side";
}

class RoomIndex {
public:
    explicit RoomIndex(const Room& room) : room_(room) {
        for (const ObjectInstance& obj : room.objects)
            by_category_[obj.category].push_back(&obj);
        for (const auto& [cat, objs] : by_category_) {
            present_.push_back(cat);
            if (objs.size() == 1) unique_.push_back(cat);
        }
    }

    const std::vector<std::string>& present() const { return present_; }
    const std::vector<std::string>& unique() const { return unique_; }
    size_t count(const std::string& cat) const { return by_category_.at(cat).size(); }
    const ObjectInstance& sole(const std::string& cat) const {
        return *by_category_.at(cat).front();
    }
    const Room& room() const { return room_; }

private:
    const Room& room_;
    std::map<std::string, std::vector<const ObjectInstance*>> by_category_;
    std::vector<std::string> present_;
    std::vector<std::string> unique_;
};

class ItemBuilder {
public:
    ItemBuilder(const Room& room, const std::string& scene_id)
        : room_(room), prefix_(scene_id.empty() ? room.room_id : scene_id),
          scene_id_(scene_id.empty() ? room.room_id : scene_id) {}

    QaItem base(QaCategory category) {
        QaItem item;
        item.qa_id = prefix_ + ":" + to_string(category) + ":" +
                     std::to_string(counter_[category]++);
        item.scene_id = scene_id_;
        item.room_id = room_.room_id;
        item.category = category;
        return item;
    }

private:
    const Room& room_;
    std::string prefix_;
    std::string scene_id_;
    std::map<QaCategory, int> counter_;
};

// {truth, 0.5x, 1.5x, 2x} shuffled, or empty when the rounded strings collide
std::vector<std::string> numeric_choice_options(double truth, bool integral,
                                                Rng& rng) {
    std::vector<std::string> opts = {fmt_f1(truth)};
    for (double factor : {0.5, 1.5, 2.0}) {
        double v = integral ? double(std::llround(truth * factor))
                            : round_to_tenth(truth * factor);
        opts.push_back(fmt_f1(v));
    }
    std::set<std::string> distinct(opts.begin(), opts.end());
    if (distinct.size() != 4) return {};
    rng.shuffle(opts);
    return opts;
}

void finish_numeric(QaItem& item, double truth, bool integral, Unit unit, Rng& rng) {
    item.unit = unit;
    bool as_choice = rng.coin();
    std::vector<std::string> opts;
    if (as_choice) opts = numeric_choice_options(truth, integral, rng);
    if (!opts.empty()) {
        item.answer_type = AnswerType::choice;
        item.options = std::move(opts);
        item.answer = fmt_f1(truth);
        item.answer_number = truth;
    } else {
        item.answer_type = AnswerType::number;
        item.answer = fmt_f1(truth);
        item.answer_number = truth;
    }
}

}  // namespace

std::vector<QaItem> generate_qa_for_room(const Room& room, uint64_t seed,
                                         int per_type, const std::string& scene_id,
                                         const QaGenParams& params) {
    if (per_type < 1)
        throw ValidationError("per_type", room.room_id, "must be >= 1");
    validate_room(room);

    RoomIndex index(room);
    ItemBuilder builder(room, scene_id);
    std::vector<QaItem> items;

    auto category_rng = [&](QaCategory c) {
        return Rng(child_seed(seed, "qa:" + to_string(c)));
    };

    // object_count
    {
        Rng rng = category_rng(QaCategory::object_count);
        std::vector<std::string> cats =
            rng.sample(index.present(), size_t(per_type));
        for (const std::string& cat : cats) {
            QaItem item = builder.base(QaCategory::object_count);
            int tmpl = rng.uniform_int(0, 1);
            item.question = tmpl == 0
                                ? "How many " + plural(cat) + " are there in the room?"
                                : "What is the total number of " + plural(cat) + "?";
            item.provenance = {"instance_count", {cat}};
            finish_numeric(item, double(index.count(cat)), true, Unit::none, rng);
            items.push_back(std::move(item));
        }
    }

    // object_size
    {
        Rng rng = category_rng(QaCategory::object_size);
        std::vector<std::string> cats = rng.sample(index.unique(), size_t(per_type));
        for (const std::string& cat : cats) {
            const ObjectInstance& obj = index.sole(cat);
            QaItem item = builder.base(QaCategory::object_size);
            SizeVariant variant = SizeVariant(rng.uniform_int(0, 3));
            switch (variant) {
                case SizeVariant::longest_side:
                    item.question = "What is the length of the longest side of " +
                                    the_(cat) + " in meters?";
                    break;
                case SizeVariant::footprint_area:
                    item.question =
                        "What is the size of " + the_(cat) + " in square meters?";
                    break;
                case SizeVariant::shortest_side:
                    item.question = "What is the length of the shortest side of " +
                                    the_(cat) + " in meters?";
                    break;
                case SizeVariant::height:
                    item.question = "How tall is " + the_(cat) + " in meters?";
                    break;
            }
            auto [value, unit] = object_size_answer(obj, variant);
            item.provenance = {std::string("object_size:") + size_variant_name(variant),
                               {obj.object_id}};
            finish_numeric(item, value, false, unit, rng);
            items.push_back(std::move(item));
        }
    }

    // room_size: only one distinct question exists
    {
        Rng rng = category_rng(QaCategory::room_size);
        QaItem item = builder.base(QaCategory::room_size);
        item.question = "What is the size of the room in square meters?";
        item.provenance = {"polygon_area", {room.room_id}};
        finish_numeric(item, round_to_tenth(room.floor_polygon.area()), false,
                       Unit::square_meters, rng);
        items.push_back(std::move(item));
    }

    // room_type
    {
        Rng rng = category_rng(QaCategory::room_type);
        std::vector<std::string> templates = {
            "Based on object layout, what is the most likely type of this room?",
            "Is this space a living room, a kitchen, or something else?"};
        rng.shuffle(templates);
        size_t n = std::min(templates.size(), size_t(per_type));
        for (size_t k = 0; k < n; ++k) {
            QaItem item = builder.base(QaCategory::room_type);
            item.question = templates[k];
            item.answer_type = AnswerType::text;
            item.answer = room.room_type;
            item.unit = Unit::none;
            item.provenance = {"room_label", {room.room_id}};
            items.push_back(std::move(item));
        }
    }

    // relative_distance: reference + three candidates, all single-instance
    if (index.unique().size() >= 4) {
        Rng rng = category_rng(QaCategory::relative_distance);
        std::set<std::vector<std::string>> used;
        int made = 0;
        for (int attempt = 0; attempt < per_type * 20 && made < per_type; ++attempt) {
            std::vector<std::string> cats = rng.sample(index.unique(), 4);
            if (!used.insert(cats).second) continue;
            const std::string& ref_cat = cats[0];
            const ObjectInstance& ref = index.sole(ref_cat);
            std::vector<ObjectInstance> candidates = {
                index.sole(cats[1]), index.sole(cats[2]), index.sole(cats[3])};
            std::string winner_id = nearest_object(ref, candidates);
            std::string winner_cat;
            for (const ObjectInstance& c : candidates)
                if (c.object_id == winner_id) winner_cat = c.category;

            QaItem item = builder.base(QaCategory::relative_distance);
            int tmpl = rng.uniform_int(0, 1);
            std::string list = cats[1] + ", " + cats[2] + ", " + cats[3];
            item.question =
                tmpl == 0 ? "Which of these objects (" + list + ") is the closest to " +
                                the_(ref_cat) + "?"
                          : "Among the listed objects (" + list +
                                "), which one is closest to " + the_(ref_cat) + "?";
            item.answer_type = AnswerType::choice;
            item.answer = winner_cat;
            item.options = {cats[1], cats[2], cats[3], ref_cat};
            rng.shuffle(item.options);
            item.unit = Unit::none;
            item.provenance = {"nearest_object",
                               {ref.object_id, candidates[0].object_id,
                                candidates[1].object_id, candidates[2].object_id}};
            items.push_back(std::move(item));
            ++made;
        }
    }

    // absolute_distance
    if (index.unique().size() >= 2) {
        Rng rng = category_rng(QaCategory::absolute_distance);
        std::set<std::pair<std::string, std::string>> used;
        int made = 0;
        for (int attempt = 0; attempt < per_type * 20 && made < per_type; ++attempt) {
            std::vector<std::string> cats = rng.sample(index.unique(), 2);
            auto key = std::minmax(cats[0], cats[1]);
            if (!used.insert(key).second) continue;
            const ObjectInstance& a = index.sole(cats[0]);
            const ObjectInstance& b = index.sole(cats[1]);

            QaItem item = builder.base(QaCategory::absolute_distance);
            int tmpl = rng.uniform_int(0, 2);
            if (tmpl == 0)
                item.question = "What is the distance between " + the_(cats[0]) +
                                " and " + the_(cats[1]) + " in meters?";
            else if (tmpl == 1)
                item.question = "Measure the distance from " + the_(cats[0]) + " to " +
                                the_(cats[1]) + " in meters.";
            else
                item.question = "How far is " + the_(cats[0]) + " from " +
                                the_(cats[1]) + " in meters?";
            item.provenance = {"centroid_distance", {a.object_id, b.object_id}};
            finish_numeric(item, round_to_tenth(centroid_distance(a, b)), false,
                           Unit::meters, rng);
            items.push_back(std::move(item));
            ++made;
        }
    }

    // relative_direction
    if (index.unique().size() >= 3) {
        Rng rng = category_rng(QaCategory::relative_direction);
        std::set<std::vector<std::string>> used;
        int made = 0;
        for (int attempt = 0; attempt < per_type * 20 && made < per_type; ++attempt) {
            std::vector<std::string> cats = rng.sample(index.unique(), 3);
            if (!used.insert(cats).second) continue;
            const ObjectInstance& stand = index.sole(cats[0]);
            const ObjectInstance& face = index.sole(cats[1]);
            const ObjectInstance& query = index.sole(cats[2]);
            if ((face.position - stand.position).xy().norm() < 1e-9) continue;
            if ((query.position - stand.position).xy().norm() < 1e-9) continue;

            Direction dir = direction_of(stand.position, face.position, query.position);
            QaItem item = builder.base(QaCategory::relative_direction);
            int tmpl = rng.uniform_int(0, 1);
            item.question =
                tmpl == 0 ? "If I am standing by " + the_(cats[0]) + " and facing " +
                                the_(cats[1]) + ", which side is " + the_(cats[2]) +
                                " on?"
                          : "From the viewpoint at " + the_(cats[0]) + " facing " +
                                the_(cats[1]) + ", where is " + the_(cats[2]) + "?";
            item.answer_type = AnswerType::choice;
            item.answer = to_string(dir);
            item.options = {"front", "right", "back", "left"};
            rng.shuffle(item.options);
            item.unit = Unit::none;
            item.provenance = {
                "direction_of",
                {stand.object_id, face.object_id, query.object_id}};
            items.push_back(std::move(item));
            ++made;
        }
    }

    // contact_relationship
    if (index.unique().size() >= 2) {
        Rng rng = category_rng(QaCategory::contact_relationship);
        std::set<std::pair<std::string, std::string>> used;
        int made = 0;
        for (int attempt = 0; attempt < per_type * 20 && made < per_type; ++attempt) {
            std::vector<std::string> cats = rng.sample(index.unique(), 2);
            auto key = std::minmax(cats[0], cats[1]);
            if (!used.insert(key).second) continue;
            const ObjectInstance& a = index.sole(cats[0]);
            const ObjectInstance& b = index.sole(cats[1]);
            bool contact = is_in_contact(a, b, params.contact_epsilon);

            QaItem item = builder.base(QaCategory::contact_relationship);
            int tmpl = rng.uniform_int(0, 1);
            if (tmpl == 0) {
                item.question = "Is there a gap between " + the_(cats[0]) + " and " +
                                the_(cats[1]) + "?";
                item.answer = contact ? "no" : "yes";
                item.provenance = {"aabb_contact:gap", {a.object_id, b.object_id}};
            } else {
                item.question = "Are " + the_(cats[0]) + " and " + the_(cats[1]) +
                                " touching each other?";
                item.answer = contact ? "yes" : "no";
                item.provenance = {"aabb_contact:touching", {a.object_id, b.object_id}};
            }
            item.answer_type = AnswerType::binary;
            item.unit = Unit::none;
            items.push_back(std::move(item));
            ++made;
        }
    }

    // operation_feasibility
    if (index.unique().size() >= 2) {
        Rng rng = category_rng(QaCategory::operation_feasibility);
        std::set<std::vector<std::string>> used;
        int made = 0;
        for (int attempt = 0; attempt < per_type * 20 && made < per_type; ++attempt) {
            std::vector<std::string> cats = rng.sample(index.unique(), 2);
            if (!used.insert(cats).second) continue;
            const ObjectInstance& movable = index.sole(cats[0]);
            const ObjectInstance& support = index.sole(cats[1]);

            QaItem item = builder.base(QaCategory::operation_feasibility);
            int tmpl = rng.uniform_int(0, 1);
            PlacementMode mode = tmpl == 0 ? PlacementMode::inside
                                           : PlacementMode::on_top;
            item.question =
                tmpl == 0 ? "Considering only object sizes, is there enough space to put " +
                                the_(cats[0]) + " in " + the_(cats[1]) + "?"
                          : "Considering only object dimensions, is it feasible to place " +
                                the_(cats[0]) + " on " + the_(cats[1]) + "?";
            item.answer_type = AnswerType::binary;
            item.answer = placement_feasible(movable, support, mode) ? "yes" : "no";
            item.unit = Unit::none;
            item.provenance = {tmpl == 0 ? "placement_feasible:inside"
                                         : "placement_feasible:on_top",
                               {movable.object_id, support.object_id}};
            items.push_back(std::move(item));
            ++made;
        }
    }

    for (const QaItem& item : items) validate_qa_item(item);
    return items;
}

std::string qa_item_to_json_line(const QaItem& item) {
    std::string out = "{\"qa_id\":" + quoted(item.qa_id);
    out += ",\"scene_id\":" + quoted(item.scene_id);
    out += ",\"room_id\":" + quoted(item.room_id);
    out += ",\"category\":" + quoted(to_string(item.category));
    out += ",\"question\":" + quoted(item.question);
    out += ",\"answer_type\":" + quoted(to_string(item.answer_type));
    if (item.answer_type == AnswerType::number)
        out += ",\"answer\":" + fmt_f1(item.answer_number);
    else
        out += ",\"answer\":" + quoted(item.answer);
    out += ",\"unit\":" + quoted(to_string(item.unit));
    if (item.answer_type == AnswerType::choice)
        out += ",\"options\":" + json_string_array(item.options);
    out += ",\"provenance\":{\"oracle\":" + quoted(item.provenance.oracle) +
           ",\"operands\":" + json_string_array(item.provenance.operands) + "}";
    out += "}";
    return out;
}

size_t emit_dataset(const std::vector<QaItem>& items, std::ostream& sink) {
    size_t count = 0;
    for (const QaItem& item : items) {
        validate_qa_item(item);
        sink << qa_item_to_json_line(item) << "\n";
        if (!sink.good()) throw IoError("failed writing dataset record " + item.qa_id);
        ++count;
    }
    return count;
}

std::vector<QaItem> parse_qa_jsonl(const std::string& text) {
    std::vector<QaItem> items;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(e.what(), lineno, 1);
        }
        try {
            QaItem item;
            item.qa_id = j.at("qa_id").get<std::string>();
            item.scene_id = j.at("scene_id").get<std::string>();
            item.room_id = j.at("room_id").get<std::string>();
            item.category =
                qa_category_from_string(j.at("category").get<std::string>());
            item.question = j.at("question").get<std::string>();
            item.answer_type =
                answer_type_from_string(j.at("answer_type").get<std::string>());
            if (item.answer_type == AnswerType::number) {
                item.answer_number = j.at("answer").get<double>();
                item.answer = fmt_f1(item.answer_number);
            } else {
                item.answer = j.at("answer").get<std::string>();
            }
            item.unit = unit_from_string(j.at("unit").get<std::string>());
            if (j.contains("options"))
                for (const auto& o : j["options"])
                    item.options.push_back(o.get<std::string>());
            item.provenance.oracle =
                j.at("provenance").at("oracle").get<std::string>();
            for (const auto& o : j.at("provenance").at("operands"))
                item.provenance.operands.push_back(o.get<std::string>());
            items.push_back(std::move(item));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(e.what(), lineno, 1);
        }
    }
    return items;
}

}  // namespace scanforge
