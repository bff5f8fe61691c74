#include <algorithm>

#include "doctest.h"
#include "scanforge/evaluation.hpp"
#include "scanforge/jsonio.hpp"
#include "scanforge_ref/oracles.hpp"
#include "test_support.hpp"

using namespace scanforge;

namespace {

QaItem number_item(const std::string& id, double answer) {
    QaItem item;
    item.qa_id = id;
    item.scene_id = "s";
    item.room_id = "r";
    item.category = QaCategory::absolute_distance;
    item.question = "How far is the a from the b in meters?";
    item.answer_type = AnswerType::number;
    item.answer_number = answer;
    item.answer = fmt_f1(answer);
    item.unit = Unit::meters;
    item.provenance = {"centroid_distance", {"a", "b"}};
    return item;
}

QaItem text_item(const std::string& id, const std::string& answer) {
    QaItem item;
    item.qa_id = id;
    item.scene_id = "s";
    item.room_id = "r";
    item.category = QaCategory::room_type;
    item.question = "Based on object layout, what is the most likely type of this room?";
    item.answer_type = AnswerType::text;
    item.answer = answer;
    item.unit = Unit::none;
    item.provenance = {"room_label", {"r"}};
    return item;
}

QaItem binary_item(const std::string& id, const std::string& answer) {
    QaItem item;
    item.qa_id = id;
    item.scene_id = "s";
    item.room_id = "r";
    item.category = QaCategory::contact_relationship;
    item.question = "Are the a and the b touching each other?";
    item.answer_type = AnswerType::binary;
    item.answer = answer;
    item.unit = Unit::none;
    item.provenance = {"aabb_contact:touching", {"a", "b"}};
    return item;
}

QaItem choice_item(const std::string& id, const std::string& answer,
                   std::vector<std::string> options) {
    QaItem item;
    item.qa_id = id;
    item.scene_id = "s";
    item.room_id = "r";
    item.category = QaCategory::relative_distance;
    item.question = "Which of these objects (a, b, c) is the closest to the d?";
    item.answer_type = AnswerType::choice;
    item.answer = answer;
    item.options = std::move(options);
    item.unit = Unit::none;
    item.provenance = {"nearest_object", {"d", "a", "b", "c"}};
    return item;
}

}  // namespace

TEST_CASE("score_item numeric tolerance grid") {
    QaItem gold = number_item("q1", 10.0);
    CHECK(score_item(gold, "10.0") == 1.0);
    CHECK(score_item(gold, "0") == 0.0);
    CHECK(score_item(gold, "9.5") == 0.9);  // fails only the tightest threshold
    CHECK(score_item(gold, "not a number") == 0.0);

    // non-increasing in absolute error
    double last = 1.0;
    for (double pred : {10.0, 9.8, 9.0, 8.0, 6.0, 4.0, 0.0}) {
        double s = score_item(gold, fmt_f1(pred));
        CHECK(s <= last + 1e-12);
        CHECK(s >= 0.0);
        CHECK(s <= 1.0);
        last = s;
    }
}

TEST_CASE("score_item exact-match kinds are case and whitespace tolerant") {
    QaItem gold = text_item("q1", "bedroom");
    CHECK(score_item(gold, "bedroom") == 1.0);
    CHECK(score_item(gold, "  BEDROOM \n") == 1.0);
    CHECK(score_item(gold, "kitchen") == 0.0);
}

TEST_CASE("evaluate on verbatim answers scores ones, empty scores zeros") {
    Room room = ref::make_random_room(77, 12);
    auto items = generate_qa_for_room(room, 3, 2);
    REQUIRE(!items.empty());

    std::vector<Prediction> verbatim;
    for (const QaItem& item : items) verbatim.push_back({item.qa_id, item.answer});
    EvalReport perfect = evaluate(items, verbatim);
    CHECK(perfect.overall == 1.0);
    for (const auto& [category, score] : perfect.per_category)
        CHECK(score.accuracy == 1.0);

    EvalReport blank = evaluate(items, {});
    CHECK(blank.overall == 0.0);
    CHECK(blank.missing == items.size());
    CHECK(blank.total == items.size());
}

TEST_CASE("evaluate matches a hand-scored ten-item fixture") {
    std::vector<QaItem> gold;
    gold.push_back(number_item("n1", 10.0));
    gold.push_back(number_item("n2", 4.0));
    gold.push_back(number_item("n3", 2.0));
    gold.push_back(number_item("n4", 5.0));
    gold.push_back(text_item("t1", "bedroom"));
    gold.push_back(text_item("t2", "kitchen"));
    gold.push_back(binary_item("b1", "yes"));
    gold.push_back(binary_item("b2", "yes"));
    gold.push_back(binary_item("b3", "no"));
    gold.push_back(choice_item("c1", "chair", {"chair", "table", "lamp", "sofa"}));

    std::vector<Prediction> preds = {
        {"n1", "9.5"},      // rel err 0.05 -> 0.9
        {"n2", "4.0"},      // exact -> 1.0
        {"n3", "3.0"},      // rel err 0.5 -> 0.0
        {"n4", "4.0"},      // rel err 0.2 -> passes 0.50..0.25 -> 0.6
        {"t1", "bedroom"},  // 1.0
                            // t2 missing -> 0.0
        {"b1", "YES"},      // 1.0 after case fold
        {"b2", "no"},       // 0.0
        {"b3", "no"},       // 1.0
        {"c1", " chair "},  // 1.0 after trim
    };
    EvalReport report = evaluate(gold, preds);
    // absolute_distance (0.9+1.0+0.0+0.6)/4, room_type (1.0+0.0)/2,
    // contact_relationship (1+0+1)/3, relative_distance 1.0
    CHECK(report.per_category["absolute_distance"].accuracy ==
          doctest::Approx(0.625).epsilon(1e-12));
    CHECK(report.per_category["room_type"].accuracy ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(report.per_category["contact_relationship"].accuracy ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(report.per_category["relative_distance"].accuracy == 1.0);
    double expected_overall = (0.625 + 0.5 + 2.0 / 3.0 + 1.0) / 4.0;
    CHECK(report.overall == doctest::Approx(expected_overall).epsilon(1e-12));
    CHECK(report.missing == 1);
    CHECK(report.total == 10);
}

TEST_CASE("evaluate is permutation invariant and rejects bad ids") {
    std::vector<QaItem> gold = {number_item("a", 1.0), number_item("b", 2.0),
                                text_item("c", "x")};
    std::vector<Prediction> preds = {{"a", "1.0"}, {"b", "9.0"}, {"c", "x"}};

    EvalReport forward = evaluate(gold, preds);
    std::reverse(preds.begin(), preds.end());
    EvalReport backward = evaluate(gold, preds);
    CHECK(forward.overall == backward.overall);

    std::vector<Prediction> duplicated = {{"a", "1.0"}, {"a", "1.0"}};
    CHECK_THROWS_AS(evaluate(gold, duplicated), ValidationError);
    std::vector<Prediction> unknown = {{"zz", "1.0"}};
    CHECK_THROWS_AS(evaluate(gold, unknown), ValidationError);
}

TEST_CASE("unparsable numeric predictions are flagged") {
    std::vector<QaItem> gold = {number_item("a", 1.0)};
    EvalReport report = evaluate(gold, {{"a", "about one"}});
    CHECK(report.unparsable == 1);
    CHECK(report.per_category["absolute_distance"].accuracy == 0.0);
}

TEST_CASE("prediction files parse strings and bare numbers") {
    auto preds = parse_predictions(
        "{\"qa_id\":\"a\",\"value\":\"9.5\"}\n{\"qa_id\":\"b\",\"value\":3.5}\n");
    REQUIRE(preds.size() == 2);
    CHECK(preds[0].value == "9.5");
    CHECK(preds[1].value == "3.5");

    std::string round_trip = predictions_to_jsonl(preds);
    auto again = parse_predictions(round_trip);
    CHECK(again.size() == 2);
    CHECK(again[1].value == "3.5");
}

TEST_CASE("report text has a fixed field order") {
    std::vector<QaItem> gold = {number_item("a", 1.0), text_item("c", "x")};
    EvalReport report = evaluate(gold, {{"a", "1.0"}, {"c", "x"}});
    std::string text = report_to_text(report);
    CHECK(text.find("category count accuracy") == 0);
    CHECK(text.find("absolute_distance 1 1.0000") != std::string::npos);
    CHECK(text.find("room_type 1 1.0000") != std::string::npos);
    CHECK(text.find("overall accuracy 1.0000") != std::string::npos);
    CHECK(text.find("items total 2") != std::string::npos);
}
