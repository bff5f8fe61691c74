#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scanforge/qa.hpp"

namespace scanforge {

struct Prediction {
    std::string qa_id;
    std::string value;
};

struct CategoryScore {
    size_t count = 0;
    double accuracy = 0.0;
};

struct EvalReport {
    std::map<std::string, CategoryScore> per_category;
    double overall = 0.0;  // unweighted mean over categories present
    size_t total = 0;
    size_t missing = 0;     // gold items without a prediction
    size_t unparsable = 0;  // numeric items whose prediction failed to parse
};

std::optional<double> try_parse_number(const std::string& s);

// choice/binary/text: trimmed case-insensitive match, 0 or 1.
// number: mean over theta in {0.50, 0.55, ..., 0.95} of
//         [ |pred - gold| / max(gold, 1e-9) < 1 - theta ].
double score_item(const QaItem& gold, const std::string& predicted_value);

EvalReport evaluate(const std::vector<QaItem>& gold,
                    const std::vector<Prediction>& predictions);

EvalReport evaluate_files(const std::string& gold_path, const std::string& pred_path);

std::vector<Prediction> parse_predictions(const std::string& text);
std::string predictions_to_jsonl(const std::vector<Prediction>& predictions);

std::string report_to_text(const EvalReport& report);

}  // namespace scanforge
