#include "scanforge/evaluation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "scanforge/jsonio.hpp"

namespace scanforge {

namespace {

std::string trimmed_lower(const std::string& s) {
    size_t b = 0;
    size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    std::string out = s.substr(b, e - b);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    return out;
}

std::string read_file_or_throw(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

std::optional<double> try_parse_number(const std::string& s) {
    std::string t = trimmed_lower(s);
    if (t.empty()) return std::nullopt;
    try {
        size_t consumed = 0;
        double v = std::stod(t, &consumed);
        if (consumed != t.size()) return std::nullopt;
        if (!std::isfinite(v)) return std::nullopt;
        return v;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

double score_item(const QaItem& gold, const std::string& predicted_value) {
    if (gold.answer_type != AnswerType::number)
        return trimmed_lower(predicted_value) == trimmed_lower(gold.answer) ? 1.0 : 0.0;

    auto pred = try_parse_number(predicted_value);
    if (!pred) return 0.0;
    double denom = std::max(gold.answer_number, 1e-9);
    double rel_err = std::fabs(*pred - gold.answer_number) / denom;
    int passed = 0;
    for (int k = 0; k < 10; ++k) {
        // 1 - theta over theta in {0.50, 0.55, ..., 0.95}; the quotient keeps
        // each tolerance at the correctly rounded decimal (0.50 + 0.05*k
        // drifts an ulp loose at the 0.95 step)
        double tolerance = double(10 - k) / 20.0;
        if (rel_err < tolerance) ++passed;
    }
    return passed / 10.0;
}

EvalReport evaluate(const std::vector<QaItem>& gold,
                    const std::vector<Prediction>& predictions) {
    std::map<std::string, const QaItem*> gold_by_id;
    for (const QaItem& item : gold) {
        if (!gold_by_id.emplace(item.qa_id, &item).second)
            throw ValidationError("qa_id", item.qa_id, "duplicate gold id");
    }

    std::map<std::string, std::string> pred_by_id;
    for (const Prediction& p : predictions) {
        if (gold_by_id.find(p.qa_id) == gold_by_id.end())
            throw ValidationError("qa_id", p.qa_id, "prediction id not in gold set");
        if (!pred_by_id.emplace(p.qa_id, p.value).second)
            throw ValidationError("qa_id", p.qa_id, "duplicate prediction id");
    }

    EvalReport report;
    std::map<std::string, std::pair<double, size_t>> sums;  // category -> (sum, n)
    for (const QaItem& item : gold) {
        auto it = pred_by_id.find(item.qa_id);
        double score = 0.0;
        if (it == pred_by_id.end()) {
            ++report.missing;
        } else {
            score = score_item(item, it->second);
            if (item.answer_type == AnswerType::number &&
                !try_parse_number(it->second))
                ++report.unparsable;
        }
        auto& [sum, n] = sums[to_string(item.category)];
        sum += score;
        ++n;
        ++report.total;
    }

    double overall_sum = 0.0;
    for (const auto& [category, acc] : sums) {
        CategoryScore cs{acc.second, acc.second ? acc.first / double(acc.second) : 0.0};
        report.per_category[category] = cs;
        overall_sum += cs.accuracy;
    }
    report.overall = sums.empty() ? 0.0 : overall_sum / double(sums.size());
    return report;
}

EvalReport evaluate_files(const std::string& gold_path, const std::string& pred_path) {
    std::vector<QaItem> gold = parse_qa_jsonl(read_file_or_throw(gold_path));
    std::vector<Prediction> preds = parse_predictions(read_file_or_throw(pred_path));
    return evaluate(gold, preds);
}

std::vector<Prediction> parse_predictions(const std::string& text) {
    std::vector<Prediction> preds;
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
        Prediction p;
        try {
            p.qa_id = j.at("qa_id").get<std::string>();
            const auto& v = j.at("value");
            if (v.is_string())
                p.value = v.get<std::string>();
            else if (v.is_number())
                p.value = v.dump();
            else
                throw ValidationError("value", p.qa_id, "expected a string or number");
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(e.what(), lineno, 1);
        }
        preds.push_back(std::move(p));
    }
    return preds;
}

std::string predictions_to_jsonl(const std::vector<Prediction>& predictions) {
    std::string out;
    for (const Prediction& p : predictions)
        out += "{\"qa_id\":" + quoted(p.qa_id) + ",\"value\":" + quoted(p.value) + "}\n";
    return out;
}

std::string report_to_text(const EvalReport& report) {
    char buf[64];
    std::string out = "category count accuracy\n";
    for (const auto& [category, score] : report.per_category) {
        std::snprintf(buf, sizeof buf, " %zu %.4f\n", score.count, score.accuracy);
        out += category + buf;
    }
    std::snprintf(buf, sizeof buf, "%.4f\n", report.overall);
    out += "overall accuracy ";
    out += buf;
    out += "items total " + std::to_string(report.total) + "\n";
    out += "items missing_prediction " + std::to_string(report.missing) + "\n";
    out += "items unparsable_numeric " + std::to_string(report.unparsable) + "\n";
    return out;
}

}  // namespace scanforge
