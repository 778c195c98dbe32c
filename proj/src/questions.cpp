#include "vizlit/questions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>

#include <nlohmann/json.hpp>

#include "vizlit/chartgen.hpp"
#include "vizlit/errors.hpp"
#include "vizlit/util.hpp"

namespace vizlit {

namespace {

constexpr std::string_view kTaskNames[] = {"retrieve-value", "find-extremum", "determine-range",
                                           "find-trend",     "make-comparison", "find-anomaly",
                                           "find-cluster",   "identify-hierarchy"};
constexpr std::string_view kDifficultyNames[] = {"easy", "moderate", "hard"};
constexpr std::string_view kPackKindNames[] = {"modified-vlat", "original-vlat", "cqa"};

}  // namespace

std::string_view to_string(TaskType t) { return kTaskNames[static_cast<int>(t)]; }

std::optional<TaskType> task_type_from_string(std::string_view s) {
    for (int i = 0; i < 8; ++i) {
        if (kTaskNames[i] == s) return static_cast<TaskType>(i);
    }
    return std::nullopt;
}

std::string_view to_string(Difficulty d) { return kDifficultyNames[static_cast<int>(d)]; }

std::optional<Difficulty> difficulty_from_string(std::string_view s) {
    for (int i = 0; i < 3; ++i) {
        if (kDifficultyNames[i] == s) return static_cast<Difficulty>(i);
    }
    return std::nullopt;
}

std::string_view to_string(PackKind k) { return kPackKindNames[static_cast<int>(k)]; }

std::optional<PackKind> pack_kind_from_string(std::string_view s) {
    for (int i = 0; i < 3; ++i) {
        if (kPackKindNames[i] == s) return static_cast<PackKind>(i);
    }
    return std::nullopt;
}

void Question::validate() const {
    if (question_id.empty()) throw InvariantViolation("question_id must be non-empty");
    if (chart_id.empty()) throw InvariantViolation(question_id + ": chart_id must be non-empty");
    if (answer_mode == AnswerMode::Choice) {
        if (option_count < 2)
            throw InvariantViolation(question_id + ": option_count must be at least 2");
        const int expected = option_count + (omit_allowed ? 1 : 0);
        if (static_cast<int>(options.size()) != expected)
            throw InvariantViolation(question_id + ": option list size disagrees with option_count");
        if (ground_truth_index < 0 || ground_truth_index >= option_count)
            throw InvariantViolation(question_id + ": ground truth index out of range");
        std::set<std::string> seen;
        for (const auto& o : options) {
            if (!seen.insert(to_lower(trim(o))).second)
                throw InvariantViolation(question_id + ": duplicate option: " + o);
        }
    } else {
        if (!options.empty())
            throw InvariantViolation(question_id + ": numeric questions carry no options");
    }
}

nlohmann::json Question::to_json() const {
    nlohmann::json j;
    j["question_id"] = question_id;
    j["chart_id"] = chart_id;
    j["task_type"] = std::string(to_string(task_type));
    j["difficulty"] = std::string(to_string(difficulty));
    j["text"] = text;
    j["answer_mode"] = answer_mode == AnswerMode::Choice ? "choice" : "numeric";
    if (answer_mode == AnswerMode::Choice) {
        j["options"] = options;
        j["option_count"] = option_count;
        j["ground_truth"] = {{"index", ground_truth_index}};
        j["omit_allowed"] = omit_allowed;
    } else {
        j["ground_truth"] = {{"value", ground_truth_number.value},
                             {"unit", ground_truth_number.unit}};
        if (expected_magnitude != 0.0) j["expected_magnitude"] = expected_magnitude;
    }
    if (!params.empty()) j["params"] = params;
    if (!cqa_category.empty()) j["cqa_category"] = cqa_category;
    if (!cqa_task.empty()) j["cqa_task"] = cqa_task;
    if (!published_answer.empty()) j["published_answer"] = published_answer;
    if (!alignment_slot.empty()) j["alignment_slot"] = alignment_slot;
    if (distinctive_signature) j["distinctive_signature"] = true;
    return j;
}

Question Question::from_json(const nlohmann::json& j) {
    Question q;
    try {
        q.question_id = j.at("question_id").get<std::string>();
        q.chart_id = j.at("chart_id").get<std::string>();
        const auto task = task_type_from_string(j.at("task_type").get<std::string>());
        if (!task) throw SchemaError("unknown task_type in " + q.question_id);
        q.task_type = *task;
        const auto diff = difficulty_from_string(j.at("difficulty").get<std::string>());
        if (!diff) throw SchemaError("unknown difficulty in " + q.question_id);
        q.difficulty = *diff;
        q.text = j.at("text").get<std::string>();
        const auto mode = j.at("answer_mode").get<std::string>();
        if (mode == "choice")
            q.answer_mode = AnswerMode::Choice;
        else if (mode == "numeric")
            q.answer_mode = AnswerMode::Numeric;
        else
            throw SchemaError("unknown answer_mode: " + mode);
        if (q.answer_mode == AnswerMode::Choice) {
            q.options = j.at("options").get<std::vector<std::string>>();
            q.option_count = j.at("option_count").get<int>();
            q.ground_truth_index = j.at("ground_truth").at("index").get<int>();
            q.omit_allowed = j.value("omit_allowed", false);
        } else {
            q.ground_truth_number.value = j.at("ground_truth").at("value").get<double>();
            q.ground_truth_number.unit = j.at("ground_truth").value("unit", "");
            q.expected_magnitude = j.value("expected_magnitude", 0.0);
        }
        if (j.contains("params"))
            q.params = j.at("params").get<std::map<std::string, std::string>>();
        q.cqa_category = j.value("cqa_category", "");
        q.cqa_task = j.value("cqa_task", "");
        q.published_answer = j.value("published_answer", "");
        q.alignment_slot = j.value("alignment_slot", "");
        q.distinctive_signature = j.value("distinctive_signature", false);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("malformed question: ") + e.what());
    }
    return q;
}

const Question* AssessmentPack::find_question(std::string_view id) const {
    for (const auto& q : questions) {
        if (q.question_id == id) return &q;
    }
    return nullptr;
}

const ChartEntry* AssessmentPack::find_chart(std::string_view id) const {
    for (const auto& c : charts) {
        if (c.chart_id == id) return &c;
    }
    return nullptr;
}

std::map<std::string, int> AssessmentPack::difficulty_census() const {
    std::map<std::string, int> out;
    for (const auto& q : questions) out[std::string(to_string(q.difficulty))]++;
    return out;
}

std::map<std::string, int> AssessmentPack::task_census() const {
    std::map<std::string, int> out;
    for (const auto& q : questions) out[std::string(to_string(q.task_type))]++;
    return out;
}

std::map<std::string, int> AssessmentPack::chart_type_census() const {
    std::map<std::string, int> out;
    for (const auto& q : questions) {
        const auto* chart = find_chart(q.chart_id);
        out[chart ? std::string(to_string(chart->chart_type)) : "unknown"]++;
    }
    return out;
}

void AssessmentPack::validate() const {
    if (pack_id.empty()) throw InvariantViolation("pack_id must be non-empty");
    std::set<std::string> chart_ids;
    for (const auto& c : charts) {
        if (!chart_ids.insert(c.chart_id).second)
            throw InvariantViolation("duplicate chart_id: " + c.chart_id);
        if (c.spec) c.spec->validate();
    }
    std::set<std::string> qids;
    std::map<std::string, int> per_chart;
    for (const auto& q : questions) {
        q.validate();
        if (!qids.insert(q.question_id).second)
            throw InvariantViolation("duplicate question_id: " + q.question_id);
        if (!chart_ids.count(q.chart_id))
            throw InvariantViolation(q.question_id + ": unresolved chart_id " + q.chart_id);
        per_chart[q.chart_id]++;
    }

    if (kind == PackKind::ModifiedVlat || kind == PackKind::OriginalVlat) {
        if (questions.size() != 53)
            throw InvariantViolation("vlat pack must carry exactly 53 questions, got " +
                                     std::to_string(questions.size()));
        if (charts.size() != 12)
            throw InvariantViolation("vlat pack must carry exactly 12 charts, got " +
                                     std::to_string(charts.size()));
        for (const auto& [id, n] : per_chart) {
            if (n < 3 || n > 8)
                throw InvariantViolation(id + ": charts carry 3-8 questions, got " +
                                         std::to_string(n));
        }
        const auto census = difficulty_census();
        const auto easy = census.count("easy") ? census.at("easy") : 0;
        const auto moderate = census.count("moderate") ? census.at("moderate") : 0;
        const auto hard = census.count("hard") ? census.at("hard") : 0;
        if (easy != 17 || moderate != 19 || hard != 17)
            throw InvariantViolation("difficulty totals must be 17/19/17, got " +
                                     std::to_string(easy) + "/" + std::to_string(moderate) + "/" +
                                     std::to_string(hard));
    }
    if (kind == PackKind::Cqa) {
        static const std::set<std::string> kCategories = {
            "visual-lookup", "nonvisual-lookup", "visual-compositional", "nonvisual-compositional"};
        static const std::set<std::string> kTasks = {"compute-derived-value", "lookup",
                                                     "find-extrema", "make-comparisons", "multiple"};
        for (const auto& q : questions) {
            if (!kCategories.count(q.cqa_category))
                throw InvariantViolation(q.question_id + ": cqa_category must be one of the four"
                                         " categories, got '" + q.cqa_category + "'");
            if (!kTasks.count(q.cqa_task))
                throw InvariantViolation(q.question_id + ": unknown cqa_task '" + q.cqa_task + "'");
        }
    }
}

std::string AnswerValue::display() const {
    if (kind == Kind::Text) return text;
    std::string s = format_double(number);
    if (unit.empty()) return s;
    if (unit == "%") return s + "%";
    return s + " " + unit;
}

AnswerValue AnswerValue::of_text(std::string t) {
    AnswerValue v;
    v.kind = Kind::Text;
    v.text = std::move(t);
    return v;
}

AnswerValue AnswerValue::of_number(double value, std::string unit) {
    AnswerValue v;
    v.kind = Kind::Number;
    v.number = value;
    v.unit = std::move(unit);
    return v;
}

namespace {

const std::string& param(const Question& q, const std::string& key) {
    const auto it = q.params.find(key);
    if (it == q.params.end())
        throw UnsupportedTask(q.question_id + ": missing oracle parameter '" + key + "'");
    return it->second;
}

double param_number(const Question& q, const std::string& key) {
    return std::strtod(param(q, key).c_str(), nullptr);
}

std::size_t key_column(const Question& q, const DataTable& data) {
    if (q.params.count("key_column")) {
        const auto col = data.find_column(q.params.at("key_column"));
        if (!col) throw UnsupportedTask(q.question_id + ": key column not in table");
        return *col;
    }
    const auto col = data.first_categorical();
    if (!col) throw UnsupportedTask(q.question_id + ": table has no categorical key column");
    return *col;
}

std::size_t row_by_key(const Question& q, const DataTable& data, const std::string& key) {
    const std::size_t kc = key_column(q, data);
    for (std::size_t r = 0; r < data.rows.size(); ++r) {
        if (std::holds_alternative<std::string>(data.rows[r][kc]) &&
            iequals(trim(std::get<std::string>(data.rows[r][kc])), trim(key)))
            return r;
    }
    throw UnsupportedTask(q.question_id + ": no row with key '" + key + "'");
}

// Column resolution: a named column, or "__total__" for the per-row sum of
// all numeric columns.
struct TargetColumn {
    bool total = false;
    std::size_t index = 0;
    std::string unit;
};

TargetColumn target_column(const Question& q, const DataTable& data) {
    TargetColumn t;
    const std::string& name = param(q, "column");
    if (name == "__total__") {
        t.total = true;
        for (const auto& c : data.columns) {
            if (c.kind == ColumnKind::Numeric) t.unit = c.unit;
        }
        return t;
    }
    const auto col = data.find_column(name);
    if (!col) throw UnsupportedTask(q.question_id + ": no column named '" + name + "'");
    t.index = *col;
    t.unit = data.columns[*col].unit;
    return t;
}

double cell_number(const DataTable& data, std::size_t row, const TargetColumn& t) {
    if (t.total) {
        double sum = 0.0;
        for (std::size_t c = 0; c < data.columns.size(); ++c) {
            if (data.columns[c].kind == ColumnKind::Numeric)
                sum += std::get<double>(data.rows[row][c]);
        }
        return sum;
    }
    return std::get<double>(data.rows[row][t.index]);
}

std::vector<double> column_values(const DataTable& data, const TargetColumn& t) {
    std::vector<double> out;
    out.reserve(data.rows.size());
    for (std::size_t r = 0; r < data.rows.size(); ++r) out.push_back(cell_number(data, r, t));
    return out;
}

std::string key_of_row(const Question& q, const DataTable& data, std::size_t row) {
    return std::get<std::string>(data.rows[row][key_column(q, data)]);
}

}  // namespace

AnswerValue answer_oracle(const Question& q, const DataTable& data) {
    switch (q.task_type) {
        case TaskType::RetrieveValue: {
            std::size_t row;
            if (q.params.count("match_column")) {
                // lookup by a unique numeric value instead of a categorical key
                const auto mcol = data.find_column(q.params.at("match_column"));
                if (!mcol) throw UnsupportedTask(q.question_id + ": missing match column");
                const double needle = param_number(q, "match_value");
                std::optional<std::size_t> found;
                for (std::size_t r = 0; r < data.rows.size(); ++r) {
                    if (std::holds_alternative<double>(data.rows[r][*mcol]) &&
                        std::get<double>(data.rows[r][*mcol]) == needle) {
                        if (found) throw UnsupportedTask(q.question_id + ": match value not unique");
                        found = r;
                    }
                }
                if (!found) throw UnsupportedTask(q.question_id + ": match value not in table");
                row = *found;
            } else {
                row = row_by_key(q, data, param(q, "key"));
            }
            const std::string& col_name = param(q, "column");
            if (col_name == "__total__") {
                const auto t = target_column(q, data);
                return AnswerValue::of_number(cell_number(data, row, t), t.unit);
            }
            const auto col = data.find_column(col_name);
            if (!col) throw UnsupportedTask(q.question_id + ": no column '" + col_name + "'");
            if (data.columns[*col].kind == ColumnKind::Categorical)
                return AnswerValue::of_text(std::get<std::string>(data.rows[row][*col]));
            return AnswerValue::of_number(std::get<double>(data.rows[row][*col]),
                                          data.columns[*col].unit);
        }
        case TaskType::FindExtremum: {
            const auto t = target_column(q, data);
            const auto v = column_values(data, t);
            const bool want_min = q.params.count("which") && q.params.at("which") == "min";
            std::size_t best = 0;
            for (std::size_t i = 1; i < v.size(); ++i) {
                if (want_min ? v[i] < v[best] : v[i] > v[best]) best = i;
            }
            const bool return_value = q.params.count("return") && q.params.at("return") == "value";
            if (return_value) return AnswerValue::of_number(v[best], t.unit);
            return AnswerValue::of_text(key_of_row(q, data, best));
        }
        case TaskType::DetermineRange: {
            const auto t = target_column(q, data);
            const auto v = column_values(data, t);
            const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
            return AnswerValue::of_number(*mx - *mn, t.unit);
        }
        case TaskType::FindTrend: {
            if (q.params.count("mode") && q.params.at("mode") == "correlation") {
                const auto xcol = data.find_column(param(q, "x_column"));
                const auto ycol = data.find_column(param(q, "y_column"));
                if (!xcol || !ycol) throw UnsupportedTask(q.question_id + ": missing xy columns");
                const double r =
                    chartgen::stats::pearson_r(data.numeric_column(*xcol), data.numeric_column(*ycol));
                if (r >= 0.5) return AnswerValue::of_text("Positively correlated");
                if (r <= -0.5) return AnswerValue::of_text("Negatively correlated");
                return AnswerValue::of_text("No clear relationship");
            }
            const auto t = target_column(q, data);
            const auto v = column_values(data, t);
            std::vector<double> idx(v.size());
            for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<double>(i);
            const auto fit = chartgen::stats::least_squares(idx, v);
            const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
            const double predicted_delta = fit.slope * static_cast<double>(v.size() - 1);
            if (std::abs(predicted_delta) < 0.05 * (*mx - *mn)) return AnswerValue::of_text("Stable");
            return AnswerValue::of_text(predicted_delta > 0 ? "Increasing" : "Decreasing");
        }
        case TaskType::MakeComparison: {
            const std::string& mode = param(q, "mode");
            if (mode == "pair_gt") {
                const auto t = target_column(q, data);
                const double a = cell_number(data, row_by_key(q, data, param(q, "a")), t);
                const double b = cell_number(data, row_by_key(q, data, param(q, "b")), t);
                return AnswerValue::of_text(a > b ? "True" : "False");
            }
            if (mode == "seg_pair_gt") {
                // two columns compared within one row
                const std::size_t row = row_by_key(q, data, param(q, "key"));
                const auto acol = data.find_column(param(q, "a_column"));
                const auto bcol = data.find_column(param(q, "b_column"));
                if (!acol || !bcol) throw UnsupportedTask(q.question_id + ": missing segment columns");
                const double a = std::get<double>(data.rows[row][*acol]);
                const double b = std::get<double>(data.rows[row][*bcol]);
                return AnswerValue::of_text(a > b ? "True" : "False");
            }
            if (mode == "closest") {
                const auto t = target_column(q, data);
                const std::size_t ref = row_by_key(q, data, param(q, "a"));
                const double ref_v = cell_number(data, ref, t);
                std::size_t best = ref;
                double best_d = 0.0;
                for (std::size_t r = 0; r < data.rows.size(); ++r) {
                    if (r == ref) continue;
                    const double d = std::abs(cell_number(data, r, t) - ref_v);
                    if (best == ref || d < best_d) {
                        best = r;
                        best_d = d;
                    }
                }
                return AnswerValue::of_text(key_of_row(q, data, best));
            }
            if (mode == "diff") {
                const auto t = target_column(q, data);
                const double a = cell_number(data, row_by_key(q, data, param(q, "a")), t);
                const double b = cell_number(data, row_by_key(q, data, param(q, "b")), t);
                return AnswerValue::of_number(a - b, t.unit);
            }
            if (mode == "count_split") {
                const auto col = data.find_column(param(q, "column"));
                if (!col) throw UnsupportedTask(q.question_id + ": missing split column");
                const double threshold = param_number(q, "threshold");
                int below = 0, above = 0;
                for (double v : data.numeric_column(*col)) (v < threshold ? below : above)++;
                return AnswerValue::of_text(below > above ? "True" : "False");
            }
            if (mode == "at_argmax_gt") {
                // value of y at the row maximizing x, compared to a threshold
                const auto xcol = data.find_column(param(q, "x_column"));
                const auto ycol = data.find_column(param(q, "y_column"));
                if (!xcol || !ycol) throw UnsupportedTask(q.question_id + ": missing xy columns");
                const auto xs = data.numeric_column(*xcol);
                const auto ys = data.numeric_column(*ycol);
                std::size_t best = 0;
                for (std::size_t i = 1; i < xs.size(); ++i) {
                    if (xs[i] > xs[best]) best = i;
                }
                return AnswerValue::of_text(ys[best] > param_number(q, "threshold") ? "True"
                                                                                    : "False");
            }
            throw UnsupportedTask(q.question_id + ": unknown comparison mode '" + mode + "'");
        }
        case TaskType::FindAnomaly: {
            const auto xcol = data.find_column(param(q, "x_column"));
            const auto ycol = data.find_column(param(q, "y_column"));
            if (!xcol || !ycol) throw UnsupportedTask(q.question_id + ": missing xy columns");
            const auto xs = data.numeric_column(*xcol);
            const auto ys = data.numeric_column(*ycol);
            const int idx = chartgen::stats::anomaly_index(xs, ys);
            const bool return_x = q.params.count("return") && q.params.at("return") == "x";
            if (return_x)
                return AnswerValue::of_number(xs[static_cast<std::size_t>(idx)],
                                              data.columns[*xcol].unit);
            return AnswerValue::of_text(key_of_row(q, data, static_cast<std::size_t>(idx)));
        }
        case TaskType::FindCluster: {
            const auto xcol = data.find_column(param(q, "x_column"));
            const auto ycol = data.find_column(param(q, "y_column"));
            if (!xcol || !ycol) throw UnsupportedTask(q.question_id + ": missing xy columns");
            const auto summary = chartgen::stats::cluster_summary(data.numeric_column(*xcol),
                                                                  data.numeric_column(*ycol));
            return AnswerValue::of_text(std::to_string(summary.cluster_count));
        }
        case TaskType::IdentifyHierarchy: {
            const std::size_t row = row_by_key(q, data, param(q, "key"));
            const auto col = data.find_column(param(q, "column"));
            if (!col || data.columns[*col].kind != ColumnKind::Categorical)
                throw UnsupportedTask(q.question_id + ": hierarchy needs a categorical group column");
            return AnswerValue::of_text(std::get<std::string>(data.rows[row][*col]));
        }
    }
    throw UnsupportedTask(q.question_id + ": unhandled task type");
}

}  // namespace vizlit
