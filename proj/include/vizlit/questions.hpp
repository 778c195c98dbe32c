#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "vizlit/chart_types.hpp"

namespace vizlit {

enum class TaskType {
    RetrieveValue,
    FindExtremum,
    DetermineRange,
    FindTrend,
    MakeComparison,
    FindAnomaly,
    FindCluster,
    IdentifyHierarchy,
};
std::string_view to_string(TaskType t);
std::optional<TaskType> task_type_from_string(std::string_view s);

enum class Difficulty { Easy, Moderate, Hard };
std::string_view to_string(Difficulty d);
std::optional<Difficulty> difficulty_from_string(std::string_view s);

enum class AnswerMode { Choice, Numeric };

enum class PackKind { ModifiedVlat, OriginalVlat, Cqa };
std::string_view to_string(PackKind k);
std::optional<PackKind> pack_kind_from_string(std::string_view s);

struct NumericAnswer {
    double value = 0.0;
    std::string unit;
    bool operator==(const NumericAnswer&) const = default;
};

// One assessment item. For choice mode, `options` may end with a selectable
// "Omit" entry; option_count counts only the real options, and the omit entry
// (when present) sits at index option_count.
struct Question {
    std::string question_id;
    std::string chart_id;
    TaskType task_type = TaskType::RetrieveValue;
    Difficulty difficulty = Difficulty::Easy;
    std::string text;
    AnswerMode answer_mode = AnswerMode::Choice;
    std::vector<std::string> options;
    int option_count = 0;
    int ground_truth_index = -1;
    NumericAnswer ground_truth_number;
    bool omit_allowed = false;
    std::map<std::string, std::string> params;  // oracle/task parameters

    // CQA packs only
    std::string cqa_category;
    std::string cqa_task;
    double expected_magnitude = 0.0;

    // original-material packs only
    std::string published_answer;
    std::string alignment_slot;
    bool distinctive_signature = false;

    bool operator==(const Question&) const = default;

    bool has_omit() const { return omit_allowed && static_cast<int>(options.size()) > option_count; }
    int omit_index() const { return option_count; }

    void validate() const;
    nlohmann::json to_json() const;
    static Question from_json(const nlohmann::json& j);
};

struct ChartEntry {
    std::string chart_id;
    ChartType chart_type = ChartType::Line;
    std::optional<ChartSpec> spec;   // generated packs carry the full spec
    std::string image_svg;           // relative to the pack directory
    std::string image_png;
    DataTable table;
    bool has_table = false;
    std::vector<std::string> question_ids;

    bool operator==(const ChartEntry&) const = default;
};

struct AssessmentPack {
    std::string pack_id;
    PackKind kind = PackKind::ModifiedVlat;
    std::uint64_t seed = 0;
    std::vector<ChartEntry> charts;
    std::vector<Question> questions;
    std::filesystem::path base_dir;  // set by load_pack for asset resolution

    const Question* find_question(std::string_view id) const;
    const ChartEntry* find_chart(std::string_view id) const;

    std::map<std::string, int> difficulty_census() const;
    std::map<std::string, int> task_census() const;
    std::map<std::string, int> chart_type_census() const;

    void validate() const;  // throws InvariantViolation
    nlohmann::json to_json() const;
    static AssessmentPack from_json(const nlohmann::json& j);
};

struct AnswerValue {
    enum class Kind { Text, Number };
    Kind kind = Kind::Text;
    std::string text;
    double number = 0.0;
    std::string unit;

    std::string display() const;
    static AnswerValue of_text(std::string t);
    static AnswerValue of_number(double v, std::string unit);
};

// Recomputes the ground truth for a question from the chart's data table
// alone; never looks at pixels. Throws UnsupportedTask for combinations
// outside the bank's repertoire.
AnswerValue answer_oracle(const Question& q, const DataTable& data);

// Builds the full 53-item randomized assessment over 12 fresh charts.
// Deterministic in seed. Only the modified-vlat kind is generated; original
// and CQA packs are external materials loaded from disk.
AssessmentPack instantiate_pack(PackKind kind, std::uint64_t seed,
                                const RenderParams& render_params = {});

// Reads and validates a pack directory (pack.json plus referenced images).
AssessmentPack load_pack(const std::filesystem::path& dir);

// Writes pack.json and renders every chart image into `dir`. Byte
// deterministic for a given pack.
void write_pack(AssessmentPack& pack, const std::filesystem::path& dir);

}  // namespace vizlit
