#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace vizlit {

enum class ChartType {
    Line,
    Bar,
    StackedBar,
    StackedBar100,
    Pie,
    Histogram,
    Scatter,
    Bubble,
    Area,
    StackedArea,
    Choropleth,
    Treemap,
};
inline constexpr int kChartTypeCount = 12;

std::string_view to_string(ChartType t);
std::optional<ChartType> chart_type_from_string(std::string_view s);
std::vector<ChartType> all_chart_types();

struct NamedSeries {
    std::string name;
    std::string unit;
    std::vector<double> values;

    bool operator==(const NamedSeries&) const = default;
};

struct AxisLabel {
    std::string text;
    std::string unit;

    bool operator==(const AxisLabel&) const = default;
};

struct RenderParams {
    int width = 1000;
    int height = 700;
    std::string palette_id = "field12";

    bool operator==(const RenderParams&) const = default;
};

// One synthesized chart: data, encodings and render parameters. Serializes to
// canonical JSON (sorted keys, shortest round-trip floats) so identical specs
// produce identical bytes.
struct ChartSpec {
    std::string chart_id;
    ChartType chart_type = ChartType::Line;
    std::string title;
    AxisLabel x_axis;
    AxisLabel y_axis;
    std::vector<std::string> categories;  // x tick labels / slice, region, leaf names
    std::vector<std::string> groups;      // treemap: parent of each leaf; empty otherwise
    std::vector<NamedSeries> series;
    std::uint64_t seed = 0;
    RenderParams render_params;

    bool operator==(const ChartSpec&) const = default;

    void validate() const;  // throws InvariantViolation
    nlohmann::json to_json() const;
    std::string to_canonical_json() const;
    static ChartSpec from_json(const nlohmann::json& j);
};

enum class ColumnKind { Categorical, Numeric };

struct Column {
    std::string name;
    std::string unit;
    ColumnKind kind = ColumnKind::Numeric;

    bool operator==(const Column&) const = default;
};

using Cell = std::variant<std::string, double>;

// Tabular ground truth behind a chart. The canonical textual form is a
// markdown pipe table; to_markdown/parse round-trip losslessly.
struct DataTable {
    std::vector<Column> columns;
    std::vector<std::vector<Cell>> rows;

    bool operator==(const DataTable&) const = default;

    void validate() const;  // row arity == column arity
    std::string to_markdown() const;
    nlohmann::json to_json() const;
    static DataTable from_json(const nlohmann::json& j);

    std::optional<std::size_t> find_column(std::string_view name) const;
    std::optional<std::size_t> first_categorical() const;
    std::vector<double> numeric_column(std::size_t col) const;
};

enum class ConstraintKind { Trend, Correlation, Cluster, Anomaly, ExtremumGap, RangeGap };

std::string_view to_string(ConstraintKind k);
std::optional<ConstraintKind> constraint_kind_from_string(std::string_view s);

// Numeric feasibility condition a synthesized chart must satisfy so the task
// asked about it stays answerable. Thresholds are fixed here, not tunable at
// question level.
struct FeasibilityConstraint {
    ConstraintKind kind = ConstraintKind::RangeGap;

    std::string series_name;          // target series; empty = chart's primary vector
    int direction = +1;               // trend/correlation sign: +1 or -1
    double max_noise_frac = 0.15;     // trend: residual ceiling as fraction of value range
    double min_abs_r = 0.7;           // correlation: |Pearson r| floor
    int cluster_count = 3;            // cluster: number of blobs
    double min_separation_ratio = 4.0;  // cluster: centroid gap / within-cluster sd
    double anomaly_sigma = 3.0;       // anomaly: residual threshold in robust sd units
    double min_gap_frac = 0.10;       // extremum/range gap as fraction of value range

    bool operator==(const FeasibilityConstraint&) const = default;

    static FeasibilityConstraint trend(int dir, double noise_frac = 0.15);
    static FeasibilityConstraint correlation(int sign, double min_abs = 0.7);
    static FeasibilityConstraint cluster(int count, double separation = 4.0);
    static FeasibilityConstraint anomaly(double sigma = 3.0);
    static FeasibilityConstraint extremum_gap(double gap_frac = 0.10);
    static FeasibilityConstraint range_gap(double gap_frac = 0.10);

    nlohmann::json to_json() const;
    static FeasibilityConstraint from_json(const nlohmann::json& j);
};

struct ConstraintCheck {
    FeasibilityConstraint constraint;
    bool pass = false;
    double measured = 0.0;
    std::string note;
};

}  // namespace vizlit
