#include "vizlit/chart_types.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "vizlit/errors.hpp"
#include "vizlit/util.hpp"

namespace vizlit {

namespace {

constexpr std::string_view kChartTypeNames[kChartTypeCount] = {
    "line",    "bar",     "stacked-bar", "stacked-bar-100", "pie",          "histogram",
    "scatter", "bubble",  "area",        "stacked-area",    "choropleth",   "treemap"};

constexpr std::string_view kConstraintNames[] = {"trend",   "correlation",  "cluster",
                                                 "anomaly", "extremum-gap", "range-gap"};

}  // namespace

std::string_view to_string(ChartType t) { return kChartTypeNames[static_cast<int>(t)]; }

std::optional<ChartType> chart_type_from_string(std::string_view s) {
    for (int i = 0; i < kChartTypeCount; ++i) {
        if (kChartTypeNames[i] == s) return static_cast<ChartType>(i);
    }
    return std::nullopt;
}

std::vector<ChartType> all_chart_types() {
    std::vector<ChartType> out;
    out.reserve(kChartTypeCount);
    for (int i = 0; i < kChartTypeCount; ++i) out.push_back(static_cast<ChartType>(i));
    return out;
}

std::string_view to_string(ConstraintKind k) { return kConstraintNames[static_cast<int>(k)]; }

std::optional<ConstraintKind> constraint_kind_from_string(std::string_view s) {
    for (int i = 0; i < 6; ++i) {
        if (kConstraintNames[i] == s) return static_cast<ConstraintKind>(i);
    }
    return std::nullopt;
}

void ChartSpec::validate() const {
    if (chart_id.empty()) throw InvariantViolation("chart_id must be non-empty");
    if (series.empty()) throw InvariantViolation(chart_id + ": chart has no series");
    for (const auto& s : series) {
        for (double v : s.values) {
            if (!std::isfinite(v))
                throw InvariantViolation(chart_id + ": non-finite value in series " + s.name);
        }
    }
    const auto n_points = series.front().values.size();
    for (const auto& s : series) {
        if (s.values.size() != n_points)
            throw InvariantViolation(chart_id + ": ragged series lengths");
    }
    if (!categories.empty() && categories.size() != n_points)
        throw InvariantViolation(chart_id + ": category count differs from series length");

    if (chart_type == ChartType::Pie) {
        double sum = 0.0;
        for (double v : series.front().values) {
            if (v <= 0.0) throw InvariantViolation(chart_id + ": pie slice must be positive");
            sum += v;
        }
        if (std::abs(sum - 100.0) > 1e-9 * 100.0)
            throw InvariantViolation(chart_id + ": pie shares must sum to 100");
    }
    if (chart_type == ChartType::StackedBar100) {
        for (std::size_t i = 0; i < n_points; ++i) {
            double sum = 0.0;
            for (const auto& s : series) sum += s.values[i];
            if (std::abs(sum - 100.0) > 1e-9 * 100.0)
                throw InvariantViolation(chart_id + ": stacked-bar-100 shares must sum to 100");
        }
    }
    if (chart_type == ChartType::Treemap && groups.size() != n_points)
        throw InvariantViolation(chart_id + ": treemap needs a parent group per leaf");
}

nlohmann::json ChartSpec::to_json() const {
    nlohmann::json j;
    j["chart_id"] = chart_id;
    j["chart_type"] = std::string(to_string(chart_type));
    j["title"] = title;
    j["x_axis"] = {{"text", x_axis.text}, {"unit", x_axis.unit}};
    j["y_axis"] = {{"text", y_axis.text}, {"unit", y_axis.unit}};
    j["categories"] = categories;
    j["groups"] = groups;
    nlohmann::json series_json = nlohmann::json::array();
    for (const auto& s : series) {
        series_json.push_back({{"name", s.name}, {"unit", s.unit}, {"values", s.values}});
    }
    j["series"] = series_json;
    j["seed"] = seed;
    j["render_params"] = {{"width", render_params.width},
                          {"height", render_params.height},
                          {"palette_id", render_params.palette_id}};
    return j;
}

std::string ChartSpec::to_canonical_json() const { return to_json().dump(2); }

ChartSpec ChartSpec::from_json(const nlohmann::json& j) {
    ChartSpec spec;
    try {
        spec.chart_id = j.at("chart_id").get<std::string>();
        const auto type_name = j.at("chart_type").get<std::string>();
        const auto type = chart_type_from_string(type_name);
        if (!type) throw SchemaError("unknown chart_type: " + type_name);
        spec.chart_type = *type;
        spec.title = j.at("title").get<std::string>();
        spec.x_axis = {j.at("x_axis").at("text").get<std::string>(),
                       j.at("x_axis").at("unit").get<std::string>()};
        spec.y_axis = {j.at("y_axis").at("text").get<std::string>(),
                       j.at("y_axis").at("unit").get<std::string>()};
        spec.categories = j.at("categories").get<std::vector<std::string>>();
        spec.groups = j.at("groups").get<std::vector<std::string>>();
        for (const auto& s : j.at("series")) {
            NamedSeries ns;
            ns.name = s.at("name").get<std::string>();
            ns.unit = s.at("unit").get<std::string>();
            ns.values = s.at("values").get<std::vector<double>>();
            spec.series.push_back(std::move(ns));
        }
        spec.seed = j.at("seed").get<std::uint64_t>();
        const auto& rp = j.at("render_params");
        spec.render_params.width = rp.at("width").get<int>();
        spec.render_params.height = rp.at("height").get<int>();
        spec.render_params.palette_id = rp.at("palette_id").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("malformed chart spec: ") + e.what());
    }
    return spec;
}

void DataTable::validate() const {
    for (const auto& row : rows) {
        if (row.size() != columns.size())
            throw InvariantViolation("table row arity differs from column arity");
    }
}

std::string DataTable::to_markdown() const {
    std::ostringstream out;
    out << "|";
    for (const auto& col : columns) {
        out << " " << col.name;
        if (!col.unit.empty()) out << " (" << col.unit << ")";
        out << " |";
    }
    out << "\n|";
    for (std::size_t i = 0; i < columns.size(); ++i) out << " --- |";
    out << "\n";
    for (const auto& row : rows) {
        out << "|";
        for (const auto& cell : row) {
            if (std::holds_alternative<double>(cell)) {
                out << " " << format_double(std::get<double>(cell)) << " |";
            } else {
                out << " " << std::get<std::string>(cell) << " |";
            }
        }
        out << "\n";
    }
    return out.str();
}

nlohmann::json DataTable::to_json() const {
    nlohmann::json j;
    nlohmann::json cols = nlohmann::json::array();
    for (const auto& c : columns) {
        cols.push_back({{"name", c.name},
                        {"unit", c.unit},
                        {"kind", c.kind == ColumnKind::Numeric ? "numeric" : "categorical"}});
    }
    j["columns"] = cols;
    nlohmann::json rows_json = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json r = nlohmann::json::array();
        for (const auto& cell : row) {
            if (std::holds_alternative<double>(cell))
                r.push_back(std::get<double>(cell));
            else
                r.push_back(std::get<std::string>(cell));
        }
        rows_json.push_back(std::move(r));
    }
    j["rows"] = rows_json;
    return j;
}

DataTable DataTable::from_json(const nlohmann::json& j) {
    DataTable t;
    try {
        for (const auto& c : j.at("columns")) {
            Column col;
            col.name = c.at("name").get<std::string>();
            col.unit = c.at("unit").get<std::string>();
            const auto kind = c.at("kind").get<std::string>();
            if (kind == "numeric")
                col.kind = ColumnKind::Numeric;
            else if (kind == "categorical")
                col.kind = ColumnKind::Categorical;
            else
                throw SchemaError("unknown column kind: " + kind);
            t.columns.push_back(std::move(col));
        }
        for (const auto& r : j.at("rows")) {
            std::vector<Cell> row;
            for (const auto& cell : r) {
                if (cell.is_number())
                    row.emplace_back(cell.get<double>());
                else
                    row.emplace_back(cell.get<std::string>());
            }
            t.rows.push_back(std::move(row));
        }
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("malformed data table: ") + e.what());
    }
    t.validate();
    return t;
}

std::optional<std::size_t> DataTable::find_column(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (iequals(columns[i].name, name)) return i;
    }
    return std::nullopt;
}

std::optional<std::size_t> DataTable::first_categorical() const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i].kind == ColumnKind::Categorical) return i;
    }
    return std::nullopt;
}

std::vector<double> DataTable::numeric_column(std::size_t col) const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        if (std::holds_alternative<double>(row[col])) out.push_back(std::get<double>(row[col]));
    }
    return out;
}

FeasibilityConstraint FeasibilityConstraint::trend(int dir, double noise_frac) {
    FeasibilityConstraint c;
    c.kind = ConstraintKind::Trend;
    c.direction = dir;
    c.max_noise_frac = noise_frac;
    return c;
}

FeasibilityConstraint FeasibilityConstraint::correlation(int sign, double min_abs) {
    FeasibilityConstraint c;
    c.kind = ConstraintKind::Correlation;
    c.direction = sign;
    c.min_abs_r = min_abs;
    return c;
}

FeasibilityConstraint FeasibilityConstraint::cluster(int count, double separation) {
    FeasibilityConstraint c;
    c.kind = ConstraintKind::Cluster;
    c.cluster_count = count;
    c.min_separation_ratio = separation;
    return c;
}

FeasibilityConstraint FeasibilityConstraint::anomaly(double sigma) {
    FeasibilityConstraint c;
    c.kind = ConstraintKind::Anomaly;
    c.anomaly_sigma = sigma;
    return c;
}

FeasibilityConstraint FeasibilityConstraint::extremum_gap(double gap_frac) {
    FeasibilityConstraint c;
    c.kind = ConstraintKind::ExtremumGap;
    c.min_gap_frac = gap_frac;
    return c;
}

FeasibilityConstraint FeasibilityConstraint::range_gap(double gap_frac) {
    FeasibilityConstraint c;
    c.kind = ConstraintKind::RangeGap;
    c.min_gap_frac = gap_frac;
    return c;
}

nlohmann::json FeasibilityConstraint::to_json() const {
    nlohmann::json j;
    j["kind"] = std::string(to_string(kind));
    if (!series_name.empty()) j["series"] = series_name;
    switch (kind) {
        case ConstraintKind::Trend:
            j["direction"] = direction;
            j["max_noise_frac"] = max_noise_frac;
            break;
        case ConstraintKind::Correlation:
            j["direction"] = direction;
            j["min_abs_r"] = min_abs_r;
            break;
        case ConstraintKind::Cluster:
            j["cluster_count"] = cluster_count;
            j["min_separation_ratio"] = min_separation_ratio;
            break;
        case ConstraintKind::Anomaly:
            j["anomaly_sigma"] = anomaly_sigma;
            break;
        case ConstraintKind::ExtremumGap:
        case ConstraintKind::RangeGap:
            j["min_gap_frac"] = min_gap_frac;
            break;
    }
    return j;
}

FeasibilityConstraint FeasibilityConstraint::from_json(const nlohmann::json& j) {
    FeasibilityConstraint c;
    const auto kind_name = j.at("kind").get<std::string>();
    const auto kind = constraint_kind_from_string(kind_name);
    if (!kind) throw SchemaError("unknown constraint kind: " + kind_name);
    c.kind = *kind;
    if (j.contains("series")) c.series_name = j.at("series").get<std::string>();
    if (j.contains("direction")) c.direction = j.at("direction").get<int>();
    if (j.contains("max_noise_frac")) c.max_noise_frac = j.at("max_noise_frac").get<double>();
    if (j.contains("min_abs_r")) c.min_abs_r = j.at("min_abs_r").get<double>();
    if (j.contains("cluster_count")) c.cluster_count = j.at("cluster_count").get<int>();
    if (j.contains("min_separation_ratio"))
        c.min_separation_ratio = j.at("min_separation_ratio").get<double>();
    if (j.contains("anomaly_sigma")) c.anomaly_sigma = j.at("anomaly_sigma").get<double>();
    if (j.contains("min_gap_frac")) c.min_gap_frac = j.at("min_gap_frac").get<double>();
    return c;
}

}  // namespace vizlit
