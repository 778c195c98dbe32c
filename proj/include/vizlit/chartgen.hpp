#pragma once

#include <cstdint>
#include <vector>

#include "vizlit/chart_types.hpp"

namespace vizlit::chartgen {

// Synthesizes one chart of the given type with randomized data satisfying
// every constraint. Pure function of its arguments: identical inputs yield a
// bit-identical spec. Rejection-samples fresh candidates until all
// constraints hold; throws ConstraintInfeasible after 10,000 attempts.
ChartSpec synthesize(ChartType type, std::uint64_t seed,
                     const std::vector<FeasibilityConstraint>& constraints,
                     const RenderParams& render_params = {});

// Evaluates each constraint against the spec's data. Failures are results,
// not errors.
std::vector<ConstraintCheck> check_constraints(const ChartSpec& spec,
                                               const std::vector<FeasibilityConstraint>& constraints);

// The table a perfect reader would extract from the chart. Numeric cells are
// exactly the series values (a bijection), so this doubles as the ground
// truth for question oracles and the mock model.
DataTable extract_table(const ChartSpec& spec);

// Column totals for stacked charts; series[0] values otherwise.
std::vector<double> primary_values(const ChartSpec& spec);

// Resolves a constraint's target vector: named series, or primary_values when
// the name is empty.
std::vector<double> constraint_target(const ChartSpec& spec, const std::string& series_name);

// Choropleth bin edges and labels are fixed so bin membership is a pure
// function of the value.
std::string choropleth_bin_label(double rate);
const std::vector<double>& choropleth_bin_edges();

namespace stats {

// Implementation-side statistics. Tests verify against independently written
// textbook versions.
double mean(const std::vector<double>& v);
double pearson_r(const std::vector<double>& x, const std::vector<double>& y);
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};
LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);
LinearFit theil_sen(const std::vector<double>& x, const std::vector<double>& y);
double median(std::vector<double> v);

// Residuals of y against a robust (Theil-Sen) fit, and the count of points at
// or beyond `sigma` robust standard deviations (1.4826 * MAD).
std::vector<double> robust_residuals(const std::vector<double>& x, const std::vector<double>& y);
int anomaly_count(const std::vector<double>& x, const std::vector<double>& y, double sigma);
int anomaly_index(const std::vector<double>& x, const std::vector<double>& y);

// Single-linkage clustering on z-scored (x, y); the dendrogram is cut at the
// largest ratio between consecutive merge distances. A cluster is a linkage
// group with at least two members, so a lone outlier does not inflate the
// count.
struct ClusterSummary {
    int cluster_count = 0;             // groups with >= 2 points
    double min_centroid_separation = 0.0;
    double max_within_sd = 0.0;
    std::vector<int> assignment;       // group id per point
};
ClusterSummary cluster_summary(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace stats

}  // namespace vizlit::chartgen
