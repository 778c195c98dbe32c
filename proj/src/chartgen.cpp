#include "vizlit/chartgen.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "vizlit/errors.hpp"
#include "vizlit/rng.hpp"
#include "vizlit/util.hpp"

namespace vizlit::chartgen {

namespace stats {

double mean(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double pearson_r(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) return 0.0;
    const double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    LinearFit fit;
    if (n < 2) return fit;
    const double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    fit.slope = (sxx == 0.0) ? 0.0 : sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    return fit;
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

LinearFit theil_sen(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    LinearFit fit;
    if (n < 2) return fit;
    std::vector<double> slopes;
    slopes.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (x[j] != x[i]) slopes.push_back((y[j] - y[i]) / (x[j] - x[i]));
        }
    }
    fit.slope = median(slopes);
    std::vector<double> residual_intercepts(n);
    for (std::size_t i = 0; i < n; ++i) residual_intercepts[i] = y[i] - fit.slope * x[i];
    fit.intercept = median(residual_intercepts);
    return fit;
}

std::vector<double> robust_residuals(const std::vector<double>& x, const std::vector<double>& y) {
    const LinearFit fit = theil_sen(x, y);
    std::vector<double> res(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) res[i] = y[i] - (fit.intercept + fit.slope * x[i]);
    return res;
}

namespace {
double robust_sigma(const std::vector<double>& residuals) {
    std::vector<double> abs_dev(residuals.size());
    const double med = median(residuals);
    for (std::size_t i = 0; i < residuals.size(); ++i) abs_dev[i] = std::abs(residuals[i] - med);
    return 1.4826 * median(abs_dev);
}
}  // namespace

int anomaly_count(const std::vector<double>& x, const std::vector<double>& y, double sigma) {
    const auto res = robust_residuals(x, y);
    const double rs = robust_sigma(res);
    if (rs == 0.0) return 0;
    int count = 0;
    for (double r : res) {
        if (std::abs(r) >= sigma * rs) ++count;
    }
    return count;
}

int anomaly_index(const std::vector<double>& x, const std::vector<double>& y) {
    const auto res = robust_residuals(x, y);
    int best = 0;
    for (std::size_t i = 1; i < res.size(); ++i) {
        if (std::abs(res[i]) > std::abs(res[best])) best = static_cast<int>(i);
    }
    return best;
}

ClusterSummary cluster_summary(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    ClusterSummary out;
    if (n < 2) return out;

    // z-score both axes so unit scales do not dominate the metric
    auto zscore = [](const std::vector<double>& v) {
        const double m = mean(v);
        double ss = 0.0;
        for (double e : v) ss += (e - m) * (e - m);
        const double sd = std::sqrt(ss / static_cast<double>(v.size()));
        std::vector<double> z(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) z[i] = (sd == 0.0) ? 0.0 : (v[i] - m) / sd;
        return z;
    };
    const auto zx = zscore(x), zy = zscore(y);

    // single-linkage merge distances are exactly the MST edge weights in
    // ascending order, so Kruskal over the sorted edge list gives the
    // dendrogram directly
    struct Edge {
        double d;
        int i, j;
    };
    std::vector<Edge> edges;
    edges.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = zx[i] - zx[j], dy = zy[i] - zy[j];
            edges.push_back({std::sqrt(dx * dx + dy * dy), static_cast<int>(i), static_cast<int>(j)});
        }
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.d < b.d; });

    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    std::vector<double> merge_distances;
    merge_distances.reserve(n - 1);
    for (const auto& e : edges) {
        const int ri = find(e.i), rj = find(e.j);
        if (ri != rj) {
            parent[rj] = ri;
            merge_distances.push_back(e.d);
        }
    }

    // cut at the largest ratio jump between consecutive merge distances; a
    // flat cloud without a pronounced jump stays one group. The denominator is
    // floored at 5% of the largest merge so coincident points cannot fake a
    // jump at the bottom of the dendrogram.
    std::size_t cut = merge_distances.size();
    const double floor_d = 0.05 * merge_distances.back();
    double best_ratio = 2.0;
    for (std::size_t i = 0; i + 1 < merge_distances.size(); ++i) {
        const double lo = std::max(merge_distances[i], floor_d);
        const double ratio = merge_distances[i + 1] / lo;
        if (ratio >= best_ratio) {
            best_ratio = ratio;
            cut = i + 1;  // merges [0, cut) are within-group
        }
    }

    // regroup performing only the first `cut` merges
    std::iota(parent.begin(), parent.end(), 0);
    std::size_t merges_done = 0;
    for (const auto& e : edges) {
        if (merges_done == cut) break;
        const int ri = find(e.i), rj = find(e.j);
        if (ri != rj) {
            parent[rj] = ri;
            ++merges_done;
        }
    }

    std::vector<int> roots;
    out.assignment.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int root = find(static_cast<int>(i));
        auto it = std::find(roots.begin(), roots.end(), root);
        if (it == roots.end()) {
            roots.push_back(root);
            it = roots.end() - 1;
        }
        out.assignment[i] = static_cast<int>(it - roots.begin());
    }

    // centroid separation and within-group spread over groups >= 2; spread is
    // a robust sigma (median point-to-centroid distance / Rayleigh median) so
    // one adopted outlier cannot mask a clean separation
    struct Group {
        double cx = 0.0, cy = 0.0;
        std::vector<int> pts;
    };
    std::vector<Group> groups(roots.size());
    for (std::size_t i = 0; i < n; ++i) {
        auto& g = groups[static_cast<std::size_t>(out.assignment[i])];
        g.pts.push_back(static_cast<int>(i));
        g.cx += zx[i];
        g.cy += zy[i];
    }
    std::vector<Group> real;
    for (auto& g : groups) {
        g.cx /= static_cast<double>(g.pts.size());
        g.cy /= static_cast<double>(g.pts.size());
        if (g.pts.size() >= 2) real.push_back(g);
    }
    out.cluster_count = static_cast<int>(real.size());
    double min_sep = std::numeric_limits<double>::max();
    double max_sd = 0.0;
    constexpr double kRayleighMedian = 1.17741;  // median of Rayleigh(sigma=1)
    for (std::size_t a = 0; a < real.size(); ++a) {
        std::vector<double> dists;
        dists.reserve(real[a].pts.size());
        for (int p : real[a].pts) {
            const double dx = zx[p] - real[a].cx, dy = zy[p] - real[a].cy;
            dists.push_back(std::sqrt(dx * dx + dy * dy));
        }
        max_sd = std::max(max_sd, median(dists) / kRayleighMedian);
        for (std::size_t b = a + 1; b < real.size(); ++b) {
            const double dx = real[a].cx - real[b].cx, dy = real[a].cy - real[b].cy;
            min_sep = std::min(min_sep, std::sqrt(dx * dx + dy * dy));
        }
    }
    out.min_centroid_separation = (real.size() >= 2) ? min_sep : 0.0;
    out.max_within_sd = max_sd;
    return out;
}

}  // namespace stats

namespace {

constexpr const char* kMonths[12] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                     "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

constexpr const char* kDistricts[7] = {"Brookfield", "Eastgate", "Kingsmoor", "Larkspur",
                                       "Midtown",    "Northquay", "Westhollow"};

constexpr const char* kBranches[6] = {"Arlen", "Corvale", "Davenwood",
                                      "Ferris", "Lunden",  "Selwick"};
constexpr const char* kProductLines[3] = {"Apparel", "Grocery", "Home Goods"};

constexpr const char* kCountries[5] = {"Avaria", "Brenna", "Corvia", "Dalmara", "Elvona"};
constexpr const char* kEnergySources[4] = {"Coal", "Gas", "Nuclear", "Renewables"};

constexpr const char* kVendors[5] = {"Apexa", "BluWave", "Corix", "Dynet", "Orbion"};

constexpr const char* kCities[12] = {"Aldermere", "Bexley",   "Castra",   "Dunmore",
                                     "Elsinore",  "Farholt",  "Gildan",   "Haverton",
                                     "Ironvale",  "Jutland",  "Kester",   "Lowpoint"};

constexpr const char* kPlatforms[3] = {"Mobile", "Desktop", "Tablet"};

constexpr const char* kProvinces[12] = {"Ashford",  "Bellmoor", "Caldera",  "Dray",
                                        "Everly",   "Fenwick",  "Glenrose", "Hartwell",
                                        "Islington", "Juniper",  "Kelso",    "Larkin"};

constexpr const char* kDepartments[3] = {"Engineering", "Marketing", "Operations"};
constexpr const char* kProjects[9] = {"Atlas",  "Borealis", "Cascade", "Drift",  "Ember",
                                      "Fjord",  "Granite",  "Harbor",  "Icarus"};

double sig3(double v) { return round_sig(v, 3); }

// Composition of `total_units` half-steps into k parts, each at least
// `min_units`. Exact integer arithmetic keeps every share on the 0.5 grid so
// the 100% sums stay exact in binary.
std::vector<double> random_shares(Rng& rng, int parts, int total_units, int min_units) {
    std::vector<int> units(parts, min_units);
    int remaining = total_units - min_units * parts;
    for (int i = 0; i + 1 < parts; ++i) {
        const int take = static_cast<int>(rng.uniform_u64(static_cast<std::uint64_t>(remaining + 1)));
        units[i] += take;
        remaining -= take;
    }
    units[parts - 1] += remaining;
    std::vector<int> order(units.begin(), units.end());
    rng.shuffle(order);
    std::vector<double> shares(parts);
    for (int i = 0; i < parts; ++i) shares[i] = order[i] * 0.5;
    return shares;
}

std::vector<double> trending_values(Rng& rng, int n, int direction, double base_lo, double base_hi,
                                    double rise_lo, double rise_hi, double noise_scale) {
    const double start = rng.uniform(base_lo, base_hi);
    const double rise = rng.uniform(rise_lo, rise_hi) * direction;
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / (n - 1);
        v[i] = sig3(start + rise * t + rng.uniform(-noise_scale, noise_scale) * std::abs(rise));
    }
    return v;
}

ChartSpec gen_line(Rng& rng, std::uint64_t seed, int direction) {
    ChartSpec spec;
    spec.chart_type = ChartType::Line;
    spec.chart_id = "line-chart";
    spec.title = "Average Daily Temperature in Ravencrest";
    spec.x_axis = {"Month", ""};
    spec.y_axis = {"Temperature", "°C"};
    spec.categories.assign(std::begin(kMonths), std::end(kMonths));
    const double lo = direction > 0 ? 4.0 : 18.0;
    const double hi = direction > 0 ? 12.0 : 26.0;
    spec.series.push_back(
        {"Temperature", "°C", trending_values(rng, 12, direction, lo, hi, 9.0, 16.0, 0.10)});
    spec.seed = seed;
    return spec;
}

ChartSpec gen_bar(Rng& rng, std::uint64_t seed) {
    ChartSpec spec;
    spec.chart_type = ChartType::Bar;
    spec.chart_id = "bar-chart";
    spec.title = "Average Commute Time by District in Halvard";
    spec.x_axis = {"District", ""};
    spec.y_axis = {"Commute time", "minutes"};
    spec.categories.assign(std::begin(kDistricts), std::end(kDistricts));
    std::vector<double> v(7);
    for (auto& e : v) e = sig3(rng.uniform(18.0, 62.0));
    spec.series.push_back({"Commute time", "minutes", std::move(v)});
    spec.seed = seed;
    return spec;
}

ChartSpec gen_stacked_bar(Rng& rng, std::uint64_t seed) {
    ChartSpec spec;
    spec.chart_type = ChartType::StackedBar;
    spec.chart_id = "stacked-bar-chart";
    spec.title = "Quarterly Revenue by Product Line at Meridian Stores";
    spec.x_axis = {"Branch", ""};
    spec.y_axis = {"Revenue", "k$"};
    spec.categories.assign(std::begin(kBranches), std::end(kBranches));
    for (const char* line : kProductLines) {
        std::vector<double> v(6);
        for (auto& e : v) e = sig3(rng.uniform(12.0, 80.0));
        spec.series.push_back({line, "k$", std::move(v)});
    }
    spec.seed = seed;
    return spec;
}

ChartSpec gen_stacked_bar_100(Rng& rng, std::uint64_t seed) {
    ChartSpec spec;
    spec.chart_type = ChartType::StackedBar100;
    spec.chart_id = "stacked-bar-100-chart";
    spec.title = "Electricity Generation Mix by Country";
    spec.x_axis = {"Country", ""};
    spec.y_axis = {"Share of generation", "%"};
    spec.categories.assign(std::begin(kCountries), std::end(kCountries));
    for (const char* source : kEnergySources) spec.series.push_back({source, "%", {}});
    for (int c = 0; c < 5; ++c) {
        const auto shares = random_shares(rng, 4, 200, 12);  // parts of >= 6%
        for (int s = 0; s < 4; ++s) spec.series[s].values.push_back(shares[s]);
    }
    spec.seed = seed;
    return spec;
}

ChartSpec gen_pie(Rng& rng, std::uint64_t seed) {
    ChartSpec spec;
    spec.chart_type = ChartType::Pie;
    spec.chart_id = "pie-chart";
    spec.title = "Smartphone Market Share in Veltania";
    spec.x_axis = {"Vendor", ""};
    spec.y_axis = {"Market share", "%"};
    spec.categories.assign(std::begin(kVendors), std::end(kVendors));
    spec.series.push_back({"Market share", "%", random_shares(rng, 5, 200, 14)});  // >= 7%
    spec.seed = seed;
    return spec;
}

ChartSpec gen_histogram(Rng& rng, std::uint64_t seed) {
    ChartSpec spec;
    spec.chart_type = ChartType::Histogram;
    spec.chart_id = "histogram";
    spec.title = "Distribution of Delivery Times at Fernway Couriers";
    spec.x_axis = {"Delivery time", "minutes"};
    spec.y_axis = {"Number of deliveries", ""};
    std::vector<double> counts(8);
    // rough bell shape with noise
    const double peak = rng.uniform(2.0, 5.0);
    for (int i = 0; i < 8; ++i) {
        const double center = std::abs(i - peak);
        const double base = 26.0 - 6.0 * center;
        counts[i] = std::max(2.0, std::round(base + rng.uniform(-5.0, 5.0)));
        spec.categories.push_back(std::to_string(10 * (i + 1)) + "-" + std::to_string(10 * (i + 2) - 1));
    }
    spec.series.push_back({"Deliveries", "", std::move(counts)});
    spec.seed = seed;
    return spec;
}

ChartSpec gen_scatter(Rng& rng, std::uint64_t seed, int cluster_k) {
    ChartSpec spec;
    spec.chart_type = ChartType::Scatter;
    spec.chart_id = "scatterplot";
    spec.title = "Height and Weight of Surveyed Adults in Mirelle";
    spec.x_axis = {"Height", "cm"};
    spec.y_axis = {"Weight", "kg"};
    // k tight blobs along an increasing diagonal plus one planted outlier
    std::vector<double> centers;
    std::vector<int> sizes;
    switch (cluster_k) {
        case 2: centers = {158.0, 184.0}; sizes = {18, 17}; break;
        case 4: centers = {152.0, 164.0, 176.0, 188.0}; sizes = {9, 9, 9, 8}; break;
        default: centers = {156.0, 172.0, 188.0}; sizes = {12, 11, 12}; break;
    }
    const double slope = rng.uniform(0.9, 1.2);
    std::vector<double> xs, ys;
    for (std::size_t b = 0; b < centers.size(); ++b) {
        const double center_x = centers[b] + rng.uniform(-2.0, 2.0);
        const double center_y = 55.0 + slope * (center_x - 150.0) + rng.uniform(-2.0, 2.0);
        for (int i = 0; i < sizes[b]; ++i) {
            xs.push_back(sig3(center_x + rng.normal(0.0, 1.4)));
            ys.push_back(sig3(center_y + rng.normal(0.0, 1.4)));
        }
    }
    // outlier: inside a blob's x range, far off the trend vertically
    const double mid_center = centers[centers.size() / 2];
    const double ox = sig3(mid_center + rng.uniform(-1.5, 1.5));
    const double oy = sig3(55.0 + slope * (ox - 150.0) +
                           (rng.chance(0.5) ? 1.0 : -1.0) * rng.uniform(16.0, 22.0));
    xs.push_back(ox);
    ys.push_back(oy);
    spec.series.push_back({"Height", "cm", std::move(xs)});
    spec.series.push_back({"Weight", "kg", std::move(ys)});
    spec.seed = seed;
    return spec;
}

ChartSpec gen_bubble(Rng& rng, std::uint64_t seed) {
    ChartSpec spec;
    spec.chart_type = ChartType::Bubble;
    spec.chart_id = "bubble-chart";
    spec.title = "Metro Networks of Major Cities";
    spec.x_axis = {"Stations", ""};
    spec.y_axis = {"Daily ridership", "millions"};
    spec.categories.assign(std::begin(kCities), std::end(kCities));
    // two blobs (small and large networks) along an increasing trend, one outlier
    std::vector<double> xs, ys, sizes;
    const double slope = rng.uniform(0.011, 0.016);
    auto emit = [&](double center, double spread_x, int count) {
        for (int i = 0; i < count; ++i) {
            const double x = std::round(center + rng.normal(0.0, spread_x));
            xs.push_back(x);
            ys.push_back(sig3(std::max(0.2, slope * x + rng.normal(0.0, 0.05))));
        }
    };
    emit(rng.uniform(60.0, 80.0), 7.0, 6);
    emit(rng.uniform(210.0, 240.0), 10.0, 5);
    // outlier: mid-size station count, ridership far above the trend
    const double ox = std::round(rng.uniform(130.0, 160.0));
    xs.push_back(ox);
    ys.push_back(sig3(slope * ox + rng.uniform(1.6, 2.2)));
    for (std::size_t i = 0; i < xs.size(); ++i) sizes.push_back(sig3(rng.uniform(40.0, 320.0)));
    spec.series.push_back({"Stations", "", std::move(xs)});
    spec.series.push_back({"Daily ridership", "millions", std::move(ys)});
    spec.series.push_back({"System length", "km", std::move(sizes)});
    spec.seed = seed;
    return spec;
}

ChartSpec gen_area(Rng& rng, std::uint64_t seed, int direction) {
    ChartSpec spec;
    spec.chart_type = ChartType::Area;
    spec.chart_id = "area-chart";
    spec.title = "Average Wholesale Coffee Price, 2024";
    spec.x_axis = {"Month", ""};
    spec.y_axis = {"Price", "$/kg"};
    spec.categories.assign(std::begin(kMonths), std::end(kMonths));
    const double lo = direction > 0 ? 4.0 : 8.0;
    const double hi = direction > 0 ? 7.0 : 12.0;
    spec.series.push_back(
        {"Price", "$/kg", trending_values(rng, 12, direction, lo, hi, 2.5, 5.0, 0.10)});
    spec.seed = seed;
    return spec;
}

ChartSpec gen_stacked_area(Rng& rng, std::uint64_t seed, int direction) {
    ChartSpec spec;
    spec.chart_type = ChartType::StackedArea;
    spec.chart_id = "stacked-area-chart";
    spec.title = "Monthly Active Users of Quanta Apps by Platform";
    spec.x_axis = {"Month", ""};
    spec.y_axis = {"Active users", "thousands"};
    spec.categories.assign(std::begin(kMonths), std::end(kMonths));
    // mobile drives the overall trend, desktop humps mid-year, tablet drifts
    std::vector<double> mobile(12), desktop(12), tablet(12);
    const double m0 = direction > 0 ? rng.uniform(60.0, 90.0) : rng.uniform(140.0, 175.0);
    const double m_rise = rng.uniform(55.0, 85.0) * direction;
    const double d0 = rng.uniform(40.0, 60.0), hump = rng.uniform(14.0, 22.0);
    const int hump_center = rng.uniform_int(4, 7);
    const double t0 = rng.uniform(15.0, 25.0), t_rise = rng.uniform(6.0, 14.0);
    for (int i = 0; i < 12; ++i) {
        const double t = i / 11.0;
        mobile[i] = sig3(m0 + m_rise * t + rng.uniform(-2.0, 2.0));
        const double dx = (i - hump_center) / 1.6;
        desktop[i] = sig3(d0 + hump * std::exp(-dx * dx) + rng.uniform(-1.0, 1.0));
        tablet[i] = sig3(t0 + t_rise * t + rng.uniform(-1.5, 1.5));
    }
    spec.series.push_back({"Mobile", "", std::move(mobile)});
    spec.series.push_back({"Desktop", "", std::move(desktop)});
    spec.series.push_back({"Tablet", "", std::move(tablet)});
    spec.seed = seed;
    return spec;
}

ChartSpec gen_choropleth(Rng& rng, std::uint64_t seed) {
    ChartSpec spec;
    spec.chart_type = ChartType::Choropleth;
    spec.chart_id = "choropleth-map";
    spec.title = "Unemployment Rate by Province of Valdora";
    spec.x_axis = {"Province", ""};
    spec.y_axis = {"Unemployment rate", "%"};
    spec.categories.assign(std::begin(kProvinces), std::end(kProvinces));
    // exactly one province in the top bin and one in the bottom bin, so the
    // extremum stays readable on a binned map
    std::vector<int> order(12);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    std::vector<double> v(12);
    v[order[0]] = sig3(rng.uniform(10.0, 11.8));
    v[order[1]] = sig3(rng.uniform(1.6, 2.2));
    for (int i = 2; i < 12; ++i) v[order[i]] = sig3(rng.uniform(3.4, 8.6));
    spec.series.push_back({"Unemployment rate", "%", std::move(v)});
    spec.seed = seed;
    return spec;
}

ChartSpec gen_treemap(Rng& rng, std::uint64_t seed) {
    ChartSpec spec;
    spec.chart_type = ChartType::Treemap;
    spec.chart_id = "treemap";
    spec.title = "Cloud Storage Used by Project at Orbital Labs";
    spec.x_axis = {"Project", ""};
    spec.y_axis = {"Storage", "TB"};
    spec.categories.assign(std::begin(kProjects), std::end(kProjects));
    // departments own 3 projects each
    for (int i = 0; i < 9; ++i) spec.groups.push_back(kDepartments[i / 3]);
    std::vector<double> v(9);
    for (auto& e : v) e = sig3(rng.uniform(8.0, 95.0));
    spec.series.push_back({"Storage", "TB", std::move(v)});
    spec.seed = seed;
    return spec;
}

ChartSpec generate_candidate(ChartType type, Rng& rng, std::uint64_t seed,
                             const std::vector<FeasibilityConstraint>& constraints) {
    // structural parameters the generators honor directly
    int trend_dir = 1;
    int cluster_k = (type == ChartType::Bubble) ? 2 : 3;
    for (const auto& c : constraints) {
        if (c.kind == ConstraintKind::Trend) trend_dir = c.direction;
        if (c.kind == ConstraintKind::Cluster) cluster_k = c.cluster_count;
    }
    switch (type) {
        case ChartType::Line:
            return gen_line(rng, seed, trend_dir);
        case ChartType::Bar:
            return gen_bar(rng, seed);
        case ChartType::StackedBar:
            return gen_stacked_bar(rng, seed);
        case ChartType::StackedBar100:
            return gen_stacked_bar_100(rng, seed);
        case ChartType::Pie:
            return gen_pie(rng, seed);
        case ChartType::Histogram:
            return gen_histogram(rng, seed);
        case ChartType::Scatter:
            return gen_scatter(rng, seed, cluster_k);
        case ChartType::Bubble:
            return gen_bubble(rng, seed);
        case ChartType::Area:
            return gen_area(rng, seed, trend_dir);
        case ChartType::StackedArea:
            return gen_stacked_area(rng, seed, trend_dir);
        case ChartType::Choropleth:
            return gen_choropleth(rng, seed);
        case ChartType::Treemap:
            return gen_treemap(rng, seed);
    }
    throw RenderUnsupported("unknown chart type");
}

bool is_point_chart(ChartType t) { return t == ChartType::Scatter || t == ChartType::Bubble; }

}  // namespace

std::vector<double> primary_values(const ChartSpec& spec) {
    if (spec.chart_type == ChartType::StackedBar || spec.chart_type == ChartType::StackedArea) {
        std::vector<double> totals(spec.series.front().values.size(), 0.0);
        for (const auto& s : spec.series) {
            for (std::size_t i = 0; i < totals.size(); ++i) totals[i] += s.values[i];
        }
        return totals;
    }
    if (spec.chart_type == ChartType::Scatter || spec.chart_type == ChartType::Bubble)
        return spec.series[1].values;  // the y channel
    return spec.series.front().values;
}

std::vector<double> constraint_target(const ChartSpec& spec, const std::string& series_name) {
    if (series_name.empty()) return primary_values(spec);
    for (const auto& s : spec.series) {
        if (s.name == series_name) return s.values;
    }
    throw InvariantViolation(spec.chart_id + ": no series named " + series_name);
}

std::vector<ConstraintCheck> check_constraints(const ChartSpec& spec,
                                               const std::vector<FeasibilityConstraint>& constraints) {
    std::vector<ConstraintCheck> out;
    out.reserve(constraints.size());
    for (const auto& c : constraints) {
        ConstraintCheck check;
        check.constraint = c;
        switch (c.kind) {
            case ConstraintKind::Trend: {
                const auto v = constraint_target(spec, c.series_name);
                std::vector<double> idx(v.size());
                std::iota(idx.begin(), idx.end(), 0.0);
                const auto fit = stats::least_squares(idx, v);
                const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
                const double range = *mx - *mn;
                double worst = 0.0;
                for (std::size_t i = 0; i < v.size(); ++i)
                    worst = std::max(worst, std::abs(v[i] - (fit.intercept + fit.slope * i)));
                const bool sign_ok = (c.direction > 0) ? fit.slope > 0.0 : fit.slope < 0.0;
                const bool ends_ok = (c.direction > 0) ? v.back() > v.front() : v.back() < v.front();
                check.pass = sign_ok && ends_ok && range > 0.0 && worst <= c.max_noise_frac * range;
                check.measured = fit.slope;
                break;
            }
            case ConstraintKind::Correlation: {
                if (!is_point_chart(spec.chart_type)) {
                    check.pass = false;
                    check.note = "correlation constraint requires scatter or bubble";
                    break;
                }
                const double r = stats::pearson_r(spec.series[0].values, spec.series[1].values);
                check.pass = std::abs(r) >= c.min_abs_r && ((c.direction > 0) ? r > 0 : r < 0);
                check.measured = r;
                break;
            }
            case ConstraintKind::Cluster: {
                if (!is_point_chart(spec.chart_type)) {
                    check.pass = false;
                    check.note = "cluster constraint requires scatter or bubble";
                    break;
                }
                const auto summary =
                    stats::cluster_summary(spec.series[0].values, spec.series[1].values);
                const bool sep_ok =
                    summary.max_within_sd > 0.0 &&
                    summary.min_centroid_separation >= c.min_separation_ratio * summary.max_within_sd;
                check.pass = summary.cluster_count == c.cluster_count && sep_ok;
                check.measured = summary.cluster_count;
                break;
            }
            case ConstraintKind::Anomaly: {
                if (!is_point_chart(spec.chart_type)) {
                    check.pass = false;
                    check.note = "anomaly constraint requires scatter or bubble";
                    break;
                }
                const int n =
                    stats::anomaly_count(spec.series[0].values, spec.series[1].values, c.anomaly_sigma);
                check.pass = (n == 1);
                check.measured = n;
                break;
            }
            case ConstraintKind::ExtremumGap:
            case ConstraintKind::RangeGap: {
                const auto v = constraint_target(spec, c.series_name);
                std::vector<double> sorted = v;
                std::sort(sorted.begin(), sorted.end());
                const double range = sorted.back() - sorted.front();
                if (range <= 0.0 || sorted.size() < 2) {
                    check.pass = false;
                    check.measured = 0.0;
                    break;
                }
                const double top_gap = sorted[sorted.size() - 1] - sorted[sorted.size() - 2];
                const double bottom_gap = sorted[1] - sorted[0];
                if (c.kind == ConstraintKind::ExtremumGap) {
                    check.pass = top_gap >= c.min_gap_frac * range;
                    check.measured = top_gap / range;
                } else {
                    check.pass = top_gap >= c.min_gap_frac * range && bottom_gap >= c.min_gap_frac * range;
                    check.measured = std::min(top_gap, bottom_gap) / range;
                }
                break;
            }
        }
        out.push_back(std::move(check));
    }
    return out;
}

ChartSpec synthesize(ChartType type, std::uint64_t seed,
                     const std::vector<FeasibilityConstraint>& constraints,
                     const RenderParams& render_params) {
    for (const auto& c : constraints) {
        const bool point_only =
            c.kind == ConstraintKind::Cluster || c.kind == ConstraintKind::Anomaly ||
            c.kind == ConstraintKind::Correlation;
        if (point_only && !is_point_chart(type))
            throw ConstraintInfeasible(std::string(to_string(c.kind)) +
                                       " constraint is incompatible with chart type " +
                                       std::string(to_string(type)));
    }
    constexpr int kMaxAttempts = 10000;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
        ChartSpec spec = generate_candidate(type, rng, seed, constraints);
        spec.render_params = render_params;
        spec.validate();
        const auto checks = check_constraints(spec, constraints);
        const bool all_pass =
            std::all_of(checks.begin(), checks.end(), [](const ConstraintCheck& c) { return c.pass; });
        if (all_pass) return spec;
    }
    throw ConstraintInfeasible("no candidate satisfied all constraints for " +
                               std::string(to_string(type)) + " after 10000 attempts");
}

const std::vector<double>& choropleth_bin_edges() {
    static const std::vector<double> edges = {3.0, 6.0, 9.0};
    return edges;
}

std::string choropleth_bin_label(double rate) {
    const auto& edges = choropleth_bin_edges();
    if (rate < edges[0]) return "under 3%";
    if (rate < edges[1]) return "3% to 6%";
    if (rate < edges[2]) return "6% to 9%";
    return "9% or more";
}

DataTable extract_table(const ChartSpec& spec) {
    DataTable t;
    switch (spec.chart_type) {
        case ChartType::Line:
        case ChartType::Bar:
        case ChartType::Area:
        case ChartType::Pie:
        case ChartType::Histogram: {
            t.columns.push_back({spec.x_axis.text, spec.x_axis.unit, ColumnKind::Categorical});
            const auto& s = spec.series.front();
            t.columns.push_back({s.name, s.unit, ColumnKind::Numeric});
            for (std::size_t i = 0; i < spec.categories.size(); ++i)
                t.rows.push_back({spec.categories[i], s.values[i]});
            break;
        }
        case ChartType::StackedBar:
        case ChartType::StackedBar100:
        case ChartType::StackedArea: {
            t.columns.push_back({spec.x_axis.text, spec.x_axis.unit, ColumnKind::Categorical});
            for (const auto& s : spec.series)
                t.columns.push_back({s.name, s.unit, ColumnKind::Numeric});
            for (std::size_t i = 0; i < spec.categories.size(); ++i) {
                std::vector<Cell> row{spec.categories[i]};
                for (const auto& s : spec.series) row.emplace_back(s.values[i]);
                t.rows.push_back(std::move(row));
            }
            break;
        }
        case ChartType::Scatter: {
            for (const auto& s : spec.series)
                t.columns.push_back({s.name, s.unit, ColumnKind::Numeric});
            for (std::size_t i = 0; i < spec.series[0].values.size(); ++i)
                t.rows.push_back({spec.series[0].values[i], spec.series[1].values[i]});
            break;
        }
        case ChartType::Bubble: {
            t.columns.push_back({spec.x_axis.text.empty() ? "Label" : "City", "", ColumnKind::Categorical});
            for (const auto& s : spec.series)
                t.columns.push_back({s.name, s.unit, ColumnKind::Numeric});
            for (std::size_t i = 0; i < spec.categories.size(); ++i) {
                std::vector<Cell> row{spec.categories[i]};
                for (const auto& s : spec.series) row.emplace_back(s.values[i]);
                t.rows.push_back(std::move(row));
            }
            break;
        }
        case ChartType::Choropleth: {
            t.columns.push_back({spec.x_axis.text, "", ColumnKind::Categorical});
            t.columns.push_back({"Bin", "", ColumnKind::Categorical});
            const auto& s = spec.series.front();
            t.columns.push_back({s.name, s.unit, ColumnKind::Numeric});
            for (std::size_t i = 0; i < spec.categories.size(); ++i)
                t.rows.push_back({spec.categories[i], choropleth_bin_label(s.values[i]), s.values[i]});
            break;
        }
        case ChartType::Treemap: {
            t.columns.push_back({spec.x_axis.text, "", ColumnKind::Categorical});
            t.columns.push_back({"Group", "", ColumnKind::Categorical});
            const auto& s = spec.series.front();
            t.columns.push_back({s.name, s.unit, ColumnKind::Numeric});
            for (std::size_t i = 0; i < spec.categories.size(); ++i)
                t.rows.push_back({spec.categories[i], spec.groups[i], s.values[i]});
            break;
        }
    }
    t.validate();
    return t;
}

}  // namespace vizlit::chartgen
