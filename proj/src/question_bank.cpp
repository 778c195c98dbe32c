#include <algorithm>
#include <cmath>
#include <set>

#include "vizlit/chartgen.hpp"
#include "vizlit/errors.hpp"
#include "vizlit/questions.hpp"
#include "vizlit/rng.hpp"
#include "vizlit/util.hpp"

// The 53-item randomized assessment bank: 12 charts, 3-8 items each,
// difficulty totals 17 easy / 19 moderate / 17 hard, option counts 2-4 plus a
// selectable Omit on every item. Texts are templates; instantiation
// substitutes chart metadata and recomputes every ground truth through
// answer_oracle against the chart's extracted table.

namespace vizlit {

namespace {

// retriable failure while binding questions to a candidate chart
struct InstantiationRetry {
    std::string reason;
};

struct OptionSet {
    std::vector<std::string> options;
    int truth_index = -1;
};

std::string substitute(std::string text, const std::map<std::string, std::string>& vars) {
    for (const auto& [key, value] : vars) {
        const std::string token = "{" + key + "}";
        std::size_t pos;
        while ((pos = text.find(token)) != std::string::npos)
            text.replace(pos, token.size(), value);
    }
    return text;
}

double rel_diff(double a, double b) {
    const double denom = std::max(std::abs(a), std::abs(b));
    return denom == 0.0 ? 0.0 : std::abs(a - b) / denom;
}

std::string display_number(double v, const std::string& unit) {
    return AnswerValue::of_number(v, unit).display();
}

// numeric options: truth plus `count-1` distractors at >= 12% relative
// separation from the truth and >= 5% from each other, sorted ascending
OptionSet numeric_options(Rng& rng, double truth, const std::string& unit, int count,
                          bool integral) {
    static const double kFactors[] = {0.55, 0.62, 0.7, 0.78, 0.85, 1.18, 1.28, 1.4, 1.55, 1.75};
    auto round_like = [&](double v) {
        return integral ? std::max(1.0, std::round(v)) : round_sig(v, 3);
    };
    for (int attempt = 0; attempt < 300; ++attempt) {
        std::vector<double> factors(std::begin(kFactors), std::end(kFactors));
        rng.shuffle(factors);
        std::vector<double> values{truth};
        for (double f : factors) {
            if (static_cast<int>(values.size()) == count) break;
            const double cand = round_like(truth * f);
            bool ok = rel_diff(cand, truth) >= 0.12;
            for (double v : values) ok = ok && rel_diff(cand, v) >= 0.05 && cand != v;
            if (ok) values.push_back(cand);
        }
        if (static_cast<int>(values.size()) != count) continue;
        std::sort(values.begin(), values.end());
        OptionSet out;
        for (std::size_t i = 0; i < values.size(); ++i) {
            out.options.push_back(display_number(values[i], unit));
            if (values[i] == truth) out.truth_index = static_cast<int>(i);
        }
        return out;
    }
    throw InstantiationRetry{"could not place numeric distractors around " + format_double(truth)};
}

// categorical options: truth plus seeded picks from the universe, shuffled
OptionSet categorical_options(Rng& rng, const std::vector<std::string>& universe,
                              const std::string& truth, int count,
                              const std::set<std::string>& exclude = {}) {
    std::vector<std::string> pool;
    for (const auto& u : universe) {
        if (u != truth && !exclude.count(u)) pool.push_back(u);
    }
    if (static_cast<int>(pool.size()) < count - 1)
        throw InstantiationRetry{"not enough distractor categories"};
    rng.shuffle(pool);
    std::vector<std::string> options(pool.begin(), pool.begin() + (count - 1));
    options.push_back(truth);
    rng.shuffle(options);
    OptionSet out;
    out.options = options;
    out.truth_index = static_cast<int>(
        std::find(options.begin(), options.end(), truth) - options.begin());
    return out;
}

// fixed-order options (True/False, trend labels, bins, counts)
OptionSet fixed_options(std::vector<std::string> options, const std::string& truth) {
    OptionSet out;
    out.truth_index = -1;
    for (std::size_t i = 0; i < options.size(); ++i) {
        if (options[i] == truth) out.truth_index = static_cast<int>(i);
    }
    out.options = std::move(options);
    if (out.truth_index < 0) throw InstantiationRetry{"truth '" + truth + "' not among options"};
    return out;
}

class ChartQuestionBuilder {
public:
    ChartQuestionBuilder(const ChartSpec& spec, const DataTable& table, Rng& rng, int& next_qnum)
        : spec_(spec), table_(table), rng_(rng), next_qnum_(next_qnum) {}

    std::vector<Question> take() { return std::move(questions_); }

    void add(TaskType task, Difficulty diff, int variant, const std::string& text_template,
             const std::map<std::string, std::string>& vars, OptionSet opts,
             std::map<std::string, std::string> params) {
        Question q;
        q.question_id = "Q" + std::to_string(next_qnum_++);
        q.chart_id = spec_.chart_id;
        q.task_type = task;
        q.difficulty = diff;
        q.text = substitute(text_template, vars);
        q.answer_mode = AnswerMode::Choice;
        q.option_count = static_cast<int>(opts.options.size());
        q.options = std::move(opts.options);
        q.options.push_back("Omit");
        q.omit_allowed = true;
        q.ground_truth_index = opts.truth_index;
        q.params = std::move(params);
        q.alignment_slot = std::string(to_string(spec_.chart_type)) + ":" +
                           std::string(to_string(task)) + ":" + std::to_string(variant);
        // the stored truth must agree with a fresh oracle pass
        const AnswerValue oracle = answer_oracle(q, table_);
        if (q.options[static_cast<std::size_t>(q.ground_truth_index)] != oracle.display())
            throw InstantiationRetry{q.question_id + ": option text does not match oracle answer"};
        q.validate();
        questions_.push_back(std::move(q));
    }

    // pick a pair of row indices whose values differ by a margin window
    std::pair<std::size_t, std::size_t> compare_pair(const std::vector<double>& v,
                                                     double min_frac, double max_frac) {
        const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
        const double range = *mx - *mn;
        std::vector<std::pair<std::size_t, std::size_t>> candidates;
        for (std::size_t i = 0; i < v.size(); ++i) {
            for (std::size_t j = 0; j < v.size(); ++j) {
                if (i == j) continue;
                const double gap = std::abs(v[i] - v[j]);
                if (gap >= min_frac * range && gap <= max_frac * range)
                    candidates.emplace_back(i, j);
            }
        }
        if (candidates.empty()) throw InstantiationRetry{"no comparison pair in margin window"};
        return candidates[rng_.uniform_u64(candidates.size())];
    }

    std::size_t pick_index(std::size_t n, const std::set<std::size_t>& exclude = {}) {
        std::vector<std::size_t> pool;
        for (std::size_t i = 0; i < n; ++i) {
            if (!exclude.count(i)) pool.push_back(i);
        }
        if (pool.empty()) throw InstantiationRetry{"no index to pick"};
        return pool[rng_.uniform_u64(pool.size())];
    }

    Rng& rng() { return rng_; }

protected:
    const ChartSpec& spec_;
    const DataTable& table_;
    Rng& rng_;
    int& next_qnum_;
    std::vector<Question> questions_;
};

const std::vector<std::string> kTrueFalse = {"True", "False"};
const std::vector<std::string> kTrendChoices = {"Increasing", "Decreasing", "Stable"};
const std::vector<std::string> kCorrelationChoices = {"Positively correlated",
                                                      "Negatively correlated",
                                                      "No clear relationship"};
const std::vector<std::string> kCountChoices = {"2", "3", "4", "5"};

std::string series_unit(const ChartSpec& spec, std::size_t idx = 0) {
    return spec.series[idx].unit;
}

// ---- per-chart builders ----------------------------------------------------

void build_line(ChartQuestionBuilder& b, const ChartSpec& spec, const DataTable& table) {
    const auto& v = spec.series[0].values;
    const auto& months = spec.categories;
    const std::string unit = series_unit(spec);
    const std::string col = spec.series[0].name;

    {  // trend, easy
        Question probe;
        probe.question_id = "probe";
        probe.params = {{"column", col}};
        probe.task_type = TaskType::FindTrend;
        const std::string truth = answer_oracle(probe, table).text;
        b.add(TaskType::FindTrend, Difficulty::Easy, 1,
              "Over the year, what was the general trend of the average daily temperature in "
              "Ravencrest?",
              {}, fixed_options(kTrendChoices, truth), {{"column", col}});
    }
    {  // extremum, easy
        const std::size_t best = static_cast<std::size_t>(
            std::max_element(v.begin(), v.end()) - v.begin());
        b.add(TaskType::FindExtremum, Difficulty::Easy, 1,
              "In which month was the average daily temperature the highest?", {},
              categorical_options(b.rng(), months, months[best], 4),
              {{"column", col}, {"return", "key"}});
    }
    {  // retrieve, moderate
        const std::size_t i = b.pick_index(v.size());
        b.add(TaskType::RetrieveValue, Difficulty::Moderate, 1,
              "What was the average daily temperature in {month}?", {{"month", months[i]}},
              numeric_options(b.rng(), v[i], unit, 4, false),
              {{"key", months[i]}, {"column", col}});
    }
    {  // range, moderate
        const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
        b.add(TaskType::DetermineRange, Difficulty::Moderate, 1,
              "What was the range of the average daily temperature over the year?", {},
              numeric_options(b.rng(), *mx - *mn, unit, 4, false), {{"column", col}});
    }
    {  // comparison, hard (close pair)
        const auto [i, j] = b.compare_pair(v, 0.02, 0.15);
        const std::string truth = v[i] > v[j] ? "True" : "False";
        b.add(TaskType::MakeComparison, Difficulty::Hard, 1,
              "The average daily temperature in {a} was higher than in {b}.",
              {{"a", months[i]}, {"b", months[j]}}, fixed_options(kTrueFalse, truth),
              {{"mode", "pair_gt"}, {"a", months[i]}, {"b", months[j]}, {"column", col}});
    }
}

void build_bar(ChartQuestionBuilder& b, const ChartSpec& spec, const DataTable&) {
    const auto& v = spec.series[0].values;
    const auto& cats = spec.categories;
    const std::string unit = series_unit(spec);
    const std::string col = spec.series[0].name;

    {  // extremum, easy
        const std::size_t best = static_cast<std::size_t>(
            std::max_element(v.begin(), v.end()) - v.begin());
        b.add(TaskType::FindExtremum, Difficulty::Easy, 1,
              "Which district had the longest average commute time?", {},
              categorical_options(b.rng(), cats, cats[best], 4),
              {{"column", col}, {"return", "key"}});
    }
    {  // retrieve, moderate
        const std::size_t i = b.pick_index(v.size());
        b.add(TaskType::RetrieveValue, Difficulty::Moderate, 1,
              "What was the average commute time in {district}?", {{"district", cats[i]}},
              numeric_options(b.rng(), v[i], unit, 4, false), {{"key", cats[i]}, {"column", col}});
    }
    {  // range, moderate
        const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
        b.add(TaskType::DetermineRange, Difficulty::Moderate, 1,
              "What was the range of average commute times across the districts?", {},
              numeric_options(b.rng(), *mx - *mn, unit, 4, false), {{"column", col}});
    }
    {  // comparison, easy (wide pair)
        const auto [i, j] = b.compare_pair(v, 0.3, 1.0);
        const std::string truth = v[i] > v[j] ? "True" : "False";
        b.add(TaskType::MakeComparison, Difficulty::Easy, 1,
              "The average commute time in {a} was longer than in {b}.",
              {{"a", cats[i]}, {"b", cats[j]}}, fixed_options(kTrueFalse, truth),
              {{"mode", "pair_gt"}, {"a", cats[i]}, {"b", cats[j]}, {"column", col}});
    }
    {  // comparison, hard: closest value
        // reference with an unambiguous nearest neighbour
        const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
        const double range = *mx - *mn;
        std::vector<std::size_t> refs;
        for (std::size_t a = 0; a < v.size(); ++a) {
            std::vector<double> gaps;
            for (std::size_t r = 0; r < v.size(); ++r) {
                if (r != a) gaps.push_back(std::abs(v[r] - v[a]));
            }
            std::sort(gaps.begin(), gaps.end());
            if (gaps[1] - gaps[0] >= 0.08 * range) refs.push_back(a);
        }
        if (refs.empty()) throw InstantiationRetry{"no unambiguous closest-value reference"};
        const std::size_t a = refs[b.rng().uniform_u64(refs.size())];
        std::size_t best = a;
        double best_d = 0.0;
        for (std::size_t r = 0; r < v.size(); ++r) {
            if (r == a) continue;
            const double d = std::abs(v[r] - v[a]);
            if (best == a || d < best_d) {
                best = r;
                best_d = d;
            }
        }
        b.add(TaskType::MakeComparison, Difficulty::Hard, 2,
              "Which district had an average commute time closest to that of {a}?",
              {{"a", cats[a]}},
              categorical_options(b.rng(), cats, cats[best], 3, {cats[a]}),
              {{"mode", "closest"}, {"a", cats[a]}, {"column", col}});
    }
}

void build_stacked_bar(ChartQuestionBuilder& b, const ChartSpec& spec, const DataTable&) {
    const auto& cats = spec.categories;
    const std::string unit = series_unit(spec);
    std::vector<double> totals(cats.size(), 0.0);
    for (const auto& s : spec.series)
        for (std::size_t i = 0; i < totals.size(); ++i) totals[i] += s.values[i];

    {  // extremum on totals, easy
        const std::size_t best = static_cast<std::size_t>(
            std::max_element(totals.begin(), totals.end()) - totals.begin());
        b.add(TaskType::FindExtremum, Difficulty::Easy, 1,
              "Which branch had the highest total revenue?", {},
              categorical_options(b.rng(), cats, cats[best], 4),
              {{"column", "__total__"}, {"return", "key"}});
    }
    {  // segment retrieve, moderate
        const std::size_t si = b.pick_index(spec.series.size());
        const std::size_t ci = b.pick_index(cats.size());
        const auto& s = spec.series[si];
        b.add(TaskType::RetrieveValue, Difficulty::Moderate, 1,
              "Approximately how much revenue did the {segment} line generate at the {branch} "
              "branch?",
              {{"segment", s.name}, {"branch", cats[ci]}},
              numeric_options(b.rng(), s.values[ci], unit, 4, false),
              {{"key", cats[ci]}, {"column", s.name}});
    }
    {  // total retrieve, hard
        const std::size_t ci = b.pick_index(cats.size());
        b.add(TaskType::RetrieveValue, Difficulty::Hard, 2,
              "What was the total revenue of the {branch} branch across all product lines?",
              {{"branch", cats[ci]}}, numeric_options(b.rng(), totals[ci], unit, 4, false),
              {{"key", cats[ci]}, {"column", "__total__"}});
    }
    {  // segment comparison within one branch, moderate
        const std::size_t ci = b.pick_index(cats.size());
        std::vector<double> seg(spec.series.size());
        for (std::size_t k = 0; k < spec.series.size(); ++k) seg[k] = spec.series[k].values[ci];
        const auto [a, c] = b.compare_pair(seg, 0.15, 1.0);
        const std::string truth = seg[a] > seg[c] ? "True" : "False";
        b.add(TaskType::MakeComparison, Difficulty::Moderate, 1,
              "At the {branch} branch, the {sa} line generated more revenue than the {sb} line.",
              {{"branch", cats[ci]}, {"sa", spec.series[a].name}, {"sb", spec.series[c].name}},
              fixed_options(kTrueFalse, truth),
              {{"mode", "seg_pair_gt"},
               {"key", cats[ci]},
               {"a_column", spec.series[a].name},
               {"b_column", spec.series[c].name}});
    }
    {  // totals comparison, hard (close pair)
        const auto [i, j] = b.compare_pair(totals, 0.02, 0.18);
        const std::string truth = totals[i] > totals[j] ? "True" : "False";
        b.add(TaskType::MakeComparison, Difficulty::Hard, 2,
              "The total revenue of the {a} branch was higher than that of the {b} branch.",
              {{"a", cats[i]}, {"b", cats[j]}}, fixed_options(kTrueFalse, truth),
              {{"mode", "pair_gt"}, {"a", cats[i]}, {"b", cats[j]}, {"column", "__total__"}});
    }
}

void build_stacked_bar_100(ChartQuestionBuilder& b, const ChartSpec& spec, const DataTable&,
                           const std::string& target_source) {
    const auto& cats = spec.categories;
    const NamedSeries* target = nullptr;
    for (const auto& s : spec.series) {
        if (s.name == target_source) target = &s;
    }
    if (!target) throw InstantiationRetry{"target source missing"};

    {  // extremum on the target source, easy
        const auto& v = target->values;
        const std::size_t best = static_cast<std::size_t>(
            std::max_element(v.begin(), v.end()) - v.begin());
        b.add(TaskType::FindExtremum, Difficulty::Easy, 1,
              "Which country generates the largest share of its electricity from {source}?",
              {{"source", target_source}}, categorical_options(b.rng(), cats, cats[best], 4),
              {{"column", target_source}, {"return", "key"}});
    }
    {  // retrieve share, moderate
        const std::size_t ci = b.pick_index(cats.size());
        b.add(TaskType::RetrieveValue, Difficulty::Moderate, 1,
              "Approximately what share of {country}'s electricity comes from {source}?",
              {{"country", cats[ci]}, {"source", target_source}},
              numeric_options(b.rng(), target->values[ci], "%", 4, false),
              {{"key", cats[ci]}, {"column", target_source}});
    }
    {  // within-country comparison, moderate
        const std::size_t ci = b.pick_index(cats.size());
        std::vector<double> seg(spec.series.size());
        for (std::size_t k = 0; k < spec.series.size(); ++k) seg[k] = spec.series[k].values[ci];
        const auto [a, c] = b.compare_pair(seg, 0.15, 1.0);
        const std::string truth = seg[a] > seg[c] ? "True" : "False";
        b.add(TaskType::MakeComparison, Difficulty::Moderate, 1,
              "In {country}, the share of {sa} is larger than the share of {sb}.",
              {{"country", cats[ci]}, {"sa", spec.series[a].name}, {"sb", spec.series[c].name}},
              fixed_options(kTrueFalse, truth),
              {{"mode", "seg_pair_gt"},
               {"key", cats[ci]},
               {"a_column", spec.series[a].name},
               {"b_column", spec.series[c].name}});
    }
    {  // cross-country comparison on the target source, hard
        const auto [i, j] = b.compare_pair(target->values, 0.02, 0.25);
        const std::string truth = target->values[i] > target->values[j] ? "True" : "False";
        b.add(TaskType::MakeComparison, Difficulty::Hard, 2,
              "The share of {source} in {a} is larger than in {b}.",
              {{"source", target_source}, {"a", cats[i]}, {"b", cats[j]}},
              fixed_options(kTrueFalse, truth),
              {{"mode", "pair_gt"}, {"a", cats[i]}, {"b", cats[j]}, {"column", target_source}});
    }
}

void build_pie(ChartQuestionBuilder& b, const ChartSpec& spec, const DataTable&) {
    const auto& v = spec.series[0].values;
    const auto& cats = spec.categories;
    const std::string col = spec.series[0].name;

    {
        const std::size_t best = static_cast<std::size_t>(
            std::max_element(v.begin(), v.end()) - v.begin());
        b.add(TaskType::FindExtremum, Difficulty::Easy, 1,
              "Which vendor holds the largest market share?", {},
              categorical_options(b.rng(), cats, cats[best], 4),
              {{"column", col}, {"return", "key"}});
    }
    {
        const std::size_t i = b.pick_index(v.size());
        b.add(TaskType::RetrieveValue, Difficulty::Moderate, 1,
              "Approximately what percentage of the market does {vendor} hold?",
              {{"vendor", cats[i]}}, numeric_options(b.rng(), v[i], "%", 4, false),
              {{"key", cats[i]}, {"column", col}});
    }
    {
        const auto [i, j] = b.compare_pair(v, 0.02, 0.25);
        const std::string truth = v[i] > v[j] ? "True" : "False";
        b.add(TaskType::MakeComparison, Difficulty::Hard, 1,
              "{a}'s market share is larger than {b}'s.", {{"a", cats[i]}, {"b", cats[j]}},
              fixed_options(kTrueFalse, truth),
              {{"mode", "pair_gt"}, {"a", cats[i]}, {"b", cats[j]}, {"column", col}});
    }
}

void build_histogram(ChartQuestionBuilder& b, const ChartSpec& spec, const DataTable&) {
    const auto& v = spec.series[0].values;
    const auto& bins = spec.categories;
    const std::string col = spec.series[0].name;

    {
        const std::size_t best = static_cast<std::size_t>(
            std::max_element(v.begin(), v.end()) - v.begin());
        b.add(TaskType::FindExtremum, Difficulty::Easy, 1,
              "Which delivery time range contains the most deliveries?", {},
              categorical_options(b.rng(), bins, bins[best], 4),
              {{"column", col}, {"return", "key"}});
    }
    {
        const std::size_t i = b.pick_index(v.size());
        b.add(TaskType::RetrieveValue, Difficulty::Moderate, 1,
              "How many deliveries took {bin} minutes?", {{"bin", bins[i]}},
              numeric_options(b.rng(), v[i], "", 4, true), {{"key", bins[i]}, {"column", col}});
    }
    {  // easy comparison, wide margin
        const auto [i, j] = b.compare_pair(v, 0.3, 1.0);
        const std::string truth = v[i] > v[j] ? "True" : "False";
        b.add(TaskType::MakeComparison, Difficulty::Easy, 1,
              "More deliveries took {a} minutes than {b} minutes.",
              {{"a", bins[i]}, {"b", bins[j]}}, fixed_options(kTrueFalse, truth),
              {{"mode", "pair_gt"}, {"a", bins[i]}, {"b", bins[j]}, {"column", col}});
    }
    {  // hard: derived difference
        // choose a pair with a clearly positive difference
        std::vector<std::pair<std::size_t, std::size_t>> candidates;
        for (std::size_t i = 0; i < v.size(); ++i) {
            for (std::size_t j = 0; j < v.size(); ++j) {
                if (i != j && v[i] - v[j] >= 4.0) candidates.emplace_back(i, j);
            }
        }
        if (candidates.empty()) throw InstantiationRetry{"no histogram difference pair"};
        const auto [i, j] = candidates[b.rng().uniform_u64(candidates.size())];
        b.add(TaskType::MakeComparison, Difficulty::Hard, 2,
              "How many more deliveries took {a} minutes than {b} minutes?",
              {{"a", bins[i]}, {"b", bins[j]}},
              numeric_options(b.rng(), v[i] - v[j], "", 3, true),
              {{"mode", "diff"}, {"a", bins[i]}, {"b", bins[j]}, {"column", col}});
    }
}

void build_scatter(ChartQuestionBuilder& b, const ChartSpec& spec, const DataTable& table,
                   int cluster_k) {
    const auto& xs = spec.series[0].values;
    const auto& ys = spec.series[1].values;
    const std::string xcol = spec.series[0].name;
    const std::string ycol = spec.series[1].name;
    const std::string yunit = spec.series[1].unit;

    {  // correlation trend, easy
        Question probe;
        probe.question_id = "probe";
        probe.task_type = TaskType::FindTrend;
        probe.params = {{"mode", "correlation"}, {"x_column", xcol}, {"y_column", ycol}};
        const std::string truth = answer_oracle(probe, table).text;
        b.add(TaskType::FindTrend, Difficulty::Easy, 1,
              "What is the relationship between height and weight in this scatterplot?", {},
              fixed_options(kCorrelationChoices, truth),
              {{"mode", "correlation"}, {"x_column", xcol}, {"y_column", ycol}});
    }
    {  // clusters, moderate
        b.add(TaskType::FindCluster, Difficulty::Moderate, 1,
              "How many distinct groups (clusters) of points does the scatterplot show?", {},
              fixed_options(kCountChoices, std::to_string(cluster_k)),
              {{"x_column", xcol}, {"y_column", ycol}});
    }
    {  // anomaly, easy
        const int oi = chartgen::stats::anomaly_index(xs, ys);
        const double ox = xs[static_cast<std::size_t>(oi)];
        std::vector<double> cands;
        for (double x : xs) {
            bool ok = std::abs(x - ox) >= 5.0;
            for (double c : cands) ok = ok && std::abs(x - c) >= 5.0;
            if (ok) cands.push_back(x);
        }
        if (cands.size() < 3) throw InstantiationRetry{"not enough anomaly distractor heights"};
        b.rng().shuffle(cands);
        std::vector<double> values{ox, cands[0], cands[1], cands[2]};
        std::sort(values.begin(), values.end());
        OptionSet opts;
        for (std::size_t i = 0; i < values.size(); ++i) {
            opts.options.push_back(display_number(values[i], "cm"));
            if (values[i] == ox) opts.truth_index = static_cast<int>(i);
        }
        b.add(TaskType::FindAnomaly, Difficulty::Easy, 1,
              "One person's weight clearly deviates from the overall height-weight pattern. "
              "Approximately what is that person's height?",
              {}, std::move(opts),
              {{"x_column", xcol}, {"y_column", ycol}, {"return", "x"}});
    }
    {  // extremum on weight, moderate
        const double top = *std::max_element(ys.begin(), ys.end());
        b.add(TaskType::FindExtremum, Difficulty::Moderate, 1,
              "What is the weight of the heaviest person?", {},
              numeric_options(b.rng(), top, yunit, 4, false),
              {{"column", ycol}, {"return", "value"}});
    }
    {  // retrieve at unique height, hard
        std::vector<std::size_t> unique_pts;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            double nearest = 1e18;
            for (std::size_t j = 0; j < xs.size(); ++j) {
                if (j != i) nearest = std::min(nearest, std::abs(xs[j] - xs[i]));
            }
            if (nearest >= 2.0) unique_pts.push_back(i);
        }
        if (unique_pts.empty()) throw InstantiationRetry{"no x-isolated scatter point"};
        const std::size_t i = unique_pts[b.rng().uniform_u64(unique_pts.size())];
        b.add(TaskType::RetrieveValue, Difficulty::Hard, 1,
              "What is the weight of the person whose height is {x} cm?",
              {{"x", format_double(xs[i])}}, numeric_options(b.rng(), ys[i], yunit, 4, false),
              {{"match_column", xcol}, {"match_value", format_double(xs[i])}, {"column", ycol}});
    }
    {  // range of weights, hard
        const auto [mn, mx] = std::minmax_element(ys.begin(), ys.end());
        b.add(TaskType::DetermineRange, Difficulty::Hard, 1,
              "What is the range of weights in the scatterplot?", {},
              numeric_options(b.rng(), *mx - *mn, yunit, 4, false), {{"column", ycol}});
    }
    {  // count split, moderate
        std::vector<double> sorted_x = xs;
        std::sort(sorted_x.begin(), sorted_x.end());
        std::vector<double> cuts;
        for (std::size_t i = 0; i + 1 < sorted_x.size(); ++i) {
            if (sorted_x[i + 1] - sorted_x[i] >= 6.0)
                cuts.push_back(std::round((sorted_x[i] + sorted_x[i + 1]) / 2.0));
        }
        std::vector<double> good;
        for (double t : cuts) {
            int below = 0, above = 0;
            for (double x : xs) (x < t ? below : above)++;
            if (std::abs(below - above) >= 3) good.push_back(t);
        }
        if (good.empty()) throw InstantiationRetry{"no usable height split"};
        const double t = good[b.rng().uniform_u64(good.size())];
        int below = 0, above = 0;
        for (double x : xs) (x < t ? below : above)++;
        b.add(TaskType::MakeComparison, Difficulty::Moderate, 1,
              "There are more people shorter than {t} cm than taller than {t} cm.",
              {{"t", format_double(t)}},
              fixed_options(kTrueFalse, below > above ? "True" : "False"),
              {{"mode", "count_split"}, {"column", xcol}, {"threshold", format_double(t)}});
    }
    {  // value at tallest person vs threshold, hard
        std::size_t tallest = 0;
        for (std::size_t i = 1; i < xs.size(); ++i) {
            if (xs[i] > xs[tallest]) tallest = i;
        }
        double second = -1e18;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i != tallest) second = std::max(second, xs[i]);
        }
        if (xs[tallest] - second < 1.5) throw InstantiationRetry{"tallest person not unique"};
        const double w = ys[tallest];
        const double factor = b.rng().chance(0.5) ? b.rng().uniform(1.06, 1.18)
                                                  : b.rng().uniform(0.82, 0.94);
        const double threshold = round_sig(w * factor, 3);
        if (rel_diff(threshold, w) < 0.04) throw InstantiationRetry{"threshold too close"};
        b.add(TaskType::MakeComparison, Difficulty::Hard, 2,
              "The tallest person weighs more than {w} kg.", {{"w", format_double(threshold)}},
              fixed_options(kTrueFalse, w > threshold ? "True" : "False"),
              {{"mode", "at_argmax_gt"},
               {"x_column", xcol},
               {"y_column", ycol},
               {"threshold", format_double(threshold)}});
    }
}

void build_bubble(ChartQuestionBuilder& b, const ChartSpec& spec, const DataTable& table) {
    const auto& cats = spec.categories;
    const auto& xs = spec.series[0].values;
    const auto& ys = spec.series[1].values;
    const std::string xcol = spec.series[0].name;
    const std::string ycol = spec.series[1].name;
    const std::string scol = spec.series[2].name;

    {  // clusters, moderate
        Question probe;
        probe.question_id = "probe";
        probe.task_type = TaskType::FindCluster;
        probe.params = {{"x_column", xcol}, {"y_column", ycol}};
        const std::string truth = answer_oracle(probe, table).text;
        b.add(TaskType::FindCluster, Difficulty::Moderate, 1,
              "By stations and ridership, the cities fall into how many distinct groups?", {},
              fixed_options(kCountChoices, truth), {{"x_column", xcol}, {"y_column", ycol}});
    }
    {  // anomaly, easy
        const int oi = chartgen::stats::anomaly_index(xs, ys);
        b.add(TaskType::FindAnomaly, Difficulty::Easy, 1,
              "Which city's daily ridership is unusually high for its number of stations?", {},
              categorical_options(b.rng(), cats, cats[static_cast<std::size_t>(oi)], 4),
              {{"x_column", xcol}, {"y_column", ycol}, {"return", "key"}});
    }
    {  // extremum on bubble size, moderate
        const auto& sizes = spec.series[2].values;
        const std::size_t best = static_cast<std::size_t>(
            std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
        b.add(TaskType::FindExtremum, Difficulty::Moderate, 1,
              "Which city has the longest metro system (the largest bubble)?", {},
              categorical_options(b.rng(), cats, cats[best], 4),
              {{"column", scol}, {"return", "key"}});
    }
    {  // retrieve stations, hard
        const std::size_t i = b.pick_index(cats.size());
        b.add(TaskType::RetrieveValue, Difficulty::Hard, 1,
              "Approximately how many stations does the {city} metro have?", {{"city", cats[i]}},
              numeric_options(b.rng(), xs[i], "", 4, true), {{"key", cats[i]}, {"column", xcol}});
    }
    {  // ridership comparison, hard
        const auto [i, j] = b.compare_pair(ys, 0.03, 0.25);
        const std::string truth = ys[i] > ys[j] ? "True" : "False";
        b.add(TaskType::MakeComparison, Difficulty::Hard, 1,
              "{a}'s daily ridership is higher than {b}'s.", {{"a", cats[i]}, {"b", cats[j]}},
              fixed_options(kTrueFalse, truth),
              {{"mode", "pair_gt"}, {"a", cats[i]}, {"b", cats[j]}, {"column", ycol}});
    }
}

void build_area(ChartQuestionBuilder& b, const ChartSpec& spec, const DataTable& table) {
    const auto& v = spec.series[0].values;
    const auto& months = spec.categories;
    const std::string unit = series_unit(spec);
    const std::string col = spec.series[0].name;

    {
        Question probe;
        probe.question_id = "probe";
        probe.task_type = TaskType::FindTrend;
        probe.params = {{"column", col}};
        const std::string truth = answer_oracle(probe, table).text;
        b.add(TaskType::FindTrend, Difficulty::Easy, 1,
              "Over 2024, what was the general trend of the wholesale coffee price?", {},
              fixed_options(kTrendChoices, truth), {{"column", col}});
    }
    {
        const std::size_t best = static_cast<std::size_t>(
            std::max_element(v.begin(), v.end()) - v.begin());
        b.add(TaskType::FindExtremum, Difficulty::Easy, 1,
              "In which month was the coffee price the highest?", {},
              categorical_options(b.rng(), months, months[best], 4),
              {{"column", col}, {"return", "key"}});
    }
    {
        const std::size_t i = b.pick_index(v.size());
        b.add(TaskType::RetrieveValue, Difficulty::Moderate, 1,
              "What was the coffee price in {month}?", {{"month", months[i]}},
              numeric_options(b.rng(), v[i], unit, 4, false), {{"key", months[i]}, {"column", col}});
    }
    {
        const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
        b.add(TaskType::DetermineRange, Difficulty::Hard, 1,
              "What was the range of the coffee price over the year?", {},
              numeric_options(b.rng(), *mx - *mn, unit, 4, false), {{"column", col}});
    }
}

void build_stacked_area(ChartQuestionBuilder& b, const ChartSpec& spec, const DataTable& table) {
    const auto& months = spec.categories;

    {
        Question probe;
        probe.question_id = "probe";
        probe.task_type = TaskType::FindTrend;
        probe.params = {{"column", "__total__"}};
        const std::string truth = answer_oracle(probe, table).text;
        b.add(TaskType::FindTrend, Difficulty::Easy, 1,
              "Over the year, what was the general trend of total active users across all "
              "platforms?",
              {}, fixed_options(kTrendChoices, truth), {{"column", "__total__"}});
    }
    {  // extremum of the humped series, moderate
        const auto& desktop = spec.series[1];
        const std::size_t best = static_cast<std::size_t>(
            std::max_element(desktop.values.begin(), desktop.values.end()) -
            desktop.values.begin());
        b.add(TaskType::FindExtremum, Difficulty::Moderate, 1,
              "In which month did {platform} usage peak?", {{"platform", desktop.name}},
              categorical_options(b.rng(), months, months[best], 4),
              {{"column", desktop.name}, {"return", "key"}});
    }
    {  // middle-band retrieve, hard
        const std::size_t si = 1 + b.pick_index(spec.series.size() - 1);  // not the bottom band
        const std::size_t ci = b.pick_index(months.size());
        const auto& s = spec.series[si];
        b.add(TaskType::RetrieveValue, Difficulty::Hard, 1,
              "Approximately how many active {platform} users (in thousands) were there in "
              "{month}?",
              {{"platform", s.name}, {"month", months[ci]}},
              numeric_options(b.rng(), s.values[ci], "", 4, false),
              {{"key", months[ci]}, {"column", s.name}});
    }
    {  // cross-series comparison in one month, hard
        const std::size_t ci = b.pick_index(months.size());
        std::vector<double> seg(spec.series.size());
        for (std::size_t k = 0; k < spec.series.size(); ++k) seg[k] = spec.series[k].values[ci];
        const auto [a, c] = b.compare_pair(seg, 0.08, 1.0);
        const std::string truth = seg[a] > seg[c] ? "True" : "False";
        b.add(TaskType::MakeComparison, Difficulty::Hard, 1,
              "In {month}, {sa} had more active users than {sb}.",
              {{"month", months[ci]}, {"sa", spec.series[a].name}, {"sb", spec.series[c].name}},
              fixed_options(kTrueFalse, truth),
              {{"mode", "seg_pair_gt"},
               {"key", months[ci]},
               {"a_column", spec.series[a].name},
               {"b_column", spec.series[c].name}});
    }
}

void build_choropleth(ChartQuestionBuilder& b, const ChartSpec& spec, const DataTable&) {
    const auto& v = spec.series[0].values;
    const auto& provinces = spec.categories;
    const std::string col = spec.series[0].name;

    {
        const std::size_t best = static_cast<std::size_t>(
            std::max_element(v.begin(), v.end()) - v.begin());
        b.add(TaskType::FindExtremum, Difficulty::Easy, 1,
              "Which province has the highest unemployment rate?", {},
              categorical_options(b.rng(), provinces, provinces[best], 4),
              {{"column", col}, {"return", "key"}});
    }
    {
        const std::size_t i = b.pick_index(v.size());
        const std::string truth = chartgen::choropleth_bin_label(v[i]);
        b.add(TaskType::RetrieveValue, Difficulty::Moderate, 1,
              "Which range does {province}'s unemployment rate fall into?",
              {{"province", provinces[i]}},
              fixed_options({"under 3%", "3% to 6%", "6% to 9%", "9% or more"}, truth),
              {{"key", provinces[i]}, {"column", "Bin"}});
    }
    {  // cross-bin comparison, hard
        std::vector<std::pair<std::size_t, std::size_t>> candidates;
        for (std::size_t i = 0; i < v.size(); ++i) {
            for (std::size_t j = 0; j < v.size(); ++j) {
                if (i != j &&
                    chartgen::choropleth_bin_label(v[i]) != chartgen::choropleth_bin_label(v[j]))
                    candidates.emplace_back(i, j);
            }
        }
        if (candidates.empty()) throw InstantiationRetry{"no cross-bin pair"};
        const auto [i, j] = candidates[b.rng().uniform_u64(candidates.size())];
        const std::string truth = v[i] > v[j] ? "True" : "False";
        b.add(TaskType::MakeComparison, Difficulty::Hard, 1,
              "The unemployment rate in {a} is higher than in {b}.",
              {{"a", provinces[i]}, {"b", provinces[j]}}, fixed_options(kTrueFalse, truth),
              {{"mode", "pair_gt"}, {"a", provinces[i]}, {"b", provinces[j]}, {"column", col}});
    }
}

void build_treemap(ChartQuestionBuilder& b, const ChartSpec& spec, const DataTable&) {
    const auto& v = spec.series[0].values;
    const auto& projects = spec.categories;
    const std::string col = spec.series[0].name;
    std::vector<std::string> departments;
    for (const auto& g : spec.groups) {
        if (std::find(departments.begin(), departments.end(), g) == departments.end())
            departments.push_back(g);
    }

    {
        const std::size_t i = b.pick_index(projects.size());
        b.add(TaskType::IdentifyHierarchy, Difficulty::Easy, 1,
              "Which department does the {project} project belong to?",
              {{"project", projects[i]}}, fixed_options(departments, spec.groups[i]),
              {{"key", projects[i]}, {"column", "Group"}});
    }
    {
        const std::size_t best = static_cast<std::size_t>(
            std::max_element(v.begin(), v.end()) - v.begin());
        b.add(TaskType::FindExtremum, Difficulty::Moderate, 1,
              "Which project uses the most storage?", {},
              categorical_options(b.rng(), projects, projects[best], 4),
              {{"column", col}, {"return", "key"}});
    }
    {
        const auto [i, j] = b.compare_pair(v, 0.05, 0.35);
        const std::string truth = v[i] > v[j] ? "True" : "False";
        b.add(TaskType::MakeComparison, Difficulty::Hard, 1,
              "The {a} project uses more storage than the {b} project.",
              {{"a", projects[i]}, {"b", projects[j]}}, fixed_options(kTrueFalse, truth),
              {{"mode", "pair_gt"}, {"a", projects[i]}, {"b", projects[j]}, {"column", col}});
    }
}

struct ChartPlan {
    ChartType type;
    std::vector<FeasibilityConstraint> constraints;
    int cluster_k = 3;
    int trend_dir = 1;
    std::string target_source;  // stacked-bar-100 target series
};

ChartPlan make_plan(ChartType type, Rng& rng) {
    ChartPlan plan;
    plan.type = type;
    switch (type) {
        case ChartType::Line:
            plan.trend_dir = rng.chance(0.5) ? 1 : -1;
            plan.constraints = {FeasibilityConstraint::trend(plan.trend_dir),
                                FeasibilityConstraint::range_gap()};
            break;
        case ChartType::Bar:
        case ChartType::Histogram:
            plan.constraints = {FeasibilityConstraint::extremum_gap(),
                                FeasibilityConstraint::range_gap()};
            break;
        case ChartType::StackedBar:
            plan.constraints = {FeasibilityConstraint::extremum_gap(),
                                FeasibilityConstraint::range_gap()};
            break;
        case ChartType::StackedBar100: {
            static const char* kSources[] = {"Coal", "Gas", "Nuclear", "Renewables"};
            plan.target_source = kSources[rng.uniform_u64(4)];
            auto gap = FeasibilityConstraint::extremum_gap();
            gap.series_name = plan.target_source;
            plan.constraints = {gap};
            break;
        }
        case ChartType::Pie:
            plan.constraints = {FeasibilityConstraint::extremum_gap()};
            break;
        case ChartType::Scatter:
            // gap constraints are meaningless on a near-continuous point
            // cloud; readability comes from the blob/outlier structure
            plan.cluster_k = rng.uniform_int(2, 4);
            plan.constraints = {FeasibilityConstraint::correlation(+1),
                                FeasibilityConstraint::cluster(plan.cluster_k),
                                FeasibilityConstraint::anomaly()};
            break;
        case ChartType::Bubble: {
            plan.cluster_k = 2;
            auto size_gap = FeasibilityConstraint::extremum_gap();
            size_gap.series_name = "System length";
            plan.constraints = {FeasibilityConstraint::correlation(+1),
                                FeasibilityConstraint::cluster(2),
                                FeasibilityConstraint::anomaly(), size_gap};
            break;
        }
        case ChartType::Area:
            plan.trend_dir = rng.chance(0.5) ? 1 : -1;
            plan.constraints = {FeasibilityConstraint::trend(plan.trend_dir),
                                FeasibilityConstraint::range_gap()};
            break;
        case ChartType::StackedArea: {
            plan.trend_dir = rng.chance(0.5) ? 1 : -1;
            auto peak = FeasibilityConstraint::extremum_gap();
            peak.series_name = "Desktop";
            plan.constraints = {FeasibilityConstraint::trend(plan.trend_dir), peak};
            break;
        }
        case ChartType::Choropleth:
            plan.constraints = {FeasibilityConstraint::extremum_gap(),
                                FeasibilityConstraint::range_gap()};
            break;
        case ChartType::Treemap:
            plan.constraints = {FeasibilityConstraint::extremum_gap()};
            break;
    }
    return plan;
}

}  // namespace

AssessmentPack instantiate_pack(PackKind kind, std::uint64_t seed,
                                const RenderParams& render_params) {
    if (kind != PackKind::ModifiedVlat)
        throw Error(ErrorKind::User,
                    "only modified-vlat packs are generated; original-vlat and cqa packs are "
                    "loaded from disk");

    AssessmentPack pack;
    pack.pack_id = "modified-vlat-s" + std::to_string(seed);
    pack.kind = kind;
    pack.seed = seed;

    const auto types = all_chart_types();
    int next_qnum = 1;
    for (std::size_t ci = 0; ci < types.size(); ++ci) {
        const ChartType type = types[ci];
        Rng plan_rng(derive_seed(seed, 100 + ci));
        const ChartPlan plan = make_plan(type, plan_rng);

        bool placed = false;
        std::string last_reason;
        for (int salt = 0; salt < 64 && !placed; ++salt) {
            const std::uint64_t chart_seed = derive_seed(seed, ci * 131 + salt * 7919);
            ChartSpec spec;
            try {
                spec = chartgen::synthesize(type, chart_seed, plan.constraints, render_params);
            } catch (const ConstraintInfeasible&) {
                continue;
            }
            const DataTable table = chartgen::extract_table(spec);
            Rng qrng(derive_seed(seed, 5000 + ci * 101 + salt));
            const int qnum_checkpoint = next_qnum;
            ChartQuestionBuilder builder(spec, table, qrng, next_qnum);
            try {
                switch (type) {
                    case ChartType::Line: build_line(builder, spec, table); break;
                    case ChartType::Bar: build_bar(builder, spec, table); break;
                    case ChartType::StackedBar: build_stacked_bar(builder, spec, table); break;
                    case ChartType::StackedBar100:
                        build_stacked_bar_100(builder, spec, table, plan.target_source);
                        break;
                    case ChartType::Pie: build_pie(builder, spec, table); break;
                    case ChartType::Histogram: build_histogram(builder, spec, table); break;
                    case ChartType::Scatter:
                        build_scatter(builder, spec, table, plan.cluster_k);
                        break;
                    case ChartType::Bubble: build_bubble(builder, spec, table); break;
                    case ChartType::Area: build_area(builder, spec, table); break;
                    case ChartType::StackedArea: build_stacked_area(builder, spec, table); break;
                    case ChartType::Choropleth: build_choropleth(builder, spec, table); break;
                    case ChartType::Treemap: build_treemap(builder, spec, table); break;
                }
            } catch (const InstantiationRetry& retry) {
                last_reason = retry.reason;
                next_qnum = qnum_checkpoint;
                continue;
            }
            ChartEntry entry;
            entry.chart_id = spec.chart_id;
            entry.chart_type = type;
            entry.table = table;
            entry.has_table = true;
            auto qs = builder.take();
            for (const auto& q : qs) entry.question_ids.push_back(q.question_id);
            entry.spec = std::move(spec);
            pack.charts.push_back(std::move(entry));
            for (auto& q : qs) pack.questions.push_back(std::move(q));
            placed = true;
        }
        if (!placed)
            throw ConstraintInfeasible("could not instantiate questions for " +
                                       std::string(to_string(type)) +
                                       (last_reason.empty() ? "" : ": " + last_reason));
    }
    pack.validate();
    return pack;
}

}  // namespace vizlit
