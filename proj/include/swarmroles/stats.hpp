#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <nlohmann/json.hpp>

#include "error.hpp"
#include "harness.hpp"

namespace swarmroles::stats {

/// Summary of final_best_fitness over the repetitions of one cell.
struct SummaryCell {
  std::string algorithm;
  std::string problem;
  std::size_t dimension = 0;
  std::size_t runs = 0;
  double mean = 0.0;
  double median = 0.0;
  double stddev = 0.0;
  double best = 0.0;
  double worst = 0.0;
};

using SummaryTable = std::vector<SummaryCell>;

/// Sample standard deviation uses n - 1. Failed runs are skipped; a cell with
/// no successful run is omitted.
inline SummaryTable summarize(const ResultSet& results)
{
  std::map<std::tuple<std::string, std::string, std::size_t>, std::vector<double>> samples;
  for (const auto& r : results.records) {
    if (!r.failed) {
      samples[{r.algorithm, r.problem, r.dimension}].push_back(r.final_best_fitness);
    }
  }
  SummaryTable table;
  for (auto& [key, values] : samples) {
    std::sort(values.begin(), values.end());
    SummaryCell cell;
    std::tie(cell.algorithm, cell.problem, cell.dimension) = key;
    cell.runs = values.size();
    const double n = static_cast<double>(values.size());
    cell.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    const std::size_t mid = values.size() / 2;
    cell.median = values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
    double ss = 0.0;
    for (double v : values) {
      ss += (v - cell.mean) * (v - cell.mean);
    }
    cell.stddev = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    cell.best = values.front();
    cell.worst = values.back();
    table.push_back(std::move(cell));
  }
  return table;
}

namespace detail {

using CellKey = std::pair<std::string, std::size_t>;

/// Groups summary cells by (problem, dimension); algorithms sorted by name.
inline std::map<CellKey, std::vector<const SummaryCell*>> by_problem(const SummaryTable& table)
{
  std::map<CellKey, std::vector<const SummaryCell*>> groups;
  for (const auto& cell : table) {
    groups[{cell.problem, cell.dimension}].push_back(&cell);
  }
  for (auto& [key, cells] : groups) {
    std::sort(cells.begin(), cells.end(),
              [](const SummaryCell* a, const SummaryCell* b) { return a->algorithm < b->algorithm; });
  }
  return groups;
}

struct Extreme {
  const SummaryCell* cell;
  bool tie;
};

// Cells are name-sorted, so keeping the first hit gives the lexicographic tie-break.
template <typename Better>
Extreme extreme(const std::vector<const SummaryCell*>& cells, Better better)
{
  const SummaryCell* chosen = cells.front();
  bool tie = false;
  for (std::size_t i = 1; i < cells.size(); ++i) {
    if (better(cells[i]->mean, chosen->mean)) {
      chosen = cells[i];
      tie = false;
    } else if (cells[i]->mean == chosen->mean) {
      tie = true;
    }
  }
  return {chosen, tie};
}

} // namespace detail

struct Winner {
  std::string problem;
  std::size_t dimension = 0;
  std::string algorithm;
  bool tie = false;
};

/// Argmin of the mean per (problem, dimension); ties go to the
/// lexicographically first algorithm and are flagged.
inline std::vector<Winner> best_per_problem(const SummaryTable& table)
{
  std::vector<Winner> winners;
  for (const auto& [key, cells] : detail::by_problem(table)) {
    require(cells.size() >= 2, "best_per_problem: " + key.first + " needs at least 2 algorithms");
    const auto best = detail::extreme(cells, std::less<>{});
    winners.push_back({key.first, key.second, best.cell->algorithm, best.tie});
  }
  return winners;
}

struct AlgorithmCounts {
  std::map<std::size_t, std::size_t> best;
  std::map<std::size_t, std::size_t> worst;
  std::size_t best_total = 0;
  std::size_t worst_total = 0;
};

struct BestWorstCounts {
  std::vector<std::size_t> dimensions;
  std::map<std::string, AlgorithmCounts> algorithms;
};

/// Per-dimension counts of argmin and argmax means, plus totals.
inline BestWorstCounts count_best_worst(const SummaryTable& table)
{
  BestWorstCounts counts;
  std::set<std::size_t> dimensions;
  for (const auto& cell : table) {
    dimensions.insert(cell.dimension);
    counts.algorithms[cell.algorithm];
  }
  counts.dimensions.assign(dimensions.begin(), dimensions.end());
  for (auto& [name, c] : counts.algorithms) {
    for (auto d : counts.dimensions) {
      c.best[d] = 0;
      c.worst[d] = 0;
    }
  }
  for (const auto& [key, cells] : detail::by_problem(table)) {
    require(cells.size() >= 2, "count_best_worst: " + key.first + " needs at least 2 algorithms");
    ++counts.algorithms[detail::extreme(cells, std::less<>{}).cell->algorithm].best[key.second];
    ++counts.algorithms[detail::extreme(cells, std::greater<>{}).cell->algorithm].worst[key.second];
  }
  for (auto& [name, c] : counts.algorithms) {
    for (auto d : counts.dimensions) {
      c.best_total += c.best[d];
      c.worst_total += c.worst[d];
    }
  }
  return counts;
}

struct NormalizedCell {
  std::string algorithm;
  std::string problem;
  std::size_t dimension = 0;
  double score = 0.0;
  bool degenerate = false;
};

struct NormalizedScores {
  std::vector<NormalizedCell> cells;
  /// algorithm -> dimension -> mean score over problems
  std::map<std::string, std::map<std::size_t, double>> per_dimension;
  /// algorithm -> mean of its per-dimension means
  std::map<std::string, double> overall;
};

/// (mean - min) / (max - min) within each (problem, dimension); cells where
/// every algorithm has the same mean score 0 and are flagged degenerate.
inline NormalizedScores minmax_normalize(const SummaryTable& table)
{
  NormalizedScores result;
  std::map<std::string, std::map<std::size_t, std::vector<double>>> collected;
  for (const auto& [key, cells] : detail::by_problem(table)) {
    require(cells.size() >= 2, "minmax_normalize: " + key.first + " needs at least 2 algorithms");
    double low = cells.front()->mean;
    double high = cells.front()->mean;
    for (const auto* cell : cells) {
      low = std::min(low, cell->mean);
      high = std::max(high, cell->mean);
    }
    const bool degenerate = !(high > low);
    for (const auto* cell : cells) {
      double score = degenerate ? 0.0 : (cell->mean - low) / (high - low);
      score = std::clamp(score, 0.0, 1.0);
      result.cells.push_back({cell->algorithm, key.first, key.second, score, degenerate});
      collected[cell->algorithm][key.second].push_back(score);
    }
  }
  for (const auto& [algorithm, dims] : collected) {
    double sum = 0.0;
    for (const auto& [d, scores] : dims) {
      const double mean = std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(scores.size());
      result.per_dimension[algorithm][d] = mean;
      sum += mean;
    }
    result.overall[algorithm] = sum / static_cast<double>(dims.size());
  }
  return result;
}

/// Upper tail of the chi-square distribution.
inline double chi_square_sf(double x, double degrees_of_freedom)
{
  if (x <= 0.0) {
    return 1.0;
  }
  return boost::math::gamma_q(0.5 * degrees_of_freedom, 0.5 * x);
}

/// Two-sided tail of the standard normal: P(|Z| >= |z|).
inline double normal_two_sided_p(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

/// Ascending ranks with mid-ranks for ties.
inline std::vector<double> midranks(std::span<const double> row)
{
  std::vector<std::size_t> order(row.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return row[a] < row[b]; });
  std::vector<double> ranks(row.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && row[order[j + 1]] == row[order[i]]) {
      ++j;
    }
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) {
      ranks[order[t]] = rank;
    }
    i = j + 1;
  }
  return ranks;
}

struct FriedmanResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::vector<double> mean_ranks;
};

/// Friedman test over rows (blocks) x columns (treatments), lower is better.
/// Tie-corrected statistic
///   Q = 12 * sum_j (R_j - N(k+1)/2)^2 / (N k (k+1) - sum_blocks sum_ties (t^3 - t) / (k-1))
/// with R_j the column rank sums; Q = 0, p = 1 when every row is fully tied.
inline FriedmanResult friedman(const std::vector<std::vector<double>>& matrix)
{
  require(matrix.size() >= 2, "friedman: need at least 2 rows");
  const std::size_t k = matrix.front().size();
  require(k >= 2, "friedman: need at least 2 columns");
  const double n = static_cast<double>(matrix.size());
  const double kd = static_cast<double>(k);

  std::vector<double> rank_sums(k, 0.0);
  double tie_term = 0.0;
  for (const auto& row : matrix) {
    require(row.size() == k, "friedman: ragged matrix");
    const auto ranks = midranks(row);
    for (std::size_t j = 0; j < k; ++j) {
      rank_sums[j] += ranks[j];
    }
    std::map<double, std::size_t> groups;
    for (double r : ranks) {
      ++groups[r];
    }
    for (const auto& [rank, t] : groups) {
      const double td = static_cast<double>(t);
      tie_term += td * td * td - td;
    }
  }

  FriedmanResult result;
  result.mean_ranks.resize(k);
  double spread = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    result.mean_ranks[j] = rank_sums[j] / n;
    const double centred = rank_sums[j] - n * (kd + 1.0) / 2.0;
    spread += centred * centred;
  }
  const double denominator = n * kd * (kd + 1.0) - tie_term / (kd - 1.0);
  if (denominator <= 0.0) {
    return result;
  }
  result.statistic = 12.0 * spread / denominator;
  result.p_value = chi_square_sf(result.statistic, kd - 1.0);
  return result;
}

enum class Direction { better, worse };

struct Comparison {
  std::string algorithm;
  double mean_rank = 0.0;
  double z = 0.0;
  double raw_p = 1.0;
  double adjusted_p = 1.0;
  Direction direction = Direction::worse;
};

/// Many-to-one z tests against `control`:
///   z = (R_control - R_j) * sqrt(6N / (k(k+1))), two-sided normal p.
/// adjusted_p is left equal to raw_p; see holm_adjust.
inline std::vector<Comparison> many_to_one(const std::vector<std::string>& algorithms,
                                           const std::vector<double>& mean_ranks, std::size_t blocks,
                                           const std::string& control)
{
  require(algorithms.size() == mean_ranks.size(), "many_to_one: names and ranks differ in length");
  const auto it = std::find(algorithms.begin(), algorithms.end(), control);
  if (it == algorithms.end()) {
    throw LookupError("control algorithm '" + control + "' not present in results");
  }
  const double k = static_cast<double>(algorithms.size());
  const double scale = std::sqrt(6.0 * static_cast<double>(blocks) / (k * (k + 1.0)));
  const double control_rank = mean_ranks[static_cast<std::size_t>(it - algorithms.begin())];
  std::vector<Comparison> out;
  for (std::size_t j = 0; j < algorithms.size(); ++j) {
    if (algorithms[j] == control) {
      continue;
    }
    Comparison c;
    c.algorithm = algorithms[j];
    c.mean_rank = mean_ranks[j];
    c.z = (control_rank - mean_ranks[j]) * scale;
    c.raw_p = normal_two_sided_p(c.z);
    c.adjusted_p = c.raw_p;
    c.direction = mean_ranks[j] < control_rank ? Direction::better : Direction::worse;
    out.push_back(c);
  }
  return out;
}

/// Holm step-down adjustment; output in input order.
inline std::vector<double> holm_adjust(const std::vector<double>& raw)
{
  for (double p : raw) {
    require(p >= 0.0 && p <= 1.0, "holm_adjust: p-values must lie in [0,1]");
  }
  const std::size_t m = raw.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return raw[a] < raw[b]; });
  std::vector<double> adjusted(m);
  double running = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    running = std::max(running, static_cast<double>(m - i) * raw[order[i]]);
    adjusted[order[i]] = std::min(1.0, running);
  }
  return adjusted;
}

struct AnalysisReport {
  std::string control;
  double alpha = 0.05;
  SummaryTable summary;
  std::vector<Winner> best_per_problem;
  BestWorstCounts counts;
  NormalizedScores normalized;
  std::vector<std::string> algorithms;
  std::size_t friedman_blocks = 0;
  FriedmanResult friedman;
  std::vector<Comparison> comparisons;
  std::vector<RunRecord> failures;
};

/// Full pipeline over a results set. Friedman blocks are the (problem,
/// dimension) cells in which every algorithm has at least one successful run.
inline AnalysisReport analyze(const ResultSet& results, const std::string& control, double alpha)
{
  require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0,1)");
  AnalysisReport report;
  report.control = control;
  report.alpha = alpha;
  report.summary = summarize(results);
  for (const auto& r : results.records) {
    if (r.failed) {
      report.failures.push_back(r);
    }
  }
  std::set<std::string> names;
  for (const auto& cell : report.summary) {
    names.insert(cell.algorithm);
  }
  report.algorithms.assign(names.begin(), names.end());
  if (std::find(names.begin(), names.end(), control) == names.end()) {
    throw LookupError("control algorithm '" + control + "' not present in results");
  }
  report.best_per_problem = best_per_problem(report.summary);
  report.counts = count_best_worst(report.summary);
  report.normalized = minmax_normalize(report.summary);

  std::vector<std::vector<double>> matrix;
  for (const auto& [key, cells] : detail::by_problem(report.summary)) {
    if (cells.size() != report.algorithms.size()) {
      continue;
    }
    std::vector<double> row;
    for (const auto* cell : cells) {
      row.push_back(cell->mean);
    }
    matrix.push_back(std::move(row));
  }
  report.friedman_blocks = matrix.size();
  if (matrix.size() >= 2) {
    report.friedman = friedman(matrix);
    report.comparisons = many_to_one(report.algorithms, report.friedman.mean_ranks, matrix.size(), control);
    std::vector<double> raw;
    for (const auto& c : report.comparisons) {
      raw.push_back(c.raw_p);
    }
    const auto adjusted = holm_adjust(raw);
    for (std::size_t i = 0; i < adjusted.size(); ++i) {
      report.comparisons[i].adjusted_p = adjusted[i];
    }
  }
  return report;
}

namespace detail {

inline std::string fixed(double value, int digits = 3)
{
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*f", digits, value);
  return buffer;
}

inline std::string scientific(double value)
{
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.3g", value);
  return buffer;
}

} // namespace detail

/// Markdown report: winners, best counts, worst counts, normalized means with
/// post-hoc comparisons, and a summary section.
inline std::string to_markdown(const AnalysisReport& report)
{
  std::ostringstream out;
  const auto& dims = report.counts.dimensions;
  auto dim_header = [&](std::string_view first, std::string_view last) {
    out << "| " << first << " |";
    for (auto d : dims) {
      out << " d=" << d << " |";
    }
    if (!last.empty()) {
      out << ' ' << last << " |";
    }
    out << "\n|---|";
    for (std::size_t i = 0; i < dims.size(); ++i) {
      out << "---|";
    }
    out << (last.empty() ? "" : "---|") << '\n';
  };

  out << "# Analysis report\n\n";
  out << "## Best algorithm per problem\n\n";
  dim_header("Problem", "");
  std::map<std::string, std::map<std::size_t, const Winner*>> grid;
  for (const auto& w : report.best_per_problem) {
    grid[w.problem][w.dimension] = &w;
  }
  for (const auto& [problem, row] : grid) {
    out << "| " << problem << " |";
    for (auto d : dims) {
      auto it = row.find(d);
      out << ' ' << (it == row.end() ? "-" : it->second->algorithm + (it->second->tie ? " (tie)" : "")) << " |";
    }
    out << '\n';
  }

  auto count_table = [&](bool best) {
    std::vector<std::pair<std::string, const AlgorithmCounts*>> rows;
    for (const auto& [name, c] : report.counts.algorithms) {
      if ((best ? c.best_total : c.worst_total) > 0) {
        rows.emplace_back(name, &c);
      }
    }
    std::stable_sort(rows.begin(), rows.end(), [&](const auto& a, const auto& b) {
      return (best ? a.second->best_total : a.second->worst_total) >
             (best ? b.second->best_total : b.second->worst_total);
    });
    dim_header("Algorithm", "Total");
    for (const auto& [name, c] : rows) {
      out << "| " << name << " |";
      for (auto d : dims) {
        out << ' ' << (best ? c->best.at(d) : c->worst.at(d)) << " |";
      }
      out << ' ' << (best ? c->best_total : c->worst_total) << " |\n";
    }
  };
  out << "\n## Best-performance counts\n\n";
  count_table(true);
  out << "\n## Worst-performance counts\n\n";
  count_table(false);

  out << "\n## Normalized fitness and comparison against " << report.control << "\n\n";
  out << "Min-max normalized mean fitness (lower is better). Post-hoc p-values are Holm adjusted (alpha = "
      << report.alpha << ").\n\n";
  out << "| Algorithm |";
  for (auto d : dims) {
    out << " d=" << d << " |";
  }
  out << " mean | p-value | vs " << report.control << " |\n|---|";
  for (std::size_t i = 0; i < dims.size() + 3; ++i) {
    out << "---|";
  }
  out << '\n';
  std::vector<std::string> order = report.algorithms;
  std::stable_sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
    return report.normalized.overall.at(a) < report.normalized.overall.at(b);
  });
  for (const auto& name : order) {
    out << "| " << name << " |";
    for (auto d : dims) {
      const auto& per = report.normalized.per_dimension.at(name);
      auto it = per.find(d);
      out << ' ' << (it == per.end() ? "-" : detail::fixed(it->second)) << " |";
    }
    out << ' ' << detail::fixed(report.normalized.overall.at(name)) << " |";
    if (name == report.control) {
      out << " - | Control |\n";
      continue;
    }
    auto it = std::find_if(report.comparisons.begin(), report.comparisons.end(),
                           [&](const Comparison& c) { return c.algorithm == name; });
    if (it == report.comparisons.end()) {
      out << " - | - |\n";
      continue;
    }
    const bool significant = it->adjusted_p < report.alpha;
    out << ' ' << detail::scientific(it->adjusted_p) << (significant ? " *" : "") << " | "
        << (it->direction == Direction::better ? "Better" : "Worse") << (significant ? "" : " (ns)") << " |\n";
  }

  out << "\n## Summary\n\n";
  out << "- Algorithms: " << report.algorithms.size() << '\n';
  out << "- Friedman blocks (problem x dimension): " << report.friedman_blocks << '\n';
  out << "- Friedman chi-square: " << detail::fixed(report.friedman.statistic, 4)
      << ", p = " << detail::scientific(report.friedman.p_value) << '\n';
  out << "- Failed runs: " << report.failures.size() << '\n';
  for (const auto& f : report.failures) {
    out << "  - " << f.algorithm << " / " << f.problem << " d=" << f.dimension << " rep " << f.repetition << ": "
        << f.error << '\n';
  }
  return out.str();
}

inline nlohmann::json to_json(const AnalysisReport& report)
{
  nlohmann::json j;
  j["control"] = report.control;
  j["alpha"] = report.alpha;
  j["algorithms"] = report.algorithms;
  for (const auto& c : report.summary) {
    j["summary"].push_back({{"algorithm", c.algorithm},
                            {"problem", c.problem},
                            {"dimension", c.dimension},
                            {"runs", c.runs},
                            {"mean", c.mean},
                            {"median", c.median},
                            {"stddev", c.stddev},
                            {"best", c.best},
                            {"worst", c.worst}});
  }
  for (const auto& w : report.best_per_problem) {
    j["best_per_problem"].push_back(
        {{"problem", w.problem}, {"dimension", w.dimension}, {"algorithm", w.algorithm}, {"tie", w.tie}});
  }
  for (const auto& [name, c] : report.counts.algorithms) {
    nlohmann::json best;
    nlohmann::json worst;
    for (auto d : report.counts.dimensions) {
      best[std::to_string(d)] = c.best.at(d);
      worst[std::to_string(d)] = c.worst.at(d);
    }
    j["counts"][name] = {{"best", best}, {"worst", worst}, {"best_total", c.best_total}, {"worst_total", c.worst_total}};
  }
  for (const auto& [name, per] : report.normalized.per_dimension) {
    nlohmann::json dims;
    for (const auto& [d, v] : per) {
      dims[std::to_string(d)] = v;
    }
    j["normalized_means"][name] = {{"per_dimension", dims}, {"overall", report.normalized.overall.at(name)}};
  }
  j["friedman"] = {{"statistic", report.friedman.statistic},
                   {"p_value", report.friedman.p_value},
                   {"blocks", report.friedman_blocks},
                   {"mean_ranks", report.friedman.mean_ranks}};
  j["comparisons"] = nlohmann::json::array();
  for (const auto& c : report.comparisons) {
    j["comparisons"].push_back({{"algorithm", c.algorithm},
                                {"mean_rank", c.mean_rank},
                                {"z", c.z},
                                {"raw_p", c.raw_p},
                                {"adjusted_p", c.adjusted_p},
                                {"direction", c.direction == Direction::better ? "better" : "worse"}});
  }
  j["failures"] = nlohmann::json::array();
  for (const auto& f : report.failures) {
    j["failures"].push_back({{"algorithm", f.algorithm},
                             {"problem", f.problem},
                             {"dimension", f.dimension},
                             {"repetition", f.repetition},
                             {"error", f.error}});
  }
  return j;
}

} // namespace swarmroles::stats
