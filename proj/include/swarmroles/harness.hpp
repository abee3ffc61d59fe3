#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "benchmark/problem.hpp"
#include "config.hpp"
#include "error.hpp"
#include "swarm.hpp"

namespace swarmroles {

struct ProblemSpec {
  std::string name;
  std::size_t dimension;

  friend auto operator<=>(const ProblemSpec&, const ProblemSpec&) = default;
};

struct ExperimentPlan {
  std::vector<AlgorithmConfig> algorithms;
  std::vector<ProblemSpec> problems;
  std::uint64_t repetitions = 1;
  std::uint64_t base_seed = 0;
  std::uint64_t max_evaluations = 25'000;
  std::size_t swarm_size = 100;

  friend bool operator==(const ExperimentPlan&, const ExperimentPlan&) = default;
};

struct RunRecord {
  std::string algorithm;
  std::string problem;
  std::size_t dimension = 0;
  std::uint64_t repetition = 0;
  std::uint64_t seed = 0;
  double final_best_fitness = 0.0;
  std::uint64_t evaluations_used = 0;
  std::vector<TrajectoryPoint> trajectory;
  double wall_time_s = 0.0;
  bool failed = false;
  std::string error;

  auto key() const { return std::tie(algorithm, problem, dimension, repetition); }
  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct ResultSet {
  ExperimentPlan plan;
  std::vector<RunRecord> records;

  bool any_failed() const
  {
    return std::any_of(records.begin(), records.end(), [](const RunRecord& r) { return r.failed; });
  }
  friend bool operator==(const ResultSet&, const ResultSet&) = default;
};

/// Repetition index used when deriving the seed of a problem instance, so
/// that every algorithm faces the same shift and rotation.
inline constexpr std::uint64_t problem_instance_repetition = ~std::uint64_t{0};

/// Seed for one cell of the grid.
///
/// Construction: FNV-1a (64-bit) over the byte string
///   le64(base_seed) || algorithm || 0x00 || problem || 0x00 || le64(dimension) || le64(repetition)
/// followed by the SplitMix64 finalizer (see mix64).
inline std::uint64_t derive_seed(std::uint64_t base_seed, std::string_view algorithm, std::string_view problem,
                                 std::uint64_t dimension, std::uint64_t repetition)
{
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  auto byte = [&](unsigned char b) {
    hash ^= b;
    hash *= 0x100000001b3ULL;
  };
  auto word = [&](std::uint64_t w) {
    for (int i = 0; i < 8; ++i) {
      byte(static_cast<unsigned char>(w >> (8 * i)));
    }
  };
  auto text = [&](std::string_view s) {
    for (char c : s) {
      byte(static_cast<unsigned char>(c));
    }
    byte(0);
  };
  word(base_seed);
  text(algorithm);
  text(problem);
  word(dimension);
  word(repetition);
  return mix64(hash);
}

inline std::uint64_t problem_seed(std::uint64_t base_seed, std::string_view problem, std::uint64_t dimension)
{
  return derive_seed(base_seed, "", problem, dimension, problem_instance_repetition);
}

inline void sort_canonically(std::vector<RunRecord>& records)
{
  std::sort(records.begin(), records.end(),
            [](const RunRecord& a, const RunRecord& b) { return a.key() < b.key(); });
}

inline void validate(const ExperimentPlan& plan)
{
  require(plan.repetitions >= 1, "plan: repetitions must be >= 1");
  require(plan.swarm_size >= 2, "plan: swarm_size must be >= 2");
  require(plan.max_evaluations >= plan.swarm_size, "plan: max_evaluations must be >= swarm_size");
  std::set<std::string> names;
  for (const auto& config : plan.algorithms) {
    require(names.insert(config.name).second, "plan: duplicate algorithm name '" + config.name + "'");
  }
  std::set<ProblemSpec> problems(plan.problems.begin(), plan.problems.end());
  require(problems.size() == plan.problems.size(), "plan: duplicate (problem, dimension) entry");
}

/// Runs every (algorithm, problem, repetition) cell exactly once on up to
/// `parallelism` threads. Records already in `resume` (and not failed) are
/// kept instead of being rerun. A failing run becomes a flagged record.
inline ResultSet execute(const ExperimentPlan& plan, std::size_t parallelism, const ResultSet* resume = nullptr)
{
  validate(plan);
  require(parallelism >= 1, "parallelism must be >= 1");

  // Instances are built once and shared read-only by all runs.
  std::vector<std::optional<Problem>> instances;
  std::vector<std::string> instance_errors(plan.problems.size());
  for (std::size_t p = 0; p < plan.problems.size(); ++p) {
    const auto& spec = plan.problems[p];
    try {
      instances.emplace_back(
          make_problem(spec.name, spec.dimension, problem_seed(plan.base_seed, spec.name, spec.dimension)));
    } catch (const std::exception& e) {
      instances.emplace_back(std::nullopt);
      instance_errors[p] = e.what();
    }
  }

  std::map<std::tuple<std::string, std::string, std::size_t, std::uint64_t>, const RunRecord*> done;
  if (resume) {
    for (const auto& record : resume->records) {
      if (!record.failed) {
        done.emplace(record.key(), &record);
      }
    }
  }

  struct Task {
    std::size_t algorithm;
    std::size_t problem;
    std::uint64_t repetition;
  };
  ResultSet results;
  results.plan = plan;
  std::vector<Task> tasks;
  for (std::size_t a = 0; a < plan.algorithms.size(); ++a) {
    for (std::size_t p = 0; p < plan.problems.size(); ++p) {
      for (std::uint64_t r = 0; r < plan.repetitions; ++r) {
        auto found = done.find({plan.algorithms[a].name, plan.problems[p].name, plan.problems[p].dimension, r});
        if (found != done.end()) {
          results.records.push_back(*found->second);
        } else {
          tasks.push_back({a, p, r});
        }
      }
    }
  }

  std::vector<RunRecord> fresh(tasks.size());
  auto run_task = [&](const Task& task, RunRecord& record) {
    AlgorithmConfig config = plan.algorithms[task.algorithm];
    config.max_evaluations = plan.max_evaluations;
    config.swarm_size = plan.swarm_size;
    const auto& spec = plan.problems[task.problem];
    record.algorithm = config.name;
    record.problem = spec.name;
    record.dimension = spec.dimension;
    record.repetition = task.repetition;
    record.seed = derive_seed(plan.base_seed, config.name, spec.name, spec.dimension, task.repetition);
    try {
      const auto& instance = instances[task.problem];
      if (!instance) {
        throw EvaluationFailure(instance_errors[task.problem]);
      }
      RunOutcome outcome = run(*instance, config, record.seed);
      record.final_best_fitness = outcome.final_best_fitness;
      record.evaluations_used = outcome.evaluations_used;
      record.trajectory = std::move(outcome.trajectory);
      record.wall_time_s = outcome.wall_time_s;
    } catch (const std::exception& e) {
      record.failed = true;
      record.error = e.what();
      record.final_best_fitness = std::numeric_limits<double>::quiet_NaN();
      record.evaluations_used = 0;
      record.trajectory.clear();
    }
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      run_task(tasks[i], fresh[i]);
    }
  };
  const std::size_t threads = std::min(parallelism, std::max<std::size_t>(tasks.size(), 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back(worker);
    }
  }

  std::move(fresh.begin(), fresh.end(), std::back_inserter(results.records));
  sort_canonically(results.records);
  return results;
}

// ---------------------------------------------------------------------------
// JSON forms of configs and plans

inline nlohmann::json to_json(const AlgorithmConfig& config)
{
  return {{"name", config.name},
          {"variant", role_name(config.variant)},
          {"omega", config.omega},
          {"c1", config.c1},
          {"c2", config.c2},
          {"role_coefficient", config.role_coefficient},
          {"role_fraction", config.role_fraction},
          {"lambda", config.lambda},
          {"sigma", config.sigma},
          {"noise_scale", config.noise_scale == NoiseScale::relative ? "relative" : "absolute"}};
}

namespace detail {

template <typename T>
T field(const nlohmann::json& object, const std::string& key, const std::string& context)
{
  try {
    return object.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(context + "." + key + ": " + e.what());
  }
}

inline void reject_unknown_keys(const nlohmann::json& object, std::initializer_list<std::string_view> known,
                                const std::string& context)
{
  for (const auto& [key, value] : object.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ParseError(context + ": unknown field '" + key + "'");
    }
  }
}

} // namespace detail

/// Reads an algorithm entry. Missing coefficients fall back to `defaults`,
/// then to the variant's built-in configuration.
inline AlgorithmConfig config_from_json(const nlohmann::json& entry, const std::string& context,
                                        const nlohmann::json& defaults = nlohmann::json::object())
{
  if (entry.is_string()) {
    return config_from_json(nlohmann::json{{"variant", entry.get<std::string>()}}, context, defaults);
  }
  if (!entry.is_object()) {
    throw ParseError(context + ": expected an algorithm name or object");
  }
  detail::reject_unknown_keys(entry,
                              {"name", "variant", "omega", "c1", "c2", "role_coefficient", "role_fraction",
                               "lambda", "sigma", "noise_scale"},
                              context);
  Role variant;
  try {
    variant = parse_role(detail::field<std::string>(entry, "variant", context));
  } catch (const LookupError& e) {
    throw ParseError(context + ".variant: " + e.what());
  }
  AlgorithmConfig config = default_config(variant);
  nlohmann::json merged = defaults;
  merged.update(entry);
  auto number = [&](const char* key, double& out) {
    if (merged.contains(key)) {
      out = detail::field<double>(merged, key, context);
    }
  };
  if (merged.contains("name")) {
    config.name = detail::field<std::string>(merged, "name", context);
  }
  number("omega", config.omega);
  number("c1", config.c1);
  number("c2", config.c2);
  number("role_coefficient", config.role_coefficient);
  number("role_fraction", config.role_fraction);
  number("lambda", config.lambda);
  number("sigma", config.sigma);
  if (merged.contains("noise_scale")) {
    const auto scale = detail::field<std::string>(merged, "noise_scale", context);
    if (scale == "relative") {
      config.noise_scale = NoiseScale::relative;
    } else if (scale == "absolute") {
      config.noise_scale = NoiseScale::absolute;
    } else {
      throw ParseError(context + ".noise_scale: expected 'relative' or 'absolute', got '" + scale + "'");
    }
  }
  return config;
}

inline nlohmann::json to_json(const ExperimentPlan& plan)
{
  nlohmann::json algorithms = nlohmann::json::array();
  for (const auto& config : plan.algorithms) {
    algorithms.push_back(to_json(config));
  }
  nlohmann::json problems = nlohmann::json::array();
  for (const auto& spec : plan.problems) {
    problems.push_back({{"name", spec.name}, {"dimension", spec.dimension}});
  }
  return {{"algorithms", algorithms},           {"problems", problems},
          {"repetitions", plan.repetitions},    {"base_seed", plan.base_seed},
          {"max_evaluations", plan.max_evaluations}, {"swarm_size", plan.swarm_size}};
}

/// Parses an experiment description. Problems may be listed as objects with
/// name and dimension, or as names crossed with a top-level "dimensions"
/// array. Either list may be the string "all".
inline ExperimentPlan plan_from_json(const nlohmann::json& document)
{
  const std::string root = "config";
  if (!document.is_object()) {
    throw ParseError(root + ": expected a JSON object");
  }
  detail::reject_unknown_keys(document,
                              {"algorithms", "problems", "dimensions", "repetitions", "base_seed",
                               "max_evaluations", "swarm_size", "defaults", "failures"},
                              root);
  ExperimentPlan plan;
  if (document.contains("repetitions")) {
    plan.repetitions = detail::field<std::uint64_t>(document, "repetitions", root);
  }
  if (document.contains("base_seed")) {
    plan.base_seed = detail::field<std::uint64_t>(document, "base_seed", root);
  }
  if (document.contains("max_evaluations")) {
    plan.max_evaluations = detail::field<std::uint64_t>(document, "max_evaluations", root);
  }
  if (document.contains("swarm_size")) {
    plan.swarm_size = detail::field<std::size_t>(document, "swarm_size", root);
  }

  const nlohmann::json defaults = document.value("defaults", nlohmann::json::object());
  if (!defaults.is_object()) {
    throw ParseError(root + ".defaults: expected an object");
  }
  detail::reject_unknown_keys(defaults,
                              {"omega", "c1", "c2", "role_coefficient", "role_fraction", "lambda", "sigma",
                               "noise_scale"},
                              root + ".defaults");
  const nlohmann::json algorithms = document.value("algorithms", nlohmann::json("all"));
  if (algorithms.is_string() && algorithms.get<std::string>() == "all") {
    for (Role role : all_roles) {
      plan.algorithms.push_back(
          config_from_json(nlohmann::json{{"variant", role_name(role)}}, root + ".defaults", defaults));
    }
  } else if (algorithms.is_array()) {
    for (std::size_t i = 0; i < algorithms.size(); ++i) {
      plan.algorithms.push_back(
          config_from_json(algorithms[i], root + ".algorithms[" + std::to_string(i) + "]", defaults));
    }
  } else {
    throw ParseError(root + ".algorithms: expected \"all\" or an array");
  }

  std::vector<std::size_t> dimensions;
  if (document.contains("dimensions")) {
    dimensions = detail::field<std::vector<std::size_t>>(document, "dimensions", root);
  }
  const nlohmann::json problems = document.value("problems", nlohmann::json::array());
  auto add_named = [&](const std::string& name, const std::string& context) {
    try {
      (void)find_function(name);
    } catch (const LookupError& e) {
      throw ParseError(context + ": " + e.what());
    }
    if (dimensions.empty()) {
      throw ParseError(root + ".dimensions: required when problems are given by name");
    }
    for (auto d : dimensions) {
      plan.problems.push_back({name, d});
    }
  };
  if (problems.is_string() && problems.get<std::string>() == "all") {
    for (const auto& entry : function_catalog()) {
      if (!entry.tuning_only) {
        add_named(std::string(entry.name), root + ".problems");
      }
    }
  } else if (problems.is_array()) {
    for (std::size_t i = 0; i < problems.size(); ++i) {
      const std::string context = root + ".problems[" + std::to_string(i) + "]";
      if (problems[i].is_string()) {
        add_named(problems[i].get<std::string>(), context);
      } else {
        const auto name = detail::field<std::string>(problems[i], "name", context);
        try {
          (void)find_function(name);
        } catch (const LookupError& e) {
          throw ParseError(context + ".name: " + e.what());
        }
        plan.problems.push_back({name, detail::field<std::size_t>(problems[i], "dimension", context)});
      }
    }
  } else {
    throw ParseError(root + ".problems: expected \"all\" or an array");
  }

  try {
    validate(plan);
    for (const auto& config : plan.algorithms) {
      AlgorithmConfig effective = config;
      effective.swarm_size = plan.swarm_size;
      effective.max_evaluations = plan.max_evaluations;
      validate(effective);
    }
  } catch (const ContractViolation& e) {
    throw ParseError(e.what());
  }
  return plan;
}

// ---------------------------------------------------------------------------
// Results files

inline constexpr std::string_view results_header =
    "algorithm,problem,dimension,repetition,seed,final_best_fitness,evaluations,wall_time_s";
inline constexpr std::string_view trajectory_header = "algorithm,problem,dimension,repetition,iteration,best_fitness";

namespace detail {

inline std::string format_double(double value)
{
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, end);
}

inline std::vector<std::string> split_csv_line(const std::string& line)
{
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        current += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        current += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

inline std::string csv_field(const std::string& text)
{
  if (text.find_first_of(",\"\n") == std::string::npos) {
    return text;
  }
  std::string quoted = "\"";
  for (char c : text) {
    quoted += c;
    if (c == '"') {
      quoted += '"';
    }
  }
  return quoted + "\"";
}

template <typename T>
T parse_number(const std::string& text, const std::string& where)
{
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError(where + ": cannot parse '" + text + "' as a number");
  }
  return value;
}

/// Maps required column names to their index in a header line.
inline std::map<std::string, std::size_t> column_index(const std::string& header_line,
                                                       std::string_view required, const std::string& file)
{
  const auto header = split_csv_line(header_line);
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < header.size(); ++i) {
    index[header[i]] = i;
  }
  for (const auto& name : split_csv_line(std::string(required))) {
    if (!index.contains(name)) {
      throw ParseError(file + ":1: missing column '" + name + "'");
    }
  }
  return index;
}

inline std::string strip_cr(std::string line)
{
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  return line;
}

} // namespace detail

/// Writes results.csv, trajectories.csv and plan.json into `directory`.
/// plan.json also lists failed runs with their diagnostics.
inline void write_results(const ResultSet& results, const std::filesystem::path& directory)
{
  std::filesystem::create_directories(directory);
  {
    std::ofstream out(directory / "results.csv");
    if (!out) {
      throw std::runtime_error("cannot write " + (directory / "results.csv").string());
    }
    out << results_header << '\n';
    for (const auto& r : results.records) {
      out << detail::csv_field(r.algorithm) << ',' << detail::csv_field(r.problem) << ',' << r.dimension << ','
          << r.repetition << ',' << r.seed << ',' << detail::format_double(r.final_best_fitness) << ','
          << r.evaluations_used << ',' << detail::format_double(r.wall_time_s) << '\n';
    }
  }
  {
    std::ofstream out(directory / "trajectories.csv");
    out << trajectory_header << '\n';
    for (const auto& r : results.records) {
      for (const auto& point : r.trajectory) {
        out << detail::csv_field(r.algorithm) << ',' << detail::csv_field(r.problem) << ',' << r.dimension
            << ',' << r.repetition << ',' << point.iteration << ',' << detail::format_double(point.best_fitness)
            << '\n';
      }
    }
  }
  nlohmann::json plan = to_json(results.plan);
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& r : results.records) {
    if (r.failed) {
      failures.push_back({{"algorithm", r.algorithm},
                          {"problem", r.problem},
                          {"dimension", r.dimension},
                          {"repetition", r.repetition},
                          {"error", r.error}});
    }
  }
  plan["failures"] = failures;
  std::ofstream(directory / "plan.json") << plan.dump(2) << '\n';
}

/// Reads a results CSV. The plan descriptor and trajectories are picked up
/// from plan.json and trajectories.csv next to it when those exist.
inline ResultSet read_results(const std::filesystem::path& csv_path)
{
  std::ifstream in(csv_path);
  if (!in) {
    throw ParseError("cannot open " + csv_path.string());
  }
  const std::string file = csv_path.string();
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError(file + ": empty file");
  }
  const auto column = detail::column_index(detail::strip_cr(line), results_header, file);

  ResultSet results;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    line = detail::strip_cr(line);
    if (line.empty()) {
      continue;
    }
    const auto fields = detail::split_csv_line(line);
    auto get = [&](const std::string& name) -> const std::string& {
      const std::size_t i = column.at(name);
      if (i >= fields.size()) {
        throw ParseError(file + ":" + std::to_string(line_number) + ": missing field '" + name + "'");
      }
      return fields[i];
    };
    auto where = [&](const std::string& name) { return file + ":" + std::to_string(line_number) + ": " + name; };
    RunRecord r;
    r.algorithm = get("algorithm");
    r.problem = get("problem");
    r.dimension = detail::parse_number<std::size_t>(get("dimension"), where("dimension"));
    r.repetition = detail::parse_number<std::uint64_t>(get("repetition"), where("repetition"));
    r.seed = detail::parse_number<std::uint64_t>(get("seed"), where("seed"));
    r.final_best_fitness = detail::parse_number<double>(get("final_best_fitness"), where("final_best_fitness"));
    r.evaluations_used = detail::parse_number<std::uint64_t>(get("evaluations"), where("evaluations"));
    r.wall_time_s = detail::parse_number<double>(get("wall_time_s"), where("wall_time_s"));
    r.failed = std::isnan(r.final_best_fitness);
    results.records.push_back(std::move(r));
  }

  using Key = std::tuple<std::string, std::string, std::size_t, std::uint64_t>;
  std::map<Key, RunRecord*> by_key;
  for (auto& r : results.records) {
    by_key[r.key()] = &r;
  }

  const auto directory = csv_path.parent_path();
  const auto plan_path = directory / "plan.json";
  if (std::filesystem::exists(plan_path)) {
    nlohmann::json document;
    try {
      std::ifstream(plan_path) >> document;
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(plan_path.string() + ": " + e.what());
    }
    results.plan = plan_from_json(document);
    for (const auto& failure : document.value("failures", nlohmann::json::array())) {
      Key key{failure.at("algorithm").get<std::string>(), failure.at("problem").get<std::string>(),
              failure.at("dimension").get<std::size_t>(), failure.at("repetition").get<std::uint64_t>()};
      if (auto it = by_key.find(key); it != by_key.end()) {
        it->second->failed = true;
        it->second->error = failure.at("error").get<std::string>();
      }
    }
  }

  const auto trajectory_path = directory / "trajectories.csv";
  if (std::filesystem::exists(trajectory_path)) {
    std::ifstream traj(trajectory_path);
    const std::string tfile = trajectory_path.string();
    std::getline(traj, line);
    const auto tcol = detail::column_index(detail::strip_cr(line), trajectory_header, tfile);
    std::size_t tline = 1;
    while (std::getline(traj, line)) {
      ++tline;
      line = detail::strip_cr(line);
      if (line.empty()) {
        continue;
      }
      const auto f = detail::split_csv_line(line);
      auto where = [&](const std::string& name) { return tfile + ":" + std::to_string(tline) + ": " + name; };
      auto get = [&](const std::string& name) -> const std::string& {
        const std::size_t i = tcol.at(name);
        if (i >= f.size()) {
          throw ParseError(where(name) + ": missing field");
        }
        return f[i];
      };
      Key key{get("algorithm"), get("problem"),
              detail::parse_number<std::size_t>(get("dimension"), where("dimension")),
              detail::parse_number<std::uint64_t>(get("repetition"), where("repetition"))};
      auto it = by_key.find(key);
      if (it == by_key.end()) {
        throw ParseError(where("algorithm") + ": trajectory row has no matching result record");
      }
      it->second->trajectory.push_back(
          {detail::parse_number<std::uint64_t>(get("iteration"), where("iteration")),
           detail::parse_number<double>(get("best_fitness"), where("best_fitness"))});
    }
  }
  return results;
}

} // namespace swarmroles
