// Command-line front end: list registries, run experiment grids, analyze results.

#ifdef SWARMROLES_CLI11_PACKAGE
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <swarmroles/swarmroles.hpp>

namespace fs = std::filesystem;
using namespace swarmroles;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_run_failed = 1;
constexpr int exit_invalid = 2;

struct RunOptions {
  std::string config;
  std::string out = "results";
  std::vector<std::size_t> dimensions;
  std::optional<std::uint64_t> repetitions;
  std::optional<std::uint64_t> budget;
  std::optional<std::size_t> swarm_size;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> algorithms;
  std::vector<std::string> problems;
  std::size_t parallelism = std::max(1u, std::thread::hardware_concurrency());
  bool resume = false;
};

struct AnalyzeOptions {
  std::string in;
  std::string out;
  std::string control = "PSO";
  double alpha = 0.05;
};

ExperimentPlan load_plan(const RunOptions& options)
{
  std::ifstream in(options.config);
  if (!in) {
    throw ParseError("cannot open config file '" + options.config + "'");
  }
  nlohmann::json document;
  try {
    in >> document;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(options.config + ": " + e.what());
  }
  ExperimentPlan plan = plan_from_json(document);

  if (options.repetitions) {
    plan.repetitions = *options.repetitions;
  }
  if (options.budget) {
    plan.max_evaluations = *options.budget;
  }
  if (options.swarm_size) {
    plan.swarm_size = *options.swarm_size;
  }
  if (options.seed) {
    plan.base_seed = *options.seed;
  }
  if (!options.algorithms.empty()) {
    const std::set<std::string> keep(options.algorithms.begin(), options.algorithms.end());
    std::erase_if(plan.algorithms, [&](const AlgorithmConfig& c) { return !keep.contains(c.name); });
  }
  if (!options.problems.empty()) {
    const std::set<std::string> keep(options.problems.begin(), options.problems.end());
    std::erase_if(plan.problems, [&](const ProblemSpec& p) { return !keep.contains(p.name); });
  }
  if (!options.dimensions.empty()) {
    std::vector<std::string> names;
    for (const auto& p : plan.problems) {
      if (std::find(names.begin(), names.end(), p.name) == names.end()) {
        names.push_back(p.name);
      }
    }
    plan.problems.clear();
    for (const auto& name : names) {
      for (auto d : options.dimensions) {
        plan.problems.push_back({name, d});
      }
    }
  }
  try {
    validate(plan);
    for (auto config : plan.algorithms) {
      config.swarm_size = plan.swarm_size;
      config.max_evaluations = plan.max_evaluations;
      validate(config);
    }
  } catch (const ContractViolation& e) {
    throw ParseError(e.what());
  }
  return plan;
}

int run_command(const RunOptions& options)
{
  ExperimentPlan plan;
  try {
    plan = load_plan(options);
  } catch (const std::exception& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return exit_invalid;
  }

  const fs::path out = options.out;
  std::optional<ResultSet> previous;
  if (options.resume && fs::exists(out / "results.csv")) {
    previous = read_results(out / "results.csv");
  }

  const std::size_t total = plan.algorithms.size() * plan.problems.size() * plan.repetitions;
  std::cerr << "running " << total << " runs (" << plan.algorithms.size() << " algorithms x "
            << plan.problems.size() << " problems x " << plan.repetitions << " repetitions) on "
            << options.parallelism << " threads\n";
  ResultSet results = execute(plan, options.parallelism, previous ? &*previous : nullptr);
  write_results(results, out);
  std::cerr << "wrote " << (out / "results.csv").string() << " and " << (out / "plan.json").string() << '\n';

  if (results.any_failed()) {
    for (const auto& r : results.records) {
      if (r.failed) {
        std::cerr << "failed: " << r.algorithm << " / " << r.problem << " d=" << r.dimension << " rep "
                  << r.repetition << ": " << r.error << '\n';
      }
    }
    return exit_run_failed;
  }
  return exit_ok;
}

int analyze_command(const AnalyzeOptions& options)
{
  ResultSet results;
  stats::AnalysisReport report;
  try {
    results = read_results(options.in);
    report = stats::analyze(results, options.control, options.alpha);
  } catch (const std::exception& e) {
    std::cerr << "analyze: " << e.what() << '\n';
    return exit_invalid;
  }
  const fs::path out = options.out.empty() ? fs::path(options.in).parent_path() : fs::path(options.out);
  if (!out.empty()) {
    fs::create_directories(out);
  }
  std::ofstream(out / "report.md") << stats::to_markdown(report);
  std::ofstream(out / "report.json") << stats::to_json(report).dump(2) << '\n';
  std::cerr << "wrote " << (out / "report.md").string() << " and " << (out / "report.json").string() << '\n';
  return report.failures.empty() ? exit_ok : exit_run_failed;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Role-based particle swarm variants: benchmarks, experiments and analysis"};
  app.require_subcommand(1);

  auto* list_problems_cmd = app.add_subcommand("list-problems", "Print the benchmark registry");
  auto* list_algorithms_cmd = app.add_subcommand("list-algorithms", "Print the algorithm registry");

  RunOptions run_options;
  auto* run_cmd = app.add_subcommand("run", "Execute an experiment grid from a JSON config");
  run_cmd->add_option("--config", run_options.config, "Experiment config (JSON)")->required();
  run_cmd->add_option("--out", run_options.out, "Output directory")->capture_default_str();
  run_cmd->add_option("--dimensions", run_options.dimensions, "Override dimensions")->delimiter(',');
  run_cmd->add_option("--repetitions", run_options.repetitions, "Override repetitions");
  run_cmd->add_option("--budget", run_options.budget, "Override max evaluations per run");
  run_cmd->add_option("--swarm-size", run_options.swarm_size, "Override swarm size");
  run_cmd->add_option("--seed", run_options.seed, "Override base seed");
  run_cmd->add_option("--algorithms", run_options.algorithms, "Keep only these algorithm names")->delimiter(',');
  run_cmd->add_option("--problems", run_options.problems, "Keep only these problem names")->delimiter(',');
  run_cmd->add_option("--parallelism,-j", run_options.parallelism, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  run_cmd->add_flag("--resume", run_options.resume, "Skip runs already present in the output directory");

  AnalyzeOptions analyze_options;
  auto* analyze_cmd = app.add_subcommand("analyze", "Build the markdown/JSON report from a results CSV");
  analyze_cmd->add_option("--in", analyze_options.in, "results.csv written by run")->required();
  analyze_cmd->add_option("--out", analyze_options.out, "Report directory (default: next to the CSV)");
  analyze_cmd->add_option("--control", analyze_options.control, "Control algorithm")->capture_default_str();
  analyze_cmd->add_option("--alpha", analyze_options.alpha, "Significance level")
      ->check(CLI::Range(0.0, 1.0).description("in (0,1)"))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_invalid;
  }
  if (analyze_cmd->parsed() && !(analyze_options.alpha > 0.0 && analyze_options.alpha < 1.0)) {
    std::cerr << "--alpha must lie strictly between 0 and 1\n";
    return exit_invalid;
  }

  if (list_problems_cmd->parsed()) {
    for (const auto& entry : function_catalog()) {
      std::cout << entry.name << (entry.tuning_only ? "\t(tuning-only)" : "") << '\n';
    }
    return exit_ok;
  }
  if (list_algorithms_cmd->parsed()) {
    for (auto name : algorithm_names) {
      std::cout << name << '\n';
    }
    return exit_ok;
  }
  if (run_cmd->parsed()) {
    return run_command(run_options);
  }
  return analyze_command(analyze_options);
}
