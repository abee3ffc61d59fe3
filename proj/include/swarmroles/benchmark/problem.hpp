#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "../error.hpp"
#include "../random.hpp"
#include "functions.hpp"

namespace swarmroles {

struct Bounds {
  double low;
  double high;

  double width() const { return high - low; }
  friend bool operator==(const Bounds&, const Bounds&) = default;
};

using BaseFunction = double (*)(std::span<const double>, Random*);

/// Where the minimum of a base function lies, if it is known in closed form.
enum class OptimumKind {
  none,
  origin,         // minimum at y = 0
  styblinski,     // every coordinate at the 1-d Styblinski-Tang minimizer
  reciprocal,     // y_i = 1/i
};

/// Static description of one named benchmark.
struct FunctionEntry {
  std::string_view name;
  BaseFunction base;
  double low;
  double high;
  bool shifted;
  bool rotated;
  bool tuning_only;
  OptimumKind optimum;
  /// Optimal value as a function of d (unused when optimum is none).
  double (*optimal_value)(std::size_t);
  std::size_t min_dimension = 2;
};

namespace detail {

inline double zero(std::size_t) { return 0.0; }
inline double crowned_cross_value(std::size_t d) { return 1e-4 * static_cast<double>(d - 1); }
inline double styblinski_value(std::size_t d)
{
  return functions::styblinski_tang_min * static_cast<double>(d);
}

namespace fn = functions;
using enum OptimumKind;

// Table order is alphabetical for the benchmark suite, tuning functions last.
inline constexpr FunctionEntry catalog[] = {
    {"Alpine N1", fn::alpine_n1, -10, 10, false, false, false, origin, zero},
    {"Crowned Cross", fn::crowned_cross, -10, 10, false, false, false, origin, crowned_cross_value},
    {"Egg-Holder", fn::egg_holder, -512, 512, false, false, false, none, nullptr},
    {"Expanded Shaffer", fn::expanded_schaffer, -100, 100, false, false, false, origin, zero},
    {"Generalized Schaffer N1", fn::schaffer_n1, -100, 100, false, false, false, origin, zero},
    {"Generalized Schaffer N2", fn::schaffer_n2, -100, 100, false, false, false, origin, zero},
    {"Generalized Schaffer N3", fn::schaffer_n3, -100, 100, false, false, false, none, nullptr},
    {"Generalized Schaffer N4", fn::schaffer_n4, -100, 100, false, false, false, none, nullptr},
    {"Generalized Schmidt-Vetters", fn::schmidt_vetters, 0, 10, false, false, false, none, nullptr, 3},
    {"Lennard-Jones Minimum Energy Cluster", fn::lennard_jones, -4, 4, false, false, false, none, nullptr, 6},
    {"Michalewicz", fn::michalewicz, 0, fn::pi, false, false, false, none, nullptr},
    {"Mishra N3", fn::mishra_n3, -10, 10, false, false, false, none, nullptr},
    {"Mishra N4", fn::mishra_n4, -10, 10, false, false, false, none, nullptr},
    {"Modified Rosenbrock No.02", fn::modified_rosenbrock, -100, 100, false, false, false, origin, zero},
    {"Rotated Bent Cigar", fn::bent_cigar, -100, 100, false, true, false, origin, zero},
    {"Rotated Discus", fn::discus, -100, 100, false, true, false, origin, zero},
    {"Rotated High Conditioned Elliptic", fn::high_conditioned_elliptic, -100, 100, false, true, false, origin, zero},
    {"Salomon", fn::salomon, -100, 100, false, false, false, origin, zero},
    {"Schwefel N20", fn::schwefel_n20, -100, 100, false, false, false, origin, zero},
    {"Schwefel N36", fn::schwefel_n36, 0, 500, false, false, false, none, nullptr},
    {"Schwefel N6", fn::schwefel_n6, -100, 100, false, false, false, none, nullptr},
    {"Shifted Schwefel", fn::schwefel_12, -100, 100, true, false, false, origin, zero},
    {"Shifted and Rotated HGBat", fn::hgbat, -100, 100, true, true, false, origin, zero},
    {"Shifted and Rotated HappyCat", fn::happycat, -100, 100, true, true, false, origin, zero},
    {"Shifted and Rotated Schaffer F7", fn::schaffer_f7, -100, 100, true, true, false, origin, zero},
    {"Shifted and Rotated Weierstrass", fn::weierstrass, -100, 100, true, true, false, origin, zero},
    {"Shubert N3", fn::shubert_n3, -10, 10, false, false, false, none, nullptr},
    {"Shubert N4", fn::shubert_n4, -10, 10, false, false, false, none, nullptr},
    {"SineEnvelope", fn::sine_envelope, -100, 100, false, false, false, origin, zero},
    {"Stochastic", fn::stochastic, -5, 5, false, false, false, reciprocal, zero},
    {"StretchedV", fn::stretched_v, -10, 10, false, false, false, origin, zero},
    {"Styblinski-Tang", fn::styblinski_tang, -5, 5, false, false, false, styblinski, styblinski_value},
    {"Sphere", fn::sphere, -5.12, 5.12, false, false, true, origin, zero},
    {"Rastrigin", fn::rastrigin, -5.12, 5.12, false, false, true, origin, zero},
    {"Ackley", fn::ackley, -32.768, 32.768, false, false, true, origin, zero},
};

// Stream separators so shift, rotation and noise never share a generator.
inline constexpr std::uint64_t shift_stream = 0x5348494654ULL;
inline constexpr std::uint64_t rotation_stream = 0x524f544154ULL;
inline constexpr std::uint64_t noise_stream = 0x4e4f495345ULL;

} // namespace detail

inline std::span<const FunctionEntry> function_catalog() { return detail::catalog; }

inline const FunctionEntry& find_function(std::string_view name)
{
  for (const auto& entry : detail::catalog) {
    if (entry.name == name) {
      return entry;
    }
  }
  std::string valid;
  for (const auto& entry : detail::catalog) {
    valid += valid.empty() ? "" : ", ";
    valid += entry.name;
  }
  throw LookupError("unknown problem '" + std::string(name) + "'; valid: " + valid);
}

/// Every registered name: the 32 suite functions followed by the three
/// tuning-only functions.
inline std::vector<std::string> list_problems()
{
  std::vector<std::string> names;
  for (const auto& entry : detail::catalog) {
    names.emplace_back(entry.name);
  }
  return names;
}

inline bool is_tuning_only(std::string_view name) { return find_function(name).tuning_only; }

/// Haar-distributed orthogonal matrix: QR of a standard normal matrix with the
/// signs fixed so the triangular factor has a positive diagonal.
inline Eigen::MatrixXd random_orthogonal(std::size_t dimension, Random& rng)
{
  require(dimension >= 2, "random_orthogonal requires dimension >= 2");
  const auto n = static_cast<Eigen::Index>(dimension);
  Eigen::MatrixXd gaussian(n, n);
  for (Eigen::Index row = 0; row < n; ++row) {
    for (Eigen::Index col = 0; col < n; ++col) {
      gaussian(row, col) = rng.normal();
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd& r = qr.matrixQR();
  for (Eigen::Index col = 0; col < n; ++col) {
    if (r(col, col) < 0.0) {
      q.col(col) *= -1.0;
    }
  }
  return q;
}

struct OptimumInfo {
  std::optional<std::vector<double>> position;
  std::optional<double> value;
};

class Objective;

/// An immutable benchmark instance: base function, dimension, box, and the
/// optional shift and rotation applied as f(R (x - shift)).
class Problem {
  public:
    Problem(const FunctionEntry& entry, std::size_t dimension, std::uint64_t seed,
            std::optional<std::vector<double>> shift, std::shared_ptr<const Eigen::MatrixXd> rotation)
        : entry_(&entry), dimension_(dimension), seed_(seed),
          bounds_(dimension, Bounds{entry.low, entry.high}), shift_(std::move(shift)),
          rotation_(std::move(rotation)), noise_seed_(mix64(seed ^ detail::noise_stream))
    {}

    const std::string_view name() const { return entry_->name; }
    std::size_t dimension() const { return dimension_; }
    std::uint64_t seed() const { return seed_; }
    const FunctionEntry& entry() const { return *entry_; }

    std::span<const Bounds> bounds() const { return bounds_; }
    const Bounds& bounds(std::size_t i) const { return bounds_[i]; }

    const std::optional<std::vector<double>>& shift() const { return shift_; }
    const Eigen::MatrixXd* rotation() const { return rotation_.get(); }

    bool stochastic() const { return entry_->base == functions::stochastic; }
    std::uint64_t noise_seed() const { return noise_seed_; }

    /// Same instance with a uniform box [low, high] in every dimension.
    Problem with_bounds(double low, double high) const
    {
      require(low < high, "bounds require low < high");
      Problem copy = *this;
      std::fill(copy.bounds_.begin(), copy.bounds_.end(), Bounds{low, high});
      return copy;
    }

    /// Pure evaluation. The stochastic function draws its weights from a
    /// fresh copy of the problem's noise generator on every call.
    double evaluate(std::span<const double> x) const
    {
      Random noise(noise_seed_);
      std::vector<double> scratch(dimension_);
      std::vector<double> transformed(dimension_);
      return evaluate_into(x, scratch, transformed, &noise);
    }

    /// Evaluation with an external noise generator that advances per call.
    double evaluate(std::span<const double> x, Random& noise) const
    {
      std::vector<double> scratch(dimension_);
      std::vector<double> transformed(dimension_);
      return evaluate_into(x, scratch, transformed, &noise);
    }

    /// Per-run evaluator with its own scratch space and noise stream.
    Objective objective() const;

    /// y = R (x - shift), written into `out`.
    void transform(std::span<const double> x, std::span<double> scratch, std::span<double> out) const
    {
      require(x.size() == dimension_, "point has dimension " + std::to_string(x.size()) +
                                          ", problem expects " + std::to_string(dimension_));
      std::span<const double> centred = x;
      if (shift_) {
        for (std::size_t i = 0; i < dimension_; ++i) {
          scratch[i] = x[i] - (*shift_)[i];
        }
        centred = scratch;
      }
      if (rotation_) {
        const auto n = static_cast<Eigen::Index>(dimension_);
        Eigen::Map<const Eigen::VectorXd> in(centred.data(), n);
        Eigen::Map<Eigen::VectorXd> result(out.data(), n);
        result.noalias() = *rotation_ * in;
      } else {
        std::copy(centred.begin(), centred.end(), out.begin());
      }
    }

  private:
    double evaluate_into(std::span<const double> x, std::span<double> scratch, std::span<double> out,
                         Random* noise) const
    {
      transform(x, scratch, out);
      return entry_->base(out, noise);
    }

    friend class Objective;

    const FunctionEntry* entry_;
    std::size_t dimension_;
    std::uint64_t seed_;
    std::vector<Bounds> bounds_;
    std::optional<std::vector<double>> shift_;
    std::shared_ptr<const Eigen::MatrixXd> rotation_;
    std::uint64_t noise_seed_;
};

/// Callable used by a single run. Not shared across threads; each run gets
/// its own copy, which also clones the stochastic function's generator.
class Objective {
  public:
    explicit Objective(const Problem& problem)
        : problem_(&problem), noise_(problem.noise_seed()), scratch_(problem.dimension()),
          transformed_(problem.dimension())
    {}

    const Problem& problem() const { return *problem_; }
    std::size_t dimension() const { return problem_->dimension(); }
    std::span<const Bounds> bounds() const { return problem_->bounds(); }

    double operator()(std::span<const double> x)
    {
      return problem_->evaluate_into(x, scratch_, transformed_, &noise_);
    }

  private:
    const Problem* problem_;
    Random noise_;
    std::vector<double> scratch_;
    std::vector<double> transformed_;
};

inline Objective Problem::objective() const { return Objective(*this); }

/// Builds the named problem. Shifts are uniform over the central 80% of the
/// box; rotations come from random_orthogonal. Both are derived from `seed`
/// alone, so the same (name, dimension, seed) always yields the same instance.
inline Problem make_problem(std::string_view name, std::size_t dimension, std::uint64_t seed)
{
  const FunctionEntry& entry = find_function(name);
  require(dimension >= std::max<std::size_t>(2, entry.min_dimension),
          std::string(name) + " requires dimension >= " +
              std::to_string(std::max<std::size_t>(2, entry.min_dimension)));

  std::optional<std::vector<double>> shift;
  if (entry.shifted) {
    Random rng(mix64(seed ^ detail::shift_stream));
    const double margin = 0.1 * (entry.high - entry.low);
    std::vector<double> values(dimension);
    for (auto& v : values) {
      v = entry.low + margin + rng.unit() * (entry.high - entry.low - 2.0 * margin);
    }
    shift = std::move(values);
  }
  std::shared_ptr<const Eigen::MatrixXd> rotation;
  if (entry.rotated) {
    Random rng(mix64(seed ^ detail::rotation_stream));
    rotation = std::make_shared<const Eigen::MatrixXd>(random_orthogonal(dimension, rng));
  }
  return Problem(entry, dimension, seed, std::move(shift), std::move(rotation));
}

namespace detail {

inline std::optional<std::vector<double>> base_optimum(const FunctionEntry& entry, std::size_t dimension)
{
  switch (entry.optimum) {
  case OptimumKind::origin:
    return std::vector<double>(dimension, 0.0);
  case OptimumKind::styblinski:
    return std::vector<double>(dimension, functions::styblinski_tang_argmin);
  case OptimumKind::reciprocal: {
    std::vector<double> point(dimension);
    for (std::size_t i = 0; i < dimension; ++i) {
      point[i] = 1.0 / static_cast<double>(i + 1);
    }
    return point;
  }
  case OptimumKind::none:
    break;
  }
  return std::nullopt;
}

} // namespace detail

/// Optimum of the named function without reference to any instance. Shifted
/// names report only the value, since the location depends on the seed.
inline OptimumInfo known_optimum(std::string_view name, std::size_t dimension)
{
  const FunctionEntry& entry = find_function(name);
  OptimumInfo info;
  if (entry.optimum == OptimumKind::none) {
    return info;
  }
  info.value = entry.optimal_value(dimension);
  if (!entry.shifted) {
    // A rotation fixes the origin, so origin optima survive it.
    if (!entry.rotated || entry.optimum == OptimumKind::origin) {
      info.position = detail::base_optimum(entry, dimension);
    }
  }
  return info;
}

/// Optimum of a concrete instance; for shifted problems the location is the shift.
inline OptimumInfo known_optimum(const Problem& problem)
{
  const FunctionEntry& entry = problem.entry();
  if (!problem.shift()) {
    return known_optimum(entry.name, problem.dimension());
  }
  OptimumInfo info;
  if (entry.optimum == OptimumKind::origin) {
    info.position = *problem.shift();
    info.value = entry.optimal_value(problem.dimension());
  }
  return info;
}

/// JSON descriptor: shifts and rotations are regenerated from the seed.
inline nlohmann::json to_json(const Problem& problem)
{
  nlohmann::json bounds = nlohmann::json::array();
  const auto all = problem.bounds();
  const bool uniform = std::all_of(all.begin(), all.end(), [&](const Bounds& b) { return b == all[0]; });
  if (uniform) {
    bounds = {all[0].low, all[0].high};
  } else {
    for (const auto& b : all) {
      bounds.push_back({b.low, b.high});
    }
  }
  return {{"name", problem.name()},
          {"dimension", problem.dimension()},
          {"seed", problem.seed()},
          {"bounds", bounds}};
}

inline Problem problem_from_json(const nlohmann::json& descriptor)
{
  try {
    Problem problem = make_problem(descriptor.at("name").get<std::string>(),
                                   descriptor.at("dimension").get<std::size_t>(),
                                   descriptor.at("seed").get<std::uint64_t>());
    if (descriptor.contains("bounds")) {
      const auto& bounds = descriptor.at("bounds");
      if (bounds.size() == 2 && bounds[0].is_number()) {
        const auto low = bounds[0].get<double>();
        const auto high = bounds[1].get<double>();
        if (Bounds{low, high} != problem.bounds(0)) {
          problem = problem.with_bounds(low, high);
        }
      } else {
        throw ParseError("problem descriptor: only uniform [low, high] bounds can be restored");
      }
    }
    return problem;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("problem descriptor: ") + e.what());
  }
}

} // namespace swarmroles
