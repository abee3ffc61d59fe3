#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "error.hpp"
#include "roles.hpp"

namespace swarmroles {

/// How `lambda` and `sigma` are interpreted.
enum class NoiseScale {
  relative, // multiplied by the width of each search dimension
  absolute, // problem units
};

/// Variant identity plus every coefficient of the update rules.
///
/// `role_coefficient` is the acceleration of whichever term the role modifies
/// (c3..c8 depending on the variant). `role_fraction` is the share of the swarm
/// that carries the role. Defaults are constriction-equivalent values; the
/// experiment config can override every one of them.
struct AlgorithmConfig {
  std::string name = "PSO";
  Role variant = Role::standard;
  double omega = 0.7298;
  double c1 = 1.49618;
  double c2 = 1.49618;
  double role_coefficient = 1.49618;
  double role_fraction = 0.2;
  double lambda = 0.1;
  double sigma = 0.01;
  NoiseScale noise_scale = NoiseScale::relative;
  std::size_t swarm_size = 100;
  std::uint64_t max_evaluations = 25'000;

  /// Fraction actually applied; standard PSO never carries special roles.
  double effective_fraction() const { return variant == Role::standard ? 0.0 : role_fraction; }

  friend bool operator==(const AlgorithmConfig&, const AlgorithmConfig&) = default;
};

/// Default coefficients for `variant`, labelled with its canonical name.
inline AlgorithmConfig default_config(Role variant)
{
  AlgorithmConfig config;
  config.variant = variant;
  config.name = std::string(algorithm_name(variant));
  return config;
}

inline void validate(const AlgorithmConfig& config)
{
  auto finite = [](double v) { return std::isfinite(v); };
  require(!config.name.empty(), "algorithm name must not be empty");
  require(finite(config.omega) && finite(config.c1) && finite(config.c2) &&
              finite(config.role_coefficient),
          config.name + ": coefficients must be finite");
  require(finite(config.role_fraction) && config.role_fraction >= 0.0 && config.role_fraction <= 1.0,
          config.name + ": role_fraction must lie in [0,1]");
  require(finite(config.lambda) && config.lambda >= 0.0, config.name + ": lambda must be >= 0");
  require(finite(config.sigma) && config.sigma >= 0.0, config.name + ": sigma must be >= 0");
  require(config.swarm_size >= 2, config.name + ": swarm_size must be >= 2");
  require(config.max_evaluations >= config.swarm_size,
          config.name + ": max_evaluations must be >= swarm_size");
}

} // namespace swarmroles
