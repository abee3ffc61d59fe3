#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "benchmark/problem.hpp"
#include "config.hpp"
#include "error.hpp"
#include "random.hpp"
#include "roles.hpp"

namespace swarmroles {

using Vector = std::vector<double>;

/// What the swarm needs from an objective: a box and a way to score a point.
template <typename T>
concept BoxObjective = requires(T& objective, std::span<const double> x) {
  { objective.dimension() } -> std::convertible_to<std::size_t>;
  { objective.bounds() } -> std::convertible_to<std::span<const Bounds>>;
  { objective(x) } -> std::convertible_to<double>;
};

static_assert(BoxObjective<Objective>);

struct ParticleState {
  Vector position;
  Vector velocity;
  Vector personal_best_position;
  double personal_best_fitness = std::numeric_limits<double>::infinity();
  Vector personal_worst_position;
  double personal_worst_fitness = -std::numeric_limits<double>::infinity();
  Role role = Role::standard;

  friend bool operator==(const ParticleState&, const ParticleState&) = default;
};

struct SwarmState {
  std::vector<ParticleState> particles;
  Vector global_best_position;
  double global_best_fitness = std::numeric_limits<double>::infinity();
  Vector global_worst_position;
  double global_worst_fitness = -std::numeric_limits<double>::infinity();
  std::uint64_t iteration = 0;
  std::uint64_t evaluations_used = 0;
  /// Per-dimension noise scales after resolving relative lambda/sigma.
  Vector lambda;
  Vector sigma;
  Random rng;

  friend bool operator==(const SwarmState&, const SwarmState&) = default;
};

/// Marks round-half-up(fraction * n) of n slots with `role`, the rest
/// standard. The subset is the head of a full Fisher-Yates shuffle, so the
/// number of draws taken from `rng` does not depend on the fraction.
inline std::vector<Role> assign_roles(std::size_t n, double fraction, Role role, Random& rng)
{
  require(fraction >= 0.0 && fraction <= 1.0, "role fraction must lie in [0,1]");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(order[i - 1], order[j]);
  }
  const auto count =
      std::min(n, static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 0.5)));
  std::vector<Role> roles(n, Role::standard);
  for (std::size_t k = 0; k < count; ++k) {
    roles[order[k]] = role;
  }
  return roles;
}

/// Projects every coordinate onto its [low, high] interval.
inline Vector clip_to_bounds(Vector position, std::span<const Bounds> bounds)
{
  require(position.size() == bounds.size(), "clip_to_bounds: dimension mismatch");
  for (std::size_t j = 0; j < position.size(); ++j) {
    position[j] = std::clamp(position[j], bounds[j].low, bounds[j].high);
  }
  return position;
}

namespace detail {

inline double checked_fitness(double fitness)
{
  if (!std::isfinite(fitness)) {
    throw EvaluationFailure("objective returned a non-finite value");
  }
  return fitness;
}

// Each term draws one scalar; the unit draw is taken even when the
// coefficient is zero so that draw sequences stay aligned across variants.
template <RandomSource Rng>
void add_attraction(Vector& out, double coefficient, Rng& rng, const Vector& target, const Vector& from)
{
  const double scale = coefficient * rng.unit();
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] += scale * (target[j] - from[j]);
  }
}

template <RandomSource Rng>
void add_noise(Vector& out, const Vector& lambda, Rng& rng)
{
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] += lambda[j] * (2.0 * rng.unit() - 1.0);
  }
}

} // namespace detail

/// New velocity for `particle` according to its role.
///
/// Repulsion is written as attraction with the operands swapped, e.g. the
/// rebel social term is c * r * (x - b_g). The uniform scalars are drawn in
/// term order (cognitive slot first), followed by the d components of the
/// noise vector where the role uses one.
template <RandomSource Rng>
Vector velocity_update(const ParticleState& particle, const SwarmState& swarm, const AlgorithmConfig& config,
                       Rng& rng)
{
  const Vector& x = particle.position;
  Vector v(x.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    v[j] = config.omega * particle.velocity[j];
  }

  const double c1 = config.c1;
  const double c2 = config.c2;
  const double cr = config.role_coefficient;
  const Vector& best = particle.personal_best_position;
  const Vector& worst = particle.personal_worst_position;
  const Vector& gbest = swarm.global_best_position;
  const Vector& gworst = swarm.global_worst_position;

  using detail::add_attraction;
  using detail::add_noise;
  switch (particle.role) {
  case Role::standard:
  case Role::drifter:
    add_attraction(v, c1, rng, best, x);
    add_attraction(v, c2, rng, gbest, x);
    break;
  case Role::rebel:
    add_attraction(v, c1, rng, best, x);
    add_attraction(v, cr, rng, x, gbest);
    break;
  case Role::rejector:
    add_attraction(v, cr, rng, x, best);
    add_attraction(v, c2, rng, gbest, x);
    break;
  case Role::contrarian:
    add_attraction(v, c1, rng, best, x);
    add_attraction(v, cr, rng, gworst, x);
    break;
  case Role::defeatist:
    add_attraction(v, cr, rng, worst, x);
    add_attraction(v, c2, rng, gbest, x);
    break;
  case Role::eschewer:
    add_attraction(v, c1, rng, best, x);
    add_attraction(v, cr, rng, x, gworst);
    break;
  case Role::escapist:
    add_attraction(v, cr, rng, x, worst);
    add_attraction(v, c2, rng, gbest, x);
    break;
  case Role::anarchic:
    add_attraction(v, c1, rng, best, x);
    add_noise(v, swarm.lambda, rng);
    break;
  case Role::amnesiac:
    add_noise(v, swarm.lambda, rng);
    add_attraction(v, c2, rng, gbest, x);
    break;
  case Role::erratic:
    add_noise(v, swarm.lambda, rng);
    break;
  case Role::wanderer:
    add_attraction(v, c1, rng, best, x);
    add_attraction(v, c2, rng, gbest, x);
    add_noise(v, swarm.lambda, rng);
    break;
  }
  return v;
}

/// x + v', plus N(0, sigma^2) per component for drifters. Result is not clipped.
template <RandomSource Rng>
Vector position_update(const ParticleState& particle, const Vector& new_velocity, const SwarmState& swarm,
                       Rng& rng)
{
  require(new_velocity.size() == particle.position.size(), "position_update: dimension mismatch");
  Vector next(particle.position.size());
  for (std::size_t j = 0; j < next.size(); ++j) {
    next[j] = particle.position[j] + new_velocity[j];
  }
  if (particle.role == Role::drifter) {
    for (std::size_t j = 0; j < next.size(); ++j) {
      next[j] += swarm.sigma[j] * rng.normal();
    }
  }
  return next;
}

/// Strict-inequality refresh of the personal and all-time global memories
/// after `particle` moved to `particle.position` with fitness `fitness`.
inline void update_memories(ParticleState& particle, SwarmState& swarm, double fitness)
{
  detail::checked_fitness(fitness);
  if (fitness < particle.personal_best_fitness) {
    particle.personal_best_fitness = fitness;
    particle.personal_best_position = particle.position;
  }
  if (fitness > particle.personal_worst_fitness) {
    particle.personal_worst_fitness = fitness;
    particle.personal_worst_position = particle.position;
  }
  if (fitness < swarm.global_best_fitness) {
    swarm.global_best_fitness = fitness;
    swarm.global_best_position = particle.position;
  }
  if (fitness > swarm.global_worst_fitness) {
    swarm.global_worst_fitness = fitness;
    swarm.global_worst_position = particle.position;
  }
}

/// Uniform positions in the box, zero velocities, both personal memories at
/// the starting point, roles assigned last.
template <BoxObjective Fn>
SwarmState initialize_swarm(Fn& objective, const AlgorithmConfig& config, std::uint64_t seed)
{
  validate(config);
  const std::size_t d = objective.dimension();
  require(d >= 1, "problem dimension must be >= 1");
  const std::span<const Bounds> bounds = objective.bounds();

  SwarmState swarm;
  swarm.rng = Random(seed);
  swarm.lambda.resize(d);
  swarm.sigma.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    const double scale = config.noise_scale == NoiseScale::relative ? bounds[j].width() : 1.0;
    swarm.lambda[j] = config.lambda * scale;
    swarm.sigma[j] = config.sigma * scale;
  }

  swarm.particles.resize(config.swarm_size);
  for (auto& particle : swarm.particles) {
    particle.position.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
      particle.position[j] = bounds[j].low + swarm.rng.unit() * bounds[j].width();
    }
    particle.velocity.assign(d, 0.0);
    const double fitness = detail::checked_fitness(objective(std::span<const double>(particle.position)));
    ++swarm.evaluations_used;
    particle.personal_best_position = particle.position;
    particle.personal_best_fitness = fitness;
    particle.personal_worst_position = particle.position;
    particle.personal_worst_fitness = fitness;
    update_memories(particle, swarm, fitness);
  }

  const auto roles =
      assign_roles(config.swarm_size, config.effective_fraction(), config.variant, swarm.rng);
  for (std::size_t i = 0; i < roles.size(); ++i) {
    swarm.particles[i].role = roles[i];
  }
  return swarm;
}

/// One synchronous sweep over the swarm in index order. Memories refresh
/// right after each particle is evaluated, so later particles see them.
template <BoxObjective Fn>
void step(SwarmState& swarm, Fn& objective, const AlgorithmConfig& config)
{
  const std::span<const Bounds> bounds = objective.bounds();
  for (auto& particle : swarm.particles) {
    Vector velocity = velocity_update(particle, swarm, config, swarm.rng);
    Vector position = clip_to_bounds(position_update(particle, velocity, swarm, swarm.rng), bounds);
    const double fitness = detail::checked_fitness(objective(std::span<const double>(position)));
    ++swarm.evaluations_used;
    particle.velocity = std::move(velocity);
    particle.position = std::move(position);
    update_memories(particle, swarm, fitness);
  }
  ++swarm.iteration;
}

struct TrajectoryPoint {
  std::uint64_t iteration;
  double best_fitness;

  friend bool operator==(const TrajectoryPoint&, const TrajectoryPoint&) = default;
};

struct RunOutcome {
  double final_best_fitness;
  Vector final_best_position;
  std::vector<TrajectoryPoint> trajectory;
  std::uint64_t evaluations_used;
  std::uint64_t seed;
  double wall_time_s;
};

/// Optional hook called after initialization and after every step.
struct NoObserver {
  void operator()(const SwarmState&) const {}
};

/// Initializes and steps until another full sweep would exceed the budget.
/// Trajectory point 0 is the initial population.
template <BoxObjective Fn, typename Observer = NoObserver>
RunOutcome run(Fn& objective, const AlgorithmConfig& config, std::uint64_t seed, Observer&& observe = {})
{
  const auto start = std::chrono::steady_clock::now();
  SwarmState swarm = initialize_swarm(objective, config, seed);
  RunOutcome outcome;
  outcome.trajectory.push_back({swarm.iteration, swarm.global_best_fitness});
  observe(std::as_const(swarm));
  while (swarm.evaluations_used + config.swarm_size <= config.max_evaluations) {
    step(swarm, objective, config);
    outcome.trajectory.push_back({swarm.iteration, swarm.global_best_fitness});
    observe(std::as_const(swarm));
  }
  outcome.final_best_fitness = swarm.global_best_fitness;
  outcome.final_best_position = swarm.global_best_position;
  outcome.evaluations_used = swarm.evaluations_used;
  outcome.seed = seed;
  outcome.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return outcome;
}

/// Convenience overload for a benchmark instance.
inline RunOutcome run(const Problem& problem, const AlgorithmConfig& config, std::uint64_t seed)
{
  Objective objective = problem.objective();
  try {
    return run(objective, config, seed);
  } catch (const EvaluationFailure& e) {
    throw EvaluationFailure(config.name + " on " + std::string(problem.name()) + " (d=" +
                            std::to_string(problem.dimension()) + ", seed=" + std::to_string(seed) +
                            "): " + e.what());
  }
}

} // namespace swarmroles
