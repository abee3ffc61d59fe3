#pragma once

#include <array>
#include <string>
#include <string_view>

#include "error.hpp"

namespace swarmroles {

/// Behaviour assigned to a particle. Every variant other than `standard`
/// replaces or extends one term of the canonical velocity/position update.
enum class Role {
  standard,
  rebel,      // repelled from global best
  rejector,   // repelled from personal best
  contrarian, // attracted to global worst
  defeatist,  // attracted to personal worst
  eschewer,   // repelled from global worst
  escapist,   // repelled from personal worst
  anarchic,   // social term replaced by noise
  amnesiac,   // cognitive term replaced by noise
  erratic,    // inertia plus noise only
  wanderer,   // noise added on top of both terms
  drifter,    // Gaussian noise on the position
};

inline constexpr std::array<Role, 12> all_roles = {
    Role::standard, Role::rebel,    Role::rejector, Role::contrarian,
    Role::defeatist, Role::eschewer, Role::escapist, Role::anarchic,
    Role::amnesiac, Role::erratic,  Role::wanderer, Role::drifter,
};

inline constexpr std::array<std::string_view, 12> role_names = {
    "standard", "rebel",    "rejector", "contrarian", "defeatist", "eschewer",
    "escapist", "anarchic", "amnesiac", "erratic",    "wanderer",  "drifter",
};

inline constexpr std::array<std::string_view, 12> algorithm_names = {
    "PSO",          "RebelPSO",    "RejectorPSO", "ContrarianPSO",
    "DefeatistPSO", "EschewerPSO", "EscapistPSO", "AnarchicPSO",
    "AmnesiacPSO",  "ErraticPSO",  "WandererPSO", "DrifterPSO",
};

constexpr std::string_view role_name(Role role) { return role_names[static_cast<std::size_t>(role)]; }

/// Canonical algorithm label for the variant that deploys `role`.
constexpr std::string_view algorithm_name(Role role)
{
  return algorithm_names[static_cast<std::size_t>(role)];
}

/// Accepts either the role tag ("wanderer") or the algorithm label ("WandererPSO").
inline Role parse_role(std::string_view text)
{
  for (std::size_t i = 0; i < all_roles.size(); ++i) {
    if (text == role_names[i] || text == algorithm_names[i]) {
      return all_roles[i];
    }
  }
  std::string valid;
  for (auto name : algorithm_names) {
    valid += valid.empty() ? "" : ", ";
    valid += name;
  }
  throw LookupError("unknown algorithm '" + std::string(text) + "'; valid: " + valid);
}

/// Roles whose velocity rule draws a uniform noise vector scaled by lambda.
constexpr bool uses_lambda(Role role)
{
  return role == Role::anarchic || role == Role::amnesiac || role == Role::erratic ||
         role == Role::wanderer;
}

} // namespace swarmroles
