#pragma once

#include <stdexcept>
#include <string>

namespace swarmroles {

/// Objective returned NaN or infinity. Runs abort on this rather than penalize.
class EvaluationFailure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Unknown problem, algorithm or column name.
class LookupError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A precondition of a public operation was violated by the caller.
class ContractViolation : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

/// Malformed results or configuration file.
class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& what)
{
  if (!condition) {
    throw ContractViolation(what);
  }
}

} // namespace swarmroles
