#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>

namespace swarmroles {

/// Anything the update rules can draw from: unit() in [0,1], normal() ~ N(0,1).
template <typename T>
concept RandomSource = requires(T& source) {
  { source.unit() } -> std::convertible_to<double>;
  { source.normal() } -> std::convertible_to<double>;
};

/// Seeded generator used by every run.
///
/// The variates are derived from the raw 64-bit engine output by hand instead of
/// through <random> distributions, whose algorithms are implementation-defined.
/// That keeps trajectories identical across standard libraries.
class Random {
  public:
    explicit Random(std::uint64_t seed = 0) : engine_(seed) {}

    /// Uniform on [0,1] with 53 random bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on [-1,1].
    double symmetric() { return 2.0 * unit() - 1.0; }

    /// Standard normal via Box-Muller; one variate per call, no cached pair.
    double normal()
    {
      double u1 = unit();
      while (u1 <= 0.0) {
        u1 = unit();
      }
      const double u2 = unit();
      return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Uniform integer in [0, bound) by rejection.
    std::uint64_t below(std::uint64_t bound)
    {
      const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                  std::numeric_limits<std::uint64_t>::max() % bound;
      std::uint64_t value = engine_();
      while (value >= limit) {
        value = engine_();
      }
      return value % bound;
    }

    std::uint64_t bits() { return engine_(); }

    friend bool operator==(const Random&, const Random&) = default;

  private:
    std::mt19937_64 engine_;
};

static_assert(RandomSource<Random>);

/// SplitMix64 finalizer; used to spread hashed seeds.
constexpr std::uint64_t mix64(std::uint64_t z)
{
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

} // namespace swarmroles
