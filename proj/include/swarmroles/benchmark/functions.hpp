#pragma once

// Analytic base functions of the benchmark suite. Each takes the already
// shifted and rotated point y and returns the objective value. Formulas for
// every name are written out in FUNCTIONS.md.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>

#include "../random.hpp"

namespace swarmroles::functions {

using std::numbers::pi;
using Point = std::span<const double>;

inline double sphere(Point y, Random*)
{
  double sum = 0.0;
  for (double v : y) {
    sum += v * v;
  }
  return sum;
}

inline double rastrigin(Point y, Random*)
{
  double sum = 10.0 * static_cast<double>(y.size());
  for (double v : y) {
    sum += v * v - 10.0 * std::cos(2.0 * pi * v);
  }
  return sum;
}

inline double ackley(Point y, Random*)
{
  const double n = static_cast<double>(y.size());
  double squares = 0.0;
  double cosines = 0.0;
  for (double v : y) {
    squares += v * v;
    cosines += std::cos(2.0 * pi * v);
  }
  return -20.0 * std::exp(-0.2 * std::sqrt(squares / n)) - std::exp(cosines / n) + 20.0 + std::numbers::e;
}

inline double alpine_n1(Point y, Random*)
{
  double sum = 0.0;
  for (double v : y) {
    sum += std::abs(v * std::sin(v) + 0.1 * v);
  }
  return sum;
}

/// Sums a two-argument kernel over consecutive coordinate pairs (i, i+1).
template <typename Kernel>
double pairwise(Point y, Kernel kernel)
{
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < y.size(); ++i) {
    sum += kernel(y[i], y[i + 1]);
  }
  return sum;
}

inline double crowned_cross(Point y, Random*)
{
  return pairwise(y, [](double a, double b) {
    const double r = std::sqrt(a * a + b * b);
    const double inner = std::abs(std::sin(a) * std::sin(b) * std::exp(std::abs(100.0 - r / pi)));
    return 1e-4 * std::pow(inner + 1.0, 0.1);
  });
}

inline double egg_holder(Point y, Random*)
{
  return pairwise(y, [](double a, double b) {
    return -(b + 47.0) * std::sin(std::sqrt(std::abs(b + a / 2.0 + 47.0))) -
           a * std::sin(std::sqrt(std::abs(a - (b + 47.0))));
  });
}

inline double schaffer_f6_kernel(double a, double b)
{
  const double t = a * a + b * b;
  const double s = std::sin(std::sqrt(t));
  const double d = 1.0 + 0.001 * t;
  return 0.5 + (s * s - 0.5) / (d * d);
}

/// Expanded Schaffer F6: cyclic chain including the (d, 1) pair.
inline double expanded_schaffer(Point y, Random*)
{
  double sum = pairwise(y, schaffer_f6_kernel);
  return sum + schaffer_f6_kernel(y.back(), y.front());
}

inline double schaffer_n1(Point y, Random*)
{
  return pairwise(y, [](double a, double b) {
    const double t = a * a + b * b;
    const double s = std::sin(t * t);
    const double d = 1.0 + 0.001 * t;
    return 0.5 + (s * s - 0.5) / (d * d);
  });
}

inline double schaffer_n2(Point y, Random*)
{
  return pairwise(y, [](double a, double b) {
    const double s = std::sin(a * a - b * b);
    const double d = 1.0 + 0.001 * (a * a + b * b);
    return 0.5 + (s * s - 0.5) / (d * d);
  });
}

inline double schaffer_n3(Point y, Random*)
{
  return pairwise(y, [](double a, double b) {
    const double s = std::sin(std::cos(std::abs(a * a - b * b)));
    const double d = 1.0 + 0.001 * (a * a + b * b);
    return 0.5 + (s * s - 0.5) / (d * d);
  });
}

inline double schaffer_n4(Point y, Random*)
{
  return pairwise(y, [](double a, double b) {
    const double c = std::cos(std::sin(std::abs(a * a - b * b)));
    const double d = 1.0 + 0.001 * (a * a + b * b);
    return 0.5 + (c * c - 0.5) / (d * d);
  });
}

/// Negated Schmidt-Vetters over consecutive triples. The exponential term is
/// taken as its limit 0 when the middle coordinate is exactly 0.
inline double schmidt_vetters(Point y, Random*)
{
  double sum = 0.0;
  for (std::size_t i = 0; i + 2 < y.size(); ++i) {
    const double a = y[i];
    const double b = y[i + 1];
    const double c = y[i + 2];
    double term = 1.0 / (1.0 + (a - b) * (a - b)) + std::sin((pi * b + c) / 2.0);
    if (b != 0.0) {
      const double ratio = (a + c) / b - 2.0;
      term += std::exp(-ratio * ratio);
    }
    sum -= term;
  }
  return sum;
}

/// Lennard-Jones cluster energy with unit well depth and length. Atoms are
/// consecutive coordinate triples; trailing coordinates (d mod 3) are inert.
inline double lennard_jones(Point y, Random*)
{
  constexpr double min_r2 = 1e-4;
  const std::size_t atoms = y.size() / 3;
  double energy = 0.0;
  for (std::size_t i = 0; i < atoms; ++i) {
    for (std::size_t j = i + 1; j < atoms; ++j) {
      double r2 = 0.0;
      for (std::size_t k = 0; k < 3; ++k) {
        const double diff = y[3 * i + k] - y[3 * j + k];
        r2 += diff * diff;
      }
      r2 = std::max(r2, min_r2);
      const double inv6 = 1.0 / (r2 * r2 * r2);
      energy += 4.0 * (inv6 * inv6 - inv6);
    }
  }
  return energy;
}

inline double michalewicz(Point y, Random*)
{
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double s = std::sin(static_cast<double>(i + 1) * y[i] * y[i] / pi);
    const double s2 = s * s;
    const double s4 = s2 * s2;
    const double s8 = s4 * s4;
    const double s16 = s8 * s8;
    sum -= std::sin(y[i]) * s16 * s4;
  }
  return sum;
}

inline double mishra_n3(Point y, Random*)
{
  return pairwise(y, [](double a, double b) {
    return std::sqrt(std::abs(std::cos(std::sqrt(std::abs(a * a + b))))) + 0.01 * (a + b);
  });
}

inline double mishra_n4(Point y, Random*)
{
  return pairwise(y, [](double a, double b) {
    return std::sqrt(std::abs(std::sin(std::sqrt(std::abs(a * a + b))))) + 0.01 * (a + b);
  });
}

/// Rosenbrock on z = 0.02048 y + 1, so the optimum sits at y = 0.
inline double modified_rosenbrock(Point y, Random*)
{
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < y.size(); ++i) {
    const double z = 0.02048 * y[i] + 1.0;
    const double next = 0.02048 * y[i + 1] + 1.0;
    sum += 100.0 * (z * z - next) * (z * z - next) + (z - 1.0) * (z - 1.0);
  }
  return sum;
}

inline double bent_cigar(Point y, Random*)
{
  double sum = 0.0;
  for (std::size_t i = 1; i < y.size(); ++i) {
    sum += y[i] * y[i];
  }
  return y[0] * y[0] + 1e6 * sum;
}

inline double discus(Point y, Random*)
{
  double sum = 0.0;
  for (std::size_t i = 1; i < y.size(); ++i) {
    sum += y[i] * y[i];
  }
  return 1e6 * y[0] * y[0] + sum;
}

inline double high_conditioned_elliptic(Point y, Random*)
{
  const double n = static_cast<double>(y.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    sum += std::pow(1e6, static_cast<double>(i) / (n - 1.0)) * y[i] * y[i];
  }
  return sum;
}

inline double salomon(Point y, Random*)
{
  const double r = std::sqrt(sphere(y, nullptr));
  return 1.0 - std::cos(2.0 * pi * r) + 0.1 * r;
}

inline double schwefel_n20(Point y, Random*)
{
  double sum = 0.0;
  for (double v : y) {
    sum += std::abs(v);
  }
  return sum;
}

inline double schwefel_n36(Point y, Random*)
{
  return pairwise(y, [](double a, double b) { return -a * b * (72.0 - 2.0 * a - 2.0 * b); });
}

inline double schwefel_n6(Point y, Random*)
{
  return pairwise(y, [](double a, double b) {
    return std::max(std::abs(a + 2.0 * b - 7.0), std::abs(2.0 * a + b - 5.0));
  });
}

/// Schwefel 1.2: sum of squared prefix sums.
inline double schwefel_12(Point y, Random*)
{
  double prefix = 0.0;
  double sum = 0.0;
  for (double v : y) {
    prefix += v;
    sum += prefix * prefix;
  }
  return sum;
}

inline double hgbat(Point y, Random*)
{
  const double n = static_cast<double>(y.size());
  double r2 = 0.0;
  double s = 0.0;
  for (double v : y) {
    const double z = 0.05 * v - 1.0;
    r2 += z * z;
    s += z;
  }
  return std::sqrt(std::abs(r2 * r2 - s * s)) + (0.5 * r2 + s) / n + 0.5;
}

inline double happycat(Point y, Random*)
{
  const double n = static_cast<double>(y.size());
  double r2 = 0.0;
  double s = 0.0;
  for (double v : y) {
    const double z = 0.05 * v - 1.0;
    r2 += z * z;
    s += z;
  }
  return std::pow(std::abs(r2 - n), 0.25) + (0.5 * r2 + s) / n + 0.5;
}

inline double schaffer_f7(Point y, Random*)
{
  const double pairs = static_cast<double>(y.size() - 1);
  const double mean = pairwise(y, [](double a, double b) {
                        const double s = std::sqrt(a * a + b * b);
                        const double root = std::sqrt(s);
                        const double wave = std::sin(50.0 * std::pow(s, 0.2));
                        return root + root * wave * wave;
                      }) /
                      pairs;
  return mean * mean;
}

/// Truncated Weierstrass series, a = 0.5, b = 3, k = 0..20, on z = 0.005 y.
inline double weierstrass(Point y, Random*)
{
  constexpr int terms = 21;
  static const auto coefficients = [] {
    std::array<std::array<double, 2>, terms> table{};
    double a = 1.0;
    double b = 1.0;
    for (auto& row : table) {
      row = {a, b};
      a *= 0.5;
      b *= 3.0;
    }
    return table;
  }();

  double offset = 0.0;
  for (const auto& [a, b] : coefficients) {
    offset += a * std::cos(pi * b);
  }
  double sum = 0.0;
  for (double v : y) {
    const double z = 0.005 * v;
    for (const auto& [a, b] : coefficients) {
      sum += a * std::cos(2.0 * pi * b * (z + 0.5));
    }
  }
  return sum - static_cast<double>(y.size()) * offset;
}

inline double shubert_n3(Point y, Random*)
{
  double sum = 0.0;
  for (double v : y) {
    for (int j = 1; j <= 5; ++j) {
      sum += j * std::sin((j + 1) * v + j);
    }
  }
  return sum;
}

inline double shubert_n4(Point y, Random*)
{
  double sum = 0.0;
  for (double v : y) {
    for (int j = 1; j <= 5; ++j) {
      sum += j * std::cos((j + 1) * v + j);
    }
  }
  return sum;
}

inline double sine_envelope(Point y, Random*)
{
  return pairwise(y, [](double a, double b) {
    const double t = a * a + b * b;
    const double s = std::sin(std::sqrt(t));
    const double d = 1.0 + 0.001 * t;
    return (s * s - 0.5) / (d * d) + 0.5;
  });
}

/// Yang's stochastic function. Weights come from `noise`; with no generator
/// every weight is 1.
inline double stochastic(Point y, Random* noise)
{
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double weight = noise ? noise->unit() : 1.0;
    sum += weight * std::abs(y[i] - 1.0 / static_cast<double>(i + 1));
  }
  return sum;
}

inline double stretched_v(Point y, Random*)
{
  return pairwise(y, [](double a, double b) {
    const double t = a * a + b * b;
    const double s = std::sin(50.0 * std::pow(t, 0.1));
    return std::pow(t, 0.25) * (s * s + 0.1);
  });
}

inline double styblinski_tang(Point y, Random*)
{
  double sum = 0.0;
  for (double v : y) {
    const double v2 = v * v;
    sum += v2 * v2 - 16.0 * v2 + 5.0 * v;
  }
  return 0.5 * sum;
}

/// Minimizer of the one-dimensional Styblinski-Tang component.
inline constexpr double styblinski_tang_argmin = -2.903534;
/// Per-coordinate minimum value, refined numerically. The commonly quoted
/// -39.16599 is this value rounded up by about 1.8e-4.
inline constexpr double styblinski_tang_min = -39.16616570377142;

} // namespace swarmroles::functions
