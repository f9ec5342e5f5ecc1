#pragma once

// Seeded generators of valid profiles for the property suites.
//
// Two families, both satisfying f(+-1) = 0, f'(+-1) = -+2 and f > 0 inside
// by construction:
//
//   exponential:  (1 - x^2) exp((1 - x^2) q(x)),  q a cubic
//   rational:     (1 + e)(1 - x^2) / (1 + e x^(2n))

#include "revspec/report.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace revspec::testing {

// splitmix64; fixed output on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * static_cast<double>(next() >> 11) * 0x1.0p-53; }
  int integer(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }

 private:
  std::uint64_t state_;
};

// Short, parser-safe spelling of a coefficient.
inline std::string coef(double v) {
  const double rounded = std::round(v * 1e4) / 1e4;
  const std::string s = format_number(rounded);
  return rounded < 0 ? "(" + s + ")" : s;
}

inline std::string exponential_member(double c0, double c1, double c2, double c3) {
  return "(1-x^2)*exp((1-x^2)*(" + coef(c0) + "+" + coef(c1) + "*x+" + coef(c2) + "*x^2+" + coef(c3) + "*x^3))";
}

inline std::string rational_member(double eps, int n) {
  return coef(1.0 + eps) + "*(1-x^2)/(1+" + coef(eps) + "*x^" + std::to_string(2 * n) + ")";
}

/// `count` expressions alternating between the two families.
inline std::vector<std::string> random_profiles(int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::string> out;
  for (int i = 0; i < count; ++i) {
    if (i % 3 == 2) {
      out.push_back(rational_member(rng.uniform(0.0, 4.0), rng.integer(1, 4)));
    } else {
      const double c0 = rng.uniform(-0.8, 0.8), c1 = rng.uniform(-0.5, 0.5);
      const double c2 = rng.uniform(-0.5, 0.5), c3 = rng.uniform(-0.3, 0.3);
      out.push_back(exponential_member(c0, c1, c2, c3));
    }
  }
  return out;
}

/// Concave members (1 - x^2)(1 + c (1 - x^2)): f'' = 12 c x^2 - 4c - 2,
/// which stays <= 0 on [-1, 1] exactly for -1/2 <= c <= 1/4.
inline std::vector<std::string> concave_profiles(int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::string> out;
  for (int i = 0; i < count; ++i) out.push_back("(1-x^2)*(1+" + coef(rng.uniform(-0.5, 0.25)) + "*(1-x^2))");
  return out;
}

/// Hand-picked embeddable perturbations of the round sphere.
inline std::vector<std::string> embeddable_perturbations() {
  return {
      "1-x^2+0.05*(1-x^2)^2",
      "(1-x^2)*exp(-0.3*(1-x^2))",
      "(1-x^2)*exp((1-x^2)*(-0.2+0.1*x))",
      "1-x^2+0.1*x*(1-x^2)^2",
      "1-x^2-0.3*(1-x^2)^2",
  };
}

}  // namespace revspec::testing
