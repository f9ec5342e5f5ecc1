#pragma once

// Reference values computed without the library's solver or quadrature.

#include "revspec/profile.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/jacobi.hpp>

#include <cmath>
#include <numbers>
#include <vector>

namespace revspec::testing {

/// j-th eigenvalue (1-based) of channel k on the round sphere: l(l+1) with
/// l = k + j - 1 for k >= 1 and l = j for the invariant channel.
inline double round_eigenvalue(int k, int j) {
  const double l = k == 0 ? j : k + j - 1;
  return l * (l + 1.0);
}

/// Orthonormal polynomial of degree n for the weight (1 - x^2)^alpha, from
/// Boost's Jacobi P^(alpha, alpha) and the closed-form norm.
inline double orthonormal_jacobi_reference(int alpha, int n, double x) {
  using boost::math::tgamma;
  const double a = alpha;
  const double norm_sq = std::pow(2.0, 2 * a + 1) / (2 * n + 2 * a + 1) * tgamma(n + a + 1) * tgamma(n + a + 1) /
                         (tgamma(n + 2 * a + 1) * tgamma(n + 1.0));
  return boost::math::jacobi(static_cast<unsigned>(n), a, a, x) / std::sqrt(norm_sq);
}

/// Double-exponential quadrature on [-1, 1].
template <class F>
double tanh_sinh(F f) {
  boost::math::quadrature::tanh_sinh<double> q;
  return q.integrate(f, -1.0, 1.0, 1e-14);
}

/// k = 4 Rayleigh quotient of u = sqrt(1 - x^2) on 10(1-x^2)/(1+9x^36),
/// reduced by hand: (3/4)(10 I + 736/185), I = int x^2 / (1 + 9 x^36).
inline double example_k4_quotient() {
  const double I = tanh_sinh([](double x) { return x * x / (1.0 + 9.0 * std::pow(x, 36)); });
  return 0.75 * (10.0 * I + 736.0 / 185.0);
}

/// Lowest eigenvalues of channel k by second-order finite volumes in
/// sigma (x = -cos sigma), where L_k becomes
///
///   -(h sin(s) v')' + k^2 v / (h sin(s)) = lambda sin(s) v,
///
/// with zero flux through both poles. Richardson-extrapolated from n and 2n
/// cells.
inline std::vector<double> finite_volume_eigenvalues(const Profile& p, int k, int count, int n = 2000) {
  auto solve = [&](int cells) {
    const double d = std::numbers::pi / cells;
    auto h_at = [&](double sigma) { return p.h(-std::cos(sigma)); };
    Eigen::VectorXd diag(cells), off(cells - 1), mass(cells);
    std::vector<double> flux(cells + 1, 0.0);
    for (int i = 1; i < cells; ++i) flux[i] = h_at(i * d) * std::sin(i * d) / d;
    for (int i = 0; i < cells; ++i) {
      const double c = (i + 0.5) * d;
      mass[i] = std::cos(c - 0.5 * d) - std::cos(c + 0.5 * d);
      diag[i] = flux[i] + flux[i + 1] + k * k * d / (h_at(c) * std::sin(c));
    }
    for (int i = 0; i + 1 < cells; ++i) off[i] = -flux[i + 1] / std::sqrt(mass[i] * mass[i + 1]);
    for (int i = 0; i < cells; ++i) diag[i] /= mass[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + cells);
    if (k == 0) ev.erase(ev.begin());
    ev.resize(count);
    return ev;
  };
  const auto coarse = solve(n), fine = solve(2 * n);
  std::vector<double> out(count);
  for (int j = 0; j < count; ++j) out[j] = (4.0 * fine[j] - coarse[j]) / 3.0;
  return out;
}

}  // namespace revspec::testing
