#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace revspec {

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Gauss–Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;    // ascending
  std::vector<double> weights;
};

/// Returns the n-point Gauss–Legendre rule. Rules are computed once by
/// Newton iteration on the Legendre recurrence and cached; the returned
/// reference stays valid for the lifetime of the program.
const GaussRule& gauss_legendre(int n);

/// Adaptive Gauss–Kronrod (15-point) integration of `f` over [a, b] to the
/// given relative tolerance. Throws QuadratureError if the integrand is not
/// finite or the error estimate stays above `rel_tol` at `max_depth`.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-13, unsigned max_depth = 18);

/// Fixed Gauss–Legendre rule mapped onto [a, b].
double integrate_fixed(const std::function<double(double)>& f, double a, double b, int points);

/// Chebyshev points of the first kind on (-1, 1), ascending.
std::vector<double> chebyshev_points(int n);

}  // namespace revspec
