#include "revspec/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

namespace revspec {

namespace {

GaussRule compute_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess for the i-th largest root.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root for the weight.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[n - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[n - 1 - i] = w;
    rule.weights[i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw QuadratureError("Gauss-Legendre rule needs at least one node");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussRule>(compute_rule(n));
  return *slot;
}

namespace {

struct Panel {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
};

// Boost 1.74 scales neither the error estimate nor (below the top level) the
// L1 norm consistently once it bisects, so the bisection is driven here and
// Boost only supplies the 15-point rule on each panel.
Panel adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol, double rel_tol,
               unsigned depth) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
  Panel p;
  p.value = Rule::integrate(f, a, b, 0, rel_tol, &p.error, &p.l1);
  p.error *= 0.5 * std::abs(b - a);
  if (depth == 0 || p.error <= std::max(abs_tol, rel_tol * std::abs(p.value))) return p;
  const double mid = 0.5 * (a + b);
  const Panel lo = adaptive(f, a, mid, 0.5 * abs_tol, rel_tol, depth - 1);
  const Panel hi = adaptive(f, mid, b, 0.5 * abs_tol, rel_tol, depth - 1);
  return {lo.value + hi.value, lo.error + hi.error, lo.l1 + hi.l1};
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                 unsigned max_depth) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
  double coarse_error = 0.0, coarse_l1 = 0.0;
  const double coarse = Rule::integrate(f, a, b, 0, rel_tol, &coarse_error, &coarse_l1);
  if (!std::isfinite(coarse)) throw QuadratureError("integrand is not finite on the interval");
  const Panel p = adaptive(f, a, b, rel_tol * coarse_l1, rel_tol, max_depth);
  if (!std::isfinite(p.value)) throw QuadratureError("integrand is not finite on the interval");
  if (p.error > std::max(rel_tol * p.l1, 1e-300) * 1e3) {
    std::ostringstream msg;
    msg << "adaptive quadrature did not converge on [" << a << ", " << b << "] (error estimate " << p.error
        << ", L1 norm " << p.l1 << ")";
    throw QuadratureError(msg.str());
  }
  return p.value;
}

double integrate_fixed(const std::function<double(double)>& f, double a, double b, int points) {
  const GaussRule& rule = gauss_legendre(points);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < points; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

std::vector<double> chebyshev_points(int n) {
  std::vector<double> pts(n);
  for (int j = 0; j < n; ++j)
    pts[n - 1 - j] = std::cos(std::numbers::pi * (j + 0.5) / n);
  return pts;
}

}  // namespace revspec
