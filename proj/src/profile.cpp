#include "revspec/profile.hpp"

#include "revspec/quadrature.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace revspec {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;
constexpr int kPanelPoints = 16;

// Cubic spline with prescribed end slopes.
class ClampedSpline {
 public:
  ClampedSpline(std::vector<double> x, std::vector<double> y, double slope_left, double slope_right)
      : x_(std::move(x)), y_(std::move(y)), m_(x_.size()) {
    const std::size_t n = x_.size() - 1;
    std::vector<double> sub(n + 1), diag(n + 1), sup(n + 1), rhs(n + 1);
    auto h = [&](std::size_t i) { return x_[i + 1] - x_[i]; };
    diag[0] = 2.0 * h(0);
    sup[0] = h(0);
    rhs[0] = 6.0 * ((y_[1] - y_[0]) / h(0) - slope_left);
    for (std::size_t i = 1; i < n; ++i) {
      sub[i] = h(i - 1);
      diag[i] = 2.0 * (h(i - 1) + h(i));
      sup[i] = h(i);
      rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h(i) - (y_[i] - y_[i - 1]) / h(i - 1));
    }
    sub[n] = h(n - 1);
    diag[n] = 2.0 * h(n - 1);
    rhs[n] = 6.0 * (slope_right - (y_[n] - y_[n - 1]) / h(n - 1));
    // Thomas algorithm.
    for (std::size_t i = 1; i <= n; ++i) {
      const double w = sub[i] / diag[i - 1];
      diag[i] -= w * sup[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
    m_[n] = rhs[n] / diag[n];
    for (std::size_t i = n; i-- > 0;) m_[i] = (rhs[i] - sup[i] * m_[i + 1]) / diag[i];
  }

  double value(double x) const {
    const auto [i, t, u, h] = locate(x);
    return m_[i] * u * u * u / (6 * h) + m_[i + 1] * t * t * t / (6 * h) +
           (y_[i] / h - m_[i] * h / 6) * u + (y_[i + 1] / h - m_[i + 1] * h / 6) * t;
  }

  double slope(double x) const {
    const auto [i, t, u, h] = locate(x);
    return -m_[i] * u * u / (2 * h) + m_[i + 1] * t * t / (2 * h) - (y_[i] / h - m_[i] * h / 6) +
           (y_[i + 1] / h - m_[i + 1] * h / 6);
  }

  double second(double x) const {
    const auto [i, t, u, h] = locate(x);
    return (m_[i] * u + m_[i + 1] * t) / h;
  }

  const std::vector<double>& knots() const { return x_; }

 private:
  struct Where {
    std::size_t i;
    double t, u, h;
  };

  Where locate(double x) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    i = std::min(i, x_.size() - 2);
    const double h = x_[i + 1] - x_[i];
    return {i, x - x_[i], x_[i + 1] - x, h};
  }

  std::vector<double> x_, y_, m_;
};

ValidationCheck near_check(std::string name, const RealFn& g, double at, double expected, double tol) {
  ValidationCheck c{std::move(name), std::numeric_limits<double>::quiet_NaN(), expected, tol, false};
  try {
    c.measured = g(at);
    c.pass = std::isfinite(c.measured) && std::abs(c.measured - expected) <= tol;
  } catch (const std::exception&) {
    c.pass = false;
  }
  return c;
}

ValidationCheck positivity_check(std::string name, const RealFn& g, double lo, double hi) {
  ValidationCheck c{std::move(name), std::numeric_limits<double>::infinity(), 0.0, 0.0, true};
  try {
    for (double t : chebyshev_points(kValidationGridSize)) {
      const double v = g(lo + (hi - lo) * 0.5 * (t + 1.0));
      if (!std::isfinite(v)) {
        c.measured = std::numeric_limits<double>::quiet_NaN();
        break;
      }
      c.measured = std::min(c.measured, v);
    }
  } catch (const std::exception&) {
    c.measured = std::numeric_limits<double>::quiet_NaN();
  }
  c.pass = std::isfinite(c.measured) && c.measured > 0.0;
  return c;
}

ValidationReport finish(std::vector<ValidationCheck> checks) {
  ValidationReport r;
  r.checks = std::move(checks);
  r.pass = std::all_of(r.checks.begin(), r.checks.end(), [](const ValidationCheck& c) { return c.pass; });
  return r;
}

double gauss_panel(const RealFn& g, double a, double b) {
  return integrate_fixed(g, a, b, kPanelPoints);
}

// phi(s) = -1 + int_0^s a, tabulated on uniform panels in s.
class MomentumMap {
 public:
  MomentumMap(ArclengthProfile ap, int panels) : ap_(std::move(ap)), width_(ap_.length / panels) {
    cumulative_.resize(panels + 1, 0.0);
    for (int i = 0; i < panels; ++i)
      cumulative_[i + 1] = cumulative_[i] + gauss_panel(ap_.a, i * width_, (i + 1) * width_);
  }

  double phi(double s) const {
    const int panels = static_cast<int>(cumulative_.size()) - 1;
    const int i = std::clamp(static_cast<int>(s / width_), 0, panels - 1);
    return -1.0 + cumulative_[i] + gauss_panel(ap_.a, i * width_, s);
  }

  double s_of_x(double x) const {
    if (x <= -1.0) return 0.0;
    if (x >= 1.0) return ap_.length;
    // Bracket with the table, then polish with TOMS 748.
    const double target = x + 1.0;
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
    int i = it == cumulative_.begin() ? 0 : static_cast<int>(it - cumulative_.begin()) - 1;
    const int panels = static_cast<int>(cumulative_.size()) - 1;
    i = std::clamp(i, 0, panels - 1);
    double lo = i * width_, hi = (i + 1) * width_;
    if (i == panels - 1) hi = ap_.length;
    auto g = [&](double s) { return phi(s) - x; };
    double glo = g(lo), ghi = g(hi);
    if (glo >= 0.0) return lo;
    if (ghi <= 0.0) return hi;
    std::uintmax_t iters = 100;
    auto r = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi,
                                               boost::math::tools::eps_tolerance<double>(52), iters);
    return 0.5 * (r.first + r.second);
  }

  const ArclengthProfile& arclength() const { return ap_; }

 private:
  ArclengthProfile ap_;
  double width_;
  std::vector<double> cumulative_;
};

}  // namespace

AreaMismatchError::AreaMismatchError(double measured_area)
    : ProfileError("surface area " + std::to_string(measured_area) +
                   " differs from 4*pi; normalize the arclength profile first"),
      area_(measured_area) {}

const char* to_string(ProfileSource source) {
  switch (source) {
    case ProfileSource::expression: return "expression";
    case ProfileSource::samples: return "samples";
    case ProfileSource::transformed: return "transformed";
  }
  return "?";
}

Profile::Profile(std::string name, ProfileSource source, RealFn f, RealFn df, RealFn d2f,
                 double tol_bc, std::vector<double> breakpoints)
    : name_(std::move(name)),
      source_(source),
      f_(std::move(f)),
      df_(std::move(df)),
      d2f_(std::move(d2f)),
      tol_bc_(tol_bc),
      breakpoints_(std::move(breakpoints)) {}

double Profile::h(double x) const {
  const double w = (1.0 - x) * (1.0 + x);
  if (w > 1e-12) return f_(x) / w;
  // At the poles f and 1 - x^2 vanish together; use the ratio of slopes.
  const double xc = std::clamp(x, -1.0, 1.0);
  return df_(xc) / (-2.0 * xc);
}

const ValidationCheck* ValidationReport::first_failure() const {
  for (const auto& c : checks)
    if (!c.pass) return &c;
  return nullptr;
}

Profile make_profile(const Expr& f, std::string name) {
  if (name.empty()) name = f.to_string();
  for (double x : {-1.0, 1.0}) {
    const double v = f.eval(x);
    if (!std::isfinite(v)) throw ProfileError("expression is not finite at x = " + std::to_string(x));
  }
  // Chebyshev points cluster at the poles; the uniform grid also hits 0 and
  // other round numbers where hand-written singularities tend to sit.
  std::vector<double> grid = chebyshev_points(kValidationGridSize);
  for (int i = 0; i <= kValidationGridSize; ++i) grid.push_back(-1.0 + 2.0 * i / kValidationGridSize);
  for (double x : grid) {
    const double v = f.eval(x);  // EvalError propagates with the offending subexpression
    if (!std::isfinite(v)) throw ProfileError("expression is not finite at x = " + std::to_string(x));
  }
  Expr df = f.derivative();
  Expr d2f = df.derivative();
  Profile p(std::move(name), ProfileSource::expression, [f](double x) { return f.eval(x); },
            [df](double x) { return df.eval(x); }, [d2f](double x) { return d2f.eval(x); },
            kExpressionBcTol);
  p.set_expression(f);
  return p;
}

Profile make_profile(std::span<const std::pair<double, double>> samples, std::string name) {
  if (samples.size() < 16) throw ProfileError("sample-backed profiles need at least 16 points");
  std::vector<double> xs, ys;
  xs.reserve(samples.size());
  ys.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto [x, y] = samples[i];
    if (!std::isfinite(x) || !std::isfinite(y)) throw ProfileError("non-finite sample");
    if (i > 0 && !(x > xs.back())) throw ProfileError("sample abscissae must be strictly increasing");
    xs.push_back(x);
    ys.push_back(y);
  }
  if (std::abs(xs.front() + 1.0) > 1e-12 || std::abs(xs.back() - 1.0) > 1e-12)
    throw ProfileError("samples must cover [-1, 1] with endpoints included");
  xs.front() = -1.0;
  xs.back() = 1.0;
  // End slopes are part of the smoothness data of the metric, not estimated.
  auto spline = std::make_shared<const ClampedSpline>(xs, ys, 2.0, -2.0);
  if (name.empty()) name = "samples";
  return Profile(std::move(name), ProfileSource::samples,
                 [spline](double x) { return spline->value(x); },
                 [spline](double x) { return spline->slope(x); },
                 [spline](double x) { return spline->second(x); }, kSampleBcTol, xs);
}

Profile builtin_profile(std::string_view name) {
  if (name == "round") return make_profile(parse(kRoundSphereExpr), "round");
  if (name == "paper-example") return make_profile(parse(kPaperExampleExpr), "paper-example");
  throw ProfileError("unknown built-in profile '" + std::string(name) + "'");
}

ValidationReport validate(const Profile& p) {
  const double tol = p.tol_bc();
  RealFn f = [&p](double x) { return p.f(x); };
  RealFn df = [&p](double x) { return p.df(x); };
  std::vector<ValidationCheck> checks;
  checks.push_back(near_check("f(-1)", f, -1.0, 0.0, tol));
  checks.push_back(near_check("f(1)", f, 1.0, 0.0, tol));
  checks.push_back(near_check("f'(-1)", df, -1.0, 2.0, tol));
  checks.push_back(near_check("f'(1)", df, 1.0, -2.0, tol));
  checks.push_back(positivity_check("min interior f", f, -1.0, 1.0));
  return finish(std::move(checks));
}

ValidationReport validate(const ArclengthProfile& ap) {
  const double tol = ap.tol_bc;
  std::vector<ValidationCheck> checks;
  ValidationCheck len{"length", ap.length, 0.0, 0.0, std::isfinite(ap.length) && ap.length > 0.0};
  checks.push_back(len);
  if (!len.pass) return finish(std::move(checks));
  checks.push_back(near_check("a(0)", ap.a, 0.0, 0.0, tol));
  checks.push_back(near_check("a(L)", ap.a, ap.length, 0.0, tol));
  checks.push_back(near_check("a'(0)", ap.da, 0.0, 1.0, tol));
  checks.push_back(near_check("a'(L)", ap.da, ap.length, -1.0, tol));
  checks.push_back(positivity_check("min interior a", ap.a, 0.0, ap.length));
  return finish(std::move(checks));
}

ArclengthProfile make_arclength_profile(const Expr& a, double length, std::string name) {
  if (!(length > 0.0) || !std::isfinite(length)) throw ProfileError("meridian length must be positive");
  if (name.empty()) name = a.to_string("s");
  Expr da = a.derivative();
  Expr d2a = da.derivative();
  ArclengthProfile ap;
  ap.name = std::move(name);
  ap.a = [a](double s) { return a.eval(s); };
  ap.da = [da](double s) { return da.eval(s); };
  ap.d2a = [d2a](double s) { return d2a.eval(s); };
  ap.length = length;
  return ap;
}

double surface_area(const ArclengthProfile& ap) {
  return 2.0 * std::numbers::pi * integrate(ap.a, 0.0, ap.length);
}

Profile momentum_transform(const ArclengthProfile& ap) {
  const double area = surface_area(ap);
  if (std::abs(area - kFourPi) > 1e-8) throw AreaMismatchError(area);
  auto map = std::make_shared<const MomentumMap>(ap, 512);
  const double length = ap.length;
  const double pole_gap = 1e-5 * length;
  auto f = [map](double x) {
    const double a = map->arclength().a(map->s_of_x(x));
    return a * a;
  };
  auto df = [map](double x) { return 2.0 * map->arclength().da(map->s_of_x(x)); };
  // f'' = 2 a''/a, evaluated slightly off the poles where both factors vanish.
  auto d2f = [map, length, pole_gap](double x) {
    const double s = std::clamp(map->s_of_x(x), pole_gap, length - pole_gap);
    const auto& arc = map->arclength();
    return 2.0 * arc.d2a(s) / arc.a(s);
  };
  return Profile(ap.name, ProfileSource::transformed, f, df, d2f, kTransformedBcTol);
}

ArclengthProfile arclength_recover(const Profile& p) {
  auto map = std::make_shared<const MeridianMap>(p);
  ArclengthProfile ap;
  ap.name = p.name();
  ap.length = map->length();
  ap.tol_bc = std::max(p.tol_bc(), kTransformedBcTol);
  ap.a = [map](double s) { return map->radius_at_sigma(map->sigma_of_s(s)); };
  ap.da = [map, p](double s) { return 0.5 * p.df(map->x_of_s(s)); };
  ap.d2a = [map, p](double s) {
    const double sigma = map->sigma_of_s(s);
    const double x = -std::cos(sigma);
    return 0.5 * p.d2f(x) * map->radius_at_sigma(sigma);
  };
  return ap;
}

ArclengthProfile normalize_area(const ArclengthProfile& ap) {
  const double area = surface_area(ap);
  if (!(area > 0.0) || !std::isfinite(area)) throw ProfileError("surface area must be positive");
  const double c = std::sqrt(kFourPi / area);
  ArclengthProfile out;
  out.name = ap.name;
  out.length = c * ap.length;
  out.scale = ap.scale * c;
  out.tol_bc = ap.tol_bc;
  out.a = [a = ap.a, c](double s) { return c * a(s / c); };
  out.da = [da = ap.da, c](double s) { return da(s / c); };
  out.d2a = [d2a = ap.d2a, c](double s) { return d2a(s / c) / c; };
  return out;
}

double curvature(const Profile& p, double x) { return -0.5 * p.d2f(x); }

double integrate_over_profile(const Profile& p, const RealFn& g, double rel_tol) {
  const auto& bp = p.breakpoints();
  if (bp.size() < 2) return integrate(g, -1.0, 1.0, rel_tol);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) sum += integrate(g, bp[i], bp[i + 1], rel_tol);
  return sum;
}

double gauss_bonnet_residual(const Profile& p) {
  const double total =
      2.0 * std::numbers::pi * integrate_over_profile(p, [&p](double x) { return curvature(p, x); });
  return std::abs(total - kFourPi);
}

// ------------------------------------------------------------- MeridianMap

MeridianMap::MeridianMap(const Profile& p, int panels)
    : profile_(p), width_(std::numbers::pi / panels) {
  cumulative_.resize(panels + 1, 0.0);
  for (int i = 0; i < panels; ++i)
    cumulative_[i + 1] = cumulative_[i] + partial(i * width_, (i + 1) * width_);
  // Independent adaptive pass guards the fixed panel rule.
  const double check = integrate([this](double t) { return speed(t); }, 0.0, std::numbers::pi, 1e-12);
  if (std::abs(check - cumulative_.back()) > 1e-9 * check)
    throw QuadratureError("meridian length quadrature did not converge near the poles");
}

double MeridianMap::speed(double sigma) const {
  const double hv = profile_.h(-std::cos(sigma));
  if (!(hv > 0.0) || !std::isfinite(hv))
    throw QuadratureError("profile is not positive along the meridian; arclength is not integrable");
  return 1.0 / std::sqrt(hv);
}

double MeridianMap::partial(double a, double b) const {
  return gauss_panel([this](double t) { return speed(t); }, a, b);
}

double MeridianMap::s_of_sigma(double sigma) const {
  const int panels = static_cast<int>(cumulative_.size()) - 1;
  sigma = std::clamp(sigma, 0.0, std::numbers::pi);
  const int i = std::clamp(static_cast<int>(sigma / width_), 0, panels - 1);
  return cumulative_[i] + partial(i * width_, sigma);
}

double MeridianMap::sigma_of_s(double s) const {
  const double length = cumulative_.back();
  if (s <= 0.0) return 0.0;
  if (s >= length) return std::numbers::pi;
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  const int panels = static_cast<int>(cumulative_.size()) - 1;
  const int i = std::clamp(static_cast<int>(it - cumulative_.begin()) - 1, 0, panels - 1);
  double lo = i * width_, hi = (i + 1) * width_;
  const double span = cumulative_[i + 1] - cumulative_[i];
  double sigma = lo + width_ * (s - cumulative_[i]) / span;
  for (int iter = 0; iter < 60; ++iter) {
    const double g = cumulative_[i] + partial(i * width_, sigma) - s;
    if (std::abs(g) <= 4e-16 * length) break;
    if (g > 0.0) hi = sigma; else lo = sigma;
    double next = sigma - g / speed(sigma);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - sigma) < 1e-17) break;
    sigma = next;
  }
  return sigma;
}

double MeridianMap::x_of_s(double s) const { return -std::cos(sigma_of_s(s)); }

double MeridianMap::radius_at_sigma(double sigma) const {
  const double hv = profile_.h(-std::cos(sigma));
  return std::sin(sigma) * std::sqrt(std::max(hv, 0.0));
}

double MeridianMap::integrate_ds(const RealFn& w_of_x, double sigma0, double sigma1) const {
  auto integrand = [&](double t) { return w_of_x(-std::cos(t)) * speed(t); };
  double sum = 0.0;
  double a = sigma0;
  while (a < sigma1) {
    const double next_boundary = (std::floor(a / width_ + 1e-12) + 1.0) * width_;
    const double b = std::min(sigma1, next_boundary);
    sum += gauss_panel(integrand, a, b);
    a = b;
  }
  return sum;
}

}  // namespace revspec
