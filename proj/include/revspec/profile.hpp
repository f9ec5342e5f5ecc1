#pragma once

// The metric datum of a rotationally symmetric sphere.
//
// In momentum coordinates (x, theta) in [-1,1] x [0, 2pi) the metric is
//
//   g = dx^2 / f(x) + f(x) dtheta^2,
//
// with f(+-1) = 0 and f'(+-1) = -+2 at the poles. The area element is
// dx dtheta, so every such metric has area 4pi. In arclength coordinates
// the same metric reads ds^2 + a(s)^2 dtheta^2 with f = a^2 o phi^-1 and
// phi(s) = -1 + int_0^s a.

#include "revspec/expr.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace revspec {

using RealFn = std::function<double(double)>;

inline constexpr const char* kRoundSphereExpr = "1-x^2";
inline constexpr const char* kPaperExampleExpr = "10*(1-x^2)/(1+9*x^36)";

inline constexpr double kExpressionBcTol = 1e-10;
inline constexpr double kSampleBcTol = 1e-6;
inline constexpr double kTransformedBcTol = 1e-8;
inline constexpr int kValidationGridSize = 1024;

class ProfileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AreaMismatchError : public ProfileError {
 public:
  explicit AreaMismatchError(double measured_area);
  double measured_area() const noexcept { return area_; }

 private:
  double area_;
};

enum class ProfileSource { expression, samples, transformed };

const char* to_string(ProfileSource source);

class Profile {
 public:
  Profile(std::string name, ProfileSource source, RealFn f, RealFn df, RealFn d2f, double tol_bc,
          std::vector<double> breakpoints = {});

  double f(double x) const { return f_(x); }
  double df(double x) const { return df_(x); }
  double d2f(double x) const { return d2f_(x); }

  /// f(x) / (1 - x^2); finite up to and including the poles for valid
  /// profiles (tends to 1 there).
  double h(double x) const;

  const std::string& name() const { return name_; }
  ProfileSource source() const { return source_; }
  double tol_bc() const { return tol_bc_; }
  void set_tol_bc(double tol) { tol_bc_ = tol; }

  /// Points where f'' may jump (spline knots); empty for smooth profiles.
  const std::vector<double>& breakpoints() const { return breakpoints_; }

  /// Source expression, when the profile is expression-backed.
  const std::optional<Expr>& expression() const { return expr_; }
  void set_expression(Expr e) { expr_ = std::move(e); }

 private:
  std::string name_;
  ProfileSource source_;
  RealFn f_, df_, d2f_;
  double tol_bc_;
  std::vector<double> breakpoints_;
  std::optional<Expr> expr_;
};

struct ArclengthProfile {
  std::string name;
  RealFn a;
  RealFn da;
  RealFn d2a;
  double length = 0.0;
  /// Homothety factor applied by normalize_area (1 when untouched).
  double scale = 1.0;
  double tol_bc = kExpressionBcTol;
};

struct ValidationCheck {
  std::string name;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ValidationReport {
  bool pass = false;
  std::vector<ValidationCheck> checks;

  /// First failing check, or nullptr.
  const ValidationCheck* first_failure() const;
};

Profile make_profile(const Expr& f, std::string name = {});
Profile make_profile(std::span<const std::pair<double, double>> samples, std::string name = {});

/// "round" or "paper-example".
Profile builtin_profile(std::string_view name);

ValidationReport validate(const Profile& p);
ValidationReport validate(const ArclengthProfile& ap);

/// Arclength profile from an expression in the variable s on [0, length].
ArclengthProfile make_arclength_profile(const Expr& a, double length, std::string name = {});

/// 2 pi int_0^L a(s) ds.
double surface_area(const ArclengthProfile& ap);

Profile momentum_transform(const ArclengthProfile& ap);
ArclengthProfile arclength_recover(const Profile& p);
ArclengthProfile normalize_area(const ArclengthProfile& ap);

/// Gauss curvature -f''(x)/2.
double curvature(const Profile& p, double x);

/// |int K dA - 4 pi|, with the curvature integral done by quadrature.
double gauss_bonnet_residual(const Profile& p);

/// Integral of g over [-1, 1], split at the profile's breakpoints.
double integrate_over_profile(const Profile& p, const RealFn& g, double rel_tol = 1e-13);

/// Meridian arclength of a momentum profile.
///
/// Uses the pole-regular variable sigma with x = -cos(sigma), in which
/// ds/dsigma = 1/sqrt(h(x)) has no endpoint singularity.
class MeridianMap {
 public:
  explicit MeridianMap(const Profile& p, int panels = 512);

  double length() const { return cumulative_.back(); }
  double s_of_sigma(double sigma) const;
  double sigma_of_s(double s) const;
  double x_of_s(double s) const;
  /// a(s) = sin(sigma) sqrt(h).
  double radius_at_sigma(double sigma) const;

  /// int w(x(s)) ds between sigma0 and sigma1, using the same panel rule
  /// as the arclength table.
  double integrate_ds(const RealFn& w_of_x, double sigma0, double sigma1) const;

 private:
  double speed(double sigma) const;  // ds/dsigma
  double partial(double a, double b) const;

  Profile profile_;
  double width_;
  std::vector<double> cumulative_;
};

}  // namespace revspec
