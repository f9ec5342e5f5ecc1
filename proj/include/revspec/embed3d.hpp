#pragma once

// Surfaces of revolution realizing an embeddable profile:
//
//   (a(s) cos t, a(s) sin t, z(s)),   z(s) = int_0^s sqrt(1 - a'(u)^2) du,
//
// with a' = f'/2 along the meridian. The + branch of z is used throughout.

#include "revspec/profile.hpp"

#include <array>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace revspec {

class NotEmbeddableError : public std::runtime_error {
 public:
  NotEmbeddableError(const std::string& what, double x) : std::runtime_error(what), x_(x) {}
  /// Momentum coordinate where |f'| exceeds 2.
  double where() const noexcept { return x_; }

 private:
  double x_;
};

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CurveSample {
  double s = 0.0;
  double a = 0.0;
  double z = 0.0;
};

struct ProfileCurve {
  std::vector<CurveSample> samples;
  double length = 0.0;
  std::vector<std::string> warnings;
};

struct EmbeddingMesh {
  std::vector<std::array<double, 3>> vertices;
  std::vector<std::array<int, 3>> faces;  // 0-based
  int n_theta = 0;
  int rings = 0;
  ProfileCurve curve;
};

struct MetricResidual {
  double sup = 0.0;
  double rms = 0.0;
  double sup_meridian = 0.0;  // |a'^2 + z'^2 - 1|
  double sup_parallel = 0.0;  // relative error of the dtheta^2 coefficient
  int samples = 0;
};

/// Meridian of the embedding on a uniform arclength grid of n_samples
/// points, poles included. Throws NotEmbeddableError when 1 - (f'/2)^2 drops
/// below -tol; smaller violations are clamped to 0 with a warning.
ProfileCurve embed_profile_curve(const Profile& p, int n_samples, double tol = 1e-9);

/// Rings of n_theta vertices at the interior samples, one vertex at each
/// pole, fans at the poles and split quads in between. Faces are oriented
/// with outward normals.
EmbeddingMesh make_mesh(const ProfileCurve& curve, int n_theta);

/// First fundamental form of the sampled parametrization against
/// ds^2 + a(s)^2 dtheta^2 of the profile.
MetricResidual induced_metric_residual(const ProfileCurve& curve, const Profile& p);
MetricResidual induced_metric_residual(const EmbeddingMesh& mesh, const Profile& p);

double mesh_area(const EmbeddingMesh& mesh);
int euler_characteristic(const EmbeddingMesh& mesh);

void write_obj(const EmbeddingMesh& mesh, std::ostream& out);
std::string export_obj(const EmbeddingMesh& mesh);
std::string curve_csv(const ProfileCurve& curve);

}  // namespace revspec
