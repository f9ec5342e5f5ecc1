#include "revspec/embed3d.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>
#include <sstream>

namespace revspec {

namespace {

// Fornberg weights for the first derivative at x0 from the given nodes.
std::vector<double> derivative_weights(double x0, const std::vector<double>& nodes) {
  const int n = static_cast<int>(nodes.size());
  std::vector<std::vector<double>> c(n, std::vector<double>(2, 0.0));
  c[0][0] = 1.0;
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, 1);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = c[i][1];
  return w;
}

struct Derivatives {
  std::vector<double> da, dz;
};

// Sixth-order differentiation of the sampled curve along s.
Derivatives differentiate_curve(const std::vector<CurveSample>& samples) {
  const int n = static_cast<int>(samples.size());
  const int width = std::min(n, 7);
  Derivatives d{std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < n; ++i) {
    const int lo = std::clamp(i - width / 2, 0, n - width);
    std::vector<double> nodes(width);
    for (int m = 0; m < width; ++m) nodes[m] = samples[lo + m].s;
    const auto w = derivative_weights(samples[i].s, nodes);
    for (int m = 0; m < width; ++m) {
      d.da[i] += w[m] * samples[lo + m].a;
      d.dz[i] += w[m] * samples[lo + m].z;
    }
  }
  return d;
}

MetricResidual residual_from(const std::vector<CurveSample>& samples, const std::vector<double>& radius_sq,
                             const Profile& p) {
  const MeridianMap map(p);
  const Derivatives d = differentiate_curve(samples);
  MetricResidual r;
  double sum_sq = 0.0;
  for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
    const double meridian = std::abs(d.da[i] * d.da[i] + d.dz[i] * d.dz[i] - 1.0);
    // Metric coefficient from f itself rather than the curve's radius map.
    const double a = std::sqrt(std::max(0.0, p.f(map.x_of_s(samples[i].s))));
    const double parallel = std::abs(radius_sq[i] - a * a) / (a * a);
    r.sup_meridian = std::max(r.sup_meridian, meridian);
    r.sup_parallel = std::max(r.sup_parallel, parallel);
    const double worst = std::max(meridian, parallel);
    r.sup = std::max(r.sup, worst);
    sum_sq += worst * worst;
    ++r.samples;
  }
  if (r.samples > 0) r.rms = std::sqrt(sum_sq / r.samples);
  return r;
}

void append_number(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

}  // namespace

ProfileCurve embed_profile_curve(const Profile& p, int n_samples, double tol) {
  if (n_samples < 3) throw MeshError("a profile curve needs at least 3 samples");
  // Slope screening on a dense grid before any integration.
  constexpr int kScreen = 4096;
  for (int i = 0; i <= kScreen; ++i) {
    const double x = -1.0 + 2.0 * i / kScreen;
    const double half_slope = 0.5 * p.df(x);
    if (1.0 - half_slope * half_slope < -tol) {
      std::ostringstream msg;
      msg << "profile is not embeddable: |f'(" << x << ")| = " << std::abs(p.df(x)) << " > 2";
      throw NotEmbeddableError(msg.str(), x);
    }
  }

  const MeridianMap map(p);
  ProfileCurve curve;
  curve.length = map.length();
  bool clamped = false;
  double worst_clamp = 0.0, worst_x = 0.0;
  auto vertical = [&](double x) {
    const double half_slope = 0.5 * p.df(x);
    const double v = 1.0 - half_slope * half_slope;
    if (v < 0.0) {
      if (v < -tol) {
        std::ostringstream msg;
        msg << "profile is not embeddable: |f'(" << x << ")| = " << std::abs(p.df(x)) << " > 2";
        throw NotEmbeddableError(msg.str(), x);
      }
      if (v < worst_clamp) {
        worst_clamp = v;
        worst_x = x;
      }
      clamped = clamped || v < -1e-12;
      return 0.0;
    }
    return std::sqrt(v);
  };

  curve.samples.resize(n_samples);
  double previous_sigma = 0.0, z = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const double s = curve.length * i / (n_samples - 1);
    const double sigma = i == n_samples - 1 ? std::numbers::pi : map.sigma_of_s(s);
    if (i > 0) z += map.integrate_ds(vertical, previous_sigma, sigma);
    const double a = (i == 0 || i == n_samples - 1) ? 0.0 : map.radius_at_sigma(sigma);
    curve.samples[i] = {s, a, z};
    previous_sigma = sigma;
  }
  if (clamped) {
    std::ostringstream msg;
    msg << "grazing contact: 1 - (f'/2)^2 = " << worst_clamp << " at x = " << worst_x << " clamped to 0";
    curve.warnings.push_back(msg.str());
  }
  return curve;
}

EmbeddingMesh make_mesh(const ProfileCurve& curve, int n_theta) {
  if (n_theta < 8) throw MeshError("n_theta must be at least 8");
  const auto& smp = curve.samples;
  if (smp.size() < 3) throw MeshError("a profile curve needs at least 3 samples");
  for (std::size_t i = 1; i < smp.size(); ++i)
    if (!(smp[i].s > smp[i - 1].s)) throw MeshError("degenerate curve: repeated or unordered samples");

  EmbeddingMesh mesh;
  mesh.n_theta = n_theta;
  mesh.rings = static_cast<int>(smp.size()) - 2;
  mesh.curve = curve;
  mesh.vertices.reserve(static_cast<std::size_t>(mesh.rings) * n_theta + 2);
  mesh.vertices.push_back({0.0, 0.0, smp.front().z});
  for (int r = 1; r <= mesh.rings; ++r) {
    for (int j = 0; j < n_theta; ++j) {
      const double t = 2.0 * std::numbers::pi * j / n_theta;
      mesh.vertices.push_back({smp[r].a * std::cos(t), smp[r].a * std::sin(t), smp[r].z});
    }
  }
  mesh.vertices.push_back({0.0, 0.0, smp.back().z});

  const int south = 0;
  const int north = static_cast<int>(mesh.vertices.size()) - 1;
  auto ring = [n_theta](int r, int j) { return 1 + (r - 1) * n_theta + (j % n_theta); };
  for (int j = 0; j < n_theta; ++j) mesh.faces.push_back({south, ring(1, j + 1), ring(1, j)});
  for (int r = 1; r < mesh.rings; ++r) {
    for (int j = 0; j < n_theta; ++j) {
      mesh.faces.push_back({ring(r, j), ring(r, j + 1), ring(r + 1, j + 1)});
      mesh.faces.push_back({ring(r, j), ring(r + 1, j + 1), ring(r + 1, j)});
    }
  }
  for (int j = 0; j < n_theta; ++j) mesh.faces.push_back({ring(mesh.rings, j), ring(mesh.rings, j + 1), north});
  return mesh;
}

MetricResidual induced_metric_residual(const ProfileCurve& curve, const Profile& p) {
  std::vector<double> radius_sq(curve.samples.size());
  for (std::size_t i = 0; i < curve.samples.size(); ++i) radius_sq[i] = curve.samples[i].a * curve.samples[i].a;
  return residual_from(curve.samples, radius_sq, p);
}

MetricResidual induced_metric_residual(const EmbeddingMesh& mesh, const Profile& p) {
  // Meridian read back from the theta = 0 column of the mesh; the parallel
  // coefficient uses the worst vertex of each ring.
  const auto& smp = mesh.curve.samples;
  std::vector<CurveSample> read(smp.size());
  std::vector<double> radius_sq(smp.size(), 0.0);
  const MeridianMap map(p);
  read.front() = {smp.front().s, 0.0, mesh.vertices.front()[2]};
  read.back() = {smp.back().s, 0.0, mesh.vertices.back()[2]};
  for (int r = 1; r <= mesh.rings; ++r) {
    const auto& v0 = mesh.vertices[1 + (r - 1) * mesh.n_theta];
    read[r] = {smp[r].s, v0[0], v0[2]};
    const double a = std::sqrt(std::max(0.0, p.f(map.x_of_s(smp[r].s))));
    double worst = v0[0] * v0[0];
    for (int j = 0; j < mesh.n_theta; ++j) {
      const auto& v = mesh.vertices[1 + (r - 1) * mesh.n_theta + j];
      const double rr = v[0] * v[0] + v[1] * v[1];
      if (std::abs(rr - a * a) > std::abs(worst - a * a)) worst = rr;
    }
    radius_sq[r] = worst;
  }
  return residual_from(read, radius_sq, p);
}

double mesh_area(const EmbeddingMesh& mesh) {
  double area = 0.0;
  for (const auto& f : mesh.faces) {
    const auto& a = mesh.vertices[f[0]];
    const auto& b = mesh.vertices[f[1]];
    const auto& c = mesh.vertices[f[2]];
    const double u[3] = {b[0] - a[0], b[1] - a[1], b[2] - a[2]};
    const double v[3] = {c[0] - a[0], c[1] - a[1], c[2] - a[2]};
    const double n[3] = {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
    area += 0.5 * std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
  }
  return area;
}

int euler_characteristic(const EmbeddingMesh& mesh) {
  std::set<std::pair<int, int>> edges;
  for (const auto& f : mesh.faces)
    for (int e = 0; e < 3; ++e) {
      const int a = f[e], b = f[(e + 1) % 3];
      edges.insert({std::min(a, b), std::max(a, b)});
    }
  return static_cast<int>(mesh.vertices.size()) - static_cast<int>(edges.size()) +
         static_cast<int>(mesh.faces.size());
}

void write_obj(const EmbeddingMesh& mesh, std::ostream& out) {
  if (mesh.vertices.empty() || mesh.faces.empty()) throw MeshError("cannot export an empty mesh");
  std::string line;
  for (const auto& v : mesh.vertices) {
    line = "v ";
    append_number(line, v[0]);
    line += ' ';
    append_number(line, v[1]);
    line += ' ';
    append_number(line, v[2]);
    line += '\n';
    out << line;
  }
  for (const auto& f : mesh.faces)
    out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
  if (!out) throw MeshError("failed to write OBJ output");
}

std::string export_obj(const EmbeddingMesh& mesh) {
  std::ostringstream out;
  write_obj(mesh, out);
  return out.str();
}

std::string curve_csv(const ProfileCurve& curve) {
  std::string out = "s,a,z\n";
  for (const auto& smp : curve.samples) {
    append_number(out, smp.s);
    out += ',';
    append_number(out, smp.a);
    out += ',';
    append_number(out, smp.z);
    out += '\n';
  }
  return out;
}

}  // namespace revspec
