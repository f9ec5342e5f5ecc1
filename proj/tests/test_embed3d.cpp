#include "revspec/embed3d.hpp"
#include "support/families.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace revspec;

namespace {
constexpr double kFourPi = 4.0 * std::numbers::pi;
}

TEST_CASE("round sphere meridian is a unit half-circle") {
  const ProfileCurve c = embed_profile_curve(builtin_profile("round"), 101);
  REQUIRE(c.samples.size() == 101);
  CHECK(c.length == doctest::Approx(std::numbers::pi).epsilon(1e-10));
  CHECK(c.samples.front().a == 0.0);
  CHECK(c.samples.back().a == 0.0);
  CHECK(std::abs(c.samples.back().z - c.samples.front().z - 2.0) <= 1e-6);
  for (const auto& s : c.samples) {
    CHECK(std::abs(s.a * s.a + (s.z - 1.0) * (s.z - 1.0) - 1.0) <= 1e-6);
    CHECK(std::abs(s.z - (1.0 - std::cos(s.s))) <= 1e-6);
  }
  CHECK(c.warnings.empty());
}

TEST_CASE("meridians are unit speed and z is monotone for positive curvature") {
  for (const auto& text : testing::concave_profiles(4, 9)) {
    const Profile p = make_profile(parse(text));
    const ProfileCurve c = embed_profile_curve(p, 256);
    for (std::size_t i = 1; i < c.samples.size(); ++i) CHECK(c.samples[i].z > c.samples[i - 1].z);
    const MetricResidual r = induced_metric_residual(c, p);
    CHECK(r.sup_meridian <= 1e-6);
    CHECK(r.sup <= 1e-5);
  }
}

TEST_CASE("non-embeddable profiles are refused") {
  const Profile p = builtin_profile("paper-example");
  try {
    embed_profile_curve(p, 64);
    FAIL("expected NotEmbeddableError");
  } catch (const NotEmbeddableError& e) {
    CHECK(std::abs(p.df(e.where())) > 2.0);
  }
}

TEST_CASE("grazing contact is clamped with a warning") {
  // |f'| reaches 2 + 5e-11 inside: f = 1 - x^2 scaled slightly in the slope.
  const Profile round = builtin_profile("round");
  const Profile bumped("grazing", ProfileSource::expression,
                       [&](double x) { return round.f(x); },
                       [&](double x) { return std::abs(x) > 0.5 && std::abs(x) < 0.6 ? (x > 0 ? -2.0 - 5e-11 : 2.0 + 5e-11) : round.df(x); },
                       [&](double x) { return round.d2f(x); }, kExpressionBcTol);
  const ProfileCurve c = embed_profile_curve(bumped, 64);
  CHECK_FALSE(c.warnings.empty());
  CHECK_THROWS_AS(embed_profile_curve(bumped, 64, 1e-12), NotEmbeddableError);
}

TEST_CASE("round sphere mesh") {
  const ProfileCurve c = embed_profile_curve(builtin_profile("round"), 129);
  const EmbeddingMesh m = make_mesh(c, 64);
  CHECK(m.vertices.size() == 64u * 127u + 2u);
  CHECK(m.faces.size() == 2u * 64u * 127u);
  CHECK(euler_characteristic(m) == 2);
  for (const auto& v : m.vertices) {
    const double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + (v[2] - 1.0) * (v[2] - 1.0));
    CHECK(std::abs(r - 1.0) <= 1e-4);
  }
  // Ring vertices sit at the curve radius.
  for (int r = 1; r <= m.rings; ++r) {
    const auto& v = m.vertices[1 + (r - 1) * m.n_theta + 5];
    CHECK(std::abs(std::hypot(v[0], v[1]) - c.samples[r].a) <= 1e-10);
  }
  // Outward orientation: signed volume is positive.
  double volume = 0.0;
  for (const auto& f : m.faces) {
    const auto &a = m.vertices[f[0]], &b = m.vertices[f[1]], &d = m.vertices[f[2]];
    volume += (a[0] * (b[1] * d[2] - b[2] * d[1]) - a[1] * (b[0] * d[2] - b[2] * d[0]) +
               a[2] * (b[0] * d[1] - b[1] * d[0])) / 6.0;
  }
  CHECK(volume == doctest::Approx(4.0 * std::numbers::pi / 3.0).epsilon(1e-2));
}

TEST_CASE("mesh area converges at second order") {
  const Profile round = builtin_profile("round");
  const double e1 = std::abs(mesh_area(make_mesh(embed_profile_curve(round, 65), 32)) - kFourPi);
  const double e2 = std::abs(mesh_area(make_mesh(embed_profile_curve(round, 129), 64)) - kFourPi);
  const double e3 = std::abs(mesh_area(make_mesh(embed_profile_curve(round, 257), 128)) - kFourPi);
  CHECK(e2 < e1);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
  CHECK(e2 / e3 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("mesh contracts") {
  const ProfileCurve c = embed_profile_curve(builtin_profile("round"), 16);
  CHECK_THROWS_AS(make_mesh(c, 4), MeshError);
  ProfileCurve repeated = c;
  repeated.samples[3].s = repeated.samples[2].s;
  CHECK_THROWS_AS(make_mesh(repeated, 16), MeshError);
  CHECK_THROWS_AS(export_obj(EmbeddingMesh{}), MeshError);
}

TEST_CASE("residual detects a corrupted curve") {
  const Profile round = builtin_profile("round");
  ProfileCurve c = embed_profile_curve(round, 256);
  CHECK(induced_metric_residual(c, round).sup <= 1e-6);
  CHECK(induced_metric_residual(make_mesh(c, 128), round).sup <= 1e-6);
  for (auto& s : c.samples) s.z *= 1.01;
  CHECK(induced_metric_residual(c, round).sup > 1e-3);
}

TEST_CASE("OBJ export matches the golden file") {
  ProfileCurve c;
  c.length = 2.0;
  c.samples = {{0.0, 0.0, 0.0}, {0.5, 0.5, 0.25}, {1.5, 0.75, 1.0}, {2.0, 0.0, 1.5}};
  const EmbeddingMesh m = make_mesh(c, 8);
  CHECK(m.rings == 2);
  const std::string obj = export_obj(m);
  CHECK(obj.find('\r') == std::string::npos);
  std::ifstream golden(std::string(REVSPEC_TEST_DATA) + "/two_ring.obj", std::ios::binary);
  REQUIRE(golden.good());
  std::stringstream expected;
  expected << golden.rdbuf();
  CHECK(obj == expected.str());

  int vertices = 0, faces = 0;
  std::istringstream lines(obj);
  for (std::string line; std::getline(lines, line);) {
    vertices += line.rfind("v ", 0) == 0;
    faces += line.rfind("f ", 0) == 0;
  }
  CHECK(vertices == 8 * 2 + 2);
  CHECK(faces == 2 * 8 * 2);
}

TEST_CASE("curve CSV") {
  const ProfileCurve c = embed_profile_curve(builtin_profile("round"), 5);
  const std::string csv = curve_csv(c);
  CHECK(csv.rfind("s,a,z\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
}
