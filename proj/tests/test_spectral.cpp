#include "revspec/spectral.hpp"
#include "support/families.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace revspec;

namespace {

std::vector<std::pair<double, int>> rows(const SpectrumTable& t) {
  std::vector<std::pair<double, int>> out;
  for (const auto& e : t.entries) out.emplace_back(e.lambda, e.multiplicity);
  return out;
}

}  // namespace

TEST_CASE("round sphere enumeration") {
  const Profile round = builtin_profile("round");
  const SpectrumTable t7 = enumerate_below(round, 7.0);
  REQUIRE(t7.entries.size() == 2);
  CHECK(t7.entries[0].lambda == doctest::Approx(2.0));
  CHECK(t7.entries[0].multiplicity == 3);
  CHECK(t7.entries[1].lambda == doctest::Approx(6.0));
  CHECK(t7.entries[1].multiplicity == 5);
  CHECK(t7.entries[1].channels == std::vector<Attribution>{{0, 2}, {1, 2}, {2, 1}});

  const auto r13 = rows(enumerate_below(round, 13.0));
  REQUIRE(r13.size() == 3);
  CHECK(r13[2].first == doctest::Approx(12.0));
  CHECK(r13[2].second == 7);

  // Spherical harmonics: 2l+1 up to l = 8.
  const SpectrumTable big = enumerate_below(round, 73.0);
  REQUIRE(big.entries.size() == 8);
  for (int l = 1; l <= 8; ++l) {
    CHECK(big.entries[l - 1].lambda == doctest::Approx(l * (l + 1.0)).epsilon(1e-9));
    CHECK(big.entries[l - 1].multiplicity == 2 * l + 1);
  }
  CHECK(big.cutoff <= 73.0);
  CHECK(big.cutoff > 73.0 * (1 - 1e-7));
  CHECK(big.diagnostics.empty());
}

TEST_CASE("paper example has even multiplicities below its first invariant eigenvalue") {
  const Profile p = builtin_profile("paper-example");
  const double l01 = refine(p, 0, 1, 1e-8).eigenvalues[0];
  const SpectrumTable t = enumerate_below(p, l01 * (1 + 1e-4));
  REQUIRE(t.entries.size() >= 4);
  for (int m = 0; m < 4; ++m) {
    CHECK(t.entries[m].multiplicity % 2 == 0);
    CHECK_FALSE(t.entries[m].has_invariant_channel());
  }
  CHECK(t.entries.back().has_invariant_channel());
}

TEST_CASE("cutoff validation and resource caps") {
  const Profile round = builtin_profile("round");
  CHECK_THROWS_AS(enumerate_below(round, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_below(round, -1.0), std::invalid_argument);
  SpectralOptions opts;
  opts.max_channels = 10;
  CHECK_THROWS_AS(enumerate_below(round, 50.0, opts), ResourceError);
  opts.max_channels = 256;
  opts.solver.basis_cap = 64;
  CHECK_THROWS_AS(enumerate_below(round, 200.0, opts), ResourceError);
}

TEST_CASE("merging attributes channels and flags duplicates") {
  ChannelSpectrum a{0, {2.0, 6.0}, 32, {0, 0}, {}};
  ChannelSpectrum b{1, {2.0 * (1 + 1e-8), 6.0}, 32, {0, 0}, {}};
  ChannelSpectrum c{2, {6.0 * (1 - 1e-8)}, 32, {0}, {}};
  const SpectrumTable t = merge_channels({a, b, c}, 10.0, 1e-6);
  REQUIRE(t.entries.size() == 2);
  CHECK(t.entries[0].multiplicity == 3);
  CHECK(t.entries[1].multiplicity == 5);
  CHECK(t.entries[1].coincident());
  CHECK(t.diagnostics.empty());

  ChannelSpectrum twice{1, {3.0, 3.0 * (1 + 1e-9)}, 32, {0, 0}, {}};
  const SpectrumTable bad = merge_channels({twice}, 10.0, 1e-6);
  CHECK_FALSE(bad.diagnostics.empty());

  CHECK(multiplicity_of({{0, 1}, {3, 2}, {4, 1}}) == 5);
}

TEST_CASE("trace integrals") {
  CHECK(trace0_integral(builtin_profile("round")) == doctest::Approx(1.0).epsilon(1e-13));
  const Profile p = builtin_profile("paper-example");
  // (1/2) int (1+9x^36)/10 = (1/20)(2 + 18/37) = 23/185.
  CHECK(trace0_integral(p) == doctest::Approx(23.0 / 185.0).epsilon(1e-12));
  CHECK(channel_lower_bound(p, 0, 1) == doctest::Approx(185.0 / 23.0).epsilon(1e-12));
  CHECK(channel_lower_bound(p, -3, 2) == 6.0);
  CHECK(trace_target(p, 4) == 0.25);
}

TEST_CASE("round sphere partial sums telescope") {
  const Profile round = builtin_profile("round");
  for (int k = 0; k <= 4; ++k) {
    const ChannelSpectrum cs = refine(round, k, 50, 1e-8);
    const double target = trace_target(round, k);
    double previous = 0.0;
    for (int J = 1; J <= 50; ++J) {
      const double s = trace_partial_sum(cs, J);
      CHECK(s > previous);
      CHECK(s < target);
      previous = s;
    }
    const double remainder = k == 0 ? 1.0 / 51.0 : 1.0 / (k + 50.0);
    CHECK(std::abs(target - previous - remainder) <= 1e-9);
  }
  CHECK(std::abs(trace_partial_sum(refine(round, 3, 50, 1e-8), 50) - 1.0 / 3.0) <= 2e-2);
  CHECK_THROWS(trace_partial_sum(refine(round, 1, 5, 1e-8), 6));
}

TEST_CASE("upper bound on the first invariant eigenvalue") {
  const Profile round = builtin_profile("round");
  CHECK(lambda01_upper_bound(round) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(refine(round, 0, 1, 1e-10).eigenvalues[0] == doctest::Approx(2.0).epsilon(1e-10));
  const Profile p = builtin_profile("paper-example");
  CHECK(lambda01_upper_bound(p) >= refine(p, 0, 1, 1e-8).eigenvalues[0]);

  const BoundsReport b = bounds_report(p, 3, 2);
  CHECK(b.channel_lower_bounds.size() == 8);
  CHECK(b.channel_lower_bounds.at({0, 2}) == doctest::Approx(2 * 185.0 / 23.0));
  CHECK(b.channel_lower_bounds.at({3, 2}) == 6.0);
}
