// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Tolerances and time limits are the contract values.

#include "revspec/embed3d.hpp"
#include "revspec/obstruction.hpp"
#include "support/families.hpp"
#include "support/oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

using namespace revspec;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& why) {
    if (!ok && pass) detail << " first failure: " << why << ';';
    pass = pass && ok;
  }
};

int failures = 0;

void criterion(int id, const char* title, double limit_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ostringstream time;
  time << secs << " s (limit " << limit_s << " s)";
  o.require(secs < limit_s, "runtime " + time.str());
  std::printf("[%s] criterion %d, %s:%s runtime %s\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.str().c_str(),
              time.str().c_str());
  std::fflush(stdout);
  failures += !o.pass;
}

std::string str(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

// Embeddable members of every family used below, for the isometry and
// external-threshold checks.
std::vector<std::string> embeddable_family() {
  std::vector<std::string> out = {kRoundSphereExpr};
  for (const auto& e : testing::embeddable_perturbations()) out.push_back(e);
  for (const auto& e : testing::concave_profiles(6, 101)) out.push_back(e);
  for (const auto& e : testing::random_profiles(60, 2024))
    if (sup_test(make_profile(parse(e))).embeddable) out.push_back(e);
  return out;
}

}  // namespace

int main() {
  criterion(1, "round-sphere spectrum oracle (k <= 8, j <= 10, rel 1e-6)", 10.0, [](Outcome& o) {
    const Profile round = builtin_profile("round");
    double worst = 0.0;
    for (int k = 0; k <= 8; ++k) {
      const ChannelSpectrum cs = refine(round, k, 10, 1e-8);
      for (int j = 1; j <= 10; ++j) {
        const double exact = testing::round_eigenvalue(k, j);
        worst = std::max(worst, std::abs(cs.eigenvalues[j - 1] / exact - 1.0));
      }
    }
    o.detail << " max rel err " << str(worst) << ';';
    o.require(worst <= 1e-6, "relative error " + str(worst));
  });

  criterion(2, "reference constants of the example profile", 5.0, [](Outcome& o) {
    const Profile p = builtin_profile("paper-example");
    const double inv = 2.0 / integrate_over_profile(p, [&](double x) { return (1.0 - x * x) / p.f(x); });
    const double inv_err = std::abs(inv / (185.0 / 23.0) - 1.0);
    const double rq = rayleigh_quotient(p, 4, parse("sqrt(1-x^2)"));
    const double rq_oracle = testing::example_k4_quotient();
    o.detail.precision(12);
    o.detail << " 2/int((1-x^2)/f) = " << inv << " (rel err " << inv_err << " vs 185/23); k=4 quotient = " << rq
             << " (oracle " << rq_oracle << ", 1477/185 = " << 1477.0 / 185.0 << ");";
    o.require(inv_err <= 1e-9, "185/23 mismatch");
    o.require(rq < 8.0, "quotient not below 8");
    o.require(rq <= 1477.0 / 185.0, "quotient above 1477/185");
    o.require(std::abs(rq / rq_oracle - 1.0) <= 1e-10, "quotient disagrees with the closed-form oracle");
  });

  criterion(3, "example profile end to end (even multiplicities, lambda_0^1 > 3, max|f'| > 2)", 60.0,
            [](Outcome& o) {
              ObstructionOptions opts;
              opts.spectral.cluster_tol = 1e-6;
              const ObstructionReport r = full_report(builtin_profile("paper-example"), opts);
              const auto& em = r.even_multiplicity;
              o.detail << " multiplicities";
              for (int m : em.multiplicities) o.detail << ' ' << m;
              o.detail << ", lambda_0^1 = " << str(r.spectral.lambda01) << ", max|f'| = " << str(r.sup.max_abs_slope)
                       << ", verdict " << to_string(r.verdict) << ';';
              o.require(em.multiplicities.size() == 4 && em.all_even, "first four multiplicities not all even");
              o.require(r.spectral.lambda01 > 3.0, "lambda_0^1 <= 3");
              o.require(r.sup.max_abs_slope > 2.0 && !r.sup.embeddable, "slope test passes");
              o.require(em.agree && em.reduction, "parity and reduction disagree");
              o.require(r.witness.x.has_value(), "no negative-curvature witness");
              o.require(r.verdict == Verdict::not_embeddable, "verdict");
              o.require(r.consistency_failures.empty(), "consistency failures reported");
            });

  criterion(4, "trace identities on the round sphere (J = 50)", 60.0, [](Outcome& o) {
    const Profile round = builtin_profile("round");
    double worst_slack = 0.0;
    for (int k = 0; k <= 4; ++k) {
      const ChannelSpectrum cs = refine(round, k, 50, 1e-8);
      const double target = trace_target(round, k);
      const double sum = trace_partial_sum(cs, 50);
      const double remainder = k == 0 ? 1.0 / 51.0 : 1.0 / (k + 50.0);
      const double gap = target - sum;
      worst_slack = std::max(worst_slack, std::abs(gap - remainder));
      o.require(sum < target, "partial sum reaches the target for k = " + std::to_string(k));
      o.require(gap <= remainder + 1e-6, "partial sum too far from the target for k = " + std::to_string(k));
    }
    o.detail << " max |gap - telescoping remainder| " << str(worst_slack) << ';';
  });

  criterion(5, "property suites over 60 random profiles", 600.0, [](Outcome& o) {
    const auto family = testing::random_profiles(60, 2024);
    int checked = 0, eigenvalues = 0, embeddable = 0;
    double worst_gb = 0.0;
    for (const auto& text : family) {
      const Profile p = make_profile(parse(text));
      const std::string tag = " [" + text + "]";
      o.require(validate(p).pass, "invalid member" + tag);
      const double gb = gauss_bonnet_residual(p);
      worst_gb = std::max(worst_gb, gb);
      o.require(gb <= 1e-6, "Gauss-Bonnet residual " + str(gb) + tag);

      const SpectrumTable t = enumerate_below(p, 25.0);
      o.require(!t.entries.empty(), "empty table" + tag);
      o.require(t.diagnostics.empty(), "table diagnostics" + tag);
      // Lower bounds, strict.
      for (const auto& cs : t.channels)
        for (std::size_t j = 0; j < cs.eigenvalues.size(); ++j) {
          ++eigenvalues;
          o.require(cs.eigenvalues[j] > channel_lower_bound(p, cs.k, static_cast<int>(j) + 1),
                    "lower bound violated at k = " + std::to_string(cs.k) + tag);
        }
      // Upper bound on the first eigenvalue.
      o.require(t.entries.front().lambda <= lambda01_upper_bound(p), "first eigenvalue above (3/2) int f" + tag);
      // Multiplicity parity.
      for (const auto& e : t.entries) {
        o.require(e.multiplicity == multiplicity_of(e.channels), "multiplicity bookkeeping" + tag);
        o.require((e.multiplicity % 2 == 1) == e.has_invariant_channel(), "parity law" + tag);
      }
      // Interlacing lambda_{k+j} <= lambda_k^{j+1}, and lambda_1 <= lambda_0^1.
      const double slack = 1.0 + t.cluster_tol;
      for (const auto& cs : t.channels) {
        for (std::size_t j = 0; j < cs.eigenvalues.size(); ++j) {
          const double lkj = cs.eigenvalues[j];
          if (lkj > t.cutoff) break;
          if (cs.k == 0) {
            if (j == 0) o.require(t.entries.front().lambda <= lkj * slack, "lambda_1 > lambda_0^1" + tag);
            continue;
          }
          const std::size_t m = cs.k + j;
          o.require(t.entries.size() >= m && t.entries[m - 1].lambda <= lkj * slack,
                    "interlacing at k = " + std::to_string(cs.k) + ", j = " + std::to_string(j) + tag);
        }
      }
      // Obstruction implications.
      const ObstructionReport r = full_report(p);
      o.require(r.consistency_failures.empty(), "consistency failure" + tag);
      o.require(!r.spectral.triggered || !r.sup.embeddable, "lambda_0^1 > 3 with an embedding" + tag);
      o.require(!r.even_multiplicity.all_even || !r.sup.embeddable, "even multiplicities with an embedding" + tag);
      o.require(!(r.spectral.triggered || r.even_multiplicity.all_even) || r.witness.x.has_value(),
                "obstruction without negative curvature" + tag);
      o.require(r.even_multiplicity.agree, "parity and reduction disagree" + tag);
      embeddable += r.sup.embeddable;
      ++checked;
    }
    o.detail << " " << checked << " profiles (" << embeddable << " embeddable), " << eigenvalues
             << " eigenvalues checked, worst Gauss-Bonnet residual " << str(worst_gb) << ';';
    o.require(checked >= 50, "fewer than 50 profiles");
  });

  criterion(6, "embedding isometry (round + 5 perturbations, n_theta 128, n_samples 256)", 120.0, [](Outcome& o) {
    std::vector<std::string> cases = {kRoundSphereExpr};
    for (const auto& e : testing::embeddable_perturbations()) cases.push_back(e);
    double worst_res = 0.0, worst_area = 0.0, worst_abs = 0.0;
    for (const auto& text : cases) {
      const Profile p = make_profile(parse(text));
      o.require(sup_test(p).embeddable, "perturbation not embeddable [" + text + "]");
      const EmbeddingMesh mesh = make_mesh(embed_profile_curve(p, 256), 128);
      const double res = induced_metric_residual(mesh, p).sup;
      const double area_abs = std::abs(mesh_area(mesh) - 4.0 * std::numbers::pi);
      const double area_rel = area_abs / (4.0 * std::numbers::pi);
      worst_res = std::max(worst_res, res);
      worst_area = std::max(worst_area, area_rel);
      worst_abs = std::max(worst_abs, area_abs);
      o.require(res <= 1e-5, "metric residual " + str(res) + " [" + text + "]");
      o.require(area_rel <= 1e-3, "area error " + str(area_rel) + " [" + text + "]");
      o.require(euler_characteristic(mesh) == 2, "Euler characteristic [" + text + "]");
    }
    o.detail << " " << cases.size() << " surfaces, worst metric residual " << str(worst_res)
             << ", worst area error " << str(worst_area) << " relative (" << str(worst_abs) << " absolute);";
  });

  criterion(7, "external threshold: lambda_0^1 < xi_1^2/2 = 2.8916 on embeddable members (informational)", 300.0,
            [](Outcome& o) {
              const auto family = embeddable_family();
              double highest = 0.0;
              std::string argmax;
              for (const auto& text : family) {
                const Profile p = make_profile(parse(text));
                const double l01 = first_invariant_eigenvalue(p);
                if (l01 > highest) {
                  highest = l01;
                  argmax = text;
                }
                o.require(l01 < kAbreuFreitasThreshold, "lambda_0^1 = " + str(l01) + " [" + text + "]");
              }
              o.detail << " " << family.size() << " embeddable profiles, largest lambda_0^1 " << str(highest) << " ["
                       << argmax << "];";
            });

  std::printf("%d of 7 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
