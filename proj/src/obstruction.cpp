#include "revspec/obstruction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace revspec {

namespace {

// Golden-section maximization of g on [lo, hi].
std::pair<double, double> golden_max(const RealFn& g, double lo, double hi) {
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - ratio * (hi - lo), d = lo + ratio * (hi - lo);
  double gc = g(c), gd = g(d);
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    if (gc >= gd) {
      hi = d;
      d = c;
      gd = gc;
      c = hi - ratio * (hi - lo);
      gc = g(c);
    } else {
      lo = c;
      c = d;
      gc = gd;
      d = lo + ratio * (hi - lo);
      gd = g(d);
    }
  }
  return gc >= gd ? std::pair{c, gc} : std::pair{d, gd};
}

// Grid maximum of g on [-1, 1], polished on each bracketed local maximum.
std::pair<double, double> global_max(const RealFn& g, int grid) {
  std::vector<double> xs(grid + 1), gs(grid + 1);
  for (int i = 0; i <= grid; ++i) {
    xs[i] = -1.0 + 2.0 * i / grid;
    gs[i] = g(xs[i]);
  }
  double best_x = xs[0], best = gs[0];
  for (int i = 0; i <= grid; ++i) {
    if (gs[i] > best) {
      best = gs[i];
      best_x = xs[i];
    }
  }
  for (int i = 1; i < grid; ++i) {
    if (gs[i] >= gs[i - 1] && gs[i] >= gs[i + 1]) {
      const auto [x, v] = golden_max(g, xs[i - 1], xs[i + 1]);
      if (v > best) {
        best = v;
        best_x = x;
      }
    }
  }
  return {best_x, best};
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::embeddable: return "embeddable";
    case Verdict::not_embeddable: return "not_embeddable";
    case Verdict::undetermined_by_spectral_tests: return "undetermined_by_spectral_tests";
  }
  return "?";
}

SupTest sup_test(const Profile& p, double tol_sup) {
  const auto [x, v] = global_max([&p](double t) { return std::abs(p.df(t)); }, kSupGridSize);
  SupTest t;
  t.max_abs_slope = v;
  t.argmax = x;
  t.tolerance = tol_sup;
  t.embeddable = v <= 2.0 + tol_sup;
  return t;
}

double first_invariant_eigenvalue(const Profile& p, const SpectralOptions& opts) {
  return refine(p, 0, 1, opts.target_rel_err, opts.solver).eigenvalues.front();
}

SpectralTest spectral_test_from(double lambda01, double threshold) {
  return SpectralTest{lambda01, threshold, lambda01 > threshold};
}

SpectralTest spectral_test(const Profile& p, double threshold, const SpectralOptions& opts) {
  return spectral_test_from(first_invariant_eigenvalue(p, opts), threshold);
}

EvenMultiplicityTest even_multiplicity_test_from(const Profile& p, double lambda01, int m_max,
                                                 const ObstructionOptions& opts) {
  EvenMultiplicityTest t;
  t.m_max = m_max;
  t.lambda01 = lambda01;
  const SpectrumTable table = enumerate_below(p, lambda01 * (1.0 + opts.margin), opts.spectral);
  const std::size_t shown = std::min<std::size_t>(m_max, table.entries.size());
  for (std::size_t m = 0; m < shown; ++m) {
    t.eigenvalues.push_back(table.entries[m].lambda);
    t.multiplicities.push_back(table.entries[m].multiplicity);
  }
  // Entries strictly below lambda_0^1 (outside its cluster) carry no
  // invariant channel.
  int below = 0;
  for (const auto& e : table.entries)
    if (e.lambda < lambda01 * (1.0 - table.cluster_tol)) ++below;

  if (static_cast<int>(table.entries.size()) < m_max) {
    t.all_even = false;
    std::ostringstream msg;
    msg << "only " << table.entries.size() << " distinct eigenvalues up to lambda_0^1 (certified cutoff "
        << table.cutoff << ")";
    t.explanation = msg.str();
  } else {
    t.all_even = std::all_of(t.multiplicities.begin(), t.multiplicities.end(), [](int m) { return m % 2 == 0; });
    std::ostringstream msg;
    msg << below << " distinct eigenvalues lie below lambda_0^1 = " << lambda01;
    t.explanation = msg.str();
  }
  t.reduction = below >= m_max;
  t.agree = t.all_even == t.reduction;
  return t;
}

EvenMultiplicityTest even_multiplicity_test(const Profile& p, int m_max, const ObstructionOptions& opts) {
  return even_multiplicity_test_from(p, first_invariant_eigenvalue(p, opts.spectral), m_max, opts);
}

CurvatureWitness negative_curvature_witness(const Profile& p) {
  // Maximize -K, i.e. find the most negative curvature.
  const auto [x, v] = global_max([&p](double t) { return -curvature(p, t); }, kWitnessGridSize);
  CurvatureWitness w;
  w.curvature = -v;
  if (w.curvature < 0.0) w.x = x;
  return w;
}

ObstructionReport full_report(const Profile& p, const ObstructionOptions& opts) {
  ObstructionReport r;
  r.profile_name = p.name();
  r.sup = sup_test(p, opts.tol_sup);

  const ChannelSpectrum invariant = refine(p, 0, 1, opts.spectral.target_rel_err, opts.spectral.solver);
  const double lambda01 = invariant.eigenvalues.front();
  r.spectral = spectral_test_from(lambda01, kInvariantEigenvalueThreshold);
  r.abreu_freitas = spectral_test_from(lambda01, kAbreuFreitasThreshold);
  r.even_multiplicity = even_multiplicity_test_from(p, lambda01, opts.m_max, opts);
  r.witness = negative_curvature_witness(p);

  r.trace_flag.trace0 = trace0_integral(p);
  r.trace_flag.partial_sum = trace_partial_sum(invariant, 1);
  r.trace_flag.terms = 1;
  r.trace_flag.threshold = std::numbers::pi * std::numbers::pi / 16.0;
  r.trace_flag.flagged = r.trace_flag.trace0 <= r.trace_flag.threshold;

  const bool spectral_obstruction = r.spectral.triggered || r.even_multiplicity.all_even;
  if (r.sup.embeddable) r.verdict = Verdict::embeddable;
  else if (spectral_obstruction) r.verdict = Verdict::not_embeddable;
  else r.verdict = Verdict::undetermined_by_spectral_tests;

  if (r.spectral.triggered && r.sup.embeddable)
    r.consistency_failures.push_back("lambda_0^1 > 3 but the slope test reports an embedding");
  if (r.even_multiplicity.all_even && r.sup.embeddable)
    r.consistency_failures.push_back("first multiplicities all even but the slope test reports an embedding");
  if (spectral_obstruction && !r.witness.x)
    r.consistency_failures.push_back("spectral obstruction present but no negative-curvature point found");
  if (!r.even_multiplicity.agree)
    r.consistency_failures.push_back("direct parity and the lambda_4 < lambda_0^1 reduction disagree");

  if (r.sup.embeddable && r.abreu_freitas.triggered)
    r.notes.push_back("external (Abreu-Freitas): embeddable profile has lambda_0^1 above xi_1^2/2; investigate");
  if (r.trace_flag.flagged)
    r.notes.push_back("reciprocal invariant trace is at most pi^2/16");
  if (!r.witness.x)
    r.notes.push_back("no negative curvature found on the sampling grid (not a proof of K >= 0)");
  return r;
}

}  // namespace revspec
