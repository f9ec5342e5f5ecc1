#pragma once

// Embeddability verdicts for rotationally symmetric spheres.
//
// The slope test |f'| <= 2 decides C^1 isometric embeddability into R^3.
// The spectral tests are one-sided obstructions: a first invariant
// eigenvalue above 3, or even multiplicities for the first four distinct
// eigenvalues, rule an embedding out. The Abreu–Freitas threshold
// xi_1^2 / 2 (xi_1 the first zero of J_0) is an external sharper bound and
// is reported for information only.

#include "revspec/profile.hpp"
#include "revspec/spectral.hpp"

#include <optional>
#include <string>
#include <vector>

namespace revspec {

inline constexpr double kBesselJ0FirstZero = 2.4048255576957727686;
inline constexpr double kAbreuFreitasThreshold = 0.5 * kBesselJ0FirstZero * kBesselJ0FirstZero;
inline constexpr double kInvariantEigenvalueThreshold = 3.0;
inline constexpr int kSupGridSize = 4096;
inline constexpr int kWitnessGridSize = 4096;

struct SupTest {
  double max_abs_slope = 0.0;
  double argmax = 0.0;
  double tolerance = 1e-9;
  bool embeddable = false;
};

struct SpectralTest {
  double lambda01 = 0.0;
  double threshold = kInvariantEigenvalueThreshold;
  bool triggered = false;
};

struct EvenMultiplicityTest {
  int m_max = 4;
  double lambda01 = 0.0;
  std::vector<double> eigenvalues;
  std::vector<int> multiplicities;
  /// Direct answer: the first m_max distinct eigenvalues all have even
  /// multiplicity.
  bool all_even = false;
  /// Reduction: lambda_{m_max} < lambda_0^1.
  bool reduction = false;
  bool agree = false;
  std::string explanation;
};

struct CurvatureWitness {
  std::optional<double> x;
  double curvature = 0.0;  // K at x, or the grid minimum when no witness
  int grid_size = kWitnessGridSize;
};

enum class Verdict { embeddable, not_embeddable, undetermined_by_spectral_tests };

const char* to_string(Verdict v);

struct TraceFlag {
  double trace0 = 0.0;
  double partial_sum = 0.0;
  int terms = 0;
  double threshold = 0.0;  // pi^2 / 16
  bool flagged = false;
};

struct ObstructionReport {
  std::string profile_name;
  SupTest sup;
  SpectralTest spectral;
  SpectralTest abreu_freitas;
  EvenMultiplicityTest even_multiplicity;
  CurvatureWitness witness;
  TraceFlag trace_flag;
  Verdict verdict = Verdict::undetermined_by_spectral_tests;
  /// Violated implications between the tests. Always empty unless the
  /// numerics are broken.
  std::vector<std::string> consistency_failures;
  /// Informational remarks (external-threshold misses, grazing contact).
  std::vector<std::string> notes;
};

struct ObstructionOptions {
  double tol_sup = 1e-9;
  int m_max = 4;
  /// Relative margin above lambda_0^1 for the enumeration cutoff.
  double margin = 1e-4;
  SpectralOptions spectral;
};

SupTest sup_test(const Profile& p, double tol_sup = 1e-9);

/// First invariant eigenvalue, converged to opts.target_rel_err.
double first_invariant_eigenvalue(const Profile& p, const SpectralOptions& opts = {});

SpectralTest spectral_test(const Profile& p, double threshold = kInvariantEigenvalueThreshold,
                           const SpectralOptions& opts = {});
SpectralTest spectral_test_from(double lambda01, double threshold);

EvenMultiplicityTest even_multiplicity_test(const Profile& p, int m_max = 4, const ObstructionOptions& opts = {});
EvenMultiplicityTest even_multiplicity_test_from(const Profile& p, double lambda01, int m_max,
                                                 const ObstructionOptions& opts);

/// A point with K < 0 found by sampling and refinement. An empty result is
/// not a proof that K >= 0.
CurvatureWitness negative_curvature_witness(const Profile& p);

ObstructionReport full_report(const Profile& p, const ObstructionOptions& opts = {});

}  // namespace revspec
