#pragma once

#include "revspec/profile.hpp"
#include "revspec/sl_solver.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace revspec {

/// Eigenvalue j (1-based) of channel k >= 0.
struct Attribution {
  int k = 0;
  int j = 0;
  friend bool operator==(const Attribution&, const Attribution&) = default;
};

struct SpectrumEntry {
  double lambda = 0.0;
  int multiplicity = 0;
  std::vector<Attribution> channels;

  bool has_invariant_channel() const;
  /// More than one channel merged into this value.
  bool coincident() const { return channels.size() > 1; }
};

struct SpectrumTable {
  /// Distinct nonzero eigenvalues lambda_1 < lambda_2 < ... with their
  /// multiplicities.
  std::vector<SpectrumEntry> entries;
  double requested_cutoff = 0.0;
  /// Requested cutoff reduced by the worst solver convergence estimate;
  /// every eigenvalue at or below it is listed.
  double cutoff = 0.0;
  double cluster_tol = 1e-6;
  std::vector<ChannelSpectrum> channels;
  std::vector<std::string> diagnostics;
};

struct SpectralOptions {
  double cluster_tol = 1e-6;
  double target_rel_err = 1e-8;
  SolverOptions solver;
  /// Channel budget cap; larger cutoffs are refused.
  int max_channels = 256;
};

class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BoundsReport {
  double lambda01_upper = 0.0;
  double trace0_integral = 0.0;
  /// (k, m) -> lower bound on the m-th eigenvalue of channel k.
  std::map<std::pair<int, int>, double> channel_lower_bounds;
};

/// Multiplicity of a set of channel attributions: one for the invariant
/// channel, two for each k >= 1.
int multiplicity_of(const std::vector<Attribution>& channels);

/// Merges channel spectra (each sorted ascending) into distinct values.
SpectrumTable merge_channels(std::vector<ChannelSpectrum> channels, double upto, double cluster_tol);

/// Every eigenvalue of the Laplacian in (0, cutoff]. Channel and depth
/// budgets come from the trace lower bounds, which certify completeness.
SpectrumTable enumerate_below(const Profile& p, double cutoff, const SpectralOptions& opts = {});

/// (1/2) int (1 - x^2)/f dx, the sum of the reciprocal invariant eigenvalues.
double trace0_integral(const Profile& p);

/// Sum of 1/lambda_k^j over the first J eigenvalues.
double trace_partial_sum(const ChannelSpectrum& cs, int J);

/// Exact value of the full reciprocal sum: trace0_integral for k = 0, 1/|k|
/// otherwise.
double trace_target(const Profile& p, int k);

/// (3/2) int f dx, an upper bound on the first invariant eigenvalue.
double lambda01_upper_bound(const Profile& p);

/// Strict lower bound on the m-th eigenvalue of channel k.
double channel_lower_bound(const Profile& p, int k, int m);

BoundsReport bounds_report(const Profile& p, int k_max, int m_max);

}  // namespace revspec
