#pragma once

// revspec command line: analyze | spectrum | mesh | sweep | verify.
//
// Exit codes
//   0   success (analyze: embeddable)
//   1   I/O, solver or consistency failure
//   2   profile not embeddable (analyze, mesh)
//   3   profile failed to load or validate
//   4   verify: a reproduced constant is off
//   64  usage error

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace revspec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitNotEmbeddable = 2;
inline constexpr int kExitInvalidProfile = 3;
inline constexpr int kExitVerifyFailed = 4;
inline constexpr int kExitUsage = 64;

struct RunConfig {
  std::string command;

  std::optional<std::string> builtin;
  std::optional<std::string> expr;
  std::optional<std::string> profile_file;

  std::optional<double> tol_bc;
  int basis_cap = 1024;
  double cluster_tol = 1e-6;
  double target_rel_err = 1e-8;
  double lambda = 0.0;
  int n_theta = 128;
  int n_samples = 256;
  /// 0 selects adaptive quadrature in verify.
  int quad_nodes = 0;

  std::string out;
  std::string format = "json";
  std::string curve_csv;

  std::vector<double> eps = {0.0, 1.0, 3.0, 9.0};
  std::vector<int> n = {18};
};

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Expression of the sweep family member c (1 - x^2) / (1 + eps x^(2n)),
/// with c = 1 + eps fixed by f'(-1) = 2.
std::string sweep_member(double eps, int n);

}  // namespace revspec::cli
