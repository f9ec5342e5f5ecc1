#pragma once

// Galerkin solver for the Fourier channels of the Laplacian,
//
//   L_k u = -(f u')' + (k^2 / f) u = lambda u   on (-1, 1).
//
// Channel k is discretized on phi_n = (1 - x^2)^{k/2} p_n(x), where p_n are
// the polynomials orthonormal for the weight (1 - x^2)^k. The prefactor
// carries the (1 -+ x)^{k/2} pole behaviour of finite-energy solutions, so
// the mass matrix is the identity up to quadrature error and the stiffness
// integrands stay smooth. For k = 0 the basis is plain Legendre and the
// constant mode produces the zero eigenvalue, which is dropped by index.

#include "revspec/expr.hpp"
#include "revspec/profile.hpp"

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <vector>

namespace revspec {

struct SolverOptions {
  /// Largest basis size refine() may reach.
  int basis_cap = 1024;
  /// Gauss–Legendre nodes per basis function (doubled for k = 1).
  int quad_factor = 4;
  /// Nodes used by rayleigh_quotient.
  int rayleigh_nodes = 2048;
};

struct GalerkinSystem {
  int k = 0;
  int basis_size = 0;
  Eigen::MatrixXd stiffness;
  Eigen::MatrixXd mass;
  std::string quadrature_rule = "gauss-legendre";
  int quadrature_nodes = 0;
};

struct ChannelSpectrum {
  int k = 0;
  std::vector<double> eigenvalues;
  int basis_size = 0;
  /// |lambda(N/2) - lambda(N)| / lambda(N), per eigenvalue.
  std::vector<double> convergence_estimates;
  std::vector<std::string> diagnostics;

  double worst_estimate() const;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, ChannelSpectrum best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const ChannelSpectrum& best() const noexcept { return best_; }

 private:
  ChannelSpectrum best_;
};

class AdmissibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Values and derivatives of the orthonormal polynomials for the weight
/// (1 - x^2)^alpha at `x`, degrees 0..n-1.
void orthonormal_jacobi(int alpha, double x, int n, double* values, double* derivatives);

GalerkinSystem assemble(const Profile& p, int k, int basis_size, const SolverOptions& opts = {});

ChannelSpectrum solve_channel(const Profile& p, int k, int n_eigs, int basis_size,
                              const SolverOptions& opts = {});

/// Doubles the basis from 32 until every requested eigenvalue's estimate is
/// at most target_rel_err. Throws ConvergenceError past opts.basis_cap.
ChannelSpectrum refine(const Profile& p, int k, int n_eigs, double target_rel_err,
                       const SolverOptions& opts = {});

/// int (f u'^2 + k^2 u^2 / f) / int u^2 for an admissible test function u.
double rayleigh_quotient(const Profile& p, int k, const Expr& u, const SolverOptions& opts = {});

}  // namespace revspec
