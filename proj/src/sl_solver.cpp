#include "revspec/sl_solver.hpp"

#include "revspec/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace revspec {

namespace {

int quadrature_nodes(int k, int basis_size, const SolverOptions& opts) {
  const int factor = k == 1 ? 2 * opts.quad_factor : opts.quad_factor;
  return factor * basis_size + k;
}

// All eigenvalues of the pencil, zero mode removed for k = 0.
std::vector<double> pencil_eigenvalues(const GalerkinSystem& sys) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      sys.stiffness, sys.mass, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("generalized eigensolve failed for channel " + std::to_string(sys.k));
  const Eigen::VectorXd& ev = solver.eigenvalues();
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end());
  if (sys.k == 0 && !out.empty()) out.erase(out.begin());
  return out;
}

double half_trace_inverse_h(const Profile& p, int nodes) {
  const GaussRule& rule = gauss_legendre(nodes);
  double sum = 0.0;
  for (int q = 0; q < nodes; ++q) sum += rule.weights[q] / p.h(rule.nodes[q]);
  return 0.5 * sum;
}

ChannelSpectrum package(const Profile& p, int k, int n_eigs, int basis_size,
                        const std::vector<double>& fine, const std::vector<double>& coarse,
                        const SolverOptions& opts) {
  ChannelSpectrum cs;
  cs.k = k;
  cs.basis_size = basis_size;
  const int count = std::min<int>(n_eigs, static_cast<int>(fine.size()));
  cs.eigenvalues.assign(fine.begin(), fine.begin() + count);
  for (int j = 0; j < count; ++j) {
    const double lam = fine[j];
    double est = std::numeric_limits<double>::infinity();
    if (j < static_cast<int>(coarse.size())) est = std::abs(coarse[j] - lam) / std::abs(lam);
    cs.convergence_estimates.push_back(est);
  }

  double lower_bound_scale = k;
  if (k == 0) lower_bound_scale = 1.0 / half_trace_inverse_h(p, quadrature_nodes(0, basis_size, opts));
  for (int j = 0; j < count; ++j) {
    const double lam = cs.eigenvalues[j];
    std::ostringstream msg;
    if (!(lam > 0.0)) {
      msg << "non-positive eigenvalue " << lam << " at index " << j + 1;
      cs.diagnostics.push_back(msg.str());
      continue;
    }
    if (j > 0 && lam - cs.eigenvalues[j - 1] < 1e-9 * lam) {
      msg << "near-degenerate pair at indices " << j << "," << j + 1
          << " (channel spectra are simple; discretization suspect)";
      cs.diagnostics.push_back(msg.str());
    }
    if (!(lam > (j + 1) * lower_bound_scale)) {
      std::ostringstream lm;
      lm << "eigenvalue " << lam << " at index " << j + 1 << " violates the trace lower bound "
         << (j + 1) * lower_bound_scale;
      cs.diagnostics.push_back(lm.str());
    }
  }
  return cs;
}

void check_h(double hv, double x) {
  if (!(hv > 0.0) || !std::isfinite(hv)) {
    std::ostringstream msg;
    msg << "non-integrable weak form: f/(1-x^2) = " << hv << " at x = " << x
        << " (profile is not a valid metric)";
    throw QuadratureError(msg.str());
  }
}

}  // namespace

double ChannelSpectrum::worst_estimate() const {
  double worst = 0.0;
  for (double e : convergence_estimates) worst = std::max(worst, e);
  return worst;
}

void orthonormal_jacobi(int alpha, double x, int n, double* values, double* derivatives) {
  if (n <= 0) return;
  const double a = alpha;
  // Mass of the weight (1 - x^2)^alpha on [-1, 1].
  const double log_mu0 = 0.5 * std::log(std::numbers::pi) + std::lgamma(a + 1.0) - std::lgamma(a + 1.5);
  auto coeff = [a](int m) {
    const double mm = m;
    return std::sqrt(mm * (mm + 2.0 * a) / ((2.0 * mm + 2.0 * a - 1.0) * (2.0 * mm + 2.0 * a + 1.0)));
  };
  values[0] = std::exp(-0.5 * log_mu0);
  derivatives[0] = 0.0;
  if (n == 1) return;
  double c1 = coeff(1);
  values[1] = x * values[0] / c1;
  derivatives[1] = values[0] / c1;
  for (int m = 1; m + 1 < n; ++m) {
    const double next = coeff(m + 1), prev = coeff(m);
    values[m + 1] = (x * values[m] - prev * values[m - 1]) / next;
    derivatives[m + 1] = (values[m] + x * derivatives[m] - prev * derivatives[m - 1]) / next;
  }
}

GalerkinSystem assemble(const Profile& p, int k, int basis_size, const SolverOptions& opts) {
  k = std::abs(k);
  if (basis_size < 8) throw std::invalid_argument("basis size must be at least 8");
  const int nodes = quadrature_nodes(k, basis_size, opts);
  const GaussRule& rule = gauss_legendre(nodes);
  const int n = basis_size;

  Eigen::MatrixXd values(nodes, n), slopes(nodes, n);
  Eigen::VectorXd mass_w(nodes), stiff_w(nodes), pot_w(nodes);
  std::vector<double> v(n), d(n);
  for (int q = 0; q < nodes; ++q) {
    const double x = rule.nodes[q];
    const double w = rule.weights[q];
    const double s = (1.0 - x) * (1.0 + x);
    orthonormal_jacobi(k, x, n, v.data(), d.data());
    if (k == 0) {
      const double fv = p.f(x);
      check_h(fv / s, x);
      for (int m = 0; m < n; ++m) {
        values(q, m) = v[m];
        slopes(q, m) = d[m];
      }
      mass_w[q] = w;
      stiff_w[q] = w * fv;
      pot_w[q] = 0.0;
    } else {
      // phi' = (1-x^2)^{k/2-1} (-k x p + (1-x^2) p'); both stiffness terms
      // then share the smooth factor (1-x^2)^{k-1}.
      const double hv = p.h(x);
      check_h(hv, x);
      const double sk1 = std::pow(s, k - 1);
      for (int m = 0; m < n; ++m) {
        values(q, m) = v[m];
        slopes(q, m) = -k * x * v[m] + s * d[m];
      }
      mass_w[q] = w * sk1 * s;
      stiff_w[q] = w * sk1 * hv;
      pot_w[q] = w * sk1 * static_cast<double>(k) * k / hv;
    }
  }

  GalerkinSystem sys;
  sys.k = k;
  sys.basis_size = n;
  sys.quadrature_nodes = nodes;
  sys.mass = values.transpose() * mass_w.asDiagonal() * values;
  sys.stiffness = slopes.transpose() * stiff_w.asDiagonal() * slopes;
  if (k > 0) sys.stiffness += values.transpose() * pot_w.asDiagonal() * values;
  sys.mass = 0.5 * (sys.mass + sys.mass.transpose()).eval();
  sys.stiffness = 0.5 * (sys.stiffness + sys.stiffness.transpose()).eval();
  return sys;
}

ChannelSpectrum solve_channel(const Profile& p, int k, int n_eigs, int basis_size, const SolverOptions& opts) {
  k = std::abs(k);
  if (n_eigs < 1 || 2 * n_eigs > basis_size)
    throw std::invalid_argument("n_eigs must be between 1 and basis_size/2");
  const std::vector<double> fine = pencil_eigenvalues(assemble(p, k, basis_size, opts));
  const int half = std::max(basis_size / 2, n_eigs + (k == 0 ? 1 : 0));
  std::vector<double> coarse;
  if (half >= 8 && half < basis_size) coarse = pencil_eigenvalues(assemble(p, k, half, opts));
  return package(p, k, n_eigs, basis_size, fine, coarse, opts);
}

ChannelSpectrum refine(const Profile& p, int k, int n_eigs, double target_rel_err, const SolverOptions& opts) {
  k = std::abs(k);
  if (target_rel_err < 1e-12) throw std::invalid_argument("target relative error must be at least 1e-12");
  if (n_eigs < 1) throw std::invalid_argument("n_eigs must be positive");
  int n = 32;
  while (n < 2 * n_eigs + (k == 0 ? 2 : 0)) n *= 2;
  if (n > opts.basis_cap) {
    throw ConvergenceError("channel " + std::to_string(k) + ": " + std::to_string(n_eigs) +
                               " eigenvalues need a basis above the cap " + std::to_string(opts.basis_cap),
                           ChannelSpectrum{k, {}, 0, {}, {}});
  }
  std::vector<double> previous = pencil_eigenvalues(assemble(p, k, n / 2, opts));
  ChannelSpectrum best;
  for (;;) {
    std::vector<double> current = pencil_eigenvalues(assemble(p, k, n, opts));
    best = package(p, k, n_eigs, n, current, previous, opts);
    if (static_cast<int>(best.eigenvalues.size()) == n_eigs && best.worst_estimate() <= target_rel_err)
      return best;
    if (2 * n > opts.basis_cap) break;
    previous = std::move(current);
    n *= 2;
  }
  std::ostringstream msg;
  msg << "channel " << k << ": no convergence to " << target_rel_err << " at basis cap "
      << opts.basis_cap << " (worst estimate " << best.worst_estimate() << ")";
  throw ConvergenceError(msg.str(), best);
}

double rayleigh_quotient(const Profile& p, int k, const Expr& u, const SolverOptions& opts) {
  k = std::abs(k);
  const Expr du = u.derivative();
  const GaussRule& rule = gauss_legendre(opts.rayleigh_nodes);
  double num = 0.0, den = 0.0, mean = 0.0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double x = rule.nodes[q], w = rule.weights[q];
    const double uv = u.eval(x), dv = du.eval(x);
    const double fv = p.f(x);
    if (!(fv > 0.0)) throw QuadratureError("profile is not positive at a quadrature node");
    num += w * (fv * dv * dv + (k == 0 ? 0.0 : k * k * uv * uv / fv));
    den += w * uv * uv;
    mean += w * uv;
  }
  if (!(den > 0.0)) throw AdmissibilityError("test function vanishes identically");
  if (k != 0) {
    for (double end : {-1.0, 1.0}) {
      double value;
      try {
        value = u.eval(end);
      } catch (const EvalError& e) {
        throw AdmissibilityError(std::string("test function cannot be evaluated at the pole: ") + e.what());
      }
      if (std::abs(value) > 1e-8)
        throw AdmissibilityError("test function must vanish at x = " + std::to_string(end) +
                                 " for channel " + std::to_string(k));
    }
  } else if (std::abs(mean) > 1e-8 * std::max(1.0, std::sqrt(2.0 * den))) {
    throw AdmissibilityError("test function for channel 0 must be orthogonal to constants");
  }
  return num / den;
}

}  // namespace revspec
