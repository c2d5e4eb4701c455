#include "hsb/observables.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace hsb {

namespace {

const Complex kI(0.0, 1.0);

void check_state_index(const EigenSystem& es, int n, const char* what) {
  if (n < 0 || n >= es.dim())
    throw InvalidArgument(std::string(what) + ": state index out of range");
}

void check_nondegenerate(const EigenSystem& es, int n, double tol_rel, const char* what) {
  const double tol = tol_rel * es.eigenvalues.cwiseAbs().maxCoeff();
  const std::vector<int> block = cluster_eigenvalues(es.eigenvalues, tol);
  for (Eigen::Index m = 0; m < es.dim(); ++m)
    if (m != n && block[m] == block[n])
      throw DegenerateLevel(std::string(what) + ": level is degenerate at this point");
}

ParameterPoint with_defaults(const ParameterPoint& base, int n_params) {
  ParameterPoint p = base;
  if (p.q.empty()) p.q.assign(n_params, 0.0);
  return p;
}

/// Dual-state variance of K in eigenstate n: <<K^2>> - <<K>>^2.
Complex dual_variance(const EigenSystem& es, const Matrix& k, int n) {
  const Vector psi = es.right.col(n);
  const Vector chi = es.left.col(n);
  const Complex first = chi.dot(k * (k * psi));
  const Complex second = chi.dot(k * psi);
  return first - second * second;
}

}  // namespace

double berry_connection(const HamiltonianFamily& family, const ParameterPoint& p,
                        int direction, int n, const std::optional<GeneratorPair>& pair,
                        const SolveOptions& opts) {
  const Matrix h = family.evaluate(p);
  if (!is_hermitian(h))
    throw InvalidArgument(
        "berry_connection: family is non-Hermitian at this point; use berry_connection_dual");
  const EigenSystem es = biorthogonal_eigensystem(h, opts);
  check_state_index(es, n, "berry_connection");
  const GeneratorPair kp =
      pair ? *pair : solve_adiabatic_generator(family, p, direction, opts);
  const Matrix k = assemble_generator(kp, 0.0);
  Vector psi = es.right.col(n);
  psi /= psi.norm();
  const Complex a = psi.dot(k * psi);
  return a.real();
}

Complex berry_connection_dual(const HamiltonianFamily& family, const ParameterPoint& p,
                              int direction, int n, const std::optional<GeneratorPair>& pair,
                              const SolveOptions& opts) {
  const EigenSystem es = biorthogonal_eigensystem(family.evaluate(p), opts);
  check_state_index(es, n, "berry_connection_dual");
  const GeneratorPair kp =
      pair ? *pair : solve_adiabatic_generator(family, p, direction, opts);
  const Matrix k = assemble_generator(kp, 0.0);
  return es.left.col(n).dot(k * es.right.col(n));
}

Complex berry_curvature(const HamiltonianFamily& family, const ParameterPoint& p, int i,
                        int j, int n, double t, const std::optional<GeneratorSet>& set,
                        const SolveOptions& opts) {
  if (family.n_params < 2)
    throw InvalidArgument("berry_curvature: needs at least two parameter directions");
  const EigenSystem es = biorthogonal_eigensystem(family.evaluate(p), opts);
  check_state_index(es, n, "berry_curvature");
  check_nondegenerate(es, n, opts.degeneracy_tol_rel, "berry_curvature");

  const GeneratorSet gs = set ? *set : solve_all_generators(family, p, opts);
  const Matrix ki = assemble_generator(gs.pairs.at(i), t);
  const Matrix kj = assemble_generator(gs.pairs.at(j), t);
  return kI * es.left.col(n).dot(commutator(ki, kj) * es.right.col(n));
}

double chern_number(const HamiltonianFamily& family, int n, int n_theta, int n_phi,
                    const SolveOptions& opts) {
  if (n_theta < 1 || n_phi < 1)
    throw InvalidArgument("chern_number: grid counts must be >= 1");
  const double pi = std::numbers::pi;
  const double dth = pi / n_theta;
  const double dph = 2.0 * pi / n_phi;
  double sum = 0.0;
  for (int a = 0; a < n_theta; ++a) {
    const double theta = (a + 0.5) * dth;
    for (int b = 0; b < n_phi; ++b) {
      const double phi = (b + 0.5) * dph;
      const Complex omega =
          berry_curvature(family, ParameterPoint(0.0, {theta, phi}), 0, 1, n, 0.0,
                          std::nullopt, opts);
      sum += omega.real() * dth * dph;
    }
  }
  return sum / (2.0 * pi);
}

double fidelity_hermitian(const StateVector& a, const StateVector& b) {
  if (a.amplitudes.size() != b.amplitudes.size())
    throw DimensionMismatch("fidelity_hermitian: state dimension mismatch");
  return std::norm(a.amplitudes.dot(b.amplitudes));
}

Complex fidelity_generalized(const HamiltonianFamily& family, const ParameterPoint& p,
                             int direction, double eps, int n, const SolveOptions& opts) {
  const ParameterPoint p2 = p.shifted(direction, eps);
  const EigenSystem es1 = biorthogonal_eigensystem(family.evaluate(p), opts);
  const EigenSystem es2 = biorthogonal_eigensystem(family.evaluate(p2), opts);
  check_state_index(es1, n, "fidelity_generalized");

  const Matrix g1 = stationary_metric(es1, {}, p).value;
  const Matrix g2 = stationary_metric(es2, {}, p2).value;

  // Metric normalization <<psi|psi>> = 1; the remaining phase freedom
  // cancels between the two factors.
  Vector psi1 = es1.right.col(n);
  Vector psi2 = es2.right.col(n);
  psi1 /= std::sqrt(std::abs(psi1.dot(g1 * psi1)));
  psi2 /= std::sqrt(std::abs(psi2.dot(g2 * psi2)));

  const Complex forward = psi1.dot(g1 * psi2);
  const Complex backward = psi2.dot(g2 * psi1);
  return forward * backward;
}

SusceptibilityRecord fidelity_susceptibility(const HamiltonianFamily& family,
                                             const ParameterPoint& p, int direction, int n,
                                             double t,
                                             const std::optional<GeneratorPair>& pair,
                                             const SolveOptions& opts) {
  const EigenSystem es = biorthogonal_eigensystem(family.evaluate(p), opts);
  check_state_index(es, n, "fidelity_susceptibility");
  const GeneratorPair kp =
      pair ? *pair : solve_adiabatic_generator(family, p, direction, opts);

  SusceptibilityRecord record;
  record.state_index = n;
  record.q = p.q.at(direction);
  record.gap_min = kp.min_gap;
  record.chi = dual_variance(es, assemble_generator(kp, t), n);
  return record;
}

Complex susceptibility_fd_oracle(const HamiltonianFamily& family, const ParameterPoint& p,
                                 int direction, int n, double eps, const SolveOptions& opts) {
  if (!(eps > 0.0)) throw InvalidArgument("susceptibility_fd_oracle: eps must be positive");
  const Complex f = fidelity_generalized(family, p, direction, eps, n, opts);
  return (1.0 - f) / (eps * eps);
}

EpScanResult ep_scan(const HamiltonianFamily& family, int direction, double q_min,
                     double q_max, int count, const EpScanThresholds& thresholds,
                     const ParameterPoint& base, const SolveOptions& opts) {
  EpScanResult result;
  if (count <= 0) return result;
  const ParameterPoint origin = with_defaults(base, family.n_params);
  const double step = count > 1 ? (q_max - q_min) / (count - 1) : 0.0;

  // Scan with a permissive solver so near-EP points report their condition
  // number instead of throwing; flag against the caller's thresholds.
  SolveOptions permissive = opts;
  permissive.ep_condition_threshold = std::numeric_limits<double>::infinity();

  for (int k = 0; k < count; ++k) {
    EpScanCell cell;
    cell.q = q_min + k * step;
    ParameterPoint p = origin;
    p.q.at(direction) = cell.q;
    try {
      const EigenSystem es = biorthogonal_eigensystem(family.evaluate(p), permissive);
      cell.condition_number = es.condition_number;
      const GeneratorPair pair = solve_adiabatic_generator(family, p, direction, permissive);
      cell.gap_min = pair.min_gap;
      double chi_max = 0.0;
      Complex chi_at_max;
      for (int n = 0; n < family.dim; ++n) {
        const Complex chi = dual_variance(es, pair.k0, n);
        if (std::abs(chi) >= chi_max) {
          chi_max = std::abs(chi);
          chi_at_max = chi;
        }
      }
      cell.chi = chi_at_max;
      if (cell.condition_number > thresholds.condition_number) {
        cell.flagged = true;
        cell.reason = "cond";
      } else if (chi_max > thresholds.chi_magnitude) {
        cell.flagged = true;
        cell.reason = "chi";
      }
    } catch (const NonDiagonalizable& e) {
      cell.condition_number = e.condition_number;
      cell.chi = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
      cell.gap_min = 0.0;
      cell.flagged = true;
      cell.reason = "nondiagonalizable";
    }
    result.cells.push_back(cell);
  }

  const double half = 0.5 * (count > 1 ? std::abs(step) : 1.0);
  int run_start = -1;
  for (int k = 0; k <= count; ++k) {
    const bool flagged = k < count && result.cells[k].flagged;
    if (flagged && run_start < 0) run_start = k;
    if (!flagged && run_start >= 0) {
      result.flagged_intervals.emplace_back(result.cells[run_start].q - half,
                                            result.cells[k - 1].q + half);
      run_start = -1;
    }
  }
  return result;
}

}  // namespace hsb
