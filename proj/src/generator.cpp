#include "hsb/generator.hpp"

#include <cmath>
#include <limits>

#include "hsb/integrate.hpp"

namespace hsb {

namespace {
const Complex kI(0.0, 1.0);
}

GeneratorPair solve_adiabatic_generator(const HamiltonianFamily& family,
                                        const ParameterPoint& p, int direction,
                                        const SolveOptions& opts) {
  if (!family.time_independent)
    throw InvalidArgument(
        "solve_adiabatic_generator: adiabatic gauge requires a time-independent family; "
        "use integrate_generator_ode");

  const Matrix h = family.evaluate(p);
  const Matrix dh = family.partial(p, direction);
  const EigenSystem es = biorthogonal_eigensystem(h, opts);
  const Eigen::Index n = es.dim();

  const double cluster_tol = opts.degeneracy_tol_rel * h.norm();
  const std::vector<int> block = cluster_eigenvalues(es.eigenvalues, cluster_tol);

  const Matrix d = es.left.adjoint() * dh * es.right;  // D_mn = <chi_m| dH |psi_n>

  Matrix k1_hat = Matrix::Zero(n, n);
  Matrix k0_hat = Matrix::Zero(n, n);
  double min_gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index c = 0; c < n; ++c) {
      if (block[m] == block[c]) {
        k1_hat(m, c) = d(m, c);
      } else {
        const Complex gap = es.eigenvalues(m) - es.eigenvalues(c);
        k0_hat(m, c) = -kI * d(m, c) / gap;
        min_gap = std::min(min_gap, std::abs(gap));
      }
    }
  }

  GeneratorPair pair;
  pair.k1 = es.right * k1_hat * es.left.adjoint();
  pair.k0 = es.right * k0_hat * es.left.adjoint();
  pair.direction = direction;
  pair.at = p;
  pair.min_gap = min_gap;
  return pair;
}

GeneratorSet solve_all_generators(const HamiltonianFamily& family, const ParameterPoint& p,
                                  const SolveOptions& opts) {
  GeneratorSet set;
  set.at = p;
  for (int i = 0; i < family.n_params; ++i)
    set.pairs.push_back(solve_adiabatic_generator(family, p, i, opts));
  return set;
}

Matrix assemble_generator(const GeneratorPair& pair, double t) {
  return t * pair.k1 + pair.k0;
}

GeneratorResiduals generator_residuals(const HamiltonianFamily& family,
                                       const ParameterPoint& p, const GeneratorPair& pair,
                                       const std::vector<double>& t_samples) {
  if (!family.time_independent)
    throw InvalidArgument("generator_residuals: family must be time-independent");
  const Matrix h = family.evaluate(p);
  const Matrix dh = family.partial(p, pair.direction);

  GeneratorResiduals res;
  res.t_samples = t_samples;
  const double gauge = commutator(pair.k1, h).norm();
  for (double t : t_samples) {
    const Matrix k = assemble_generator(pair, t);
    res.k_equation.push_back((pair.k1 - kI * commutator(k, h) - dh).norm());
    res.gauge_condition.push_back(gauge);
  }
  return res;
}

Matrix integrate_generator_ode(const HamiltonianFamily& family, const ParameterPoint& p,
                               int direction, const Matrix& k_initial, double t_final,
                               int steps) {
  auto rhs = [&](double t, const Matrix& k) {
    ParameterPoint pt = p;
    pt.t = t;
    const Matrix h = family.evaluate(pt);
    const Matrix dh = family.partial(pt, direction);
    return Matrix(kI * commutator(k, h) + dh);
  };
  return rk4_integrate(k_initial, p.t, t_final, steps, rhs);
}

GeneratorPair apply_residual_gauge(const GeneratorPair& pair, const EigenSystem& es,
                                   const Matrix& delta, double tol) {
  const Matrix h = es.reconstruct();
  const double scale = std::max(1.0, delta.norm() * h.norm());
  if (commutator(delta, h).norm() > tol * scale)
    throw InvalidArgument(
        "apply_residual_gauge: delta does not commute with H (not block-diagonal in the "
        "eigenbasis)");
  GeneratorPair out = pair;
  out.k0 = pair.k0 + delta;
  return out;
}

}  // namespace hsb
