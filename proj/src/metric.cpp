#include "hsb/metric.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "hsb/integrate.hpp"

namespace hsb {

namespace {
const Complex kI(0.0, 1.0);
}

MetricOperator stationary_metric(const EigenSystem& es, std::vector<double> weights,
                                 const ParameterPoint& at, double realness_tol) {
  const Eigen::Index n = es.dim();
  if (weights.empty()) weights.assign(n, 1.0);
  if (static_cast<Eigen::Index>(weights.size()) != n)
    throw DimensionMismatch("stationary_metric: weight count does not match dimension");
  for (double w : weights)
    if (!(w > 0.0)) throw InvalidArgument("stationary_metric: weights must be positive");
  if (!es.real_spectrum(realness_tol))
    throw ComplexSpectrum(
        "stationary_metric: spectrum not real; no stationary metric exists. Use evolve_metric");

  Matrix g = Matrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k)
    g += weights[k] * (es.left.col(k) * es.left.col(k).adjoint());
  g = 0.5 * (g + g.adjoint());
  return MetricOperator{g, at, std::move(weights)};
}

MetricOperator evolve_metric(const MetricOperator& g0, const HamiltonianFamily& family,
                             const ParameterPoint& p0, double t_final, int steps,
                             MetricEvolution mode, double positivity_tol) {
  if (steps < 1) throw InvalidArgument("evolve_metric: steps must be >= 1");
  if (mode == MetricEvolution::Auto)
    mode = family.time_independent ? MetricEvolution::ClosedForm : MetricEvolution::Integrate;

  const double dt = t_final - p0.t;
  Matrix g;
  if (mode == MetricEvolution::ClosedForm) {
    const Matrix h = family.evaluate(p0);
    const Matrix u_hd = matrix_exponential(-kI * dt * h.adjoint());
    const Matrix u_h = matrix_exponential(kI * dt * h);
    g = u_hd * g0.value * u_h;
  } else {
    auto rhs = [&](double t, const Matrix& m) {
      ParameterPoint p = p0;
      p.t = t;
      const Matrix h = family.evaluate(p);
      return Matrix(kI * (m * h - h.adjoint() * m));
    };
    g = g0.value;
    const double h_step = dt / steps;
    double t = p0.t;
    for (int i = 0; i < steps; ++i) {
      g = rk4_integrate(g, t, t + h_step, 1, rhs);
      g = 0.5 * (g + g.adjoint());  // remove O(step^4) Hermiticity drift
      t = p0.t + (i + 1) * h_step;
    }
  }
  g = 0.5 * (g + g.adjoint());

  const PositivityReport rep = positive_definiteness_check(g, positivity_tol);
  if (rep.min_eigenvalue <= -positivity_tol * std::max(1.0, g.norm()))
    throw PositivityLost("evolve_metric: metric lost positive definiteness (min eigenvalue " +
                         std::to_string(rep.min_eigenvalue) + "); integration failed");

  ParameterPoint at = p0;
  at.t = t_final;
  return MetricOperator{g, at, g0.weights};
}

double metric_compatibility_residual(const Matrix& g, const Matrix& dg, const Matrix& x,
                                     CompatibilityDirection) {
  if (g.rows() != dg.rows() || g.rows() != x.rows() || g.cols() != x.cols())
    throw DimensionMismatch("metric_compatibility_residual: shape mismatch");
  return (dg - kI * g * x + kI * x.adjoint() * g).norm();
}

Matrix gauge_transform_metric(const Matrix& g, const Matrix& t, double cond_threshold) {
  if (g.rows() != t.rows() || g.cols() != t.cols())
    throw DimensionMismatch("gauge_transform_metric: shape mismatch");
  Eigen::JacobiSVD<Matrix> svd(t);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  if (!(smin > 0.0) || svd.singularValues()(0) / smin > cond_threshold)
    throw SingularOperator("gauge_transform_metric: T is singular or badly conditioned");
  return t.adjoint() * g * t;
}

}  // namespace hsb
