#ifndef HSB_METRIC_HPP
#define HSB_METRIC_HPP

#include <vector>

#include "hsb/linalg.hpp"
#include "hsb/models.hpp"

namespace hsb {

/// Hermitian positive-definite metric G defining the inner product <phi|G|psi>.
struct MetricOperator {
  Matrix value;
  ParameterPoint at;
  /// Construction weights (the explicit gauge handle of stationary_metric).
  std::vector<double> weights;
};

enum class CompatibilityDirection { Time, Parameter };

enum class MetricEvolution {
  Auto,        // closed form for time-independent H, integration otherwise
  ClosedForm,  // exp(-i H^dag dt) G0 exp(i H dt)
  Integrate    // fixed-step RK4 on dG/dt = i (G H - H^dag G)
};

/// G = sum_n w_n |chi_n><chi_n| over the biorthonormal left eigenvectors.
/// Requires a real spectrum (quasi-Hermitian regime); throws ComplexSpectrum
/// otherwise. With unit weights and a Hermitian H this is the identity.
/// Stationarity: G H = H^dag G, so dG/dt = 0 under the metric equation.
MetricOperator stationary_metric(const EigenSystem& es, std::vector<double> weights = {},
                                 const ParameterPoint& at = {}, double realness_tol = 1e-9);

/// Evolve G0 from p0.t to t_final under dG/dt = i (G H - H^dag G).
/// The result is re-symmetrized and checked for positivity loss.
MetricOperator evolve_metric(const MetricOperator& g0, const HamiltonianFamily& family,
                             const ParameterPoint& p0, double t_final, int steps,
                             MetricEvolution mode = MetricEvolution::Auto,
                             double positivity_tol = 1e-8);

/// || dG - i G X + i X^dag G || with X = H (time) or X = K (parameter).
double metric_compatibility_residual(const Matrix& g, const Matrix& dg, const Matrix& x,
                                     CompatibilityDirection direction);

/// G' = T^dag G T for an invertible gauge transformation T.
Matrix gauge_transform_metric(const Matrix& g, const Matrix& t, double cond_threshold = 1e8);

}  // namespace hsb

#endif
