#ifndef HSB_MODELS_HPP
#define HSB_MODELS_HPP

#include <functional>
#include <string>
#include <vector>

#include "hsb/linalg.hpp"

namespace hsb {

/// A point of the extended base space: time plus parameter coordinates.
struct ParameterPoint {
  double t = 0.0;
  std::vector<double> q;

  ParameterPoint() = default;
  ParameterPoint(double time, std::vector<double> coords) : t(time), q(std::move(coords)) {}

  ParameterPoint shifted(int i, double dq) const {
    ParameterPoint p = *this;
    p.q.at(i) += dq;
    return p;
  }
};

/// A family H(t, {q}) with exact parameter derivatives where available.
/// Evaluation is pure; instances are immutable after construction and safe
/// to share across threads.
struct HamiltonianFamily {
  std::string id;
  int dim = 0;
  int n_params = 0;
  bool time_independent = true;
  std::vector<std::string> parameter_names;
  std::function<Matrix(const ParameterPoint&)> evaluate_fn;
  std::function<Matrix(const ParameterPoint&, int)> partial_fn;

  Matrix evaluate(const ParameterPoint& p) const;
  /// dH/dq_i at p. Exact (analytic) for all built-in families.
  Matrix partial(const ParameterPoint& p, int i) const;

 private:
  void check_point(const ParameterPoint& p) const;
};

/// H(t, {q}) = H0 + sum_i q_i V_i. Derivatives are the couplings, exactly.
HamiltonianFamily make_linear_family(const Matrix& h0, const std::vector<Matrix>& couplings,
                                     std::vector<std::string> names = {});

/// Charged spin-1/2 in a magnetic field of fixed magnitude:
///   H = muB [[cos th, e^{-i ph} sin th], [e^{i ph} sin th, -cos th]]
/// Parameters (theta, phi); domain theta in (0, pi). Hermitian everywhere.
HamiltonianFamily make_spin_half_family(double muB = 1.0);

/// PT-symmetric dimer H(gamma) = [[i gamma, 1], [1, -i gamma]].
/// Real spectrum +-sqrt(1 - gamma^2) for |gamma| < 1, exceptional points at
/// gamma = +-1.
HamiltonianFamily make_pt_dimer_family();

/// Central-difference dH/dq_i with one Richardson extrapolation step, O(h^4).
/// Fallback and test oracle; families carry exact partials.
Matrix numerical_partial(const HamiltonianFamily& family, const ParameterPoint& p, int i,
                         double h);

/// Gauge functions of (theta, phi) entering the spin-1/2 reference generators.
struct SpinHalfGauge {
  std::function<double(double, double)> alpha1;
  std::function<double(double, double)> alpha2;
  std::function<double(double, double)> beta1;
  std::function<double(double, double)> beta2;
};

/// Closed-form adiabatic-gauge generators for the spin-1/2 family, with the
/// residual gauge freedom exposed through the four gauge functions. K_phi has
/// a tan(theta) pole at theta = pi/2.
struct SpinHalfReferenceGenerators {
  SpinHalfGauge gauge;
  Matrix k_theta(double theta, double phi) const;
  Matrix k_phi(double theta, double phi) const;
};

SpinHalfReferenceGenerators make_spin_half_reference_generators(SpinHalfGauge gauge);

}  // namespace hsb

#endif
