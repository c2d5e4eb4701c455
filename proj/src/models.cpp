#include "hsb/models.hpp"

#include <cmath>

namespace hsb {

namespace {
const Complex kI(0.0, 1.0);

double zero_fn(double, double) { return 0.0; }
}  // namespace

void HamiltonianFamily::check_point(const ParameterPoint& p) const {
  if (static_cast<int>(p.q.size()) != n_params)
    throw DimensionMismatch("HamiltonianFamily '" + id + "': point has " +
                            std::to_string(p.q.size()) + " coordinates, family declares " +
                            std::to_string(n_params));
}

Matrix HamiltonianFamily::evaluate(const ParameterPoint& p) const {
  check_point(p);
  return evaluate_fn(p);
}

Matrix HamiltonianFamily::partial(const ParameterPoint& p, int i) const {
  check_point(p);
  if (i < 0 || i >= n_params)
    throw InvalidArgument("HamiltonianFamily::partial: direction index out of range");
  return partial_fn(p, i);
}

HamiltonianFamily make_linear_family(const Matrix& h0, const std::vector<Matrix>& couplings,
                                     std::vector<std::string> names) {
  if (h0.rows() != h0.cols() || h0.rows() < 1)
    throw DimensionMismatch("make_linear_family: H0 must be square");
  for (const Matrix& v : couplings)
    if (v.rows() != h0.rows() || v.cols() != h0.cols())
      throw DimensionMismatch("make_linear_family: coupling dimension mismatch");
  if (names.empty())
    for (size_t i = 0; i < couplings.size(); ++i) names.push_back("q" + std::to_string(i + 1));

  HamiltonianFamily family;
  family.id = "linear";
  family.dim = static_cast<int>(h0.rows());
  family.n_params = static_cast<int>(couplings.size());
  family.time_independent = true;
  family.parameter_names = std::move(names);
  family.evaluate_fn = [h0, couplings](const ParameterPoint& p) {
    Matrix h = h0;
    for (size_t i = 0; i < couplings.size(); ++i) h += p.q[i] * couplings[i];
    return h;
  };
  family.partial_fn = [couplings](const ParameterPoint&, int i) { return couplings[i]; };
  return family;
}

HamiltonianFamily make_spin_half_family(double muB) {
  if (muB == 0.0) throw InvalidArgument("make_spin_half_family: muB must be nonzero");

  HamiltonianFamily family;
  family.id = "spin_half";
  family.dim = 2;
  family.n_params = 2;
  family.time_independent = true;
  family.parameter_names = {"theta", "phi"};
  family.evaluate_fn = [muB](const ParameterPoint& p) {
    const double th = p.q[0], ph = p.q[1];
    Matrix h(2, 2);
    const Complex off = std::exp(-kI * ph) * std::sin(th);
    h << std::cos(th), off, std::conj(off), -std::cos(th);
    return Matrix(muB * h);
  };
  family.partial_fn = [muB](const ParameterPoint& p, int i) {
    const double th = p.q[0], ph = p.q[1];
    Matrix d(2, 2);
    if (i == 0) {
      const Complex off = std::exp(-kI * ph) * std::cos(th);
      d << -std::sin(th), off, std::conj(off), std::sin(th);
    } else {
      const Complex off = -kI * std::exp(-kI * ph) * std::sin(th);
      d << 0.0, off, std::conj(off), 0.0;
    }
    return Matrix(muB * d);
  };
  return family;
}

HamiltonianFamily make_pt_dimer_family() {
  HamiltonianFamily family;
  family.id = "pt_dimer";
  family.dim = 2;
  family.n_params = 1;
  family.time_independent = true;
  family.parameter_names = {"gamma"};
  family.evaluate_fn = [](const ParameterPoint& p) {
    Matrix h(2, 2);
    h << kI * p.q[0], 1.0, 1.0, -kI * p.q[0];
    return h;
  };
  family.partial_fn = [](const ParameterPoint&, int) {
    Matrix d(2, 2);
    d << kI, 0.0, 0.0, -kI;
    return d;
  };
  return family;
}

Matrix numerical_partial(const HamiltonianFamily& family, const ParameterPoint& p, int i,
                         double h) {
  if (!(h > 0.0)) throw InvalidArgument("numerical_partial: step must be positive");
  auto central = [&](double step) {
    return Matrix(
        (family.evaluate(p.shifted(i, step)) - family.evaluate(p.shifted(i, -step))) /
        (2.0 * step));
  };
  const Matrix d_h = central(h);
  const Matrix d_h2 = central(0.5 * h);
  return (4.0 * d_h2 - d_h) / 3.0;
}

// Reference generators from the closed-form solution for the spin-1/2
// family. The beta_2 terms carry the same e^{-+i phi} phases as the H
// off-diagonals; only then do the gauge-constraint equations
//   d_phi alpha1 = d_theta beta1,
//   2 cos^2(th) (d_theta beta2 - d_phi alpha2) = sin(th)
// coincide with F_{theta phi} = 0 for this family.
Matrix SpinHalfReferenceGenerators::k_theta(double theta, double phi) const {
  const double a1 = gauge.alpha1 ? gauge.alpha1(theta, phi) : 0.0;
  const double a2 = gauge.alpha2 ? gauge.alpha2(theta, phi) : 0.0;
  Matrix k(2, 2);
  k << a1 + a2 * std::cos(theta),
      std::exp(-kI * phi) * (-0.5 * kI + a2 * std::sin(theta)),
      std::exp(kI * phi) * (0.5 * kI + a2 * std::sin(theta)),
      a1 - a2 * std::cos(theta);
  return k;
}

Matrix SpinHalfReferenceGenerators::k_phi(double theta, double phi) const {
  if (std::abs(std::cos(theta)) < 1e-12)
    throw DomainError("spin-1/2 reference K_phi: tan(theta) pole at theta = pi/2");
  const double b1 = gauge.beta1 ? gauge.beta1(theta, phi) : 0.0;
  const double b2 = gauge.beta2 ? gauge.beta2(theta, phi) : 0.0;
  const double tn = std::tan(theta);
  Matrix k(2, 2);
  k << b1 + b2 * std::cos(theta),
      std::exp(-kI * phi) * (-0.5 * tn + b2 * std::sin(theta)),
      std::exp(kI * phi) * (-0.5 * tn + b2 * std::sin(theta)),
      b1 - b2 * std::cos(theta);
  return k;
}

SpinHalfReferenceGenerators make_spin_half_reference_generators(SpinHalfGauge gauge) {
  if (!gauge.alpha1) gauge.alpha1 = zero_fn;
  if (!gauge.alpha2) gauge.alpha2 = zero_fn;
  if (!gauge.beta1) gauge.beta1 = zero_fn;
  if (!gauge.beta2) gauge.beta2 = zero_fn;
  return SpinHalfReferenceGenerators{std::move(gauge)};
}

}  // namespace hsb
