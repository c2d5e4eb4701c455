#include <hsb/metric.hpp>

#include <cmath>

#include "doctest.h"
#include "hsb/generator.hpp"
#include "test_helpers.hpp"

using namespace hsb;
using namespace hsb::test;

namespace {

MetricOperator dimer_stationary(double gamma) {
  const auto family = make_pt_dimer_family();
  const ParameterPoint p(0.0, {gamma});
  return stationary_metric(biorthogonal_eigensystem(family.evaluate(p)), {}, p);
}

}  // namespace

TEST_CASE("stationary metric of a Hermitian matrix with unit weights is the identity") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 5; ++k) {
    const Matrix h = random_hermitian(3, rng);
    const MetricOperator g = stationary_metric(biorthogonal_eigensystem(h));
    CHECK((g.value - Matrix::Identity(3, 3)).norm() < 1e-12);
  }
}

TEST_CASE("stationary metric of the PT dimer") {
  const auto family = make_pt_dimer_family();
  const double gamma = 0.5;
  const MetricOperator g = dimer_stationary(gamma);
  const Matrix h = family.evaluate(ParameterPoint(0.0, {gamma}));

  CHECK((g.value * h - h.adjoint() * g.value).norm() < 1e-10);
  const PositivityReport rep = positive_definiteness_check(g.value);
  CHECK(rep.positive);

  // Balanced eigenvector scaling pins the metric to the unimodular
  // representative (1/eps) [[1, -i g], [i g, 1]], eps = sqrt(1 - g^2).
  const double eps = std::sqrt(1.0 - gamma * gamma);
  Matrix expected(2, 2);
  expected << 1.0, -kI * gamma, kI * gamma, 1.0;
  expected /= eps;
  CHECK((g.value - expected).norm() < 1e-12);
}

TEST_CASE("stationary metric rejects complex spectra") {
  const auto family = make_pt_dimer_family();
  const EigenSystem es = biorthogonal_eigensystem(family.evaluate(ParameterPoint(0.0, {1.5})));
  CHECK_FALSE(es.real_spectrum());
  CHECK_THROWS_AS(stationary_metric(es), ComplexSpectrum);
}

TEST_CASE("stationary metric validates weights") {
  const EigenSystem es = biorthogonal_eigensystem(pauli_z());
  CHECK_THROWS_AS(stationary_metric(es, {1.0, -1.0}), InvalidArgument);
  CHECK_THROWS_AS(stationary_metric(es, {1.0}), DimensionMismatch);
}

TEST_CASE("different weights give metrics that are both stationary") {
  const auto family = make_pt_dimer_family();
  const ParameterPoint p(0.0, {0.4});
  const Matrix h = family.evaluate(p);
  const EigenSystem es = biorthogonal_eigensystem(h);
  for (std::vector<double> w : {std::vector<double>{1.0, 1.0}, std::vector<double>{2.0, 0.5}}) {
    const Matrix g = stationary_metric(es, w, p).value;
    const Matrix zero = Matrix::Zero(2, 2);
    CHECK(metric_compatibility_residual(g, zero, h, CompatibilityDirection::Time) < 1e-10);
    CHECK(positive_definiteness_check(g).positive);
  }
}

TEST_CASE("evolve_metric keeps the identity for Hermitian families") {
  const auto family = make_spin_half_family();
  const ParameterPoint p(0.0, {1.0, 0.5});
  const MetricOperator g0{Matrix::Identity(2, 2), p, {1.0, 1.0}};
  for (double t : {0.5, 3.0, 10.0}) {
    const MetricOperator g = evolve_metric(g0, family, p, t, 100);
    CHECK((g.value - Matrix::Identity(2, 2)).norm() < 1e-12);
  }
}

TEST_CASE("a stationary metric does not move") {
  const auto family = make_pt_dimer_family();
  const MetricOperator g0 = dimer_stationary(0.5);
  const MetricOperator g = evolve_metric(g0, family, g0.at, 3.0, 100);
  CHECK((g.value - g0.value).norm() < 1e-10);
  CHECK(g.at.t == 3.0);
}

TEST_CASE("closed-form evolution matches the RK4 integrator") {
  const auto family = make_pt_dimer_family();
  const ParameterPoint p(0.0, {0.5});
  const MetricOperator g0{Matrix::Identity(2, 2), p, {1.0, 1.0}};
  const MetricOperator closed =
      evolve_metric(g0, family, p, 0.1, 1, MetricEvolution::ClosedForm);
  const MetricOperator stepped =
      evolve_metric(g0, family, p, 0.1, 200, MetricEvolution::Integrate);
  CHECK((closed.value - stepped.value).norm() < 1e-9);
  CHECK((closed.value - closed.value.adjoint()).norm() < 1e-14);
}

TEST_CASE("evolve_metric validates the step count") {
  const auto family = make_pt_dimer_family();
  const MetricOperator g0{Matrix::Identity(2, 2), ParameterPoint(0.0, {0.2}), {}};
  CHECK_THROWS_AS(evolve_metric(g0, family, g0.at, 1.0, 0), InvalidArgument);
}

TEST_CASE("metric compatibility residual diagnostics") {
  // Hermitian K with G = 1, dG = 0: i K - i K^dag = 0.
  CHECK(metric_compatibility_residual(Matrix::Identity(2, 2), Matrix::Zero(2, 2), pauli_x(),
                                      CompatibilityDirection::Parameter) < 1e-15);

  // K = 0 reduces the residual to ||dG||.
  std::mt19937_64 rng(17);
  const Matrix g = random_hermitian(2, rng);
  const Matrix dg = random_hermitian(2, rng);
  CHECK(metric_compatibility_residual(g, dg, Matrix::Zero(2, 2),
                                      CompatibilityDirection::Parameter) ==
        doctest::Approx(dg.norm()));
}

TEST_CASE("canonical generator is metric-compatible with the stationary metric field") {
  // dG from central differences over gamma; the residual it leaves against
  // i(G K - K^dag G) is pure finite-difference error, O(h^2).
  const auto family = make_pt_dimer_family();
  const double gamma = 0.3;
  const ParameterPoint p(0.0, {gamma});
  const Matrix g = dimer_stationary(gamma).value;
  const Matrix k0 = solve_adiabatic_generator(family, p, 0).k0;

  auto residual_at = [&](double h) {
    const Matrix dg = (dimer_stationary(gamma + h).value - dimer_stationary(gamma - h).value) /
                      (2.0 * h);
    return metric_compatibility_residual(g, dg, k0, CompatibilityDirection::Parameter);
  };
  const double r1 = residual_at(1e-3);
  const double r2 = residual_at(5e-4);
  CHECK(r1 < 1e-5);
  CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.2));  // O(h^2) convergence
}

TEST_CASE("gauge transformations of the metric") {
  std::mt19937_64 rng(23);
  const Matrix g = Matrix::Identity(2, 2) + 0.1 * random_hermitian(2, rng);

  CHECK((gauge_transform_metric(g, Matrix::Identity(2, 2)) - g).norm() == 0.0);
  CHECK((gauge_transform_metric(g, 3.0 * Matrix::Identity(2, 2)) - 9.0 * g).norm() < 1e-12);

  Matrix singular(2, 2);
  singular << 1, 1, 1, 1;
  CHECK_THROWS_AS(gauge_transform_metric(g, singular), SingularOperator);

  // Positive definiteness survives any invertible T.
  const Matrix t = random_complex(2, rng) + 2.0 * Matrix::Identity(2, 2);
  CHECK(positive_definiteness_check(gauge_transform_metric(g, t)).positive);
}

TEST_CASE("conjugated gauge operators satisfy the T equation") {
  // T(t) = exp(-iHt) T0 exp(iHt) solves dT/dt + i [H, T] = 0; checked with
  // central differences in t.
  const auto family = make_pt_dimer_family();
  const Matrix h = family.evaluate(ParameterPoint(0.0, {0.4}));
  std::mt19937_64 rng(31);
  const Matrix t0 = random_complex(2, rng);
  REQUIRE(commutator(t0, h).norm() > 1e-3);  // nontrivial T0

  auto t_at = [&](double time) {
    return Matrix(matrix_exponential_propagator(h, time) * t0 *
                  matrix_exponential_propagator(h, -time));
  };
  const double step = 1e-4, at = 0.7;
  const Matrix dt = (t_at(at + step) - t_at(at - step)) / (2.0 * step);
  const Matrix residual = dt + kI * commutator(h, t_at(at));
  CHECK(residual.norm() < 1e-6);
}
