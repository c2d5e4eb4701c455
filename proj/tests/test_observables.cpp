#include <hsb/observables.hpp>

#include <cmath>
#include <random>

#include "doctest.h"
#include "test_helpers.hpp"

using namespace hsb;
using namespace hsb::test;

namespace {

double chi_dimer_reference(double g) { return -1.0 / (4.0 * std::pow(1.0 - g * g, 2)); }

// The explicit eigenvector fields of the spin-1/2 family (lower state n = 0,
// upper n = 1) in the fixed convention used to derive A_phi^- = sin^2(th/2).
Vector spin_half_state(double th, double ph, int n) {
  Vector psi(2);
  if (n == 0)
    psi << std::sin(th / 2) * std::exp(-kI * ph), -std::cos(th / 2);
  else
    psi << std::cos(th / 2) * std::exp(-kI * ph), std::sin(th / 2);
  return psi;
}

// i <psi | d_dir psi> by central differences of the explicit field.
double field_connection(double th, double ph, int n, int dir, double h) {
  const Vector psi = spin_half_state(th, ph, n);
  const Vector plus = spin_half_state(th + (dir == 0 ? h : 0.0), ph + (dir == 1 ? h : 0.0), n);
  const Vector minus = spin_half_state(th - (dir == 0 ? h : 0.0), ph - (dir == 1 ? h : 0.0), n);
  const Complex value = kI * psi.dot((plus - minus) / (2.0 * h));
  return value.real();
}

// Diagonal residual-gauge shift sum_n d_n |psi_n><chi_n| built from an
// eigensystem.
Matrix diagonal_delta(const EigenSystem& es, const Eigen::VectorXcd& d) {
  return es.right * d.asDiagonal() * es.left.adjoint();
}

}  // namespace

TEST_CASE("Berry connection vanishes in the canonical gauge") {
  const auto spin = make_spin_half_family();
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> th(0.2, M_PI - 0.2), ph(0.0, 2 * M_PI);
  for (int k = 0; k < 5; ++k) {
    const ParameterPoint p(0.0, {th(rng), ph(rng)});
    for (int dir = 0; dir < 2; ++dir)
      for (int n = 0; n < 2; ++n)
        CHECK(std::abs(berry_connection(spin, p, dir, n)) < 1e-10);
  }
}

TEST_CASE("Berry connection is rejected for non-Hermitian families") {
  const auto dimer = make_pt_dimer_family();
  CHECK_THROWS_AS(berry_connection(dimer, ParameterPoint(0.0, {0.3}), 0, 0), InvalidArgument);
  // The dual variant handles it.
  const Complex a = berry_connection_dual(dimer, ParameterPoint(0.0, {0.3}), 0, 0);
  CHECK(std::abs(a) < 1e-10);  // canonical gauge: zero diagonal
}

TEST_CASE("Berry connection of a q-independent family is zero") {
  const auto flat = make_linear_family(pauli_z(), {Matrix::Zero(2, 2)});
  CHECK(berry_connection(flat, ParameterPoint(0.0, {0.7}), 0, 0) == 0.0);
}

TEST_CASE("Berry connection in the convention of the explicit eigenvector field") {
  // The explicit field has A_phi^- = sin^2(th/2) (differentiate the first
  // amplitude) and A_theta = 0. Shifting the canonical pair by the diagonal
  // delta d_n = A_phi^n reproduces those potentials through the K route.
  const double th = 1.1, ph = 0.6;
  const ParameterPoint p(0.0, {th, ph});
  const auto spin = make_spin_half_family();

  const double a_lower = field_connection(th, ph, 0, 1, 1e-5);
  const double a_upper = field_connection(th, ph, 1, 1, 1e-5);
  CHECK(a_lower == doctest::Approx(std::pow(std::sin(th / 2), 2)).epsilon(1e-8));
  CHECK(a_upper == doctest::Approx(std::pow(std::cos(th / 2), 2)).epsilon(1e-8));
  CHECK(field_connection(th, ph, 0, 0, 1e-5) == doctest::Approx(0.0).epsilon(1e-8));

  const EigenSystem es = biorthogonal_eigensystem(spin.evaluate(p));
  Eigen::VectorXcd d(2);
  d << a_lower, a_upper;  // lower state sorts first (eigenvalue -muB)
  const GeneratorPair canonical = solve_adiabatic_generator(spin, p, 1);
  const GeneratorPair shifted = apply_residual_gauge(canonical, es, diagonal_delta(es, d));
  CHECK(berry_connection(spin, p, 1, 0, shifted) ==
        doctest::Approx(std::pow(std::sin(th / 2), 2)).epsilon(1e-9));
}

TEST_CASE("spin-1/2 Berry curvature is -+ sin(theta)/2") {
  const auto spin = make_spin_half_family();
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> th(0.1, M_PI - 0.1), ph(0.0, 2 * M_PI);
  for (int k = 0; k < 20; ++k) {
    const double theta = th(rng);
    const ParameterPoint p(0.0, {theta, ph(rng)});
    const Complex lower = berry_curvature(spin, p, 0, 1, 0);
    const Complex upper = berry_curvature(spin, p, 0, 1, 1);
    CHECK(std::abs(lower - Complex(std::sin(theta) / 2.0, 0.0)) < 1e-10);
    CHECK(std::abs(upper + Complex(std::sin(theta) / 2.0, 0.0)) < 1e-10);
  }
}

TEST_CASE("Berry curvature fades near the poles") {
  const auto spin = make_spin_half_family();
  const Complex omega = berry_curvature(spin, ParameterPoint(0.0, {1e-4, 0.3}), 0, 1, 0);
  CHECK(std::abs(omega) < 1e-4);
}

TEST_CASE("Berry curvature rejects degenerate levels") {
  const auto degenerate = make_linear_family(Matrix::Identity(2, 2), {pauli_x(), pauli_y()});
  CHECK_THROWS_AS(berry_curvature(degenerate, ParameterPoint(0.0, {0.0, 0.0}), 0, 1, 0),
                  DegenerateLevel);
}

TEST_CASE("Berry curvature and susceptibility are residual-gauge and time invariant") {
  const auto spin = make_spin_half_family();
  const ParameterPoint ps(0.0, {1.2, 0.8});
  const auto dimer = make_pt_dimer_family();
  const ParameterPoint pd(0.0, {0.4});

  const EigenSystem es_s = biorthogonal_eigensystem(spin.evaluate(ps));
  const EigenSystem es_d = biorthogonal_eigensystem(dimer.evaluate(pd));
  const GeneratorSet set0 = solve_all_generators(spin, ps);
  const GeneratorPair pair0 = solve_adiabatic_generator(dimer, pd, 0);

  const Complex omega0 = berry_curvature(spin, ps, 0, 1, 0, 0.0, set0);
  const Complex chi0 = fidelity_susceptibility(dimer, pd, 0, 0, 0.0, pair0).chi;

  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXcd ds(2), dd(2);
    ds << Complex(u(rng), u(rng)), Complex(u(rng), u(rng));
    dd << Complex(u(rng), u(rng)), Complex(u(rng), u(rng));

    GeneratorSet set = set0;
    set.pairs[0] = apply_residual_gauge(set.pairs[0], es_s, diagonal_delta(es_s, ds));
    set.pairs[1] = apply_residual_gauge(set.pairs[1], es_s, diagonal_delta(es_s, dd));
    const GeneratorPair pair =
        apply_residual_gauge(pair0, es_d, diagonal_delta(es_d, dd));

    for (double t : {0.0, 3.0, 17.0}) {
      const Complex omega = berry_curvature(spin, ps, 0, 1, 0, t, set);
      CHECK(std::abs(omega - omega0) <= 1e-10 * std::abs(omega0));
      const Complex chi = fidelity_susceptibility(dimer, pd, 0, 0, t, pair).chi;
      CHECK(std::abs(chi - chi0) <= 1e-10 * std::abs(chi0));
    }
  }
}

TEST_CASE("Chern numbers of the spin-1/2 bands") {
  const auto spin = make_spin_half_family();
  const double lower = chern_number(spin, 0, 40, 80);
  const double upper = chern_number(spin, 1, 40, 80);
  CHECK(std::abs(lower - 1.0) < 1e-3);
  CHECK(std::abs(upper + 1.0) < 1e-3);
  CHECK(std::abs(lower + upper) < 1e-12);  // curvature is traceless

  // Riemann-sum convergence: coarse and fine grids agree.
  const double coarse = chern_number(spin, 0, 10, 20);
  const double fine = chern_number(spin, 0, 20, 40);
  CHECK(std::abs(coarse - fine) < 1e-3);
}

TEST_CASE("Hermitian fidelity") {
  StateVector a{Vector::Unit(2, 0), {}};
  StateVector b{Vector::Unit(2, 1), {}};
  CHECK(fidelity_hermitian(a, a) == doctest::Approx(1.0));
  CHECK(fidelity_hermitian(a, b) == doctest::Approx(0.0));

  // |<psi_-(th) | psi_-(th+e)>|^2 = 1 - e^2/4 + O(e^3).
  const double th = 0.9, ph = 0.4, eps = 1e-2;
  StateVector s1{spin_half_state(th, ph, 0), {}};
  StateVector s2{spin_half_state(th + eps, ph, 0), {}};
  const double f = fidelity_hermitian(s1, s2);
  CHECK(std::abs(f - (1.0 - eps * eps / 4.0)) < eps * eps * eps);
}

TEST_CASE("generalized fidelity") {
  const auto dimer = make_pt_dimer_family();
  const ParameterPoint p(0.0, {0.3});

  SUBCASE("eps = 0 gives exactly 1") {
    const Complex f = fidelity_generalized(dimer, p, 0, 0.0, 0);
    CHECK(std::abs(f - 1.0) < 1e-12);
  }

  SUBCASE("reduces to the Hermitian fidelity when G = 1") {
    const auto herm = make_linear_family(pauli_z(), {pauli_x()});
    const ParameterPoint q(0.0, {0.2});
    const double eps = 0.01;
    const Complex f_g = fidelity_generalized(herm, q, 0, eps, 0);
    const EigenSystem e1 = biorthogonal_eigensystem(herm.evaluate(q));
    const EigenSystem e2 = biorthogonal_eigensystem(herm.evaluate(q.shifted(0, eps)));
    StateVector a{e1.right.col(0) / e1.right.col(0).norm(), q};
    StateVector b{e2.right.col(0) / e2.right.col(0).norm(), q};
    CHECK(std::abs(f_g - Complex(fidelity_hermitian(a, b), 0.0)) < 1e-12);
  }

  SUBCASE("finite-eps expansion matches the closed-form susceptibility") {
    const double eps = 1e-3;
    const Complex f = fidelity_generalized(dimer, p, 0, eps, 0);
    const Complex expected = 1.0 - eps * eps * chi_dimer_reference(0.3);
    CHECK(std::abs(f - expected) / std::abs(expected) < 1e-4);
  }
}

TEST_CASE("dimer susceptibility matches the closed form") {
  const auto dimer = make_pt_dimer_family();
  for (double g : {0.0, 0.3, -0.3, 0.6, -0.6, 0.9, -0.9}) {
    const SusceptibilityRecord rec =
        fidelity_susceptibility(dimer, ParameterPoint(0.0, {g}), 0, 0);
    const double expected = chi_dimer_reference(g);
    CHECK(std::abs(rec.chi - Complex(expected, 0.0)) <= 1e-8 * std::abs(expected));
    CHECK(rec.chi.real() < 0.0);  // real negative, unlike the Hermitian case
    CHECK(std::abs(rec.chi.imag()) < 1e-10);
    CHECK(rec.q == g);
    CHECK(rec.gap_min == doctest::Approx(2.0 * std::sqrt(1.0 - g * g)));
  }
  // Both eigenstates share the same susceptibility.
  const SusceptibilityRecord upper =
      fidelity_susceptibility(dimer, ParameterPoint(0.0, {0.5}), 0, 1);
  CHECK(std::abs(upper.chi - Complex(chi_dimer_reference(0.5), 0.0)) < 1e-10);
}

TEST_CASE("Hermitian susceptibility equals second-order perturbation theory") {
  // chi_n = sum_{m != n} |<m| dH |n>|^2 / (E_n - E_m)^2, computed here as an
  // independent oracle; for sigma_z + q sigma_x at q = 0 it equals 1/4.
  const auto family = make_linear_family(pauli_z(), {pauli_x()});
  const ParameterPoint p(0.0, {0.0});
  const EigenSystem es = biorthogonal_eigensystem(family.evaluate(p));
  const Matrix dh = family.partial(p, 0);

  for (int n = 0; n < 2; ++n) {
    double oracle = 0.0;
    for (int m = 0; m < 2; ++m) {
      if (m == n) continue;
      const Complex elem = es.right.col(m).dot(dh * es.right.col(n));
      oracle += std::norm(elem) /
                std::norm(es.eigenvalues(n) - es.eigenvalues(m));
    }
    const SusceptibilityRecord rec = fidelity_susceptibility(family, p, 0, n);
    CHECK(oracle == doctest::Approx(0.25));
    CHECK(std::abs(rec.chi - Complex(oracle, 0.0)) < 1e-8);
    CHECK(rec.chi.real() >= 0.0);
  }
}

TEST_CASE("finite-difference susceptibility oracle") {
  const auto dimer = make_pt_dimer_family();
  const ParameterPoint p(0.0, {0.3});
  const double chi_ref = chi_dimer_reference(0.3);

  SUBCASE("agrees with the closed form at eps = 1e-4") {
    const Complex fd = susceptibility_fd_oracle(dimer, p, 0, 0, 1e-4);
    CHECK(std::abs(fd - Complex(chi_ref, 0.0)) / std::abs(chi_ref) < 1e-3);
  }

  SUBCASE("Hermitian model gives 1/4") {
    const auto herm = make_linear_family(pauli_z(), {pauli_x()});
    const Complex fd = susceptibility_fd_oracle(herm, ParameterPoint(0.0, {0.0}), 0, 0, 1e-4);
    CHECK(std::abs(fd - 0.25) < 1e-4);
  }

  SUBCASE("error shrinks linearly in eps") {
    auto err = [&](double eps) {
      return std::abs(susceptibility_fd_oracle(dimer, p, 0, 0, eps) - Complex(chi_ref, 0.0));
    };
    const double e1 = err(2e-4), e2 = err(1e-4);
    CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.35));
    for (double eps : {1e-3, 1e-4, 1e-5})
      CHECK(err(eps) <= 20.0 * std::abs(chi_ref) * eps);
  }
}

TEST_CASE("EP scan flags the dimer exceptional points") {
  const auto dimer = make_pt_dimer_family();
  const EpScanResult result = ep_scan(dimer, 0, -1.2, 1.2, 49);  // step 0.05
  REQUIRE_FALSE(result.flagged_intervals.empty());
  bool covers_plus = false, covers_minus = false;
  for (const auto& [lo, hi] : result.flagged_intervals) {
    if (lo <= 1.0 && 1.0 <= hi) covers_plus = true;
    if (lo <= -1.0 && -1.0 <= hi) covers_minus = true;
  }
  CHECK(covers_plus);
  CHECK(covers_minus);
  // Cells well inside the PT-unbroken phase are not flagged.
  for (const EpScanCell& cell : result.cells)
    if (std::abs(cell.q) < 0.8) CHECK_FALSE(cell.flagged);
}

TEST_CASE("EP scan of a gapped Hermitian family flags nothing") {
  const auto herm = make_linear_family(pauli_z(), {pauli_x()});
  const EpScanResult result = ep_scan(herm, 0, -1.0, 1.0, 41);
  CHECK(result.flagged_intervals.empty());
  for (const EpScanCell& cell : result.cells) {
    CHECK_FALSE(cell.flagged);
    CHECK(cell.gap_min >= 2.0 - 1e-12);
    CHECK(std::abs(cell.chi) <= 0.25 + 1e-12);
  }
}

TEST_CASE("EP scan of an empty grid is empty") {
  const auto dimer = make_pt_dimer_family();
  const EpScanResult result = ep_scan(dimer, 0, 0.0, 1.0, 0);
  CHECK(result.cells.empty());
  CHECK(result.flagged_intervals.empty());
}
