#ifndef HSB_LINALG_HPP
#define HSB_LINALG_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "hsb/errors.hpp"

namespace hsb {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Numerical knobs shared by the eigensolver and everything built on it.
struct SolveOptions {
  /// cond(V) above this raises NonDiagonalizable (V = unit-column right
  /// eigenvector matrix). Proxy for an exceptional point.
  double ep_condition_threshold = 1e8;
  /// Eigenvalues closer than degeneracy_tol_rel * ||H|| are treated as one
  /// degenerate block.
  double degeneracy_tol_rel = 1e-9;
};

/// Biorthogonal eigendecomposition H = sum_n h_n |psi_n><chi_n|.
///
/// Columns of `right` are the psi_n, columns of `left` the chi_n, with
/// left.adjoint() * right == identity to machine precision (left is built
/// from the inverse of right). Eigenvalues are sorted by (Re, Im).
///
/// Normalization convention: each psi_n carries the phase that makes its
/// largest-magnitude entry real positive, and the balanced scale
/// ||psi_n|| == ||chi_n||. The balance matters: it is what makes the
/// stationary metric built from this frame compatible with the canonical
/// parameter-transport generators.
struct EigenSystem {
  Eigen::VectorXcd eigenvalues;
  Matrix right;
  Matrix left;
  /// Condition number of the unit-column right-eigenvector matrix.
  double condition_number = 1.0;

  Eigen::Index dim() const { return eigenvalues.size(); }
  Vector right_vector(Eigen::Index n) const { return right.col(n); }
  Vector left_vector(Eigen::Index n) const { return left.col(n); }
  /// sum_n h_n |psi_n><chi_n|; should reproduce the input matrix.
  Matrix reconstruct() const;
  /// True if all eigenvalues are real within tol * max(1, max |h_n|).
  bool real_spectrum(double tol = 1e-9) const;
};

struct PositivityReport {
  bool positive = false;
  double min_eigenvalue = 0.0;
  double hermiticity_error = 0.0;
};

enum class ExpMethod {
  Auto,         // eigenbasis, falling back to the scaled series at an EP
  Eigenbasis,   // V exp(diag) V^-1; raises NonDiagonalizable at an EP
  ScaledSeries  // scaling-and-squaring Taylor series
};

Matrix commutator(const Matrix& a, const Matrix& b);

EigenSystem biorthogonal_eigensystem(const Matrix& h, const SolveOptions& opts = {});

/// Index of the degenerate block each eigenvalue belongs to, clustered by
/// |h_m - h_n| < tol (transitively). Block ids are dense starting at 0.
std::vector<int> cluster_eigenvalues(const Eigen::VectorXcd& eigenvalues, double tol);

/// exp(A) for a general square complex matrix.
Matrix matrix_exponential(const Matrix& a, ExpMethod method = ExpMethod::Auto,
                          const SolveOptions& opts = {});

/// exp(-i H t), the time propagator.
Matrix matrix_exponential_propagator(const Matrix& h, double t,
                                     ExpMethod method = ExpMethod::Auto,
                                     const SolveOptions& opts = {});

/// Hermiticity + positive definiteness of G. Diagnostic, never throws.
PositivityReport positive_definiteness_check(const Matrix& g, double tol = 1e-10);

bool is_hermitian(const Matrix& a, double tol = 1e-10);

}  // namespace hsb

#endif
