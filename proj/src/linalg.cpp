#include "hsb/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace hsb {

namespace {

void require_square_finite(const Matrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() < 1)
    throw DimensionMismatch(std::string(what) + ": matrix must be square with dim >= 1");
  if (!a.allFinite())
    throw InvalidArgument(std::string(what) + ": matrix has non-finite entries");
}

}  // namespace

Matrix commutator(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
    throw DimensionMismatch("commutator: operands must be square and of equal dimension");
  return a * b - b * a;
}

Matrix EigenSystem::reconstruct() const {
  return right * eigenvalues.asDiagonal() * left.adjoint();
}

bool EigenSystem::real_spectrum(double tol) const {
  double scale = std::max(1.0, eigenvalues.cwiseAbs().maxCoeff());
  for (Eigen::Index n = 0; n < eigenvalues.size(); ++n)
    if (std::abs(eigenvalues(n).imag()) > tol * scale) return false;
  return true;
}

std::vector<int> cluster_eigenvalues(const Eigen::VectorXcd& eigenvalues, double tol) {
  const int n = static_cast<int>(eigenvalues.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(eigenvalues(i) - eigenvalues(j)) <= tol) parent[find(i)] = find(j);
  std::vector<int> block(n, -1);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    int r = find(i);
    if (block[r] < 0) block[r] = next++;
    block[i] = block[r];
  }
  return block;
}

EigenSystem biorthogonal_eigensystem(const Matrix& h, const SolveOptions& opts) {
  require_square_finite(h, "biorthogonal_eigensystem");
  const Eigen::Index n = h.rows();

  Eigen::ComplexEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success)
    throw Error("biorthogonal_eigensystem: eigensolver did not converge");

  Matrix v = solver.eigenvectors();  // unit columns
  Eigen::VectorXcd ev = solver.eigenvalues();

  Eigen::JacobiSVD<Matrix> svd(v);
  const double sigma_min = svd.singularValues()(n - 1);
  const double cond = sigma_min > 0.0 ? svd.singularValues()(0) / sigma_min
                                      : std::numeric_limits<double>::infinity();
  if (!(cond < opts.ep_condition_threshold))
    throw NonDiagonalizable("biorthogonal_eigensystem: eigenvector matrix condition number " +
                                std::to_string(cond) + " exceeds EP threshold",
                            cond);

  // Deterministic ordering.
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (ev(a).real() != ev(b).real()) return ev(a).real() < ev(b).real();
    return ev(a).imag() < ev(b).imag();
  });

  EigenSystem out;
  out.eigenvalues.resize(n);
  out.right.resize(n, n);
  out.condition_number = cond;
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = ev(order[k]);
    Vector col = v.col(order[k]);
    // Phase: largest-magnitude entry real positive.
    Eigen::Index imax = 0;
    col.cwiseAbs().maxCoeff(&imax);
    Complex pivot = col(imax);
    if (std::abs(pivot) > 0.0) col *= std::abs(pivot) / pivot;
    out.right.col(k) = col;
  }

  Matrix inv = out.right.inverse();  // rows are <chi_n| for unit-norm psi_n
  out.left.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double s = std::sqrt(inv.row(k).norm());  // balanced scale
    out.right.col(k) *= s;
    out.left.col(k) = inv.row(k).adjoint() / s;
  }
  return out;
}

Matrix matrix_exponential(const Matrix& a, ExpMethod method, const SolveOptions& opts) {
  require_square_finite(a, "matrix_exponential");
  if (method == ExpMethod::Auto) {
    try {
      return matrix_exponential(a, ExpMethod::Eigenbasis, opts);
    } catch (const NonDiagonalizable&) {
      return matrix_exponential(a, ExpMethod::ScaledSeries, opts);
    }
  }
  if (method == ExpMethod::Eigenbasis) {
    EigenSystem es = biorthogonal_eigensystem(a, opts);
    Eigen::VectorXcd exp_ev(es.dim());
    for (Eigen::Index k = 0; k < es.dim(); ++k) exp_ev(k) = std::exp(es.eigenvalues(k));
    return es.right * exp_ev.asDiagonal() * es.left.adjoint();
  }
  // Scaling and squaring with a plain Taylor series on the scaled matrix.
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();  // inf-norm
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Matrix b = a / std::pow(2.0, squarings);
  Matrix term = Matrix::Identity(a.rows(), a.cols());
  Matrix sum = term;
  for (int k = 1; k <= 24; ++k) {
    term = (term * b) / static_cast<double>(k);
    sum += term;
    if (term.norm() < 1e-18 * sum.norm()) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

Matrix matrix_exponential_propagator(const Matrix& h, double t, ExpMethod method,
                                     const SolveOptions& opts) {
  const Complex mit(0.0, -t);
  return matrix_exponential(mit * h, method, opts);
}

PositivityReport positive_definiteness_check(const Matrix& g, double tol) {
  PositivityReport report;
  if (g.rows() != g.cols() || !g.allFinite()) return report;
  report.hermiticity_error = (g - g.adjoint()).norm();
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (g + g.adjoint()));
  report.min_eigenvalue = es.eigenvalues().minCoeff();
  report.positive = report.hermiticity_error <= tol && report.min_eigenvalue > tol;
  return report;
}

bool is_hermitian(const Matrix& a, double tol) {
  return a.rows() == a.cols() && (a - a.adjoint()).norm() <= tol * std::max(1.0, a.norm());
}

}  // namespace hsb
