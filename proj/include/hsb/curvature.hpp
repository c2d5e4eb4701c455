#ifndef HSB_CURVATURE_HPP
#define HSB_CURVATURE_HPP

#include <functional>
#include <vector>

#include "hsb/generator.hpp"
#include "hsb/linalg.hpp"
#include "hsb/models.hpp"

namespace hsb {

/// A gauge field of evolution generators: p -> K_i(p.t, p.q).
using GeneratorField = std::function<Matrix(const ParameterPoint&, int direction)>;

/// Split field for the time-linear decomposition K_i = t K1_i + K0_i.
struct GeneratorFieldPair {
  GeneratorField k1;
  GeneratorField k0;
};

/// The canonical (adiabatic, intra-block-zero) gauge field, re-solved
/// pointwise. The canonical K in the original basis does not depend on the
/// eigenvector normalization or phase convention, so pointwise solves give a
/// smooth field away from EPs and no stencil phase alignment is needed.
GeneratorField canonical_generator_field(const HamiltonianFamily& family,
                                         const SolveOptions& opts = {});
GeneratorFieldPair canonical_field_pair(const HamiltonianFamily& family,
                                        const SolveOptions& opts = {});

/// Field view of the closed-form spin-1/2 reference generators (time
/// independent, so K1 = 0).
GeneratorField spin_half_reference_field(const SpinHalfReferenceGenerators& gens);

struct CrossRelationResidual {
  int i = 0;
  int j = 0;
  double tterm = 0.0;
  double constterm = 0.0;
};

/// Per-point curvature and cross-relation residual norms.
struct CurvatureReport {
  ParameterPoint at;
  double t = 0.0;
  std::vector<double> f_ti_norms;               // per direction
  std::vector<CrossRelationResidual> f_ij;      // per pair i < j, tterm/constterm
  std::vector<double> f_ij_norms;               // per pair i < j
  double fd_step = 0.0;
};

/// || K1_i - dH/dq_i - i [K_i(t), H] ||. Zero for canonical solutions at
/// every t (this is the F_ti = 0 statement).
double f_ti_component(const HamiltonianFamily& family, const ParameterPoint& p,
                      const GeneratorPair& pair, double t);

/// F_ij = d_i K_j - d_j K_i - i [K_j, K_i] with plain central differences of
/// the field (error O(h^2)).
Matrix f_ij_matrix(const GeneratorField& field, const ParameterPoint& p, int i, int j,
                   double h);
double f_ij_component(const GeneratorField& field, const ParameterPoint& p, int i, int j,
                      double h);
/// Canonical-field convenience; evaluates the field at time t.
double f_ij_component(const HamiltonianFamily& family, const ParameterPoint& p, int i, int j,
                      double t, double h, const SolveOptions& opts = {});

/// Residuals of the K0/K1 cross relations obtained from the t and constant
/// parts of F_ij = 0:
///   tterm:     d_i K1_j - d_j K1_i - i [K0_j, K1_i] + i [K0_i, K1_j]
///   constterm: d_i K0_j - d_j K0_i - i [K0_j, K0_i]
std::vector<CrossRelationResidual> cross_relation_residuals(const GeneratorFieldPair& fields,
                                                            int n_params,
                                                            const ParameterPoint& p, double h);
/// Canonical-field convenience; `set` supplies the values at p.
std::vector<CrossRelationResidual> cross_relation_residuals(const HamiltonianFamily& family,
                                                            const ParameterPoint& p,
                                                            const GeneratorSet& set, double h,
                                                            const SolveOptions& opts = {});

CurvatureReport curvature_report(const HamiltonianFamily& family, const ParameterPoint& p,
                                 double t, double h, const SolveOptions& opts = {});

}  // namespace hsb

#endif
