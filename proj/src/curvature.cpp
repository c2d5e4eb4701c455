#include "hsb/curvature.hpp"

namespace hsb {

namespace {

const Complex kI(0.0, 1.0);

void check_pair_indices(int n_params, int i, int j, const char* what) {
  if (n_params < 2)
    throw InvalidArgument(std::string(what) + ": needs at least two parameter directions");
  if (i == j || i < 0 || j < 0 || i >= n_params || j >= n_params)
    throw InvalidArgument(std::string(what) + ": invalid direction pair");
}

Matrix central_difference(const GeneratorField& field, const ParameterPoint& p, int along,
                          int direction, double h) {
  if (!(h > 0.0)) throw InvalidArgument("curvature: fd step must be positive");
  return (field(p.shifted(along, h), direction) - field(p.shifted(along, -h), direction)) /
         (2.0 * h);
}

}  // namespace

GeneratorField canonical_generator_field(const HamiltonianFamily& family,
                                         const SolveOptions& opts) {
  return [family, opts](const ParameterPoint& p, int direction) {
    return assemble_generator(solve_adiabatic_generator(family, p, direction, opts), p.t);
  };
}

GeneratorFieldPair canonical_field_pair(const HamiltonianFamily& family,
                                        const SolveOptions& opts) {
  GeneratorFieldPair fields;
  fields.k1 = [family, opts](const ParameterPoint& p, int direction) {
    return solve_adiabatic_generator(family, p, direction, opts).k1;
  };
  fields.k0 = [family, opts](const ParameterPoint& p, int direction) {
    return solve_adiabatic_generator(family, p, direction, opts).k0;
  };
  return fields;
}

GeneratorField spin_half_reference_field(const SpinHalfReferenceGenerators& gens) {
  return [gens](const ParameterPoint& p, int direction) {
    if (direction == 0) return gens.k_theta(p.q.at(0), p.q.at(1));
    if (direction == 1) return gens.k_phi(p.q.at(0), p.q.at(1));
    throw InvalidArgument("spin_half_reference_field: direction must be 0 or 1");
  };
}

double f_ti_component(const HamiltonianFamily& family, const ParameterPoint& p,
                      const GeneratorPair& pair, double t) {
  const Matrix h = family.evaluate(p);
  const Matrix dh = family.partial(p, pair.direction);
  const Matrix k = assemble_generator(pair, t);
  return (pair.k1 - dh - kI * commutator(k, h)).norm();
}

Matrix f_ij_matrix(const GeneratorField& field, const ParameterPoint& p, int i, int j,
                   double h) {
  const Matrix di_kj = central_difference(field, p, i, j, h);
  const Matrix dj_ki = central_difference(field, p, j, i, h);
  const Matrix ki = field(p, i);
  const Matrix kj = field(p, j);
  return di_kj - dj_ki - kI * commutator(kj, ki);
}

double f_ij_component(const GeneratorField& field, const ParameterPoint& p, int i, int j,
                      double h) {
  return f_ij_matrix(field, p, i, j, h).norm();
}

double f_ij_component(const HamiltonianFamily& family, const ParameterPoint& p, int i, int j,
                      double t, double h, const SolveOptions& opts) {
  check_pair_indices(family.n_params, i, j, "f_ij_component");
  ParameterPoint at = p;
  at.t = t;
  return f_ij_component(canonical_generator_field(family, opts), at, i, j, h);
}

std::vector<CrossRelationResidual> cross_relation_residuals(const GeneratorFieldPair& fields,
                                                            int n_params,
                                                            const ParameterPoint& p,
                                                            double h) {
  if (n_params < 2)
    throw InvalidArgument("cross_relation_residuals: needs at least two parameter directions");
  std::vector<CrossRelationResidual> out;
  for (int i = 0; i < n_params; ++i) {
    for (int j = i + 1; j < n_params; ++j) {
      const Matrix k1_i = fields.k1(p, i);
      const Matrix k1_j = fields.k1(p, j);
      const Matrix k0_i = fields.k0(p, i);
      const Matrix k0_j = fields.k0(p, j);
      const Matrix di_k1j = central_difference(fields.k1, p, i, j, h);
      const Matrix dj_k1i = central_difference(fields.k1, p, j, i, h);
      const Matrix di_k0j = central_difference(fields.k0, p, i, j, h);
      const Matrix dj_k0i = central_difference(fields.k0, p, j, i, h);

      CrossRelationResidual r;
      r.i = i;
      r.j = j;
      r.tterm = (di_k1j - dj_k1i - kI * commutator(k0_j, k1_i) + kI * commutator(k0_i, k1_j))
                    .norm();
      r.constterm = (di_k0j - dj_k0i - kI * commutator(k0_j, k0_i)).norm();
      out.push_back(r);
    }
  }
  return out;
}

std::vector<CrossRelationResidual> cross_relation_residuals(const HamiltonianFamily& family,
                                                            const ParameterPoint& p,
                                                            const GeneratorSet& set, double h,
                                                            const SolveOptions& opts) {
  if (static_cast<int>(set.pairs.size()) != family.n_params)
    throw InvalidArgument("cross_relation_residuals: set does not cover every direction");
  GeneratorFieldPair fields = canonical_field_pair(family, opts);
  // Use the already-solved values at p and the canonical field for stencils.
  GeneratorFieldPair mixed;
  mixed.k1 = [&fields, &set, p](const ParameterPoint& at, int direction) {
    if (at.q == p.q) return set.pairs.at(direction).k1;
    return fields.k1(at, direction);
  };
  mixed.k0 = [&fields, &set, p](const ParameterPoint& at, int direction) {
    if (at.q == p.q) return set.pairs.at(direction).k0;
    return fields.k0(at, direction);
  };
  return cross_relation_residuals(mixed, family.n_params, p, h);
}

CurvatureReport curvature_report(const HamiltonianFamily& family, const ParameterPoint& p,
                                 double t, double h, const SolveOptions& opts) {
  CurvatureReport report;
  report.at = p;
  report.t = t;
  report.fd_step = h;
  GeneratorSet set = solve_all_generators(family, p, opts);
  for (const GeneratorPair& pair : set.pairs)
    report.f_ti_norms.push_back(f_ti_component(family, p, pair, t));
  if (family.n_params >= 2) {
    report.f_ij = cross_relation_residuals(family, p, set, h, opts);
    for (int i = 0; i < family.n_params; ++i)
      for (int j = i + 1; j < family.n_params; ++j)
        report.f_ij_norms.push_back(f_ij_component(family, p, i, j, t, h, opts));
  }
  return report;
}

}  // namespace hsb
