#ifndef HSB_GENERATOR_HPP
#define HSB_GENERATOR_HPP

#include <vector>

#include "hsb/linalg.hpp"
#include "hsb/models.hpp"

namespace hsb {

/// Adiabatic-gauge evolution generator K_i(t) = t K1 + K0 for one parameter
/// direction. Satisfies [K1, H] = 0 and K1 = i [K0, H] + dH/dq_i.
struct GeneratorPair {
  Matrix k1;
  Matrix k0;
  int direction = 0;
  ParameterPoint at;
  /// Smallest eigenvalue gap entering the K0 denominators (inf if none).
  double min_gap = 0.0;
};

struct GeneratorSet {
  std::vector<GeneratorPair> pairs;
  ParameterPoint at;
};

struct GeneratorResiduals {
  std::vector<double> t_samples;
  /// || K1 - i [K(t), H] - dH || per sample (the K-equation residual).
  std::vector<double> k_equation;
  /// || [K1, H] || per sample (the adiabatic gauge-fixing condition).
  std::vector<double> gauge_condition;
};

/// Solve the algebraic adiabatic-gauge equations in the biorthonormal
/// eigenbasis. With D_mn = <chi_m| dH |psi_n> over eigenvalue clusters:
/// K1 is the intra-block part of D (the zero modes of [., H]); K0 has
/// inter-block entries -i D_mn / (h_m - h_n) and intra-block entries zero
/// (canonical residual gauge). Throws NonDiagonalizable at exceptional
/// points, where the denominators genuinely diverge.
GeneratorPair solve_adiabatic_generator(const HamiltonianFamily& family,
                                        const ParameterPoint& p, int direction,
                                        const SolveOptions& opts = {});

/// One canonical pair per parameter direction.
GeneratorSet solve_all_generators(const HamiltonianFamily& family, const ParameterPoint& p,
                                  const SolveOptions& opts = {});

/// K(t) = t K1 + K0.
Matrix assemble_generator(const GeneratorPair& pair, double t);

GeneratorResiduals generator_residuals(const HamiltonianFamily& family,
                                       const ParameterPoint& p, const GeneratorPair& pair,
                                       const std::vector<double>& t_samples);

/// Integrate dK/dt = i [K, H] + dH/dq_i from (p.t, K_initial) to t_final.
/// Works for time-dependent H as well; for time-independent H started from
/// the canonical K0 this reproduces assemble_generator.
Matrix integrate_generator_ode(const HamiltonianFamily& family, const ParameterPoint& p,
                               int direction, const Matrix& k_initial, double t_final,
                               int steps);

/// K0 -> K0 + delta for a delta commuting with H (block-diagonal in the
/// eigenbasis); K1 and both pair invariants are unchanged.
GeneratorPair apply_residual_gauge(const GeneratorPair& pair, const EigenSystem& es,
                                   const Matrix& delta, double tol = 1e-9);

}  // namespace hsb

#endif
