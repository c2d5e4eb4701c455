#ifndef HSB_OBSERVABLES_HPP
#define HSB_OBSERVABLES_HPP

#include <optional>
#include <vector>

#include "hsb/generator.hpp"
#include "hsb/linalg.hpp"
#include "hsb/metric.hpp"
#include "hsb/models.hpp"
#include "hsb/transport.hpp"

namespace hsb {

struct BerryRecord {
  int state_index = 0;
  std::vector<double> connection;                  // A_i per direction
  std::vector<std::pair<std::pair<int, int>, double>> curvature;  // Omega_ij per pair
  ParameterPoint at;
};

struct SusceptibilityRecord {
  int state_index = 0;
  Complex chi;
  double q = 0.0;       // coordinate along the scanned direction
  double gap_min = 0.0; // smallest eigenvalue gap used by the generator solve
};

/// Berry potential A_i^n = <psi_n| K_i |psi_n> for a Hermitian family,
/// evaluated at t = 0. Zero in the canonical gauge by construction; pass a
/// gauge-shifted pair to obtain the potential of a different eigenvector
/// convention. Throws for non-Hermitian families (use the dual variant).
double berry_connection(const HamiltonianFamily& family, const ParameterPoint& p,
                        int direction, int n,
                        const std::optional<GeneratorPair>& pair = std::nullopt,
                        const SolveOptions& opts = {});

/// Dual-state variant <chi_n| K_i |psi_n>, valid for any diagonalizable family.
Complex berry_connection_dual(const HamiltonianFamily& family, const ParameterPoint& p,
                              int direction, int n,
                              const std::optional<GeneratorPair>& pair = std::nullopt,
                              const SolveOptions& opts = {});

/// Berry curvature Omega_ij^n = i <<psi_n| [K_i(t), K_j(t)] |psi_n>> with dual
/// states. Independent of t and of the residual gauge; real for Hermitian
/// families. Requires level n to be nondegenerate.
Complex berry_curvature(const HamiltonianFamily& family, const ParameterPoint& p, int i,
                        int j, int n, double t = 0.0,
                        const std::optional<GeneratorSet>& set = std::nullopt,
                        const SolveOptions& opts = {});

/// (1 / 2 pi) sum Omega_theta_phi^n dtheta dphi over a midpoint grid covering
/// theta in (0, pi), phi in [0, 2 pi). Near-integer for closed bands.
double chern_number(const HamiltonianFamily& family, int n, int n_theta, int n_phi,
                    const SolveOptions& opts = {});

/// |<a|b>|^2 for normalized states.
double fidelity_hermitian(const StateVector& a, const StateVector& b);

/// Two-metric fidelity <<psi_n(q)|psi_n(q+eps)>> <<psi_n(q+eps)|psi_n(q)>>
/// with duals through the stationary metrics at q and q+eps.
Complex fidelity_generalized(const HamiltonianFamily& family, const ParameterPoint& p,
                             int direction, double eps, int n, const SolveOptions& opts = {});

/// chi_n = <<psi_n| K0^2 |psi_n>> - <<psi_n| K0 |psi_n>>^2 with dual states.
/// Time-independent and residual-gauge invariant; diverges at EPs. Pass a
/// gauge-shifted pair (and t) to check invariance explicitly.
SusceptibilityRecord fidelity_susceptibility(const HamiltonianFamily& family,
                                             const ParameterPoint& p, int direction, int n,
                                             double t = 0.0,
                                             const std::optional<GeneratorPair>& pair =
                                                 std::nullopt,
                                             const SolveOptions& opts = {});

/// Independent finite-epsilon estimate (1 - F_G(q, q+eps)) / eps^2.
/// Agrees with fidelity_susceptibility to O(eps).
Complex susceptibility_fd_oracle(const HamiltonianFamily& family, const ParameterPoint& p,
                                 int direction, int n, double eps,
                                 const SolveOptions& opts = {});

struct EpScanThresholds {
  double condition_number = 1e8;
  double chi_magnitude = 1e6;
};

struct EpScanCell {
  double q = 0.0;
  double gap_min = 0.0;
  double condition_number = 0.0;
  Complex chi;
  bool flagged = false;
  std::string reason;  // "cond", "chi", "nondiagonalizable" or empty
};

struct EpScanResult {
  std::vector<EpScanCell> cells;
  /// Maximal runs of flagged grid points, widened by half a grid step.
  std::vector<std::pair<double, double>> flagged_intervals;
};

/// Scan a 1-D parameter grid for exceptional-point signatures: eigenvector
/// condition number or |chi| beyond thresholds, or an outright solver failure.
EpScanResult ep_scan(const HamiltonianFamily& family, int direction, double q_min,
                     double q_max, int count, const EpScanThresholds& thresholds = {},
                     const ParameterPoint& base = {}, const SolveOptions& opts = {});

}  // namespace hsb

#endif
