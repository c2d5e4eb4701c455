#ifndef HSB_TRANSPORT_HPP
#define HSB_TRANSPORT_HPP

#include <optional>
#include <vector>

#include "hsb/curvature.hpp"
#include "hsb/linalg.hpp"
#include "hsb/models.hpp"

namespace hsb {

struct StateVector {
  Vector amplitudes;
  ParameterPoint at;
};

struct PathSegment {
  enum class Kind { Time, Parameter };
  Kind kind = Kind::Time;
  int direction = 0;  // parameter index; ignored for time segments
  double delta = 0.0;
};

struct BasePath {
  std::vector<PathSegment> segments;
  int steps_per_segment = 1000;
};

/// Rectangle a -> b -> -a -> -b in the extended base space. Direction -1
/// means time, otherwise a parameter index.
struct RectangleLoop {
  int dir_a = -1;
  double da = 0.0;
  int dir_b = 0;
  double db = 0.0;
};

struct TransportOptions {
  SolveOptions solve;
  /// Generator field for parameter legs; defaults to the canonical gauge,
  /// re-solved at every integrator stage.
  std::optional<GeneratorField> field;
};

/// Integrate d|psi>/dt = -i H |psi>. Uses the closed-form propagator for
/// time-independent families, fixed-step RK4 otherwise.
StateVector transport_time(const StateVector& state, const HamiltonianFamily& family,
                           double dt, int steps, const TransportOptions& opts = {});

/// Integrate d|psi>/dq_i = -i K_i(t_fixed, q) |psi| along one parameter.
/// Converts NonDiagonalizable into EPOnPath with the offending location.
StateVector transport_parameter(const StateVector& state, const HamiltonianFamily& family,
                                int direction, double dq, double t_fixed, int steps,
                                const TransportOptions& opts = {});

StateVector transport_path(const StateVector& state, const HamiltonianFamily& family,
                           const BasePath& path, const TransportOptions& opts = {});

/// Transport around the closed rectangle and return ||psi_end - psi_start||.
double loop_holonomy(const StateVector& state, const HamiltonianFamily& family,
                     const RectangleLoop& rect, int steps_per_leg,
                     const TransportOptions& opts = {});

/// <psi| G |psi> (real part; the imaginary part vanishes for Hermitian G).
double generalized_norm(const StateVector& state, const Matrix& g);

}  // namespace hsb

#endif
