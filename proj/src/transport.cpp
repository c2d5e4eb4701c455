#include "hsb/transport.hpp"

#include <cmath>

#include "hsb/integrate.hpp"

namespace hsb {

namespace {

const Complex kI(0.0, 1.0);

void check_state(const StateVector& state, const HamiltonianFamily& family) {
  if (state.amplitudes.size() != family.dim)
    throw DimensionMismatch("transport: state dimension does not match family");
  if (!state.amplitudes.allFinite() || state.amplitudes.norm() == 0.0)
    throw InvalidArgument("transport: state must be finite and nonzero");
}

}  // namespace

StateVector transport_time(const StateVector& state, const HamiltonianFamily& family,
                           double dt, int steps, const TransportOptions& opts) {
  check_state(state, family);
  if (steps < 1) throw InvalidArgument("transport_time: steps must be >= 1");
  StateVector out = state;
  if (dt == 0.0) return out;

  if (family.time_independent) {
    const Matrix u =
        matrix_exponential_propagator(family.evaluate(state.at), dt, ExpMethod::Auto,
                                      opts.solve);
    out.amplitudes = u * state.amplitudes;
  } else {
    auto rhs = [&](double t, const Vector& psi) {
      ParameterPoint p = state.at;
      p.t = t;
      return Vector(-kI * (family.evaluate(p) * psi));
    };
    out.amplitudes = rk4_integrate(state.amplitudes, state.at.t, state.at.t + dt, steps, rhs);
  }
  out.at.t = state.at.t + dt;
  return out;
}

StateVector transport_parameter(const StateVector& state, const HamiltonianFamily& family,
                                int direction, double dq, double t_fixed, int steps,
                                const TransportOptions& opts) {
  check_state(state, family);
  if (steps < 1) throw InvalidArgument("transport_parameter: steps must be >= 1");
  if (direction < 0 || direction >= family.n_params)
    throw InvalidArgument("transport_parameter: direction out of range");
  StateVector out = state;
  if (dq == 0.0) return out;

  const GeneratorField field =
      opts.field ? *opts.field : canonical_generator_field(family, opts.solve);
  const double q0 = state.at.q.at(direction);
  auto rhs = [&](double q, const Vector& psi) {
    ParameterPoint p = state.at;
    p.t = t_fixed;
    p.q[direction] = q;
    Matrix k;
    try {
      k = field(p, direction);
    } catch (const NonDiagonalizable&) {
      throw EPOnPath("transport_parameter: exceptional point on path at q = " +
                         std::to_string(q),
                     q);
    }
    return Vector(-kI * (k * psi));
  };
  out.amplitudes = rk4_integrate(state.amplitudes, q0, q0 + dq, steps, rhs);
  out.at.q[direction] = q0 + dq;
  return out;
}

StateVector transport_path(const StateVector& state, const HamiltonianFamily& family,
                           const BasePath& path, const TransportOptions& opts) {
  StateVector current = state;
  for (const PathSegment& seg : path.segments) {
    if (!std::isfinite(seg.delta))
      throw InvalidArgument("transport_path: segment displacement must be finite");
    if (seg.kind == PathSegment::Kind::Time)
      current = transport_time(current, family, seg.delta, path.steps_per_segment, opts);
    else
      current = transport_parameter(current, family, seg.direction, seg.delta, current.at.t,
                                    path.steps_per_segment, opts);
  }
  return current;
}

double loop_holonomy(const StateVector& state, const HamiltonianFamily& family,
                     const RectangleLoop& rect, int steps_per_leg,
                     const TransportOptions& opts) {
  auto leg = [&](const StateVector& s, int dir, double delta) {
    if (dir < 0) return transport_time(s, family, delta, steps_per_leg, opts);
    return transport_parameter(s, family, dir, delta, s.at.t, steps_per_leg, opts);
  };
  StateVector s = state;
  s = leg(s, rect.dir_a, rect.da);
  s = leg(s, rect.dir_b, rect.db);
  s = leg(s, rect.dir_a, -rect.da);
  s = leg(s, rect.dir_b, -rect.db);
  return (s.amplitudes - state.amplitudes).norm();
}

double generalized_norm(const StateVector& state, const Matrix& g) {
  return state.amplitudes.dot(g * state.amplitudes).real();
}

}  // namespace hsb
