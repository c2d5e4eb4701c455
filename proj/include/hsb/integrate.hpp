#ifndef HSB_INTEGRATE_HPP
#define HSB_INTEGRATE_HPP

#include "hsb/errors.hpp"

namespace hsb {

/// Classic fixed-step 4th-order Runge-Kutta for Eigen-like states.
/// rhs(x, y) returns dy/dx; integrates y from x0 to x1 in `steps` equal steps.
template <class State, class Rhs>
State rk4_integrate(State y, double x0, double x1, int steps, Rhs&& rhs) {
  if (steps < 1) throw InvalidArgument("rk4_integrate: steps must be >= 1");
  const double h = (x1 - x0) / steps;
  double x = x0;
  for (int i = 0; i < steps; ++i) {
    const State k1 = rhs(x, y);
    const State k2 = rhs(x + 0.5 * h, State(y + 0.5 * h * k1));
    const State k3 = rhs(x + 0.5 * h, State(y + 0.5 * h * k2));
    const State k4 = rhs(x + h, State(y + h * k3));
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    x = x0 + (i + 1) * h;
  }
  return y;
}

}  // namespace hsb

#endif
