// Exact piecewise-polynomial flow between switches.  With a constant
// control the system integrates in closed form: y is affine in t, x
// quadratic, phi cubic and psi quartic.  Everything downstream (switch
// detection, differentials, cycle equations) is built on these monomials.
#pragma once

#include "vortex/state.hpp"

#include <array>

namespace vortex {

/// One integration arc with constant control `u` from initial state `s0`.
struct Arc {
  State s0;
  BaryVec u = BaryVec::Zero();

  /// Closed-form state at arc time t:
  ///   y(t)   = y0 + u t
  ///   x(t)   = x0 + y0 t + u t^2/2
  ///   phi(t) = phi0 + x0 t + y0 t^2/2 + u t^3/6
  ///   psi(t) = psi0 - phi0 t - x0 t^2/2 - y0 t^3/6 - u t^4/24
  State at(double t) const {
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
    State s;
    s.y = s0.y + u * t;
    s.x = s0.x + s0.y * t + u * (t2 / 2.0);
    s.phi = s0.phi + s0.x * t + s0.y * (t2 / 2.0) + u * (t3 / 6.0);
    s.psi = s0.psi - s0.phi * t - s0.x * (t2 / 2.0) - s0.y * (t3 / 6.0) - u * (t4 / 24.0);
    return s;
  }

  /// Time derivative of the flow at arc time t (the phase velocity).
  State velocity(double t) const {
    const State s = at(t);
    return {s.y, u, s.x, -s.phi};
  }

  /// Coefficients (constant first) of the quartic t -> psi_a(t) - psi_b(t).
  /// Exact in the binary values of the inputs; the switch detector isolates
  /// its roots with exact rational arithmetic.
  std::array<double, 5> psi_pair_poly(int a, int b) const {
    auto d = [&](const BaryVec& v) { return v[a] - v[b]; };
    return {d(s0.psi), -d(s0.phi), -d(s0.x) / 2.0, -d(s0.y) / 6.0, -d(u) / 24.0};
  }

  /// Push a tangent vector through the arc for time t (the control does not
  /// vary): the exact fundamental solution of the variational equations.
  static State differential(const State& v, double t) {
    const double t2 = t * t, t3 = t2 * t;
    State w;
    w.y = v.y;
    w.x = v.x + v.y * t;
    w.phi = v.phi + v.x * t + v.y * (t2 / 2.0);
    w.psi = v.psi - v.phi * t - v.x * (t2 / 2.0) - v.y * (t3 / 6.0);
    return w;
  }
};

/// Convenience: flow `s0` with control `u` for time t.
inline State flow(const State& s0, const BaryVec& u, double t) { return Arc{s0, u}.at(t); }

}  // namespace vortex
