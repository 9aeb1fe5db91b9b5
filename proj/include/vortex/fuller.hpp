// Restriction of the dynamics to a two-fold symmetric (semi-singular)
// plane.  States symmetric under a pair transposition follow a scalar
// fourth-order chain whose control runs over a segment; the transverse
// (antisymmetric) component follows the same chain with a two-point relay.
// Both restrictions carry the classical self-similar chattering cycle, and
// the optimal adjoint of the scalar problem is evaluated by locating a
// phase point on the scaled cycle orbit.
#pragma once

#include "vortex/state.hpp"

#include <optional>

namespace vortex {

/// Orthonormal splitting of the sum-zero plane adapted to a pair (i, j):
/// `anti` flips sign under the transposition (i j), `sym` is invariant.
/// The sym axis is oriented so the edge-midpoint control of (i, j) has a
/// positive coordinate.
struct PairFrame {
  int i = 2, j = 0, k = 1;

  static PairFrame of_pair(int i, int j) {
    PairFrame f;
    f.i = i;
    f.j = j;
    f.k = 3 - i - j;
    return f;
  }

  double anti(const BaryVec& v) const { return (v[i] - v[j]) * M_SQRT1_2; }
  double sym(const BaryVec& v) const { return std::sqrt(1.5) * v[k]; }
  BaryVec from(double a, double s) const {
    BaryVec v = BaryVec::Zero();
    v[i] = a * M_SQRT1_2 - s / std::sqrt(6.0);
    v[j] = -a * M_SQRT1_2 - s / std::sqrt(6.0);
    v[k] = 2.0 * s / std::sqrt(6.0);
    return v;
  }
};

/// Scalar fourth-order chain x' = y, y' = u, phi' = x, psi' = -phi.
struct ScalarState {
  double x = 0, y = 0, phi = 0, psi = 0;
};

inline ScalarState scalar_flow(const ScalarState& s, double u, double t) {
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
  return {s.x + s.y * t + u * t2 / 2.0, s.y + u * t,
          s.phi + s.x * t + s.y * t2 / 2.0 + u * t3 / 6.0,
          s.psi - s.phi * t - s.x * t2 / 2.0 - s.y * t3 / 6.0 - u * t4 / 24.0};
}

inline ScalarState scalar_scale(double lambda, const ScalarState& s) {
  const double l2 = lambda * lambda;
  return {s.x * l2, s.y * lambda, s.phi * l2 * lambda, s.psi * l2 * l2};
}

/// Result of restricting a two-fold symmetric state to its scalar chain.
/// The admissible scalar control is the segment [u_lo, u_hi] obtained by
/// projecting the control triangle onto the symmetry axis: [-sqrt(6),
/// sqrt(6)/2], with the interior point 0 realised by a control mixture.
struct FullerRestriction {
  ScalarState state;
  double u_lo = 0, u_hi = 0;
  double residual = 0;  ///< norm of the discarded antisymmetric component
};

/// Restrict `s` to the symmetric plane of the pair (i, j).  The state need
/// not be exactly symmetric; the antisymmetric remainder is reported.
FullerRestriction fuller_restriction(const State& s, int i, int j);

/// Self-similar two-link chattering cycle of the scalar relay that switches
/// between controls u_plus (active while psi > 0) and u_minus (psi < 0).
/// The canonical switching state z0 has psi = 0 and first arc time 1; after
/// both arcs the orbit reproduces itself scaled by `lambda` in (0,1).
struct ScalarCycle {
  ScalarState z0;        ///< switching state, psi = 0, about to run u_plus
  double t1 = 1.0;       ///< first arc time (gauge-normalised to 1)
  double t2 = 0;         ///< second arc time
  double lambda = 0;     ///< per-period similarity ratio
  double u_plus = 0, u_minus = 0;
  double residual = 0;   ///< closure residual of the solved cycle

  double period() const { return t1 + t2; }
  /// State on the canonical cycle at phase tau in [0, period).
  ScalarState at(double tau) const;
};

/// Solve the two-link self-similar cycle for the given relay pair.  Returns
/// nullopt when no admissible cycle (positive times, lambda in (0,1), arcs
/// on consistent psi sides) exists.
std::optional<ScalarCycle> solve_scalar_cycle(double u_plus, double u_minus);

/// Optimal adjoint of the restricted problem: every phase point (x, y) not
/// at the origin lies on exactly one scaled cycle orbit; return the adjoint
/// pair (phi, psi) of that orbit point.  Fails only at the origin.
std::optional<ScalarState> restricted_adjoint(const ScalarCycle& cyc, double x, double y);

/// Phase location on the scaled cycle: scale sigma > 0 and phase tau with
/// scalar_scale(sigma, cyc.at(tau)) matching (x, y).
struct CyclePhase {
  double sigma = 0, tau = 0;
};
std::optional<CyclePhase> locate_on_cycle(const ScalarCycle& cyc, double x, double y);

}  // namespace vortex
