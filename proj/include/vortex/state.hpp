// The extended state of the control system (position, velocity and the two
// adjoint blocks), the weighted scale action, the blow-up gauge `mu`, and
// packing helpers between states and flat 8-vectors.
#pragma once

#include "vortex/barycentric.hpp"

#include <cmath>

namespace vortex {

/// Full extended state.  Every block is a sum-zero triple.  The flow is
///   x' = y,  y' = u,  phi' = x,  psi' = -phi,
/// with `u` a constant admissible control along each arc.
struct State {
  BaryVec x = BaryVec::Zero();
  BaryVec y = BaryVec::Zero();
  BaryVec phi = BaryVec::Zero();
  BaryVec psi = BaryVec::Zero();

  State operator+(const State& o) const { return {x + o.x, y + o.y, phi + o.phi, psi + o.psi}; }
  State operator-(const State& o) const { return {x - o.x, y - o.y, phi - o.phi, psi - o.psi}; }
  State operator*(double c) const { return {x * c, y * c, phi * c, psi * c}; }
};

/// Weighted scale action: positions scale quadratically, velocities
/// linearly, the adjoint blocks cubically and quartically.  The action with
/// lambda = -1 realises time reversal.
inline State scale_act(double lambda, const State& s) {
  const double l2 = lambda * lambda;
  return {s.x * l2, s.y * lambda, s.phi * (l2 * lambda), s.psi * (l2 * l2)};
}

/// Time-reversal involution: conjugating the flow by this map and t -> -t
/// reproduces the flow with the same control.
inline State time_reversal(const State& s) { return {s.x, -s.y, -s.phi, s.psi}; }

/// Slot relabelling applied to every block.
inline State permute(const Permutation& sigma, const State& s) {
  return {sigma.apply(s.x), sigma.apply(s.y), sigma.apply(s.phi), sigma.apply(s.psi)};
}

/// Blow-up gauge: the unique weighted norm homogeneous of degree one under
/// the scale action,
///   mu = (|y|^24 + |x|^12 + |phi|^8 + |psi|^6)^(1/24).
inline double mu(const State& s) {
  const double ny = s.y.squaredNorm();   // |y|^2
  const double nx = s.x.squaredNorm();   // |x|^2
  const double nphi = s.phi.squaredNorm();
  const double npsi = s.psi.squaredNorm();
  const double p = std::pow(ny, 12) + std::pow(nx, 6) + std::pow(nphi, 4) + std::pow(npsi, 3);
  return std::pow(p, 1.0 / 24.0);
}

/// Radial projection onto the unit spheroid {mu = 1}.
inline State normalize(const State& s) {
  const double m = mu(s);
  return scale_act(1.0 / m, s);
}

/// A state on the unit spheroid, i.e. a representative of a scale-action
/// orbit.  Kept as a plain alias: the invariant mu(q) == 1 is maintained by
/// the operations that produce quotient points.
using QuotientPoint = State;

/// The Euler field of the scale action at `s` (derivative of
/// scale_act(lambda, s) at lambda = 1).  Spans the orbit direction that the
/// quotient projection removes.
inline State euler_field(const State& s) {
  return {s.x * kWeightX, s.y * kWeightY, s.phi * kWeightPhi, s.psi * kWeightPsi};
}

/// Gradient of mu as a linear functional evaluated on a tangent vector.
inline double mu_gradient_dot(const State& s, const State& v) {
  const double m = mu(s);
  const double ny = s.y.squaredNorm(), nx = s.x.squaredNorm();
  const double nphi = s.phi.squaredNorm(), npsi = s.psi.squaredNorm();
  // d(mu^24) = 24|y|^22 y.dy + 12|x|^10 x.dx + 8|phi|^6 phi.dphi + 6|psi|^4 psi.dpsi
  double d24 = 24.0 * std::pow(ny, 11) * s.y.dot(v.y) + 12.0 * std::pow(nx, 5) * s.x.dot(v.x) +
               8.0 * std::pow(nphi, 3) * s.phi.dot(v.phi) + 6.0 * std::pow(npsi, 2) * s.psi.dot(v.psi);
  return d24 / (24.0 * std::pow(m, 23));
}

/// Pack a state into flat coordinates (x, y, phi, psi blocks, each in the
/// orthonormal sum-zero plane basis).
inline Eigen::Matrix<double, 8, 1> pack(const State& s) {
  Eigen::Matrix<double, 8, 1> v;
  v.segment<2>(0) = to_plane(s.x);
  v.segment<2>(2) = to_plane(s.y);
  v.segment<2>(4) = to_plane(s.phi);
  v.segment<2>(6) = to_plane(s.psi);
  return v;
}

inline State unpack(const Eigen::Matrix<double, 8, 1>& v) {
  return {from_plane(v.segment<2>(0)), from_plane(v.segment<2>(2)), from_plane(v.segment<2>(4)),
          from_plane(v.segment<2>(6))};
}

inline double state_norm(const State& s) { return pack(s).norm(); }

/// Matrix of the slot relabelling `sigma` in packed coordinates.
inline Eigen::Matrix<double, 8, 8> packed_permutation_matrix(const Permutation& sigma) {
  Eigen::Matrix<double, 8, 8> m;
  for (int c = 0; c < 8; ++c) {
    Eigen::Matrix<double, 8, 1> e = Eigen::Matrix<double, 8, 1>::Zero();
    e[c] = 1.0;
    m.col(c) = pack(permute(sigma, unpack(e)));
  }
  return m;
}

}  // namespace vortex
