// Core vocabulary for the chattering-control laboratory: sum-zero triples,
// the admissible control triangle, the index-permutation action and the
// weighted scale action that the whole quotient construction is built on.
#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace vortex {

/// A barycentric vector: an element of the sum-zero plane in R^3.
/// All phase and adjoint blocks of the extended state are of this kind.
using BaryVec = Eigen::Vector3d;

/// Orthonormal basis of the sum-zero plane, used to pack states into
/// minimal coordinates (and back) for linear algebra.
inline const Eigen::Matrix<double, 3, 2>& sum_zero_basis() {
  static const Eigen::Matrix<double, 3, 2> b = [] {
    Eigen::Matrix<double, 3, 2> m;
    m.col(0) << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0.0;
    m.col(1) << 1.0 / std::sqrt(6.0), 1.0 / std::sqrt(6.0), -2.0 / std::sqrt(6.0);
    return m;
  }();
  return b;
}

/// Coordinates of a sum-zero triple in the orthonormal plane basis.
inline Eigen::Vector2d to_plane(const BaryVec& v) {
  return sum_zero_basis().transpose() * v;
}

/// Reconstruct a sum-zero triple from plane coordinates.
inline BaryVec from_plane(const Eigen::Vector2d& c) { return sum_zero_basis() * c; }

/// Vertex i (0-based) of the admissible control triangle: -2 in slot i,
/// +1 elsewhere.  Vertices have norm sqrt(6).
inline BaryVec vertex_control(int i) {
  BaryVec u = BaryVec::Ones();
  u[i] = -2.0;
  return u;
}

/// Midpoint control of the triangle edge joining vertices a and b:
/// -1/2 in slots a and b, +1 in the remaining slot.  This is the control
/// that drives motion inside a semi-singular (two-fold symmetric) plane.
inline BaryVec edge_midpoint_control(int a, int b) {
  BaryVec u = BaryVec::Ones();
  u[a] = -0.5;
  u[b] = -0.5;
  return u;
}

/// Pointwise minimiser of the adjoint selector.  `Vertex` means a unique
/// minimal component; `EdgeMidpoint` a two-fold tie (slots a, b); `Center`
/// a full three-fold tie, i.e. the selector vanishes entirely.
enum class ControlKind : std::uint8_t { Vertex, EdgeMidpoint, Center };

struct Control {
  ControlKind kind = ControlKind::Vertex;
  int a = 0;  ///< vertex index, or first index of the tied pair
  int b = 0;  ///< second index of the tied pair (EdgeMidpoint only)

  BaryVec value() const {
    switch (kind) {
      case ControlKind::Vertex: return vertex_control(a);
      case ControlKind::EdgeMidpoint: return edge_midpoint_control(a, b);
      case ControlKind::Center: return BaryVec::Zero();
    }
    throw std::logic_error("unreachable control kind");
  }

  bool operator==(const Control& o) const {
    if (kind != o.kind) return false;
    if (kind == ControlKind::Vertex) return a == o.a;
    if (kind == ControlKind::Center) return true;
    return (a == o.a && b == o.b) || (a == o.b && b == o.a);
  }
};

/// Feedback law: the active control minimises the selector component-wise.
/// Ties are detected relative to the magnitude of the selector so the rule
/// is scale-invariant; `tie_tol` is the relative tie threshold.
inline Control control_law(const BaryVec& psi, double tie_tol = 1e-10) {
  const double scale = psi.cwiseAbs().maxCoeff();
  if (scale == 0.0) return {ControlKind::Center, 0, 0};
  int imin = 0;
  for (int i = 1; i < 3; ++i)
    if (psi[i] < psi[imin]) imin = i;
  // Collect indices tied with the minimum at relative tolerance.
  std::array<int, 3> tied{};
  int n_tied = 0;
  for (int i = 0; i < 3; ++i)
    if (psi[i] - psi[imin] <= tie_tol * scale) tied[n_tied++] = i;
  if (n_tied >= 3) return {ControlKind::Center, 0, 0};
  if (n_tied == 2) return {ControlKind::EdgeMidpoint, tied[0], tied[1]};
  return {ControlKind::Vertex, imin, 0};
}

/// An element of the symmetric group on three indices, acting on sum-zero
/// triples by slot relabelling: apply(v)[i] = v[p[i]].
struct Permutation {
  std::array<int, 3> p{0, 1, 2};

  static Permutation identity() { return {}; }
  static Permutation transposition(int a, int b) {
    Permutation s;
    std::swap(s.p[a], s.p[b]);
    return s;
  }
  /// The 3-cycle sending slot content a<-b, b<-c, c<-a, i.e. p[a]=b etc.
  static Permutation cycle(int a, int b, int c) {
    Permutation s;
    s.p[a] = b;
    s.p[b] = c;
    s.p[c] = a;
    return s;
  }

  BaryVec apply(const BaryVec& v) const { return BaryVec(v[p[0]], v[p[1]], v[p[2]]); }

  /// Composition consistent with `apply`: apply(compose(f,g), v) ==
  /// apply(f, apply(g, v)).
  static Permutation compose(const Permutation& f, const Permutation& g) {
    Permutation r;
    for (int i = 0; i < 3; ++i) r.p[i] = g.p[f.p[i]];
    return r;
  }

  Permutation inverse() const {
    Permutation r;
    for (int i = 0; i < 3; ++i) r.p[p[i]] = i;
    return r;
  }

  bool is_identity() const { return p[0] == 0 && p[1] == 1 && p[2] == 2; }
  bool is_transposition() const {
    int fixed = 0;
    for (int i = 0; i < 3; ++i) fixed += (p[i] == i);
    return fixed == 1;
  }
  bool is_three_cycle() const {
    for (int i = 0; i < 3; ++i)
      if (p[i] == i) return false;
    return true;
  }
  /// Image of an index under the relabelling that `apply` realises on
  /// controls: apply(vertex_control(c)) == vertex_control(index_image(c)).
  int index_image(int c) const { return inverse().p[c]; }

  bool operator==(const Permutation& o) const { return p == o.p; }
};

/// Weights of the one-parameter scale action on the four state blocks.
/// Velocity-like block scales linearly, position quadratically, and the
/// two adjoint blocks cubically and quartically.
inline constexpr double kWeightX = 2.0;
inline constexpr double kWeightY = 1.0;
inline constexpr double kWeightPhi = 3.0;
inline constexpr double kWeightPsi = 4.0;

}  // namespace vortex
