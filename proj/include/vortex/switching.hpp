// Switch detection and the section return map.  An arc runs until its
// active control stops minimising the adjoint selector; the first such time
// is a root of a pair-difference quartic and is isolated with exact
// arithmetic so grazing contacts are classified, not missed.  Section
// points (states at the instant of switching, rescaled to the unit
// spheroid) carry the discrete data (from, to) of the switch, and the
// return map, its inverse and its differential act on them.
#pragma once

#include "vortex/arc.hpp"
#include "vortex/state.hpp"

#include <optional>
#include <stdexcept>

namespace vortex {

enum class EventKind {
  Switch,     ///< transversal two-fold tie: the control changes
  CenterHit,  ///< full three-fold tie: the selector vanishes entirely
  Tangency,   ///< grazing two-fold tie: the selector touches and retreats
  NoSwitch,   ///< no event up to the requested horizon
};

/// First event of an arc.  `other` is the index that ties with the active
/// one (for Switch, the new optimal index).
struct SwitchEvent {
  EventKind kind = EventKind::NoSwitch;
  double t = 0.0;
  int other = -1;
  State state;  ///< state at the event time
};

/// Detect the first event of the arc from `s0` under the active control,
/// scanning times in (t_lo, horizon].  `deflate` names indices whose
/// selector components are tied with the active one at t = 0 by
/// construction (the incoming switch partner, or all indices just after a
/// center crossing); their pair polynomials get an exactly zero constant
/// term so roundoff in the tie cannot spawn a spurious root at 0+.
/// Center (vanishing-selector) controls have no well-defined arc and are
/// rejected.
SwitchEvent next_switch(const State& s0, const Control& active, double horizon,
                        double t_lo = 0.0, std::optional<int> deflate_partner = std::nullopt,
                        bool deflate_all = false);

/// A point of the switching section: a state at the instant of a switch,
/// rescaled to mu = 1.  The selector satisfies psi[from] == psi[to] <=
/// psi[third]; the arc with control `from` just ended and the arc with
/// control `to` begins (equivalently phi[to] > phi[from]).
struct SectionPoint {
  State z;
  int from = 0;
  int to = 1;

  int third() const { return 3 - from - to; }
};

/// Outcome of one application of the section return map.
struct StepResult {
  EventKind kind = EventKind::NoSwitch;
  SectionPoint next;        ///< valid when kind == Switch
  double time = 0.0;        ///< arc time to the event, at source scale
  double rho = 0.0;         ///< mu ratio across the step (contraction factor)
  State crossing;           ///< state at a center hit, at source scale
  Control glued_out;        ///< continuation control at that crossing
  int tangencies = 0;       ///< grazing contacts skipped along the way
  int center_crossings = 0; ///< center crossings glued through
};

/// One application of the return map: flow the outgoing arc of `p` to its
/// first genuine switch.  Tangencies are recorded and skipped.  A center
/// hit stops the step and reports the crossing state together with the
/// control that continues the orbit through the center.
StepResult poincare_step(const SectionPoint& p, double horizon = 1e3);

/// Return map that glues through center crossings: on a CenterHit the orbit
/// is continued with the glued control until a regular switch lands it back
/// on the section (or `max_center` crossings are exceeded, which happens on
/// exactly symmetric states whose whole orbit chatters through the center).
StepResult glued_poincare_step(const SectionPoint& p, double horizon = 1e3,
                               int max_center = 64);

/// Inverse return map, realised by conjugating with the time reversal
/// involution.  `rho` reports the backward mu ratio (the reciprocal of the
/// forward ratio of the undone step).
StepResult poincare_inverse_step(const SectionPoint& p, double horizon = 1e3);

/// Backward variant of `glued_poincare_step`, same conjugation.
StepResult glued_poincare_inverse_step(const SectionPoint& p, double horizon = 1e3,
                                       int max_center = 64);

/// Flow a generic state (not necessarily on the section) to its first
/// switch and normalise.  The active control is read off the selector.
std::optional<SectionPoint> section_from_state(const State& s, double horizon = 1e3);

/// One return-map application together with the elapsed quotient time
/// (the arc time re-parametrised by 1/mu, which is invariant under the
/// scale action and additive along orbits).
struct QuotientReturn {
  SectionPoint next;
  double rho = 0.0;      ///< mu ratio across the step
  double delta_s = 0.0;  ///< quotient time of the arc
};

/// Quotient time of the arc from `s0` under control `u` over [0, t_end]:
/// the integral of 1/mu along the arc, by adaptive quadrature to relative
/// accuracy 1e-10.
double quotient_time(const State& s0, const Control& u, double t_end);

/// `poincare_step` plus the quotient time of the traversed arc.
QuotientReturn poincare_quotient(const SectionPoint& p, double horizon = 1e3);

/// Thrown when a step differential is requested at a non-transversal
/// crossing (the arrival stratum gradient annihilates the arc velocity).
struct DegenerateCrossing : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exact differential (packed 8x8) of the normalised return map at `p`,
/// given the already-computed step `r`: push tangents through the arc,
/// project onto the arrival stratum along the arc velocity, and correct for
/// the rescaling to the unit spheroid.  Maps the section tangent space
/// {stratum tie, mu level} at p.z onto the one at r.next.z.
Eigen::Matrix<double, 8, 8> poincare_step_differential(const SectionPoint& p,
                                                       const StepResult& r);

/// Orthonormal basis (packed columns) of the tangent space of the section
/// at p.z: the joint kernel of the tie differential d(psi[from]-psi[to])
/// and of d(mu).  Step differentials map this space onto the corresponding
/// space at the image point.
Eigen::Matrix<double, 8, 6> section_tangent_basis(const SectionPoint& p);

/// Symbol of a step in the two-letter alphabet of the switching order:
/// 't' when the switch returns to the index it came from, 'r' when it
/// advances to the third index.
inline char transition_type(const SectionPoint& before, const SectionPoint& after) {
  return after.to == before.from ? 't' : 'r';
}

}  // namespace vortex
