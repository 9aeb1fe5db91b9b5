// The slaved position layer over the adjoint chart.  Along the orbits that
// matter (the bounded funnel of the return dynamics) the position pair
// (x, y) is a graph over the adjoint pair (phi, psi): transversally to that
// graph the return map expands at rates that dominate every in-graph rate,
// so the graph value over a chart point is the unique (x, y) whose forward
// orbit stays pinned, and it is computed by shooting against an endpoint
// condition whose depth sets the accuracy.  All planar return dynamics
// (curve tracing, rectangle sampling, region classification) is built on
// these lifts.
#pragma once

#include "vortex/disc.hpp"
#include "vortex/switching.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace vortex {

/// A chart point lifted to the full phase space.  `state` is the gauge
/// representative (|psi|^2 + |phi|^2 = 1) over the chart coordinates of
/// `chi`, carrying the slaved position values; `depth` is the number of
/// forward returns pinned by the endpoint condition and `gap` the endpoint
/// residual of the accepted solve.
struct SheetPoint {
  DiscPoint chi;
  State state;
  int depth = 0;
  double gap = 0.0;
};

/// Tuning of the shadowing solve.  `depth` is the orbit-window length:
/// each extra return multiplies the transverse pinning by the single-step
/// expansion rate (roughly twenty), so the default pins (x, y) to the
/// double-precision floor.  Windows grow adaptively from whatever prefix
/// of the warm orbit survives, so a deep request is safe from any start.
struct LiftOptions {
  int depth = 12;        ///< forward returns in the pinning window
  double horizon = 1e3;  ///< per-arc switch horizon
  int max_newton = 16;   ///< window-growth rounds of the solve
  double tol = 1e-11;    ///< window residual accepted as converged
};

/// Raised when no pinned orbit of the requested depth exists over the chart
/// point (the point is outside the funnel, or continuation toward it broke
/// down).
struct SheetLiftError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Sheet value over a chart point.  With `warm` given (a solved nearby
/// point) the solve starts from its position values and continues across
/// the chart gap adaptively; otherwise it continues from the nearest of the
/// built-in cycle anchors.  Thread-safe; anchors are computed once.
SheetPoint lift_disc_point(const DiscPoint& chi, const LiftOptions& opt = {},
                           const SheetPoint* warm = nullptr);

/// The built-in anchors: the short self-similar cycles, whose switch points
/// are exact graph values.
const std::vector<SheetPoint>& sheet_anchors();

/// One planar return step of a lifted point.  Forward steps re-solve the
/// lift at the arrival point (the stepped position values are the warm
/// start), so chains of steps do not accumulate transverse error; backward
/// steps are self-correcting and re-chart the stepped state directly.
/// `letter` is the transition symbol of the traversed return ('r' or 't');
/// `centers` counts the gluings through the full-tie stratum.
struct DiscStep {
  SheetPoint point;
  char letter = '?';
  int centers = 0;
};
DiscStep disc_step_forward(const SheetPoint& p, const LiftOptions& opt = {});
DiscStep disc_step_backward(const SheetPoint& p, const LiftOptions& opt = {});

/// Section representative of a lifted point on the unit spheroid, the form
/// the return-map machinery acts on.
SectionPoint sheet_section(const SheetPoint& p);

/// Chart point of a section point (arrival-tie chart), for round trips
/// between the planar and the full dynamics.
inline DiscPoint section_chart(const SectionPoint& s) { return to_chi(s.z, s.from, s.to); }

}  // namespace vortex
