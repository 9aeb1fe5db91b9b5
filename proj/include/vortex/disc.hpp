#pragma once
// Planar chart for a tie stratum of the switching surface.  Fixing the
// gauge |psi|^2 + |phi|^2 = 1 on a stratum {psi_a = psi_b <= psi_c} and
// projecting onto two adapted coordinates maps its scale quotient onto
// the oblate disc 2 chi1^2 + chi2^2 <= 1.  The planar return dynamics,
// the region geometry, and the rectangle coordinates of the
// hyperbolicity certificate all live in this chart.

#include <array>

#include "vortex/state.hpp"

namespace vortex {

/// Point of the planar stratum chart, tagged with its tie pair.
struct DiscPoint {
  double chi1 = 0.0;
  double chi2 = 0.0;
  int tie_from = 2;  ///< incoming tied slot (the smaller adjoint-velocity one)
  int tie_to = 0;    ///< outgoing tied slot
};

/// Scale factor moving a state onto the chart gauge |psi|^2 + |phi|^2 = 1.
/// Throws std::invalid_argument when the adjoint part vanishes.
double gauge_factor(const State& s);

/// Chart a point of the tie stratum {psi_a = psi_b <= psi_c}.  Any
/// representative of its scale ray works: the point is first rescaled to
/// the chart gauge |psi|^2 + |phi|^2 = 1 (the position part is slaved and
/// ignored).  Throws std::invalid_argument if the tie does not hold, the
/// third slot undercuts it, or the adjoint part vanishes.
DiscPoint to_chi(const State& s, int tie_from = 2, int tie_to = 0);

/// Reconstruct the gauge representative of a chart point: the tied pair
/// at the selector minimum, the third slot at the complementary value,
/// x = y = 0.  Throws std::invalid_argument outside the oblate disc.
State from_chi(const DiscPoint& p);

/// Rectangles of the pre-Markov partition that carry their own straightened
/// coordinates.
enum class PartitionDomain { B1, B2, B3, B4 };

/// Straightened rectangle coordinates (X, Y): fixed cubic polynomials in
/// the chart coordinates under which the certified derivative brackets of
/// the partition dynamics hold verbatim.  The first and third rectangles
/// share X, as do the second and fourth; the first two share Y, as do the
/// last two.
std::array<double, 2> xy_coords(const DiscPoint& p, PartitionDomain domain);

}  // namespace vortex
