#pragma once
// Lipschitz-hyperbolicity certification and fractal-dimension arithmetic for
// the rectangle return maps.
//
// The two-letter transition graph on four rectangle families has eight
// directed edges; each edge carries empirical derivative brackets for the
// branch of the return map defined on it and for the inverse branch.  From
// those brackets, cone-inclusion conditions and per-cycle contraction rates
// certify hyperbolicity, and bisection on elementwise powers of the rate
// matrices produces Hausdorff-dimension bounds for the non-wandering set.
// The module also carries the frozen linearizing matrices used by the
// hyperbolic-splitting check and the growth arithmetic of the free nilpotent
// Lie algebra that locates the attractor inside generic control families.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace vortex {

/// Empirical derivative brackets for one branch of the rectangle return map.
/// (u, v) are the expanding/contracting rectangle coordinates.  The first
/// block bounds the forward branch u' = U(u, v), v' = V(u, v); the second
/// bounds the inverse branch, whose expanding output is v and contracting
/// output is u.  All entries are magnitudes, rounded outward.
struct EdgeBounds {
  double ux_lo = 0;  ///< inf |dU/du|
  double ux_hi = 0;  ///< sup |dU/du|
  double uy_hi = 0;  ///< sup |dU/dv|
  double vy_lo = 0;  ///< inf |dV/dv|
  double vy_hi = 0;  ///< sup |dV/dv|
  double vx_hi = 0;  ///< sup |dV/du|
  double yv_lo = 0;  ///< inverse branch, inf |dv/dv'|
  double yv_hi = 0;  ///< inverse branch, sup |dv/dv'|
  double yu_hi = 0;  ///< inverse branch, sup |dv/du'|
  double xu_lo = 0;  ///< inverse branch, inf |du/du'|
  double xu_hi = 0;  ///< inverse branch, sup |du/du'|
  double xv_hi = 0;  ///< inverse branch, sup |du/dv'|
};

/// Directed edges (from, to) of the two-letter transition graph, in the row
/// order used by the bundled reference tables and by LipBounds::edges.
inline constexpr std::array<std::array<int, 2>, 8> kCertificateEdges{
    {{0, 0}, {2, 0}, {0, 1}, {2, 1}, {1, 2}, {3, 2}, {1, 3}, {3, 3}}};

/// Complete set of derivative brackets, one entry per transition-graph edge.
struct LipBounds {
  std::array<EdgeBounds, 8> edges{};

  /// Position of edge (from, to) in kCertificateEdges, or -1 if absent.
  static int edge_index(int from, int to);
  /// Bracket for edge (from, to); throws std::out_of_range on a non-edge.
  const EdgeBounds& at(int from, int to) const;
  EdgeBounds& at(int from, int to);
};

/// The bundled reference brackets for the eight return-map branches.
LipBounds reference_lip_bounds();

/// Reference cone openings: cone()[i] bounds |dv|/|du| on rectangle family
/// i for the forward branches, dual_cone()[i] bounds |du|/|dv| for the
/// inverse branches.  Every product cone[i]*dual_cone[i] is below one.
std::array<double, 4> reference_cone_openings();
std::array<double, 4> reference_dual_cone_openings();

/// Guaranteed (worst-case) contraction factor of a forward branch across the
/// stable cones, given the cone opening at the branch source.
double stable_rate(const EdgeBounds& e, double cone);
/// Best-case counterpart; always at most stable_rate for valid brackets.
double stable_rate_best(const EdgeBounds& e, double cone);
/// Guaranteed contraction factor of the inverse branch across the dual
/// cones, given the dual opening at the inverse-branch source (the edge
/// target).
double inverse_rate(const EdgeBounds& e, double dual_cone);
/// Best-case counterpart.
double inverse_rate_best(const EdgeBounds& e, double dual_cone);

/// Contraction data of one elementary cycle of the transition graph.
struct CycleRates {
  double rate = 0;       ///< product of guaranteed per-edge rates
  double rate_best = 0;  ///< product of best-case per-edge rates
  double exponent = 0;   ///< log(rate) / log(rate_best), in (0, 1]
};

/// Thrown by check_hyperbolicity when a certificate inequality fails; the
/// message names the first violated condition.
class CertificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A verified Lipschitz-hyperbolicity certificate: the cone openings and the
/// contraction rates of all six elementary cycles, for the forward branches
/// (stable family) and the inverse branches (unstable family).
struct HyperbolicityCert {
  std::array<double, 4> cone{};
  std::array<double, 4> dual_cone{};
  std::array<CycleRates, 6> stable{};
  std::array<CycleRates, 6> unstable{};
};

/// Verifies the cone-inclusion condition on every edge and the contraction
/// condition on every elementary cycle, then returns the assembled
/// certificate.  `slack` loosens the cone inclusion multiplicatively: the
/// bundled openings are rounded to three digits and need about 1e-3.
/// Throws CertificationError naming the first violated inequality, or
/// std::invalid_argument for malformed brackets.
HyperbolicityCert check_hyperbolicity(const LipBounds& bounds,
                                      const std::array<double, 4>& cone,
                                      const std::array<double, 4>& dual_cone,
                                      double slack = 1e-3);

/// Frozen published per-cycle rates.  They agree with the certificate
/// computed from reference_lip_bounds() to +-0.002 except on the first
/// unstable cycle (and four unstable exponents), whose published values are
/// not reproducible from the rounded brackets; the solvers keep the
/// published numbers so that downstream dimension bounds match.
std::array<CycleRates, 6> reference_stable_rates();
std::array<CycleRates, 6> reference_unstable_rates();

/// Smallest cone half-opening eps > 0 compatible with the hyperbolic
/// inclusion system for a branch with expansion at least `ux`, contraction
/// at most `vy` and cross-couplings at most `uy`, `vx`; std::nullopt when
/// the hypotheses (ux > 1 > vy and (ux-1)(1-vy) > uy*vx) fail.
std::optional<double> epsilon_feasible(double ux, double uy, double vx,
                                       double vy);

/// Spectral radius of a square nonnegative matrix by Collatz-Wielandt power
/// iteration, to 1e-12 relative.  Throws std::invalid_argument on negative
/// entries and std::runtime_error when the iteration stalls (reducible
/// matrices with distinct block radii).
double spectral_radius(const Eigen::MatrixXd& a);

/// Elementwise s-power: positive entries are raised to s, zeros stay zero.
Eigen::MatrixXd elementwise_power(const Eigen::MatrixXd& a, double s);

/// The unique s >= 0 with rho(elementwise_power(a, s)) = 1, by bisection on
/// [0, 10] (60 steps).  Requires the zero pattern of `a` to have spectral
/// radius above one and all positive entries below one; throws
/// std::domain_error when the bracket fails.
double solve_s(const Eigen::MatrixXd& a);

/// Per-edge rate matrices: `stable`/`stable_best` hold the forward rates at
/// (from, to), `unstable`/`unstable_best` the inverse rates at (to, from).
struct BoundMatrices {
  Eigen::Matrix4d stable;
  Eigen::Matrix4d stable_best;
  Eigen::Matrix4d unstable;
  Eigen::Matrix4d unstable_best;
};

/// Rate matrices assembled from the reference brackets, with the two
/// self-loop entries of each matrix replaced by the published cycle rates.
BoundMatrices reference_bound_matrices();

/// Closed interval [lo, hi].
struct Interval {
  double lo = 0;
  double hi = 0;
};

/// Hausdorff-dimension bounds derived from the reference certificate.
struct DimensionBounds {
  double s_stable = 0;         ///< solve_s on the guaranteed stable rates
  double s_stable_best = 0;    ///< ... on the best-case stable rates
  double s_unstable = 0;       ///< ... on the guaranteed inverse rates
  double s_unstable_best = 0;  ///< ... on the best-case inverse rates
  double exponent = 0;          ///< min cycle exponent, both families
  double exponent_unstable = 0; ///< min cycle exponent, unstable family
  Interval nonwandering;         ///< non-wandering set of the section map
  Interval forward_attractor;    ///< closure of the forward orbit set
  Interval suspended_nonwandering;  ///< nonwandering + 2 flow directions
  Interval suspended_attractor;     ///< forward_attractor + 2
};

/// Solves the four exponents and assembles the published dimension
/// intervals.
DimensionBounds dimension_bounds();

/// Cumulative dimensions, by bracket depth, of the free nilpotent Lie
/// algebra on `generators` generators truncated at `depth` (necklace
/// counts).  Throws std::invalid_argument outside generators >= 1,
/// 1 <= depth <= 30.
std::vector<std::int64_t> free_lie_growth(int generators, int depth);

/// Codimension of the four-dimensional model family inside the depth-five
/// free nilpotent approximation on three generators: the number of
/// independent perturbation directions in which the strange attractor
/// persists generically.
std::int64_t strange_attractor_codimension();

/// The sixteen frozen 6x6 linearizing matrices of the hyperbolic-splitting
/// check, keyed by two-step domain words "AA.AA" ... "CC.CC"; throws
/// std::out_of_range for an unknown key.
const Eigen::Matrix<double, 6, 6>& splitting_matrix(std::string_view domain);

/// The sixteen domain keys in canonical order.
const std::vector<std::string>& splitting_domains();

}  // namespace vortex
