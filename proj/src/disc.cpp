// Stratum chart.  For the tie stratum {psi_a = psi_b <= psi_c} in the
// gauge |psi|^2 + |phi|^2 = 1, the two chart coordinates determine the
// whole adjoint part: the tie level solves a quadratic whose positive
// discriminant is exactly the oblate-disc feasibility condition, and the
// stratum branch (third slot above the tied pair) picks the root that
// keeps the tied value non-positive.
#include "vortex/disc.hpp"

#include <cmath>
#include <stdexcept>

namespace vortex {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;
constexpr double kSqrt6 = 2.449489742783178;

void check_slots(int a, int b) {
  if (a < 0 || a > 2 || b < 0 || b > 2 || a == b)
    throw std::invalid_argument("tie pair must name two distinct slots");
}

}  // namespace

double gauge_factor(const State& s) {
  const double a = s.phi.squaredNorm();
  const double b = s.psi.squaredNorm();
  if (a + b <= 0.0) throw std::invalid_argument("adjoint part vanishes, chart undefined");
  // f(l) = a l^6 + b l^8 - 1 is strictly increasing for l > 0.
  double lo = 0.0, hi = 1.0;
  while (a * std::pow(hi, 6) + b * std::pow(hi, 8) < 1.0) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (a * std::pow(mid, 6) + b * std::pow(mid, 8) < 1.0 ? lo : hi) = mid;
    if (hi - lo <= 1e-17 * hi) break;
  }
  return 0.5 * (lo + hi);
}

namespace {

/// Cubic polynomial in the two chart coordinates with no constant term.
struct ChartCubic {
  double c10, c01, c20, c11, c02, c30, c21, c12, c03;

  double eval(double x, double y) const {
    return ((c30 * x + (c20 + c21 * y)) * x + (c10 + (c11 + c12 * y) * y)) * x +
           ((c03 * y + c02) * y + c01) * y;
  }
};

// Straightened coordinates of the partition rectangles.  The constants are
// load-bearing: the certified derivative brackets of the rectangle dynamics
// are stated in exactly these coordinates.
constexpr ChartCubic kXFirstThird = {3636.746266824261,  -4481.163862258486, 3855.150222649458,
                                     -9508.946041171987, 5858.268250499643,  1403.048095297728,
                                     -5062.144152379995, 6220.813348898283,  -2553.628003178778};
constexpr ChartCubic kXSecondFourth = {-434.858450049792, -1178.182552029670, -120.018213318585,
                                       1034.238125839267, 1197.949813776455,  294.581582485282,
                                       -56.750230435401,  -570.219924579354,  -401.871126962896};
constexpr double kXSecondFourthScale = 15.0;
constexpr ChartCubic kYFirstSecond = {3.239086633898,    -908.305710474105, -19.706205900010,
                                      -2.212072200027,   1018.022649246405, 6.183323553959,
                                      19.428876703623,   -1.286781359343,   -379.719994048579};
constexpr ChartCubic kYThirdFourth = {7714.46037676461,   57227.20693518666, -1394.23893421762,
                                      -16419.64632698288, -61359.76468135373, 68.70577470503,
                                      1493.59693767978,   8734.94321423633,   21935.18377642208};

}  // namespace

DiscPoint to_chi(const State& s, int tie_from, int tie_to) {
  check_slots(tie_from, tie_to);
  const int third = 3 - tie_from - tie_to;
  const double lambda = gauge_factor(s);
  const State g = scale_act(lambda, s);
  if (std::abs(g.psi[tie_from] - g.psi[tie_to]) > 1e-8)
    throw std::invalid_argument("point is off the tie stratum");
  if (g.psi[third] < g.psi[tie_from] - 1e-8)
    throw std::invalid_argument("third slot undercuts the tie, wrong stratum branch");
  return DiscPoint{0.5 * (g.phi[tie_from] - g.phi[tie_to]) - kSqrt3 * g.psi[tie_from],
                   std::sqrt(1.5) * g.phi[third], tie_from, tie_to};
}

State from_chi(const DiscPoint& p) {
  check_slots(p.tie_from, p.tie_to);
  const int third = 3 - p.tie_from - p.tie_to;
  const double oblate = 2.0 * p.chi1 * p.chi1 + p.chi2 * p.chi2;
  if (oblate > 1.0 + 1e-12)
    throw std::invalid_argument("chart point outside the oblate disc");
  const double w = std::sqrt(std::max(0.0, 1.0 - p.chi1 * p.chi1 - p.chi2 * p.chi2));
  const double tie = -(p.chi1 + w) / (2.0 * kSqrt3);
  const double half_gap = 0.5 * (p.chi1 - w);  // (phi_from - phi_to) / 2, never positive
  State s{};
  s.psi[p.tie_from] = tie;
  s.psi[p.tie_to] = tie;
  s.psi[third] = -2.0 * tie;
  s.phi[third] = std::sqrt(2.0 / 3.0) * p.chi2;
  s.phi[p.tie_from] = -p.chi2 / kSqrt6 + half_gap;
  s.phi[p.tie_to] = -p.chi2 / kSqrt6 - half_gap;
  return s;
}

std::array<double, 2> xy_coords(const DiscPoint& p, PartitionDomain domain) {
  switch (domain) {
    case PartitionDomain::B1:
      return {kXFirstThird.eval(p.chi1, p.chi2), kYFirstSecond.eval(p.chi1, p.chi2)};
    case PartitionDomain::B2:
      return {kXSecondFourthScale * kXSecondFourth.eval(p.chi1, p.chi2),
              kYFirstSecond.eval(p.chi1, p.chi2)};
    case PartitionDomain::B3:
      return {kXFirstThird.eval(p.chi1, p.chi2), kYThirdFourth.eval(p.chi1, p.chi2)};
    case PartitionDomain::B4:
      return {kXSecondFourthScale * kXSecondFourth.eval(p.chi1, p.chi2),
              kYThirdFourth.eval(p.chi1, p.chi2)};
  }
  throw std::invalid_argument("unknown partition rectangle");
}

}  // namespace vortex
