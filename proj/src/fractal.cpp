// Hyperbolicity certificates and dimension arithmetic.  A certificate is a
// finite list of inequalities: cone fields mapped strictly inside cone
// fields on every edge of the transition graph, and contraction-rate
// products below one on every elementary cycle.  Dimension bounds come from
// the unique exponent s at which the elementwise s-power of a rate matrix
// has unit spectral radius; that exponent is bisected, with the spectral
// radius bracketed by Collatz-Wielandt ratios.
#include "vortex/fractal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "vortex/graphs.hpp"

namespace vortex {

namespace {

// --- frozen reference data -------------------------------------------------

// Derivative brackets per edge, in kCertificateEdges order.  Forward block
// (ux_lo, ux_hi, uy_hi, vy_lo, vy_hi, vx_hi), then the inverse block
// (yv_lo, yv_hi, yu_hi, xu_lo, xu_hi, xv_hi).
constexpr std::array<EdgeBounds, 8> kReferenceBounds{{
    {21.0, 25.6, 0.57, 0.739, 0.792, 0.15,  //
     1.26, 1.36, 0.098, 0.039, 0.049, 0.37},
    {20.3, 22.4, 0.37, 0.4, 0.48, 0.14,  //
     2.09, 2.51, 0.16, 0.0444, 0.049, 0.045},
    {22.5, 34.0, 3.1, 0.72, 0.785, 0.5,  //
     1.342, 1.384, 0.0195, 0.029, 0.045, 0.18},
    {21.0, 25.0, 1.9, 0.4, 0.48, 0.07,  //
     2.1, 2.5, 0.0061, 0.04, 0.048, 0.2},
    {3.08, 3.28, 0.06, 0.07, 0.18, 0.06,  //
     5.6, 14.1, 0.25, 0.305, 0.323, 0.171},
    {3.11, 3.28, 0.09, 0.176, 0.19, 0.0591,  //
     5.3, 5.66, 0.0094, 0.303, 0.323, 0.151},
    {2.35, 2.9, 0.75, 0.1, 0.22, 0.1,  //
     5.0, 14.4, 0.4, 0.37, 0.394, 1.41},
    {2.3, 2.9, 0.8, 0.175, 0.21, 0.1,  //
     4.6, 5.6, 0.21, 0.364, 0.381, 1.55},
}};

constexpr std::array<double, 4> kConeOpenings{0.00743, 0.0225, 0.022, 0.0488};
constexpr std::array<double, 4> kDualConeOpenings{0.146, 0.321, 0.103, 0.374};

// Published per-cycle rates (rate, rate_best, exponent).
constexpr std::array<CycleRates, 6> kReferenceStableRates{{
    {0.797, 0.734, 0.739},
    {0.249, 0.137, 0.701},
    {0.0748, 0.0178, 0.643},
    {0.0238, 0.00462, 0.695},
    {0.0201, 0.00304, 0.674},
    {0.0883, 0.0271, 0.673},
}};
constexpr std::array<CycleRates, 6> kReferenceUnstableRates{{
    {0.0484, 0.0386, 0.931},
    {0.46, 0.288, 0.625},
    {0.000785, 0.000341, 0.895},
    {0.00829, 0.00294, 0.822},
    {0.000403, 0.0000864, 0.835},
    {0.0162, 0.0117, 0.927},
}};

constexpr std::array<const char*, 16> kSplittingNames = {
    "AA.AA", "AA.AC", "AA.CA", "AA.CC", "AC.AA", "AC.AC", "AC.CA", "AC.CC",
    "CA.AA", "CA.AC", "CA.CA", "CA.CC", "CC.AA", "CC.AC", "CC.CA", "CC.CC"};

// Row-major 6x6 linearizing-coordinate blocks, one per domain, same order.
constexpr std::array<std::array<double, 36>, 16> kSplittingData = {{
    {{
     -0.5913, -1.0677, 0.0683, 0.2937, -0.0114, 0.0316,
     0.0848, -1.3179, -0.9326, -0.6262, -0.0104, 0.0737,
     -0.0023, 0.6606, 0.2677, 0.7432, 0.4258, 0.2468,
     -0.2024, 0.8600, -0.7595, 0.9189, -1.5610, 0.7982,
     0.5347, -0.1061, 1.3964, 0.6468, 2.3193, -2.1665,
     -1.1822, 0.5279, -2.5279, -0.2730, -3.8024, 2.6844}},
    {{
     -0.3772, -0.6812, 0.0436, 0.1874, -0.0072, 0.0201,
     0.0603, -0.9371, -0.6631, -0.4452, -0.0074, 0.0524,
     -0.0016, 0.4697, 0.1903, 0.5285, 0.3028, 0.1755,
     -0.1439, 0.6115, -0.5401, 0.6534, -1.1101, 0.5675,
     0.3801, -0.0754, 0.9930, 0.4599, 1.6493, -1.5406,
     -0.8407, 0.3754, -1.7976, -0.1940, -2.7037, 1.9088}},
    {{
     -0.3971, -0.6704, 0.1033, 0.2038, 0.0053, -0.0444,
     0.1116, -0.2444, -0.2931, -0.2188, 0.0594, 0.0028,
     0.0819, 0.6562, 0.5188, 0.8690, 1.3697, 0.2361,
     -0.0770, 0.5547, -0.3887, 0.6313, -0.8937, 0.5253,
     0.2177, -0.0065, 0.6332, -0.1496, 1.2464, 0.3705,
     -0.1329, 0.0749, -0.4715, -0.2392, -0.9990, 0.9895}},
    {{
     -0.2941, -0.4965, 0.0765, 0.1509, 0.0039, -0.0329,
     0.1180, -0.2584, -0.3099, -0.2314, 0.0629, 0.0030,
     0.0865, 0.6937, 0.5485, 0.9186, 1.4479, 0.2496,
     -0.0815, 0.5864, -0.4109, 0.6674, -0.9447, 0.5552,
     0.2302, -0.0068, 0.6694, -0.1581, 1.3176, 0.3916,
     -0.1405, 0.0791, -0.4985, -0.2529, -1.0561, 1.0461}},
    {{
     -1.3472, -1.2301, 0.8883, 0.9348, -0.4362, -0.0239,
     0.1653, -1.7355, -1.7124, -0.5395, 0.6959, 0.2788,
     0.3610, 0.1926, 2.3424, -0.1152, 4.4150, -0.4106,
     -0.2216, 1.5281, -0.9719, 1.9245, -2.4828, 1.4865,
     1.7063, -1.3513, 3.2009, -1.9034, 4.1924, -0.2951,
     -0.4124, 0.3207, -1.2318, -0.1906, -2.4337, 2.6356}},
    {{
     -1.5370, -1.4034, 1.0134, 1.0666, -0.4977, -0.0273,
     0.1456, -1.5288, -1.5084, -0.4752, 0.6131, 0.2456,
     0.3180, 0.1697, 2.0633, -0.1015, 3.8890, -0.3616,
     -0.1951, 1.3460, -0.8561, 1.6952, -2.1869, 1.3094,
     1.5029, -1.1902, 2.8195, -1.6767, 3.6929, -0.2599,
     -0.3632, 0.2825, -1.0851, -0.1678, -2.1437, 2.3215}},
    {{
     -1.4918, -1.2360, 1.0849, 0.9744, -0.6000, -0.1150,
     -0.5929, 0.5930, 1.2489, 0.5188, -0.7829, -0.2039,
     0.2087, -2.0370, 0.9934, -2.4691, 2.5841, -1.8853,
     0.8390, 1.3864, 4.1958, 1.8630, 10.4128, 0.9577,
     1.8997, -0.1209, 6.1266, -1.0920, 12.6540, 3.2477,
     -0.5410, 0.3880, -1.7381, -0.6350, -3.6204, 3.9319}},
    {{
     -1.4492, -1.2008, 1.0539, 0.9467, -0.5829, -0.1117,
     -0.6064, 0.6066, 1.2774, 0.5307, -0.8008, -0.2085,
     0.2134, -2.0836, 1.0162, -2.5256, 2.6432, -1.9285,
     0.8583, 1.4182, 4.2918, 1.9056, 10.6511, 0.9796,
     1.9431, -0.1237, 6.2668, -1.1170, 12.9436, 3.3220,
     -0.5534, 0.3969, -1.7778, -0.6495, -3.7032, 4.0219}},
    {{
     -0.8312, -1.5009, 0.0960, 0.4129, -0.0159, 0.0445,
     0.1017, -1.5797, -1.1178, -0.7505, -0.0125, 0.0883,
     -0.0028, 0.7918, 0.3209, 0.8908, 0.5104, 0.2957,
     -0.2426, 1.0308, -0.9104, 1.1014, -1.8712, 0.9568,
     0.6409, -0.1272, 1.6739, 0.7752, 2.7801, -2.5969,
     -1.4171, 0.6327, -3.0301, -0.3272, -4.5577, 3.2177}},
    {{
     -0.5590, -1.0094, 0.0646, 0.2777, -0.0107, 0.0300,
     0.0284, -1.2522, -1.0645, -0.6260, -0.2454, 0.2924,
     0.0136, 0.5899, 0.2568, 0.6980, 0.4571, 0.2243,
     -0.1603, 0.7743, -0.6799, 0.8766, -1.3837, 0.6740,
     0.4698, 0.0295, 1.3318, 0.6845, 2.0995, -2.0201,
     -1.1106, 0.4685, -2.3717, -0.2692, -3.5420, 2.4780}},
    {{
     -0.6987, -1.1795, 0.1817, 0.3586, 0.0093, -0.0782,
     0.2866, -0.6276, -0.7527, -0.5620, 0.1527, 0.0072,
     0.2102, 1.6846, 1.3320, 2.2311, 3.5163, 0.6063,
     -0.1980, 1.4241, -0.9979, 1.6208, -2.2944, 1.3485,
     0.5591, -0.0166, 1.6256, -0.3841, 3.1999, 0.9511,
     -0.3412, 0.1922, -1.2105, -0.6143, -2.5648, 2.5404}},
    {{
     -0.5165, -0.8721, 0.1343, 0.2651, 0.0068, -0.0579,
     0.2310, -0.5057, -0.6066, -0.4529, 0.1230, 0.0059,
     0.1694, 1.3576, 1.0734, 1.7980, 2.8339, 0.4887,
     -0.1595, 1.1476, -0.8042, 1.3062, -1.8490, 1.0867,
     0.4506, -0.0134, 1.3100, -0.3096, 2.5789, 0.7664,
     -0.2750, 0.1549, -0.9756, -0.4950, -2.0670, 2.0473}},
    {{
     -1.7029, -1.5549, 1.1228, 1.1818, -0.5513, -0.0303,
     0.2242, -2.3541, -2.3229, -0.7318, 0.9440, 0.3782,
     0.4897, 0.2613, 3.1773, -0.1562, 5.9887, -0.5568,
     -0.3006, 2.0727, -1.3182, 2.6104, -3.3677, 2.0164,
     2.3143, -1.8329, 4.3417, -2.5818, 5.6867, -0.4003,
     -0.5593, 0.4349, -1.6709, -0.2585, -3.3011, 3.5749}},
    {{
     -2.1389, -1.9529, 1.4103, 1.4843, -0.6925, -0.0380,
     0.2145, -2.2524, -2.2225, -0.7003, 0.9032, 0.3618,
     0.4685, 0.2499, 3.0400, -0.1494, 5.7300, -0.5328,
     -0.2876, 1.9832, -1.2612, 2.4976, -3.2221, 1.9292,
     2.2144, -1.7536, 4.1542, -2.4703, 5.4411, -0.3829,
     -0.5352, 0.4161, -1.5988, -0.2473, -3.1585, 3.4205}},
    {{
     -2.1848, -1.8102, 1.5888, 1.4272, -0.8787, -0.1684,
     -0.9631, 0.3038, 0.8826, 0.2771, -2.6832, -1.3049,
     0.1995, -2.1397, 1.4883, -2.6630, 3.2584, -1.9360,
     0.9908, 1.4063, 4.5037, 1.9791, 11.6620, 0.8665,
     2.2134, -0.2631, 6.8269, -1.3631, 14.3844, 3.5996,
     -0.6009, 0.2926, -2.2588, -0.8628, -4.4148, 4.3259}},
    {{
     -1.8994, -1.5738, 1.3813, 1.2407, -0.7640, -0.1464,
     -0.6747, 0.6749, 1.4212, 0.5903, -0.8909, -0.2319,
     0.2374, -2.3179, 1.1304, -2.8096, 2.9404, -2.1454,
     0.9548, 1.5775, 4.7743, 2.1199, 11.8485, 1.0898,
     2.1615, -0.1375, 6.9713, -1.2427, 14.3987, 3.6954,
     -0.6155, 0.4415, -1.9777, -0.7225, -4.1196, 4.4740}},
}};

// --- helpers ----------------------------------------------------------------

std::string edge_name(int from, int to) {
  std::ostringstream os;
  os << from << "->" << to;
  return os.str();
}

void validate_entry(const EdgeBounds& e, int from, int to) {
  const bool ordered = e.ux_lo <= e.ux_hi && e.vy_lo <= e.vy_hi &&
                       e.yv_lo <= e.yv_hi && e.xu_lo <= e.xu_hi;
  const bool nonneg = e.ux_lo >= 0 && e.uy_hi >= 0 && e.vy_lo >= 0 &&
                      e.vx_hi >= 0 && e.yv_lo >= 0 && e.yu_hi >= 0 &&
                      e.xu_lo >= 0 && e.xv_hi >= 0;
  if (!ordered || !nonneg || e.ux_lo <= 0.0 || e.yv_lo <= 0.0)
    throw std::invalid_argument("malformed derivative bracket on edge " +
                                edge_name(from, to));
}

double checked_exponent(double rate, double rate_best, const char* family,
                        int cycle) {
  if (!(rate_best > 0.0) || !(rate_best < 1.0) || !(rate < 1.0)) {
    std::ostringstream os;
    os << "degenerate " << family << " rates on elementary cycle " << cycle + 1
       << ": rate=" << rate << " best=" << rate_best;
    throw CertificationError(os.str());
  }
  return std::log(rate) / std::log(rate_best);
}

}  // namespace

int LipBounds::edge_index(int from, int to) {
  for (std::size_t k = 0; k < kCertificateEdges.size(); ++k)
    if (kCertificateEdges[k][0] == from && kCertificateEdges[k][1] == to)
      return static_cast<int>(k);
  return -1;
}

const EdgeBounds& LipBounds::at(int from, int to) const {
  const int k = edge_index(from, to);
  if (k < 0)
    throw std::out_of_range("no transition-graph edge " + edge_name(from, to));
  return edges[static_cast<std::size_t>(k)];
}

EdgeBounds& LipBounds::at(int from, int to) {
  const int k = edge_index(from, to);
  if (k < 0)
    throw std::out_of_range("no transition-graph edge " + edge_name(from, to));
  return edges[static_cast<std::size_t>(k)];
}

LipBounds reference_lip_bounds() { return LipBounds{kReferenceBounds}; }

std::array<double, 4> reference_cone_openings() { return kConeOpenings; }

std::array<double, 4> reference_dual_cone_openings() {
  return kDualConeOpenings;
}

std::array<CycleRates, 6> reference_stable_rates() {
  return kReferenceStableRates;
}

std::array<CycleRates, 6> reference_unstable_rates() {
  return kReferenceUnstableRates;
}

double stable_rate(const EdgeBounds& e, double cone) {
  return (e.ux_lo * e.vy_hi + e.uy_hi * e.vx_hi) / (e.ux_lo - cone * e.uy_hi);
}

double stable_rate_best(const EdgeBounds& e, double cone) {
  return (e.ux_lo * e.vy_lo - e.uy_hi * e.vx_hi) / (e.ux_lo + cone * e.uy_hi);
}

double inverse_rate(const EdgeBounds& e, double dual_cone) {
  return (e.yv_lo * e.xu_hi + e.yu_hi * e.xv_hi) /
         (e.yv_lo - dual_cone * e.yu_hi);
}

double inverse_rate_best(const EdgeBounds& e, double dual_cone) {
  return (e.yv_lo * e.xu_lo - e.yu_hi * e.xv_hi) /
         (e.yv_lo + dual_cone * e.yu_hi);
}

HyperbolicityCert check_hyperbolicity(const LipBounds& bounds,
                                      const std::array<double, 4>& cone,
                                      const std::array<double, 4>& dual_cone,
                                      double slack) {
  if (slack < 0.0) throw std::invalid_argument("slack must be nonnegative");
  for (int i = 0; i < 4; ++i) {
    if (cone[i] < 0.0 || dual_cone[i] < 0.0)
      throw std::invalid_argument("cone openings must be nonnegative");
    if (cone[i] * dual_cone[i] >= 1.0) {
      std::ostringstream os;
      os << "cone opening product at vertex " << i
         << " is not below one: " << cone[i] * dual_cone[i];
      throw CertificationError(os.str());
    }
  }

  // Cone-inclusion condition on every edge: the forward branch must map the
  // stable cone at the source strictly inside the cone at the target, and
  // the inverse branch must do the same for the dual cones.
  for (const auto& [i, j] : kCertificateEdges) {
    const EdgeBounds& e = bounds.at(i, j);
    validate_entry(e, i, j);

    const double fwd_den = e.ux_lo - cone[i] * e.uy_hi;
    if (fwd_den <= 0.0) {
      std::ostringstream os;
      os << "cone-compatible expansion fails on edge " << edge_name(i, j)
         << ": " << e.ux_lo << " - " << cone[i] << "*" << e.uy_hi
         << " is not positive";
      throw CertificationError(os.str());
    }
    const double image = (cone[i] * e.vy_hi + e.vx_hi) / fwd_den;
    if (image > cone[j] * (1.0 + slack)) {
      std::ostringstream os;
      os << "cone inclusion fails on edge " << edge_name(i, j) << ": image "
         << image << " exceeds opening " << cone[j];
      throw CertificationError(os.str());
    }

    const double inv_den = e.yv_lo - dual_cone[j] * e.yu_hi;
    if (inv_den <= 0.0) {
      std::ostringstream os;
      os << "dual-cone-compatible expansion fails on edge " << edge_name(i, j)
         << ": " << e.yv_lo << " - " << dual_cone[j] << "*" << e.yu_hi
         << " is not positive";
      throw CertificationError(os.str());
    }
  }

  // Contraction condition on every elementary cycle, for both families.
  HyperbolicityCert cert;
  cert.cone = cone;
  cert.dual_cone = dual_cone;
  const auto& cycles = elementary_pair_cycles();
  for (std::size_t k = 0; k < cycles.size(); ++k) {
    const auto& cyc = cycles[k];
    double s_rate = 1.0, s_best = 1.0, u_rate = 1.0, u_best = 1.0;
    for (std::size_t step = 0; step + 1 < cyc.size(); ++step) {
      const int i = cyc[step], j = cyc[step + 1];
      const EdgeBounds& e = bounds.at(i, j);
      s_rate *= stable_rate(e, cone[i]);
      s_best *= stable_rate_best(e, cone[i]);
      u_rate *= inverse_rate(e, dual_cone[j]);
      u_best *= inverse_rate_best(e, dual_cone[j]);
    }
    if (s_rate >= 1.0 || u_rate >= 1.0) {
      std::ostringstream os;
      os << "elementary cycle " << k + 1
         << " is not contracting: stable rate " << s_rate
         << ", unstable rate " << u_rate;
      throw CertificationError(os.str());
    }
    cert.stable[k] = {s_rate, s_best,
                      checked_exponent(s_rate, s_best, "stable", int(k))};
    cert.unstable[k] = {u_rate, u_best,
                        checked_exponent(u_rate, u_best, "unstable", int(k))};
  }
  return cert;
}

std::optional<double> epsilon_feasible(double ux, double uy, double vx,
                                       double vy) {
  if (uy < 0.0 || vx < 0.0 || vy < 0.0)
    throw std::invalid_argument("derivative bounds must be nonnegative");
  if (!(ux > 1.0) || !(vy < 1.0)) return std::nullopt;
  if (!((ux - 1.0) * (1.0 - vy) > uy * vx)) return std::nullopt;
  if (uy == 0.0) {
    // Only the lower bound eps >= vx / (ux - vy) remains; it degenerates to
    // "any positive eps" when vx vanishes too.
    if (vx == 0.0) return std::min(ux - 1.0, 1.0 - vy);
    return vx / (ux - vy);
  }
  // With C = uy*eps the system reduces to C^2 - (ux - vy) C + uy*vx <= 0
  // plus strict caps C < min(ux - 1, 1 - vy, (ux - vy) / 2).  The smaller
  // quadratic root satisfies all of them whenever the hypotheses hold: the
  // discriminant dominates (2 - ux - vy)^2 by 4 ((ux-1)(1-vy) - uy*vx) > 0.
  const double spread = ux - vy;
  const double disc = spread * spread - 4.0 * uy * vx;
  const double root = 0.5 * (spread - std::sqrt(disc));
  return root / uy;
}

double spectral_radius(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw std::invalid_argument("spectral radius needs a nonempty square matrix");
  if ((a.array() < 0.0).any())
    throw std::invalid_argument("spectral radius needs a nonnegative matrix");
  const Eigen::Index n = a.rows();
  // Unshifted iteration: the matrices of interest carry self-loops, so an
  // irreducible pattern is already primitive and the Collatz-Wielandt
  // ratios close geometrically regardless of the entry scale (an identity
  // shift would drown matrices with tiny entries and stall at O(1/k)).
  Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
  for (int iter = 0; iter < 200000; ++iter) {
    const Eigen::VectorXd y = a * x;
    const double top = y.maxCoeff();
    if (top <= 0.0) return 0.0;  // iterate died: nilpotent direction
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (x[i] <= 0.0) continue;
      const double ratio = y[i] / x[i];
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    if (hi - lo <= 1e-12 * hi) return 0.5 * (lo + hi);
    x = y / top;
  }
  throw std::runtime_error(
      "spectral-radius iteration stalled; matrix is likely reducible");
}

Eigen::MatrixXd elementwise_power(const Eigen::MatrixXd& a, double s) {
  if ((a.array() < 0.0).any())
    throw std::invalid_argument("elementwise power needs a nonnegative matrix");
  Eigen::MatrixXd out = a;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      out(i, j) = a(i, j) > 0.0 ? std::pow(a(i, j), s) : 0.0;
  return out;
}

double solve_s(const Eigen::MatrixXd& a) {
  if ((a.array() >= 1.0).any())
    throw std::domain_error("rate matrix must have entries below one");
  if (spectral_radius(elementwise_power(a, 0.0)) <= 1.0)
    throw std::domain_error("zero pattern has spectral radius at most one");
  double lo = 0.0, hi = 10.0;
  if (spectral_radius(elementwise_power(a, hi)) >= 1.0)
    throw std::domain_error("spectral radius still at least one at s = 10");
  for (int step = 0; step < 60; ++step) {
    const double mid = 0.5 * (lo + hi);
    (spectral_radius(elementwise_power(a, mid)) > 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

BoundMatrices reference_bound_matrices() {
  const LipBounds bounds = reference_lip_bounds();
  BoundMatrices m{Eigen::Matrix4d::Zero(), Eigen::Matrix4d::Zero(),
                  Eigen::Matrix4d::Zero(), Eigen::Matrix4d::Zero()};
  for (const auto& [i, j] : kCertificateEdges) {
    const EdgeBounds& e = bounds.at(i, j);
    m.stable(i, j) = stable_rate(e, kConeOpenings[i]);
    m.stable_best(i, j) = stable_rate_best(e, kConeOpenings[i]);
    m.unstable(j, i) = inverse_rate(e, kDualConeOpenings[j]);
    m.unstable_best(j, i) = inverse_rate_best(e, kDualConeOpenings[j]);
  }
  // The published dimension solve keeps the published rates on the two
  // self-loop cycles; only the first unstable loop differs materially from
  // the bracket formulas.
  for (int v : {0, 3}) {
    const int k = v == 0 ? 0 : 1;
    m.stable(v, v) = kReferenceStableRates[k].rate;
    m.stable_best(v, v) = kReferenceStableRates[k].rate_best;
    m.unstable(v, v) = kReferenceUnstableRates[k].rate;
    m.unstable_best(v, v) = kReferenceUnstableRates[k].rate_best;
  }
  return m;
}

DimensionBounds dimension_bounds() {
  const BoundMatrices m = reference_bound_matrices();
  DimensionBounds out;
  out.s_stable = solve_s(m.stable);
  out.s_stable_best = solve_s(m.stable_best);
  out.s_unstable = solve_s(m.unstable);
  out.s_unstable_best = solve_s(m.unstable_best);

  double alpha = 1.0, alpha_unstable = 1.0;
  for (int k = 0; k < 6; ++k) {
    alpha = std::min({alpha, kReferenceStableRates[k].exponent,
                      kReferenceUnstableRates[k].exponent});
    alpha_unstable =
        std::min(alpha_unstable, kReferenceUnstableRates[k].exponent);
  }
  out.exponent = alpha;
  out.exponent_unstable = alpha_unstable;

  out.nonwandering = {(out.s_stable_best + out.s_unstable_best) * alpha,
                      out.s_stable + out.s_unstable};
  out.forward_attractor = {1.0 + alpha_unstable * out.s_unstable_best,
                           1.0 + out.s_unstable};
  out.suspended_nonwandering = {out.nonwandering.lo + 2.0,
                                out.nonwandering.hi + 2.0};
  out.suspended_attractor = {out.forward_attractor.lo + 2.0,
                             out.forward_attractor.hi + 2.0};
  return out;
}

std::vector<std::int64_t> free_lie_growth(int generators, int depth) {
  if (generators < 1) throw std::invalid_argument("need at least one generator");
  if (depth < 1 || depth > 30)
    throw std::invalid_argument("depth must be between 1 and 30");

  // Moebius function by trial factorization (arguments stay tiny).
  const auto moebius = [](int n) {
    int mu = 1;
    for (int p = 2; p * p <= n; ++p) {
      if (n % p != 0) continue;
      n /= p;
      if (n % p == 0) return 0;
      mu = -mu;
    }
    return n > 1 ? -mu : mu;
  };
  const auto power = [](std::int64_t base, int exp) {
    std::int64_t r = 1;
    for (int k = 0; k < exp; ++k) {
      if (r > std::numeric_limits<std::int64_t>::max() / base)
        throw std::overflow_error("free-Lie dimension overflows 64 bits");
      r *= base;
    }
    return r;
  };

  std::vector<std::int64_t> cumulative;
  cumulative.reserve(static_cast<std::size_t>(depth));
  std::int64_t total = 0;
  for (int n = 1; n <= depth; ++n) {
    std::int64_t homogeneous = 0;
    for (int d = 1; d <= n; ++d) {
      if (n % d != 0) continue;
      homogeneous += moebius(d) * power(generators, n / d);
    }
    total += homogeneous / n;
    cumulative.push_back(total);
  }
  return cumulative;
}

std::int64_t strange_attractor_codimension() {
  return free_lie_growth(3, 5).back() - 4;
}

const std::vector<std::string>& splitting_domains() {
  static const std::vector<std::string> keys(kSplittingNames.begin(),
                                             kSplittingNames.end());
  return keys;
}

const Eigen::Matrix<double, 6, 6>& splitting_matrix(std::string_view domain) {
  static const std::array<Eigen::Matrix<double, 6, 6>, 16> matrices = [] {
    std::array<Eigen::Matrix<double, 6, 6>, 16> out;
    for (std::size_t k = 0; k < out.size(); ++k)
      out[k] = Eigen::Map<const Eigen::Matrix<double, 6, 6, Eigen::RowMajor>>(
          kSplittingData[k].data());
    return out;
  }();
  for (std::size_t k = 0; k < matrices.size(); ++k)
    if (domain == kSplittingNames[k]) return matrices[k];
  throw std::out_of_range("unknown splitting domain " + std::string(domain));
}

}  // namespace vortex
