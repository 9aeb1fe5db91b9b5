#include "vortex/switching.hpp"

#include "vortex/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace vortex {

namespace {

// Fast in-bracket polish of a sign-changing root: bisection on the double
// polynomial.  The exact isolation already guarantees the bracket holds
// exactly one root, so double arithmetic is safe here.
double polish_root(const std::array<double, 5>& c, double lo, double hi) {
  auto eval = [&](double t) {
    return (((c[4] * t + c[3]) * t + c[2]) * t + c[1]) * t + c[0];
  };
  double flo = eval(lo), fhi = eval(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0 || (flo > 0) == (fhi > 0)) return 0.5 * (lo + hi);
  for (int i = 0; i < 120 && hi - lo > 0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = eval(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct PairRoot {
  double t = 0.0;     // polished root (bracket midpoint for grazing roots)
  double above = 0.0; // a time certified to lie at or beyond the root
  int other = -1;
  bool odd = true;
};

// Relative half-width of the band around zero inside which a double
// evaluation of a pair polynomial is treated as sign-ambiguous.  Horner
// roundoff is a few units of 1e-16 relative to the coefficient scale, so
// 1e-9 leaves seven orders of certification margin while keeping the
// exact-arithmetic fallback rare.
constexpr double kSignBand = 1e-9;

double poly_eval(const double* c, int deg, double t) {
  double v = c[deg];
  for (int k = deg - 1; k >= 0; --k) v = v * t + c[k];
  return v;
}

// Coefficient-magnitude scale of the evaluation at t, the natural yardstick
// for its roundoff.
double poly_mag(const double* c, int deg, double t) {
  const double a = std::abs(t);
  double v = std::abs(c[deg]);
  for (int k = deg - 1; k >= 0; --k) v = v * a + std::abs(c[k]);
  return v;
}

// In-bracket bisection between certified opposite signs; fills the root and
// a time certified to lie at or beyond it.
void bisect_root(const double* c, int deg, double lo, double hi, double flo,
                 std::array<double, 2>* out) {
  for (int i = 0; i < 120 && hi - lo > 0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = poly_eval(c, deg, mid);
    if (fm == 0.0) {
      (*out)[0] = mid;
      (*out)[1] = std::nextafter(hi, std::numeric_limits<double>::infinity());
      return;
    }
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  (*out)[0] = 0.5 * (lo + hi);
  (*out)[1] = std::nextafter(hi, std::numeric_limits<double>::infinity());
}

// All roots of the polynomial c[0..deg] in (lo, hi], appended in increasing
// order as (root, certified-beyond) pairs.  Works down the derivative tower
// so every interval between breakpoints is certified monotone; a value
// falling inside the ambiguity band (including a grazing extremum, a root
// at either end of the scan, or a sign too small to trust) aborts with
// false and the caller re-runs the exact isolation.
bool certified_roots(const double* c, int deg, double lo, double hi,
                     std::vector<std::array<double, 2>>* out) {
  while (deg > 0 && c[deg] == 0.0) --deg;
  if (deg == 0) return true;  // nonzero constant: no roots (zero was deflated upstream)

  std::vector<double> breaks{lo};
  if (deg > 1) {
    double d[4];
    for (int k = 0; k < deg; ++k) d[k] = c[k + 1] * (k + 1);
    std::vector<std::array<double, 2>> crit;
    if (!certified_roots(d, deg - 1, lo, hi, &crit)) return false;
    for (const auto& r : crit) breaks.push_back(r[0]);
  }
  breaks.push_back(hi);

  double fa = poly_eval(c, deg, breaks[0]);
  if (std::abs(fa) <= kSignBand * poly_mag(c, deg, breaks[0])) return false;
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    const double b = breaks[i];
    const double fb = poly_eval(c, deg, b);
    if (std::abs(fb) <= kSignBand * poly_mag(c, deg, b)) return false;
    if ((fa > 0) != (fb > 0)) {
      std::array<double, 2> root;
      bisect_root(c, deg, breaks[i - 1], b, fa, &root);
      out->push_back(root);
    }
    fa = fb;
  }
  return true;
}

// Double-precision fast path of the pair-root collection.  Factors the
// exact leading zeros planted by tie deflation, then isolates the remaining
// roots through certified sign patterns.  Returns false whenever a decision
// is too close to call in doubles; the exact path then re-runs the pair.
bool collect_roots_fast(const std::array<double, 5>& coeffs, int other, double t_lo,
                        double horizon, std::vector<PairRoot>* out) {
  for (double v : coeffs)
    if (!std::isfinite(v)) return false;  // let the exact path report it
  if (!(t_lo < horizon)) return true;     // empty scan window

  int m = 0;
  while (m < 5 && coeffs[m] == 0.0) ++m;
  if (m == 5) return true;  // identically tied pair: no event
  double q[5];
  const int deg = 4 - m;
  for (int k = 0; k <= deg; ++k) q[k] = coeffs[m + k];
  // Roots of t^m q(t) in (t_lo, horizon] with t_lo >= 0 are the roots of q
  // there; the deflated root at t = 0 is outside the half-open scan.
  std::vector<std::array<double, 2>> roots;
  if (!certified_roots(q, deg, t_lo, horizon, &roots)) return false;
  for (const auto& r : roots) out->push_back({r[0], r[1], other, true});
  return true;
}

// All roots of one pair-difference polynomial in (t_lo, horizon].
void collect_roots(const std::array<double, 5>& coeffs, int other, double t_lo, double horizon,
                   std::vector<PairRoot>* out) {
  if (collect_roots_fast(coeffs, other, t_lo, horizon, out)) return;

  std::vector<double> cv(coeffs.begin(), coeffs.end());
  const RPoly p = to_rational(cv);
  if (p.is_zero() || p.degree() < 1) return;  // identically tied pair: no event
  const auto roots =
      isolate_roots(p, rational_from_double(t_lo), rational_from_double(horizon),
                    rational_from_double(1e-13));
  for (const auto& r : roots) {
    const double lo = static_cast<double>(r.lo), hi = static_cast<double>(r.hi);
    const double t = r.odd_multiplicity ? polish_root(coeffs, lo, hi) : 0.5 * (lo + hi);
    // Casting the rational endpoint down must not re-expose the root.
    const double above = std::nextafter(hi, std::numeric_limits<double>::infinity());
    out->push_back({t, above, other, r.odd_multiplicity});
  }
}

bool is_center(const State& s) {
  const double m = mu(s);
  return s.psi.cwiseAbs().maxCoeff() < 1e-9 * m * m * m * m;
}

}  // namespace

SwitchEvent next_switch(const State& s0, const Control& active, double horizon, double t_lo,
                        std::optional<int> deflate_partner, bool deflate_all) {
  if (active.kind == ControlKind::Center)
    throw std::invalid_argument("arc with vanishing selector has no switching law");

  const Arc arc{s0, active.value()};
  std::vector<PairRoot> roots;

  auto add_pair = [&](int other, int base) {
    std::array<double, 5> c = arc.psi_pair_poly(other, base);
    if (deflate_all || (deflate_partner && *deflate_partner == other)) c[0] = 0.0;
    collect_roots(c, other, t_lo, horizon, &roots);
  };

  if (active.kind == ControlKind::Vertex) {
    for (int b = 0; b < 3; ++b)
      if (b != active.a) add_pair(b, active.a);
  } else {
    // Semi-singular arc: the pair (a, b) stays tied; events are the third
    // index joining the tie (which, with the sum-zero constraint, is a full
    // center hit) or the pair itself detaching through asymmetry.
    const int k = 3 - active.a - active.b;
    add_pair(k, active.a);
    add_pair(active.b, active.a);
  }

  if (roots.empty()) return {EventKind::NoSwitch, horizon, -1, arc.at(horizon)};
  std::sort(roots.begin(), roots.end(),
            [](const PairRoot& a, const PairRoot& b) { return a.t < b.t; });

  const PairRoot first = roots[0];
  SwitchEvent ev;
  ev.t = first.odd ? first.t : first.above;
  ev.other = first.other;
  ev.state = arc.at(first.t);
  if (!first.odd) {
    ev.kind = EventKind::Tangency;
  } else if (is_center(ev.state) ||
             (roots.size() > 1 && roots[1].t - first.t < 1e-12 * (1.0 + first.t))) {
    ev.kind = EventKind::CenterHit;
  } else {
    ev.kind = EventKind::Switch;
  }
  return ev;
}

namespace {

// Continue an arc (skipping tangencies) until a decisive event.  On a
// tangency the scan resumes just past the certified upper end of its
// isolation bracket, so the grazing root cannot be rediscovered.
SwitchEvent run_arc(const State& s, const Control& active, double horizon,
                    std::optional<int> deflate_partner, bool deflate_all, int* tangencies) {
  double t_lo = 0.0;
  for (;;) {
    SwitchEvent ev = next_switch(s, active, horizon, t_lo, deflate_partner, deflate_all);
    if (ev.kind != EventKind::Tangency) return ev;
    ++*tangencies;
    t_lo = ev.t;
  }
}

// Orient a two-fold tie: the outgoing index carries the larger phi
// component (its selector component is about to become the strict minimum).
SectionPoint oriented_section(const State& normalized, int a, int b) {
  if (normalized.phi[b] >= normalized.phi[a]) return {normalized, a, b};
  return {normalized, b, a};
}

StepResult step_impl(const SectionPoint& p, double horizon, int max_center) {
  StepResult res;
  State cur = p.z;
  Control active{ControlKind::Vertex, p.to, 0};
  std::optional<int> deflate = p.from;
  bool deflate_all = false;
  double elapsed = 0.0;

  for (;;) {
    const SwitchEvent ev =
        run_arc(cur, active, horizon - elapsed, deflate, deflate_all, &res.tangencies);
    res.time = elapsed + ev.t;
    if (ev.kind == EventKind::NoSwitch) {
      res.kind = EventKind::NoSwitch;
      return res;
    }
    if (ev.kind == EventKind::Switch) {
      res.kind = EventKind::Switch;
      res.rho = mu(ev.state) / mu(p.z);
      const int base = active.kind == ControlKind::Vertex ? active.a : active.b;
      res.next = oriented_section(normalize(ev.state), base, ev.other);
      return res;
    }
    // Center hit: either report it, or glue through and keep flowing.
    res.crossing = ev.state;
    res.glued_out = control_law(BaryVec(-ev.state.phi));
    ++res.center_crossings;
    res.kind = EventKind::CenterHit;
    if (res.center_crossings > max_center ||
        res.glued_out.kind == ControlKind::Center) return res;
    cur = ev.state;
    // Numerically the selector at the crossing is ~0 but not exact; pin the
    // tie so the continuation cannot see phantom roots at 0+.
    cur.psi = BaryVec::Zero();
    active = res.glued_out;
    deflate.reset();
    deflate_all = true;
    elapsed += ev.t;
  }
}

}  // namespace

StepResult poincare_step(const SectionPoint& p, double horizon) {
  return step_impl(p, horizon, /*max_center=*/0);
}

StepResult glued_poincare_step(const SectionPoint& p, double horizon, int max_center) {
  return step_impl(p, horizon, max_center);
}

namespace {

// Conjugate a forward step by the time-reversal involution.
StepResult reversed_step(const SectionPoint& p, double horizon, int max_center) {
  const SectionPoint rp{time_reversal(p.z), p.to, p.from};
  StepResult res = step_impl(rp, horizon, max_center);
  if (res.kind == EventKind::Switch) {
    res.next = SectionPoint{time_reversal(res.next.z), res.next.to, res.next.from};
  } else if (res.kind == EventKind::CenterHit) {
    res.crossing = time_reversal(res.crossing);
    res.glued_out = control_law(BaryVec(-res.crossing.phi));
  }
  return res;
}

}  // namespace

StepResult poincare_inverse_step(const SectionPoint& p, double horizon) {
  return reversed_step(p, horizon, 0);
}

StepResult glued_poincare_inverse_step(const SectionPoint& p, double horizon, int max_center) {
  return reversed_step(p, horizon, max_center);
}

std::optional<SectionPoint> section_from_state(const State& s, double horizon) {
  const Control c = control_law(s.psi);
  if (c.kind != ControlKind::Vertex) return std::nullopt;
  int tangencies = 0;
  const SwitchEvent ev = run_arc(s, c, horizon, std::nullopt, false, &tangencies);
  if (ev.kind != EventKind::Switch) return std::nullopt;
  return oriented_section(normalize(ev.state), c.a, ev.other);
}

Eigen::Matrix<double, 8, 8> poincare_step_differential(const SectionPoint& p,
                                                       const StepResult& r) {
  if (r.kind != EventKind::Switch || r.center_crossings > 0)
    throw std::invalid_argument("differential requires a regular single-arc switch step");

  const Arc arc{p.z, vertex_control(p.to)};
  const double t = r.time;
  const State arrive = arc.at(t);
  const State v = arc.velocity(t);

  // Arrival stratum tie: psi[l] - psi[m] = 0.
  const int l = r.next.from, m = r.next.to;
  auto alpha = [&](const State& w) { return w.psi[l] - w.psi[m]; };
  const double av = alpha(v);
  const double vn = state_norm(v);
  if (std::abs(av) < 1e-12 * vn)
    throw DegenerateCrossing("arc velocity tangent to the arrival stratum");

  const State zp = r.next.z;  // normalised arrival point
  Eigen::Matrix<double, 8, 8> out;
  for (int c = 0; c < 8; ++c) {
    Eigen::Matrix<double, 8, 1> e = Eigen::Matrix<double, 8, 1>::Zero();
    e[c] = 1.0;
    const State delta = unpack(e);
    // Exact variational flow, then projection along the velocity onto the
    // arrival tie, then the rescaling correction.
    const State w = Arc::differential(delta, t);
    const State proj = w - v * (alpha(w) / av);
    const State scaled = scale_act(1.0 / r.rho, proj);
    const State dn = scaled - euler_field(zp) * (mu_gradient_dot(arrive, proj) / r.rho);
    out.col(c) = pack(dn);
  }
  return out;
}

Eigen::Matrix<double, 8, 6> section_tangent_basis(const SectionPoint& p) {
  Eigen::Matrix<double, 2, 8> rows;
  for (int c = 0; c < 8; ++c) {
    Eigen::Matrix<double, 8, 1> e = Eigen::Matrix<double, 8, 1>::Zero();
    e[c] = 1.0;
    const State d = unpack(e);
    rows(0, c) = d.psi[p.from] - d.psi[p.to];
    rows(1, c) = mu_gradient_dot(p.z, d);
  }
  const Eigen::FullPivLU<Eigen::Matrix<double, 2, 8>> lu(rows);
  const Eigen::Matrix<double, 8, Eigen::Dynamic> kernel = lu.kernel();
  if (kernel.cols() != 6)
    throw std::invalid_argument("section constraints are degenerate at this point");
  const Eigen::Matrix<double, 8, 6> fixed = kernel;
  const Eigen::HouseholderQR<Eigen::Matrix<double, 8, 6>> qr(fixed);
  return qr.householderQ() * Eigen::Matrix<double, 8, 6>::Identity();
}

namespace {

// Adaptive Simpson quadrature with Richardson acceptance test.
double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double quotient_time(const State& s0, const Control& u, double t_end) {
  const Arc arc{s0, u.value()};
  const std::function<double(double)> f = [&](double t) { return 1.0 / mu(arc.at(t)); };
  const double fa = f(0.0), fm = f(0.5 * t_end), fb = f(t_end);
  const double whole = t_end / 6.0 * (fa + 4.0 * fm + fb);
  // Relative tolerance 1e-10 against the coarse estimate; the integrand is
  // smooth and positive away from the cone point, so the scale is reliable.
  const double tol = 1e-10 * std::abs(whole);
  return simpson_rec(f, 0.0, t_end, fa, fm, fb, whole, tol, 48);
}

QuotientReturn poincare_quotient(const SectionPoint& p, double horizon) {
  const StepResult r = poincare_step(p, horizon);
  if (r.kind != EventKind::Switch)
    throw std::invalid_argument("quotient step requires a regular switch return");
  return {r.next, r.rho, quotient_time(p.z, Control{ControlKind::Vertex, p.to, 0}, r.time)};
}

}  // namespace vortex
