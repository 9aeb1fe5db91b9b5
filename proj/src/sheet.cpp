// Sheet lifts.  Over a chart point the slaved position pair is the unique
// (x, y) whose forward orbit stays on the switching funnel.  Transversally
// to that graph the return map expands by a factor of roughly twenty per
// step while backward steps contract by the same factor, which dictates the
// two halves of the solver:
//
//  * a reference cloud of sheet samples is grown once by running long
//    backward orbits from the built-in cycle anchors (backward iteration is
//    self-correcting, so every sample sits on the sheet at machine
//    precision while the orbit sweeps the chart disc), queried through a
//    weighted local affine fit;
//  * a lift at a prescribed chart point builds the gauge state exactly on
//    chart, marches forward until its deviation from the cloud reference
//    becomes visible (the deviation doubles a few times per step, so the
//    horizon grows by one step for every digit gained), and applies a
//    Newton correction to the four position coordinates through the
//    composed one-step differentials.
//
// A finite forward window cannot detect the defect by residuals alone --
// any start generates a true orbit -- so the reference comparison is what
// turns escape into a signed, invertible measurement.
#include "vortex/sheet.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

#include "vortex/arc.hpp"
#include "vortex/cycles.hpp"

namespace vortex {

namespace {

using Vec4 = Eigen::Vector4d;
using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat66 = Eigen::Matrix<double, 6, 6>;
using Mat86 = Eigen::Matrix<double, 8, 6>;

/// Gauge representative over `chi` carrying position values `v` (plane
/// coordinates of x in the head, of y in the tail).
State gauge_state(const DiscPoint& chi, const Vec4& v) {
  State s = from_chi(chi);
  s.x = from_plane(v.head<2>());
  s.y = from_plane(v.tail<2>());
  return s;
}

Vec4 position_values(const State& s) {
  Vec4 v;
  v.head<2>() = to_plane(s.x);
  v.tail<2>() = to_plane(s.y);
  return v;
}

/// Relabel a state so that its tie pair (from, to) lands on the canonical
/// chart slots (2, 0).
State rechart_state(const State& s, int from, int to) {
  Permutation sig;
  sig.p = {to, 3 - from - to, from};
  return permute(sig, s);
}

/// Canonical chart coordinates and position values of a section point.
void read_point(const State& z, int from, int to, Eigen::Vector2d* chi, Vec4* v) {
  const State canon = rechart_state(z, from, to);
  const State g = scale_act(gauge_factor(canon), canon);
  const DiscPoint c = to_chi(g, 2, 0);
  *chi = Eigen::Vector2d(c.chi1, c.chi2);
  *v = position_values(g);
}

/// Slide a slightly off-section state back onto the exact tie along its
/// outgoing arc and rescale to the unit spheroid.  Perturbations used by
/// the difference stencils break the tie only at second order, so a couple
/// of Newton steps on the arc polynomial recover it to machine precision.
SectionPoint resection(const State& z, int from, int to) {
  const Arc arc{z, vertex_control(to)};
  const auto poly = arc.psi_pair_poly(from, to);
  double t = 0.0;
  for (int it = 0; it < 3; ++it) {
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
    const double g = poly[0] + poly[1] * t + poly[2] * t2 + poly[3] * t3 + poly[4] * t4;
    const double dg = poly[1] + 2.0 * poly[2] * t + 3.0 * poly[3] * t2 + 4.0 * poly[4] * t3;
    if (dg == 0.0) break;
    t -= g / dg;
  }
  return SectionPoint{normalize(arc.at(t)), from, to};
}

/// One-step differential in the section tangent bases, exact where the
/// route is clean, by central differences through glued crossings.
bool step_matrix(const SectionPoint& p, const StepResult& r, const Mat86& basis_src,
                 const Mat86& basis_dst, const LiftOptions& opt, Mat66* m) {
  if (r.center_crossings == 0) {
    try {
      *m = basis_dst.transpose() * poincare_step_differential(p, r) * basis_src;
      return true;
    } catch (const DegenerateCrossing&) {
      // fall through to differences
    }
  }
  constexpr double kH = 1e-7;
  const Vec8 z = pack(p.z);
  for (int c = 0; c < 6; ++c) {
    try {
      const SectionPoint hi = resection(unpack(z + kH * basis_src.col(c)), p.from, p.to);
      const SectionPoint lo = resection(unpack(z - kH * basis_src.col(c)), p.from, p.to);
      const StepResult rh = glued_poincare_step(hi, opt.horizon);
      const StepResult rl = glued_poincare_step(lo, opt.horizon);
      if (rh.kind != EventKind::Switch || rl.kind != EventKind::Switch) return false;
      if (rh.next.from != r.next.from || rh.next.to != r.next.to ||
          rl.next.from != r.next.from || rl.next.to != r.next.to)
        return false;  // route flips within the difference stencil
      m->col(c) = basis_dst.transpose() * ((pack(rh.next.z) - pack(rl.next.z)) / (2.0 * kH));
    } catch (const std::exception&) {
      return false;
    }
  }
  return true;
}

/// Machine-quality sheet samples accumulated within a single lift call: the
/// walk's own solved heads and their forward return reads.  They sharpen the
/// local reference around the walk so each new target enters the level
/// solver already inside its tractable range, and they live only for the
/// duration of the call, keeping results independent of thread scheduling.
struct SheetOverlay {
  std::vector<Eigen::Vector2d> chi;
  std::vector<Vec4> v;

  void add(const Eigen::Vector2d& c, const Vec4& val) {
    constexpr std::size_t kCap = 512;
    if (chi.size() >= kCap) return;
    chi.push_back(c);
    v.push_back(val);
  }
};

/// Reference samples of the sheet with a local affine interpolator.  Built
/// once, deterministically, from long backward orbits: nudging a cycle
/// anchor slightly and iterating the inverse return map contracts the
/// transverse error at the expansion rate (so every point is a sheet sample
/// at machine precision) while the in-sheet backward dynamics carries the
/// orbit chaotically across the whole chart disc.
class SheetCloud {
 public:
  struct Fit {
    Vec4 value;                      ///< interpolated position values at the query
    Eigen::Matrix<double, 4, 2> slope;  ///< local chart gradient of the values
    double spacing = 0.0;            ///< radius of the neighbour set used
  };

  static const SheetCloud& instance() {
    static const SheetCloud cloud;
    return cloud;
  }

  Fit fit_at(const Eigen::Vector2d& chi, const SheetOverlay* overlay = nullptr) const {
    constexpr int kNeighbours = 24;
    constexpr double kBoost = 16.0;  // weight multiplier for overlay samples

    // Candidate indices from expanding bucket rings (one spare ring past the
    // first hits so true nearest neighbours cannot hide diagonally), plus
    // every overlay sample at a flattering adjusted distance.
    std::vector<std::pair<double, int>> near;
    near.reserve(192);
    const int cx = cell_of(chi[0]);
    const int cy = cell_of(chi[1]);
    int stop = -1;
    for (int ring = 0; ring < kGrid && (stop < 0 || ring <= stop); ++ring) {
      for (int dx = -ring; dx <= ring; ++dx) {
        for (int dy = -ring; dy <= ring; ++dy) {
          if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
          const int bx = cx + dx;
          const int by = cy + dy;
          if (bx < 0 || bx >= kGrid || by < 0 || by >= kGrid) continue;
          for (const int idx : buckets_[bx * kGrid + by])
            near.emplace_back((chi_[idx] - chi).squaredNorm(), idx);
        }
      }
      if (stop < 0 && static_cast<int>(near.size()) >= 2 * kNeighbours) stop = ring + 1;
    }
    if (overlay != nullptr) {
      const int m = static_cast<int>(overlay->chi.size());
      for (int k = 0; k < m; ++k)
        near.emplace_back((overlay->chi[k] - chi).squaredNorm() / kBoost, -k - 1);
    }
    const int take = std::min<int>(kNeighbours, static_cast<int>(near.size()));
    std::partial_sort(near.begin(), near.begin() + take, near.end());
    near.resize(take);

    double r2 = 0.0;
    for (const auto& [d2, code] : near) r2 = std::max(r2, d2);
    const double soft = std::max(0.25 * r2, 1e-12);

    // Ridge rows keep the slope tame when the neighbours line up along an
    // orbit trace; they perturb the interpolated value only at second
    // order in the neighbourhood radius.
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(take + 2, 3);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(take + 2, 4);
    double wmax = 0.0;
    for (int k = 0; k < take; ++k) {
      const auto& [d2, code] = near[k];
      const double w = 1.0 / (d2 + soft);
      wmax = std::max(wmax, w);
      const Eigen::Vector2d point =
          code >= 0 ? chi_[code] : overlay->chi[-code - 1];
      const Vec4& val = code >= 0 ? v_[code] : overlay->v[-code - 1];
      const Eigen::Vector2d d = point - chi;
      a.row(k) << w, w * d[0], w * d[1];
      b.row(k) = w * val.transpose();
    }
    const double ridge = 1e-4 * wmax * std::sqrt(soft);
    a(take, 1) = ridge;
    a(take + 1, 2) = ridge;
    const Eigen::Matrix<double, 3, 4> coef = a.colPivHouseholderQr().solve(b);
    Fit f;
    f.value = coef.row(0).transpose();
    f.slope = coef.bottomRows<2>().transpose();
    f.spacing = std::sqrt(r2);
    return f;
  }

 private:
  SheetCloud() {
    const LiftOptions opt;
    constexpr int kBurnIn = 12;
    constexpr int kKeep = 2500;
    constexpr double kThin = 3e-4;  // skip samples crowding the previous one
    for (const SheetPoint& a : sheet_anchors()) {
      for (const double sign : {1.0, -1.0}) {
        Vec4 v = position_values(a.state);
        v += sign * 1e-4 * Vec4(1.0, -0.3, 0.4, 0.7);
        State g = gauge_state(a.chi, v);
        const double m = mu(g);
        if (!(m > 0.0) || !std::isfinite(m)) continue;
        SectionPoint p{scale_act(1.0 / m, g), a.chi.tie_from, a.chi.tie_to};
        int kept = 0;
        try {
          for (int j = 0; kept < kKeep && j < 8 * kKeep; ++j) {
            const StepResult r = glued_poincare_inverse_step(p, opt.horizon);
            if (r.kind != EventKind::Switch || !pack(r.next.z).allFinite()) break;
            p = r.next;
            if (j < kBurnIn) continue;
            Eigen::Vector2d chi;
            Vec4 vals;
            read_point(p.z, p.from, p.to, &chi, &vals);
            if (!chi_.empty() && (chi_.back() - chi).norm() < kThin) continue;
            chi_.push_back(chi);
            v_.push_back(vals);
            ++kept;
          }
        } catch (const std::exception&) {
          // keep whatever the orbit produced before breaking
        }
      }
    }
    buckets_.resize(kGrid * kGrid);
    for (int i = 0; i < static_cast<int>(chi_.size()); ++i)
      buckets_[cell_of(chi_[i][0]) * kGrid + cell_of(chi_[i][1])].push_back(i);
    if (std::getenv("VORTEX_SHEET_DEBUG"))
      std::fprintf(stderr, "[cloud] %zu points\n", chi_.size());
  }

  static constexpr int kGrid = 44;

  static int cell_of(double x) {
    const int c = static_cast<int>((x + 1.1) * (kGrid / 2.2));
    return std::clamp(c, 0, kGrid - 1);
  }

  std::vector<Eigen::Vector2d> chi_;
  std::vector<Vec4> v_;
  std::vector<std::vector<int>> buckets_;
};

/// Tangent-basis coordinates of the four unit position perturbations of the
/// head gauge state (central differences through the normalisation).
Eigen::Matrix<double, 6, 4> head_columns(const DiscPoint& chi, const Vec4& v,
                                         const Mat86& basis) {
  constexpr double kH = 1e-7;
  Eigen::Matrix<double, 6, 4> c;
  for (int k = 0; k < 4; ++k) {
    Vec4 hi = v, lo = v;
    hi[k] += kH;
    lo[k] -= kH;
    const State sh = normalize(gauge_state(chi, hi));
    const State sl = normalize(gauge_state(chi, lo));
    c.col(k) = basis.transpose() * ((pack(sh) - pack(sl)) / (2.0 * kH));
  }
  return c;
}

/// Differential of the deviation measurement at a marched point: how the
/// measured (values - reference) responds to tangent motions of the point.
/// Motions along the sheet move the values and the reference together, so
/// this read annihilates the sheet tangent and isolates the transverse
/// part.
Eigen::Matrix<double, 4, 6> deviation_read(const SectionPoint& p, const Mat86& basis,
                                           const SheetCloud::Fit& fit,
                                           const Eigen::Vector2d& chi0) {
  constexpr double kH = 1e-6;
  Eigen::Matrix<double, 4, 6> r;
  const Vec8 z = pack(p.z);
  for (int c = 0; c < 6; ++c) {
    Eigen::Vector2d chi_hi, chi_lo;
    Vec4 v_hi, v_lo;
    read_point(unpack(z + kH * basis.col(c)), p.from, p.to, &chi_hi, &v_hi);
    read_point(unpack(z - kH * basis.col(c)), p.from, p.to, &chi_lo, &v_lo);
    const Vec4 dev_hi = v_hi - (fit.value + fit.slope * (chi_hi - chi0));
    const Vec4 dev_lo = v_lo - (fit.value + fit.slope * (chi_lo - chi0));
    r.col(c) = (dev_hi - dev_lo) / (2.0 * kH);
  }
  return r;
}

/// One record per completed return of a forward march: the section point,
/// the step differentials composed back to the head, and the deviation of
/// the values read there from the cloud reference.
struct Meas {
  SectionPoint q;
  Mat86 basis;
  Mat66 chain;
  SheetCloud::Fit fit;
  Eigen::Vector2d chi;
  Vec4 dev;
};

struct March {
  Eigen::Matrix<double, 6, 4> head;
  std::vector<Meas> meas;
};

/// March forward from the on-chart head defined by (chi, v), recording a
/// measurement at every return.  Stops at `cap` returns, at the first broken
/// or escaped step, or once the deviation grows past the point where the
/// route itself is in doubt.
bool march_from(const DiscPoint& chi, const Vec4& v, int cap, const LiftOptions& opt,
                const SheetOverlay* overlay, March* out) {
  constexpr double kBlown = 50.0;  // beyond this the head is not a candidate at all
  State g = gauge_state(chi, v);
  const double m0 = mu(g);
  if (!(m0 > 0.0) || !std::isfinite(m0)) return false;
  SectionPoint q{scale_act(1.0 / m0, g), chi.tie_from, chi.tie_to};

  Mat86 basis = section_tangent_basis(q);
  out->head = head_columns(chi, v, basis);
  out->meas.clear();
  out->meas.reserve(cap);
  Mat66 chain = Mat66::Identity();
  const SheetCloud& cloud = SheetCloud::instance();
  const bool dbg = std::getenv("VORTEX_SHEET_DEBUG") != nullptr;
  for (int j = 1; j <= cap; ++j) {
    try {
      const StepResult r = glued_poincare_step(q, opt.horizon);
      if (r.kind != EventKind::Switch || !pack(r.next.z).allFinite()) {
        if (dbg) std::fprintf(stderr, "[march %d] no switch (kind=%d)\n", j, int(r.kind));
        break;
      }
      Mat66 m;
      const Mat86 basis_next = section_tangent_basis(r.next);
      if (!step_matrix(q, r, basis, basis_next, opt, &m)) {
        if (dbg) std::fprintf(stderr, "[march %d] step matrix failed\n", j);
        break;
      }
      chain = m * chain;
      q = r.next;
      basis = basis_next;

      Eigen::Vector2d chi_j;
      Vec4 v_j;
      read_point(q.z, q.from, q.to, &chi_j, &v_j);
      const SheetCloud::Fit fit = cloud.fit_at(chi_j, overlay);
      const Vec4 dev = v_j - fit.value;
      if (!dev.allFinite()) break;
      out->meas.push_back(Meas{q, basis, chain, fit, chi_j, dev});
      if (dev.norm() > kBlown) break;
    } catch (const std::exception& e) {
      if (dbg) std::fprintf(stderr, "[march %d] threw: %s\n", j, e.what());
      break;  // left the stratum or the step degenerated: no reading here
    }
  }
  return !out->meas.empty();
}

/// Frozen affine reference used while one level converges: measuring every
/// trial against the same plane keeps the level equation smooth, so the
/// damped Newton converges quadratically instead of wedging on the kinks
/// that re-fitted neighbour sets would introduce mid-iteration.
struct FrozenRef {
  Vec4 value;
  Eigen::Matrix<double, 4, 2> slope;
  Eigen::Vector2d chi0;

  Vec4 eval(const Eigen::Vector2d& c) const { return value + slope * (c - chi0); }
};

/// Raw position values at a marched return (the stored deviation recombined
/// with the fit it was measured against).
Vec4 tip_values(const Meas& tip) { return tip.dev + tip.fit.value; }

/// Residual of the frozen-plane equation at return `level` for trial head
/// values, or infinity when the march no longer survives that far.
double frozen_residual(const DiscPoint& chi, const Vec4& v, int level,
                       const LiftOptions& opt, const SheetOverlay* overlay,
                       const FrozenRef& ref) {
  March m;
  if (!march_from(chi, v, level, opt, overlay, &m) ||
      static_cast<int>(m.meas.size()) < level)
    return std::numeric_limits<double>::infinity();
  const Meas& tip = m.meas.back();
  return (tip_values(tip) - ref.eval(tip.chi)).norm();
}

struct LevelOutcome {
  bool solved = false;    // residual small enough for the next level to take over
  bool at_noise = false;  // head corrections below double precision: stop deepening
  double residual = std::numeric_limits<double>::infinity();
  double chain_gain = 1.0;    // norm of the composed step differentials
  double weakest_gain = 1.0;  // least-amplified head direction through the full read
};

/// Drive the values read at return `level` onto a frozen local plane of the
/// reference by a damped Newton iteration in the four head values.  Solving
/// the depth-j equation exactly leaves a head error of (reference error at
/// the j-th return) divided by the accumulated transverse gain, so each
/// additional level gains a fixed factor without ever needing a finer
/// reference.  The plane is refrozen where the tip actually lands once the
/// equation converges, so the plane ends up evaluated at its centre where
/// its own error is smallest.
LevelOutcome level_solve(const DiscPoint& chi, Vec4* v, int level, const LiftOptions& opt,
                         const SheetOverlay* overlay) {
  constexpr int kIters = 40;
  constexpr double kPass = 1e-4;  // entry quality the next level can still digest
  LevelOutcome out;
  Vec4 cur = *v;
  FrozenRef ref;
  bool have_ref = false;
  int freezes = 0;
  const bool dbg = std::getenv("VORTEX_SHEET_DEBUG") != nullptr;
  for (int it = 0; it < kIters; ++it) {
    try {
      March m;
      if (!march_from(chi, cur, level, opt, overlay, &m) ||
          static_cast<int>(m.meas.size()) < level)
        break;
      const Meas& tip = m.meas.back();
      if (!have_ref) {
        ref = FrozenRef{tip.fit.value, tip.fit.slope, tip.chi};
        have_ref = true;
        ++freezes;
      }
      out.residual = (tip_values(tip) - ref.eval(tip.chi)).norm();
      out.chain_gain = std::max(tip.chain.norm(), 1.0);
      out.solved = out.residual <= kPass;
      const double floor = std::max(1e-12, 5e-15 * out.chain_gain);
      if (out.residual < floor) {
        out.solved = true;
        // Converged on this plane; if the tip wandered off the freezing
        // point, refreeze there and settle once more.
        if (freezes < 4 && (tip.chi - ref.chi0).norm() > 0.25 * tip.fit.spacing) {
          ref = FrozenRef{tip.fit.value, tip.fit.slope, tip.chi};
          ++freezes;
          continue;
        }
        break;
      }
      const SheetCloud::Fit plane{ref.value, ref.slope, tip.fit.spacing};
      const Eigen::Matrix<double, 4, 6> read =
          deviation_read(tip.q, tip.basis, plane, ref.chi0);
      const Eigen::Matrix<double, 4, 4> gain = read * tip.chain * m.head;
      out.weakest_gain = std::max(
          1e-30, Eigen::JacobiSVD<Eigen::Matrix4d>(gain).singularValues().minCoeff());
      const Vec4 delta =
          gain.colPivHouseholderQr().solve(-(tip_values(tip) - ref.eval(tip.chi)));
      if (!delta.allFinite()) break;
      if (delta.norm() < 1e-14 * std::max(1.0, cur.norm())) {
        out.solved = true;
        out.at_noise = true;
        break;
      }
      double t = 1.0;
      bool accepted = false;
      for (int k = 0; k < 12; ++k, t *= 0.5) {
        const Vec4 trial = cur + t * delta;
        const double r = frozen_residual(chi, trial, level, opt, overlay, ref);
        if (r < out.residual) {
          cur = trial;
          accepted = true;
          break;
        }
      }
      if (dbg)
        std::fprintf(stderr, "[level %d it %d] res=%.3e gain=%.3e t=%s\n", level, it,
                     out.residual, out.chain_gain, accepted ? "ok" : "stuck");
      if (!accepted) break;  // a true kink (route boundary) blocks this level
    } catch (const std::exception&) {
      break;  // a probe crossed into a different stratum branch
    }
  }
  *v = cur;
  return out;
}

/// Solve the lift at `chi` from the warm values in `v`: deepen one return at
/// a time, solving the deviation equation exactly at each depth.  The gap
/// estimate divides the reference scale by the accumulated transverse gain
/// of the deepest solved level.
bool solve_lift(const DiscPoint& chi, Vec4* v, const LiftOptions& opt,
                const SheetOverlay* overlay, double* gap, int* reached) {
  constexpr double kReference = 2e-3;  // reference accuracy scale entering the gap
  constexpr double kUsable = 3e-4;     // worst head error considered a lift at all
  constexpr double kEntry = 3e-2;      // next-query entry residual the error may induce
  Vec4 cur = *v;
  int solved_levels = 0;
  double chain_gain = 1.0;
  double weakest = 1.0;
  double residual = 0.0;
  bool retried = false;
  for (int level = 1; level <= std::max(1, opt.depth); ++level) {
    Vec4 attempt = cur;
    LevelOutcome lo = level_solve(chi, &attempt, level, opt, overlay);
    if (!lo.solved && solved_levels == 0 && !retried) {
      // The warm values may lie outside the basin: restart from the cloud.
      retried = true;
      attempt = SheetCloud::instance()
                    .fit_at(Eigen::Vector2d(chi.chi1, chi.chi2), overlay)
                    .value;
      lo = level_solve(chi, &attempt, level, opt, overlay);
    }
    if (!lo.solved) break;
    cur = attempt;
    solved_levels = level;
    chain_gain = lo.chain_gain;
    weakest = lo.weakest_gain;
    residual = lo.residual;
    if (lo.at_noise) break;  // double precision exhausted: deeper is pure noise
  }
  if (solved_levels == 0) return false;
  // Bound the head error by the least-amplified direction of the deepest
  // solved measurement (the composed-chain norm overstates accuracy wherever
  // in-sheet growth outruns the transverse gain).
  const double estimate = (residual + kReference) / std::max(weakest, 1.0);
  // A usable lift must also be accurate enough that marching from it keeps
  // the next query's first reading within the tractable range; the
  // per-return gain says how much an error inflates per step.
  const double per_step = std::pow(chain_gain, 1.0 / solved_levels);
  if (estimate > kUsable || estimate * per_step > kEntry) return false;
  *v = cur;
  *gap = estimate;
  *reached = solved_levels;
  return true;
}

SheetPoint make_point(const DiscPoint& chi, const Vec4& v, int depth, double gap) {
  return SheetPoint{chi, gauge_state(chi, v), depth, gap};
}

/// Walk the switch points of a solved cycle and record each as an anchor
/// (relabelled to the canonical chart slots); relabelled repeats collapse
/// to the same chart point and are deduplicated.
void push_cycle_anchors(std::vector<SheetPoint>* out, const CycleResult& cyc) {
  SectionPoint p = cyc.section;
  const int steps = static_cast<int>(cyc.word.size());
  for (int k = 0; k < steps; ++k) {
    const DiscPoint raw = to_chi(p.z, p.from, p.to);
    const DiscPoint chi{raw.chi1, raw.chi2};
    const bool dup = std::any_of(out->begin(), out->end(), [&](const SheetPoint& a) {
      return std::hypot(a.chi.chi1 - chi.chi1, a.chi.chi2 - chi.chi2) < 1e-9;
    });
    if (!dup) {
      const State canon = rechart_state(p.z, p.from, p.to);
      out->push_back(SheetPoint{chi, scale_act(gauge_factor(canon), canon), 0, 0.0});
    }
    if (k + 1 < steps) {
      const StepResult r = glued_poincare_step(p);
      if (r.kind != EventKind::Switch) break;
      p = r.next;
    }
  }
}

}  // namespace

const std::vector<SheetPoint>& sheet_anchors() {
  static const std::vector<SheetPoint> anchors = [] {
    std::vector<SheetPoint> out;
    push_cycle_anchors(&out, solve_simplified_cycle(SimplifiedCycle::ThreeLink));
    push_cycle_anchors(&out, solve_simplified_cycle(SimplifiedCycle::FourLink));
    push_cycle_anchors(&out, solve_simplified_cycle(SimplifiedCycle::SixLink));
    push_cycle_anchors(&out, fixed_point_of_word("C"));
    push_cycle_anchors(&out, fixed_point_of_word("AC"));
    return out;
  }();
  return anchors;
}

SheetPoint lift_disc_point(const DiscPoint& chi, const LiftOptions& opt,
                           const SheetPoint* warm) {
  if (warm == nullptr) {
    const auto& anchors = sheet_anchors();
    const SheetPoint* best = nullptr;
    double best_d = std::numeric_limits<double>::infinity();
    for (const SheetPoint& a : anchors) {
      const double d = std::hypot(a.chi.chi1 - chi.chi1, a.chi.chi2 - chi.chi2);
      if (d < best_d) {
        best_d = d;
        best = &a;
      }
    }
    return lift_disc_point(chi, opt, best);
  }

  const Eigen::Vector2d from(warm->chi.chi1, warm->chi.chi2);
  const Eigen::Vector2d to(chi.chi1, chi.chi2);
  Vec4 v = position_values(warm->state);
  double gap = warm->gap;

  SheetOverlay trail;

  double t = 0.0;
  double step = 1.0;
  int reached = 0;
  while (t < 1.0) {
    const double tn = std::min(1.0, t + step);
    const Eigen::Vector2d c = from + tn * (to - from);
    const DiscPoint target{c[0], c[1], chi.tie_from, chi.tie_to};
    Vec4 vt = v;
    double g = 0.0;
    if (solve_lift(target, &vt, opt, &trail, &g, &reached)) {
      t = tn;
      v = vt;
      gap = g;
      // Leave trusted samples along the walk: the solved head and the
      // forward returns it still pins down sharpen the reference for the
      // next target, whose first readings land near these images.
      if (g <= 1e-9) {
        trail.add(c, vt);
        March m;
        if (march_from(target, vt, 2, opt, &trail, &m)) {
          for (const Meas& meas : m.meas) {
            if (g * meas.chain.norm() > 1e-8) break;
            Eigen::Vector2d chi_j;
            Vec4 v_j;
            try {
              read_point(meas.q.z, meas.q.from, meas.q.to, &chi_j, &v_j);
            } catch (const std::exception&) {
              break;
            }
            trail.add(chi_j, v_j);
          }
        }
      }
      step = std::min(1.0 - t, step * 2.0);
      if (step == 0.0) break;
    } else {
      step *= 0.5;
      if (step < 1.0 / (1 << 22)) {
        std::ostringstream msg;
        msg << "sheet lift stalled at chart (" << c[0] << ", " << c[1] << ") toward ("
            << chi.chi1 << ", " << chi.chi2 << ")";
        throw SheetLiftError(msg.str());
      }
    }
  }
  return make_point(chi, v, reached, gap);
}

SectionPoint sheet_section(const SheetPoint& p) {
  const double m = mu(p.state);
  return SectionPoint{scale_act(1.0 / m, p.state), p.chi.tie_from, p.chi.tie_to};
}

DiscStep disc_step_forward(const SheetPoint& p, const LiftOptions& opt) {
  const SectionPoint sp = sheet_section(p);
  const StepResult r = glued_poincare_step(sp, opt.horizon);
  if (r.kind != EventKind::Switch)
    throw SheetLiftError("forward step found no switch before the horizon");

  DiscStep out;
  out.letter = transition_type(sp, r.next);
  out.centers = r.center_crossings;

  const DiscPoint raw = to_chi(r.next.z, r.next.from, r.next.to);
  const DiscPoint chi{raw.chi1, raw.chi2};
  const State canon = rechart_state(r.next.z, r.next.from, r.next.to);
  const SheetPoint warm{chi, scale_act(gauge_factor(canon), canon), p.depth, p.gap};
  // Re-solve at the arrival: the step amplified the transverse error of the
  // source lift, the fresh solve pins it back to the survival floor.
  out.point = lift_disc_point(chi, opt, &warm);
  return out;
}

DiscStep disc_step_backward(const SheetPoint& p, const LiftOptions& opt) {
  const SectionPoint sp = sheet_section(p);
  const StepResult r = glued_poincare_inverse_step(sp, opt.horizon);
  if (r.kind != EventKind::Switch)
    throw SheetLiftError("backward step found no switch before the horizon");

  DiscStep out;
  out.letter = transition_type(r.next, sp);
  out.centers = r.center_crossings;

  const DiscPoint raw = to_chi(r.next.z, r.next.from, r.next.to);
  const DiscPoint chi{raw.chi1, raw.chi2};
  const State canon = rechart_state(r.next.z, r.next.from, r.next.to);
  // Backward steps contract the transverse error (the expansion runs the
  // other way), so the stepped values are kept as-is.
  out.point = SheetPoint{chi, scale_act(gauge_factor(canon), canon), p.depth, p.gap};
  return out;
}

}  // namespace vortex
