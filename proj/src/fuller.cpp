#include "vortex/fuller.hpp"

#include "vortex/polynomial.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <vector>

namespace vortex {

FullerRestriction fuller_restriction(const State& s, int i, int j) {
  const PairFrame f = PairFrame::of_pair(i, j);
  FullerRestriction r;
  r.state = {f.sym(s.x), f.sym(s.y), f.sym(s.phi), f.sym(s.psi)};
  r.u_lo = -std::sqrt(6.0);
  r.u_hi = std::sqrt(6.0) / 2.0;
  const double a2 = f.anti(s.x) * f.anti(s.x) + f.anti(s.y) * f.anti(s.y) +
                    f.anti(s.phi) * f.anti(s.phi) + f.anti(s.psi) * f.anti(s.psi);
  r.residual = std::sqrt(a2);
  return r;
}

ScalarState ScalarCycle::at(double tau) const {
  if (tau <= t1) return scalar_flow(z0, u_plus, tau);
  const ScalarState z1 = scalar_flow(z0, u_plus, t1);
  return scalar_flow(z1, u_minus, tau - t1);
}

namespace {

// Composite affine map of the two candidate arcs: z2 = A z0 + b, computed by
// flowing the coordinate basis exactly through both polynomial arcs.
void composite_affine(double u_plus, double u_minus, double t2, Eigen::Matrix4d* A,
                      Eigen::Vector4d* b) {
  auto pack = [](const ScalarState& s) { return Eigen::Vector4d(s.x, s.y, s.phi, s.psi); };
  auto unpack = [](const Eigen::Vector4d& v) { return ScalarState{v[0], v[1], v[2], v[3]}; };
  const ScalarState zero{};
  const ScalarState img0 = scalar_flow(scalar_flow(zero, u_plus, 1.0), u_minus, t2);
  *b = pack(img0);
  for (int c = 0; c < 4; ++c) {
    Eigen::Vector4d e = Eigen::Vector4d::Zero();
    e[c] = 1.0;
    // The flow is affine; subtracting the zero-state image isolates the
    // linear part column by column.  Controls act only through b.
    const ScalarState img = scalar_flow(scalar_flow(unpack(e), u_plus, 1.0), u_minus, t2);
    A->col(c) = pack(img) - *b;
  }
}

struct CycleResiduals {
  double r1, r2;       // psi at the intermediate and final switch
  ScalarState z0;      // solved switching state for these parameters
};

// For fixed (t2, lambda) the closure equations of x, y, phi are linear in
// the unknown switching state; solve them and report the two remaining psi
// conditions as residuals.
CycleResiduals cycle_residuals(double u_plus, double u_minus, double t2, double lambda) {
  Eigen::Matrix4d A;
  Eigen::Vector4d b;
  composite_affine(u_plus, u_minus, t2, &A, &b);
  Eigen::Matrix3d M = A.topLeftCorner<3, 3>();
  M(0, 0) -= lambda * lambda;          // x scales quadratically
  M(1, 1) -= lambda;                   // y linearly
  M(2, 2) -= lambda * lambda * lambda; // phi cubically
  const Eigen::Vector3d rhs = -b.head<3>();
  const Eigen::Vector3d z = M.fullPivLu().solve(rhs);
  CycleResiduals res;
  res.z0 = {z[0], z[1], z[2], 0.0};
  const ScalarState z1 = scalar_flow(res.z0, u_plus, 1.0);
  const ScalarState z2 = scalar_flow(z1, u_minus, t2);
  res.r1 = z1.psi;
  res.r2 = z2.psi;
  return res;
}

// Exact check that psi keeps one sign on an arc interior: isolate the
// roots of the quartic psi(t) over (0, t_end) with rational arithmetic.
bool psi_keeps_sign(const ScalarState& z, double u, double t_end, int wanted_sign) {
  const std::vector<double> coeffs = {z.psi, -z.phi, -z.x / 2.0, -z.y / 6.0, -u / 24.0};
  const RPoly p = to_rational(coeffs);
  if (p.is_zero()) return false;
  // Interior roots would mean an extra switch inside the arc.
  const Rational hi = rational_from_double(t_end) * Rational(999, 1000);
  if (sturm_count(p, rational_from_double(t_end) / 1000000, hi) != 0) return false;
  const ScalarState mid = scalar_flow(z, u, t_end / 2.0);
  return wanted_sign * mid.psi > 0;
}

}  // namespace

std::optional<ScalarCycle> solve_scalar_cycle(double u_plus, double u_minus) {
  // Coarse scan for Newton seeds, then damped Newton on (t2, lambda).
  struct Seed {
    double t2, lambda, score;
  };
  std::vector<Seed> seeds;
  for (double t2 = 0.1; t2 < 12.0; t2 *= 1.15) {
    for (double lam = 0.03; lam < 0.97; lam += 0.02) {
      const CycleResiduals r = cycle_residuals(u_plus, u_minus, t2, lam);
      const double scale = std::abs(r.z0.phi) + std::abs(r.z0.x) + std::abs(r.z0.y) + 1e-300;
      const double score = (std::abs(r.r1) + std::abs(r.r2)) / scale;
      seeds.push_back({t2, lam, score});
    }
  }
  std::sort(seeds.begin(), seeds.end(), [](const Seed& a, const Seed& b) { return a.score < b.score; });

  for (std::size_t k = 0; k < seeds.size() && k < 40; ++k) {
    double t2 = seeds[k].t2, lam = seeds[k].lambda;
    bool converged = false;
    for (int it = 0; it < 80; ++it) {
      const CycleResiduals r = cycle_residuals(u_plus, u_minus, t2, lam);
      const Eigen::Vector2d f(r.r1, r.r2);
      if (f.norm() < 1e-13 * (1.0 + std::abs(r.z0.phi))) {
        converged = true;
        break;
      }
      const double h1 = std::max(1e-7, 1e-7 * t2), h2 = 1e-8;
      const CycleResiduals ra = cycle_residuals(u_plus, u_minus, t2 + h1, lam);
      const CycleResiduals rb = cycle_residuals(u_plus, u_minus, t2, lam + h2);
      Eigen::Matrix2d J;
      J << (ra.r1 - r.r1) / h1, (rb.r1 - r.r1) / h2, (ra.r2 - r.r2) / h1, (rb.r2 - r.r2) / h2;
      Eigen::Vector2d step = J.fullPivLu().solve(f);
      // Keep the iterate in the admissible box.
      double damp = 1.0;
      while ((t2 - damp * step[0] <= 0.0 || lam - damp * step[1] <= 0.0 ||
              lam - damp * step[1] >= 1.0) && damp > 1e-6)
        damp *= 0.5;
      t2 -= damp * step[0];
      lam -= damp * step[1];
    }
    if (!converged) continue;
    const CycleResiduals r = cycle_residuals(u_plus, u_minus, t2, lam);
    // Reject the trivial ray and wrong-sided arcs.
    const double size = std::abs(r.z0.x) + std::abs(r.z0.y) + std::abs(r.z0.phi);
    if (size < 1e-8) continue;
    if (!psi_keeps_sign(r.z0, u_plus, 1.0, +1)) continue;
    const ScalarState z1 = scalar_flow(r.z0, u_plus, 1.0);
    if (!psi_keeps_sign(z1, u_minus, t2, -1)) continue;
    ScalarCycle cyc;
    cyc.z0 = r.z0;
    cyc.t1 = 1.0;
    cyc.t2 = t2;
    cyc.lambda = lam;
    cyc.u_plus = u_plus;
    cyc.u_minus = u_minus;
    cyc.residual = std::hypot(r.r1, r.r2);
    return cyc;
  }
  return std::nullopt;
}

std::optional<CyclePhase> locate_on_cycle(const ScalarCycle& cyc, double x, double y) {
  if (x == 0.0 && y == 0.0) return std::nullopt;
  const double T = cyc.period();
  const int n = 4000;

  // Residual of the x-equation once sigma is chosen from the y-equation.
  auto fy = [&](double tau) -> std::optional<double> {
    const ScalarState s = cyc.at(tau);
    if (s.y == 0.0 || (s.y > 0) != (y > 0)) return std::nullopt;
    const double sigma = y / s.y;
    return sigma * sigma * s.x - x;
  };
  // And the reverse pairing for near-zero y.
  auto fx = [&](double tau) -> std::optional<double> {
    const ScalarState s = cyc.at(tau);
    if (s.x == 0.0 || (s.x > 0) != (x > 0)) return std::nullopt;
    const double sigma = std::sqrt(std::abs(x / s.x));
    return sigma * s.y - y;
  };

  auto bisect = [&](auto&& f, double a, double b, double fa, double fb) -> std::optional<CyclePhase> {
    for (int i = 0; i < 100; ++i) {
      const double m = 0.5 * (a + b);
      const auto fm = f(m);
      if (!fm) return std::nullopt;
      if ((*fm > 0) == (fa > 0)) {
        a = m;
        fa = *fm;
      } else {
        b = m;
        fb = *fm;
      }
    }
    const double tau = 0.5 * (a + b);
    const ScalarState s = cyc.at(tau);
    double sigma;
    if (std::abs(s.y) > std::abs(s.x))
      sigma = y / s.y;
    else
      sigma = std::sqrt(std::abs(x / s.x));
    if (!(sigma > 0) || !std::isfinite(sigma)) return std::nullopt;
    return CyclePhase{sigma, tau};
  };

  auto scan = [&](auto&& f) -> std::optional<CyclePhase> {
    std::optional<double> prev;
    double prev_tau = 0;
    std::optional<CyclePhase> best;
    double best_err = 1e300;
    for (int i = 0; i <= n; ++i) {
      const double tau = T * i / n;
      const auto v = f(tau);
      if (v && prev && (*v > 0) != (*prev > 0)) {
        if (auto hit = bisect(f, prev_tau, tau, *prev, *v)) {
          const ScalarState s = scalar_scale(hit->sigma, cyc.at(hit->tau));
          const double err = std::hypot(s.x - x, s.y - y) / (std::hypot(x, y) + 1e-300);
          if (err < best_err) {
            best_err = err;
            best = hit;
          }
        }
      }
      if (v) {
        prev = v;
        prev_tau = tau;
      } else {
        prev.reset();
      }
    }
    if (best && best_err < 1e-8) return best;
    return std::nullopt;
  };

  if (auto hit = scan(fy)) return hit;
  return scan(fx);
}

std::optional<ScalarState> restricted_adjoint(const ScalarCycle& cyc, double x, double y) {
  const auto phase = locate_on_cycle(cyc, x, y);
  if (!phase) return std::nullopt;
  return scalar_scale(phase->sigma, cyc.at(phase->tau));
}

}  // namespace vortex
