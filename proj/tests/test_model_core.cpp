// Core model oracles: the feedback law on the adjoint selector, the exact
// polynomial arc, the weighted scale action and its interplay with flow,
// permutation equivariance, the blow-up gauge, and the scalar (two-fold
// symmetric) restriction with its self-similar relay cycle.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "vortex/arc.hpp"
#include "vortex/fuller.hpp"
#include "vortex/state.hpp"

#include <cmath>
#include <random>

using namespace vortex;

namespace {

State random_state(unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  auto triple = [&] {
    BaryVec v(d(rng), d(rng), d(rng));
    v.array() -= v.mean();  // sum-zero
    return v;
  };
  return {triple(), triple(), triple(), triple()};
}

double state_dist(const State& a, const State& b) { return state_norm(a - b); }

}  // namespace

TEST_CASE("feedback law: unique minimum, two-fold tie, full tie") {
  const Control c1 = control_law(BaryVec(-1.0, 0.0, 1.0));
  CHECK(c1.kind == ControlKind::Vertex);
  CHECK(c1.a == 0);
  CHECK(c1.value() == BaryVec(-2.0, 1.0, 1.0));

  const Control c2 = control_law(BaryVec(0.0, 0.0, 1.0));
  CHECK(c2.kind == ControlKind::EdgeMidpoint);
  CHECK(c2 == Control{ControlKind::EdgeMidpoint, 0, 1});
  CHECK(c2.value() == BaryVec(-0.5, -0.5, 1.0));

  CHECK(control_law(BaryVec::Zero()).kind == ControlKind::Center);

  // Tie detection is relative to the selector's magnitude.
  const Control tied = control_law(BaryVec(-1.0, -1.0 - 1e-12, 2.0 + 1e-12));
  CHECK(tied.kind == ControlKind::EdgeMidpoint);
  CHECK(tied == Control{ControlKind::EdgeMidpoint, 0, 1});
  const Control split = control_law(BaryVec(-1.0, -1.001, 2.001));
  CHECK(split.kind == ControlKind::Vertex);
  CHECK(split.a == 1);
}

TEST_CASE("feedback law commutes with index relabelling") {
  const BaryVec psi(-0.3, 0.7, -0.4);
  const Permutation sigmas[] = {Permutation::identity(),          Permutation::transposition(0, 1),
                                Permutation::transposition(0, 2), Permutation::transposition(1, 2),
                                Permutation::cycle(0, 1, 2),      Permutation::cycle(0, 2, 1)};
  for (const auto& s : sigmas) {
    const BaryVec lhs = control_law(s.apply(psi)).value();
    const BaryVec rhs = s.apply(control_law(psi).value());
    CHECK((lhs - rhs).norm() == doctest::Approx(0.0));
  }
}

TEST_CASE("permutation group laws and the control index image") {
  const BaryVec v(0.1, 0.2, -0.3);
  const Permutation f = Permutation::cycle(0, 1, 2);
  const Permutation g = Permutation::transposition(1, 2);
  CHECK((Permutation::compose(f, g).apply(v) - f.apply(g.apply(v))).norm() ==
        doctest::Approx(0.0));
  CHECK(Permutation::compose(f, f.inverse()).is_identity());
  CHECK(f.is_three_cycle());
  CHECK(g.is_transposition());
  for (int c = 0; c < 3; ++c) {
    CHECK((f.apply(vertex_control(c)) - vertex_control(f.index_image(c))).norm() ==
          doctest::Approx(0.0));
  }
}

TEST_CASE("exact arc from a pure-selector state reproduces hand values") {
  State s0;
  s0.psi = BaryVec(-1.0, 0.0, 1.0);
  const Control c = control_law(s0.psi);
  REQUIRE(c.kind == ControlKind::Vertex);
  const Arc arc{s0, c.value()};  // u = (-2, 1, 1)
  const State s1 = arc.at(1.0);
  CHECK((s1.y - BaryVec(-2.0, 1.0, 1.0)).norm() == doctest::Approx(0.0));
  CHECK((s1.x - BaryVec(-1.0, 0.5, 0.5)).norm() == doctest::Approx(0.0));
  CHECK((s1.phi - BaryVec(-2.0 / 6, 1.0 / 6, 1.0 / 6)).norm() == doctest::Approx(0.0));
  CHECK((s1.psi - BaryVec(-11.0 / 12, -1.0 / 24, 23.0 / 24)).norm() == doctest::Approx(0.0));
}

TEST_CASE("arc velocity matches the chain x'=y, y'=u, phi'=x, psi'=-phi") {
  const State s0 = random_state(7);
  const Arc arc{s0, vertex_control(1)};
  const double t = 0.6, h = 1e-6;
  const State fd = (arc.at(t + h) - arc.at(t - h)) * (1.0 / (2.0 * h));
  const State v = arc.velocity(t);
  CHECK(state_dist(fd, v) < 1e-9);
  // And the tangent push-forward is the same flow without the control row.
  const State dv = random_state(11);
  const State moved = Arc{s0 + dv * 1e-7, arc.u}.at(t) - arc.at(t);
  CHECK(state_dist(moved * 1e7, Arc::differential(dv, t)) < 1e-6);
}

TEST_CASE("flow is equivariant under the weighted scale action") {
  const State s = random_state(3);
  const BaryVec u = vertex_control(2);
  const double lambda = 2.0, t = 0.7;
  const State lhs = flow(scale_act(lambda, s), u, lambda * t);
  const State rhs = scale_act(lambda, flow(s, u, t));
  CHECK(state_dist(lhs, rhs) < 1e-12 * state_norm(rhs));
}

TEST_CASE("time reversal conjugates the flow with the same control") {
  const State s = random_state(5);
  const BaryVec u = edge_midpoint_control(0, 2);
  const double t = 0.9;
  const State lhs = flow(time_reversal(s), u, t);
  const State rhs = time_reversal(flow(s, u, -t));
  CHECK(state_dist(lhs, rhs) < 1e-12);
  // The reversal is the scale action at -1.
  CHECK(state_dist(scale_act(-1.0, s), time_reversal(s)) == doctest::Approx(0.0));
}

TEST_CASE("blow-up gauge: homogeneity, normalisation, gradient, Euler field") {
  const State s = random_state(9);
  CHECK(mu(scale_act(2.0, s)) == doctest::Approx(2.0 * mu(s)).epsilon(1e-12));
  CHECK(mu(normalize(s)) == doctest::Approx(1.0).epsilon(1e-12));

  const State v = random_state(13);
  const double h = 1e-6;
  const double fd = (mu(s + v * h) - mu(s - v * h)) / (2.0 * h);
  CHECK(mu_gradient_dot(s, v) == doctest::Approx(fd).epsilon(1e-6));

  // Euler field = d/dlambda of the action at lambda = 1; mu grows at rate mu.
  const State fd_euler = (scale_act(1.0 + h, s) - scale_act(1.0 - h, s)) * (1.0 / (2.0 * h));
  CHECK(state_dist(fd_euler, euler_field(s)) < 1e-6);
  CHECK(mu_gradient_dot(s, euler_field(s)) == doctest::Approx(mu(s)).epsilon(1e-9));
}

TEST_CASE("plane packing is an isometric round trip") {
  const State s = random_state(17);
  const State back = unpack(pack(s));
  CHECK(state_dist(s, back) < 1e-14);
  CHECK(std::abs(back.x.sum()) < 1e-14);
  CHECK(std::abs(back.psi.sum()) < 1e-14);
}

TEST_CASE("pair frame orients the scalar control segment as [-sqrt6, sqrt6/2]") {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      const PairFrame f = PairFrame::of_pair(i, j);
      CHECK(f.sym(edge_midpoint_control(i, j)) == doctest::Approx(std::sqrt(6.0) / 2));
      CHECK(f.anti(edge_midpoint_control(i, j)) == doctest::Approx(0.0));
      CHECK(f.sym(vertex_control(f.k)) == doctest::Approx(-std::sqrt(6.0)));
      CHECK(f.anti(vertex_control(f.k)) == doctest::Approx(0.0));
      // Frame reconstruction round trip.
      const BaryVec w = f.from(0.37, -1.2);
      CHECK(f.anti(w) == doctest::Approx(0.37));
      CHECK(f.sym(w) == doctest::Approx(-1.2));
      CHECK(std::abs(w.sum()) < 1e-14);
    }
}

TEST_CASE("restricting a symmetric state loses nothing; residual measures asymmetry") {
  const PairFrame f = PairFrame::of_pair(2, 0);
  State s;
  s.x = f.from(0.0, 0.4);
  s.y = f.from(0.0, -0.2);
  s.phi = f.from(0.0, 1.1);
  s.psi = f.from(0.0, 0.05);
  const FullerRestriction r = fuller_restriction(s, 2, 0);
  CHECK(r.residual == doctest::Approx(0.0));
  CHECK(r.state.x == doctest::Approx(0.4));
  CHECK(r.state.y == doctest::Approx(-0.2));
  CHECK(r.state.phi == doctest::Approx(1.1));
  CHECK(r.state.psi == doctest::Approx(0.05));
  CHECK(r.u_lo == doctest::Approx(-std::sqrt(6.0)));
  CHECK(r.u_hi == doctest::Approx(std::sqrt(6.0) / 2));

  State t = s;
  t.y = f.from(0.3, -0.2);  // inject an antisymmetric component
  CHECK(fuller_restriction(t, 2, 0).residual == doctest::Approx(0.3));
}

TEST_CASE("scalar flow matches the full flow on a symmetric plane") {
  const PairFrame f = PairFrame::of_pair(1, 2);
  State s;
  s.x = f.from(0.0, 0.2);
  s.y = f.from(0.0, -0.1);
  s.phi = f.from(0.0, 0.9);
  s.psi = f.from(0.0, -0.3);
  const FullerRestriction r = fuller_restriction(s, 1, 2);
  const State full = flow(s, edge_midpoint_control(1, 2), 0.8);
  const ScalarState red = scalar_flow(r.state, std::sqrt(6.0) / 2, 0.8);
  CHECK(f.sym(full.x) == doctest::Approx(red.x).epsilon(1e-13));
  CHECK(f.sym(full.y) == doctest::Approx(red.y).epsilon(1e-13));
  CHECK(f.sym(full.phi) == doctest::Approx(red.phi).epsilon(1e-13));
  CHECK(f.sym(full.psi) == doctest::Approx(red.psi).epsilon(1e-13));
}

TEST_CASE("symmetric relay: self-similar cycle with the classical symmetry") {
  const auto cyc = solve_scalar_cycle(1.0, -1.0);
  REQUIRE(cyc.has_value());
  CHECK(cyc->lambda > 0.0);
  CHECK(cyc->lambda < 1.0);
  CHECK(cyc->residual < 1e-10);
  // Central symmetry forces the arc-time ratio to be sqrt(lambda).
  CHECK(cyc->t2 == doctest::Approx(std::sqrt(cyc->lambda)).epsilon(1e-8));
  // Self-similarity of the full period.
  const ScalarState z2 = cyc->at(cyc->period());
  const ScalarState target = scalar_scale(cyc->lambda, cyc->z0);
  CHECK(z2.x == doctest::Approx(target.x).epsilon(1e-9));
  CHECK(z2.y == doctest::Approx(target.y).epsilon(1e-9));
  CHECK(z2.phi == doctest::Approx(target.phi).epsilon(1e-9));
  CHECK(std::abs(z2.psi) < 1e-10);
}

TEST_CASE("segment relay of the symmetric restriction has a chattering cycle") {
  const auto cyc = solve_scalar_cycle(std::sqrt(6.0) / 2, -std::sqrt(6.0));
  REQUIRE(cyc.has_value());
  CHECK(cyc->lambda > 0.0);
  CHECK(cyc->lambda < 1.0);
  CHECK(cyc->residual < 1e-10);
  CHECK(cyc->t2 > 0.0);
  // Switching states sit on psi = 0 and the arcs stay on one side each.
  CHECK(std::abs(cyc->z0.psi) < 1e-12);
  const ScalarState mid1 = cyc->at(0.5);
  CHECK(mid1.psi > 0.0);
  const ScalarState mid2 = cyc->at(1.0 + cyc->t2 / 2);
  CHECK(mid2.psi < 0.0);
}

TEST_CASE("every nonzero phase point sits on exactly one scaled cycle orbit") {
  const auto cyc = solve_scalar_cycle(std::sqrt(6.0) / 2, -std::sqrt(6.0));
  REQUIRE(cyc.has_value());
  const double sigma_true = 1.7, tau_true = 0.3 * cyc->period();
  const ScalarState probe = scalar_scale(sigma_true, cyc->at(tau_true));
  const auto phase = locate_on_cycle(*cyc, probe.x, probe.y);
  REQUIRE(phase.has_value());
  CHECK(phase->sigma == doctest::Approx(sigma_true).epsilon(1e-8));
  CHECK(phase->tau == doctest::Approx(tau_true).epsilon(1e-7));

  const auto adj = restricted_adjoint(*cyc, probe.x, probe.y);
  REQUIRE(adj.has_value());
  CHECK(adj->x == doctest::Approx(probe.x).epsilon(1e-8));
  CHECK(adj->y == doctest::Approx(probe.y).epsilon(1e-8));
  CHECK(adj->phi == doctest::Approx(probe.phi).epsilon(1e-6));
  CHECK(adj->psi == doctest::Approx(probe.psi).epsilon(1e-6));

  CHECK_FALSE(locate_on_cycle(*cyc, 0.0, 0.0).has_value());
}
