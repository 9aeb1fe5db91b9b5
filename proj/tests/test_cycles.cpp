// Self-similar cycle oracles: the exact elimination of the three-link
// closure polynomial, root counts and reciprocity of the closure
// references, the numeric four- and six-link solutions against those
// references, defining-relation residuals, multiplier/contraction
// consistency, quotient spectra, and the word-engine fixed points with
// their frozen eigenvalue pairs.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "vortex/cycles.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

using namespace vortex;

namespace {

RPoly rpoly(std::initializer_list<long> coeffs) {
  std::vector<Rational> c;
  for (long v : coeffs) c.emplace_back(v);
  return RPoly(std::move(c));
}

// Relative distance from the closest eigenvalue of `eigs` to `target`.
double eigen_miss(const std::vector<std::complex<double>>& eigs, std::complex<double> target) {
  double best = 1e300;
  for (const auto& e : eigs) best = std::min(best, std::abs(e - target) / std::abs(target));
  return best;
}

// Eigenvalues of modulus below one.
std::vector<std::complex<double>> contracting(const std::vector<std::complex<double>>& eigs) {
  std::vector<std::complex<double>> out;
  for (const auto& e : eigs)
    if (std::abs(e) < 1.0) out.push_back(e);
  return out;
}

// Walk the quotient return map for `steps` steps from the cycle's section
// point, collecting transition symbols and the product of the contraction
// factors.
struct OrbitTrace {
  std::string word;
  double rho_product = 1.0;
  std::vector<SectionPoint> points;
};

OrbitTrace trace_cycle(const CycleResult& cyc, int steps) {
  OrbitTrace tr;
  SectionPoint p = cyc.section;
  tr.points.push_back(p);
  for (int i = 0; i < steps; ++i) {
    const StepResult r = poincare_step(p);
    REQUIRE(r.kind == EventKind::Switch);
    tr.word.push_back(transition_type(p, r.next));
    tr.rho_product *= r.rho;
    p = r.next;
    tr.points.push_back(p);
  }
  return tr;
}

}  // namespace

TEST_CASE("closure references: degrees, reciprocity, unit-interval root counts") {
  const RPoly& pz = three_link_closure_poly();
  const RPoly& pq = four_link_closure_poly();
  const RPoly& pr = six_link_closure_poly();
  CHECK(pz.degree() == 6);
  CHECK(pq.degree() == 44);
  CHECK(pr.degree() == 20);
  CHECK(reciprocal_check(pz));
  CHECK(reciprocal_check(pq));
  CHECK(reciprocal_check(pr));
  // The three- and four-link references have exactly one root inside the
  // unit interval; the six-link one has a second real root pair
  // (0.7111, 1.4063) on top of the realized multiplier pair, so it counts
  // two.  Reciprocity mirrors every interior root beyond the interval.
  CHECK(sturm_count(pz, Rational(0), Rational(1)) == 1);
  CHECK(sturm_count(pq, Rational(0), Rational(1)) == 1);
  CHECK(sturm_count(pr, Rational(0), Rational(1)) == 2);
  CHECK(sturm_count(pz, Rational(2), Rational(3)) == 1);
  // Count oracles on transparent polynomials.
  CHECK(sturm_count(rpoly({1, 0, 1}), Rational(-10), Rational(10)) == 0);
  // (2x - 1)(4x - 1): both roots inside the unit interval.
  CHECK(sturm_count(rpoly({1, -6, 8}), Rational(0), Rational(1)) == 2);
}

TEST_CASE("three-link family: exact elimination lands on the frozen closure polynomial") {
  const CycleResult cyc = solve_simplified_cycle(SimplifiedCycle::ThreeLink);
  // Coefficient-for-coefficient equality, not approximate agreement.
  REQUIRE(!cyc.char_poly.is_zero());
  REQUIRE(cyc.char_poly.degree() == 6);
  const RPoly& ref = three_link_closure_poly();
  for (int i = 0; i <= 6; ++i) CHECK(cyc.char_poly.c[i] == ref.c[i]);

  // The multiplier is the unique closure root in (0, 1), bracketed by a
  // hand-checked sign change.
  CHECK(cyc.lambda0 > 0.37);
  CHECK(cyc.lambda0 < 0.38);
  CHECK(std::abs(static_cast<double>(ref.eval(rational_from_double(cyc.lambda0)))) < 1e-12);

  // Gauge and ansatz: first arc time one, switch from the third slot to the
  // first, strict selector and orientation inequalities at the start point.
  REQUIRE(cyc.arc_times.size() == 1);
  CHECK(cyc.arc_times[0] == 1.0);
  CHECK(cyc.controls == std::vector<int>{0});
  CHECK(cyc.word == "r");
  CHECK(cyc.start.psi[0] == doctest::Approx(cyc.start.psi[2]).epsilon(1e-12));
  CHECK(cyc.start.psi[1] > cyc.start.psi[0]);
  CHECK(cyc.start.phi[0] > cyc.start.phi[2]);
  CHECK(cyc.relation_residual < 1e-9);
}

TEST_CASE("three-link cycle: step identity, contraction product, repelling spectrum") {
  const CycleResult cyc = solve_simplified_cycle(SimplifiedCycle::ThreeLink);

  // One exact return-map step from the start point, in the start gauge:
  // the switch happens at t = 1 and the relabelled image is the scaled
  // start point.
  const SwitchEvent ev = next_switch(cyc.start, Control{ControlKind::Vertex, 0, 0}, 10.0, 0.0, 2);
  REQUIRE(ev.kind == EventKind::Switch);
  CHECK(ev.t == doctest::Approx(1.0).epsilon(1e-10));
  const State back = permute(cyc.relabel, ev.state);
  const State want = scale_act(cyc.lambda0, cyc.start);
  CHECK(state_norm(back - want) < 1e-9 * state_norm(cyc.start));

  // Quotient orbit: after three steps the section point returns to itself,
  // the word is rotational throughout, and the contraction factors multiply
  // to the cube of the multiplier (one multiplier per relation application,
  // three applications per full period).
  const OrbitTrace tr = trace_cycle(cyc, 3);
  CHECK(tr.word == "rrr");
  CHECK(state_norm(tr.points[3].z - cyc.section.z) < 1e-9);
  CHECK(tr.points[3].from == cyc.section.from);
  CHECK(tr.points[3].to == cyc.section.to);
  CHECK(tr.rho_product == doctest::Approx(std::pow(cyc.lambda0, 3)).epsilon(1e-9));

  // Per-relation contraction equals the multiplier itself.
  const StepResult one = poincare_step(cyc.section);
  CHECK(one.rho == doctest::Approx(cyc.lambda0).epsilon(1e-9));

  // The quotient linearisation is repelling: every eigenvalue sits strictly
  // outside the unit circle.
  REQUIRE(cyc.eigenvalues.size() == 6);
  for (const auto& e : cyc.eigenvalues) CHECK(std::abs(e) > 1.0);
  // Eigenvalue product equals the determinant of the composed map.
  std::complex<double> prod(1.0, 0.0);
  for (const auto& e : cyc.eigenvalues) prod *= e;
  CHECK(prod.imag() == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("three-link cycle attracts backward orbits") {
  const CycleResult cyc = solve_simplified_cycle(SimplifiedCycle::ThreeLink);
  // Perturb inside the section tangent space and iterate the inverse map;
  // forward repulsion means backward convergence to the cycle.
  const Eigen::Matrix<double, 8, 6> basis = section_tangent_basis(cyc.section);
  Eigen::Matrix<double, 8, 1> v = pack(cyc.section.z);
  for (int k = 0; k < 6; ++k) v += 1e-3 * basis.col(k) / std::sqrt(6.0);
  SectionPoint p{normalize(unpack(v)), cyc.section.from, cyc.section.to};

  // Collect the three section points of the cycle for the distance test.
  const OrbitTrace tr = trace_cycle(cyc, 3);
  auto dist_to_cycle = [&](const SectionPoint& q) {
    double best = 1e300;
    for (const auto& c : tr.points) best = std::min(best, state_norm(q.z - c.z));
    return best;
  };

  double d0 = dist_to_cycle(p);
  CHECK(d0 < 1e-2);
  // The slowest backward contraction rate is the reciprocal of the
  // weakest forward eigenvalue modulus (about 0.8 per period), so the
  // approach needs a few dozen periods to gain three decades.
  for (int i = 0; i < 120; ++i) {
    const StepResult r = poincare_inverse_step(p);
    REQUIRE(r.kind == EventKind::Switch);
    p = r.next;
  }
  CHECK(dist_to_cycle(p) < 1e-6);
}

TEST_CASE("four-link family: closure reference vanishes at the solved multiplier") {
  const CycleResult cyc = solve_simplified_cycle(SimplifiedCycle::FourLink);
  CHECK(cyc.lambda0 > 0.0);
  CHECK(cyc.lambda0 < 1.0);
  CHECK(cyc.relation_residual < 1e-9);
  REQUIRE(cyc.arc_times.size() == 2);
  CHECK(cyc.arc_times[0] == 1.0);
  CHECK(cyc.arc_times[1] > 0.0);
  CHECK(cyc.word == "rt");

  // Normalised residual of the degree-44 reference at the multiplier.
  const RPoly& ref = four_link_closure_poly();
  double cmax = 0.0;
  for (const auto& c : ref.c) cmax = std::max(cmax, std::abs(static_cast<double>(c)));
  const double val = std::abs(static_cast<double>(ref.eval(rational_from_double(cyc.lambda0))));
  CHECK(val / cmax < 1e-8);

  // Full period: four links, alternating word, return to the section point,
  // contraction product lambda0 per two steps.
  const OrbitTrace tr = trace_cycle(cyc, 4);
  CHECK((tr.word == "rtrt" || tr.word == "trtr"));
  CHECK(state_norm(tr.points[4].z - cyc.section.z) < 1e-8);
  CHECK(tr.rho_product == doctest::Approx(cyc.lambda0 * cyc.lambda0).epsilon(1e-9));

  // Exactly one contracting eigenvalue of the composed quotient map.
  REQUIRE(cyc.eigenvalues.size() == 6);
  CHECK(contracting(cyc.eigenvalues).size() == 1);
}

TEST_CASE("six-link family: closure reference vanishes at the solved multiplier") {
  const CycleResult cyc = solve_simplified_cycle(SimplifiedCycle::SixLink);
  CHECK(cyc.lambda0 > 0.0);
  CHECK(cyc.lambda0 < 1.0);
  CHECK(cyc.relation_residual < 1e-9);
  CHECK(cyc.word == "rr");

  const RPoly& ref = six_link_closure_poly();
  double cmax = 0.0;
  for (const auto& c : ref.c) cmax = std::max(cmax, std::abs(static_cast<double>(c)));
  const double val = std::abs(static_cast<double>(ref.eval(rational_from_double(cyc.lambda0))));
  CHECK(val / cmax < 1e-8);

  const OrbitTrace tr = trace_cycle(cyc, 6);
  CHECK(tr.word == "rrrrrr");
  // The tight return identity is the relabelled two-step relation; the full
  // six-step trace re-amplifies the stepping noise floor along the
  // transverse expanding directions (composite norm ~1e5), so it only
  // certifies the coarse shape of the period.
  const State relabelled = permute(cyc.relabel, tr.points[2].z);
  CHECK(state_norm(relabelled - cyc.section.z) < 1e-8);
  CHECK(state_norm(tr.points[6].z - cyc.section.z) < 1e-3);
  CHECK(tr.rho_product == doctest::Approx(std::pow(cyc.lambda0, 3)).epsilon(1e-4));
}

TEST_CASE("word engine agrees with the simplified ansatze") {
  CHECK(expand_word("A") == "rr");
  CHECK(expand_word("B") == "tr");
  CHECK(expand_word("C") == "trt");
  CHECK(expand_word("AC") == "rrtrt");

  const CycleResult a = fixed_point_of_word("A");
  const CycleResult six = solve_simplified_cycle(SimplifiedCycle::SixLink);
  CHECK(a.lambda0 == doctest::Approx(six.lambda0).epsilon(1e-11));

  const CycleResult b = fixed_point_of_word("B");
  const CycleResult four = solve_simplified_cycle(SimplifiedCycle::FourLink);
  CHECK(b.lambda0 == doctest::Approx(four.lambda0).epsilon(1e-11));

  const CycleResult r3 = fixed_point_of_word("r");
  const CycleResult three = solve_simplified_cycle(SimplifiedCycle::ThreeLink);
  CHECK(r3.lambda0 == doctest::Approx(three.lambda0).epsilon(1e-11));
}

TEST_CASE("word fixed points carry the frozen eigenvalue pairs") {
  // Stable/unstable pairs of the period maps at the word fixed points.
  // Each stable value must be the unique contracting eigenvalue; each
  // unstable value must appear in the spectrum of the composed quotient
  // differential.
  struct Expected {
    const char* word;
    std::complex<double> stable, unstable;
  };
  const Expected table[] = {
      {"A", {0.789389405489713, 0.0}, {25.416902415438734, 0.0}},
      {"C", {-0.195427788394708, 0.0}, {-2.553017991174260, 0.0}},
      {"AC", {-0.064093706436160, 0.0}, {-73.29685207454, 0.0}},
  };
  for (const auto& row : table) {
    CAPTURE(row.word);
    const CycleResult cyc = fixed_point_of_word(row.word);
    CHECK(cyc.lambda0 > 0.0);
    CHECK(cyc.lambda0 < 1.0);
    CHECK(cyc.relation_residual < 1e-9);

    const auto small = contracting(cyc.eigenvalues);
    REQUIRE(small.size() == 1);
    CHECK(std::abs(small[0] - row.stable) < 1e-6 * std::abs(row.stable));
    CHECK(eigen_miss(cyc.eigenvalues, row.unstable) < 1e-6);
  }
}

TEST_CASE("word cycles survive the exact return map") {
  // The Newton solution must be a genuine orbit of the exact switch
  // engine: stepping from the section point reproduces the arc times
  // (rescaled to the unit spheroid) and the transition word.
  for (const char* word : {"C", "AC"}) {
    CAPTURE(word);
    const CycleResult cyc = fixed_point_of_word(word);
    const std::string symbols = expand_word(word);
    const double scale = mu(cyc.start);
    SectionPoint p = cyc.section;
    double carried = 1.0;  // accumulated contraction so far
    for (std::size_t i = 0; i < symbols.size(); ++i) {
      const StepResult r = poincare_step(p);
      REQUIRE(r.kind == EventKind::Switch);
      CHECK(transition_type(p, r.next) == symbols[i]);
      // The i-th arc lives at scale mu(start) * carried relative to the
      // unit-spheroid trace, and times stretch by the reciprocal.
      CHECK(r.time == doctest::Approx(cyc.arc_times[i] / (scale * carried)).epsilon(1e-7));
      carried *= r.rho;
      p = r.next;
    }
    // Relabelled return to the base section point.  The bar allows for the
    // stepping noise floor amplified by the transverse expansion of the
    // composed word map (norm ~1e5 for the two-letter word).
    const State back = permute(cyc.relabel, p.z);
    CHECK(state_norm(back - cyc.section.z) < 5e-7);
  }
}

TEST_CASE("quotient time is positive, additive, and scale-invariant") {
  const CycleResult cyc = solve_simplified_cycle(SimplifiedCycle::ThreeLink);
  const QuotientReturn q1 = poincare_quotient(cyc.section);
  CHECK(q1.delta_s > 0.0);
  CHECK(q1.rho == doctest::Approx(cyc.lambda0).epsilon(1e-9));

  // Quotient symmetry of the cycle: every step takes the same quotient time.
  QuotientReturn q2 = poincare_quotient(q1.next);
  QuotientReturn q3 = poincare_quotient(q2.next);
  CHECK(q2.delta_s == doctest::Approx(q1.delta_s).epsilon(1e-9));
  CHECK(q3.delta_s == doctest::Approx(q1.delta_s).epsilon(1e-9));

  // Scale invariance: the same arc traversed at another scale accumulates
  // the same quotient time (dt/mu is invariant under the scale action).
  const double t_arc = poincare_step(cyc.section).time;
  const Control out{ControlKind::Vertex, cyc.section.to, 0};
  const double s_unit = quotient_time(cyc.section.z, out, t_arc);
  const State blown = scale_act(7.0, cyc.section.z);
  const double s_blown = quotient_time(blown, out, 7.0 * t_arc);
  CHECK(s_blown == doctest::Approx(s_unit).epsilon(1e-9));
}
