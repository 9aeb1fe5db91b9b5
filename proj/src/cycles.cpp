// Cycle solving.  The closure condition of a self-similar word cycle is a
// square system: the switch point enters linearly (the flow between
// switches is affine in the state), so for fixed arc times and multiplier
// the point is recovered by one 8x8 solve and only the tie conditions at
// the section points remain.  Newton iteration runs on the arc times and
// the multiplier alone.  For the three-link ansatz the same triangular
// structure is carried out over exact rational functions of the
// multiplier, and the tie condition collapses to one integer-coefficient
// polynomial.
#include "vortex/cycles.hpp"

#include "vortex/arc.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace vortex {

namespace {

RPoly int_poly(std::initializer_list<long> ascending) {
  std::vector<Rational> c;
  c.reserve(ascending.size());
  for (long v : ascending) c.emplace_back(v);
  return RPoly(std::move(c));
}

// ------------------------------------------------------------------------
// Word combinatorics.  A chain starts on the base section (arriving from
// slot 2, leaving on slot 0) and applies the transition symbols: 't' bounces
// back to the slot it came from, 'r' advances to the third slot.  The
// closing relabelling carries the final section back onto the base one.
// ------------------------------------------------------------------------

struct WordChain {
  std::string symbols;
  std::vector<int> controls;                  // active slot of each arc
  std::vector<std::pair<int, int>> sections;  // (from, to) labels, size m+1
  Permutation relabel;
};

WordChain make_chain(std::string_view symbols) {
  if (symbols.empty()) throw std::invalid_argument("empty transition word");
  WordChain ch;
  ch.symbols.assign(symbols);
  ch.sections.push_back({2, 0});
  for (const char s : symbols) {
    if (s != 'r' && s != 't') throw std::invalid_argument("transition word must be over {r, t}");
    const auto [f, t] = ch.sections.back();
    ch.controls.push_back(t);
    const int nt = (s == 't') ? f : 3 - f - t;
    ch.sections.push_back({t, nt});
  }
  // Labels transform contravariantly, so the relabelling sigma must pull the
  // base labels from the final ones: sigma(2) = from_m, sigma(0) = to_m.
  const auto [fm, tm] = ch.sections.back();
  ch.relabel.p = {tm, 3 - fm - tm, fm};
  return ch;
}

int arc_count(const WordChain& ch) { return static_cast<int>(ch.controls.size()); }

// ------------------------------------------------------------------------
// Numeric closure system.
// ------------------------------------------------------------------------

State flow_chain(const State& z, const WordChain& ch, const std::vector<double>& times) {
  State s = z;
  for (std::size_t i = 0; i < ch.controls.size(); ++i)
    s = flow(s, vertex_control(ch.controls[i]), times[i]);
  return s;
}

std::vector<double> times_of(const WordChain& ch, const Eigen::VectorXd& theta) {
  std::vector<double> times(arc_count(ch));
  times[0] = 1.0;
  for (std::size_t i = 1; i < times.size(); ++i) times[i] = theta[static_cast<int>(i) - 1];
  return times;
}

double lambda_of(const Eigen::VectorXd& theta) { return theta[theta.size() - 1]; }

// Recover the switch point for fixed arc times and multiplier: the relation
// sigma(chain(z)) = g(lambda) z is affine in z.
bool closure_state(const WordChain& ch, const Eigen::VectorXd& theta, State* out) {
  const std::vector<double> times = times_of(ch, theta);
  const double lambda = lambda_of(theta);
  if (!(lambda > 1e-6 && lambda < 0.999)) return false;
  for (const double t : times)
    if (!(t > 1e-6 && t < 50.0)) return false;

  const State zero{};
  const Eigen::Matrix<double, 8, 1> c0 = pack(flow_chain(zero, ch, times));
  Eigen::Matrix<double, 8, 8> lin;
  for (int c = 0; c < 8; ++c) {
    Eigen::Matrix<double, 8, 1> e = Eigen::Matrix<double, 8, 1>::Zero();
    e[c] = 1.0;
    lin.col(c) = pack(flow_chain(unpack(e), ch, times)) - c0;
  }
  const Eigen::Matrix<double, 8, 8> perm = packed_permutation_matrix(ch.relabel);
  Eigen::Matrix<double, 8, 8> a = perm * lin;
  const double l2 = lambda * lambda;
  const double weight[4] = {l2, lambda, l2 * lambda, l2 * l2};  // x, y, phi, psi blocks
  for (int blk = 0; blk < 4; ++blk) {
    a(2 * blk, 2 * blk) -= weight[blk];
    a(2 * blk + 1, 2 * blk + 1) -= weight[blk];
  }
  const Eigen::FullPivLU<Eigen::Matrix<double, 8, 8>> lu(a);
  if (!lu.isInvertible()) return false;
  const Eigen::Matrix<double, 8, 1> zp = lu.solve(Eigen::Matrix<double, 8, 1>(-(perm * c0)));
  if (!zp.allFinite()) return false;
  *out = unpack(zp);
  return true;
}

// Tie conditions at the section points: one at the start point and one at
// the end of every arc but the last (the final tie is implied by the
// closure relation and the tie at the start).
bool closure_residuals(const WordChain& ch, const Eigen::VectorXd& theta, Eigen::VectorXd* r,
                       State* z_out) {
  State z;
  if (!closure_state(ch, theta, &z)) return false;
  const std::vector<double> times = times_of(ch, theta);
  const int m = arc_count(ch);
  r->resize(m);
  (*r)(0) = z.psi[ch.sections[0].first] - z.psi[ch.sections[0].second];
  State s = z;
  for (int i = 0; i + 1 < m; ++i) {
    s = flow(s, vertex_control(ch.controls[i]), times[i]);
    (*r)(i + 1) = s.psi[ch.controls[i]] - s.psi[ch.controls[i + 1]];
  }
  *z_out = z;
  return true;
}

struct Candidate {
  Eigen::VectorXd theta;
  State z;
  double resid = 0.0;
};

std::optional<Candidate> newton_polish(const WordChain& ch, Eigen::VectorXd theta) {
  const int n = static_cast<int>(theta.size());
  Eigen::VectorXd r;
  State z;
  if (!closure_residuals(ch, theta, &r, &z)) return std::nullopt;
  double rn = r.norm();
  for (int iter = 0; iter < 200; ++iter) {
    if (rn < 1e-13) break;
    Eigen::MatrixXd jac(n, n);
    for (int j = 0; j < n; ++j) {
      const double h = 1e-7 * std::max(1.0, std::abs(theta[j]));
      Eigen::VectorXd tp = theta;
      tp[j] += h;
      Eigen::VectorXd rp;
      State zp;
      if (!closure_residuals(ch, tp, &rp, &zp)) return std::nullopt;
      jac.col(j) = (rp - r) / h;
    }
    const Eigen::VectorXd step = jac.fullPivLu().solve(-r);
    if (!step.allFinite()) return std::nullopt;
    // Damped update: halve until the residual decreases.
    bool moved = false;
    for (double f = 1.0; f > 1e-4; f *= 0.5) {
      const Eigen::VectorXd trial = theta + f * step;
      Eigen::VectorXd rt;
      State zt;
      if (!closure_residuals(ch, trial, &rt, &zt)) continue;
      if (rt.norm() < rn) {
        theta = trial;
        r = rt;
        z = zt;
        rn = rt.norm();
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  if (rn > 1e-11 * (1.0 + state_norm(z))) return std::nullopt;
  return Candidate{theta, z, rn};
}

// Strict admissibility at every section point along the solved chain: the
// tied pair must be the selector minimum and the outgoing slot must carry
// the larger phi component.
bool admissible(const WordChain& ch, const Eigen::VectorXd& theta, const State& z) {
  const std::vector<double> times = times_of(ch, theta);
  const int m = arc_count(ch);
  State s = z;
  for (int i = 0; i <= m; ++i) {
    const auto [f, t] = ch.sections[i];
    const int third = 3 - f - t;
    const double scale = state_norm(s);
    const double tie = 0.5 * (s.psi[f] + s.psi[t]);
    if (!(s.psi[third] - tie > 1e-8 * scale)) return false;
    if (!(s.phi[t] - s.phi[f] > 1e-10 * scale)) return false;
    if (i < m) s = flow(s, vertex_control(ch.controls[i]), times[i]);
  }
  return true;
}

// Validate a Newton solution against the exact switch engine: every arc
// must genuinely end at its solved time with the expected new active slot.
// Returns the relative defect of the defining relation, or nothing if the
// exact orbit disagrees with the solved chain.
std::optional<double> exact_relation_residual(const WordChain& ch, const State& z,
                                              const std::vector<double>& times, double lambda) {
  const int m = arc_count(ch);
  State s = z;
  int partner = ch.sections[0].first;
  for (int i = 0; i < m; ++i) {
    const SwitchEvent ev =
        next_switch(s, Control{ControlKind::Vertex, ch.controls[i], 0}, 1e3, 0.0, partner);
    if (ev.kind != EventKind::Switch) return std::nullopt;
    if (std::abs(ev.t - times[i]) > 1e-7 * (1.0 + times[i])) return std::nullopt;
    const int expected =
        (i + 1 < m) ? ch.controls[i + 1] : ch.relabel.p[static_cast<std::size_t>(ch.controls[0])];
    if (ev.other != expected) return std::nullopt;
    partner = ch.controls[i];
    s = ev.state;
  }
  const State back = permute(ch.relabel, s);
  const State want = scale_act(lambda, z);
  return state_norm(back - want) / state_norm(z);
}

// A cycle for word w is primitive when it does not already close under a
// proper sub-period of the symbol string (e.g. the three-link cycle also
// solves the doubled word rr, with the square root of the multiplier per
// half).
bool primitive_cycle(const WordChain& ch, const State& z, const std::vector<double>& times,
                     double lambda) {
  const int m = arc_count(ch);
  for (int d = 1; d < m; ++d) {
    if (m % d != 0) continue;
    bool periodic = true;
    for (int i = 0; i + d < m && periodic; ++i)
      if (ch.symbols[i] != ch.symbols[i + d]) periodic = false;
    if (!periodic) continue;
    const WordChain sub = make_chain(ch.symbols.substr(0, d));
    const double sub_lambda = std::pow(lambda, static_cast<double>(d) / m);
    const std::vector<double> sub_times(times.begin(), times.begin() + d);
    const auto res = exact_relation_residual(sub, z, sub_times, sub_lambda);
    if (res && *res < 1e-7) return false;  // closes already under the sub-word
  }
  return true;
}

void sort_by_modulus(std::vector<std::complex<double>>* eigs) {
  std::sort(eigs->begin(), eigs->end(), [](std::complex<double> a, std::complex<double> b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
}

std::vector<std::complex<double>> eigenvalues_of(const Eigen::Matrix<double, 6, 6>& m) {
  const Eigen::EigenSolver<Eigen::Matrix<double, 6, 6>> es(m);
  std::vector<std::complex<double>> eigs(6);
  for (int i = 0; i < 6; ++i) eigs[i] = es.eigenvalues()[i];
  return eigs;
}

// Polish a section representative of the cycle against the exact stepping
// engine.  The Newton point is accurate in the start gauge, but tracing
// the relabelled return amplifies its residual along the strongly
// expanding transverse directions, so the traced defect is corrected
// directly with the reduced monodromy.
SectionPoint engine_polished_section(const WordChain& ch, const State& start) {
  SectionPoint base{normalize(start), ch.sections[0].first, ch.sections[0].second};
  const Eigen::Matrix<double, 8, 8> perm = packed_permutation_matrix(ch.relabel);
  double best_defect = std::numeric_limits<double>::infinity();
  SectionPoint best = base;
  for (int iter = 0; iter < 6; ++iter) {
    Eigen::Matrix<double, 8, 8> fwd = Eigen::Matrix<double, 8, 8>::Identity();
    SectionPoint p = base;
    bool ok = true;
    for (int i = 0; i < arc_count(ch); ++i) {
      const StepResult r = poincare_step(p);
      if (r.kind != EventKind::Switch) {
        ok = false;
        break;
      }
      fwd = poincare_step_differential(p, r) * fwd;
      p = r.next;
    }
    if (!ok) break;
    const Eigen::Matrix<double, 8, 1> defect = pack(permute(ch.relabel, p.z) - base.z);
    if (defect.norm() < best_defect) {
      best_defect = defect.norm();
      best = base;
    } else {
      break;  // stagnated at the stepping noise floor
    }
    if (best_defect < 1e-12) break;
    const Eigen::Matrix<double, 8, 6> basis = section_tangent_basis(base);
    const Eigen::Matrix<double, 6, 6> reduced = basis.transpose() * (perm * fwd) * basis;
    const Eigen::Matrix<double, 6, 6> shifted =
        reduced - Eigen::Matrix<double, 6, 6>::Identity();
    const Eigen::Matrix<double, 6, 1> delta =
        shifted.fullPivLu().solve(Eigen::Matrix<double, 6, 1>(-basis.transpose() * defect));
    if (!delta.allFinite()) break;
    base.z = normalize(unpack(pack(base.z) + basis * delta));
  }
  return best;
}

// Spectrum of the composed quotient differential at the fixed point,
// ordered by descending modulus.  The expanding part is read off the
// forward composite; eigenvalues inside the unit circle are re-derived
// from the backward composite, whose per-step inverses never materialize
// the large transverse norms that poison the forward conditioning of the
// contracting part.
std::vector<std::complex<double>> quotient_spectrum(const WordChain& ch,
                                                    const SectionPoint& base) {
  const int m = arc_count(ch);
  Eigen::Matrix<double, 8, 8> total = Eigen::Matrix<double, 8, 8>::Identity();
  SectionPoint p = base;
  for (int i = 0; i < m; ++i) {
    const StepResult r = poincare_step(p);
    if (r.kind != EventKind::Switch)
      throw CycleSolveError("return map degenerated while composing the cycle differential");
    total = poincare_step_differential(p, r) * total;
    p = r.next;
  }
  total = packed_permutation_matrix(ch.relabel) * total;
  const Eigen::Matrix<double, 8, 6> base_tangent = section_tangent_basis(base);
  std::vector<std::complex<double>> eigs =
      eigenvalues_of(base_tangent.transpose() * total * base_tangent);

  const bool has_contracting =
      std::any_of(eigs.begin(), eigs.end(), [](auto e) { return std::abs(e) < 1.0; });
  if (has_contracting) {
    std::vector<SectionPoint> q{base};
    std::vector<Eigen::Matrix<double, 8, 6>> bases{base_tangent};
    bool ok = true;
    for (int i = 1; i <= m && ok; ++i) {
      const StepResult b = poincare_inverse_step(q.back());
      if (b.kind != EventKind::Switch) {
        ok = false;
        break;
      }
      q.push_back(b.next);
      bases.push_back(section_tangent_basis(b.next));
    }
    Eigen::Matrix<double, 6, 6> acc = Eigen::Matrix<double, 6, 6>::Identity();
    for (int i = 1; i <= m && ok; ++i) {
      const StepResult f = poincare_step(q[i]);
      if (f.kind != EventKind::Switch) {
        ok = false;
        break;
      }
      const Eigen::Matrix<double, 6, 6> step =
          bases[i - 1].transpose() * poincare_step_differential(q[i], f) * bases[i];
      acc = step.fullPivLu().solve(acc);
    }
    if (ok) {
      // The backward orbit ends on the relabelled copy of the base section.
      const Eigen::Matrix<double, 6, 6> closing =
          bases[0].transpose() * packed_permutation_matrix(ch.relabel.inverse()) * bases[m];
      const std::vector<std::complex<double>> bw = eigenvalues_of(closing * acc);
      std::vector<bool> used(bw.size(), false);
      for (auto& e : eigs) {
        if (std::abs(e) >= 1.0) continue;
        int pick = -1;
        double miss = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < bw.size(); ++j) {
          if (used[j] || bw[j] == std::complex<double>(0.0)) continue;
          const double d = std::abs(1.0 / bw[j] - e);
          if (d < miss) {
            miss = d;
            pick = static_cast<int>(j);
          }
        }
        if (pick >= 0 && miss < 0.5 * std::abs(e) + 1e-6) {
          e = 1.0 / bw[pick];
          used[pick] = true;
        }
      }
    }
  }
  sort_by_modulus(&eigs);
  return eigs;
}

// ------------------------------------------------------------------------
// Seeding.
// ------------------------------------------------------------------------

std::vector<Eigen::VectorXd> grid_seeds(int dim) {
  std::vector<Eigen::VectorXd> out;
  if (dim == 1) {
    for (double l = 0.02; l < 0.97; l += 0.01) {
      Eigen::VectorXd t(1);
      t << l;
      out.push_back(t);
    }
  } else if (dim == 2) {
    for (double l = 0.03; l < 0.95; l += 0.03)
      for (double t2 = 0.08; t2 < 2.7; t2 += 0.08) {
        Eigen::VectorXd t(2);
        t << t2, l;
        out.push_back(t);
      }
  } else {
    // Quasi-random multistart for longer words; fixed seed for determinism.
    std::mt19937 rng(20240817u);
    std::uniform_real_distribution<double> dt(0.08, 2.2);
    std::uniform_real_distribution<double> dl(0.02, 0.9);
    for (int k = 0; k < 6000; ++k) {
      Eigen::VectorXd t(dim);
      for (int j = 0; j + 1 < dim; ++j) t[j] = dt(rng);
      t[dim - 1] = dl(rng);
      out.push_back(t);
    }
  }
  return out;
}

CycleResult solve_word_cycle(const std::string& symbols,
                             const std::vector<Eigen::VectorXd>& structured_seeds) {
  const WordChain ch = make_chain(symbols);
  const int m = arc_count(ch);

  // Rank the grid by residual norm; structured seeds go first untouched.
  std::vector<std::pair<double, Eigen::VectorXd>> ranked;
  for (const auto& seed : grid_seeds(m)) {
    Eigen::VectorXd r;
    State z;
    if (!closure_residuals(ch, seed, &r, &z)) continue;
    const double rn = r.norm();
    if (std::isfinite(rn)) ranked.emplace_back(rn, seed);
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Eigen::VectorXd> seeds = structured_seeds;
  for (std::size_t i = 0; i < ranked.size() && i < 160; ++i) seeds.push_back(ranked[i].second);

  std::vector<std::pair<Candidate, double>> valid;  // candidate + relation residual
  auto known = [&](const Eigen::VectorXd& theta) {
    for (const auto& [cand, res] : valid)
      if ((cand.theta - theta).lpNorm<Eigen::Infinity>() <
          1e-7 * (1.0 + theta.lpNorm<Eigen::Infinity>()))
        return true;
    return false;
  };

  for (const auto& seed : seeds) {
    const auto cand = newton_polish(ch, seed);
    if (!cand) continue;
    if (known(cand->theta)) continue;
    if (!admissible(ch, cand->theta, cand->z)) continue;
    const std::vector<double> times = times_of(ch, cand->theta);
    const double lambda = lambda_of(cand->theta);
    const auto rel = exact_relation_residual(ch, cand->z, times, lambda);
    if (!rel || *rel > 1e-9) continue;
    if (!primitive_cycle(ch, cand->z, times, lambda)) continue;
    valid.emplace_back(*cand, *rel);
  }
  if (valid.empty())
    throw CycleSolveError("no admissible self-similar cycle found for word " + symbols);

  // Deterministic choice: the candidate with the smallest multiplier.
  std::sort(valid.begin(), valid.end(), [](const auto& a, const auto& b) {
    return lambda_of(a.first.theta) < lambda_of(b.first.theta);
  });
  const Candidate& best = valid.front().first;

  CycleResult out;
  out.start = best.z;
  out.section = engine_polished_section(ch, best.z);
  out.relabel = ch.relabel;
  out.controls = ch.controls;
  out.arc_times = times_of(ch, best.theta);
  out.lambda0 = lambda_of(best.theta);
  out.word = symbols;
  out.relation_residual = valid.front().second;
  out.eigenvalues = quotient_spectrum(ch, out.section);
  return out;
}

// ------------------------------------------------------------------------
// Exact elimination for the three-link ansatz: rational functions of the
// multiplier.
// ------------------------------------------------------------------------

RPoly one_poly() { return int_poly({1}); }

struct RatFunc {
  RPoly num;
  RPoly den;

  RatFunc() : den(one_poly()) {}
  explicit RatFunc(RPoly n) : num(std::move(n)), den(one_poly()) {}
  RatFunc(RPoly n, RPoly d) : num(std::move(n)), den(std::move(d)) { reduce(); }

  static RatFunc constant(const Rational& v) { return RatFunc(RPoly(std::vector<Rational>{v})); }

  void reduce() {
    if (den.is_zero()) throw std::logic_error("rational function with zero denominator");
    if (num.is_zero()) {
      den = one_poly();
      return;
    }
    const RPoly g = RPoly::gcd(num, den);
    if (g.degree() > 0) {
      num = RPoly::divide_exact(num, g);
      den = RPoly::divide_exact(den, g);
    }
    const Rational lead = den.c.back();
    if (lead != Rational(1)) {
      const Rational inv = Rational(1) / lead;
      num = num * inv;
      den = den * inv;
    }
  }

  friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num * b.den + b.num * a.den, a.den * b.den);
  }
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num * b.den - b.num * a.den, a.den * b.den);
  }
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num * b.num, a.den * b.den);
  }
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
    if (b.num.is_zero()) throw std::logic_error("division by the zero rational function");
    return RatFunc(a.num * b.den, a.den * b.num);
  }
  RatFunc operator-() const {
    RatFunc r = *this;
    r.num = r.num * Rational(-1);
    return r;
  }
};

using RatTriple = std::array<RatFunc, 3>;

// Solve v[sigma(i)] + b[sigma(i)] = X v[i] for the order-three relabelling
// sigma = (0 1 2): the chain closes after three substitutions.
RatTriple cyclic_block_solve(const RatTriple& b, const RatFunc& x) {
  const RatFunc one = RatFunc::constant(1);
  RatTriple v;
  v[0] = -(b[0] + x * b[2] + x * x * b[1]) / (one - x * x * x);
  v[1] = x * v[0] - b[1];
  v[2] = x * v[1] - b[2];
  return v;
}

const std::array<RPoly, 12>& cyclotomics() {
  static const std::array<RPoly, 12> polys = {
      int_poly({-1, 1}),
      int_poly({1, 1}),
      int_poly({1, 1, 1}),
      int_poly({1, 0, 1}),
      int_poly({1, 1, 1, 1, 1}),
      int_poly({1, -1, 1}),
      int_poly({1, 1, 1, 1, 1, 1, 1}),
      int_poly({1, 0, 0, 0, 1}),
      int_poly({1, 0, 0, 1, 0, 0, 1}),
      int_poly({1, -1, 1, -1, 1}),
      int_poly({1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1}),
      int_poly({1, 0, -1, 0, 1}),
  };
  return polys;
}

// Scale a rational-coefficient polynomial to primitive integer form with a
// positive leading coefficient.
RPoly primitive_integer(const RPoly& p) {
  if (p.is_zero()) return p;
  BigInt common_den = 1;
  for (const auto& c : p.c) common_den = boost::multiprecision::lcm(common_den, denominator(c));
  std::vector<BigInt> ints;
  ints.reserve(p.c.size());
  for (const auto& c : p.c) ints.push_back(numerator(c) * (common_den / denominator(c)));
  BigInt content = 0;
  for (const auto& v : ints) content = boost::multiprecision::gcd(content, v);
  if (content == 0) content = 1;
  if (ints.back() < 0) content = -content;
  std::vector<Rational> out;
  out.reserve(ints.size());
  for (const auto& v : ints) out.emplace_back(v / content);
  return RPoly(std::move(out));
}

// Eliminate the three-link closure: solve the relation blocks over exact
// rational functions of the multiplier, then reduce the tie condition at
// the start point to a primitive integer polynomial.
RPoly eliminate_three_link_closure() {
  const RatFunc lam(int_poly({0, 1}));
  const BaryVec u = vertex_control(0);  // (-2, 1, 1), exact small integers
  RatTriple uc;
  for (int i = 0; i < 3; ++i) uc[i] = RatFunc::constant(Rational(static_cast<long>(u[i])));
  auto scaled = [](const RatTriple& t, const Rational& f) {
    RatTriple r;
    for (int i = 0; i < 3; ++i) r[i] = t[i] * RatFunc::constant(f);
    return r;
  };
  auto added = [](const RatTriple& a, const RatTriple& b) {
    RatTriple r;
    for (int i = 0; i < 3; ++i) r[i] = a[i] + b[i];
    return r;
  };

  // y(1) = y0 + u, x(1) = x0 + y0 + u/2, phi(1) = phi0 + x0 + y0/2 + u/6,
  // psi(1) = psi0 - (phi0 + x0/2 + y0/6 + u/24); each block closes under
  // the relabelling with its own power of the multiplier.
  const RatTriple y = cyclic_block_solve(uc, lam);
  const RatTriple x = cyclic_block_solve(added(y, scaled(uc, Rational(1, 2))), lam * lam);
  const RatTriple phi = cyclic_block_solve(
      added(x, added(scaled(y, Rational(1, 2)), scaled(uc, Rational(1, 6)))), lam * lam * lam);
  RatTriple psi_b =
      added(phi, added(scaled(x, Rational(1, 2)),
                       added(scaled(y, Rational(1, 6)), scaled(uc, Rational(1, 24)))));
  for (int i = 0; i < 3; ++i) psi_b[i] = -psi_b[i];
  const RatTriple psi = cyclic_block_solve(psi_b, lam * lam * lam * lam);

  const RatFunc closure = psi[0] - psi[2];
  RPoly n = closure.num;
  if (n.is_zero()) throw CycleSolveError("three-link closure degenerated to zero");

  // Strip the trivial factors: powers of the multiplier and roots of unity
  // (neither can be the multiplier of a contracting cycle).
  while (!n.c.empty() && n.c.front() == Rational(0)) n.c.erase(n.c.begin());
  for (const RPoly& cyc : cyclotomics()) {
    for (;;) {
      auto [q, r] = RPoly::divmod(n, cyc);
      if (!r.is_zero() || q.is_zero()) break;
      n = q;
    }
  }
  return primitive_integer(n);
}

// ------------------------------------------------------------------------
// Letter words.
// ------------------------------------------------------------------------

const CycleResult& letter_cycle(char letter) {
  static std::map<char, CycleResult> cache;
  auto it = cache.find(letter);
  if (it == cache.end())
    it = cache.emplace(letter, solve_word_cycle(expand_word({&letter, 1}), {})).first;
  return it->second;
}

}  // namespace

const RPoly& three_link_closure_poly() {
  static const RPoly p = int_poly({1, 0, -4, -7, -4, 0, 1});
  return p;
}

const RPoly& four_link_closure_poly() {
  static const RPoly p = int_poly(
      {1,         4,         60,        220,       -607,      -5080,     -19700,    -73944,
       -192258,   -416272,   -918956,   -1609184,  -2528300,  -4868880,  -5019696,  -10839184,
       -8659545,  -18568404, -12399696, -27180572, -14695579, -31988656, -16556344, -31988656,
       -14695579, -27180572, -12399696, -18568404, -8659545,  -10839184, -5019696,  -4868880,
       -2528300,  -1609184,  -918956,   -416272,   -192258,   -73944,    -19700,    -5080,
       -607,      220,       60,        4,         1});
  return p;
}

const RPoly& six_link_closure_poly() {
  static const RPoly p = int_poly({1,   -12, 30,   66,   -117, -504, -207, 942,  1271, -390, -1599,
                                   -390, 1271, 942, -207, -504, -117, 66,  30,  -12, 1});
  return p;
}

std::string expand_word(std::string_view word) {
  if (word.empty()) throw std::invalid_argument("empty word");
  const bool raw = word.find_first_not_of("rt") == std::string_view::npos;
  if (raw) return std::string(word);
  std::string out;
  for (const char c : word) {
    switch (c) {
      case 'A': out += "rr"; break;
      case 'B': out += "tr"; break;
      case 'C': out += "trt"; break;
      default: throw std::invalid_argument("word must be over {A, B, C} or over {r, t}");
    }
  }
  return out;
}

CycleResult solve_simplified_cycle(SimplifiedCycle which) {
  switch (which) {
    case SimplifiedCycle::ThreeLink: {
      const RPoly closure = eliminate_three_link_closure();
      const Rational width(BigInt(1), BigInt(1) << 45);
      const auto roots = isolate_roots(closure, Rational(0), Rational(1), width);
      if (roots.size() != 1)
        throw CycleSolveError("three-link closure lacks a unique root in the unit interval");
      const double lambda = refine_root(closure, roots[0]);
      Eigen::VectorXd seed(1);
      seed << lambda;
      CycleResult res = solve_word_cycle("r", {seed});
      res.char_poly = closure;
      return res;
    }
    case SimplifiedCycle::FourLink: return solve_word_cycle("rt", {});
    case SimplifiedCycle::SixLink: return solve_word_cycle("rr", {});
  }
  throw std::invalid_argument("unknown simplified cycle family");
}

CycleResult fixed_point_of_word(std::string_view word) {
  const std::string symbols = expand_word(word);
  static std::map<std::string, CycleResult> cache;
  if (const auto it = cache.find(symbols); it != cache.end()) return it->second;
  std::vector<Eigen::VectorXd> structured;
  const bool letters = word.find_first_not_of("ABC") == std::string_view::npos;
  if (letters && word.size() > 1) {
    // Concatenate the single-letter cycles as a seed: each block is scaled
    // by the accumulated contraction of the blocks before it.
    std::vector<double> times;
    double carried = 1.0, lambda = 1.0;
    for (const char c : word) {
      const CycleResult& part = letter_cycle(c);
      for (const double t : part.arc_times) times.push_back(carried * t);
      carried *= part.lambda0;
      lambda *= part.lambda0;
    }
    Eigen::VectorXd seed(static_cast<int>(times.size()));
    for (std::size_t i = 1; i < times.size(); ++i) seed[static_cast<int>(i) - 1] = times[i];
    seed[static_cast<int>(times.size()) - 1] = lambda;
    structured.push_back(seed);
  }
  return cache.emplace(symbols, solve_word_cycle(symbols, structured)).first->second;
}

}  // namespace vortex
