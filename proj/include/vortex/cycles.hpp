// Self-similar periodic orbits of the section return map.  A cycle is a
// section point that the return map sends, after m steps and a slot
// relabelling, to a scaled copy of itself; the scale factor of one relation
// application is the multiplier lambda0 in (0,1).  The shortest families
// admit a symmetric ansatz whose closure reduces to one polynomial in
// lambda0 (eliminated exactly for the three-link family); longer cycles
// are specified by the transition word of their steps and solved by Newton
// iteration on the arc times and the multiplier, with the switch point
// recovered from the linear closure equations.
#pragma once

#include "vortex/polynomial.hpp"
#include "vortex/switching.hpp"

#include <complex>
#include <string>
#include <string_view>
#include <vector>

namespace vortex {

/// The three shortest self-similar families.
enum class SimplifiedCycle {
  ThreeLink,  ///< one step per relation, relabelling of order 3
  FourLink,   ///< two steps per relation, relabelling a transposition
  SixLink,    ///< two steps per relation, relabelling of order 3
};

/// A solved self-similar cycle.  `start` is the representative switch point
/// in the gauge where the first arc lasts exactly one time unit; `section`
/// is the same point rescaled to the unit spheroid, where the quotient
/// return map acts.
struct CycleResult {
  State start;
  SectionPoint section;
  Permutation relabel;            ///< sigma with sigma(Phi^m(start)) = g(lambda0) start
  std::vector<int> controls;      ///< vertex index of each of the m arcs
  std::vector<double> arc_times;  ///< arc durations in the gauge of `start`
  double lambda0 = 0.0;           ///< scale multiplier of one relation application
  std::string word;               ///< transition symbols of the m steps, over {r, t}
  RPoly char_poly;                ///< eliminated closure polynomial (empty unless eliminated)
  std::vector<std::complex<double>> eigenvalues;  ///< spectrum of the composed quotient
                                                  ///< differential, by descending modulus
  double relation_residual = 0.0;  ///< defining-relation defect, relative to |start|
};

/// Raised when no admissible cycle is found (no closure root in the unit
/// interval, switch-point inequalities failing at every candidate, or
/// Newton divergence from all seeds).
struct CycleSolveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Closure polynomials of the three shortest families, with exact integer
/// coefficients.  The multiplier lambda0 is the unique root in (0,1); the
/// reversal symmetry of the flow makes every one of them reciprocal.  The
/// three-link polynomial is reproduced coefficient-for-coefficient by the
/// exact elimination in solve_simplified_cycle; the longer two are kept as
/// frozen references and verified numerically at the solved root.
const RPoly& three_link_closure_poly();
const RPoly& four_link_closure_poly();
const RPoly& six_link_closure_poly();

/// Solve one of the symmetric ansatze.  The three-link branch eliminates
/// the closure condition exactly over the rationals (char_poly is filled
/// with the integer-coefficient result and lambda0 with its isolated root
/// in (0,1)); the other two solve the two-variable closure system (second
/// arc time, multiplier) by seeded Newton iteration.
CycleResult solve_simplified_cycle(SimplifiedCycle which);

/// Fixed point of the quotient return map composed along a transition word
/// and closed by the slot relabelling that returns the final section to the
/// base one.  Accepts a word over {r, t}, or over the letters {A, B, C}
/// which abbreviate the blocks rr, tr, trt.  Newton iteration runs on the
/// arc times and the multiplier from structured and quasi-random seeds; the
/// returned cycle carries the eigenvalues of the composed quotient
/// differential at the fixed point.
CycleResult fixed_point_of_word(std::string_view word);

/// Expansion of a letter word over {A, B, C} into transition symbols.
std::string expand_word(std::string_view word);

}  // namespace vortex
