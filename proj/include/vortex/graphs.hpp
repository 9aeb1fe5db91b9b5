// Finite transition graphs of the switching symbolic dynamics and the word
// logic on top of them: the five-edge automaton generating admissible
// switch sequences, its 24-vertex lift by ordered section labels, the
// strongly connected 12-vertex quotient that carries the growth rate of
// admissible words, and the four-vertex letter-pair graph whose elementary
// cycles index the contraction estimates.  Entropy is measured as the
// base-2 logarithm of the adjacency Perron root.
#pragma once

#include "vortex/switching.hpp"

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace vortex {

/// Directed graph with labelled vertices and optionally marked edges.
struct MarkovGraph {
  std::vector<std::string> vertices;
  std::vector<std::array<int, 2>> edges;  ///< (source, target) vertex indices
  std::string edge_marks;                 ///< one switch symbol per edge, or empty

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int edge_count() const { return static_cast<int>(edges.size()); }
  /// Index of the vertex with the given label, or -1 if absent.
  int index_of(std::string_view label) const;
  bool has_edge(int from, int to) const;
  /// Dense 0/1 adjacency matrix, row = source vertex.
  Eigen::MatrixXd adjacency() const;
};

/// The four-stage automaton whose r/t-marked edges spell exactly the
/// switch sequences realisable by returning orbits.  Stage labels are A-D;
/// the r-cycle through the first two stages spells the letter A = rr, the
/// three-edge cycle through the last three spells C = trt.
MarkovGraph switching_automaton();

/// Lift of the automaton by the ordered tie pair of the section carrying
/// the orbit: vertices are stage plus ordered pair (24 of them, labels
/// like "B20"), r-edges advance the pair to (to, third) and t-edges swap
/// it.  Splits into two isomorphic strongly connected halves.
MarkovGraph section_label_graph();

/// One strongly connected half of the section-label graph, with the tie
/// pairs written unordered (12 vertices).  This is the graph whose
/// adjacency Perron root measures the growth of admissible words; the
/// full lift double-covers it.
MarkovGraph section_quotient_graph();

/// Graph on consecutive-letter pairs of words over {A, C}: four vertices
/// "AA", "AC", "CA", "CC" and all eight pair transitions (the letter shift
/// in two-block presentation).
MarkovGraph letter_pair_graph();

/// The six elementary cycles of the letter-pair graph used to index the
/// cycle-wise contraction and expansion exponents, as closed vertex
/// sequences (first vertex repeated at the end).  Together they traverse
/// every edge.
const std::vector<std::vector<int>>& elementary_pair_cycles();

/// Strongly connected components as vertex-index sets, each sorted, the
/// list ordered by smallest member.
std::vector<std::vector<int>> strongly_connected_components(const MarkovGraph& g);

/// Subgraph on the given vertices (indices into g), keeping their order.
MarkovGraph induced_subgraph(const MarkovGraph& g, const std::vector<int>& keep);

bool is_strongly_connected(const MarkovGraph& g);

/// Adjacency Perron root of a strongly connected graph, by power iteration
/// with Collatz-Wielandt bounds until they agree to 1e-12.  Throws
/// std::invalid_argument on a graph that is not strongly connected.
double perron_root(const MarkovGraph& g);

/// Perron eigenvector (entrywise positive, maximum entry 1).
Eigen::VectorXd perron_vector(const MarkovGraph& g);

/// Topological entropy of the edge shift: log2 of the Perron root.
double entropy(const MarkovGraph& g);

/// Closed form of the admissible-word growth rate: the real root of
/// x^3 = x + 1 (the plastic number), via Cardano radicals.
double plastic_number();

/// A traced orbit encoded into symbols: the switch letters r/t of each
/// section-to-section transition, and their parse into the three-letter
/// words A = rr, B = tr, C = trt.  Unparseable leading and trailing
/// switches are trimmed into `prefix` and `suffix`.
struct SymbolicWord {
  std::string switches;
  std::string letters;
  std::string prefix;
  std::string suffix;
};

/// Parse a switch string over {r, t} into letters, trimming as little as
/// possible (ties between B and C resolved toward the longer word C).
SymbolicWord parse_switches(std::string_view switches);

/// Encode a traced section orbit: transition types of consecutive points,
/// then the letter parse.
SymbolicWord encode(const std::vector<SectionPoint>& orbit);

/// True iff the letter word avoids the excluded pattern B followed by two
/// symbols from {A, C}.
bool forbidden_word_check(std::string_view letters);

/// True iff every occurrence of B directly followed by A or C sits in one
/// of the admissible left contexts ...AABBBB|, ...ABBjBB| or ...BB| (dots
/// ranging over {A, C} only, j in {A, C}), allowing the window to cut a
/// context at its left edge.
bool left_extension_check(std::string_view letters);

}  // namespace vortex
