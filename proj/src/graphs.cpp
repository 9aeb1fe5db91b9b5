// Transition graphs and word logic.  The graphs are fixed finite objects
// built from the switching rules: r-transitions advance an ordered tie
// pair (i, j) to (j, k) with k the third slot, t-transitions reverse it to
// (j, i).  Entropy comes from the adjacency Perron root, bracketed by
// Collatz-Wielandt ratios of a positive power iterate.
#include "vortex/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vortex {

namespace {

/// Ordered tie pairs in a fixed enumeration order.
constexpr std::array<std::array<int, 2>, 6> kOrderedPairs = {
    {{0, 1}, {0, 2}, {1, 0}, {1, 2}, {2, 0}, {2, 1}}};

/// The five stage transitions of the automaton and their switch marks.
struct StageEdge {
  int from, to;
  char mark;
};
constexpr std::array<StageEdge, 5> kStageEdges = {
    {{0, 1, 'r'}, {1, 0, 'r'}, {1, 2, 't'}, {2, 3, 'r'}, {3, 1, 't'}}};

constexpr const char* kStageNames = "ABCD";

std::string stage_pair_label(int stage, int i, int j) {
  return std::string(1, kStageNames[stage]) + static_cast<char>('0' + i) +
         static_cast<char>('0' + j);
}

/// Depth-first pass collecting reachability from `start` along `adj`.
std::vector<char> reachable(const std::vector<std::vector<int>>& adj, int start) {
  std::vector<char> seen(adj.size(), 0);
  std::vector<int> stack = {start};
  seen[start] = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
  }
  return seen;
}

std::vector<std::vector<int>> out_lists(const MarkovGraph& g) {
  std::vector<std::vector<int>> adj(g.vertex_count());
  for (const auto& e : g.edges) adj[e[0]].push_back(e[1]);
  return adj;
}

std::vector<std::vector<int>> in_lists(const MarkovGraph& g) {
  std::vector<std::vector<int>> adj(g.vertex_count());
  for (const auto& e : g.edges) adj[e[1]].push_back(e[0]);
  return adj;
}

/// Shared power iteration: Perron root bracket and eigenvector.
std::pair<double, Eigen::VectorXd> perron_iterate(const MarkovGraph& g) {
  if (!is_strongly_connected(g))
    throw std::invalid_argument("perron root needs a strongly connected graph");
  const int n = g.vertex_count();
  // Shift by the identity: the iteration matrix of a strongly connected
  // graph with self-weights is primitive, so the ratio bounds close in.
  const Eigen::MatrixXd b = g.adjacency() + Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
  double lo = 0.0, hi = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 100000; ++it) {
    const Eigen::VectorXd y = b * x;
    lo = std::numeric_limits<double>::infinity();
    hi = 0.0;
    for (int i = 0; i < n; ++i) {
      const double ratio = y[i] / x[i];
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    x = y / y.maxCoeff();
    if (hi - lo <= 1e-13 * hi) break;
  }
  return {0.5 * (lo + hi) - 1.0, x};
}

}  // namespace

int MarkovGraph::index_of(std::string_view label) const {
  for (int i = 0; i < vertex_count(); ++i)
    if (vertices[i] == label) return i;
  return -1;
}

bool MarkovGraph::has_edge(int from, int to) const {
  for (const auto& e : edges)
    if (e[0] == from && e[1] == to) return true;
  return false;
}

Eigen::MatrixXd MarkovGraph::adjacency() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(vertex_count(), vertex_count());
  for (const auto& e : edges) a(e[0], e[1]) += 1.0;
  return a;
}

MarkovGraph switching_automaton() {
  MarkovGraph g;
  for (int s = 0; s < 4; ++s) g.vertices.emplace_back(1, kStageNames[s]);
  for (const auto& e : kStageEdges) {
    g.edges.push_back({e.from, e.to});
    g.edge_marks.push_back(e.mark);
  }
  return g;
}

MarkovGraph section_label_graph() {
  MarkovGraph g;
  for (int s = 0; s < 4; ++s)
    for (const auto& p : kOrderedPairs) g.vertices.push_back(stage_pair_label(s, p[0], p[1]));
  auto vertex = [](int stage, int i, int j) {
    for (int k = 0; k < 6; ++k)
      if (kOrderedPairs[k][0] == i && kOrderedPairs[k][1] == j) return stage * 6 + k;
    return -1;
  };
  for (const auto& e : kStageEdges)
    for (const auto& p : kOrderedPairs) {
      const int i = p[0], j = p[1];
      const int target =
          e.mark == 'r' ? vertex(e.to, j, 3 - i - j) : vertex(e.to, j, i);
      g.edges.push_back({vertex(e.from, i, j), target});
      g.edge_marks.push_back(e.mark);
    }
  return g;
}

MarkovGraph section_quotient_graph() {
  const MarkovGraph full = section_label_graph();
  const auto components = strongly_connected_components(full);
  // Deterministic pick: the component holding the first vertex.
  std::vector<int> keep;
  for (const auto& comp : components)
    if (std::find(comp.begin(), comp.end(), 0) != comp.end()) keep = comp;
  MarkovGraph g = induced_subgraph(full, keep);
  // The half contains each unordered pair once per stage; write the labels
  // with sorted digits to reflect that.
  for (auto& label : g.vertices)
    if (label[1] > label[2]) std::swap(label[1], label[2]);
  return g;
}

MarkovGraph letter_pair_graph() {
  MarkovGraph g;
  const char letters[2] = {'A', 'C'};
  for (char a : letters)
    for (char b : letters) g.vertices.push_back(std::string{a, b});
  // Pair (a, b) shifts to (b, c) for either continuation letter c.
  for (int v = 0; v < 4; ++v)
    for (int c = 0; c < 2; ++c) g.edges.push_back({v, (v % 2) * 2 + c});
  return g;
}

const std::vector<std::vector<int>>& elementary_pair_cycles() {
  static const std::vector<std::vector<int>> cycles = {
      {0, 0}, {3, 3}, {0, 1, 2, 0}, {3, 2, 1, 3}, {0, 1, 3, 2, 0}, {1, 2, 1}};
  return cycles;
}

std::vector<std::vector<int>> strongly_connected_components(const MarkovGraph& g) {
  const auto out = out_lists(g);
  const auto in = in_lists(g);
  const int n = g.vertex_count();
  std::vector<char> assigned(n, 0);
  std::vector<std::vector<int>> components;
  for (int v = 0; v < n; ++v) {
    if (assigned[v]) continue;
    const auto fwd = reachable(out, v);
    const auto bwd = reachable(in, v);
    std::vector<int> comp;
    for (int w = 0; w < n; ++w)
      if (fwd[w] && bwd[w] && !assigned[w]) {
        assigned[w] = 1;
        comp.push_back(w);
      }
    components.push_back(std::move(comp));
  }
  return components;
}

MarkovGraph induced_subgraph(const MarkovGraph& g, const std::vector<int>& keep) {
  std::vector<int> remap(g.vertex_count(), -1);
  MarkovGraph sub;
  for (int i = 0; i < static_cast<int>(keep.size()); ++i) {
    remap[keep[i]] = i;
    sub.vertices.push_back(g.vertices[keep[i]]);
  }
  for (int e = 0; e < g.edge_count(); ++e) {
    const int a = remap[g.edges[e][0]], b = remap[g.edges[e][1]];
    if (a >= 0 && b >= 0) {
      sub.edges.push_back({a, b});
      if (!g.edge_marks.empty()) sub.edge_marks.push_back(g.edge_marks[e]);
    }
  }
  return sub;
}

bool is_strongly_connected(const MarkovGraph& g) {
  if (g.vertex_count() == 0) return false;
  const auto fwd = reachable(out_lists(g), 0);
  const auto bwd = reachable(in_lists(g), 0);
  for (int v = 0; v < g.vertex_count(); ++v)
    if (!fwd[v] || !bwd[v]) return false;
  return true;
}

double perron_root(const MarkovGraph& g) { return perron_iterate(g).first; }

Eigen::VectorXd perron_vector(const MarkovGraph& g) { return perron_iterate(g).second; }

double entropy(const MarkovGraph& g) { return std::log2(perron_root(g)); }

double plastic_number() {
  const double d = std::sqrt(69.0) / 18.0;
  return std::cbrt(0.5 + d) + std::cbrt(0.5 - d);
}

SymbolicWord parse_switches(std::string_view switches) {
  const int n = static_cast<int>(switches.size());
  // trim[i]: smallest trailing length left unparsed when parsing from i;
  // choose[i]: word length realising it (0 = stop here), ties to the
  // longer word so that C wins over B when both complete.
  std::vector<int> trim(n + 1, 0), choose(n + 1, 0);
  for (int i = n - 1; i >= 0; --i) {
    trim[i] = n - i;
    choose[i] = 0;
    auto consider = [&](int len) {
      if (trim[i + len] < trim[i] || (trim[i + len] == trim[i] && len > choose[i])) {
        trim[i] = trim[i + len];
        choose[i] = len;
      }
    };
    if (i + 1 < n && switches[i + 1] == 'r') {
      if (switches[i] == 'r') consider(2);  // A
      if (switches[i] == 't') {
        consider(2);                                  // B
        if (i + 2 < n && switches[i + 2] == 't') consider(3);  // C
      }
    }
  }
  // Trim the shortest possible prefix, counting total unparsed symbols.
  int start = 0, best = trim[0];
  for (int j = 1; j <= n; ++j)
    if (j + trim[j] < start + best) {
      start = j;
      best = trim[j];
    }
  SymbolicWord w;
  w.switches = std::string(switches);
  w.prefix = std::string(switches.substr(0, start));
  int i = start;
  while (choose[i] != 0) {
    w.letters.push_back(choose[i] == 3 ? 'C' : (switches[i] == 'r' ? 'A' : 'B'));
    i += choose[i];
  }
  w.suffix = std::string(switches.substr(i));
  return w;
}

SymbolicWord encode(const std::vector<SectionPoint>& orbit) {
  std::string switches;
  for (std::size_t k = 0; k + 1 < orbit.size(); ++k)
    switches.push_back(transition_type(orbit[k], orbit[k + 1]));
  return parse_switches(switches);
}

bool forbidden_word_check(std::string_view letters) {
  auto in_ac = [](char c) { return c == 'A' || c == 'C'; };
  for (std::size_t k = 0; k + 2 < letters.size(); ++k)
    if (letters[k] == 'B' && in_ac(letters[k + 1]) && in_ac(letters[k + 2])) return false;
  return true;
}

bool left_extension_check(std::string_view w) {
  const int n = static_cast<int>(w.size());
  auto in_ac = [](char c) { return c == 'A' || c == 'C'; };
  auto all_ac = [&](int lo, int hi) {
    for (int k = lo; k < hi; ++k)
      if (!in_ac(w[k])) return false;
    return true;
  };
  for (int k = 0; k + 1 < n; ++k) {
    if (w[k] != 'B' || !in_ac(w[k + 1])) continue;
    int a = k;
    while (a > 0 && w[a - 1] == 'B') --a;
    const int len = k - a + 1;
    bool ok = false;
    if (a == 0) {
      // Window cut inside the B block: at most four of them ever precede
      // a letter from {A, C}.
      ok = len <= 4;
    } else if (len == 2) {
      if (all_ac(0, a)) {
        ok = true;  // ...BB| context
      } else if (in_ac(w[a - 1]) && a >= 3 && w[a - 2] == 'B' && w[a - 3] == 'B') {
        // ...ABBjBB| context: the left block is exactly BB, preceded by A.
        const int c = a - 3;
        if (c == 0)
          ok = true;  // cut at the left B block
        else if (w[c - 1] == 'A' && all_ac(0, c - 1))
          ok = true;
      } else if (in_ac(w[a - 1]) && a == 2 && w[0] == 'B') {
        ok = true;  // cut inside the left B block
      }
    } else if (len == 4) {
      // ...AABBBB| context.
      if (a >= 2 && w[a - 1] == 'A' && w[a - 2] == 'A' && all_ac(0, a - 2))
        ok = true;
      else if (a == 1 && w[0] == 'A')
        ok = true;
    }
    if (!ok) return false;
  }
  return true;
}

}  // namespace vortex
