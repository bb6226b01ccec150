#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace chordal_sdp {

// Undirected graph on vertices 0..n-1. Self-loops are implicit for every
// vertex and are not stored in the neighbor lists. Neighbor lists are kept
// sorted and duplicate free, so two graphs with the same edge set compare
// equal.
class SparsityGraph {
 public:
  SparsityGraph() = default;
  explicit SparsityGraph(int n);

  static SparsityGraph from_edges(int n, std::span<const std::pair<int, int>> edges);
  static SparsityGraph complete(int n);

  int size() const noexcept { return static_cast<int>(adj_.size()); }

  // Number of off-diagonal edges (each unordered pair counted once).
  std::int64_t num_edges() const noexcept;

  void add_edge(int i, int j);
  bool has_edge(int i, int j) const;
  std::span<const int> neighbors(int v) const { return adj_[v]; }

  // Edge list (i < j), sorted.
  std::vector<std::pair<int, int>> edges() const;

  bool contains(const SparsityGraph& other) const;

  friend bool operator==(const SparsityGraph&, const SparsityGraph&) = default;

 private:
  std::vector<std::vector<int>> adj_;
};

// perm[pos] is the vertex eliminated at position pos.
class EliminationOrdering {
 public:
  EliminationOrdering() = default;
  explicit EliminationOrdering(std::vector<int> perm);

  static EliminationOrdering identity(int n);

  int size() const noexcept { return static_cast<int>(perm_.size()); }
  int vertex(int pos) const { return perm_[pos]; }
  int position(int v) const { return pos_[v]; }
  std::span<const int> perm() const { return perm_; }

 private:
  std::vector<int> perm_;
  std::vector<int> pos_;
};

// Maximal cliques; each clique sorted ascending, cliques ordered by their
// smallest vertex.
struct CliqueSet {
  std::vector<std::vector<int>> cliques;

  int count() const noexcept { return static_cast<int>(cliques.size()); }
  int max_size() const noexcept;
  int min_size() const noexcept;
};

struct ChordalityResult {
  bool chordal = false;
  std::optional<EliminationOrdering> ordering;
};

struct ChordalExtension {
  SparsityGraph graph;
  EliminationOrdering ordering;
};

// Maximum cardinality search followed by a zero-fill check of the reversed
// visit order. When chordal, the returned ordering is perfect.
ChordalityResult is_chordal(const SparsityGraph& g);

bool is_perfect_elimination_ordering(const SparsityGraph& g, const EliminationOrdering& order);

// Returns g unchanged (with its MCS ordering) when it is already chordal,
// otherwise the filled graph of symbolic elimination under a minimum-degree
// ordering.
ChordalExtension chordal_extend(const SparsityGraph& g);

// Candidates {v} + later neighbors of v, keeping only the maximal ones.
// Throws Error(kNotChordal) when ordering is not perfect for g.
CliqueSet maximal_cliques(const SparsityGraph& g, const EliminationOrdering& ordering);

}  // namespace chordal_sdp
