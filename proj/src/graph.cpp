#include "chordal_sdp/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#include "chordal_sdp/error.hpp"

namespace chordal_sdp {

namespace {

void check_vertex(int v, int n) {
  if (v < 0 || v >= n) {
    throw Error(ErrorCode::kInvalidArgument,
                "vertex " + std::to_string(v) + " out of range for graph of size " +
                    std::to_string(n));
  }
}

// Neighbors of v eliminated after v.
std::vector<int> later_neighbors(const SparsityGraph& g, const EliminationOrdering& order,
                                 int v) {
  std::vector<int> out;
  const int pv = order.position(v);
  for (int w : g.neighbors(v)) {
    if (order.position(w) > pv) out.push_back(w);
  }
  return out;
}

}  // namespace

SparsityGraph::SparsityGraph(int n) : adj_(static_cast<std::size_t>(n)) {
  if (n < 0) throw Error(ErrorCode::kInvalidArgument, "negative graph size");
}

SparsityGraph SparsityGraph::from_edges(int n, std::span<const std::pair<int, int>> edges) {
  SparsityGraph g(n);
  for (auto [i, j] : edges) {
    check_vertex(i, n);
    check_vertex(j, n);
    if (i == j) continue;
    g.adj_[i].push_back(j);
    g.adj_[j].push_back(i);
  }
  for (auto& nb : g.adj_) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  return g;
}

SparsityGraph SparsityGraph::complete(int n) {
  SparsityGraph g(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) g.adj_[i].push_back(j);
    }
  }
  return g;
}

std::int64_t SparsityGraph::num_edges() const noexcept {
  std::int64_t twice = 0;
  for (const auto& nb : adj_) twice += static_cast<std::int64_t>(nb.size());
  return twice / 2;
}

void SparsityGraph::add_edge(int i, int j) {
  check_vertex(i, size());
  check_vertex(j, size());
  if (i == j) return;
  auto insert = [](std::vector<int>& nb, int v) {
    auto it = std::lower_bound(nb.begin(), nb.end(), v);
    if (it == nb.end() || *it != v) nb.insert(it, v);
  };
  insert(adj_[i], j);
  insert(adj_[j], i);
}

bool SparsityGraph::has_edge(int i, int j) const {
  if (i == j) return i >= 0 && i < size();
  const auto& nb = adj_[i];
  return std::binary_search(nb.begin(), nb.end(), j);
}

std::vector<std::pair<int, int>> SparsityGraph::edges() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<std::size_t>(num_edges()));
  for (int i = 0; i < size(); ++i) {
    for (int j : adj_[i]) {
      if (i < j) out.emplace_back(i, j);
    }
  }
  return out;
}

bool SparsityGraph::contains(const SparsityGraph& other) const {
  if (other.size() != size()) return false;
  for (int i = 0; i < size(); ++i) {
    if (!std::includes(adj_[i].begin(), adj_[i].end(), other.adj_[i].begin(),
                       other.adj_[i].end())) {
      return false;
    }
  }
  return true;
}

EliminationOrdering::EliminationOrdering(std::vector<int> perm)
    : perm_(std::move(perm)), pos_(perm_.size(), -1) {
  const int n = static_cast<int>(perm_.size());
  for (int p = 0; p < n; ++p) {
    const int v = perm_[p];
    if (v < 0 || v >= n || pos_[v] != -1) {
      throw Error(ErrorCode::kInvalidArgument, "elimination ordering is not a permutation");
    }
    pos_[v] = p;
  }
}

EliminationOrdering EliminationOrdering::identity(int n) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  return EliminationOrdering(std::move(perm));
}

int CliqueSet::max_size() const noexcept {
  int best = 0;
  for (const auto& c : cliques) best = std::max(best, static_cast<int>(c.size()));
  return best;
}

int CliqueSet::min_size() const noexcept {
  if (cliques.empty()) return 0;
  int best = static_cast<int>(cliques.front().size());
  for (const auto& c : cliques) best = std::min(best, static_cast<int>(c.size()));
  return best;
}

bool is_perfect_elimination_ordering(const SparsityGraph& g, const EliminationOrdering& order) {
  if (order.size() != g.size()) return false;
  for (int pos = 0; pos < g.size(); ++pos) {
    const int v = order.vertex(pos);
    const auto later = later_neighbors(g, order, v);
    if (later.size() < 2) continue;
    // The earliest later neighbor must be adjacent to all the others.
    const int parent = *std::min_element(later.begin(), later.end(), [&](int a, int b) {
      return order.position(a) < order.position(b);
    });
    for (int w : later) {
      if (w != parent && !g.has_edge(parent, w)) return false;
    }
  }
  return true;
}

ChordalityResult is_chordal(const SparsityGraph& g) {
  const int n = g.size();
  std::vector<int> weight(static_cast<std::size_t>(n), 0);
  std::vector<char> visited(static_cast<std::size_t>(n), 0);
  // Ordered by (-weight, vertex): the heaviest vertex wins, lowest index on ties.
  std::set<std::pair<int, int>> queue;
  for (int v = 0; v < n; ++v) queue.emplace(0, v);

  std::vector<int> visit_order;
  visit_order.reserve(static_cast<std::size_t>(n));
  while (!queue.empty()) {
    const int v = queue.begin()->second;
    queue.erase(queue.begin());
    visited[v] = 1;
    visit_order.push_back(v);
    for (int w : g.neighbors(v)) {
      if (visited[w]) continue;
      queue.erase({-weight[w], w});
      ++weight[w];
      queue.emplace(-weight[w], w);
    }
  }

  std::reverse(visit_order.begin(), visit_order.end());
  EliminationOrdering order(std::move(visit_order));
  ChordalityResult result;
  result.chordal = is_perfect_elimination_ordering(g, order);
  if (result.chordal) result.ordering = std::move(order);
  return result;
}

ChordalExtension chordal_extend(const SparsityGraph& g) {
  if (auto check = is_chordal(g); check.chordal) {
    return {g, std::move(*check.ordering)};
  }

  const int n = g.size();
  std::vector<std::vector<int>> elim(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    elim[v].assign(g.neighbors(v).begin(), g.neighbors(v).end());
  }

  std::set<std::pair<int, int>> queue;  // (degree, vertex)
  for (int v = 0; v < n; ++v) queue.emplace(static_cast<int>(elim[v].size()), v);

  std::vector<int> perm;
  perm.reserve(static_cast<std::size_t>(n));
  std::vector<std::pair<int, int>> filled_edges;
  std::vector<int> merged;

  while (!queue.empty()) {
    const int v = queue.begin()->second;
    queue.erase(queue.begin());
    perm.push_back(v);

    const std::vector<int> clique = std::move(elim[v]);
    elim[v].clear();
    for (int u : clique) filled_edges.emplace_back(v, u);

    // Neighbors of v become pairwise adjacent; v leaves the graph.
    for (int u : clique) {
      queue.erase({static_cast<int>(elim[u].size()), u});
      merged.clear();
      std::set_union(elim[u].begin(), elim[u].end(), clique.begin(), clique.end(),
                     std::back_inserter(merged));
      merged.erase(std::remove_if(merged.begin(), merged.end(),
                                  [&](int w) { return w == u || w == v; }),
                   merged.end());
      elim[u].swap(merged);
      queue.emplace(static_cast<int>(elim[u].size()), u);
    }
  }

  return {SparsityGraph::from_edges(n, filled_edges), EliminationOrdering(std::move(perm))};
}

CliqueSet maximal_cliques(const SparsityGraph& g, const EliminationOrdering& ordering) {
  if (!is_perfect_elimination_ordering(g, ordering)) {
    throw Error(ErrorCode::kNotChordal, "ordering is not a perfect elimination ordering");
  }
  const int n = g.size();
  std::vector<std::vector<int>> later(static_cast<std::size_t>(n));
  std::vector<int> parent(static_cast<std::size_t>(n), -1);
  for (int v = 0; v < n; ++v) {
    later[v] = later_neighbors(g, ordering, v);
    if (!later[v].empty()) {
      parent[v] = *std::min_element(later[v].begin(), later[v].end(), [&](int a, int b) {
        return ordering.position(a) < ordering.position(b);
      });
    }
  }

  // {v} + later(v) is contained in a larger candidate exactly when some child
  // u of v has one more later neighbor than v.
  std::vector<char> absorbed(static_cast<std::size_t>(n), 0);
  for (int u = 0; u < n; ++u) {
    const int v = parent[u];
    if (v >= 0 && later[u].size() == later[v].size() + 1) absorbed[v] = 1;
  }

  CliqueSet out;
  for (int v = 0; v < n; ++v) {
    if (absorbed[v]) continue;
    std::vector<int> clique = std::move(later[v]);
    clique.push_back(v);
    std::sort(clique.begin(), clique.end());
    out.cliques.push_back(std::move(clique));
  }
  std::sort(out.cliques.begin(), out.cliques.end());
  return out;
}

}  // namespace chordal_sdp
