#include "bnm/matching.hpp"

#include <algorithm>
#include <queue>

namespace bnm {
namespace {

constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();

struct HopcroftKarp {
  const BipartiteDigraph& g;
  std::vector<std::uint32_t> row_match, col_match, dist;

  explicit HopcroftKarp(const BipartiteDigraph& graph)
      : g(graph),
        row_match(graph.n, kUnmatched),
        col_match(graph.n, kUnmatched),
        dist(graph.n) {}

  bool bfs() {
    std::queue<std::uint32_t> queue;
    bool reachable_free_col = false;
    for (std::uint32_t i = 0; i < g.n; ++i) {
      if (row_match[i] == kUnmatched) {
        dist[i] = 0;
        queue.push(i);
      } else {
        dist[i] = kInf;
      }
    }
    std::uint32_t limit = kInf;  // depth of the shallowest free column
    while (!queue.empty()) {
      const std::uint32_t i = queue.front();
      queue.pop();
      if (dist[i] >= limit) continue;
      for (std::uint32_t j : g.row_adj.neighbors(i)) {
        const std::uint32_t next = col_match[j];
        if (next == kUnmatched) {
          limit = std::min(limit, dist[i] + 1);
          reachable_free_col = true;
        } else if (dist[next] == kInf) {
          dist[next] = dist[i] + 1;
          queue.push(next);
        }
      }
    }
    return reachable_free_col;
  }

  bool dfs(std::uint32_t i) {
    for (std::uint32_t j : g.row_adj.neighbors(i)) {
      const std::uint32_t next = col_match[j];
      if (next == kUnmatched || (dist[next] == dist[i] + 1 && dfs(next))) {
        row_match[i] = j;
        col_match[j] = i;
        return true;
      }
    }
    dist[i] = kInf;
    return false;
  }

  std::uint32_t run() {
    std::uint32_t size = 0;
    while (bfs()) {
      for (std::uint32_t i = 0; i < g.n; ++i) {
        if (row_match[i] == kUnmatched && dfs(i)) ++size;
      }
    }
    return size;
  }
};

// Alternating-reachability set from the lowest-index unmatched vertex on one
// side.  Generic over sides: `same` maps a same-side vertex to its neighbors,
// `match_of_opposite` gives the matched partner of an opposite-side vertex.
HallWitness build_witness(const Csr& same_adj,
                          const std::vector<std::uint32_t>& same_match,
                          const std::vector<std::uint32_t>& opposite_match,
                          std::uint32_t n, Side side) {
  std::uint32_t start = kUnmatched;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (same_match[v] == kUnmatched) {
      start = v;
      break;
    }
  }
  std::vector<char> in_k(n, 0), in_l(n, 0);
  std::vector<std::uint32_t> stack{start};
  in_k[start] = 1;
  while (!stack.empty()) {
    const std::uint32_t v = stack.back();
    stack.pop_back();
    for (std::uint32_t w : same_adj.neighbors(v)) {
      if (in_l[w]) continue;
      in_l[w] = 1;
      const std::uint32_t back = opposite_match[w];
      if (back != kUnmatched && !in_k[back]) {
        in_k[back] = 1;
        stack.push_back(back);
      }
    }
  }
  HallWitness witness;
  witness.side = side;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (in_k[v]) witness.deficient_set.push_back(v);
    if (in_l[v]) witness.neighborhood.push_back(v);
  }
  return witness;
}

}  // namespace

MatchingResult max_matching(const BipartiteDigraph& g) {
  HopcroftKarp hk(g);
  MatchingResult result;
  result.size = hk.run();
  result.row_match = std::move(hk.row_match);
  result.col_match = std::move(hk.col_match);
  return result;
}

bool matching_is_maximum(const BipartiteDigraph& g, const MatchingResult& m) {
  // BFS over alternating paths from all unmatched rows; maximum iff no free
  // column is reachable.
  std::vector<char> seen_row(g.n, 0);
  std::queue<std::uint32_t> queue;
  for (std::uint32_t i = 0; i < g.n; ++i) {
    if (m.row_match[i] == kUnmatched) {
      seen_row[i] = 1;
      queue.push(i);
    }
  }
  std::vector<char> seen_col(g.n, 0);
  while (!queue.empty()) {
    const std::uint32_t i = queue.front();
    queue.pop();
    for (std::uint32_t j : g.row_adj.neighbors(i)) {
      if (seen_col[j]) continue;
      seen_col[j] = 1;
      const std::uint32_t next = m.col_match[j];
      if (next == kUnmatched) return false;  // augmenting path found
      if (!seen_row[next]) {
        seen_row[next] = 1;
        queue.push(next);
      }
    }
  }
  return true;
}

std::optional<HallWitness> hall_witness(const BipartiteDigraph& g) {
  return hall_witness(g, max_matching(g));
}

std::optional<HallWitness> hall_witness(const BipartiteDigraph& g,
                                        const MatchingResult& matching) {
  if (matching.size == g.n) return std::nullopt;
  // Sides have equal size, so a non-perfect matching leaves an unmatched
  // vertex on both sides; rows are searched first, columns kept for symmetry.
  const bool row_side =
      std::find(matching.row_match.begin(), matching.row_match.end(),
                kUnmatched) != matching.row_match.end();
  HallWitness witness =
      row_side ? build_witness(g.row_adj, matching.row_match,
                               matching.col_match, g.n, Side::rows)
               : build_witness(g.col_adj, matching.col_match,
                               matching.row_match, g.n, Side::cols);

  // Minimal pair shape: |L| = |K| - 1 and every L-vertex has >= 2 neighbors
  // in K.
  const Csr& opposite_adj = row_side ? g.col_adj : g.row_adj;
  std::vector<char> in_k(g.n, 0);
  for (std::uint32_t v : witness.deficient_set) in_k[v] = 1;
  bool two_neighbors = true;
  for (std::uint32_t w : witness.neighborhood) {
    std::uint32_t hits = 0;
    for (std::uint32_t back : opposite_adj.neighbors(w)) {
      if (in_k[back] && ++hits == 2) break;
    }
    if (hits < 2) {
      two_neighbors = false;
      break;
    }
  }
  witness.minimal =
      witness.neighborhood.size() + 1 == witness.deficient_set.size() &&
      two_neighbors;
  return witness;
}

std::vector<ComponentInfo> components(const BipartiteDigraph& g) {
  std::vector<char> seen_row(g.n, 0), seen_col(g.n, 0);
  std::vector<ComponentInfo> result;
  std::vector<std::uint32_t> stack;  // rows as v, cols as v + n
  for (std::uint32_t s = 0; s < g.n; ++s) {
    if (seen_row[s]) continue;
    ComponentInfo info;
    seen_row[s] = 1;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::uint32_t v = stack.back();
      stack.pop_back();
      if (v < g.n) {
        info.row_count++;
        for (std::uint32_t j : g.row_adj.neighbors(v)) {
          if (!seen_col[j]) {
            seen_col[j] = 1;
            stack.push_back(j + g.n);
          }
        }
      } else {
        const std::uint32_t j = v - g.n;
        info.col_count++;
        for (std::uint32_t i : g.col_adj.neighbors(j)) {
          if (!seen_row[i]) {
            seen_row[i] = 1;
            stack.push_back(i);
          }
        }
      }
    }
    info.size = info.row_count + info.col_count;
    result.push_back(info);
  }
  // Every column selects a row in round 1, so no component is column-only
  // and the row loop reaches everything.
  std::stable_sort(result.begin(), result.end(),
                   [](const ComponentInfo& a, const ComponentInfo& b) {
                     return a.size > b.size;
                   });
  return result;
}

}  // namespace bnm
