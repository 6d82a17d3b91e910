#include "bnm/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "bnm/prng.hpp"

namespace bnm {
namespace {

// Draw streams; round-2 draws exist for every vertex and are simply unused
// for popular ones, which keeps the edge set monotone in m for a fixed seed.
enum Stream : std::uint64_t {
  kRowRound1 = 1,
  kColRound1 = 2,
  kRowRound2 = 3,
  kColRound2 = 4,
};

constexpr std::uint64_t kMaxN = 1ULL << 31;

void check_n(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("model: n must be >= 1");
  if (n > kMaxN) throw std::invalid_argument("model: n too large");
}

Csr build_csr(std::uint32_t n, std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  Csr csr;
  csr.offsets.assign(n + 1, 0);
  csr.targets.reserve(edges.size());
  for (const auto& [from, to] : edges) csr.offsets[from + 1]++;
  for (std::uint32_t v = 0; v < n; ++v) csr.offsets[v + 1] += csr.offsets[v];
  for (const auto& [from, to] : edges) csr.targets.push_back(to);
  return csr;
}

}  // namespace

BipartiteDigraph digraph_from_selections(std::uint64_t n64,
                                         std::vector<std::uint32_t> round1_row,
                                         std::vector<std::uint32_t> round1_col,
                                         std::vector<std::uint32_t> round2_row,
                                         std::vector<std::uint32_t> round2_col) {
  check_n(n64);
  const auto n = static_cast<std::uint32_t>(n64);
  if (round1_row.size() != n || round1_col.size() != n ||
      round2_row.size() != n || round2_col.size() != n) {
    throw std::invalid_argument("model: selection arrays must have length n");
  }
  BipartiteDigraph g;
  g.n = n;
  g.round1_row = std::move(round1_row);
  g.round1_col = std::move(round1_col);
  g.round2_row = std::move(round2_row);
  g.round2_col = std::move(round2_col);

  std::vector<std::pair<std::uint32_t, std::uint32_t>> row_to_col;
  row_to_col.reserve(4 * std::size_t{n});
  for (std::uint32_t i = 0; i < n; ++i) {
    if (g.round1_row[i] >= n) throw std::invalid_argument("model: selection out of range");
    row_to_col.emplace_back(i, g.round1_row[i]);
    if (g.round2_row[i] != kNoSelection) {
      if (g.round2_row[i] >= n) throw std::invalid_argument("model: selection out of range");
      row_to_col.emplace_back(i, g.round2_row[i]);
    }
  }
  for (std::uint32_t j = 0; j < n; ++j) {
    if (g.round1_col[j] >= n) throw std::invalid_argument("model: selection out of range");
    row_to_col.emplace_back(g.round1_col[j], j);
    if (g.round2_col[j] != kNoSelection) {
      if (g.round2_col[j] >= n) throw std::invalid_argument("model: selection out of range");
      row_to_col.emplace_back(g.round2_col[j], j);
    }
  }
  g.row_adj = build_csr(n, row_to_col);

  std::vector<std::pair<std::uint32_t, std::uint32_t>> col_to_row;
  col_to_row.reserve(g.row_adj.targets.size());
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j : g.row_adj.neighbors(i)) col_to_row.emplace_back(j, i);
  }
  g.col_adj = build_csr(n, col_to_row);
  return g;
}

BipartiteDigraph generate(const ModelParams& params) {
  check_n(params.n);
  const auto n = static_cast<std::uint32_t>(params.n);
  std::vector<std::uint32_t> r1r(n), r1c(n);
  std::vector<std::uint32_t> r2r(n, kNoSelection), r2c(n, kNoSelection);
  for (std::uint32_t i = 0; i < n; ++i) {
    r1r[i] = uniform_below(params.seed, kRowRound1, i, n);
  }
  for (std::uint32_t j = 0; j < n; ++j) {
    r1c[j] = uniform_below(params.seed, kColRound1, j, n);
  }
  // Unpopularity is decided by round-1 in-selections only.
  std::vector<std::uint32_t> indeg_row(n, 0), indeg_col(n, 0);
  for (std::uint32_t j = 0; j < n; ++j) indeg_row[r1c[j]]++;
  for (std::uint32_t i = 0; i < n; ++i) indeg_col[r1r[i]]++;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (params.m.admits(indeg_row[i])) {
      r2r[i] = uniform_below(params.seed, kRowRound2, i, n);
    }
  }
  for (std::uint32_t j = 0; j < n; ++j) {
    if (params.m.admits(indeg_col[j])) {
      r2c[j] = uniform_below(params.seed, kColRound2, j, n);
    }
  }
  return digraph_from_selections(params.n, std::move(r1r), std::move(r1c),
                                 std::move(r2r), std::move(r2c));
}

BipartiteDigraph one_round_graph(std::uint64_t n64, std::uint64_t seed) {
  check_n(n64);
  const auto n = static_cast<std::uint32_t>(n64);
  std::vector<std::uint32_t> r1r(n), r1c(n);
  for (std::uint32_t i = 0; i < n; ++i) r1r[i] = uniform_below(seed, kRowRound1, i, n);
  for (std::uint32_t j = 0; j < n; ++j) r1c[j] = uniform_below(seed, kColRound1, j, n);
  return digraph_from_selections(
      n64, std::move(r1r), std::move(r1c),
      std::vector<std::uint32_t>(n, kNoSelection),
      std::vector<std::uint32_t>(n, kNoSelection));
}

double expected_out_degree(Threshold m) {
  if (m.is_infinite()) return 2.0;
  // 1 + e^{-1} sum_{j<=m} 1/j!; the sum saturates long before j = 170.
  double sum = 0.0, term = 1.0;
  const std::uint64_t cap = std::min<std::uint64_t>(m.value(), 170);
  for (std::uint64_t j = 0;; ++j) {
    sum += term;
    if (j == cap) break;
    term /= static_cast<double>(j + 1);
  }
  return 1.0 + std::exp(-1.0) * sum;
}

std::vector<std::uint32_t> round1_in_degrees_rows(const BipartiteDigraph& g) {
  std::vector<std::uint32_t> deg(g.n, 0);
  for (std::uint32_t j = 0; j < g.n; ++j) deg[g.round1_col[j]]++;
  return deg;
}

std::vector<std::uint32_t> round1_in_degrees_cols(const BipartiteDigraph& g) {
  std::vector<std::uint32_t> deg(g.n, 0);
  for (std::uint32_t i = 0; i < g.n; ++i) deg[g.round1_row[i]]++;
  return deg;
}

}  // namespace bnm
