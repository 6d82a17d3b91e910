#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

// The two-round random bipartite digraph on vertex sides of size n.
// Round 1: every vertex selects a uniform partner on the other side.
// A vertex selected by at most m opposite-side vertices in round 1 is
// "unpopular" and makes one more uniform, independent selection.

namespace bnm {

// Unpopularity threshold: a non-negative integer or infinity.  Kept as a
// distinct type so the infinite case never has to masquerade as a large
// integer in comparisons.
class Threshold {
 public:
  static constexpr Threshold finite(std::uint64_t m) noexcept {
    return Threshold(m, false);
  }
  static constexpr Threshold infinity() noexcept { return Threshold(0, true); }

  constexpr bool is_infinite() const noexcept { return infinite_; }
  // Finite value; meaningless when infinite.
  constexpr std::uint64_t value() const noexcept { return m_; }
  // True when a vertex with this round-1 in-degree is unpopular.
  constexpr bool admits(std::uint64_t in_degree) const noexcept {
    return infinite_ || in_degree <= m_;
  }
  friend constexpr bool operator==(Threshold a, Threshold b) noexcept {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.m_ == b.m_);
  }

 private:
  constexpr Threshold(std::uint64_t m, bool infinite) noexcept
      : m_(m), infinite_(infinite) {}
  std::uint64_t m_;
  bool infinite_;
};

struct ModelParams {
  std::uint64_t n = 1;
  Threshold m = Threshold::finite(0);
  std::uint64_t seed = 0;
};

inline constexpr std::uint32_t kNoSelection =
    std::numeric_limits<std::uint32_t>::max();

// Compressed sparse adjacency; neighbor lists are sorted and duplicate-free.
struct Csr {
  std::vector<std::uint32_t> offsets;  // length n+1
  std::vector<std::uint32_t> targets;

  std::span<const std::uint32_t> neighbors(std::uint32_t v) const noexcept {
    return {targets.data() + offsets[v], targets.data() + offsets[v + 1]};
  }
};

struct BipartiteDigraph {
  std::uint32_t n = 0;
  // Raw selection records.  round2_* hold kNoSelection for popular vertices.
  std::vector<std::uint32_t> round1_row;  // row i -> selected column
  std::vector<std::uint32_t> round1_col;  // col j -> selected row
  std::vector<std::uint32_t> round2_row;
  std::vector<std::uint32_t> round2_col;
  // Derived simple undirected bipartite graph (duplicates collapsed).
  Csr row_adj;  // row -> columns
  Csr col_adj;  // col -> rows

  std::size_t edge_count() const noexcept { return row_adj.targets.size(); }
};

// Deterministic function of (n, m, seed).  Throws std::invalid_argument for
// n = 0 or n too large for 32-bit vertex ids.
BipartiteDigraph generate(const ModelParams& params);

// Round-1-only comparison model: every vertex makes exactly one selection.
BipartiteDigraph one_round_graph(std::uint64_t n, std::uint64_t seed);

// Assembles a digraph from explicit selection records (round2 entries may be
// kNoSelection).  generate() is this applied to keyed random selections.
BipartiteDigraph digraph_from_selections(std::uint64_t n,
                                         std::vector<std::uint32_t> round1_row,
                                         std::vector<std::uint32_t> round1_col,
                                         std::vector<std::uint32_t> round2_row,
                                         std::vector<std::uint32_t> round2_col);

// Limiting expected out-degree 1 + P(Poisson(1) <= m); exactly 2 for m = inf.
double expected_out_degree(Threshold m);

// Round-1 in-degrees (number of opposite-side vertices that selected each
// vertex); unpopularity is decided by these counts alone.
std::vector<std::uint32_t> round1_in_degrees_rows(const BipartiteDigraph& g);
std::vector<std::uint32_t> round1_in_degrees_cols(const BipartiteDigraph& g);

}  // namespace bnm
