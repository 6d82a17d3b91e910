#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bnm/model.hpp"

namespace bnm {

inline constexpr std::uint32_t kUnmatched =
    std::numeric_limits<std::uint32_t>::max();

struct MatchingResult {
  std::uint32_t size = 0;
  std::vector<std::uint32_t> row_match;  // column index or kUnmatched
  std::vector<std::uint32_t> col_match;  // row index or kUnmatched
};

// Maximum-cardinality matching of the simple bipartite graph (Hopcroft-Karp).
// Deterministic: adjacency lists are sorted and scanned in index order.
MatchingResult max_matching(const BipartiteDigraph& g);

// True when no augmenting path exists for `m` (one extra BFS phase).
bool matching_is_maximum(const BipartiteDigraph& g, const MatchingResult& m);

enum class Side { rows, cols };

// A deficient set K with L = Gamma(K) and |L| = |K| - 1, certifying that no
// perfect matching exists.  `minimal` is set when additionally every vertex
// of L has at least two neighbors in K.
struct HallWitness {
  Side side = Side::rows;
  std::vector<std::uint32_t> deficient_set;  // K, sorted
  std::vector<std::uint32_t> neighborhood;   // L = Gamma(K), sorted
  bool minimal = false;
};

// None when the matching is perfect.  Otherwise K is the set of same-side
// vertices reachable by alternating paths from the lowest-index unmatched
// vertex; the row side is searched first.
std::optional<HallWitness> hall_witness(const BipartiteDigraph& g);
std::optional<HallWitness> hall_witness(const BipartiteDigraph& g,
                                        const MatchingResult& matching);

struct ComponentInfo {
  std::uint32_t row_count = 0;
  std::uint32_t col_count = 0;
  std::uint32_t size = 0;  // row_count + col_count
};

// Connected components of the simple graph, sorted by total size descending.
std::vector<ComponentInfo> components(const BipartiteDigraph& g);

}  // namespace bnm
