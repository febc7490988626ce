#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "torchlight/geometry.hpp"

namespace torchlight {

/// Set-cover view of an instance: universe [n], subset B_i = the tiles a
/// torch on tile i would light.
struct SetCoverInstance {
  int universe_size = 0;
  std::vector<std::vector<int>> subsets;  // sorted members
};

inline SetCoverInstance to_setcover(const CoverageMatrix& d) {
  SetCoverInstance inst;
  inst.universe_size = d.n();
  inst.subsets.reserve(static_cast<std::size_t>(d.n()));
  for (int i = 0; i < d.n(); ++i) inst.subsets.push_back(d.row(i));
  return inst;
}

/// Standard greedy: pick the subset covering the most uncovered elements,
/// lowest index on ties, until the universe is covered.
inline std::vector<int> greedy_cover(const SetCoverInstance& inst) {
  std::vector<char> covered(static_cast<std::size_t>(inst.universe_size), 0);
  int remaining = inst.universe_size;
  std::vector<int> chosen;
  while (remaining > 0) {
    int best = -1;
    int best_new = 0;
    for (int i = 0; i < static_cast<int>(inst.subsets.size()); ++i) {
      int fresh = 0;
      for (int e : inst.subsets[static_cast<std::size_t>(i)]) {
        if (!covered[static_cast<std::size_t>(e)]) ++fresh;
      }
      if (fresh > best_new) {
        best_new = fresh;
        best = i;
      }
    }
    if (best < 0) throw std::invalid_argument("universe is not coverable by the given subsets");
    chosen.push_back(best);
    for (int e : inst.subsets[static_cast<std::size_t>(best)]) {
      if (!covered[static_cast<std::size_t>(e)]) {
        covered[static_cast<std::size_t>(e)] = 1;
        --remaining;
      }
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

namespace detail {

struct CoverSearch {
  const std::vector<std::uint32_t>& masks;
  const std::vector<std::uint32_t>& suffix_union;
  std::uint32_t full;
  std::vector<int> current;
  std::vector<int> best;
  int best_size;

  // Inclusion-first DFS over increasing indices visits covers in
  // lexicographic order, so the first cover of each size is the
  // lexicographically smallest one; only strictly smaller covers replace
  // the incumbent.
  void dfs(int idx, std::uint32_t covered) {
    if (covered == full) {
      if (static_cast<int>(current.size()) < best_size) {
        best_size = static_cast<int>(current.size());
        best = current;
      }
      return;
    }
    if (idx >= static_cast<int>(masks.size())) return;
    std::uint32_t uncovered = full & ~covered;
    if ((uncovered & suffix_union[static_cast<std::size_t>(idx)]) != uncovered) return;

    // Lower bound: even the largest remaining subset covers at most
    // `widest` new elements per pick.
    int widest = 0;
    for (int i = idx; i < static_cast<int>(masks.size()); ++i) {
      widest = std::max(widest,
                        std::popcount(masks[static_cast<std::size_t>(i)] & uncovered));
    }
    if (widest == 0) return;
    int lower = (std::popcount(uncovered) + widest - 1) / widest;
    if (static_cast<int>(current.size()) + lower >= best_size) return;

    current.push_back(idx);
    dfs(idx + 1, covered | masks[static_cast<std::size_t>(idx)]);
    current.pop_back();
    dfs(idx + 1, covered);
  }
};

}  // namespace detail

/// Exact minimum cover via branch and bound; among minimum covers returns
/// the lexicographically smallest index set. Limited to 25 elements.
inline std::vector<int> exhaustive_min_cover(const SetCoverInstance& inst) {
  const int n = inst.universe_size;
  if (n > 25) throw std::length_error("exhaustive cover search is limited to 25 elements");

  std::vector<std::uint32_t> masks(inst.subsets.size(), 0);
  for (std::size_t i = 0; i < inst.subsets.size(); ++i) {
    for (int e : inst.subsets[i]) {
      if (e < 0 || e >= n) throw std::invalid_argument("subset member outside the universe");
      masks[i] |= 1u << e;
    }
  }
  const std::uint32_t full = n == 0 ? 0u : (n == 32 ? ~0u : (1u << n) - 1u);

  std::vector<std::uint32_t> suffix(masks.size() + 1, 0);
  for (int i = static_cast<int>(masks.size()) - 1; i >= 0; --i) {
    suffix[static_cast<std::size_t>(i)] =
        suffix[static_cast<std::size_t>(i) + 1] | masks[static_cast<std::size_t>(i)];
  }
  if ((full & suffix[0]) != full) {
    throw std::invalid_argument("universe is not coverable by the given subsets");
  }

  // Greedy size + 1 as the bound keeps equal-size covers reachable, which
  // the lexicographic guarantee needs.
  detail::CoverSearch search{masks, suffix, full, {}, {}, 0};
  search.best_size = static_cast<int>(greedy_cover(inst).size()) + 1;
  search.dfs(0, 0);
  return search.best;
}

/// Membership check used by tests and the CLI: does the chosen index set
/// cover the whole universe?
inline bool covers_universe(const SetCoverInstance& inst, const std::vector<int>& chosen) {
  std::vector<char> covered(static_cast<std::size_t>(inst.universe_size), 0);
  for (int i : chosen) {
    for (int e : inst.subsets[static_cast<std::size_t>(i)]) covered[static_cast<std::size_t>(e)] = 1;
  }
  return std::all_of(covered.begin(), covered.end(), [](char c) { return c != 0; });
}

}  // namespace torchlight
