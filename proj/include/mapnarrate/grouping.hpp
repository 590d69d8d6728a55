/*
 * Copyright 2026 The mapnarrate Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Detection of adjacent cell groups with sequential ranks ("high in the
// top-right corner") on a ranked 3x3 grid.
//
// Candidate shapes are a closed list: 2x2 blocks (size 4), full rows then
// full columns (size 3) and rook-adjacent pairs (size 2). For each polarity
// the sizes are scanned 4 -> 3 -> 2 and the first size with a qualifying
// candidate wins. Within a size, a candidate holding the extremal rank
// (1 for high, k for low) is preferred, then enumeration order.

#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mapnarrate/grid.hpp"

namespace mapnarrate {

enum class Polarity { kHigh, kLow };

// kLiteral: low groups of 3 or 2 draw from ranks {5,6,7,8}.
// kSymmetric: low groups of every size draw from the bottom four {k-3..k}.
enum class LowWindowMode { kLiteral, kSymmetric };

inline std::string_view ToString(LowWindowMode m) {
  return m == LowWindowMode::kLiteral ? "literal" : "symmetric";
}

inline std::optional<LowWindowMode> ParseLowWindowMode(std::string_view s) {
  if (s == "literal") return LowWindowMode::kLiteral;
  if (s == "symmetric") return LowWindowMode::kSymmetric;
  return std::nullopt;
}

struct CandidateSet {
  std::vector<int> cells;  // ascending
  std::string label;
};

struct SpatialGroup {
  Polarity polarity = Polarity::kHigh;
  int size = 0;
  std::vector<int> cells;
  std::string indicator;

  friend bool operator==(const SpatialGroup&, const SpatialGroup&) = default;
};

struct PatternResult {
  std::optional<SpatialGroup> high;
  std::optional<SpatialGroup> low;

  friend bool operator==(const PatternResult&, const PatternResult&) = default;
};

inline constexpr std::array<std::string_view, kGridCells> kCellNames = {
    "top-left",    "top-center", "top-right",     "middle-left",  "center",
    "middle-right", "bottom-left", "bottom-center", "bottom-right"};

namespace detail {

inline std::vector<CandidateSet> BuildCandidates(int size) {
  switch (size) {
    case 4:
      return {{{0, 1, 3, 4}, "top-left corner"},
              {{1, 2, 4, 5}, "top-right corner"},
              {{3, 4, 6, 7}, "bottom-left corner"},
              {{4, 5, 7, 8}, "bottom-right corner"}};
    case 3:
      return {{{0, 1, 2}, "top"},       {{3, 4, 5}, "middle band"},
              {{6, 7, 8}, "bottom"},    {{0, 3, 6}, "left side"},
              {{1, 4, 7}, "middle column"}, {{2, 5, 8}, "right side"}};
    case 2: {
      std::vector<CandidateSet> out;
      for (int a = 0; a < kGridCells; ++a) {
        // Right neighbour, then the one below: keeps (a, b) lexicographic.
        if (a % kGridSide + 1 < kGridSide) out.push_back({{a, a + 1}, ""});
        if (a + kGridSide < kGridCells) out.push_back({{a, a + kGridSide}, ""});
      }
      for (auto& c : out) {
        c.label = std::string(kCellNames[c.cells[0]]) + " and " +
                  std::string(kCellNames[c.cells[1]]) + " area";
      }
      return out;
    }
    default:
      throw std::invalid_argument("candidate size must be 2, 3 or 4");
  }
}

}  // namespace detail

inline const std::vector<CandidateSet>& CandidateSets(int size) {
  static const std::array<std::vector<CandidateSet>, 3> kSets = {
      detail::BuildCandidates(2), detail::BuildCandidates(3), detail::BuildCandidates(4)};
  if (size < 2 || size > 4) throw std::invalid_argument("candidate size must be 2, 3 or 4");
  return kSets[size - 2];
}

inline std::string IndicatorOf(std::vector<int> cells, int size) {
  std::sort(cells.begin(), cells.end());
  for (const auto& c : CandidateSets(size)) {
    if (c.cells == cells) return c.label;
  }
  throw std::invalid_argument("cell set is not a candidate group");
}

// Inclusive rank window [lo, hi] a group of `size` cells must fall in.
inline std::pair<int, int> RankWindow(Polarity polarity, int size, int k, LowWindowMode mode) {
  if (polarity == Polarity::kHigh) return {1, 4};
  if (size == 4 || mode == LowWindowMode::kSymmetric) return {std::max(1, k - 3), k};
  return {5, 8};
}

inline std::optional<SpatialGroup> DetectGroup(const GridSummary& grid, Polarity polarity,
                                               LowWindowMode mode) {
  const int k = grid.non_empty;
  const int extremal = polarity == Polarity::kHigh ? 1 : k;
  for (int size = 4; size >= 2; --size) {
    if (k < size) continue;
    const auto [lo, hi] = RankWindow(polarity, size, k, mode);
    const CandidateSet* best = nullptr;
    for (const auto& cand : CandidateSets(size)) {
      bool fits = true;
      bool has_extremal = false;
      for (int idx : cand.cells) {
        const auto& r = grid.cells[idx].rank;
        if (!r || *r < lo || *r > hi) {
          fits = false;
          break;
        }
        has_extremal |= (*r == extremal);
      }
      if (!fits) continue;
      if (has_extremal) {
        best = &cand;
        break;
      }
      if (!best) best = &cand;
    }
    if (best) return SpatialGroup{polarity, size, best->cells, best->label};
  }
  return std::nullopt;
}

inline PatternResult DetectGroups(const GridSummary& grid,
                                  LowWindowMode mode = LowWindowMode::kLiteral) {
  return {DetectGroup(grid, Polarity::kHigh, mode), DetectGroup(grid, Polarity::kLow, mode)};
}

}  // namespace mapnarrate
