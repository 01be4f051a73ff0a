#pragma once

// k-plex selections: cell sets touching every row, every column and every
// symbol exactly k times. Includes the partition of a plex into k diagonals
// by repeated perfect-matching extraction (a k-regular bipartite graph always
// splits into k perfect matchings).

#include <utility>
#include <vector>

#include "fsq/core.hpp"

namespace fsq {

struct PlexSelection {
  int n = 0;  // board side
  int k = 0;  // width
  std::vector<std::pair<int, int>> cells;  // 0-based (row, col), sorted, unique

  bool operator==(const PlexSelection&) const = default;
};

// Row/column regularity alone; checkable without the square.
inline bool rows_cols_regular(const PlexSelection& p) {
  if (p.n < 1 || p.k < 1 || p.k > p.n) return false;
  if (static_cast<int>(p.cells.size()) != p.n * p.k) return false;
  std::vector<int> row_count(p.n, 0), col_count(p.n, 0);
  std::vector<char> seen(static_cast<std::size_t>(p.n) * p.n, 0);
  for (auto [r, c] : p.cells) {
    if (r < 0 || r >= p.n || c < 0 || c >= p.n) return false;
    auto& cell = seen[static_cast<std::size_t>(r) * p.n + c];
    if (cell) return false;
    cell = 1;
    ++row_count[r];
    ++col_count[c];
  }
  for (int i = 0; i < p.n; ++i)
    if (row_count[i] != p.k || col_count[i] != p.k) return false;
  return true;
}

// Full k-plex test against a square: rows, columns and symbols all k times.
inline bool is_k_plex(const FrequencySquare& sq, const PlexSelection& p) {
  if (p.n != sq.n() || !rows_cols_regular(p)) return false;
  std::vector<int> sym_count(sq.m() + 1, 0);
  for (auto [r, c] : p.cells) ++sym_count[sq.at(r, c)];
  for (int s = 1; s <= sq.m(); ++s)
    if (sym_count[s] != p.k) return false;
  return true;
}

namespace detail {

// Kuhn augmenting-path matching on the remaining plex edges.
inline bool augment(int r, const std::vector<std::vector<int>>& adj, std::vector<char>& visited,
                    std::vector<int>& match_col) {
  for (int c : adj[r]) {
    if (visited[c]) continue;
    visited[c] = 1;
    if (match_col[c] < 0 || augment(match_col[c], adj, visited, match_col)) {
      match_col[c] = r;
      return true;
    }
  }
  return false;
}

}  // namespace detail

// Splits a k-plex into k disjoint diagonals covering its cells.
inline std::vector<Diagonal> decompose_plex(const PlexSelection& p) {
  if (!rows_cols_regular(p))
    throw Error(ErrorCode::NotAPlex, "cells do not touch every row and column exactly k times");
  std::vector<std::vector<int>> adj(p.n);
  for (auto [r, c] : p.cells) adj[r].push_back(c);
  std::vector<Diagonal> parts;
  parts.reserve(p.k);
  for (int round = 0; round < p.k; ++round) {
    std::vector<int> match_col(p.n, -1);
    for (int r = 0; r < p.n; ++r) {
      std::vector<char> visited(p.n, 0);
      if (!detail::augment(r, adj, visited, match_col))
        throw Error(ErrorCode::NotAPlex, "plex does not decompose into diagonals");
    }
    std::vector<int> sigma(p.n);
    for (int c = 0; c < p.n; ++c) sigma[match_col[c]] = c;
    for (int r = 0; r < p.n; ++r) std::erase(adj[r], sigma[r]);
    parts.emplace_back(std::move(sigma));
  }
  return parts;
}

}  // namespace fsq
