#pragma once

// Equivalence of frequency squares under row permutation, column permutation,
// symbol relabelling and transpose, decided constructively: a positive answer
// always carries a Transform that maps one square onto the other exactly.
//
// The search fixes the transpose flag and the symbol relabelling (m! choices)
// and then matches rows by backtracking. Columns are kept in classes that are
// interchangeable under everything assigned so far; each row assignment
// refines the classes and fails fast on a size mismatch, so most non-matches
// die within a row or two.

#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <set>

#include "fsq/constructions.hpp"
#include "fsq/core.hpp"
#include "fsq/search.hpp"

namespace fsq {

namespace detail {

inline constexpr int kMaxRelabelSymbols = 8;  // m! symbol relabellings are enumerated

// Grid bytes of a under transpose + symbol relabelling (perm is 0-based).
inline std::vector<std::uint8_t> relabelled(const FrequencySquare& a, bool transposed, const std::vector<int>& sp) {
  const int n = a.n();
  std::vector<std::uint8_t> g(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      g[static_cast<std::size_t>(i) * n + j] =
          static_cast<std::uint8_t>(sp[(transposed ? a.at(j, i) : a.at(i, j)) - 1] + 1);
  return g;
}

// Backtracking row matcher. Classes pair columns of `a` with columns of `b`
// that are interchangeable under all rows assigned so far.
class RowMatcher {
 public:
  RowMatcher(const std::vector<std::uint8_t>& a, const FrequencySquare& b, int n, int m)
      : a_(a), b_(b), n_(n), m_(m), row_image_(n, -1), used_(n, 0) {}

  bool solve(std::vector<int>& rho, std::vector<int>& kappa) {
    std::vector<Cls> root(1);
    root[0].acols = perm::identity(n_);
    root[0].bcols = perm::identity(n_);
    if (!descend(0, root)) return false;
    rho = row_image_;
    kappa = kappa_;
    return true;
  }

 private:
  struct Cls {
    std::vector<int> acols, bcols;
  };

  bool descend(int depth, const std::vector<Cls>& classes) {
    if (depth == n_) {
      kappa_.assign(n_, -1);
      for (const Cls& cl : classes)
        for (std::size_t i = 0; i < cl.acols.size(); ++i) kappa_[cl.acols[i]] = cl.bcols[i];
      return true;
    }
    for (int j = 0; j < n_; ++j) {
      if (used_[j]) continue;
      std::vector<Cls> next;
      if (refine(depth, j, classes, next)) {
        used_[j] = 1;
        row_image_[depth] = j;
        if (descend(depth + 1, next)) return true;
        used_[j] = 0;
      }
    }
    return false;
  }

  // Split every class by the symbols row `depth` of a and row `j` of b put on
  // its columns; bucket sizes must agree symbol by symbol.
  bool refine(int depth, int j, const std::vector<Cls>& classes, std::vector<Cls>& next) {
    next.clear();
    for (const Cls& cl : classes) {
      std::array<std::vector<int>, kMaxSide + 1> abuck, bbuck;
      for (int c : cl.acols) abuck[a_[static_cast<std::size_t>(depth) * n_ + c]].push_back(c);
      for (int c : cl.bcols) bbuck[b_.at(j, c)].push_back(c);
      for (int s = 1; s <= m_; ++s) {
        if (abuck[s].size() != bbuck[s].size()) return false;
        if (abuck[s].empty()) continue;
        next.push_back({std::move(abuck[s]), std::move(bbuck[s])});
      }
    }
    return true;
  }

  const std::vector<std::uint8_t>& a_;
  const FrequencySquare& b_;
  int n_, m_;
  std::vector<int> row_image_, kappa_;
  std::vector<char> used_;
};

}  // namespace detail

inline std::optional<EquivalenceCertificate> are_equivalent(const FrequencySquare& a, const FrequencySquare& b) {
  if (a.n() != b.n() || a.m() != b.m() || a.lambda() != b.lambda())
    throw Error(ErrorCode::ShapeMismatch, "squares have different type parameters");
  if (a.m() > detail::kMaxRelabelSymbols)
    throw Error(ErrorCode::TooLarge, "equivalence search enumerates symbol relabellings only up to m = 8");
  const int n = a.n(), m = a.m();
  for (bool transposed : {false, true}) {
    std::vector<int> sp = perm::identity(m);
    do {
      auto ag = detail::relabelled(a, transposed, sp);
      detail::RowMatcher matcher(ag, b, n, m);
      std::vector<int> rho, kappa;
      if (matcher.solve(rho, kappa)) {
        Transform t{std::move(rho), std::move(kappa), sp, transposed};
        return EquivalenceCertificate{std::move(t)};
      }
    } while (std::next_permutation(sp.begin(), sp.end()));
  }
  return std::nullopt;
}

// Equivalence to the exceptional two-symbol square of the same lambda,
// cross-checked against the structural criterion (a square is equivalent to
// make_A(lambda) exactly when it has no 2x2 subarray with three equal cells
// and one other).
inline std::optional<EquivalenceCertificate> is_equivalent_to_A(const FrequencySquare& sq) {
  if (sq.m() != 2) return std::nullopt;
  auto cert = are_equivalent(sq, make_A(sq.lambda()));
  const bool pattern_free = !find_pattern_2x2(sq, 1) && !find_pattern_2x2(sq, 2);
  if (cert.has_value() != pattern_free)
    throw std::logic_error("equivalence search and structural criterion disagree");
  return cert;
}

// Shape prefix (n, m, lambda) followed by the lexicographically smallest grid
// reachable by any transform. Equal keys iff equivalent squares.
inline std::vector<std::uint8_t> canonical_key(const FrequencySquare& sq) {
  if (sq.n() > 12) throw Error(ErrorCode::TooLarge, "canonical key limited to n <= 12");
  if (sq.m() > detail::kMaxRelabelSymbols)
    throw Error(ErrorCode::TooLarge, "canonical key enumerates symbol relabellings only up to m = 8");
  const int n = sq.n(), m = sq.m();
  std::vector<std::uint8_t> best;

  for (bool transposed : {false, true}) {
    std::vector<int> sp = perm::identity(m);
    do {
      auto g = detail::relabelled(sq, transposed, sp);
      auto cell = [&](int r, int c) { return g[static_cast<std::size_t>(r) * n + c]; };

      // branch and bound over the output row order; columns stay grouped in
      // ordered interchangeability classes
      std::vector<std::uint8_t> cur;
      auto dfs = [&](auto&& self, const std::vector<std::vector<int>>& classes, std::uint32_t used) -> void {
        const int depth = std::popcount(used);
        if (depth == n) {
          if (best.empty() || cur < best) best = cur;
          return;
        }
        std::vector<std::uint8_t> min_row;
        std::vector<int> argmin;
        std::vector<std::uint8_t> row;
        for (int r = 0; r < n; ++r) {
          if (used >> r & 1) continue;
          row.clear();
          for (const auto& cl : classes) {
            const std::size_t base = row.size();
            for (int c : cl) row.push_back(cell(r, c));
            std::sort(row.begin() + base, row.end());
          }
          if (argmin.empty() || row < min_row) {
            min_row = row;
            argmin.assign(1, r);
          } else if (row == min_row) {
            argmin.push_back(r);
          }
        }
        if (!best.empty()) {
          // compare cur + min_row against the same-length prefix of best
          for (std::size_t i = 0; i < cur.size() + min_row.size(); ++i) {
            const std::uint8_t mine = i < cur.size() ? cur[i] : min_row[i - cur.size()];
            if (mine != best[i]) {
              if (mine > best[i]) return;
              break;
            }
          }
        }
        for (int r : argmin) {
          std::vector<std::vector<int>> next;
          for (const auto& cl : classes) {
            std::array<std::vector<int>, kMaxSide + 1> bucket;
            for (int c : cl) bucket[cell(r, c)].push_back(c);
            for (int s = 1; s <= m; ++s)
              if (!bucket[s].empty()) next.push_back(std::move(bucket[s]));
          }
          cur.insert(cur.end(), min_row.begin(), min_row.end());
          self(self, next, used | (1u << r));
          cur.resize(cur.size() - min_row.size());
        }
      };
      dfs(dfs, {perm::identity(n)}, 0);
    } while (std::next_permutation(sp.begin(), sp.end()));
  }

  std::vector<std::uint8_t> key{static_cast<std::uint8_t>(n), static_cast<std::uint8_t>(m),
                                static_cast<std::uint8_t>(sq.lambda())};
  key.insert(key.end(), best.begin(), best.end());
  return key;
}

// Number of distinct squares reachable from sq by transforms, counted by
// enumerating the whole group and collecting images. Independent of the
// matcher above, so the two can cross-check each other.
inline long long orbit_size(const FrequencySquare& sq) {
  const int n = sq.n(), m = sq.m();
  long long cost = 2;
  for (int i = 2; i <= n; ++i) cost *= i;
  for (int i = 2; i <= n; ++i) cost *= i;
  for (int i = 2; i <= m; ++i) cost *= i;
  if (cost > 30'000'000) throw Error(ErrorCode::TooLarge, "group too large to enumerate");
  std::set<std::vector<std::uint8_t>> images;
  std::vector<std::uint8_t> out(static_cast<std::size_t>(n) * n);
  for (bool transposed : {false, true}) {
    std::vector<int> sp = perm::identity(m);
    do {
      const auto rel = detail::relabelled(sq, transposed, sp);
      std::vector<int> rho = perm::identity(n);
      do {
        std::vector<int> kappa = perm::identity(n);
        do {
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              out[static_cast<std::size_t>(rho[i]) * n + kappa[j]] = rel[static_cast<std::size_t>(i) * n + j];
          images.insert(out);
        } while (std::next_permutation(kappa.begin(), kappa.end()));
      } while (std::next_permutation(rho.begin(), rho.end()));
    } while (std::next_permutation(sp.begin(), sp.end()));
  }
  return static_cast<long long>(images.size());
}

}  // namespace fsq
