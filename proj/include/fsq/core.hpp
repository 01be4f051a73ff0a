#pragma once

// Core types for frequency squares of type F(n; lambda^m): a validated n x n
// grid over symbols 1..m where every symbol appears exactly lambda times in
// each row and each column (n = m*lambda), diagonals (one cell per row, one
// per column), per-diagonal symbol counts, and the transform group generated
// by row permutations, column permutations, symbol relabellings and transpose.
//
// Conventions: rows, columns and permutation images are 0-based in memory and
// 1-based in the text/structured formats; symbols are 1..m everywhere. A
// Transform applies transpose first, then the row permutation, then the
// column permutation, then the symbol relabelling. Objects are immutable
// after construction and safe to share across threads.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fsq {

inline constexpr int kMaxSide = 64;  // supported envelope for the side n

enum class ErrorCode {
  DimensionMismatch,
  SymbolOutOfRange,
  RowCountViolation,
  ColumnCountViolation,
  LengthMismatch,
  SizeMismatch,
  NotAPermutation,
  NotADivisor,
  EntryMismatch,
  NotAPlex,
  DivisibilityViolation,
  OddOrder,
  WrongSymbolCount,
  ShapeMismatch,
  TooLarge,
  BudgetExhausted,
  ParityPreconditionFailed,
  ParseError,
};

struct Error : std::runtime_error {
  ErrorCode code;
  Error(ErrorCode c, const std::string& what) : std::runtime_error(what), code(c) {}
};

// Boundary representation of a square: rows of 1-based symbols.
using Grid = std::vector<std::vector<int>>;

namespace perm {

inline bool valid(const std::vector<int>& p) {
  std::vector<char> seen(p.size(), 0);
  for (int v : p) {
    if (v < 0 || v >= static_cast<int>(p.size()) || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

inline std::vector<int> identity(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

inline std::vector<int> inverse(const std::vector<int>& p) {
  std::vector<int> q(p.size());
  for (int i = 0; i < static_cast<int>(p.size()); ++i) q[p[i]] = i;
  return q;
}

// compose(outer, inner)[i] = outer[inner[i]]; inner acts first.
inline std::vector<int> compose(const std::vector<int>& outer, const std::vector<int>& inner) {
  std::vector<int> r(inner.size());
  for (int i = 0; i < static_cast<int>(inner.size()); ++i) r[i] = outer[inner[i]];
  return r;
}

}  // namespace perm

class FrequencySquare {
 public:
  // Checks dimensions, symbol range and both frequency conditions; the only
  // way to obtain an instance.
  static FrequencySquare validate(const Grid& grid, int m, int lambda) {
    if (m < 1 || lambda < 1) throw Error(ErrorCode::DimensionMismatch, "m and lambda must be positive");
    const int n = m * lambda;
    if (static_cast<int>(grid.size()) != n)
      throw Error(ErrorCode::DimensionMismatch,
                  "grid has " + std::to_string(grid.size()) + " rows, expected n = m*lambda = " + std::to_string(n));
    std::vector<std::uint8_t> cells;
    cells.reserve(static_cast<std::size_t>(n) * n);
    for (const auto& row : grid) {
      if (static_cast<int>(row.size()) != n)
        throw Error(ErrorCode::DimensionMismatch, "grid is not square");
      for (int v : row) {
        if (v < 1 || v > 255) throw Error(ErrorCode::SymbolOutOfRange, "symbol " + std::to_string(v));
        cells.push_back(static_cast<std::uint8_t>(v));
      }
    }
    return validate_cells(m, lambda, std::move(cells));
  }

  int n() const { return n_; }
  int m() const { return m_; }
  int lambda() const { return lambda_; }
  bool latin() const { return lambda_ == 1 && m_ == n_; }

  // 0-based cell access; symbol in 1..m.
  int at(int r, int c) const { return cells_[static_cast<std::size_t>(r) * n_ + c]; }
  const std::vector<std::uint8_t>& cells() const { return cells_; }

  Grid grid() const {
    Grid g(n_, std::vector<int>(n_));
    for (int r = 0; r < n_; ++r)
      for (int c = 0; c < n_; ++c) g[r][c] = at(r, c);
    return g;
  }

  bool operator==(const FrequencySquare&) const = default;

  static FrequencySquare validate_cells(int m, int lambda, std::vector<std::uint8_t> cells) {
    if (m < 1 || lambda < 1) throw Error(ErrorCode::DimensionMismatch, "m and lambda must be positive");
    const int n = m * lambda;
    if (n > kMaxSide) throw Error(ErrorCode::TooLarge, "side " + std::to_string(n) + " exceeds supported maximum 64");
    if (static_cast<int>(cells.size()) != n * n)
      throw Error(ErrorCode::DimensionMismatch, "cell buffer does not match n*n");
    for (std::uint8_t v : cells)
      if (v < 1 || v > m)
        throw Error(ErrorCode::SymbolOutOfRange, "symbol " + std::to_string(int(v)) + " outside 1.." + std::to_string(m));
    std::vector<int> count(m + 1);
    for (int r = 0; r < n; ++r) {
      std::fill(count.begin(), count.end(), 0);
      for (int c = 0; c < n; ++c) ++count[cells[static_cast<std::size_t>(r) * n + c]];
      for (int s = 1; s <= m; ++s)
        if (count[s] != lambda)
          throw Error(ErrorCode::RowCountViolation,
                      "row " + std::to_string(r + 1) + ": symbol " + std::to_string(s) + " occurs " +
                          std::to_string(count[s]) + " times, expected " + std::to_string(lambda));
    }
    for (int c = 0; c < n; ++c) {
      std::fill(count.begin(), count.end(), 0);
      for (int r = 0; r < n; ++r) ++count[cells[static_cast<std::size_t>(r) * n + c]];
      for (int s = 1; s <= m; ++s)
        if (count[s] != lambda)
          throw Error(ErrorCode::ColumnCountViolation,
                      "column " + std::to_string(c + 1) + ": symbol " + std::to_string(s) + " occurs " +
                          std::to_string(count[s]) + " times, expected " + std::to_string(lambda));
    }
    return FrequencySquare(n, m, lambda, std::move(cells));
  }

 private:
  FrequencySquare(int n, int m, int lambda, std::vector<std::uint8_t> cells)
      : n_(n), m_(m), lambda_(lambda), cells_(std::move(cells)) {}

  int n_, m_, lambda_;
  std::vector<std::uint8_t> cells_;  // row-major, symbols 1..m
};

// Validation entry point for squares with unequal frequencies
// F(n; lambda_1,...,lambda_m): symbol s must occur lambdas[s-1] times in
// every row and column. Throws on violation.
inline void validate_general(const Grid& grid, const std::vector<int>& lambdas) {
  const int m = static_cast<int>(lambdas.size());
  long long n = 0;
  for (int l : lambdas) {
    if (l < 1) throw Error(ErrorCode::DimensionMismatch, "frequencies must be positive");
    n += l;
  }
  if (n > kMaxSide) throw Error(ErrorCode::TooLarge, "side exceeds supported maximum 64");
  if (static_cast<long long>(grid.size()) != n)
    throw Error(ErrorCode::DimensionMismatch, "grid side must equal the frequency sum");
  for (const auto& row : grid)
    if (static_cast<long long>(row.size()) != n) throw Error(ErrorCode::DimensionMismatch, "grid is not square");
  for (const auto& row : grid)
    for (int v : row)
      if (v < 1 || v > m) throw Error(ErrorCode::SymbolOutOfRange, "symbol " + std::to_string(v));
  std::vector<int> count(m + 1);
  for (int r = 0; r < n; ++r) {
    std::fill(count.begin(), count.end(), 0);
    for (int v : grid[r]) ++count[v];
    for (int s = 1; s <= m; ++s)
      if (count[s] != lambdas[s - 1])
        throw Error(ErrorCode::RowCountViolation, "row " + std::to_string(r + 1) + ": symbol " + std::to_string(s));
  }
  for (int c = 0; c < n; ++c) {
    std::fill(count.begin(), count.end(), 0);
    for (int r = 0; r < n; ++r) ++count[grid[r][c]];
    for (int s = 1; s <= m; ++s)
      if (count[s] != lambdas[s - 1])
        throw Error(ErrorCode::ColumnCountViolation, "column " + std::to_string(c + 1) + ": symbol " + std::to_string(s));
  }
}

// A diagonal: one cell per row and per column, stored as the column chosen in
// each row. Always a permutation.
class Diagonal {
 public:
  explicit Diagonal(std::vector<int> zero_based_cols) : cols_(std::move(zero_based_cols)) {
    if (static_cast<int>(cols_.size()) > kMaxSide) throw Error(ErrorCode::TooLarge, "diagonal too long");
    if (!perm::valid(cols_)) throw Error(ErrorCode::NotAPermutation, "diagonal columns must form a permutation");
  }

  static Diagonal identity(int n) { return Diagonal(perm::identity(n)); }

  static Diagonal from_one_based(const std::vector<int>& sigma) {
    std::vector<int> c(sigma.size());
    for (std::size_t i = 0; i < sigma.size(); ++i) c[i] = sigma[i] - 1;
    return Diagonal(std::move(c));
  }

  std::vector<int> to_one_based() const {
    std::vector<int> s(cols_.size());
    for (std::size_t i = 0; i < cols_.size(); ++i) s[i] = cols_[i] + 1;
    return s;
  }

  int size() const { return static_cast<int>(cols_.size()); }
  int col(int row) const { return cols_[row]; }
  const std::vector<int>& cols() const { return cols_; }

  bool operator==(const Diagonal&) const = default;

 private:
  std::vector<int> cols_;
};

// Symbol tally over a diagonal; count.at(s) for s in 1..m, index 0 unused.
struct SymbolCounts {
  std::vector<int> count;
  int of(int symbol) const { return count.at(symbol); }
  int total() const { return std::accumulate(count.begin(), count.end(), 0); }
  bool operator==(const SymbolCounts&) const = default;
};

inline SymbolCounts diagonal_counts(const FrequencySquare& sq, const Diagonal& d) {
  if (d.size() != sq.n()) throw Error(ErrorCode::LengthMismatch, "diagonal length does not match the square side");
  SymbolCounts sc{std::vector<int>(sq.m() + 1, 0)};
  for (int r = 0; r < sq.n(); ++r) ++sc.count[sq.at(r, d.col(r))];
  return sc;
}

// True when every symbol appears exactly lambda times on d.
inline bool is_balanced(const FrequencySquare& sq, const Diagonal& d) {
  SymbolCounts sc = diagonal_counts(sq, d);
  for (int s = 1; s <= sq.m(); ++s)
    if (sc.count[s] != sq.lambda()) return false;
  return true;
}

// Group element. Application order is fixed: transpose first, then rows,
// then columns, then symbols. All permutations map index -> image, 0-based.
struct Transform {
  std::vector<int> row_perm, col_perm, symbol_perm;
  bool transposed = false;

  static Transform identity(int n, int m) { return {perm::identity(n), perm::identity(n), perm::identity(m), false}; }

  bool operator==(const Transform&) const = default;
};

// Certificate that two squares are equivalent: apply_transform(a, transform)
// reproduces b exactly.
struct EquivalenceCertificate {
  Transform transform;
  bool operator==(const EquivalenceCertificate&) const = default;
};

namespace detail {
inline void check_transform(const FrequencySquare& sq, const Transform& t) {
  if (static_cast<int>(t.row_perm.size()) != sq.n() || static_cast<int>(t.col_perm.size()) != sq.n())
    throw Error(ErrorCode::SizeMismatch, "row/column permutation length does not match the square");
  if (static_cast<int>(t.symbol_perm.size()) != sq.m())
    throw Error(ErrorCode::SizeMismatch, "symbol permutation length does not match the symbol count");
  if (!perm::valid(t.row_perm) || !perm::valid(t.col_perm) || !perm::valid(t.symbol_perm))
    throw Error(ErrorCode::NotAPermutation, "transform components must be permutations");
}
}  // namespace detail

inline FrequencySquare apply_transform(const FrequencySquare& sq, const Transform& t) {
  detail::check_transform(sq, t);
  const int n = sq.n();
  std::vector<std::uint8_t> out(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int v = t.transposed ? sq.at(j, i) : sq.at(i, j);
      out[static_cast<std::size_t>(t.row_perm[i]) * n + t.col_perm[j]] =
          static_cast<std::uint8_t>(t.symbol_perm[v - 1] + 1);
    }
  return FrequencySquare::validate_cells(sq.m(), sq.lambda(), std::move(out));
}

// Where the cells of d land under t (symbol relabelling moves no cells).
// Balance is preserved: the diagonal's symbol multiset is only relabelled.
inline Diagonal map_diagonal(const Diagonal& d, const Transform& t) {
  const int n = d.size();
  if (static_cast<int>(t.row_perm.size()) != n || static_cast<int>(t.col_perm.size()) != n)
    throw Error(ErrorCode::SizeMismatch, "permutation length does not match the diagonal");
  if (!perm::valid(t.row_perm) || !perm::valid(t.col_perm))
    throw Error(ErrorCode::NotAPermutation, "transform components must be permutations");
  std::vector<int> out(n);
  if (!t.transposed) {
    for (int i = 0; i < n; ++i) out[t.row_perm[i]] = t.col_perm[d.col(i)];
  } else {
    for (int i = 0; i < n; ++i) out[t.row_perm[d.col(i)]] = t.col_perm[i];
  }
  return Diagonal(std::move(out));
}

inline Transform inverse(const Transform& t) {
  Transform r;
  r.transposed = t.transposed;
  r.symbol_perm = perm::inverse(t.symbol_perm);
  if (!t.transposed) {
    r.row_perm = perm::inverse(t.row_perm);
    r.col_perm = perm::inverse(t.col_perm);
  } else {
    r.row_perm = perm::inverse(t.col_perm);
    r.col_perm = perm::inverse(t.row_perm);
  }
  return r;
}

// compose(second, first): apply first, then second, as one Transform.
inline Transform compose(const Transform& second, const Transform& first) {
  if (second.row_perm.size() != first.row_perm.size() || second.symbol_perm.size() != first.symbol_perm.size())
    throw Error(ErrorCode::SizeMismatch, "transform sizes differ");
  Transform r;
  r.transposed = second.transposed != first.transposed;
  r.symbol_perm = perm::compose(second.symbol_perm, first.symbol_perm);
  if (!second.transposed) {
    r.row_perm = perm::compose(second.row_perm, first.row_perm);
    r.col_perm = perm::compose(second.col_perm, first.col_perm);
  } else {
    r.row_perm = perm::compose(second.row_perm, first.col_perm);
    r.col_perm = perm::compose(second.col_perm, first.row_perm);
  }
  return r;
}

}  // namespace fsq
