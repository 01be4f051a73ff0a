#pragma once

// Balanced-diagonal search.
//
//   find_exact     complete backtracking over rows; proves absence.
//   swap_descent   seeded greedy local search over row/column transpositions
//                  and 3-cycles acting on the current diagonal; never proves
//                  absence.
//   find_balanced  descent first, exact fallback.
//
// Also: the 2x2 pattern probe (three cells e, one f), the constructive
// balanced-diagonal algorithm for two-symbol squares (which emits an
// equivalence certificate to make_A(lambda) for the unique exceptional
// family), and complete k-plex search for Latin squares.

#include <array>
#include <bit>
#include <chrono>
#include <cstdint>
#include <optional>
#include <random>

#include "fsq/constructions.hpp"
#include "fsq/core.hpp"
#include "fsq/plex.hpp"

namespace fsq {

inline constexpr std::uint64_t kDefaultSeed = 0x5eed0001ULL;
inline constexpr int kDefaultRestarts = 20;
inline constexpr long long kFallbackBudget = 50'000'000;  // exact fallback above side 12

enum class SearchStatus { Found, ProvedAbsent, Unknown };

struct SearchStats {
  long long nodes = 0;
  int restarts = 0;
  double elapsed_ms = 0;
};

struct SearchOutcome {
  SearchStatus status = SearchStatus::Unknown;
  std::optional<Diagonal> witness;
  SearchStats stats;
};

namespace detail {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Shared backtracking core: assigns a distinct free column to each row in a
// fixed order, keeping every symbol's diagonal tally at most lambda and
// pruning states from which some symbol can no longer reach lambda or some
// remaining row has no usable column left.
class ExactSearcher {
 public:
  ExactSearcher(const FrequencySquare& sq, std::optional<long long> budget)
      : sq_(sq), n_(sq.n()), m_(sq.m()), lambda_(sq.lambda()), budget_(budget), counts_(sq.m() + 1, 0), chosen_(sq.n()) {
    col_mask_.assign(static_cast<std::size_t>(n_) * (m_ + 1), 0);
    for (int r = 0; r < n_; ++r)
      for (int c = 0; c < n_; ++c) col_mask_[static_cast<std::size_t>(r) * (m_ + 1) + sq.at(r, c)] |= 1ULL << c;
    // Static most-constrained row order: rows sorted by the number of columns
    // feasible under the initial symbol budgets, ties by index. For squares
    // with equal frequencies all rows tie, so this is the index order.
    order_.resize(n_);
    std::vector<int> score(n_, 0);
    for (int r = 0; r < n_; ++r)
      for (int c = 0; c < n_; ++c)
        if (counts_[sq.at(r, c)] < lambda_) ++score[r];
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) { return score[a] < score[b]; });
  }

  // visit receives the finished diagonal (original row -> column) and returns
  // true to keep enumerating. Returns true when the search space was
  // exhausted, false when stopped early by the visitor or the budget.
  template <typename Visitor>
  bool run(Visitor&& visit) {
    return descend(0, visit);
  }

  long long nodes() const { return nodes_; }
  bool budget_hit() const { return budget_hit_; }

 private:
  std::uint64_t mask(int r, int s) const { return col_mask_[static_cast<std::size_t>(r) * (m_ + 1) + s]; }

  bool feasible(int depth) const {
    std::array<int, kMaxSide + 1> supply{};
    const std::uint64_t free = ~used_;
    for (int d = depth; d < n_; ++d) {
      const int r = order_[d];
      bool any = false;
      for (int s = 1; s <= m_; ++s) {
        if (counts_[s] >= lambda_) continue;
        if (mask(r, s) & free) {
          any = true;
          ++supply[s];
        }
      }
      if (!any) return false;
    }
    for (int s = 1; s <= m_; ++s)
      if (counts_[s] < lambda_ && counts_[s] + supply[s] < lambda_) return false;
    return true;
  }

  template <typename Visitor>
  bool descend(int depth, Visitor& visit) {
    if (depth == n_) {
      std::vector<int> sigma(n_);
      for (int d = 0; d < n_; ++d) sigma[order_[d]] = chosen_[d];
      return visit(Diagonal(std::move(sigma)));
    }
    if (!feasible(depth)) return true;
    const int r = order_[depth];
    for (int c = 0; c < n_; ++c) {
      if (used_ & (1ULL << c)) continue;
      const int s = sq_.at(r, c);
      if (counts_[s] >= lambda_) continue;
      if (budget_ && nodes_ >= *budget_) {
        budget_hit_ = true;
        return false;
      }
      ++nodes_;
      used_ |= 1ULL << c;
      ++counts_[s];
      chosen_[depth] = c;
      const bool keep_going = descend(depth + 1, visit);
      used_ &= ~(1ULL << c);
      --counts_[s];
      if (!keep_going) return false;
    }
    return true;
  }

  const FrequencySquare& sq_;
  int n_, m_, lambda_;
  std::optional<long long> budget_;
  std::vector<std::uint64_t> col_mask_;
  std::vector<int> order_, counts_, chosen_;
  std::uint64_t used_ = 0;
  long long nodes_ = 0;
  bool budget_hit_ = false;
};

}  // namespace detail

// Complete search. Found and ProvedAbsent are definitive; Unknown only when
// the node budget ran out first.
inline SearchOutcome find_exact(const FrequencySquare& sq, std::optional<long long> budget = std::nullopt) {
  detail::Stopwatch clock;
  detail::ExactSearcher searcher(sq, budget);
  SearchOutcome out;
  searcher.run([&](Diagonal d) {
    if (is_balanced(sq, d)) {
      out.witness = std::move(d);
      return false;
    }
    return true;
  });
  out.status = out.witness                ? SearchStatus::Found
               : searcher.budget_hit()    ? SearchStatus::Unknown
                                          : SearchStatus::ProvedAbsent;
  out.stats.nodes = searcher.nodes();
  out.stats.elapsed_ms = clock.ms();
  return out;
}

// All balanced diagonals, for small squares.
inline std::vector<Diagonal> find_exact_all(const FrequencySquare& sq) {
  if (sq.n() > 8) throw Error(ErrorCode::TooLarge, "enumeration of all balanced diagonals is limited to n <= 8");
  detail::ExactSearcher searcher(sq, std::nullopt);
  std::vector<Diagonal> all;
  searcher.run([&](Diagonal d) {
    if (is_balanced(sq, d)) all.push_back(std::move(d));
    return true;
  });
  return all;
}

// Moves of the local search, acting on diagonal positions. Swaps use a < b
// (c = -1); 3-cycles use a < b, a < c, b != c and send the content of
// position a to b, b to c, and c to a. Lexicographic encoding is
// (kind, a, b, c) with kinds in declaration order.
enum class MoveKind : int { RowSwap = 0, ColSwap = 1, RowCycle = 2, ColCycle = 3 };

struct Move {
  MoveKind kind;
  int a = 0, b = 0, c = -1;
};

// Current diagonal of the search: position i holds the cell
// (row_at[i], col_at[i]) of the square. Bookkeeping is incremental; the
// objective is the sum over symbols of |tally - lambda|.
class DescentState {
 public:
  explicit DescentState(const FrequencySquare& sq)
      : sq_(&sq), row_at_(perm::identity(sq.n())), col_at_(perm::identity(sq.n())), counts_(sq.m() + 1, 0) {
    for (int i = 0; i < sq.n(); ++i) ++counts_[sym(i)];
    for (int s = 1; s <= sq.m(); ++s) objective_ += std::abs(counts_[s] - sq.lambda());
  }

  int n() const { return sq_->n(); }
  int objective() const { return objective_; }
  const std::vector<int>& counts() const { return counts_; }

  int eval_move(const Move& mv) const {
    check(mv);
    int delta = 0;
    for_changes(mv, [&](int old_sym, int new_sym) {
      if (old_sym == new_sym) return;
      delta += step(old_sym, -1);
      scratch_[old_sym] -= 1;  // stage so chained changes see it
      delta += step(new_sym, +1);
      scratch_[new_sym] += 1;
    });
    std::fill(scratch_.begin(), scratch_.end(), 0);
    return delta;
  }

  void apply_move(const Move& mv) {
    check(mv);
    for_positions(mv, [&](int pos) {
      const int s = sym(pos);
      objective_ += std::abs(counts_[s] - 1 - sq_->lambda()) - std::abs(counts_[s] - sq_->lambda());
      --counts_[s];
    });
    permute(mv);
    for_positions(mv, [&](int pos) {
      const int s = sym(pos);
      objective_ += std::abs(counts_[s] + 1 - sq_->lambda()) - std::abs(counts_[s] - sq_->lambda());
      ++counts_[s];
    });
  }

  Diagonal current() const {
    std::vector<int> sigma(n());
    for (int i = 0; i < n(); ++i) sigma[row_at_[i]] = col_at_[i];
    return Diagonal(std::move(sigma));
  }

 private:
  int sym(int pos) const { return sq_->at(row_at_[pos], col_at_[pos]); }

  void check(const Move& mv) const {
    const bool cycle = mv.kind == MoveKind::RowCycle || mv.kind == MoveKind::ColCycle;
    auto in_range = [&](int i) { return i >= 0 && i < n(); };
    if (!in_range(mv.a) || !in_range(mv.b) || mv.a == mv.b || (cycle && (!in_range(mv.c) || mv.c == mv.a || mv.c == mv.b)))
      throw Error(ErrorCode::SizeMismatch, "move indices must be distinct positions");
  }

  template <typename F>
  void for_positions(const Move& mv, F&& f) const {
    f(mv.a);
    f(mv.b);
    if (mv.kind == MoveKind::RowCycle || mv.kind == MoveKind::ColCycle) f(mv.c);
  }

  void permute(const Move& mv) {
    auto& axis = (mv.kind == MoveKind::RowSwap || mv.kind == MoveKind::RowCycle) ? row_at_ : col_at_;
    if (mv.kind == MoveKind::RowSwap || mv.kind == MoveKind::ColSwap) {
      std::swap(axis[mv.a], axis[mv.b]);
    } else {
      const int va = axis[mv.a];
      axis[mv.a] = axis[mv.c];
      axis[mv.c] = axis[mv.b];
      axis[mv.b] = va;
    }
  }

  // Old/new diagonal symbol at each affected position without mutating state.
  template <typename F>
  void for_changes(const Move& mv, F&& f) const {
    const bool rows = mv.kind == MoveKind::RowSwap || mv.kind == MoveKind::RowCycle;
    auto cell = [&](int rpos, int cpos) {
      return sq_->at(row_at_[rpos], col_at_[cpos]);
    };
    auto pair = [&](int pos, int src) {
      // content of `src` lands at position `pos` along the moving axis
      f(sym(pos), rows ? cell(src, pos) : cell(pos, src));
    };
    if (mv.kind == MoveKind::RowSwap || mv.kind == MoveKind::ColSwap) {
      pair(mv.a, mv.b);
      pair(mv.b, mv.a);
    } else {
      pair(mv.b, mv.a);
      pair(mv.c, mv.b);
      pair(mv.a, mv.c);
    }
  }

  int step(int s, int dir) const {
    const int cur = counts_[s] + scratch_[s];
    return std::abs(cur + dir - sq_->lambda()) - std::abs(cur - sq_->lambda());
  }

  const FrequencySquare* sq_;
  std::vector<int> row_at_, col_at_;
  std::vector<int> counts_;
  int objective_ = 0;
  mutable std::vector<int> scratch_ = std::vector<int>(kMaxSide + 1, 0);
};

// Greedy best-improvement descent with randomized restarts. Deterministic for
// a given seed; ties between equally improving moves go to the smallest
// lexicographic encoding. Returns Found or Unknown, never ProvedAbsent.
inline SearchOutcome swap_descent(const FrequencySquare& sq, std::uint64_t seed = kDefaultSeed,
                                  int restarts = kDefaultRestarts) {
  detail::Stopwatch clock;
  const int n = sq.n();
  DescentState st(sq);
  std::mt19937_64 rng(seed);
  SearchOutcome out;

  auto best_improving = [&](Move& best) {
    int best_delta = 0;
    auto consider = [&](const Move& mv) {
      const int delta = st.eval_move(mv);
      if (delta < best_delta) {
        best_delta = delta;
        best = mv;
      }
    };
    for (MoveKind kind : {MoveKind::RowSwap, MoveKind::ColSwap})
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) consider({kind, a, b});
    for (MoveKind kind : {MoveKind::RowCycle, MoveKind::ColCycle})
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
          for (int c = a + 1; c < n; ++c)
            if (c != b) consider({kind, a, b, c});
    return best_delta < 0;
  };

  for (int round = 0;; ++round) {
    Move mv{MoveKind::RowSwap, 0, 1};
    while (st.objective() != 0 && best_improving(mv)) {
      st.apply_move(mv);
      ++out.stats.nodes;
    }
    if (st.objective() == 0) {
      out.status = SearchStatus::Found;
      out.witness = st.current();
      break;
    }
    if (round >= restarts) {
      out.status = SearchStatus::Unknown;
      break;
    }
    // perturbation: 2n random transpositions
    for (int i = 0; i < 2 * n; ++i) {
      const MoveKind kind = detail::rng_below(rng, 2) ? MoveKind::ColSwap : MoveKind::RowSwap;
      const int a = detail::rng_below(rng, n);
      int b = detail::rng_below(rng, n - 1);
      if (b >= a) ++b;
      st.apply_move({kind, std::min(a, b), std::max(a, b)});
      ++out.stats.nodes;
    }
    ++out.stats.restarts;
  }
  out.stats.elapsed_ms = clock.ms();
  return out;
}

// Descent first; on Unknown fall back to exact search, unbudgeted up to side
// 12 so the combined result is definitive there.
inline SearchOutcome find_balanced(const FrequencySquare& sq, std::uint64_t seed = kDefaultSeed,
                                   int restarts = kDefaultRestarts) {
  SearchOutcome d = swap_descent(sq, seed, restarts);
  if (d.status == SearchStatus::Found) return d;
  std::optional<long long> budget;
  if (sq.n() > 12) budget = kFallbackBudget;
  SearchOutcome e = find_exact(sq, budget);
  e.stats.nodes += d.stats.nodes;
  e.stats.restarts = d.stats.restarts;
  e.stats.elapsed_ms += d.stats.elapsed_ms;
  return e;
}

// First 2x2 subarray with grid[r][c] = grid[r][c2] = grid[r2][c] = e and
// grid[r2][c2] = f != e, scanning ordered row pairs; any one-odd-corner 2x2
// is reported in this orientation.
struct Pattern2x2 {
  int r, r2, c, c2;
  int f;
};

inline std::optional<Pattern2x2> find_pattern_2x2(const FrequencySquare& sq, int e) {
  if (e < 1 || e > sq.m()) throw Error(ErrorCode::SymbolOutOfRange, "symbol " + std::to_string(e));
  const int n = sq.n();
  std::vector<std::uint64_t> has_e(n, 0);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (sq.at(r, c) == e) has_e[r] |= 1ULL << c;
  for (int r = 0; r < n; ++r)
    for (int r2 = 0; r2 < n; ++r2) {
      if (r2 == r) continue;
      const std::uint64_t common = has_e[r] & has_e[r2];
      const std::uint64_t off = has_e[r] & ~has_e[r2];
      if (!common || !off) continue;
      const int c = std::countr_zero(common);
      const int c2 = std::countr_zero(off);
      return Pattern2x2{r, r2, c, c2, sq.at(r2, c2)};
    }
  return std::nullopt;
}

struct M2Result {
  std::optional<Diagonal> witness;
  std::optional<EquivalenceCertificate> certificate;
};

namespace detail {

// Balanced diagonal of make_A(lambda) for even lambda: half of each block
// diagonal, the remaining rows routed through the off blocks.
inline Diagonal even_a_diagonal(int lambda) {
  const int h = lambda / 2, n = 2 * lambda;
  std::vector<int> sigma(n);
  for (int i = 0; i < h; ++i) sigma[i] = i;
  for (int i = h; i < lambda; ++i) sigma[i] = i + lambda;
  for (int i = lambda; i < lambda + h; ++i) sigma[i] = i;
  for (int i = lambda + h; i < n; ++i) sigma[i] = i - lambda;
  return Diagonal(std::move(sigma));
}

// Certificate for a pattern-free two-symbol square: rows sharing row 0's
// symbol-1 column set go first, those columns go first, and the result is
// make_A(lambda) exactly.
inline EquivalenceCertificate pattern_free_to_a(const FrequencySquare& sq) {
  const int n = sq.n(), lambda = sq.lambda();
  std::uint64_t s0 = 0;
  for (int c = 0; c < n; ++c)
    if (sq.at(0, c) == 1) s0 |= 1ULL << c;
  Transform t = Transform::identity(n, 2);
  int front_r = 0, back_r = lambda, front_c = 0, back_c = lambda;
  for (int r = 0; r < n; ++r) {
    std::uint64_t ones = 0;
    for (int c = 0; c < n; ++c)
      if (sq.at(r, c) == 1) ones |= 1ULL << c;
    t.row_perm[r] = (ones == s0) ? front_r++ : back_r++;
  }
  for (int c = 0; c < n; ++c) t.col_perm[c] = (s0 >> c & 1) ? front_c++ : back_c++;
  if (front_r != lambda || front_c != lambda || apply_transform(sq, t) != make_A(lambda))
    throw std::logic_error("pattern-free square did not normalize to the exceptional form");
  return {t};
}

}  // namespace detail

// Constructive balanced-diagonal algorithm for two-symbol squares. If the
// square contains no 2x2 subarray with three equal cells and one other, it is
// equivalent to make_A(lambda) and a certificate is returned (plus a directly
// constructed witness when lambda is even). Otherwise the pattern is moved to
// rows/columns 1,2, and greedy row swaps drive the main diagonal's symbol-1
// tally to lambda: while it is off by at least two, swap two later rows whose
// diagonal cells hold the majority symbol and whose crossing holds the
// minority one; a final swap of the first two rows absorbs an off-by-one.
inline M2Result constructive_m2(const FrequencySquare& sq) {
  if (sq.m() != 2) throw Error(ErrorCode::WrongSymbolCount, "constructive search needs exactly two symbols");
  const int n = sq.n(), lambda = sq.lambda();

  auto pat = find_pattern_2x2(sq, 1);
  int e = 1;
  if (!pat) {
    pat = find_pattern_2x2(sq, 2);
    e = 2;
  }
  if (!pat) {
    M2Result res;
    res.certificate = detail::pattern_free_to_a(sq);
    if (lambda % 2 == 0)
      res.witness = map_diagonal(detail::even_a_diagonal(lambda), inverse(res.certificate->transform));
    return res;
  }

  // normalize: pattern rows/columns to the front, pattern symbol to 1
  Transform t = Transform::identity(n, 2);
  {
    int next = 2;
    for (int r = 0; r < n; ++r) t.row_perm[r] = r == pat->r ? 0 : r == pat->r2 ? 1 : next++;
    next = 2;
    for (int c = 0; c < n; ++c) t.col_perm[c] = c == pat->c ? 0 : c == pat->c2 ? 1 : next++;
    if (e == 2) t.symbol_perm = {1, 0};
  }
  std::vector<std::uint8_t> w(apply_transform(sq, t).cells());
  std::vector<int> row_of = perm::inverse(t.row_perm);  // position -> original row
  const std::vector<int> col_of = perm::inverse(t.col_perm);
  auto at = [&](int r, int c) { return w[static_cast<std::size_t>(r) * n + c]; };
  auto swap_rows = [&](int r1, int r2) {
    for (int c = 0; c < n; ++c)
      std::swap(w[static_cast<std::size_t>(r1) * n + c], w[static_cast<std::size_t>(r2) * n + c]);
    std::swap(row_of[r1], row_of[r2]);
  };
  auto ones_on_diagonal = [&] {
    int x = 0;
    for (int i = 0; i < n; ++i) x += at(i, i) == 1;
    return x;
  };

  for (int x = ones_on_diagonal(); x != lambda; x = ones_on_diagonal()) {
    if (x == lambda - 1) {
      swap_rows(0, 1);  // the pattern block turns its two diagonal cells into 1,1
      break;
    }
    const int want_diag = x < lambda ? 2 : 1;  // symbol sitting on the swapped diagonal cells
    const int want_cross = 3 - want_diag;
    bool swapped = false;
    int fallback_r = -1, fallback_r2 = -1;
    for (int r = 2; r < n && !swapped; ++r) {
      if (at(r, r) != want_diag) continue;
      for (int r2 = 2; r2 < n; ++r2) {
        if (r2 == r || at(r2, r2) != want_diag || at(r, r2) != want_cross) continue;
        if (x == lambda + 1 && at(r2, r) != 1) {
          if (fallback_r < 0) {
            fallback_r = r;
            fallback_r2 = r2;
          }
          continue;  // this swap would overshoot to lambda - 1
        }
        swap_rows(r, r2);
        swapped = true;
        break;
      }
    }
    if (!swapped) {
      if (x == lambda + 1 && fallback_r >= 0) {
        swap_rows(fallback_r, fallback_r2);  // lands at lambda - 1 ...
        swap_rows(0, 1);                     // ... and the front swap finishes
        break;
      }
      throw std::logic_error("two-symbol descent stalled; the swap guarantee failed");
    }
  }

  std::vector<int> sigma(n);
  for (int i = 0; i < n; ++i) sigma[row_of[i]] = col_of[i];
  M2Result res;
  res.witness = Diagonal(std::move(sigma));
  if (!is_balanced(sq, *res.witness)) throw std::logic_error("two-symbol descent produced an unbalanced diagonal");
  return res;
}

// Complete k-plex search over a Latin square: rows in order, k ascending
// columns per row, pruning on column/symbol capacity and on rows left.
inline std::optional<PlexSelection> find_k_plex(const FrequencySquare& L, int k,
                                                std::optional<long long> budget = std::nullopt) {
  if (!L.latin()) throw Error(ErrorCode::ShapeMismatch, "k-plex search needs a Latin square");
  const int n = L.n();
  if (k < 1 || k > n) throw Error(ErrorCode::DimensionMismatch, "k must be between 1 and n");
  std::vector<int> col_count(n, 0), sym_count(n + 1, 0);
  std::vector<std::pair<int, int>> cells;
  long long nodes = 0;

  auto capacity_ok = [&](int rows_done) {
    const int left = n - rows_done;
    for (int c = 0; c < n; ++c)
      if (k - col_count[c] > left) return false;
    for (int s = 1; s <= n; ++s)
      if (k - sym_count[s] > left) return false;
    return true;
  };

  // chooses the remaining columns of row r starting at c0
  auto search = [&](auto&& self, int r, int c0, int left_in_row) -> bool {
    if (left_in_row == 0) {
      if (r + 1 == n) return true;
      return capacity_ok(r + 1) && self(self, r + 1, 0, k);
    }
    for (int c = c0; c <= n - left_in_row; ++c) {
      const int s = L.at(r, c);
      if (col_count[c] == k || sym_count[s] == k) continue;
      if (budget && nodes >= *budget) throw Error(ErrorCode::BudgetExhausted, "k-plex search budget exhausted");
      ++nodes;
      ++col_count[c];
      ++sym_count[s];
      cells.emplace_back(r, c);
      if (self(self, r, c + 1, left_in_row - 1)) return true;
      cells.pop_back();
      --col_count[c];
      --sym_count[s];
    }
    return false;
  };

  if (!search(search, 0, 0, k)) return std::nullopt;
  PlexSelection p{n, k, std::move(cells)};
  std::sort(p.cells.begin(), p.cells.end());
  return p;
}

}  // namespace fsq
