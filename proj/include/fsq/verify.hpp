#pragma once

// Verification harness. Each check sweeps a universe of squares (exhaustively
// where it fits, by seeded sampling otherwise) and returns a structured
// report. Checks never assert the claim themselves: a failing input becomes a
// recorded violation, and callers decide what a nonempty list means.
//
// Violations are revalidated before they are stored: the witness grid is
// serialized, parsed back and rechecked, so a report can never carry a
// counterexample that does not reproduce from its own bytes.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fsq/constructions.hpp"
#include "fsq/core.hpp"
#include "fsq/equivalence.hpp"
#include "fsq/io.hpp"
#include "fsq/search.hpp"

namespace fsq {

enum class ReportMode { Exhaustive, Sampled };

struct Violation {
  std::string description;
  std::string square_text;    // witness grid, empty for aggregate findings
  std::string canonical_hex;  // canonical key of the witness when computable
};

struct VerificationReport {
  std::string target;
  std::vector<std::pair<std::string, long long>> parameters;
  ReportMode mode = ReportMode::Exhaustive;
  long long total_checked = 0;
  std::vector<Violation> violations;
  std::map<std::string, long long> tallies;
  std::vector<std::string> items;  // per-case outcome lines for table output
  std::uint64_t seed = 0;
  long long elapsed_ms = 0;
  bool passed() const { return violations.empty(); }
};

namespace detail {

inline std::string to_hex(const std::vector<std::uint8_t>& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xf]);
  }
  return out;
}

}  // namespace detail

inline void add_violation(VerificationReport& rep, std::string description) {
  rep.violations.push_back({std::move(description), "", ""});
}

// still_violated receives the witness parsed back from its stored text and
// must confirm the failure from scratch.
template <typename Recheck>
void add_violation(VerificationReport& rep, const FrequencySquare& sq, std::string description,
                   Recheck&& still_violated) {
  Violation v;
  v.square_text = to_text(sq);
  FrequencySquare back = parse_text(v.square_text);
  if (!still_violated(back)) throw std::logic_error("violation witness failed revalidation");
  v.description = std::move(description);
  try {
    v.canonical_hex = detail::to_hex(canonical_key(back));
  } catch (const Error&) {
    v.canonical_hex.clear();
  }
  rep.violations.push_back(std::move(v));
}

namespace detail {

// Cell-by-cell backtracking over the grid in row-major order; rows therefore
// come out in lexicographic order. A node is one placed cell.
class SquareEnumerator {
 public:
  SquareEnumerator(int m, int lambda, std::function<bool(const FrequencySquare&)> fn,
                   std::optional<long long> max_nodes)
      : m_(m), lambda_(lambda), n_(m * lambda), fn_(std::move(fn)), max_nodes_(max_nodes),
        cells_(static_cast<std::size_t>(n_) * n_),
        col_rem_(static_cast<std::size_t>(n_) * (m_ + 1), lambda),
        row_rem_(m_ + 1, lambda) {}

  long long run() {
    fill(0, 0);
    return count_;
  }

 private:
  void fill(int r, int c) {
    if (stop_) return;
    if (c == n_) {
      if (r + 1 == n_) {
        ++count_;
        if (!fn_(FrequencySquare::validate_cells(m_, lambda_, cells_))) stop_ = true;
        return;
      }
      std::fill(row_rem_.begin(), row_rem_.end(), lambda_);
      fill(r + 1, 0);
      // a completed row has an all-zero budget; restore it for backtracking
      std::fill(row_rem_.begin(), row_rem_.end(), 0);
      return;
    }
    for (int s = 1; s <= m_; ++s) {
      if (row_rem_[s] == 0 || col_rem_[static_cast<std::size_t>(c) * (m_ + 1) + s] == 0) continue;
      if (max_nodes_ && ++nodes_ > *max_nodes_)
        throw Error(ErrorCode::BudgetExhausted, "enumeration node budget exhausted");
      --row_rem_[s];
      --col_rem_[static_cast<std::size_t>(c) * (m_ + 1) + s];
      cells_[static_cast<std::size_t>(r) * n_ + c] = static_cast<std::uint8_t>(s);
      fill(r, c + 1);
      ++row_rem_[s];
      ++col_rem_[static_cast<std::size_t>(c) * (m_ + 1) + s];
      if (stop_) return;
    }
  }

  int m_, lambda_, n_;
  std::function<bool(const FrequencySquare&)> fn_;
  std::optional<long long> max_nodes_;
  std::vector<std::uint8_t> cells_;
  std::vector<int> col_rem_, row_rem_;
  long long count_ = 0;
  long long nodes_ = 0;
  bool stop_ = false;
};

}  // namespace detail

// Yields every F(m*lambda; lambda^m) exactly once, rows in lexicographic
// order, and returns how many were yielded. The callback returns false to
// stop early. Guarded to sides <= guard_side (default 6); raise it at your
// own risk. An exhausted node budget raises BudgetExhausted.
inline long long enumerate_squares(int m, int lambda, const std::function<bool(const FrequencySquare&)>& fn,
                                   std::optional<long long> max_nodes = std::nullopt, int guard_side = 6) {
  if (m < 1 || lambda < 1) throw Error(ErrorCode::DimensionMismatch, "m and lambda must be positive");
  if (m * lambda > guard_side)
    throw Error(ErrorCode::TooLarge,
                "full enumeration guarded to side " + std::to_string(guard_side) + "; got " + std::to_string(m * lambda));
  detail::SquareEnumerator e(m, lambda, fn, max_nodes);
  return e.run();
}

inline constexpr long long kM3EnumNodeBudget = 4'000'000'000LL;
inline constexpr long long kStepsPerCell = 50;  // sampler steps are 50*n

namespace detail {

inline FrequencySquare sample_square(int m, int lambda, std::uint64_t seed, long long index) {
  const int n = m * lambda;
  return random_square(m, lambda, SamplerConfig{mix_seed(seed, static_cast<std::uint64_t>(index)),
                                                kStepsPerCell * n});
}

}  // namespace detail

// Two-symbol case: a balanced diagonal exists exactly when lambda is even or
// the square is not equivalent to make_A(lambda). Sweeps the whole universe,
// cross-checks the constructive route against exact search on every square,
// and compares the labeled count of A-equivalents against a brute-force
// group-orbit count.
inline VerificationReport check_theorem_m2(int lambda) {
  if (lambda < 1) throw Error(ErrorCode::DimensionMismatch, "lambda must be positive");
  if (2 * lambda > 6) throw Error(ErrorCode::TooLarge, "exhaustive two-symbol sweep limited to lambda <= 3");
  detail::Stopwatch sw;
  VerificationReport rep;
  rep.target = "m2";
  rep.parameters = {{"lambda", lambda}};
  rep.mode = ReportMode::Exhaustive;
  const FrequencySquare a = make_A(lambda);
  long long a_equivalent = 0, without_diagonal = 0;
  enumerate_squares(2, lambda, [&](const FrequencySquare& sq) {
    ++rep.total_checked;
    const bool found = find_exact(sq).status == SearchStatus::Found;
    const bool equiv_a = is_equivalent_to_A(sq).has_value();
    if (equiv_a) ++a_equivalent;
    if (!found) ++without_diagonal;
    const bool expected = lambda % 2 == 0 || !equiv_a;
    if (found != expected)
      add_violation(rep, sq,
                    std::string("exact search ") + (found ? "found" : "proved absent") +
                        " but the equivalence criterion predicts the opposite",
                    [&](const FrequencySquare& back) {
                      return (find_exact(back).status == SearchStatus::Found) != expected;
                    });
    M2Result con = constructive_m2(sq);
    if (con.witness.has_value() != expected)
      add_violation(rep, sq, "constructive route disagrees with the equivalence criterion",
                    [&](const FrequencySquare& back) {
                      return constructive_m2(back).witness.has_value() != expected;
                    });
    if (con.witness && !is_balanced(sq, *con.witness))
      add_violation(rep, sq, "constructive witness is not balanced", [&](const FrequencySquare& back) {
        M2Result again = constructive_m2(back);
        return again.witness && !is_balanced(back, *again.witness);
      });
    if (con.certificate.has_value() != equiv_a)
      add_violation(rep, sq, "constructive certificate disagrees with the equivalence search",
                    [&](const FrequencySquare& back) {
                      return constructive_m2(back).certificate.has_value() != equiv_a;
                    });
    if (con.certificate && !(apply_transform(sq, con.certificate->transform) == a))
      add_violation(rep, sq, "constructive certificate does not map the square onto the exceptional one",
                    [&](const FrequencySquare& back) {
                      M2Result again = constructive_m2(back);
                      return again.certificate && !(apply_transform(back, again.certificate->transform) == a);
                    });
    return true;
  });
  const long long orbit = orbit_size(a);
  rep.tallies["a_equivalent_labeled"] = a_equivalent;
  rep.tallies["a_orbit_brute_force"] = orbit;
  rep.tallies["without_balanced_diagonal"] = without_diagonal;
  if (a_equivalent != orbit)
    add_violation(rep, "labeled A-equivalent count " + std::to_string(a_equivalent) +
                           " does not match brute-force orbit size " + std::to_string(orbit));
  rep.elapsed_ms = sw.ms();
  return rep;
}

// Three-symbol case: every F(3*lambda; lambda^3) has a balanced diagonal.
// lambda <= 2 runs exhaustively (falling back to sampling if the node budget
// runs out); lambda = 3 samples `sample_size` seeded random squares.
inline VerificationReport check_theorem_m3(int lambda, long long sample_size, std::uint64_t seed,
                                           std::optional<long long> enum_budget = kM3EnumNodeBudget) {
  if (lambda < 1) throw Error(ErrorCode::DimensionMismatch, "lambda must be positive");
  if (lambda > 3) throw Error(ErrorCode::TooLarge, "three-symbol sweep limited to lambda <= 3");
  detail::Stopwatch sw;
  VerificationReport rep;
  rep.target = "m3";
  rep.parameters = {{"lambda", lambda}, {"sample_size", sample_size}};
  rep.seed = seed;
  auto check_one = [&](const FrequencySquare& sq) {
    ++rep.total_checked;
    if (find_balanced(sq).status != SearchStatus::Found)
      add_violation(rep, sq, "no balanced diagonal", [](const FrequencySquare& back) {
        return find_exact(back).status == SearchStatus::ProvedAbsent;
      });
    return true;
  };
  bool sampled = lambda > 2;
  if (!sampled) {
    try {
      rep.mode = ReportMode::Exhaustive;
      enumerate_squares(3, lambda, check_one, enum_budget);
    } catch (const Error& e) {
      if (e.code != ErrorCode::BudgetExhausted) throw;
      rep.items.push_back("enumeration node budget exhausted; fell back to sampling");
      rep.violations.clear();
      rep.total_checked = 0;
      sampled = true;
    }
  }
  if (sampled) {
    rep.mode = ReportMode::Sampled;
    for (long long i = 0; i < sample_size; ++i) check_one(detail::sample_square(3, lambda, seed, i));
  }
  rep.elapsed_ms = sw.ms();
  return rep;
}

// Blown-up cyclic tables: blow_up(make_B(n), lambda) has a balanced diagonal
// iff (n-1)*lambda is even. Each in-guard pair also gets the cell invariant
// checked everywhere and the diagonal-sum residue checked on 1000 random
// diagonals. Pairs beyond the side-12 guard are skipped with a note.
inline VerificationReport check_B_theorem(int n_max, int lambda_max) {
  if (n_max < 1 || lambda_max < 1) throw Error(ErrorCode::DimensionMismatch, "bounds must be positive");
  detail::Stopwatch sw;
  VerificationReport rep;
  rep.target = "bgrid";
  rep.parameters = {{"n_max", n_max}, {"lambda_max", lambda_max}};
  rep.mode = ReportMode::Exhaustive;
  rep.seed = kDefaultSeed;
  long long skipped = 0;
  for (int n = 1; n <= n_max; ++n)
    for (int lam = 1; lam <= lambda_max; ++lam) {
      if (n * lam > 12) {
        rep.items.push_back("n=" + std::to_string(n) + " lambda=" + std::to_string(lam) +
                            ": skipped, side exceeds exact-search guard 12");
        ++skipped;
        continue;
      }
      const int side = n * lam;
      const FrequencySquare L = blow_up(make_B(n), lam);
      const bool exists = find_balanced(L).status == SearchStatus::Found;
      const bool expected = (n - 1) * lam % 2 == 0;
      rep.items.push_back("n=" + std::to_string(n) + " lambda=" + std::to_string(lam) + ": " +
                          (exists ? "found" : "absent") + ", (n-1)*lambda " + (expected ? "even" : "odd"));
      if (exists != expected)
        add_violation(rep, L,
                      "existence does not match the parity of (n-1)*lambda for n=" + std::to_string(n) +
                          " lambda=" + std::to_string(lam),
                      [&](const FrequencySquare& back) {
                        return (find_exact(back).status == SearchStatus::Found) != expected;
                      });
      long long bad_cells = 0;
      for (int r = 1; r <= side; ++r)
        for (int c = 1; c <= side; ++c)
          if (delta_value(n, lam, r, c, L.at(r - 1, c - 1)).value % n != 0) ++bad_cells;
      if (bad_cells > 0)
        add_violation(rep, L, std::to_string(bad_cells) + " cells violate the block-index invariant",
                      [&](const FrequencySquare& back) {
                        for (int r = 1; r <= side; ++r)
                          for (int c = 1; c <= side; ++c)
                            if (delta_value(n, lam, r, c, back.at(r - 1, c - 1)).value % n != 0) return true;
                        return false;
                      });
      std::mt19937_64 rng(detail::mix_seed(rep.seed, static_cast<std::uint64_t>(n) * 64 + lam));
      long long bad_residues = 0;
      for (int t = 0; t < 1000; ++t)
        if (delta_diagonal_sum(n, lam, random_diagonal(side, rng)).residue != 0) ++bad_residues;
      if (bad_residues > 0)
        add_violation(rep, L,
                      std::to_string(bad_residues) + " random diagonals have nonzero invariant-sum residue",
                      [&, n, lam](const FrequencySquare&) {
                        std::mt19937_64 again(detail::mix_seed(rep.seed, static_cast<std::uint64_t>(n) * 64 + lam));
                        for (int t = 0; t < 1000; ++t)
                          if (delta_diagonal_sum(n, lam, random_diagonal(n * lam, again)).residue != 0) return true;
                        return false;
                      });
      ++rep.total_checked;
    }
  if (rep.total_checked == 0) throw Error(ErrorCode::TooLarge, "no (n, lambda) pair within the side-12 guard");
  rep.tallies["pairs_checked"] = rep.total_checked;
  rep.tallies["pairs_skipped"] = skipped;
  rep.elapsed_ms = sw.ms();
  return rep;
}

// The even-parity conjecture: every F(m*lambda; lambda^m) with (m-1)*lambda
// even has a balanced diagonal. Exhaustive when the universe is enumerable
// (side <= 6), sampled otherwise. A ProvedAbsent square is recorded with its
// grid and canonical key; this check reports, it does not assert.
inline VerificationReport check_conjecture(int m, int lambda, long long sample_size, std::uint64_t seed) {
  if (m < 1 || lambda < 1) throw Error(ErrorCode::DimensionMismatch, "m and lambda must be positive");
  if ((m - 1) * lambda % 2 != 0)
    throw Error(ErrorCode::ParityPreconditionFailed,
                "the claim assumes (m-1)*lambda even; got m=" + std::to_string(m) + " lambda=" + std::to_string(lambda));
  if (m * lambda > 12) throw Error(ErrorCode::TooLarge, "exact search guarded to side 12");
  detail::Stopwatch sw;
  VerificationReport rep;
  rep.target = "conjecture";
  rep.parameters = {{"m", m}, {"lambda", lambda}, {"sample_size", sample_size}};
  rep.seed = seed;
  auto check_one = [&](const FrequencySquare& sq) {
    ++rep.total_checked;
    if (find_exact(sq).status == SearchStatus::ProvedAbsent)
      add_violation(rep, sq, "balanced diagonal proved absent", [](const FrequencySquare& back) {
        return find_exact(back).status == SearchStatus::ProvedAbsent;
      });
    return true;
  };
  if (m * lambda <= 6) {
    rep.mode = ReportMode::Exhaustive;
    enumerate_squares(m, lambda, check_one);
  } else {
    rep.mode = ReportMode::Sampled;
    for (long long i = 0; i < sample_size; ++i) check_one(detail::sample_square(m, lambda, seed, i));
  }
  rep.elapsed_ms = sw.ms();
  return rep;
}

// Largest k*k subarray avoiding some symbol of a three-symbol square, by
// enumerating row subsets and counting columns that dodge the symbol on all
// chosen rows; the maximum must stay <= floor(3*lambda/2).
inline VerificationReport check_subarray_bound(const FrequencySquare& sq) {
  if (sq.m() != 3) throw Error(ErrorCode::WrongSymbolCount, "defined for three-symbol squares");
  if (sq.lambda() > 2) throw Error(ErrorCode::TooLarge, "row-subset enumeration limited to lambda <= 2");
  detail::Stopwatch sw;
  VerificationReport rep;
  rep.target = "subarray-bound";
  rep.parameters = {{"m", sq.m()}, {"lambda", sq.lambda()}};
  rep.mode = ReportMode::Exhaustive;
  const int n = sq.n();
  const int bound = 3 * sq.lambda() / 2;
  auto max_avoiding = [n](const FrequencySquare& g) {
    int best = 0;
    for (int s = 1; s <= 3; ++s) {
      std::vector<std::uint32_t> colmask(n, 0);
      for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r)
          if (g.at(r, c) == s) colmask[c] |= 1u << r;
      for (std::uint32_t rows = 1; rows < (1u << n); ++rows) {
        int avoid = 0;
        for (int c = 0; c < n; ++c)
          if ((colmask[c] & rows) == 0) ++avoid;
        best = std::max(best, std::min(std::popcount(rows), avoid));
      }
    }
    return best;
  };
  const int best = max_avoiding(sq);
  rep.total_checked = 3LL * ((1LL << n) - 1);
  rep.tallies["max_avoiding_subarray"] = best;
  rep.tallies["bound"] = bound;
  if (best > bound)
    add_violation(rep, sq,
                  "a " + std::to_string(best) + "x" + std::to_string(best) +
                      " subarray avoids a symbol, above the bound " + std::to_string(bound),
                  [&](const FrequencySquare& back) { return max_avoiding(back) > bound; });
  rep.elapsed_ms = sw.ms();
  return rep;
}

}  // namespace fsq
