#pragma once

// Named square families and derived squares.
//
//   make_A(lambda)   the 2lambda x 2lambda two-symbol square whose symbol-1
//                    cells form the top-left and bottom-right lambda-blocks;
//                    it has a balanced diagonal iff lambda is even.
//   make_B(n)        the cyclic addition table: entry ((i+j-1) mod n) + 1.
//   blow_up(L, t)    each cell replaced by a t x t constant block.
//   merge_symbols    entry e -> ceil(e/alpha), fusing symbols in runs of alpha.
//
// Plus the block-index invariant of blown-up cyclic tables, the plex-window
// construction of balanced diagonals, and the seeded intercalate-swap sampler.

#include <cstdint>
#include <random>

#include "fsq/core.hpp"
#include "fsq/plex.hpp"

namespace fsq {

inline FrequencySquare make_A(int lambda) {
  if (lambda < 1) throw Error(ErrorCode::DimensionMismatch, "lambda must be positive");
  const int n = 2 * lambda;
  if (n > kMaxSide) throw Error(ErrorCode::TooLarge, "side exceeds supported maximum 64");
  std::vector<std::uint8_t> cells(static_cast<std::size_t>(n) * n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      cells[static_cast<std::size_t>(r) * n + c] = ((r < lambda) == (c < lambda)) ? 1 : 2;
  return FrequencySquare::validate_cells(2, lambda, std::move(cells));
}

inline FrequencySquare make_B(int n) {
  if (n < 1) throw Error(ErrorCode::DimensionMismatch, "n must be positive");
  if (n > kMaxSide) throw Error(ErrorCode::TooLarge, "side exceeds supported maximum 64");
  std::vector<std::uint8_t> cells(static_cast<std::size_t>(n) * n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      cells[static_cast<std::size_t>(r) * n + c] = static_cast<std::uint8_t>((r + c + 1) % n + 1);
  return FrequencySquare::validate_cells(n, 1, std::move(cells));
}

// Replaces every cell by a t x t constant block. F(m*mu; mu^m) in gives
// F(m*mu*t; (mu*t)^m) out.
inline FrequencySquare blow_up(const FrequencySquare& L, int t) {
  if (t < 1) throw Error(ErrorCode::DimensionMismatch, "blow-up factor must be positive");
  const int n = L.n() * t;
  if (n > kMaxSide) throw Error(ErrorCode::TooLarge, "side exceeds supported maximum 64");
  std::vector<std::uint8_t> cells(static_cast<std::size_t>(n) * n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) cells[static_cast<std::size_t>(r) * n + c] = static_cast<std::uint8_t>(L.at(r / t, c / t));
  return FrequencySquare::validate_cells(L.m(), L.lambda() * t, std::move(cells));
}

// Fuses symbols in runs of alpha: entry e becomes ceil(e/alpha). Requires
// alpha | m. Any balanced diagonal stays balanced on the same cells.
inline FrequencySquare merge_symbols(const FrequencySquare& L, int alpha) {
  if (alpha < 1 || L.m() % alpha != 0)
    throw Error(ErrorCode::NotADivisor, "alpha must divide the symbol count m");
  std::vector<std::uint8_t> cells(L.cells());
  for (auto& v : cells) v = static_cast<std::uint8_t>((v + alpha - 1) / alpha);
  return FrequencySquare::validate_cells(L.m() / alpha, L.lambda() * alpha, std::move(cells));
}

// Block-index invariant of the blown-up cyclic table: for every cell (r, c)
// of blow_up(make_B(n), lambda) with entry e, ceil(r/lambda) + ceil(c/lambda)
// - e is divisible by n. Arguments are 1-based; e must be the true entry.
struct DeltaValue {
  long long value;
  int modulus;
};

inline DeltaValue delta_value(int n, int lambda, int r, int c, int e) {
  if (n < 1 || lambda < 1 || static_cast<long long>(n) * lambda > kMaxSide)
    throw Error(ErrorCode::TooLarge, "n*lambda exceeds supported maximum 64");
  const int side = n * lambda;
  if (r < 1 || r > side || c < 1 || c > side)
    throw Error(ErrorCode::DimensionMismatch, "cell outside the square");
  const int br = (r + lambda - 1) / lambda, bc = (c + lambda - 1) / lambda;
  const int truth = (br + bc - 1) % n + 1;
  if (e != truth)
    throw Error(ErrorCode::EntryMismatch, "entry " + std::to_string(e) + " at (" + std::to_string(r) + "," +
                                              std::to_string(c) + ") should be " + std::to_string(truth));
  return {static_cast<long long>(br) + bc - e, n};
}

// Sum of the invariant over a diagonal of blow_up(make_B(n), lambda).
// residue is always 0. For a balanced diagonal the raw sum has the closed
// form lambda*n*(n+1)/2, whose mod-n residue equals lambda*C(n,2) mod n; when
// n is even and lambda odd that residue is n/2 != 0, which is why no balanced
// diagonal exists in that case.
struct DeltaSumReport {
  long long raw_sum;
  int residue;
  long long balanced_raw_sum;
  int balanced_residue;
};

inline DeltaSumReport delta_diagonal_sum(int n, int lambda, const Diagonal& d) {
  const int side = n * lambda;
  if (d.size() != side) throw Error(ErrorCode::LengthMismatch, "diagonal length must be n*lambda");
  long long raw = 0;
  for (int r0 = 0; r0 < side; ++r0) {
    const int r = r0 + 1, c = d.col(r0) + 1;
    const int br = (r + lambda - 1) / lambda, bc = (c + lambda - 1) / lambda;
    const int e = (br + bc - 1) % n + 1;
    raw += delta_value(n, lambda, r, c, e).value;
  }
  const long long balanced = static_cast<long long>(lambda) * n * (n + 1) / 2;
  const long long choose2 = static_cast<long long>(lambda) * n * (n - 1) / 2;
  return {raw, static_cast<int>(raw % n), balanced, static_cast<int>(choose2 % n)};
}

// The main diagonal plus the wrapped superdiagonal of make_B(n); a 2-plex for
// even n.
inline PlexSelection two_plex_of_B(int n) {
  if (n < 2 || n % 2 != 0) throw Error(ErrorCode::OddOrder, "defined for even n >= 2");
  if (n > kMaxSide) throw Error(ErrorCode::TooLarge, "side exceeds supported maximum 64");
  PlexSelection p{n, 2, {}};
  for (int r = 0; r < n; ++r) {
    p.cells.emplace_back(r, r);
    p.cells.emplace_back(r, (r + 1) % n);
  }
  std::sort(p.cells.begin(), p.cells.end());
  return p;
}

// Lifts a k-plex K of a Latin square L (order m) to a balanced diagonal of
// blow_up(L, lambda) for any lambda divisible by k: split K into diagonals
// D_1..D_k, and for a cell (r, c) of D_i pick the block cells
// (lambda*r + j, lambda*c + j) for j in the i-th window of width lambda/k.
// The windows partition 0..lambda-1, so every blown-up row and column is hit
// once, and each symbol collects k * lambda/k = lambda cells.
inline Diagonal plex_to_balanced_diagonal(const FrequencySquare& L, const PlexSelection& K, int lambda) {
  if (!L.latin()) throw Error(ErrorCode::NotAPlex, "plex lifting needs a Latin square");
  if (!is_k_plex(L, K)) throw Error(ErrorCode::NotAPlex, "selection is not a k-plex of the square");
  if (lambda < 1 || lambda % K.k != 0)
    throw Error(ErrorCode::DivisibilityViolation, "k must divide lambda");
  const int alpha = lambda / K.k;
  const int side = L.n() * lambda;
  if (side > kMaxSide) throw Error(ErrorCode::TooLarge, "side exceeds supported maximum 64");
  auto parts = decompose_plex(K);
  std::vector<int> sigma(side, -1);
  for (int i = 0; i < K.k; ++i)
    for (int r = 0; r < L.n(); ++r) {
      const int c = parts[i].col(r);
      for (int j = i * alpha; j < (i + 1) * alpha; ++j) sigma[lambda * r + j] = lambda * c + j;
    }
  return Diagonal(std::move(sigma));
}

struct SamplerConfig {
  std::uint64_t seed = 0;
  long long steps = 0;
};

namespace detail {

// Bounded draw by modulo: bias is irrelevant here and the result does not
// depend on the standard library's distribution implementation.
inline int rng_below(std::mt19937_64& rng, int bound) { return static_cast<int>(rng() % bound); }

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

// Random F(m*lambda; lambda^m): starts from blow_up(make_B(m), lambda) and
// applies `steps` random intercalate swaps (a 2x2 subarray a,b / b,a has its
// symbols exchanged), each of which preserves all frequency conditions.
// Deterministic for a given config.
inline FrequencySquare random_square(int m, int lambda, const SamplerConfig& cfg) {
  FrequencySquare start = blow_up(make_B(m), lambda);
  const int n = start.n();
  std::vector<std::uint8_t> g(start.cells());
  std::mt19937_64 rng(cfg.seed);
  auto at = [&](int r, int c) -> std::uint8_t& { return g[static_cast<std::size_t>(r) * n + c]; };
  constexpr int kAttemptsPerStep = 1000;
  for (long long step = 0; step < cfg.steps; ++step) {
    for (int attempt = 0; attempt < kAttemptsPerStep; ++attempt) {
      const int r1 = detail::rng_below(rng, n), r2 = detail::rng_below(rng, n);
      const int c1 = detail::rng_below(rng, n), c2 = detail::rng_below(rng, n);
      if (r1 == r2 || c1 == c2) continue;
      const std::uint8_t a = at(r1, c1), b = at(r1, c2);
      if (a == b || at(r2, c1) != b || at(r2, c2) != a) continue;
      at(r1, c1) = b;
      at(r1, c2) = a;
      at(r2, c1) = a;
      at(r2, c2) = b;
      break;
    }
  }
  return FrequencySquare::validate_cells(m, lambda, std::move(g));
}

inline Diagonal random_diagonal(int n, std::mt19937_64& rng) {
  std::vector<int> sigma = perm::identity(n);
  for (int i = n - 1; i > 0; --i) std::swap(sigma[i], sigma[detail::rng_below(rng, i + 1)]);
  return Diagonal(std::move(sigma));
}

}  // namespace fsq
