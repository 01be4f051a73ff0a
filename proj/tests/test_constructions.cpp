#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "fsq/fsq.hpp"
#include "support/oracles.hpp"

using fsq::Diagonal;
using fsq::ErrorCode;
using fsq::FrequencySquare;
using fsq::Grid;
using fsq::PlexSelection;
using fsq::Transform;

TEST_CASE("make_A builds the two-block square") {
  CHECK(fsq::make_A(1).grid() == Grid{{1, 2}, {2, 1}});
  CHECK(fsq::make_A(3).grid() == Grid{{1, 1, 1, 2, 2, 2},
                                      {1, 1, 1, 2, 2, 2},
                                      {1, 1, 1, 2, 2, 2},
                                      {2, 2, 2, 1, 1, 1},
                                      {2, 2, 2, 1, 1, 1},
                                      {2, 2, 2, 1, 1, 1}});
  auto a4 = fsq::make_A(4);
  CHECK(a4.n() == 8);
  CHECK(a4.m() == 2);
  CHECK(a4.lambda() == 4);
  CHECK(oracle::error_code_of([] { fsq::make_A(0); }) == ErrorCode::DimensionMismatch);
  CHECK(oracle::error_code_of([] { fsq::make_A(33); }) == ErrorCode::TooLarge);
}

TEST_CASE("make_B builds the cyclic addition table") {
  CHECK(fsq::make_B(1).grid() == Grid{{1}});
  CHECK(fsq::make_B(2).grid() == Grid{{2, 1}, {1, 2}});
  CHECK(fsq::make_B(3).grid() == Grid{{2, 3, 1}, {3, 1, 2}, {1, 2, 3}});
  auto b4 = fsq::make_B(4);
  CHECK(b4.latin());
  CHECK(b4.grid()[0] == std::vector<int>{2, 3, 4, 1});
  CHECK(oracle::error_code_of([] { fsq::make_B(0); }) == ErrorCode::DimensionMismatch);
  CHECK(oracle::error_code_of([] { fsq::make_B(65); }) == ErrorCode::TooLarge);
}

TEST_CASE("blow_up replaces cells by constant blocks") {
  auto b2 = fsq::make_B(2);
  CHECK(fsq::blow_up(b2, 1) == b2);
  CHECK(fsq::blow_up(b2, 2).grid() ==
        Grid{{2, 2, 1, 1}, {2, 2, 1, 1}, {1, 1, 2, 2}, {1, 1, 2, 2}});
  auto big = fsq::blow_up(fsq::make_B(3), 3);
  CHECK(big.n() == 9);
  CHECK(big.m() == 3);
  CHECK(big.lambda() == 3);
  for (int r = 0; r < 9; ++r)
    for (int c = 0; c < 9; ++c) CHECK(big.at(r, c) == fsq::make_B(3).at(r / 3, c / 3));
  CHECK(oracle::error_code_of([] { fsq::blow_up(fsq::make_B(2), 0); }) == ErrorCode::DimensionMismatch);
  CHECK(oracle::error_code_of([] { fsq::blow_up(fsq::make_B(2), 33); }) == ErrorCode::TooLarge);
}

TEST_CASE("blowing up the order-2 table gives the two-block square after a symbol swap") {
  for (int lambda = 1; lambda <= 4; ++lambda) {
    auto blown = fsq::blow_up(fsq::make_B(2), lambda);
    Transform swap = Transform::identity(blown.n(), 2);
    swap.symbol_perm = {1, 0};
    CHECK(fsq::apply_transform(blown, swap) == fsq::make_A(lambda));
  }
}

TEST_CASE("merge_symbols fuses symbol runs") {
  auto latin2 = FrequencySquare::validate({{1, 2}, {2, 1}}, 2, 1);
  auto merged = fsq::merge_symbols(latin2, 2);
  CHECK(merged.grid() == Grid{{1, 1}, {1, 1}});
  CHECK(merged.m() == 1);
  CHECK(merged.lambda() == 2);
  auto half_b4 = fsq::merge_symbols(fsq::make_B(4), 2);
  CHECK(half_b4.grid() == Grid{{1, 2, 2, 1}, {2, 2, 1, 1}, {2, 1, 1, 2}, {1, 1, 2, 2}});
  CHECK(fsq::merge_symbols(fsq::make_B(4), 1) == fsq::make_B(4));
  CHECK(oracle::error_code_of([] { fsq::merge_symbols(fsq::make_B(4), 3); }) == ErrorCode::NotADivisor);
  CHECK(oracle::error_code_of([] { fsq::merge_symbols(fsq::make_B(4), 0); }) == ErrorCode::NotADivisor);
}

TEST_CASE("merging symbols transports transversals to balanced diagonals") {
  std::mt19937_64 rng(fsq::kDefaultSeed + 7);
  int found = 0;
  for (int trial = 0; trial < 900 && found < 500; ++trial) {
    auto L = fsq::random_square(6, 1, {rng(), 300});
    auto t = fsq::find_k_plex(L, 1);
    if (!t) continue;
    ++found;
    Diagonal d = fsq::decompose_plex(*t)[0];
    REQUIRE(fsq::is_balanced(L, d));
    for (int alpha : {2, 3}) CHECK(fsq::is_balanced(fsq::merge_symbols(L, alpha), d));
  }
  CHECK(found == 500);
}

TEST_CASE("delta_value matches the block-index arithmetic") {
  auto d1 = fsq::delta_value(2, 1, 1, 2, 1);
  CHECK(d1.value == 2);
  CHECK(d1.modulus == 2);
  CHECK(fsq::delta_value(4, 1, 2, 3, 1).value == 4);
  CHECK(fsq::delta_value(2, 3, 4, 2, 1).value == 2);
  CHECK(oracle::error_code_of([] { fsq::delta_value(2, 1, 1, 2, 2); }) == ErrorCode::EntryMismatch);
  CHECK(oracle::error_code_of([] { fsq::delta_value(2, 1, 0, 2, 1); }) == ErrorCode::DimensionMismatch);
  CHECK(oracle::error_code_of([] { fsq::delta_value(2, 1, 1, 5, 1); }) == ErrorCode::DimensionMismatch);
  CHECK(oracle::error_code_of([] { fsq::delta_value(13, 5, 1, 1, 1); }) == ErrorCode::TooLarge);
}

TEST_CASE("delta_value is divisible by n on every cell of a blown-up table") {
  for (int n = 1; n <= 6; ++n)
    for (int lambda = 1; lambda <= 3; ++lambda) {
      auto sq = fsq::blow_up(fsq::make_B(n), lambda);
      for (int r = 1; r <= sq.n(); ++r)
        for (int c = 1; c <= sq.n(); ++c)
          CHECK(fsq::delta_value(n, lambda, r, c, sq.at(r - 1, c - 1)).value % n == 0);
    }
}

TEST_CASE("delta_diagonal_sum has residue zero, and its balanced closed form flags the odd case") {
  std::mt19937_64 rng(fsq::kDefaultSeed + 11);
  for (int n : {2, 3, 4})
    for (int lambda : {1, 2, 3}) {
      for (int trial = 0; trial < 50; ++trial) {
        auto rep = fsq::delta_diagonal_sum(n, lambda, fsq::random_diagonal(n * lambda, rng));
        CHECK(rep.residue == 0);
        CHECK(rep.raw_sum % n == 0);
      }
    }
  auto odd = fsq::delta_diagonal_sum(2, 3, Diagonal::identity(6));
  CHECK(odd.balanced_raw_sum == 9);
  CHECK(odd.balanced_residue == 1);
  CHECK(fsq::find_exact(fsq::blow_up(fsq::make_B(2), 3)).status == fsq::SearchStatus::ProvedAbsent);
  auto even = fsq::delta_diagonal_sum(3, 2, Diagonal::identity(6));
  CHECK(even.balanced_raw_sum == 12);
  CHECK(even.balanced_residue == 0);
  auto witnessed = fsq::find_exact(fsq::blow_up(fsq::make_B(3), 2));
  REQUIRE(witnessed.status == fsq::SearchStatus::Found);
  auto at_witness = fsq::delta_diagonal_sum(3, 2, *witnessed.witness);
  CHECK(at_witness.raw_sum == at_witness.balanced_raw_sum);
  CHECK(oracle::error_code_of([] { fsq::delta_diagonal_sum(3, 2, Diagonal::identity(5)); }) ==
        ErrorCode::LengthMismatch);
}

TEST_CASE("two_plex_of_B yields a 2-plex for even orders") {
  CHECK(fsq::two_plex_of_B(2).cells ==
        std::vector<std::pair<int, int>>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  for (int n : {2, 4, 6, 8}) {
    auto p = fsq::two_plex_of_B(n);
    CHECK(p.k == 2);
    CHECK(fsq::is_k_plex(fsq::make_B(n), p));
  }
  CHECK(oracle::error_code_of([] { fsq::two_plex_of_B(3); }) == ErrorCode::OddOrder);
  CHECK(oracle::error_code_of([] { fsq::two_plex_of_B(1); }) == ErrorCode::OddOrder);
  CHECK(oracle::error_code_of([] { fsq::two_plex_of_B(66); }) == ErrorCode::TooLarge);
}

TEST_CASE("plex_to_balanced_diagonal lifts the documented examples") {
  PlexSelection main_diag{3, 1, {{0, 0}, {1, 1}, {2, 2}}};
  REQUIRE(fsq::is_k_plex(fsq::make_B(3), main_diag));
  Diagonal lifted = fsq::plex_to_balanced_diagonal(fsq::make_B(3), main_diag, 2);
  CHECK(lifted.cols() == std::vector<int>{0, 1, 2, 3, 4, 5});
  CHECK(fsq::is_balanced(fsq::blow_up(fsq::make_B(3), 2), lifted));
  auto two = fsq::two_plex_of_B(4);
  Diagonal lifted2 = fsq::plex_to_balanced_diagonal(fsq::make_B(4), two, 2);
  CHECK(fsq::is_balanced(fsq::blow_up(fsq::make_B(4), 2), lifted2));
}

TEST_CASE("plex_to_balanced_diagonal rejects bad inputs") {
  PlexSelection not_plex{3, 1, {{0, 0}, {1, 1}, {2, 1}}};
  CHECK(oracle::error_code_of([&] { fsq::plex_to_balanced_diagonal(fsq::make_B(3), not_plex, 2); }) ==
        ErrorCode::NotAPlex);
  PlexSelection main_diag{3, 1, {{0, 0}, {1, 1}, {2, 2}}};
  CHECK(oracle::error_code_of([&] { fsq::plex_to_balanced_diagonal(fsq::make_A(2), main_diag, 2); }) ==
        ErrorCode::NotAPlex);
  auto two = fsq::two_plex_of_B(4);
  CHECK(oracle::error_code_of([&] { fsq::plex_to_balanced_diagonal(fsq::make_B(4), two, 3); }) ==
        ErrorCode::DivisibilityViolation);
  CHECK(oracle::error_code_of([&] { fsq::plex_to_balanced_diagonal(fsq::make_B(3), main_diag, 22); }) ==
        ErrorCode::TooLarge);
}

TEST_CASE("plex lifting stays balanced on random Latin squares") {
  std::mt19937_64 rng(fsq::kDefaultSeed + 13);
  int done = 0;
  for (int trial = 0; trial < 600 && done < 100; ++trial) {
    const int m = 2 + static_cast<int>(rng() % 4);
    const int lambda = 1 + static_cast<int>(rng() % 4);
    auto L = fsq::random_square(m, 1, {rng(), 50 * m});
    std::vector<int> ks;
    for (int k = 1; k <= m; ++k)
      if (lambda % k == 0) ks.push_back(k);
    std::shuffle(ks.begin(), ks.end(), rng);
    for (int k : ks) {
      auto plex = fsq::find_k_plex(L, k);
      if (!plex) continue;
      Diagonal d = fsq::plex_to_balanced_diagonal(L, *plex, lambda);
      CHECK(fsq::is_balanced(fsq::blow_up(L, lambda), d));
      ++done;
      break;
    }
  }
  CHECK(done == 100);
}

TEST_CASE("random_square is seeded, valid, and starts from the blown-up table") {
  CHECK(fsq::random_square(3, 2, {99, 0}) == fsq::blow_up(fsq::make_B(3), 2));
  auto a = fsq::random_square(3, 2, {fsq::kDefaultSeed, 120});
  auto b = fsq::random_square(3, 2, {fsq::kDefaultSeed, 120});
  CHECK(a == b);
  CHECK(a.m() == 3);
  CHECK(a.lambda() == 2);
  CHECK(oracle::frequencies_ok(a.grid(), 3, 2));
  auto moved = fsq::random_square(2, 1, {5, 1});
  CHECK(moved.grid() != fsq::make_B(2).grid());
  CHECK(moved.latin());
}
