#pragma once

// Serialization for the core types.
//
// Plain-text square format: a header line "n m lambda" followed by n lines of
// n space-separated symbols. Diagonals are written as the 1-based column
// sequence sigma on one line. The structured format is JSON; permutations are
// 1-based there as well.

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "fsq/core.hpp"
#include "json.hpp"

namespace fsq {

inline std::string to_text(const FrequencySquare& sq) {
  std::ostringstream out;
  out << sq.n() << ' ' << sq.m() << ' ' << sq.lambda() << '\n';
  for (int r = 0; r < sq.n(); ++r) {
    for (int c = 0; c < sq.n(); ++c) {
      if (c) out << ' ';
      out << sq.at(r, c);
    }
    out << '\n';
  }
  return out.str();
}

inline FrequencySquare parse_text(std::istream& in) {
  in >> std::ws;
  while (in.peek() == '#') {  // leading comment lines, e.g. "# seed N"
    std::string line;
    std::getline(in, line);
    in >> std::ws;
  }
  long long n, m, lambda;
  if (!(in >> n >> m >> lambda)) throw Error(ErrorCode::ParseError, "missing or malformed header line");
  if (n < 1 || m < 1 || lambda < 1 || n > kMaxSide || m * lambda != n)
    throw Error(ErrorCode::ParseError, "header must satisfy n = m*lambda with 1 <= n <= 64");
  Grid grid(n, std::vector<int>(n));
  for (auto& row : grid)
    for (int& v : row)
      if (!(in >> v)) throw Error(ErrorCode::ParseError, "truncated or malformed grid body");
  return FrequencySquare::validate(grid, static_cast<int>(m), static_cast<int>(lambda));
}

inline FrequencySquare parse_text(const std::string& s) {
  std::istringstream in(s);
  return parse_text(in);
}

inline std::string to_text(const Diagonal& d) {
  std::ostringstream out;
  auto sigma = d.to_one_based();
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (i) out << ' ';
    out << sigma[i];
  }
  out << '\n';
  return out.str();
}

inline Diagonal parse_diagonal_text(const std::string& s, int n) {
  std::istringstream in(s);
  std::vector<int> sigma(n);
  for (int& v : sigma)
    if (!(in >> v)) throw Error(ErrorCode::ParseError, "diagonal needs " + std::to_string(n) + " entries");
  return Diagonal::from_one_based(sigma);
}

inline nlohmann::json square_to_json(const FrequencySquare& sq) {
  return {{"n", sq.n()}, {"m", sq.m()}, {"lambda", sq.lambda()}, {"grid", sq.grid()}};
}

inline FrequencySquare square_from_json(const nlohmann::json& j) {
  try {
    return FrequencySquare::validate(j.at("grid").get<Grid>(), j.at("m").get<int>(), j.at("lambda").get<int>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("bad square document: ") + e.what());
  }
}

inline nlohmann::json diagonal_to_json(const Diagonal& d) { return {{"sigma", d.to_one_based()}}; }

inline Diagonal diagonal_from_json(const nlohmann::json& j) {
  try {
    return Diagonal::from_one_based(j.at("sigma").get<std::vector<int>>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("bad diagonal document: ") + e.what());
  }
}

inline nlohmann::json transform_to_json(const Transform& t) {
  auto up = [](const std::vector<int>& p) {
    std::vector<int> q(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) q[i] = p[i] + 1;
    return q;
  };
  return {{"transposed", t.transposed},
          {"row_perm", up(t.row_perm)},
          {"col_perm", up(t.col_perm)},
          {"symbol_perm", up(t.symbol_perm)}};
}

inline Transform transform_from_json(const nlohmann::json& j) {
  auto down = [](std::vector<int> p) {
    for (int& v : p) --v;
    return p;
  };
  try {
    Transform t;
    t.transposed = j.at("transposed").get<bool>();
    t.row_perm = down(j.at("row_perm").get<std::vector<int>>());
    t.col_perm = down(j.at("col_perm").get<std::vector<int>>());
    t.symbol_perm = down(j.at("symbol_perm").get<std::vector<int>>());
    if (!perm::valid(t.row_perm) || !perm::valid(t.col_perm) || !perm::valid(t.symbol_perm))
      throw Error(ErrorCode::NotAPermutation, "transform components must be permutations");
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("bad transform document: ") + e.what());
  }
}

inline nlohmann::json certificate_to_json(const EquivalenceCertificate& c) {
  return {{"transform", transform_to_json(c.transform)}};
}

inline EquivalenceCertificate certificate_from_json(const nlohmann::json& j) {
  try {
    return {transform_from_json(j.at("transform"))};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("bad certificate document: ") + e.what());
  }
}

}  // namespace fsq
