#pragma once

// JSON forms of search outcomes analogous to io.hpp's square/diagonal
// serializers, plus report rendering for the command line. elapsed_ms is
// deliberately absent from all serialized forms: identical invocations must
// produce byte-identical output, so timing goes to diagnostics instead.

#include <string>

#include "fsq/io.hpp"
#include "fsq/plex.hpp"
#include "fsq/search.hpp"
#include "fsq/verify.hpp"

namespace fsq {

inline const char* status_name(SearchStatus s) {
  switch (s) {
    case SearchStatus::Found: return "FOUND";
    case SearchStatus::ProvedAbsent: return "ABSENT";
    default: return "UNKNOWN";
  }
}

inline const char* mode_name(ReportMode m) { return m == ReportMode::Exhaustive ? "exhaustive" : "sampled"; }

inline nlohmann::json outcome_to_json(const SearchOutcome& out) {
  nlohmann::json j;
  j["status"] = status_name(out.status);
  if (out.witness) j["sigma"] = diagonal_to_json(*out.witness)["sigma"];
  j["nodes"] = out.stats.nodes;
  j["restarts"] = out.stats.restarts;
  return j;
}

inline nlohmann::json plex_to_json(const PlexSelection& p) {
  nlohmann::json cells = nlohmann::json::array();
  for (auto [r, c] : p.cells) cells.push_back({r + 1, c + 1});
  return {{"n", p.n}, {"k", p.k}, {"cells", cells}};
}

inline nlohmann::json report_to_json(const VerificationReport& rep) {
  nlohmann::json j;
  j["target"] = rep.target;
  nlohmann::json params;
  for (const auto& [k, v] : rep.parameters) params[k] = v;
  j["parameters"] = params;
  j["mode"] = mode_name(rep.mode);
  j["total_checked"] = rep.total_checked;
  j["seed"] = rep.seed;
  nlohmann::json viols = nlohmann::json::array();
  for (const auto& v : rep.violations) {
    nlohmann::json one;
    one["description"] = v.description;
    if (!v.square_text.empty()) one["square"] = v.square_text;
    if (!v.canonical_hex.empty()) one["canonical_key"] = v.canonical_hex;
    viols.push_back(one);
  }
  j["violations"] = viols;
  j["tallies"] = rep.tallies;
  j["items"] = rep.items;
  return j;
}

inline std::string report_to_table(const VerificationReport& rep) {
  std::string out;
  out += "target: " + rep.target;
  for (const auto& [k, v] : rep.parameters) out += " " + k + "=" + std::to_string(v);
  out += "\nmode: ";
  out += mode_name(rep.mode);
  if (rep.mode == ReportMode::Sampled) out += " (seed " + std::to_string(rep.seed) + ")";
  out += "\nchecked: " + std::to_string(rep.total_checked) + "\n";
  for (const auto& line : rep.items) out += "  " + line + "\n";
  for (const auto& [k, v] : rep.tallies) out += "  " + k + ": " + std::to_string(v) + "\n";
  if (rep.violations.empty()) {
    out += "violations: none\n";
  } else {
    out += "violations: " + std::to_string(rep.violations.size()) + "\n";
    for (const auto& v : rep.violations) {
      out += "  ! " + v.description + "\n";
      if (!v.square_text.empty()) {
        std::istringstream in(v.square_text);
        std::string line;
        while (std::getline(in, line)) out += "    " + line + "\n";
      }
      if (!v.canonical_hex.empty()) out += "    canonical: " + v.canonical_hex + "\n";
    }
  }
  return out;
}

}  // namespace fsq
