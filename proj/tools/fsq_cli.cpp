// Command-line front end. Data goes to standard output (or --output),
// diagnostics such as timings to standard error, so identical invocations
// produce byte-identical payloads.
//
// Exit codes: 0 done (including ABSENT/UNKNOWN search results and verify runs
// whose claim held), 2 verify found violations, 3 a guard or budget was
// exceeded, 64 usage error, 66 unreadable or unparsable input file.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fsq/fsq.hpp"

namespace {

struct UsageFailure {
  std::string msg;
};

struct FileFailure {
  std::string msg;
};

long long num(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageFailure{std::string("invalid ") + what + ": " + s};
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);
  return parts;
}

struct Loaded {
  fsq::FrequencySquare sq;
  std::optional<std::uint64_t> seed;  // set when a sampler produced the square
};

// Constructor specs: A:<lambda>, B:<n>, B:<n>x<lambda>, rand:<m>:<lambda>[:<seed>[:<steps>]]
Loaded from_spec(const std::string& spec) {
  const auto parts = split(spec, ':');
  const std::string& kind = parts[0];
  if (kind == "A" && parts.size() == 2)
    return {fsq::make_A(static_cast<int>(num(parts[1], "lambda"))), std::nullopt};
  if (kind == "B" && parts.size() == 2) {
    const auto dims = split(parts[1], 'x');
    const int n = static_cast<int>(num(dims[0], "n"));
    if (dims.size() == 1) return {fsq::make_B(n), std::nullopt};
    if (dims.size() == 2)
      return {fsq::blow_up(fsq::make_B(n), static_cast<int>(num(dims[1], "lambda"))), std::nullopt};
  }
  if (kind == "rand" && parts.size() >= 3 && parts.size() <= 5) {
    const int m = static_cast<int>(num(parts[1], "m"));
    const int lambda = static_cast<int>(num(parts[2], "lambda"));
    fsq::SamplerConfig cfg;
    cfg.seed = parts.size() >= 4 ? static_cast<std::uint64_t>(num(parts[3], "seed")) : fsq::kDefaultSeed;
    cfg.steps = parts.size() == 5 ? num(parts[4], "steps") : fsq::kStepsPerCell * m * lambda;
    return {fsq::random_square(m, lambda, cfg), cfg.seed};
  }
  throw UsageFailure{"unrecognized constructor spec: " + spec};
}

Loaded load_any(const std::string& arg) {
  if (arg.find(':') != std::string::npos) return from_spec(arg);
  std::ifstream f(arg);
  if (!f) throw FileFailure{"cannot open " + arg};
  return {fsq::parse_text(f), std::nullopt};
}

std::string annotated_grid(const fsq::FrequencySquare& sq, const fsq::Diagonal& d) {
  const int w = static_cast<int>(std::to_string(sq.m()).size());
  std::string out;
  for (int r = 0; r < sq.n(); ++r) {
    for (int c = 0; c < sq.n(); ++c) {
      if (c) out += ' ';
      std::string v = std::to_string(sq.at(r, c));
      while (static_cast<int>(v.size()) < w) v.insert(v.begin(), ' ');
      const bool sel = d.col(r) == c;
      out += sel ? "[" + v + "]" : " " + v + " ";
    }
    out += '\n';
  }
  return out;
}

std::string transform_text(const fsq::Transform& t) {
  auto line = [](const char* name, const std::vector<int>& p) {
    std::string s(name);
    for (int v : p) s += " " + std::to_string(v + 1);
    return s + "\n";
  };
  std::string out = std::string("transposed: ") + (t.transposed ? "yes" : "no") + "\n";
  out += line("rows:", t.row_perm);
  out += line("cols:", t.col_perm);
  out += line("symbols:", t.symbol_perm);
  return out;
}

std::optional<long long> budget_or_env(const std::optional<long long>& flag) {
  if (flag) return flag;
  if (const char* e = std::getenv("FSQ_BUDGET")) return num(e, "FSQ_BUDGET");
  return std::nullopt;
}

struct Result {
  int code = 0;
  std::string payload;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"frequency square toolkit: construction, diagonal search, equivalence, verification"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string output_path;
  app.add_option("-o,--output", output_path, "write the payload to this file instead of stdout");
  std::string format = "grid";
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"grid", "structured"}));

  auto* gen = app.add_subcommand("gen", "print a constructed square");
  std::string gen_spec;
  gen->add_option("spec", gen_spec, "A:<l> | B:<n> | B:<n>x<l> | rand:<m>:<l>[:<seed>[:<steps>]]")->required();

  auto* find = app.add_subcommand("find", "search for a balanced diagonal");
  std::string find_input, find_algorithm = "auto";
  std::uint64_t find_seed = fsq::kDefaultSeed;
  int find_restarts = fsq::kDefaultRestarts;
  std::optional<long long> find_budget;
  find->add_option("input", find_input, "square file or constructor spec")->required();
  find->add_option("--algorithm", find_algorithm)->check(CLI::IsMember({"exact", "descent", "auto"}));
  find->add_option("--seed", find_seed, "seed for the descent stages");
  find->add_option("--restarts", find_restarts, "descent restart rounds");
  find->add_option("--budget", find_budget, "exact-search node budget (or env FSQ_BUDGET)");

  auto* plex = app.add_subcommand("plex", "search for a k-plex of a Latin square");
  std::string plex_input;
  int plex_k = 1;
  bool plex_decompose = false;
  std::optional<long long> plex_budget;
  plex->add_option("input", plex_input, "square file or constructor spec")->required();
  plex->add_option("--k", plex_k, "plex parameter")->required();
  plex->add_flag("--decompose", plex_decompose, "also split the plex into k diagonals");
  plex->add_option("--budget", plex_budget, "search node budget (or env FSQ_BUDGET)");

  auto* equiv = app.add_subcommand("equiv", "decide equivalence of two squares");
  std::string equiv_a, equiv_b;
  equiv->add_option("a", equiv_a)->required();
  equiv->add_option("b", equiv_b)->required();

  auto* verify = app.add_subcommand("verify", "check a claim over a universe of squares");
  verify->require_subcommand(1);
  auto* v_m2 = verify->add_subcommand("m2", "two-symbol squares: diagonal iff even lambda or not A-equivalent");
  int m2_lambda = 0;
  v_m2->add_option("--lambda", m2_lambda)->required();
  auto* v_m3 = verify->add_subcommand("m3", "three-symbol squares always have a balanced diagonal");
  int m3_lambda = 0;
  long long m3_samples = 10000;
  std::uint64_t m3_seed = fsq::kDefaultSeed;
  std::optional<long long> m3_budget;
  v_m3->add_option("--lambda", m3_lambda)->required();
  v_m3->add_option("--samples", m3_samples, "sample count for sampled mode");
  v_m3->add_option("--seed", m3_seed);
  v_m3->add_option("--budget", m3_budget, "enumeration node budget before sampling fallback");
  auto* v_b = verify->add_subcommand("bgrid", "blown-up cyclic tables: diagonal iff (n-1)*lambda even");
  int b_nmax = 0, b_lmax = 0;
  v_b->add_option("--nmax", b_nmax)->required();
  v_b->add_option("--lmax", b_lmax)->required();
  auto* v_conj = verify->add_subcommand("conjecture", "even (m-1)*lambda implies a balanced diagonal");
  int conj_m = 0, conj_lambda = 0;
  long long conj_samples = 1000;
  std::uint64_t conj_seed = fsq::kDefaultSeed;
  v_conj->add_option("--m", conj_m)->required();
  v_conj->add_option("--lambda", conj_lambda)->required();
  v_conj->add_option("--samples", conj_samples, "sample count for sampled mode");
  v_conj->add_option("--seed", conj_seed);
  auto* v_sub = verify->add_subcommand("subarray-bound", "largest symbol-avoiding subarray of an m=3 square");
  std::string sub_input;
  v_sub->add_option("input", sub_input, "square file or constructor spec")->required();

  auto* delta = app.add_subcommand("delta", "block-index invariant table of a blown-up cyclic square");
  int delta_n = 0, delta_lambda = 0;
  delta->add_option("n", delta_n)->required();
  delta->add_option("lambda", delta_lambda)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 64;
  }
  const bool structured = format == "structured";

  Result res;
  try {
    if (gen->parsed()) {
      Loaded in = from_spec(gen_spec);
      if (structured) {
        auto j = fsq::square_to_json(in.sq);
        if (in.seed) j["seed"] = *in.seed;
        res.payload = j.dump(2) + "\n";
      } else {
        if (in.seed) res.payload += "# seed " + std::to_string(*in.seed) + "\n";
        res.payload += fsq::to_text(in.sq);
      }
    } else if (find->parsed()) {
      Loaded in = load_any(find_input);
      fsq::SearchOutcome out;
      if (find_algorithm == "exact")
        out = fsq::find_exact(in.sq, budget_or_env(find_budget));
      else if (find_algorithm == "descent")
        out = fsq::swap_descent(in.sq, find_seed, find_restarts);
      else
        out = fsq::find_balanced(in.sq, find_seed, find_restarts);
      const bool randomized = in.seed.has_value() || find_algorithm != "exact";
      if (structured) {
        auto j = fsq::outcome_to_json(out);
        if (randomized) j["seed"] = in.seed ? *in.seed : find_seed;
        res.payload = j.dump(2) + "\n";
      } else {
        if (in.seed) res.payload += "# seed " + std::to_string(*in.seed) + "\n";
        if (find_algorithm != "exact") res.payload += "# seed " + std::to_string(find_seed) + "\n";
        res.payload += std::string(fsq::status_name(out.status)) + "\n";
        if (out.witness) {
          res.payload += "sigma: " + fsq::to_text(*out.witness);
          res.payload += annotated_grid(in.sq, *out.witness);
        }
      }
      std::cerr << "nodes=" << out.stats.nodes << " restarts=" << out.stats.restarts
                << " elapsed_ms=" << out.stats.elapsed_ms << "\n";
    } else if (plex->parsed()) {
      Loaded in = load_any(plex_input);
      auto found = fsq::find_k_plex(in.sq, plex_k, budget_or_env(plex_budget));
      std::vector<fsq::Diagonal> parts;
      if (found && plex_decompose) parts = fsq::decompose_plex(*found);
      if (structured) {
        nlohmann::json j;
        j["status"] = found ? "FOUND" : "ABSENT";
        if (in.seed) j["seed"] = *in.seed;
        if (found) {
          j["plex"] = fsq::plex_to_json(*found);
          if (plex_decompose) {
            auto arr = nlohmann::json::array();
            for (const auto& d : parts) arr.push_back(fsq::diagonal_to_json(d)["sigma"]);
            j["diagonals"] = arr;
          }
        }
        res.payload = j.dump(2) + "\n";
      } else {
        if (in.seed) res.payload += "# seed " + std::to_string(*in.seed) + "\n";
        if (!found) {
          res.payload += "ABSENT\n";
        } else {
          res.payload += "FOUND k=" + std::to_string(found->k) + "\n";
          for (auto [r, c] : found->cells)
            res.payload += std::to_string(r + 1) + " " + std::to_string(c + 1) + "\n";
          for (const auto& d : parts) res.payload += "diagonal: " + fsq::to_text(d);
        }
      }
    } else if (equiv->parsed()) {
      Loaded a = load_any(equiv_a), b = load_any(equiv_b);
      auto cert = fsq::are_equivalent(a.sq, b.sq);
      if (structured) {
        nlohmann::json j;
        j["equivalent"] = cert.has_value();
        if (cert) j["certificate"] = fsq::certificate_to_json(*cert);
        res.payload = j.dump(2) + "\n";
      } else {
        res.payload += cert ? "EQUIVALENT\n" : "INEQUIVALENT\n";
        if (cert) res.payload += transform_text(cert->transform);
      }
    } else if (verify->parsed()) {
      fsq::VerificationReport rep;
      if (v_m2->parsed())
        rep = fsq::check_theorem_m2(m2_lambda);
      else if (v_m3->parsed())
        rep = fsq::check_theorem_m3(m3_lambda, m3_samples, m3_seed,
                                    m3_budget ? m3_budget : std::optional<long long>(fsq::kM3EnumNodeBudget));
      else if (v_b->parsed())
        rep = fsq::check_B_theorem(b_nmax, b_lmax);
      else if (v_conj->parsed())
        rep = fsq::check_conjecture(conj_m, conj_lambda, conj_samples, conj_seed);
      else
        rep = fsq::check_subarray_bound(load_any(sub_input).sq);
      res.payload = structured ? fsq::report_to_json(rep).dump(2) + "\n" : fsq::report_to_table(rep);
      res.code = rep.passed() ? 0 : 2;
      std::cerr << "elapsed_ms=" << rep.elapsed_ms << "\n";
    } else if (delta->parsed()) {
      const int n = delta_n, lam = delta_lambda;
      if (n < 1 || lam < 1) throw UsageFailure{"n and lambda must be positive"};
      fsq::DeltaValue probe = fsq::delta_value(n, lam, 1, 1, (1 % n) + 1);  // guard check
      const int side = n * lam;
      const long long balanced_raw = static_cast<long long>(lam) * n * (n + 1) / 2;
      const int balanced_residue = static_cast<int>(static_cast<long long>(lam) * n * (n - 1) / 2 % n);
      auto value_at = [&](int r, int c) {
        const int br = (r + lam - 1) / lam, bc = (c + lam - 1) / lam;
        return fsq::delta_value(n, lam, r, c, (br + bc - 1) % n + 1).value;
      };
      if (structured) {
        nlohmann::json rows = nlohmann::json::array();
        for (int r = 1; r <= side; ++r) {
          nlohmann::json row = nlohmann::json::array();
          for (int c = 1; c <= side; ++c) row.push_back(value_at(r, c));
          rows.push_back(row);
        }
        nlohmann::json j{{"n", n},
                         {"lambda", lam},
                         {"modulus", probe.modulus},
                         {"values", rows},
                         {"balanced_raw_sum", balanced_raw},
                         {"balanced_residue", balanced_residue}};
        res.payload = j.dump(2) + "\n";
      } else {
        res.payload += "modulus: " + std::to_string(probe.modulus) + "\n";
        for (int r = 1; r <= side; ++r) {
          for (int c = 1; c <= side; ++c)
            res.payload += (c > 1 ? " " : "") + std::to_string(value_at(r, c));
          res.payload += "\n";
        }
        res.payload += "balanced_raw_sum: " + std::to_string(balanced_raw) + "\n";
        res.payload += "balanced_residue: " + std::to_string(balanced_residue) + "\n";
      }
    }
  } catch (const UsageFailure& u) {
    std::cerr << u.msg << "\n";
    return 64;
  } catch (const FileFailure& f) {
    std::cerr << f.msg << "\n";
    return 66;
  } catch (const fsq::Error& e) {
    std::cerr << e.what() << "\n";
    switch (e.code) {
      case fsq::ErrorCode::ParseError:
        return 66;
      case fsq::ErrorCode::TooLarge:
      case fsq::ErrorCode::BudgetExhausted:
        return 3;
      default:
        return 64;
    }
  }

  if (!output_path.empty()) {
    std::ofstream f(output_path);
    if (!f) {
      std::cerr << "cannot write " << output_path << "\n";
      return 66;
    }
    f << res.payload;
  } else {
    std::cout << res.payload;
  }
  return res.code;
}
