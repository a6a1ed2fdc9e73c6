#pragma once

#include "cubeleonard/acsa.hpp"
#include "cubeleonard/hypercube.hpp"
#include "cubeleonard/leonard.hpp"
#include "cubeleonard/linalg.hpp"
#include "cubeleonard/quotient.hpp"
#include "cubeleonard/tmodules.hpp"
#include "cubeleonard/verify.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

namespace cubeleonard::cli {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  int D = 4;
  bool quotient = false;
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 1;
  int max_D = 10;
  bool force = false;

  VerifyOptions verify_options() const {
    VerifyOptions v;
    v.seed = seed;
    v.force = force;
    v.structural_cap = max_D;
    return v;
  }
};

inline void check_D(const GlobalOptions& g) {
  if (g.D < 1) throw UsageError("--D must be at least 1");
  if (g.D > g.max_D && !g.force)
    throw UsageError("--D " + std::to_string(g.D) + " exceeds --max-D " + std::to_string(g.max_D) + "; pass --force");
}

// Ã, B̃, C̃ are accepted as A~, B~, C~.
inline std::string canonical_matrix_name(std::string name) {
  for (auto [from, to] : {std::pair<const char*, const char*>{"Ã", "A~"}, {"B̃", "B~"}, {"C̃", "C~"}}) {
    auto p = name.find(from);
    if (p != std::string::npos) name.replace(p, std::string(from).size(), to);
  }
  if (name == "A*D-1" || name == "B") name = "AD-1*";
  return name;
}

inline std::string file_stem(const std::string& canonical) {
  std::string out;
  for (char c : canonical) {
    if (c == '*') out += "star";
    else if (c == '~') out += "tilde";
    else out += c;
  }
  return out;
}

inline ExactMatrix build_named_matrix(const std::string& raw, const GlobalOptions& g) {
  const std::string name = canonical_matrix_name(raw);
  const int D = g.D;
  const int dense_cap = VerifyOptions{}.dense_cap;
  auto need_dense = [&] {
    if (D > dense_cap && !g.force)
      throw UsageError("matrix " + raw + " is dense; D above " + std::to_string(dense_cap) + " needs --force");
  };
  auto index = [&](const std::smatch& m) {
    int i = std::stoi(m[1].str());
    if (i > D) throw UsageError("index " + std::to_string(i) + " exceeds D=" + std::to_string(D));
    return i;
  };
  if (name == "A~" || name == "B~" || name == "C~" || name == "psi") {
    if (D % 2 == 0) throw UsageError("quotient matrix " + raw + " needs odd D");
    QuotientContext q(D);
    if (name == "A~") return quotient_adjacency(q);
    if (name == "B~") return quotient_dual_adjacency(q);
    if (name == "C~") return quotient_acsa_structure(q).z;
    return psi_matrix(q);
  }
  CubeContext ctx(D);
  static const std::regex ei(R"(^E(\d+)$)"), esi(R"(^E\*(\d+)$)"), ai(R"(^A(\d+)$)"), asi(R"(^A\*(\d+)$)");
  std::smatch m;
  if (name == "A") return adjacency(ctx);
  if (name == "A*") return dual_adjacency(ctx);
  if (name == "AD-1*") return second_dual_adjacency(ctx);
  if (name == "C") return positive_structure(ctx).z;
  if (name == "s") return s_diagonal(ctx, dense_cap, g.seed);
  if (name == "h") {
    need_dense();
    return h_operator(ctx);
  }
  if (std::regex_match(name, m, ei)) {
    need_dense();
    return primitive_idempotent(ctx, index(m));
  }
  if (std::regex_match(name, m, esi)) return dual_idempotent(ctx, index(m));
  if (std::regex_match(name, m, ai)) return distance_matrix(ctx, index(m));
  if (std::regex_match(name, m, asi)) return dual_distance_matrix(ctx, index(m));
  throw UsageError("unknown matrix name '" + raw + "'");
}

// Writes to --out (file, or directory for build) or to the given stream.
inline void emit(const GlobalOptions& g, std::ostream& out, const std::string& text) {
  if (g.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(g.out);
  if (!f) throw UsageError("cannot write " + g.out);
  f << text;
}

inline int cmd_build(const GlobalOptions& g, const std::vector<std::string>& names, std::ostream& out) {
  check_D(g);
  if (names.empty()) throw UsageError("build needs at least one --matrix");
  std::vector<std::pair<std::string, ExactMatrix>> ms;
  for (const auto& n : names) ms.emplace_back(n, build_named_matrix(n, g));
  if (g.out.empty()) {
    for (const auto& [n, m] : ms) {
      out << "# " << n << " D=" << g.D << '\n';
      write_matrix(out, m);
    }
    return 0;
  }
  std::filesystem::create_directories(g.out);
  for (const auto& [n, m] : ms) {
    auto path = std::filesystem::path(g.out) / (file_stem(canonical_matrix_name(n)) + ".txt");
    std::ofstream f(path);
    if (!f) throw UsageError("cannot write " + path.string());
    write_matrix(f, m);
    out << path.string() << '\n';
  }
  return 0;
}

inline int cmd_decompose(const GlobalOptions& g, std::ostream& out) {
  check_D(g);
  nlohmann::json mods = nlohmann::json::array();
  bool agrees = true;
  std::ostringstream text;
  if (g.quotient) {
    if (g.D % 2 == 0) throw UsageError("--quotient needs odd D");
    QuotientContext q(g.D);
    for (const auto& m : quotient_modules(q)) {
      mods.push_back(to_json(m));
      agrees = agrees && m.agrees();
      text << m.module.id << "  endpoint " << m.module.endpoint << "  diameter " << m.module.diameter << "  dim "
           << m.module.dim() << "  type " << m.computed << (m.agrees() ? "" : "  (table " + m.tabulated.to_string() + ")")
           << '\n';
    }
  } else {
    CubeContext ctx(g.D);
    auto pos = positive_structure(ctx);
    for (const auto& w : decompose(ctx)) {
      auto parts = split_and_type(ctx, pos, w);
      mods.push_back(to_json(w, parts));
      text << w.id << "  endpoint " << w.endpoint << "  diameter " << w.diameter << "  dim " << w.dim();
      for (const auto& p : parts) {
        agrees = agrees && p.agrees();
        text << "  " << (p.part.empty() ? "type" : "W" + p.part) << " " << p.computed
             << (p.agrees() ? "" : " (table " + p.tabulated.to_string() + ")");
      }
      text << '\n';
    }
  }
  if (g.format == "text") {
    emit(g, out, text.str());
  } else {
    nlohmann::json j{{"D", g.D}, {"quotient", g.quotient}, {"modules", mods}, {"tables_agree", agrees}};
    emit(g, out, j.dump(2) + "\n");
  }
  return 0;
}

inline int report_out(const GlobalOptions& g, const VerificationReport& rep, std::ostream& out) {
  emit(g, out, g.format == "text" ? rep.to_text() : rep.to_json().dump(2) + "\n");
  return rep.pass() ? 0 : 1;
}

inline int cmd_verify(const GlobalOptions& g, const std::vector<std::string>& suites, std::ostream& out) {
  if (g.D < 1) throw UsageError("--D must be at least 1");
  auto names = suites.empty() ? default_suites(g.D) : suites;
  VerificationReport rep;
  try {
    rep = verify(g.D, names, g.verify_options());
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return report_out(g, rep, out);
}

inline int cmd_skew(const GlobalOptions& g, int d, std::ostream& out) {
  if (d < 0) throw UsageError("diameter must be nonnegative");
  VerificationReport rep;
  rep.D = d;
  auto start = std::chrono::steady_clock::now();
  rep.suites.push_back(suites::skew_canonical(d));
  rep.suites.back().seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report_out(g, rep, out);
}

inline ExactMatrix read_matrix_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read " + path);
  return read_matrix(f);
}

inline int cmd_classify(const GlobalOptions& g, const std::vector<std::string>& files, std::ostream& out) {
  if (files.size() != 3) throw UsageError("classify needs three matrix files");
  ModuleActionTriple t{read_matrix_file(files[0]), read_matrix_file(files[1]), read_matrix_file(files[2])};
  nlohmann::json j{{"dim", t.dim()}};
  auto rel = check_relations(t);
  j["relations"] = rel.ok ? "hold" : rel.message();
  int code = 0;
  try {
    j["type"] = classify(t).to_string();
  } catch (const ClassificationError& e) {
    j["type"] = nullptr;
    j["error"] = e.what();
    code = 1;
  }
  try {
    j["certificate"] = to_json(certify("input", t));
  } catch (const std::exception& e) {
    j["certificate"] = nullptr;
    j["certificate_error"] = e.what();
  }
  if (g.format == "text") {
    std::ostringstream os;
    os << "dim " << t.dim() << "\nrelations " << j["relations"].get<std::string>() << "\ntype "
       << (j["type"].is_null() ? "none (" + j["error"].get<std::string>() + ")" : j["type"].get<std::string>()) << "\n";
    if (!j["certificate"].is_null()) os << "verdict " << j["certificate"]["verdict"].get<std::string>() << "\n";
    emit(g, out, os.str());
  } else {
    emit(g, out, j.dump(2) + "\n");
  }
  return code;
}

// Exit codes: 0 pass, 1 a check failed, 2 usage or input error.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact verification of anticommutator spin algebra modules on hypercubes"};
  app.fallthrough();
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--D", g.D, "hypercube diameter");
  app.add_flag("--quotient", g.quotient, "work on the antipodal quotient (odd D)");
  app.add_option("--out", g.out, "output file (directory for build)");
  app.add_option("--format", g.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--seed", g.seed, "seed for sampled checks");
  app.add_option("--max-D", g.max_D, "largest D accepted without --force");
  app.add_flag("--force", g.force, "allow D above the caps");

  std::vector<std::string> matrices, suite_names, files;
  int diameter = -1;
  auto* build = app.add_subcommand("build", "write matrices in the exchange format");
  build->add_option("--matrix,-m", matrices, "A, A*, Ai, A*i, AD-1*, Ei, E*i, C, s, h, A~, B~, C~, psi");
  auto* decomp = app.add_subcommand("decompose", "list the irreducible T-modules");
  auto* ver = app.add_subcommand("verify", "run verification suites");
  ver->add_option("--suite", suite_names, "suite name (repeatable); default all applicable");
  auto* cls = app.add_subcommand("classify", "classify a triple given as three matrix files");
  cls->add_option("files", files, "x y z matrix files")->expected(3);
  auto* skew = app.add_subcommand("skew", "h and skew-operator checks on canonical sl2 modules");
  skew->add_option("--d", diameter, "largest diameter (defaults to --D)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  try {
    if (*build) return cmd_build(g, matrices, out);
    if (*decomp) return cmd_decompose(g, out);
    if (*ver) return cmd_verify(g, suite_names, out);
    if (*cls) return cmd_classify(g, files, out);
    return cmd_skew(g, diameter >= 0 ? diameter : g.D, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace cubeleonard::cli
