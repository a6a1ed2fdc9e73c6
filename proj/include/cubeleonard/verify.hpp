#pragma once

#include "cubeleonard/acsa.hpp"
#include "cubeleonard/hypercube.hpp"
#include "cubeleonard/leonard.hpp"
#include "cubeleonard/linalg.hpp"
#include "cubeleonard/quotient.hpp"
#include "cubeleonard/sl2rep.hpp"
#include "cubeleonard/tmodules.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace cubeleonard {

struct VerifyOptions {
  std::uint64_t seed = 1;
  bool force = false;
  int dense_cap = 8;
  int structural_cap = 10;
  // Largest diameter for the D-independent suites; defaults to D.
  std::optional<int> diameter_bound;
};

struct SuiteResult {
  std::string suite;
  bool pass = true;
  std::string detail;
  double seconds = 0;
  std::vector<LeonardTripleCertificate> certificates;
};

// Collects individual checks; the detail lists the first few failures.
class CheckLog {
 public:
  void expect(bool ok, const std::string& what) {
    ++count_;
    if (!ok) failures_.push_back(what);
  }

  template <class F>
  void guarded(const std::string& what, F&& f) {
    try {
      f();
    } catch (const std::exception& e) {
      ++count_;
      failures_.push_back(what + ": " + e.what());
    }
  }

  void note(const std::string& s) { notes_.push_back(s); }
  bool ok() const { return failures_.empty(); }
  std::size_t count() const { return count_; }

  SuiteResult finish(const std::string& suite) const {
    SuiteResult r;
    r.suite = suite;
    r.pass = failures_.empty();
    std::ostringstream os;
    if (r.pass) {
      os << count_ << " checks passed";
    } else {
      os << failures_.size() << " of " << count_ << " checks failed: ";
      for (std::size_t k = 0; k < failures_.size() && k < 6; ++k) os << (k ? "; " : "") << failures_[k];
      if (failures_.size() > 6) os << "; ...";
    }
    for (const auto& n : notes_) os << " [" << n << "]";
    r.detail = os.str();
    return r;
  }

 private:
  std::size_t count_ = 0;
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

namespace suites {

inline std::string at(int D) { return "D=" + std::to_string(D); }

inline SuiteResult relations(int D) {
  CheckLog log;
  CubeContext ctx(D);
  log.guarded(at(D), [&] {
    auto pos = positive_structure(ctx);
    auto neg = negative_structure(ctx);
    log.expect(check_relations(pos).ok, at(D) + " positive structure");
    log.expect(check_relations(neg).ok, at(D) + " negative structure");
    log.expect(pos.y == second_dual_adjacency(ctx), at(D) + " y = A*_{D-1}");
  });
  if (D % 2 == 1)
    log.guarded(at(D) + " quotient", [&] {
      QuotientContext q(D);
      log.expect(check_relations(quotient_acsa_structure(q)).ok, at(D) + " quotient structure");
    });
  return log.finish("relations");
}

inline SuiteResult wam(int D) {
  CheckLog log;
  CubeContext ctx(D);
  log.guarded(at(D), [&] {
    std::string v = weighted_adjacency_violation(ctx, positive_structure(ctx).z);
    log.expect(v.empty(), at(D) + " C: " + v);
  });
  if (D % 2 == 1)
    log.guarded(at(D) + " quotient", [&] {
      QuotientContext q(D);
      std::string v = quotient_weighted_adjacency_violation(q, quotient_acsa_structure(q).z);
      log.expect(v.empty(), at(D) + " C~: " + v);
    });
  return log.finish("wam");
}

// Canonical sl2 modules of diameter <= bound, plus the exp-ad matrices.
inline void skew_canonical_checks(CheckLog& log, int bound) {
  log.guarded("exp-ad", [&] {
    auto computed = exp_ad_matrices();
    auto printed = printed_exp_ad_matrices();
    log.expect(computed.first == printed.first, "exp ad((iY-X)/2) differs from the printed matrix");
    log.expect(computed.second == printed.second, "exp ad((iY+X)/2) differs from the printed matrix");
  });
  for (int d = 0; d <= bound; ++d) {
    const std::string tag = "d=" + std::to_string(d);
    log.guarded(tag, [&] {
      auto m = build_irreducible_sl2(d);
      ExactMatrix h = build_h(m.action, d + 1);
      log.expect(anticommutator(h, m.action.x).is_zero(), tag + " hX = -Xh");
      log.expect(commutator(h, m.action.y).is_zero(), tag + " hY = Yh");
      log.expect(anticommutator(h, m.action.z).is_zero(), tag + " hZ = -Zh");
      for (int i = 0; i <= d; ++i) {
        SparseVector v = SparseVector::unit(d + 1, i);
        log.expect(m.action.y.apply(v) == GaussianRational(d - 2 * i) * v, tag + " v-basis is a Y-eigenbasis");
        log.expect(h.apply(v) == GaussianRational(sign_power(i)) * integer_power_of_i(d) * v,
                   tag + " h-eigenvalue at i=" + std::to_string(i));
      }
      log.expect(h * h == ExactMatrix::scalar(d + 1, sign_power(d)), tag + " h^2 = (-1)^d");
      ExactMatrix s = skew_operator(m);
      auto r = check_skew(m.action, s);
      log.expect(r.involution, tag + " s^2 = I");
      log.expect(r.anticommutes_x && r.commutes_y && r.anticommutes_z, tag + " s relations");
    });
  }
}

inline SuiteResult skew_canonical(int bound) {
  CheckLog log;
  skew_canonical_checks(log, bound);
  return log.finish("skew");
}

inline SuiteResult skew(int D, const VerifyOptions& opt) {
  CheckLog log;
  skew_canonical_checks(log, opt.diameter_bound.value_or(D));
  CubeContext ctx(D);
  log.guarded(at(D) + " cube", [&] {
    Sl2Action go = go_sl2_structure(ctx);
    ExactMatrix s = s_diagonal(ctx, opt.dense_cap, opt.seed);
    log.expect(check_skew(go, s).ok(), at(D) + " s = hk is a skew operator");
    if (D > opt.dense_cap) log.note("hk checked on sampled vertices, seed " + std::to_string(opt.seed));
    for (const auto& w : decompose(ctx)) {
      BasisSolver solver(w.vectors);
      Sl2Action a{restrict_to(go.x, w.vectors, solver), restrict_to(go.y, w.vectors, solver),
                  restrict_to(go.z, w.vectors, solver)};
      ExactMatrix h = build_h(a, w.diameter + 1);
      log.expect(h * h == ExactMatrix::scalar(w.dim(), sign_power(w.diameter)), w.id + " h^2 = (-1)^(D-2r)");
      log.expect(anticommutator(h, a.x).is_zero() && commutator(h, a.y).is_zero() && anticommutator(h, a.z).is_zero(),
                 w.id + " h relations");
    }
  });
  return log.finish("skew");
}

inline SuiteResult idempotents(int D) {
  CheckLog log;
  CubeContext ctx(D);
  const Index n = ctx.vertex_count();
  log.guarded(at(D), [&] {
    std::vector<ExactMatrix> e;
    for (int i = 0; i <= D; ++i) e.push_back(primitive_idempotent(ctx, i));
    ExactMatrix sum(n, n);
    for (const auto& m : e) sum = sum + m;
    log.expect(sum == ExactMatrix::identity(n), at(D) + " sum E_i = I");
    std::vector<ExactMatrix::Entry> ones;
    for (Index r = 0; r < n; ++r)
      for (Index c = 0; c < n; ++c) ones.push_back({r, c, GaussianRational(1)});
    log.expect(e[0] == GaussianRational(mpq_class(1, static_cast<unsigned long>(n))) * ExactMatrix::from_entries(n, n, ones),
               at(D) + " E_0 = 2^-D J");
    for (int i = 0; i <= D; ++i) {
      const std::string tag = at(D) + " i=" + std::to_string(i);
      log.expect(rank(e[i]) == static_cast<std::size_t>(detail::binom(D, i)), tag + " rank E_i = C(D,i)");
      for (int j = i; j <= D; ++j) {
        ExactMatrix p = e[i] * e[j];
        log.expect(i == j ? p == e[i] : p.is_zero(), tag + " j=" + std::to_string(j) + " E_i E_j");
      }
      const ExactMatrix& f = e[D - i];
      bool sign_ok = true;
      for (Index y = 0; y < n && sign_ok; ++y)
        for (Index z = 0; z < n; ++z)
          if (f.at(y, z) != GaussianRational(sign_power(CubeContext::distance(y, z))) * e[i].at(y, z)) {
            sign_ok = false;
            break;
          }
      log.expect(sign_ok, tag + " (E_{D-i})_yz = (-1)^d(y,z) (E_i)_yz");
    }
  });
  return log.finish("idempotents");
}

inline SuiteResult decomposition(int D) {
  CheckLog log;
  CubeContext ctx(D);
  log.guarded(at(D), [&] {
    auto ws = decompose(ctx);
    std::map<int, long> mult;
    for (const auto& w : ws) {
      ++mult[w.endpoint];
      log.expect(w.diameter == D - 2 * w.endpoint, w.id + " diameter D-2r");
      log.expect(is_thin(w), w.id + " thin");
      auto p = dual_profile(ctx, w);
      bool window = true;
      for (int i = 0; i <= D; ++i)
        window = window && p[i] == ((i >= w.endpoint && i <= w.endpoint + w.diameter) ? 1 : 0);
      log.expect(window, w.id + " dual endpoint r and dim E_i W <= 1");
    }
    for (int r = 0; 2 * r <= D; ++r)
      log.expect(mult[r] == endpoint_multiplicity(D, r), at(D) + " multiplicity at r=" + std::to_string(r));
    log.expect(is_direct_sum(ctx, ws), at(D) + " direct sum");
  });
  return log.finish("decomposition");
}

inline SuiteResult leonard_even(int D) {
  CheckLog log;
  SuiteResult out;
  CubeContext ctx(D);
  log.guarded(at(D), [&] {
    auto pos = positive_structure(ctx);
    for (const auto& w : decompose(ctx)) {
      if (w.diameter < 3) continue;
      log.guarded(w.id, [&] {
        auto c = certify(w.id, restrict_triple(pos, w.vectors));
        bool bip = std::all_of(c.shapes.begin(), c.shapes.end(), [](Shape s) { return s == Shape::Bipartite; });
        bool two = c.nu && (*c.nu)[0] == GaussianRational(2) && (*c.nu)[1] == GaussianRational(2) &&
                   (*c.nu)[2] == GaussianRational(2);
        log.expect(bip, w.id + " six shapes bipartite");
        log.expect(c.bannai_ito, w.id + " Bannai/Ito");
        log.expect(two, w.id + " nu = (2,2,2)");
        log.expect(c.verdict == "normalized-B" && c.diameter() == D - 2 * w.endpoint, w.id + " verdict " + c.verdict);
        out.certificates.push_back(std::move(c));
      });
    }
  });
  SuiteResult r = log.finish("leonard-even");
  r.certificates = std::move(out.certificates);
  return r;
}

inline SuiteResult odd_types(int D) {
  CheckLog log;
  CubeContext ctx(D);
  log.guarded(at(D), [&] {
    auto pos = positive_structure(ctx);
    auto ws = decompose(ctx);
    for (const auto& w : ws)
      for (const auto& p : split_and_type(ctx, pos, w))
        log.expect(p.agrees(), w.id + " W" + (p.part == "+" ? "∩V+" : "∩V-") + " computed " + p.computed.to_string() +
                                   ", table " + p.tabulated.to_string());
    QuotientContext q(D);
    for (const auto& m : quotient_modules(q, quotient_acsa_structure(q), ws))
      log.expect(m.agrees(), "quotient " + m.module.id + " computed " + m.computed.to_string() + ", table " +
                                 m.tabulated.to_string());
  });
  return log.finish("odd-types");
}

inline SuiteResult leonard_quotient(int D) {
  CheckLog log;
  std::vector<LeonardTripleCertificate> certs;
  log.guarded(at(D), [&] {
    QuotientContext q(D);
    auto structure = quotient_acsa_structure(q);
    const int Dq = q.half_diameter();
    for (const auto& m : quotient_modules(q, structure, decompose(q.parent()))) {
      if (m.module.diameter < 3) continue;
      log.guarded(m.module.id, [&] {
        auto c = certify(m.module.id, restrict_triple(structure, m.module.vectors));
        const std::string want = std::string(to_string(tabulated_quotient_label(Dq, m.module.endpoint))) + "-normalized-AB";
        log.expect(c.bannai_ito, m.module.id + " Bannai/Ito");
        log.expect(c.diameter() == Dq - m.module.endpoint, m.module.id + " diameter D'-r");
        log.expect(c.verdict == want, m.module.id + " verdict " + c.verdict + ", table " + want);
        certs.push_back(std::move(c));
      });
    }
    if (certs.empty()) log.note("no quotient module of diameter >= 3");
  });
  SuiteResult r = log.finish("leonard-quotient");
  r.certificates = std::move(certs);
  return r;
}

inline SuiteResult sl2_factory(int bound) {
  CheckLog log;
  for (int d = 0; d <= bound; ++d) {
    const std::string tag = "d=" + std::to_string(d);
    log.guarded(tag, [&] {
      auto m = build_irreducible_sl2(d);
      if (d % 2 == 0) {
        auto st = induce_acsa_structures(m.action, skew_operator(m));
        log.expect(classify(st.first) == ModuleType::B(d), tag + " structure 1 is B(d)");
        log.expect(classify(st.second) == ModuleType::B(d), tag + " structure 2 is B(d)");
        return;
      }
      for (int k : {1, 2})
        for (const auto& p : split_odd(m, k))
          log.expect(p.agrees(), tag + " structure " + std::to_string(k) + " computed " + p.computed.to_string() +
                                     ", table " + p.tabulated.to_string());
    });
  }
  return log.finish("sl2-factory");
}

inline SuiteResult canonical(int bound) {
  CheckLog log;
  for (int d = 0; d <= bound; ++d) {
    std::vector<ModuleType> types;
    if (d % 2 == 0) types.push_back(ModuleType::B(d));
    for (NLabel n : {NLabel::Zero, NLabel::X, NLabel::Y, NLabel::Z}) types.push_back(ModuleType::AB(d, n));
    for (const auto& t : types)
      log.guarded(t.to_string(), [&] {
        auto m = build_canonical(t);
        log.expect(check_relations(m).ok, t.to_string() + " relations");
        log.expect(is_irreducible(m), t.to_string() + " irreducible");
        log.expect(classify(m) == t, t.to_string() + " classify round trip");
      });
  }
  return log.finish("canonical");
}

inline SuiteResult transport_suite(int D) {
  CheckLog log;
  log.guarded(at(D), [&] {
    QuotientContext q(D);
    const CubeContext& ctx = q.parent();
    ExactMatrix psi = psi_matrix(q);
    auto pos = positive_structure(ctx);
    auto qs = quotient_acsa_structure(q);
    log.expect(psi * pos.x == qs.x * psi, at(D) + " psi A = A~ psi");
    log.expect(psi * pos.y == qs.y * psi, at(D) + " psi A*_{D-1} = B~ psi");
    log.expect(psi * pos.z == qs.z * psi, at(D) + " psi C = C~ psi");
    auto [plus, minus] = v_plus_minus(ctx);
    bool kills = std::all_of(minus.vectors.begin(), minus.vectors.end(),
                             [&](const SparseVector& v) { return psi.apply(v).is_zero(); });
    log.expect(kills && kernel_basis(psi).size() == minus.size(), at(D) + " ker psi = V-");
  });
  return log.finish("transport");
}

}  // namespace suites

enum class SuiteCost { Dense, Structural };

struct SuiteInfo {
  std::string name;
  SuiteCost cost;
  // 0 = any D, 1 = odd D only, 2 = even D only
  int parity;
};

inline const std::vector<SuiteInfo>& suite_catalog() {
  static const std::vector<SuiteInfo> cat = {
      {"relations", SuiteCost::Structural, 0},   {"wam", SuiteCost::Structural, 0},
      {"skew", SuiteCost::Structural, 0},        {"idempotents", SuiteCost::Dense, 0},
      {"decomposition", SuiteCost::Structural, 0}, {"leonard-even", SuiteCost::Structural, 2},
      {"odd-types", SuiteCost::Structural, 1},   {"leonard-quotient", SuiteCost::Structural, 1},
      {"sl2-factory", SuiteCost::Structural, 0}, {"canonical", SuiteCost::Structural, 0},
      {"transport", SuiteCost::Structural, 1},
  };
  return cat;
}

inline const SuiteInfo& suite_info(const std::string& name) {
  for (const auto& s : suite_catalog())
    if (s.name == name) return s;
  throw std::invalid_argument("unknown suite '" + name + "'");
}

inline std::vector<std::string> default_suites(int D) {
  std::vector<std::string> out;
  for (const auto& s : suite_catalog())
    if (s.parity == 0 || (s.parity == 1) == (D % 2 == 1)) out.push_back(s.name);
  return out;
}

// Throws std::invalid_argument if the suite does not apply or D exceeds its cap.
inline void check_suite_allowed(const std::string& name, int D, const VerifyOptions& opt) {
  const SuiteInfo& s = suite_info(name);
  if (s.parity == 1 && D % 2 == 0) throw std::invalid_argument("suite " + name + " needs odd D");
  if (s.parity == 2 && D % 2 == 1) throw std::invalid_argument("suite " + name + " needs even D");
  const int cap = s.cost == SuiteCost::Dense ? opt.dense_cap : opt.structural_cap;
  if (D > cap && !opt.force)
    throw std::invalid_argument("suite " + name + " is capped at D=" + std::to_string(cap) + "; pass --force to exceed");
}

inline SuiteResult run_suite(const std::string& name, int D, const VerifyOptions& opt) {
  check_suite_allowed(name, D, opt);
  const int bound = opt.diameter_bound.value_or(D);
  auto start = std::chrono::steady_clock::now();
  SuiteResult r;
  if (name == "relations") r = suites::relations(D);
  else if (name == "wam") r = suites::wam(D);
  else if (name == "skew") r = suites::skew(D, opt);
  else if (name == "idempotents") r = suites::idempotents(D);
  else if (name == "decomposition") r = suites::decomposition(D);
  else if (name == "leonard-even") r = suites::leonard_even(D);
  else if (name == "odd-types") r = suites::odd_types(D);
  else if (name == "leonard-quotient") r = suites::leonard_quotient(D);
  else if (name == "sl2-factory") r = suites::sl2_factory(bound);
  else if (name == "canonical") r = suites::canonical(bound);
  else r = suites::transport_suite(D);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

struct VerificationReport {
  int D = 0;
  std::vector<SuiteResult> suites;

  bool pass() const {
    return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.pass; });
  }

  std::vector<LeonardTripleCertificate> certificates() const {
    std::vector<LeonardTripleCertificate> out;
    for (const auto& s : suites) out.insert(out.end(), s.certificates.begin(), s.certificates.end());
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.module_id < b.module_id; });
    return out;
  }

  nlohmann::json to_json(bool timing = true) const {
    nlohmann::json ss = nlohmann::json::array();
    for (const auto& s : suites) ss.push_back({{"suite", s.suite}, {"status", s.pass ? "pass" : "fail"}, {"detail", s.detail}});
    nlohmann::json certs = nlohmann::json::array();
    for (const auto& c : certificates()) certs.push_back(cubeleonard::to_json(c));
    nlohmann::json j{{"D", D},
                     {"parity", D % 2 == 0 ? "even" : "odd"},
                     {"status", pass() ? "pass" : "fail"},
                     {"suites", ss},
                     {"certificates", certs}};
    if (timing) {
      nlohmann::json t = nlohmann::json::object();
      for (const auto& s : suites) t[s.suite] = s.seconds;
      j["timing"] = t;
    }
    return j;
  }

  std::string to_text() const {
    std::ostringstream os;
    os << "D=" << D << " (" << (D % 2 == 0 ? "even" : "odd") << ")\n";
    for (const auto& s : suites) os << "  " << s.suite << ": " << (s.pass ? "pass" : "FAIL") << "  " << s.detail << "\n";
    for (const auto& c : certificates())
      os << "  certificate " << c.module_id << ": dim " << c.dim << ", " << c.verdict << "\n";
    os << (pass() ? "overall: pass" : "overall: FAIL") << "\n";
    return os.str();
  }
};

inline VerificationReport verify(int D, const std::vector<std::string>& names, const VerifyOptions& opt) {
  for (const auto& n : names) check_suite_allowed(n, D, opt);
  VerificationReport rep;
  rep.D = D;
  for (const auto& n : names) rep.suites.push_back(run_suite(n, D, opt));
  return rep;
}

}  // namespace cubeleonard
