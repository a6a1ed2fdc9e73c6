#pragma once

#include "cubeleonard/acsa.hpp"
#include "cubeleonard/hypercube.hpp"
#include "cubeleonard/linalg.hpp"
#include "cubeleonard/quotient.hpp"

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace cubeleonard {

// Basis v_0..v_d of an irreducible T-module; v_j lies in slice slices[j].
struct SubmoduleBasis {
  std::string id;
  int endpoint = 0;
  int diameter = 0;
  int index = 0;
  VectorBasis vectors;
  std::vector<int> slices;

  Index dim() const { return vectors.size(); }
};

struct TypedPart {
  std::string part;  // "", "+" or "-"
  VectorBasis basis;
  ModuleType computed;
  ModuleType tabulated;

  bool agrees() const { return computed == tabulated; }
};

namespace detail {

inline std::string module_id(int r, int k) { return "r" + std::to_string(r) + "#" + std::to_string(k); }

// E*_{i+1} A applied to a vector supported on slice i.
inline SparseVector raise(const CubeContext& ctx, const SparseVector& v) {
  std::vector<std::pair<Index, GaussianRational>> es;
  for (const auto& [y, val] : v.entries())
    for (int b = 0; b < ctx.D(); ++b)
      if (!((y >> b) & 1U)) es.push_back({y | (Index{1} << b), val});
  return SparseVector::from_entries(v.dim(), std::move(es));
}

// E*_{r-1} A E*_r as a block from slice r to slice r-1.
inline ExactMatrix lowering_block(const CubeContext& ctx, int r) {
  const auto& src = ctx.slice(r);
  if (r == 0) return ExactMatrix(0, src.size());
  std::vector<ExactMatrix::Entry> es;
  for (std::size_t c = 0; c < src.size(); ++c)
    for (int b = 0; b < ctx.D(); ++b)
      if ((src[c] >> b) & 1U) es.push_back({ctx.position_in_slice(src[c] ^ (Index{1} << b)), c, GaussianRational(1)});
  return ExactMatrix::from_entries(ctx.slice(r - 1).size(), src.size(), std::move(es));
}

inline long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return b.get_si();
}

}  // namespace detail

inline std::vector<SubmoduleBasis> decompose(const CubeContext& ctx) {
  const Index n = ctx.vertex_count();
  std::vector<SubmoduleBasis> out;
  Index total = 0;
  for (int r = 0; 2 * r <= ctx.D(); ++r) {
    const auto& slice = ctx.slice(r);
    VectorBasis seeds = kernel_basis(detail::lowering_block(ctx, r));
    const int d = ctx.D() - 2 * r;
    for (std::size_t k = 0; k < seeds.size(); ++k) {
      SubmoduleBasis w;
      w.id = detail::module_id(r, static_cast<int>(k));
      w.endpoint = r;
      w.diameter = d;
      w.index = static_cast<int>(k);
      w.vectors.ambient_dim = n;
      std::vector<std::pair<Index, GaussianRational>> es;
      for (const auto& [p, val] : seeds[k].entries()) es.push_back({slice[p], val});
      SparseVector v = SparseVector::from_entries(n, std::move(es));
      w.vectors.vectors.push_back(v);
      w.slices.push_back(r);
      for (int j = 1; j <= d; ++j) {
        v = detail::raise(ctx, v);
        v *= GaussianRational::fraction(1, j);
        if (v.is_zero()) throw VerificationError("raising chain of " + w.id + " stops early at step " + std::to_string(j));
        w.vectors.vectors.push_back(v);
        w.slices.push_back(r + j);
      }
      if (!detail::raise(ctx, v).is_zero()) throw VerificationError("raising chain of " + w.id + " does not terminate");
      total += w.dim();
      out.push_back(std::move(w));
    }
  }
  if (total != n)
    throw VerificationError("decomposition bug: module dimensions sum to " + std::to_string(total) + ", expected " +
                            std::to_string(n));
  return out;
}

inline long endpoint_multiplicity(int D, int r) { return detail::binom(D, r) - detail::binom(D, r - 1); }

// Each vector lies in exactly the slice it is labelled with.
inline bool is_thin(const SubmoduleBasis& w) {
  if (w.slices.size() != w.dim() || static_cast<int>(w.dim()) != w.diameter + 1) return false;
  for (std::size_t j = 0; j < w.dim(); ++j) {
    if (w.vectors[j].is_zero()) return false;
    for (const auto& [y, val] : w.vectors[j].entries())
      if (CubeContext::weight(y) != w.slices[j]) return false;
  }
  return true;
}

// Rank of the concatenated bases, computed slice by slice.
inline bool is_direct_sum(const CubeContext& ctx, const std::vector<SubmoduleBasis>& ws) {
  std::vector<std::vector<SparseVector>> by_slice(ctx.D() + 1);
  for (const auto& w : ws)
    for (std::size_t j = 0; j < w.dim(); ++j) by_slice.at(w.slices[j]).push_back(w.vectors[j]);
  for (int i = 0; i <= ctx.D(); ++i) {
    if (by_slice[i].size() != ctx.slice(i).size()) return false;
    if (rank_of(by_slice[i], ctx.vertex_count()) != ctx.slice(i).size()) return false;
  }
  return true;
}

// dim E_i W, via p_i(A|_W).
inline std::vector<int> dual_profile(const CubeContext& ctx, const SubmoduleBasis& w) {
  const ExactMatrix a = restrict_to(adjacency(ctx), w.vectors);
  const Index m = a.rows();
  std::vector<int> out;
  for (int i = 0; i <= ctx.D(); ++i) {
    ExactMatrix p = ExactMatrix::identity(m);
    for (int j = 0; j <= ctx.D(); ++j) {
      if (j == i) continue;
      p = p * ExactMatrix::linear_combination(a, GaussianRational(-ctx.eigenvalue(j)), ExactMatrix::identity(m));
    }
    out.push_back(static_cast<int>(rank(p)));
  }
  return out;
}

// dim E_i W, projecting the ambient vectors with the idempotents themselves.
inline std::vector<int> dual_profile_ambient(const CubeContext& ctx, const SubmoduleBasis& w) {
  std::vector<int> out;
  for (int i = 0; i <= ctx.D(); ++i) {
    std::vector<SparseVector> imgs;
    for (const auto& v : w.vectors.vectors) imgs.push_back(apply_idempotent(ctx, i, v));
    out.push_back(static_cast<int>(rank_of(imgs, ctx.vertex_count())));
  }
  return out;
}

inline std::optional<int> dual_endpoint(const std::vector<int>& profile) {
  for (std::size_t i = 0; i < profile.size(); ++i)
    if (profile[i] > 0) return static_cast<int>(i);
  return std::nullopt;
}

// X = A restricted is tridiagonal with nonzero off-diagonals and Y = A* restricted is
// diagonal with distinct entries, which is the irreducible sl2 shape up to diagonal rescaling.
inline bool is_sl2_irreducible(const Sl2Action& go, const SubmoduleBasis& w) {
  BasisSolver solver(w.vectors);
  ExactMatrix x = restrict_to(go.x, w.vectors, solver);
  ExactMatrix y = restrict_to(go.y, w.vectors, solver);
  ExactMatrix z = restrict_to(go.z, w.vectors, solver);
  if (!check_brackets({x, y, z}).ok || !y.is_diagonal()) return false;
  const Index m = x.rows();
  auto dg = y.diagonal_entries();
  for (Index i = 0; i < m; ++i) {
    for (Index j = i + 1; j < m; ++j)
      if (dg[i] == dg[j]) return false;
    if (x.find(i, i)) return false;
    if (i + 1 < m && (!x.find(i, i + 1) || !x.find(i + 1, i))) return false;
  }
  for (auto e : x.entries())
    if ((e.row > e.col ? e.row - e.col : e.col - e.row) > 1) return false;
  return true;
}

inline bool is_sl2_irreducible(const CubeContext& ctx, const SubmoduleBasis& w) {
  return is_sl2_irreducible(go_sl2_structure(ctx), w);
}

// Tables for odd D = 2 Dq + 1 and endpoint r.
inline NLabel tabulated_plus_label(int Dq, int r) {
  if (r % 2 == 0) return Dq % 2 == 0 ? NLabel::Zero : NLabel::Z;
  return Dq % 2 == 0 ? NLabel::X : NLabel::Y;
}

inline NLabel tabulated_minus_label(int Dq, int r) {
  if (r % 2 == 0) return Dq % 2 == 0 ? NLabel::Y : NLabel::X;
  return Dq % 2 == 0 ? NLabel::Z : NLabel::Zero;
}

inline NLabel tabulated_quotient_label(int Dq, int r) {
  if (Dq % 2 == 0) return r % 2 == 0 ? NLabel::Zero : NLabel::X;
  return r % 2 == 0 ? NLabel::Z : NLabel::Y;
}

namespace detail {

inline SparseVector antipodal_image(const CubeContext& ctx, const SparseVector& v) {
  std::vector<std::pair<Index, GaussianRational>> es;
  for (const auto& [y, val] : v.entries()) es.push_back({ctx.antipode(y), val});
  return SparseVector::from_entries(v.dim(), std::move(es));
}

}  // namespace detail

// W∩V± = span{v_j ± A_D v_j}, j = 0..(d-1)/2.
inline std::pair<VectorBasis, VectorBasis> parity_bases(const CubeContext& ctx, const SubmoduleBasis& w) {
  if (w.diameter % 2 == 0) throw std::invalid_argument("parity split needs odd diameter");
  const Index n = ctx.vertex_count();
  VectorBasis plus{n, {}}, minus{n, {}};
  for (int j = 0; 2 * j < w.diameter; ++j) {
    const SparseVector& v = w.vectors[j];
    SparseVector a = detail::antipodal_image(ctx, v);
    plus.vectors.push_back(v + a);
    minus.vectors.push_back(v - a);
  }
  return {plus, minus};
}

// Even D: (W, B(D-2r)). Odd D: (W∩V+, AB(Dq-r, n+)) and (W∩V-, AB(Dq-r, n-)).
// Classification errors are thrown; table disagreements are reported through agrees().
inline std::vector<TypedPart> split_and_type(const CubeContext& ctx, const ModuleActionTriple& positive,
                                             const SubmoduleBasis& w) {
  std::vector<TypedPart> out;
  if (ctx.D() % 2 == 0) {
    TypedPart p{"", w.vectors, classify(restrict_triple(positive, w.vectors)), ModuleType::B(ctx.D() - 2 * w.endpoint)};
    out.push_back(std::move(p));
    return out;
  }
  const int Dq = (ctx.D() - 1) / 2;
  auto [plus, minus] = parity_bases(ctx, w);
  out.push_back({"+", plus, classify(restrict_triple(positive, plus)),
                 ModuleType::AB(Dq - w.endpoint, tabulated_plus_label(Dq, w.endpoint))});
  out.push_back({"-", minus, classify(restrict_triple(positive, minus)),
                 ModuleType::AB(Dq - w.endpoint, tabulated_minus_label(Dq, w.endpoint))});
  return out;
}

inline std::vector<TypedPart> split_and_type(const CubeContext& ctx, const SubmoduleBasis& w) {
  return split_and_type(ctx, positive_structure(ctx), w);
}

struct QuotientModule {
  SubmoduleBasis module;
  ModuleType computed;
  ModuleType tabulated;

  bool agrees() const { return computed == tabulated; }
};

// psi(W) for each parent module W; psi(W) = psi(W∩V+) is spanned by psi(v_0..v_{Dq-r}).
inline std::vector<QuotientModule> quotient_modules(const QuotientContext& q, const ModuleActionTriple& structure,
                                                    const std::vector<SubmoduleBasis>& parents) {
  const ExactMatrix psi = psi_matrix(q);
  const int Dq = q.half_diameter();
  std::vector<QuotientModule> out;
  Index total = 0;
  for (const auto& w : parents) {
    QuotientModule m;
    m.module.id = w.id;
    m.module.endpoint = w.endpoint;
    m.module.diameter = Dq - w.endpoint;
    m.module.index = w.index;
    m.module.vectors.ambient_dim = q.class_count();
    for (int j = 0; j <= m.module.diameter; ++j) {
      m.module.vectors.vectors.push_back(psi.apply(w.vectors[j]));
      m.module.slices.push_back(w.endpoint + j);
    }
    m.computed = classify(restrict_triple(structure, m.module.vectors));
    m.tabulated = ModuleType::AB(m.module.diameter, tabulated_quotient_label(Dq, w.endpoint));
    total += m.module.dim();
    out.push_back(std::move(m));
  }
  if (total != q.class_count())
    throw VerificationError("quotient module dimensions sum to " + std::to_string(total) + ", expected " +
                            std::to_string(q.class_count()));
  return out;
}

inline std::vector<QuotientModule> quotient_modules(const QuotientContext& q) {
  return quotient_modules(q, quotient_acsa_structure(q), decompose(q.parent()));
}

inline bool quotient_is_direct_sum(const QuotientContext& q, const std::vector<QuotientModule>& ms) {
  std::vector<std::vector<SparseVector>> by_slice(q.half_diameter() + 1);
  for (const auto& m : ms)
    for (std::size_t j = 0; j < m.module.dim(); ++j) by_slice.at(m.module.slices[j]).push_back(m.module.vectors[j]);
  Index covered = 0;
  for (const auto& vs : by_slice) {
    if (rank_of(vs, q.class_count()) != vs.size()) return false;
    covered += vs.size();
  }
  return covered == q.class_count();
}

inline nlohmann::json to_json(const SubmoduleBasis& w, const std::vector<TypedPart>& parts) {
  nlohmann::json j{{"id", w.id}, {"endpoint", w.endpoint}, {"diameter", w.diameter}, {"dim", w.dim()}};
  if (parts.size() == 1) {
    j["type"] = parts[0].computed.to_string();
    j["parity_split"] = nullptr;
  } else {
    j["type"] = nullptr;
    nlohmann::json split = nlohmann::json::array();
    for (const auto& p : parts)
      split.push_back({{"part", p.part},
                       {"dim", p.basis.size()},
                       {"type", p.computed.to_string()},
                       {"tabulated", p.tabulated.to_string()},
                       {"agrees", p.agrees()}});
    j["parity_split"] = split;
  }
  return j;
}

inline nlohmann::json to_json(const QuotientModule& m) {
  return {{"id", m.module.id},
          {"endpoint", m.module.endpoint},
          {"diameter", m.module.diameter},
          {"dim", m.module.dim()},
          {"type", m.computed.to_string()},
          {"tabulated", m.tabulated.to_string()},
          {"agrees", m.agrees()},
          {"parity_split", nullptr}};
}

}  // namespace cubeleonard
