#pragma once

#include "cubeleonard/acsa.hpp"
#include "cubeleonard/linalg.hpp"

#include <array>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cubeleonard {

struct Sl2Action {
  ExactMatrix x;
  ExactMatrix y;
  ExactMatrix z;

  Index dim() const { return x.rows(); }
};

struct Sl2Module {
  int d = 0;
  Sl2Action action;  // in the v-basis
  ExactMatrix w;     // column j is w_j in v-coordinates
};

// [X,Y]=2iZ, [Y,Z]=2iX, [Z,X]=2iY
inline RelationReport check_brackets(const Sl2Action& a) {
  const GaussianRational two_i(0L, 2L);
  struct Rel {
    const char* name;
    const ExactMatrix* p;
    const ExactMatrix* q;
    const ExactMatrix* r;
  };
  const Rel rels[] = {{"[X,Y]=2iZ", &a.x, &a.y, &a.z}, {"[Y,Z]=2iX", &a.y, &a.z, &a.x}, {"[Z,X]=2iY", &a.z, &a.x, &a.y}};
  for (const auto& r : rels) {
    ExactMatrix diff = ExactMatrix::linear_combination(commutator(*r.p, *r.q), -two_i, *r.r);
    if (!diff.is_zero()) {
      auto e = diff.entries().front();
      return {false, r.name, e.row, e.col, e.value};
    }
  }
  return {};
}

inline Sl2Module build_irreducible_sl2(int d) {
  if (d < 0) throw std::invalid_argument("negative diameter");
  const Index n = static_cast<Index>(d) + 1;
  const GaussianRational i = GaussianRational::i();
  std::vector<ExactMatrix::Entry> xs, ys, zs;
  for (int k = 0; k <= d; ++k) {
    if (d - 2 * k != 0) ys.push_back({Index(k), Index(k), GaussianRational(d - 2 * k)});
    if (k > 0) {
      xs.push_back({Index(k - 1), Index(k), GaussianRational(d - k + 1)});
      zs.push_back({Index(k - 1), Index(k), GaussianRational(d - k + 1) * i});
    }
    if (k < d) {
      xs.push_back({Index(k + 1), Index(k), GaussianRational(k + 1)});
      zs.push_back({Index(k + 1), Index(k), GaussianRational(-(k + 1)) * i});
    }
  }
  Sl2Module m;
  m.d = d;
  m.action = {ExactMatrix::from_entries(n, n, xs), ExactMatrix::from_entries(n, n, ys),
              ExactMatrix::from_entries(n, n, zs)};
  auto rep = check_brackets(m.action);
  if (!rep.ok) throw RelationError(rep.message());

  // w_0 spans ker(Z - d); (Y + iX)/2 sends w_j to (j+1) w_{j+1}.
  auto top = kernel_basis(ExactMatrix::linear_combination(m.action.z, -d, ExactMatrix::identity(n)));
  if (top.size() != 1) throw RelationError("Z has no simple top eigenvalue");
  ExactMatrix raise = GaussianRational::fraction(1, 2) * (m.action.y + i * m.action.x);
  std::vector<SparseVector> cols{top[0]};
  for (int j = 1; j <= d; ++j) {
    SparseVector next = raise.apply(cols.back());
    next *= GaussianRational::fraction(1, j);
    cols.push_back(std::move(next));
  }
  m.w = ExactMatrix::from_columns(n, cols);
  return m;
}

// h = exp((iY-X)/2) exp((iY+X)/2) exp((iY-X)/2)
inline std::pair<ExactMatrix, ExactMatrix> h_factors(const Sl2Action& a) {
  const GaussianRational half_i(mpq_class(0), mpq_class(1, 2));
  const GaussianRational half = GaussianRational::fraction(1, 2);
  ExactMatrix iy = half_i * a.y;
  ExactMatrix hx = half * a.x;
  return {iy - hx, iy + hx};
}

inline ExactMatrix build_h(const Sl2Action& a, int nilpotency_bound) {
  auto [n1, n2] = h_factors(a);
  ExactMatrix e1 = exp_nilpotent(n1, nilpotency_bound);
  ExactMatrix e2 = exp_nilpotent(n2, nilpotency_bound);
  return e1 * e2 * e1;
}

inline SparseVector apply_h(const Sl2Action& a, const SparseVector& v, int nilpotency_bound) {
  auto [n1, n2] = h_factors(a);
  SparseVector u = exp_nilpotent_apply(n1, v, nilpotency_bound);
  u = exp_nilpotent_apply(n2, u, nilpotency_bound);
  return exp_nilpotent_apply(n1, u, nilpotency_bound);
}

// ad(u) on the ordered basis (X,Y,Z); column j holds the coordinates of [u, basis_j].
inline ExactMatrix ad_matrix(const GaussianRational& cx, const GaussianRational& cy, const GaussianRational& cz) {
  const GaussianRational t(0L, 2L);
  std::vector<ExactMatrix::Entry> es;
  // [X,Y] = 2iZ, [Y,Z] = 2iX, [Z,X] = 2iY
  es.push_back({2, 1, cx * t});
  es.push_back({1, 2, -cx * t});
  es.push_back({2, 0, -cy * t});
  es.push_back({0, 2, cy * t});
  es.push_back({1, 0, cz * t});
  es.push_back({0, 1, -cz * t});
  return ExactMatrix::from_entries(3, 3, es);
}

// exp ad((iY-X)/2) and exp ad((iY+X)/2), computed from the brackets.
inline std::pair<ExactMatrix, ExactMatrix> exp_ad_matrices() {
  const GaussianRational half = GaussianRational::fraction(1, 2);
  const GaussianRational half_i(mpq_class(0), mpq_class(1, 2));
  ExactMatrix a1 = ad_matrix(-half, half_i, 0);
  ExactMatrix a2 = ad_matrix(half, half_i, 0);
  return {exp_nilpotent(a1, 3), exp_nilpotent(a2, 3)};
}

// The two 3x3 matrices in their printed form.
inline std::pair<ExactMatrix, ExactMatrix> printed_exp_ad_matrices() {
  const GaussianRational i = GaussianRational::i();
  const GaussianRational h = GaussianRational::fraction(1, 2);
  ExactMatrix first = ExactMatrix::from_dense({{h, h * i, -1}, {h * i, GaussianRational::fraction(3, 2), i}, {1, -i, 1}});
  ExactMatrix second =
      ExactMatrix::from_dense({{h, -h * i, -1}, {-h * i, GaussianRational::fraction(3, 2), -i}, {1, i, 1}});
  return {first, second};
}

// 1 on odd-dimensional irreducible blocks, -i on even-dimensional ones.
// The blocks are the consecutive coordinate ranges of the decomposition basis.
inline std::vector<GaussianRational> k_block_scalars(const std::vector<int>& irreducible_dims) {
  std::vector<GaussianRational> diag;
  for (int dim : irreducible_dims) {
    if (dim <= 0) throw DimensionError("irreducible dimension must be positive");
    GaussianRational c = (dim % 2 == 1) ? GaussianRational(1) : GaussianRational(0L, -1L);
    diag.insert(diag.end(), static_cast<std::size_t>(dim), c);
  }
  return diag;
}

inline ExactMatrix build_k(const Sl2Action& a, const std::vector<int>& irreducible_dims) {
  auto diag = k_block_scalars(irreducible_dims);
  if (diag.size() != a.dim())
    throw DimensionError("irreducible dimensions sum to " + std::to_string(diag.size()) + ", module has dimension " +
                         std::to_string(a.dim()));
  return ExactMatrix::diagonal(diag);
}

// k in ambient coordinates, given the decomposition basis (irreducibles in order).
inline ExactMatrix build_k(const Sl2Action& a, const std::vector<int>& irreducible_dims, const VectorBasis& decomposition) {
  ExactMatrix blocks = build_k(a, irreducible_dims);
  if (decomposition.size() != a.dim() || decomposition.ambient_dim != a.dim())
    throw DimensionError("decomposition basis does not span the module");
  BasisSolver solver(decomposition);
  ExactMatrix p = ExactMatrix::from_columns(a.dim(), decomposition.vectors);
  std::vector<SparseVector> inv_cols;
  for (Index j = 0; j < a.dim(); ++j) inv_cols.push_back(*solver.coordinates(SparseVector::unit(a.dim(), j)));
  return p * blocks * ExactMatrix::from_columns(a.dim(), inv_cols);
}

struct SkewReport {
  bool involution = false;
  bool anticommutes_x = false;
  bool commutes_y = false;
  bool anticommutes_z = false;

  bool ok() const { return involution && anticommutes_x && commutes_y && anticommutes_z; }
};

inline SkewReport check_skew(const Sl2Action& a, const ExactMatrix& s) {
  SkewReport r;
  r.involution = s * s == ExactMatrix::identity(a.dim());
  r.anticommutes_x = anticommutator(s, a.x).is_zero();
  r.commutes_y = commutator(s, a.y).is_zero();
  r.anticommutes_z = anticommutator(s, a.z).is_zero();
  return r;
}

// First: (X, sY, -siZ). Second: (X, -sY, siZ).
inline std::pair<ModuleActionTriple, ModuleActionTriple> induce_acsa_structures(const Sl2Action& a, const ExactMatrix& s) {
  const GaussianRational i = GaussianRational::i();
  ExactMatrix sy = s * a.y;
  ExactMatrix siz = i * (s * a.z);
  ModuleActionTriple first{a.x, sy, -siz};
  ModuleActionTriple second{a.x, -sy, siz};
  for (const auto* m : {&first, &second}) {
    auto rep = check_relations(*m);
    if (!rep.ok) throw RelationError("induced structure fails: " + rep.message());
  }
  return {first, second};
}

inline ExactMatrix skew_operator(const Sl2Module& m) {
  const Sl2Action& a = m.action;
  return build_h(a, m.d + 1) * build_k(a, {m.d + 1});
}

struct SplitPart {
  VectorBasis basis;
  ModuleType computed;
  ModuleType tabulated;

  bool agrees() const { return computed == tabulated; }
};

// Types printed for odd diameter 2*delta+1: structure 1 -> (AB(delta,0), AB(delta,y)),
// structure 2 -> (AB(delta,z), AB(delta,x)).
inline std::array<ModuleType, 2> tabulated_split_types(int delta, int structure_index) {
  if (structure_index == 1) return {ModuleType::AB(delta, NLabel::Zero), ModuleType::AB(delta, NLabel::Y)};
  return {ModuleType::AB(delta, NLabel::Z), ModuleType::AB(delta, NLabel::X)};
}

// V+ = span{v_i + v_{d-i}}, V- = span{(-1)^i (v_i - v_{d-i})}, i = 0..delta.
inline std::array<VectorBasis, 2> odd_split_bases(int d) {
  if (d % 2 == 0) throw std::invalid_argument("split_odd needs odd diameter");
  const int delta = (d - 1) / 2;
  const Index n = static_cast<Index>(d) + 1;
  VectorBasis plus{n, {}}, minus{n, {}};
  for (int k = 0; k <= delta; ++k) {
    plus.vectors.push_back(SparseVector::from_entries(n, {{Index(k), 1}, {Index(d - k), 1}}));
    GaussianRational sg(sign_power(k));
    minus.vectors.push_back(SparseVector::from_entries(n, {{Index(k), sg}, {Index(d - k), -sg}}));
  }
  return {plus, minus};
}

inline std::array<SplitPart, 2> split_odd(const Sl2Module& m, int structure_index) {
  if (structure_index != 1 && structure_index != 2) throw std::invalid_argument("structure index must be 1 or 2");
  if (m.d % 2 == 0) throw std::invalid_argument("split_odd needs odd diameter");
  const int delta = (m.d - 1) / 2;
  auto structures = induce_acsa_structures(m.action, skew_operator(m));
  const ModuleActionTriple& t = structure_index == 1 ? structures.first : structures.second;
  auto bases = odd_split_bases(m.d);
  auto table = tabulated_split_types(delta, structure_index);
  std::array<SplitPart, 2> out;
  for (int k = 0; k < 2; ++k) {
    out[k].basis = bases[k];
    out[k].computed = classify(restrict_triple(t, bases[k]));
    out[k].tabulated = table[k];
  }
  return out;
}

}  // namespace cubeleonard
