#pragma once

#include "cubeleonard/acsa.hpp"
#include "cubeleonard/linalg.hpp"
#include "cubeleonard/sl2rep.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace cubeleonard {

class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Q_D with vertex ids 0..2^D-1 (bit j = coordinate j) and base vertex 0.
class CubeContext {
 public:
  explicit CubeContext(int D) : D_(D) {
    if (D < 1 || D > 24) throw std::invalid_argument("cube dimension out of range: " + std::to_string(D));
    n_ = Index{1} << D;
    slices_.resize(D + 1);
    position_.resize(n_);
    for (Index v = 0; v < n_; ++v) {
      auto& s = slices_[weight(v)];
      position_[v] = s.size();
      s.push_back(v);
    }
  }

  int D() const { return D_; }
  Index vertex_count() const { return n_; }
  Index base_vertex() const { return 0; }
  Index all_ones() const { return n_ - 1; }

  static int weight(Index v) { return std::popcount(v); }
  static int distance(Index a, Index b) { return std::popcount(a ^ b); }
  Index antipode(Index v) const { return v ^ all_ones(); }

  const std::vector<Index>& slice(int i) const { return slices_.at(i); }
  Index position_in_slice(Index v) const { return position_[v]; }

  // theta_i = D - 2i
  long eigenvalue(int i) const { return D_ - 2L * i; }

  void check_index(int i) const {
    if (i < 0 || i > D_) throw std::out_of_range("index " + std::to_string(i) + " outside 0.." + std::to_string(D_));
  }

 private:
  int D_;
  Index n_;
  std::vector<std::vector<Index>> slices_;
  std::vector<Index> position_;
};

inline ExactMatrix distance_matrix(const CubeContext& ctx, int i) {
  ctx.check_index(i);
  const Index n = ctx.vertex_count();
  const auto& masks = ctx.slice(i);
  std::vector<ExactMatrix::Entry> es;
  es.reserve(n * masks.size());
  for (Index v = 0; v < n; ++v)
    for (Index m : masks) es.push_back({v, v ^ m, GaussianRational(1)});
  return ExactMatrix::from_entries(n, n, std::move(es));
}

inline ExactMatrix adjacency(const CubeContext& ctx) { return distance_matrix(ctx, 1); }

namespace detail {

inline GaussianRational interpolation_denominator(const CubeContext& ctx, int i) {
  GaussianRational den(1);
  for (int j = 0; j <= ctx.D(); ++j)
    if (j != i) den *= GaussianRational(ctx.eigenvalue(i) - ctx.eigenvalue(j));
  return den;
}

}  // namespace detail

// E_i = prod_{j != i} (A - theta_j I) / (theta_i - theta_j)
inline ExactMatrix primitive_idempotent(const CubeContext& ctx, int i) {
  ctx.check_index(i);
  const ExactMatrix a = adjacency(ctx);
  const Index n = ctx.vertex_count();
  ExactMatrix p = ExactMatrix::identity(n);
  for (int j = 0; j <= ctx.D(); ++j) {
    if (j == i) continue;
    p = p * ExactMatrix::linear_combination(a, GaussianRational(-ctx.eigenvalue(j)), ExactMatrix::identity(n));
  }
  p *= detail::interpolation_denominator(ctx, i).inverse();
  return p;
}

inline SparseVector apply_idempotent(const CubeContext& ctx, int i, const SparseVector& v) {
  ctx.check_index(i);
  const ExactMatrix a = adjacency(ctx);
  SparseVector u = v;
  for (int j = 0; j <= ctx.D(); ++j) {
    if (j == i) continue;
    SparseVector w = a.apply(u);
    w.axpy(GaussianRational(-ctx.eigenvalue(j)), u);
    u = std::move(w);
  }
  u *= detail::interpolation_denominator(ctx, i).inverse();
  return u;
}

inline ExactMatrix dual_idempotent(const CubeContext& ctx, int i) {
  ctx.check_index(i);
  std::vector<GaussianRational> d(ctx.vertex_count());
  for (Index v : ctx.slice(i)) d[v] = 1;
  return ExactMatrix::diagonal(d);
}

// (A*_i)_{yy} = |X| (E_i)_{xy} with x the base vertex.
inline ExactMatrix dual_distance_matrix(const CubeContext& ctx, int i) {
  ctx.check_index(i);
  const Index n = ctx.vertex_count();
  SparseVector row = apply_idempotent(ctx, i, SparseVector::unit(n, ctx.base_vertex()));
  std::vector<GaussianRational> d(n);
  for (const auto& [y, v] : row.entries()) d[y] = v * GaussianRational(static_cast<long>(n));
  return ExactMatrix::diagonal(d);
}

inline ExactMatrix dual_adjacency(const CubeContext& ctx) { return dual_distance_matrix(ctx, 1); }

// B = A*_{D-1}
inline ExactMatrix second_dual_adjacency(const CubeContext& ctx) { return dual_distance_matrix(ctx, ctx.D() - 1); }

// X = A, Y = A*, Z = (XY - YX)/(2i)
inline Sl2Action go_sl2_structure(const CubeContext& ctx) {
  ExactMatrix x = adjacency(ctx);
  ExactMatrix y = dual_adjacency(ctx);
  ExactMatrix z = GaussianRational(0L, 2L).inverse() * commutator(x, y);
  Sl2Action a{x, y, z};
  auto rep = check_brackets(a);
  if (!rep.ok) throw VerificationError("sl2 structure on Q_" + std::to_string(ctx.D()) + ": " + rep.message());
  return a;
}

// x = A, y = sign * A*_{D-1}, z = (xy + yx)/2
inline ModuleActionTriple acsa_structure(const CubeContext& ctx, int sign) {
  ExactMatrix x = adjacency(ctx);
  ExactMatrix y = GaussianRational(sign) * second_dual_adjacency(ctx);
  ExactMatrix z = GaussianRational::fraction(1, 2) * anticommutator(x, y);
  ModuleActionTriple m{x, y, z};
  auto rep = check_relations(m);
  if (!rep.ok) throw VerificationError("A-structure on Q_" + std::to_string(ctx.D()) + ": " + rep.message());
  return m;
}

inline ModuleActionTriple positive_structure(const CubeContext& ctx) { return acsa_structure(ctx, 1); }
inline ModuleActionTriple negative_structure(const CubeContext& ctx) { return acsa_structure(ctx, -1); }

// V+ = span{e_y + e_y'}, V- = span{e_y - e_y'} over y < y'.
inline std::pair<VectorBasis, VectorBasis> v_plus_minus(const CubeContext& ctx) {
  const Index n = ctx.vertex_count();
  VectorBasis plus{n, {}}, minus{n, {}};
  for (Index y = 0; y < n; ++y) {
    Index yp = ctx.antipode(y);
    if (y > yp) continue;
    plus.vectors.push_back(SparseVector::from_entries(n, {{y, 1}, {yp, 1}}));
    minus.vectors.push_back(SparseVector::from_entries(n, {{y, 1}, {yp, -1}}));
  }
  return {plus, minus};
}

// Dimensions of the sl2-irreducibles: D-2r+1 with multiplicity dim E*_r V - dim E*_{r-1} V.
inline std::vector<int> irreducible_dimensions(const CubeContext& ctx) {
  std::vector<int> dims;
  for (int r = 0; 2 * r <= ctx.D(); ++r) {
    long mult = static_cast<long>(ctx.slice(r).size()) - (r > 0 ? static_cast<long>(ctx.slice(r - 1).size()) : 0L);
    for (long k = 0; k < mult; ++k) dims.push_back(ctx.D() - 2 * r + 1);
  }
  return dims;
}

// k acts by one scalar on V since every irreducible has dimension of parity D+1.
inline GaussianRational k_scalar(const CubeContext& ctx) {
  auto diag = k_block_scalars(irreducible_dimensions(ctx));
  if (diag.size() != ctx.vertex_count()) throw VerificationError("irreducible dimensions do not sum to 2^D");
  for (const auto& c : diag)
    if (c != diag.front()) throw VerificationError("k is not scalar on the cube");
  return diag.front();
}

inline ExactMatrix h_operator(const CubeContext& ctx) { return build_h(go_sl2_structure(ctx), ctx.D() + 1); }

// (-1)^{floor(D/2) + weight(y)}
inline ExactMatrix s_closed_form(const CubeContext& ctx) {
  std::vector<GaussianRational> d(ctx.vertex_count());
  for (Index y = 0; y < ctx.vertex_count(); ++y) d[y] = sign_power(ctx.D() / 2 + CubeContext::weight(y));
  return ExactMatrix::diagonal(d);
}

// Vertices at which s is cross-checked against h k when the dense product is too large.
inline std::vector<Index> s_sample_vertices(const CubeContext& ctx, std::uint64_t seed, int extra = 8) {
  std::vector<Index> out;
  for (int i = 0; i <= ctx.D(); ++i) out.push_back(ctx.slice(i).front());
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Index> pick(0, ctx.vertex_count() - 1);
  for (int k = 0; k < extra; ++k) out.push_back(pick(rng));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// The diagonal s, checked against h k: densely for D <= dense_cap, else on sampled vertices.
inline ExactMatrix s_diagonal(const CubeContext& ctx, int dense_cap = 8, std::uint64_t seed = 1) {
  ExactMatrix s = s_closed_form(ctx);
  const GaussianRational k = k_scalar(ctx);
  if (ctx.D() <= dense_cap) {
    if (k * h_operator(ctx) != s) throw VerificationError("s = hk disagrees with the diagonal form");
    return s;
  }
  const Sl2Action go = go_sl2_structure(ctx);
  for (Index y : s_sample_vertices(ctx, seed)) {
    SparseVector col = k * apply_h(go, SparseVector::unit(ctx.vertex_count(), y), ctx.D() + 1);
    if (col != s.column(y))
      throw VerificationError("s = hk disagrees with the diagonal form at vertex " + std::to_string(y));
  }
  return s;
}

// Support equals the edge set and the edge entry is (-1)^{min weight}.
inline std::string weighted_adjacency_violation(const CubeContext& ctx, const ExactMatrix& c) {
  const Index n = ctx.vertex_count();
  if (c.rows() != n || c.cols() != n) return "wrong dimensions";
  if (c.nnz() != n * static_cast<Index>(ctx.D())) return "support size differs from edge count";
  for (auto e : c.entries()) {
    if (CubeContext::distance(e.row, e.col) != 1)
      return "nonzero off the edge set at (" + std::to_string(e.row) + "," + std::to_string(e.col) + ")";
    int w = std::min(CubeContext::weight(e.row), CubeContext::weight(e.col));
    if (e.value != GaussianRational(sign_power(w)))
      return "entry at (" + std::to_string(e.row) + "," + std::to_string(e.col) + ") is " + e.value.to_string();
  }
  return {};
}

}  // namespace cubeleonard
