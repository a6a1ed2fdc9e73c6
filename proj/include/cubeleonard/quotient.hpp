#pragma once

#include "cubeleonard/acsa.hpp"
#include "cubeleonard/hypercube.hpp"
#include "cubeleonard/linalg.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <string>
#include <vector>

namespace cubeleonard {

// Antipodal quotient of Q_D for odd D. Class index = representative = min(y, y').
class QuotientContext {
 public:
  explicit QuotientContext(int D) : parent_(D) {
    if (D % 2 == 0) throw std::invalid_argument("antipodal quotient is built for odd D only, got " + std::to_string(D));
  }

  const CubeContext& parent() const { return parent_; }
  int D() const { return parent_.D(); }
  int half_diameter() const { return (parent_.D() - 1) / 2; }
  Index class_count() const { return parent_.vertex_count() / 2; }

  Index class_of(Index y) const { return std::min(y, parent_.antipode(y)); }
  Index representative(Index c) const { return c; }
  Index partner(Index c) const { return parent_.antipode(c); }

  int quotient_distance_from_base(Index c) const {
    int w = CubeContext::weight(c);
    return std::min(w, D() - w);
  }

 private:
  CubeContext parent_;
};

inline ExactMatrix psi_matrix(const QuotientContext& q) {
  std::vector<ExactMatrix::Entry> es;
  for (Index y = 0; y < q.parent().vertex_count(); ++y) es.push_back({q.class_of(y), y, GaussianRational(1)});
  return ExactMatrix::from_entries(q.class_count(), q.parent().vertex_count(), std::move(es));
}

// Classes u, v adjacent iff some y in u and z in v are adjacent in Q_D.
inline ExactMatrix quotient_adjacency(const QuotientContext& q) {
  const ExactMatrix a = adjacency(q.parent());
  std::vector<ExactMatrix::Entry> es;
  for (Index c = 0; c < q.class_count(); ++c) {
    std::vector<Index> nbrs;
    for (Index y : {q.representative(c), q.partner(c)})
      for (std::size_t k = a.row_begin(y); k < a.row_end(y); ++k) nbrs.push_back(q.class_of(a.col_at(k)));
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    for (Index u : nbrs) es.push_back({c, u, GaussianRational(1)});
  }
  return ExactMatrix::from_entries(q.class_count(), q.class_count(), std::move(es));
}

// phi o M o phi^{-1}, where phi = psi restricted to V+ and phi^{-1}(e_[y]) = (e_y + e_y')/2.
inline ExactMatrix transport(const QuotientContext& q, const ExactMatrix& m) {
  const Index n = q.parent().vertex_count();
  if (m.rows() != n || m.cols() != n) throw DimensionError("transport needs a 2^D square matrix");
  const ExactMatrix psi = psi_matrix(q);
  const GaussianRational half = GaussianRational::fraction(1, 2);
  std::vector<SparseVector> cols;
  for (Index c = 0; c < q.class_count(); ++c) {
    SparseVector u = SparseVector::from_entries(n, {{q.representative(c), half}, {q.partner(c), half}});
    SparseVector mu = m.apply(u);
    for (const auto& [y, v] : mu.entries())
      if (mu.at(q.parent().antipode(y)) != v)
        throw NotInvariantError(c, "matrix does not preserve V+ (class " + std::to_string(c) + ")");
    cols.push_back(psi.apply(mu));
  }
  return ExactMatrix::from_columns(q.class_count(), cols);
}

// diag((-1)^i (D - 2i)), i the quotient distance from the base class.
inline ExactMatrix quotient_dual_adjacency_closed_form(const QuotientContext& q) {
  std::vector<GaussianRational> d(q.class_count());
  for (Index c = 0; c < q.class_count(); ++c) {
    int i = q.quotient_distance_from_base(c);
    d[c] = sign_power(i) * (q.D() - 2 * i);
  }
  return ExactMatrix::diagonal(d);
}

inline ExactMatrix quotient_dual_adjacency(const QuotientContext& q) {
  ExactMatrix b = transport(q, second_dual_adjacency(q.parent()));
  if (b != quotient_dual_adjacency_closed_form(q))
    throw VerificationError("transported dual adjacency disagrees with the diagonal form");
  return b;
}

// x = A~, y = B~, z = C~ = (xy + yx)/2, with C~ checked against phi o C o phi^{-1}.
inline ModuleActionTriple quotient_acsa_structure(const QuotientContext& q) {
  ExactMatrix x = quotient_adjacency(q);
  ExactMatrix y = quotient_dual_adjacency(q);
  ExactMatrix z = GaussianRational::fraction(1, 2) * anticommutator(x, y);
  ModuleActionTriple m{x, y, z};
  auto rep = check_relations(m);
  if (!rep.ok) throw VerificationError("quotient A-structure: " + rep.message());
  if (z != transport(q, positive_structure(q.parent()).z))
    throw VerificationError("C~ differs from the transported C");
  return m;
}

// Support equals the quotient edge set and the entry is (-1)^{min quotient distance}.
inline std::string quotient_weighted_adjacency_violation(const QuotientContext& q, const ExactMatrix& c) {
  ExactMatrix a = quotient_adjacency(q);
  if (c.rows() != a.rows() || c.nnz() != a.nnz()) return "support size differs from edge count";
  for (auto e : c.entries()) {
    if (!a.find(e.row, e.col)) return "nonzero off the edge set at (" + std::to_string(e.row) + "," + std::to_string(e.col) + ")";
    int w = std::min(q.quotient_distance_from_base(e.row), q.quotient_distance_from_base(e.col));
    if (e.value != GaussianRational(sign_power(w)))
      return "entry at (" + std::to_string(e.row) + "," + std::to_string(e.col) + ") is " + e.value.to_string();
  }
  return {};
}

struct IntersectionNumbers {
  bool distance_regular = false;
  int diameter = 0;
  std::vector<long> a, b, c, k;
};

// Brute force over every base vertex; loops are ignored.
inline IntersectionNumbers intersection_numbers(const ExactMatrix& adj) {
  const Index n = adj.rows();
  IntersectionNumbers out;
  bool first = true;
  out.distance_regular = true;
  for (Index base = 0; base < n; ++base) {
    std::vector<int> dist(n, -1);
    std::deque<Index> queue{base};
    dist[base] = 0;
    while (!queue.empty()) {
      Index u = queue.front();
      queue.pop_front();
      for (std::size_t k = adj.row_begin(u); k < adj.row_end(u); ++k) {
        Index w = adj.col_at(k);
        if (dist[w] < 0) {
          dist[w] = dist[u] + 1;
          queue.push_back(w);
        }
      }
    }
    int diam = *std::max_element(dist.begin(), dist.end());
    if (diam < 0 || std::count(dist.begin(), dist.end(), -1) > 0) return {};
    std::vector<long> a(diam + 1, -1), b(diam + 1, -1), c(diam + 1, -1), k(diam + 1, 0);
    bool ok = true;
    for (Index u = 0; u < n; ++u) {
      long ca = 0, cb = 0, cc = 0;
      int du = dist[u];
      ++k[du];
      for (std::size_t e = adj.row_begin(u); e < adj.row_end(u); ++e) {
        Index w = adj.col_at(e);
        if (w == u) continue;
        if (dist[w] == du) ++ca;
        else if (dist[w] == du + 1) ++cb;
        else if (dist[w] == du - 1) ++cc;
      }
      auto set = [&](std::vector<long>& arr, long v) {
        if (arr[du] < 0) arr[du] = v;
        else if (arr[du] != v) ok = false;
      };
      set(a, ca);
      set(b, cb);
      set(c, cc);
    }
    if (!ok) out.distance_regular = false;
    if (first) {
      out.diameter = diam;
      out.a = a;
      out.b = b;
      out.c = c;
      out.k = k;
      first = false;
    } else if (a != out.a || b != out.b || c != out.c || k != out.k) {
      out.distance_regular = false;
    }
  }
  return out;
}

// Printed values for odd D: a_i = 0, b_i = D - i, c_i = i, k_i = C(D,i) below the diameter,
// a = half+1, b = 0, c = half, k = C(D, half) at the diameter.
inline IntersectionNumbers tabulated_quotient_intersection_numbers(int D) {
  const int h = (D - 1) / 2;
  IntersectionNumbers t;
  t.distance_regular = true;
  t.diameter = h;
  for (int i = 0; i <= h; ++i) {
    mpz_class kb;
    mpz_bin_uiui(kb.get_mpz_t(), static_cast<unsigned long>(D), static_cast<unsigned long>(i));
    t.k.push_back(kb.get_si());
    if (i < h) {
      t.a.push_back(0);
      t.b.push_back(D - i);
      t.c.push_back(i);
    } else {
      t.a.push_back(h + 1);
      t.b.push_back(0);
      t.c.push_back(h);
    }
  }
  return t;
}

}  // namespace cubeleonard
