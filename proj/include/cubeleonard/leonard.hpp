#pragma once

#include "cubeleonard/acsa.hpp"
#include "cubeleonard/linalg.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace cubeleonard {

class LeonardError : public std::runtime_error {
 public:
  enum class Kind { RepeatedEigenvalue, EigenvaluesNotExhausted, NotAPath, ZeroAdjacentBlock, NotProportional };

  LeonardError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct Eigenpair {
  long value;
  SparseVector vector;
};

// Integer eigenvalues in [-bound, bound], ascending, each of multiplicity one.
inline std::vector<Eigenpair> eigenstructure(const ExactMatrix& m, long bound) {
  if (m.rows() != m.cols()) throw DimensionError("eigenstructure needs a square matrix");
  const Index n = m.rows();
  std::vector<Eigenpair> out;
  for (long theta = -bound; theta <= bound && out.size() < n; ++theta) {
    auto k = kernel_basis(ExactMatrix::linear_combination(m, -theta, ExactMatrix::identity(n)));
    if (k.size() > 1)
      throw LeonardError(LeonardError::Kind::RepeatedEigenvalue,
                         "eigenvalue " + std::to_string(theta) + " has multiplicity " + std::to_string(k.size()));
    if (k.size() == 1) out.push_back({theta, k[0]});
  }
  if (out.size() != n)
    throw LeonardError(LeonardError::Kind::EigenvaluesNotExhausted,
                       "found " + std::to_string(out.size()) + " of " + std::to_string(n) + " eigenvalues within bound " +
                           std::to_string(bound));
  return out;
}

inline long eigenvalue_bound(Index dim) { return 2 * static_cast<long>(dim) + 1; }

struct StandardOrdering {
  std::vector<long> values;
  VectorBasis basis;
  // The two companion matrices written in the ordered eigenbasis.
  std::array<ExactMatrix, 2> companions;
};

namespace detail {

inline bool irreducible_tridiagonal(const ExactMatrix& m) {
  for (auto e : m.entries())
    if ((e.row > e.col ? e.row - e.col : e.col - e.row) > 1) return false;
  for (Index i = 0; i + 1 < m.rows(); ++i)
    if (!m.find(i, i + 1) || !m.find(i + 1, i)) return false;
  return true;
}

}  // namespace detail

// Orders the eigenbasis of the target so that both companions become irreducible tridiagonal.
inline StandardOrdering standard_ordering(const std::vector<Eigenpair>& target, const ExactMatrix& first,
                                          const ExactMatrix& second) {
  const Index n = target.size();
  if (n == 0) throw DimensionError("empty eigenbasis");
  VectorBasis eig{target.front().vector.dim(), {}};
  for (const auto& p : target) eig.vectors.push_back(p.vector);
  BasisSolver solver(eig);
  const ExactMatrix r1 = restrict_to(first, eig, solver), r2 = restrict_to(second, eig, solver);

  std::vector<std::vector<Index>> adj(n);
  auto link = [&](Index a, Index b) {
    if (a == b) return;
    for (Index c : adj[a])
      if (c == b) return;
    adj[a].push_back(b);
    adj[b].push_back(a);
  };
  for (const ExactMatrix* m : {&r1, &r2})
    for (auto e : m->entries()) link(e.row, e.col);

  std::vector<Index> order;
  if (n == 1) {
    order.push_back(0);
  } else {
    std::vector<Index> ends;
    for (Index v = 0; v < n; ++v) {
      if (adj[v].size() > 2 || adj[v].empty())
        throw LeonardError(LeonardError::Kind::NotAPath, "support graph is not a path (eigenvalue " +
                                                             std::to_string(target[v].value) + " has degree " +
                                                             std::to_string(adj[v].size()) + ")");
      if (adj[v].size() == 1) ends.push_back(v);
    }
    if (ends.size() != 2) throw LeonardError(LeonardError::Kind::NotAPath, "support graph is not a path");
    Index start = target[ends[0]].value >= target[ends[1]].value ? ends[0] : ends[1];
    Index prev = n, cur = start;
    while (true) {
      order.push_back(cur);
      Index next = n;
      for (Index w : adj[cur])
        if (w != prev) next = w;
      if (next == n) break;
      prev = cur;
      cur = next;
    }
    if (order.size() != n) throw LeonardError(LeonardError::Kind::NotAPath, "support graph is disconnected");
  }

  StandardOrdering out;
  out.basis.ambient_dim = eig.ambient_dim;
  for (Index k : order) {
    out.values.push_back(target[k].value);
    out.basis.vectors.push_back(target[k].vector);
  }
  BasisSolver ordered(out.basis);
  out.companions = {restrict_to(first, out.basis, ordered), restrict_to(second, out.basis, ordered)};
  for (int k = 0; k < 2; ++k)
    if (!detail::irreducible_tridiagonal(out.companions[k]))
      throw LeonardError(LeonardError::Kind::ZeroAdjacentBlock,
                         "companion " + std::to_string(k) + " has a zero adjacent block in the standard order");
  return out;
}

enum class Shape { Bipartite, AlmostBipartite, Neither };

inline const char* to_string(Shape s) {
  switch (s) {
    case Shape::Bipartite: return "bipartite";
    case Shape::AlmostBipartite: return "almost-bipartite";
    default: return "neither";
  }
}

inline Shape shape_of(const ExactMatrix& tridiagonal) {
  const Index n = tridiagonal.rows();
  for (Index i = 1; i + 1 < n; ++i)
    if (tridiagonal.find(i, i)) return Shape::Neither;
  const bool first = tridiagonal.find(0, 0) != nullptr;
  const bool last = n > 1 && tridiagonal.find(n - 1, n - 1) != nullptr;
  if (!first && !last) return Shape::Bipartite;
  if (n > 1 && first != last) return Shape::AlmostBipartite;
  return Shape::Neither;
}

// (theta_{i-2} - theta_{i+1}) / (theta_{i-1} - theta_i) = -1 for 2 <= i <= d-1.
inline bool bannai_ito_check(const std::vector<long>& theta) {
  const long d = static_cast<long>(theta.size()) - 1;
  for (long i = 2; i <= d - 1; ++i) {
    long den = theta[i - 1] - theta[i];
    if (den == 0) throw ArithmeticError("repeated eigenvalue in ordering");
    if (theta[i - 2] - theta[i + 1] != -den) return false;
  }
  return true;
}

namespace detail {

// The scalar c with lhs = c * rhs, or nullopt.
inline std::optional<GaussianRational> proportion(const ExactMatrix& lhs, const ExactMatrix& rhs) {
  if (rhs.is_zero()) return std::nullopt;
  auto e = rhs.entries().front();
  const GaussianRational* l = lhs.find(e.row, e.col);
  GaussianRational c = l ? *l / e.value : GaussianRational(0);
  if (lhs != c * rhs) return std::nullopt;
  return c;
}

}  // namespace detail

// (nu, nu*, nu^eps) with A*A^e + A^eA* = nu A, A^eA + AA^e = nu* A*, AA* + A*A = nu^e A^e.
inline std::array<GaussianRational, 3> nu_scalars(const ExactMatrix& a, const ExactMatrix& a_star,
                                                  const ExactMatrix& a_eps) {
  const char* names[] = {"nu", "nu*", "nu^eps"};
  const ExactMatrix lhs[] = {anticommutator(a_star, a_eps), anticommutator(a_eps, a), anticommutator(a, a_star)};
  const ExactMatrix* rhs[] = {&a, &a_star, &a_eps};
  std::array<GaussianRational, 3> out;
  for (int k = 0; k < 3; ++k) {
    auto c = detail::proportion(lhs[k], *rhs[k]);
    if (!c) throw LeonardError(LeonardError::Kind::NotProportional, std::string("no scalar ") + names[k]);
    out[k] = *c;
  }
  return out;
}

struct LeonardTripleCertificate {
  std::string module_id;
  Index dim = 0;
  std::array<std::vector<long>, 3> orderings;
  // A-basis: (A*, A^e); A*-basis: (A^e, A); A^e-basis: (A, A*).
  std::array<Shape, 6> shapes{};
  bool bannai_ito = false;
  std::optional<std::array<GaussianRational, 3>> nu;
  std::array<GaussianRational, 3> traces;
  std::string verdict;
  std::optional<ModuleType> type;

  int diameter() const { return static_cast<int>(dim) - 1; }
};

inline std::optional<NLabel> trace_row(const std::array<GaussianRational, 3>& traces, int d) {
  const GaussianRational p(static_cast<long>(sign_power(d) * (d + 1)));
  for (NLabel n : {NLabel::Zero, NLabel::X, NLabel::Y, NLabel::Z}) {
    auto s = trace_signs(n);
    if (traces[0] == GaussianRational(s[0]) * p && traces[1] == GaussianRational(s[1]) * p &&
        traces[2] == GaussianRational(s[2]) * p)
      return n;
  }
  return std::nullopt;
}

inline std::string classify_certificate(const LeonardTripleCertificate& c) {
  auto all = [&](Shape s) {
    for (Shape t : c.shapes)
      if (t != s) return false;
    return true;
  };
  if (!c.bannai_ito) return "other";
  if (all(Shape::Bipartite) && c.nu) {
    const GaussianRational two(2);
    if ((*c.nu)[0] == two && (*c.nu)[1] == two && (*c.nu)[2] == two) return "normalized-B";
  }
  if (all(Shape::AlmostBipartite))
    if (auto n = trace_row(c.traces, c.diameter())) return std::string(to_string(*n)) + "-normalized-AB";
  return "other";
}

// Throws LeonardError if the triple is not a Leonard triple.
inline LeonardTripleCertificate certify(const std::string& module_id, const ModuleActionTriple& t) {
  LeonardTripleCertificate c;
  c.module_id = module_id;
  c.dim = t.dim();
  const ExactMatrix* m[3] = {&t.x, &t.y, &t.z};
  const long bound = eigenvalue_bound(c.dim);
  c.bannai_ito = true;
  for (int k = 0; k < 3; ++k) {
    auto ord = standard_ordering(eigenstructure(*m[k], bound), *m[(k + 1) % 3], *m[(k + 2) % 3]);
    c.orderings[k] = ord.values;
    c.shapes[2 * k] = shape_of(ord.companions[0]);
    c.shapes[2 * k + 1] = shape_of(ord.companions[1]);
    c.bannai_ito = c.bannai_ito && bannai_ito_check(ord.values);
  }
  try {
    c.nu = nu_scalars(t.x, t.y, t.z);
  } catch (const LeonardError&) {
    c.nu.reset();
  }
  c.traces = {t.x.trace(), t.y.trace(), t.z.trace()};
  c.verdict = classify_certificate(c);
  if (c.diameter() >= 3) {
    try {
      c.type = classify(t);
    } catch (const ClassificationError&) {
      c.type.reset();
    }
  }
  return c;
}

// Complete invariants: diameter with nu for bipartite, diameter with traces for almost bipartite.
inline bool isomorphic(const LeonardTripleCertificate& a, const LeonardTripleCertificate& b) {
  if (a.dim != b.dim || a.verdict != b.verdict || a.shapes != b.shapes) return false;
  if (a.shapes[0] == Shape::Bipartite) {
    if (!a.nu || !b.nu) return false;
    return (*a.nu)[0] == (*b.nu)[0] && (*a.nu)[1] == (*b.nu)[1] && (*a.nu)[2] == (*b.nu)[2];
  }
  return a.traces[0] == b.traces[0] && a.traces[1] == b.traces[1] && a.traces[2] == b.traces[2];
}

inline nlohmann::json to_json(const LeonardTripleCertificate& c) {
  nlohmann::json shapes = nlohmann::json::array();
  for (Shape s : c.shapes) shapes.push_back(to_string(s));
  nlohmann::json nu = nlohmann::json::array();
  for (int k = 0; k < 3; ++k) nu.push_back(c.nu ? nlohmann::json((*c.nu)[k].to_string()) : nlohmann::json(nullptr));
  return {{"module_id", c.module_id},
          {"dim", c.dim},
          {"orderings", {{"A", c.orderings[0]}, {"B", c.orderings[1]}, {"C", c.orderings[2]}}},
          {"shapes", shapes},
          {"bannai_ito", c.bannai_ito},
          {"nu", nu},
          {"traces", {c.traces[0].to_string(), c.traces[1].to_string(), c.traces[2].to_string()}},
          {"verdict", c.verdict},
          {"type", c.type ? nlohmann::json(c.type->to_string()) : nlohmann::json(nullptr)}};
}

}  // namespace cubeleonard
