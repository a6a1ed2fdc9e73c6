#pragma once

#include "cubeleonard/linalg.hpp"

#include <array>
#include <istream>
#include <ostream>
#include <regex>
#include <stdexcept>
#include <string>
#include <vector>

namespace cubeleonard {

class ClassificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RelationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class NLabel { Zero, X, Y, Z };

inline const char* to_string(NLabel n) {
  switch (n) {
    case NLabel::Zero: return "0";
    case NLabel::X: return "x";
    case NLabel::Y: return "y";
    default: return "z";
  }
}

inline NLabel parse_nlabel(const std::string& s) {
  if (s == "0") return NLabel::Zero;
  if (s == "x") return NLabel::X;
  if (s == "y") return NLabel::Y;
  if (s == "z") return NLabel::Z;
  throw ParseError("unknown label '" + s + "'");
}

struct ModuleType {
  enum class Family { B, AB };

  Family family = Family::B;
  int d = 0;
  NLabel n = NLabel::Zero;

  static ModuleType B(int d) {
    if (d < 0 || d % 2 != 0) throw std::invalid_argument("type B needs a nonnegative even diameter, got " + std::to_string(d));
    return {Family::B, d, NLabel::Zero};
  }
  static ModuleType AB(int d, NLabel n) {
    if (d < 0) throw std::invalid_argument("negative diameter");
    return {Family::AB, d, n};
  }

  int dim() const { return d + 1; }

  std::string to_string() const {
    if (family == Family::B) return "B(" + std::to_string(d) + ")";
    return "AB(" + std::to_string(d) + "," + cubeleonard::to_string(n) + ")";
  }

  static ModuleType parse(const std::string& s) {
    static const std::regex b(R"(^B\((\d+)\)$)");
    static const std::regex ab(R"(^AB\((\d+),([0xyz])\)$)");
    std::smatch m;
    if (std::regex_match(s, m, b)) return B(std::stoi(m[1].str()));
    if (std::regex_match(s, m, ab)) return AB(std::stoi(m[1].str()), parse_nlabel(m[2].str()));
    throw ParseError("malformed module type '" + s + "'");
  }

  friend bool operator==(const ModuleType& a, const ModuleType& b) {
    return a.family == b.family && a.d == b.d && (a.family == Family::B || a.n == b.n);
  }
  friend bool operator!=(const ModuleType& a, const ModuleType& b) { return !(a == b); }
};

inline std::ostream& operator<<(std::ostream& os, const ModuleType& t) { return os << t.to_string(); }

struct ModuleActionTriple {
  ExactMatrix x;
  ExactMatrix y;
  ExactMatrix z;

  Index dim() const { return x.rows(); }
};

struct RelationReport {
  bool ok = true;
  std::string relation;
  Index row = 0;
  Index col = 0;
  GaussianRational discrepancy;

  std::string message() const {
    if (ok) return "relations hold";
    return "relation " + relation + " fails at entry (" + std::to_string(row) + "," + std::to_string(col) +
           "), lhs - rhs = " + discrepancy.to_string();
  }
};

inline RelationReport check_relations(const ModuleActionTriple& m) {
  const Index n = m.x.rows();
  for (const ExactMatrix* a : {&m.x, &m.y, &m.z})
    if (a->rows() != n || a->cols() != n) throw DimensionError("triple matrices must be square of equal size");
  struct Rel {
    const char* name;
    const ExactMatrix* a;
    const ExactMatrix* b;
    const ExactMatrix* c;
  };
  const Rel rels[] = {{"xy+yx=2z", &m.x, &m.y, &m.z}, {"yz+zy=2x", &m.y, &m.z, &m.x}, {"zx+xz=2y", &m.z, &m.x, &m.y}};
  for (const auto& r : rels) {
    ExactMatrix diff = ExactMatrix::linear_combination(anticommutator(*r.a, *r.b), -2, *r.c);
    if (!diff.is_zero()) {
      auto e = diff.entries().front();
      return {false, r.name, e.row, e.col, e.value};
    }
  }
  return {};
}

namespace detail {

inline void push_if(std::vector<ExactMatrix::Entry>& es, Index r, Index c, long v) {
  if (v != 0) es.push_back({r, c, GaussianRational(v)});
}

}  // namespace detail

inline ModuleActionTriple build_canonical(const ModuleType& t) {
  const int d = t.d;
  const Index n = static_cast<Index>(d) + 1;
  std::vector<ExactMatrix::Entry> xs, ys, zs;
  if (t.family == ModuleType::Family::B) {
    if (d % 2 != 0) throw std::invalid_argument("type B needs even diameter");
    for (int i = 0; i <= d; ++i) {
      detail::push_if(xs, i, i, sign_power(i) * (d - 2 * i));
      if (i > 0) {
        detail::push_if(ys, i - 1, i, d - i + 1);
        detail::push_if(zs, i - 1, i, sign_power(i - 1) * (d - i + 1));
      }
      if (i < d) {
        detail::push_if(ys, i + 1, i, i + 1);
        detail::push_if(zs, i + 1, i, sign_power(i) * (i + 1));
      }
    }
  } else {
    int sx = 0, sy = 0, a = 0, b = 0;
    switch (t.n) {
      case NLabel::Zero: sx = d; sy = 0; a = -1; b = 0; break;
      case NLabel::X: sx = d; sy = 1; a = 0; b = 1; break;
      case NLabel::Y: sx = d + 1; sy = 0; a = 0; b = 1; break;
      case NLabel::Z: sx = d + 1; sy = 1; a = -1; b = 0; break;
    }
    for (int i = 0; i <= d; ++i) {
      detail::push_if(ys, i, i, sign_power(d + i + sy) * (2 * d - 2 * i + 1));
      if (i > 0) {
        detail::push_if(xs, i - 1, i, sign_power(sx) * (2 * d - i + 2));
        detail::push_if(zs, i - 1, i, sign_power(i + a) * (2 * d - i + 2));
      }
      // v_{d+1} = v_d folds the last raising term onto the diagonal.
      const Index up = (i < d) ? static_cast<Index>(i) + 1 : static_cast<Index>(d);
      detail::push_if(xs, up, i, sign_power(sx) * (i + 1));
      detail::push_if(zs, up, i, sign_power(i + b) * (i + 1));
    }
  }
  ModuleActionTriple m{ExactMatrix::from_entries(n, n, xs), ExactMatrix::from_entries(n, n, ys),
                       ExactMatrix::from_entries(n, n, zs)};
  auto rep = check_relations(m);
  if (!rep.ok) throw RelationError(t.to_string() + ": " + rep.message());
  return m;
}

namespace detail {

// Eigenpairs of m with integer eigenvalues |theta| <= bound, ascending.
struct IntegerEigenspace {
  long value;
  VectorBasis space;
};

inline std::vector<IntegerEigenspace> integer_eigenspaces(const ExactMatrix& m, long bound) {
  std::vector<IntegerEigenspace> out;
  std::size_t total = 0;
  for (long theta = -bound; theta <= bound && total < m.rows(); ++theta) {
    auto k = kernel_basis(ExactMatrix::linear_combination(m, -theta, ExactMatrix::identity(m.rows())));
    if (k.size() > 0) {
      total += k.size();
      out.push_back({theta, std::move(k)});
    }
  }
  return out;
}

// Smallest subspace containing v and invariant under the given maps.
inline std::size_t closure_dimension(const SparseVector& v, const std::vector<const ExactMatrix*>& maps) {
  RowReducer span(v.dim());
  std::vector<SparseVector> queue{v};
  span.insert(v);
  while (!queue.empty()) {
    SparseVector u = std::move(queue.back());
    queue.pop_back();
    for (const ExactMatrix* m : maps) {
      SparseVector w = m->apply(u);
      if (span.insert(w)) queue.push_back(std::move(w));
    }
  }
  return span.rank();
}

}  // namespace detail

inline bool is_irreducible(const ModuleActionTriple& m) {
  const Index n = m.dim();
  if (n <= 1) return true;
  const long bound = 2 * static_cast<long>(n - 1) + 1;
  auto spaces = detail::integer_eigenspaces(m.x, bound);
  std::size_t total = 0;
  for (const auto& s : spaces) total += s.space.size();
  if (total != n)
    throw ClassificationError("x has eigenvalues outside [-" + std::to_string(bound) + "," + std::to_string(bound) +
                              "] or is not diagonalizable");
  for (const auto& s : spaces)
    if (s.space.size() > 1) return false;
  for (const auto& s : spaces)
    if (detail::closure_dimension(s.space[0], {&m.x, &m.y}) != n) return false;
  return true;
}

struct Traces {
  GaussianRational x, y, z;
};

inline Traces traces_of(const ModuleActionTriple& m) { return {m.x.trace(), m.y.trace(), m.z.trace()}; }

// Trace signs relative to (-1)^d (d+1) for each n.
inline std::array<int, 3> trace_signs(NLabel n) {
  switch (n) {
    case NLabel::Zero: return {1, 1, 1};
    case NLabel::X: return {1, -1, -1};
    case NLabel::Y: return {-1, 1, -1};
    default: return {-1, -1, 1};
  }
}

inline ModuleType classify(const ModuleActionTriple& m) {
  auto rep = check_relations(m);
  if (!rep.ok) throw ClassificationError("not an A-module: " + rep.message());
  if (!is_irreducible(m)) throw ClassificationError("module is reducible");
  const int d = static_cast<int>(m.dim()) - 1;
  const Traces t = traces_of(m);
  if (t.x.is_zero() && t.y.is_zero() && t.z.is_zero()) {
    if (d % 2 != 0) throw ClassificationError("zero traces with odd diameter " + std::to_string(d));
    return ModuleType::B(d);
  }
  const GaussianRational p(static_cast<long>(sign_power(d) * (d + 1)));
  for (NLabel n : {NLabel::Zero, NLabel::X, NLabel::Y, NLabel::Z}) {
    auto s = trace_signs(n);
    if (t.x == GaussianRational(s[0]) * p && t.y == GaussianRational(s[1]) * p && t.z == GaussianRational(s[2]) * p)
      return ModuleType::AB(d, n);
  }
  throw ClassificationError("trace pattern (" + t.x.to_string() + "," + t.y.to_string() + "," + t.z.to_string() +
                            ") matches no type at diameter " + std::to_string(d));
}

struct ScaleTriple {
  GaussianRational xi, xi_star, xi_eps;

  friend bool operator==(const ScaleTriple& a, const ScaleTriple& b) {
    return a.xi == b.xi && a.xi_star == b.xi_star && a.xi_eps == b.xi_eps;
  }
};

// The four (xi, xi*, xi^eps) with xi^2 = 4/(nu* nu^eps), xi*^2 = 4/(nu nu^eps),
// xi xi* xi^eps = 8/(nu nu* nu^eps). Order: signs of (xi, xi*) = ++, +-, -+, --.
inline std::vector<ScaleTriple> scale_to_normalized(const GaussianRational& nu, const GaussianRational& nu_star,
                                                    const GaussianRational& nu_eps) {
  if (nu.is_zero() || nu_star.is_zero() || nu_eps.is_zero()) throw ArithmeticError("nu scalars must be nonzero");
  auto xi = sqrt_exact(GaussianRational(4) / (nu_star * nu_eps));
  auto xs = sqrt_exact(GaussianRational(4) / (nu * nu_eps));
  if (!xi || !xs) throw ArithmeticError("scaling requires square roots outside Q(i)");
  const GaussianRational product = GaussianRational(8) / (nu * nu_star * nu_eps);
  std::vector<ScaleTriple> out;
  for (int a : {1, -1})
    for (int b : {1, -1}) {
      GaussianRational u = GaussianRational(a) * *xi, v = GaussianRational(b) * *xs;
      GaussianRational w = product / (u * v);
      if (w * w != GaussianRational(4) / (nu * nu_star)) throw ArithmeticError("inconsistent scale solution");
      out.push_back({u, v, w});
    }
  return out;
}

// Same, additionally substituting each solution back into the triple.
inline std::vector<ScaleTriple> scale_to_normalized(const ModuleActionTriple& m, const GaussianRational& nu,
                                                    const GaussianRational& nu_star, const GaussianRational& nu_eps) {
  if (anticommutator(m.y, m.z) != nu * m.x || anticommutator(m.z, m.x) != nu_star * m.y ||
      anticommutator(m.x, m.y) != nu_eps * m.z)
    throw ArithmeticError("nu scalars do not match the triple");
  auto sols = scale_to_normalized(nu, nu_star, nu_eps);
  for (const auto& s : sols) {
    ModuleActionTriple t{s.xi * m.x, s.xi_star * m.y, s.xi_eps * m.z};
    if (!check_relations(t).ok) throw ArithmeticError("scaled triple is not normalized");
  }
  return sols;
}

inline void write_triple(std::ostream& os, const ModuleActionTriple& m) {
  write_matrix(os, m.x);
  write_matrix(os, m.y);
  write_matrix(os, m.z);
}

inline ModuleActionTriple read_triple(std::istream& is) {
  auto ms = read_matrices(is);
  if (ms.size() != 3) throw ParseError("expected three matrix blocks, found " + std::to_string(ms.size()));
  return {std::move(ms[0]), std::move(ms[1]), std::move(ms[2])};
}

inline ModuleActionTriple restrict_triple(const ModuleActionTriple& m, const VectorBasis& basis) {
  BasisSolver solver(basis);
  return {restrict_to(m.x, basis, solver), restrict_to(m.y, basis, solver), restrict_to(m.z, basis, solver)};
}

}  // namespace cubeleonard
