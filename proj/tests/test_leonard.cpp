#include "cubeleonard/leonard.hpp"
#include "cubeleonard/tmodules.hpp"

#include <gtest/gtest.h>

#include <algorithm>

#include "gen.hpp"

using namespace cubeleonard;

namespace {

std::vector<long> values(const std::vector<Eigenpair>& ps) {
  std::vector<long> out;
  for (const auto& p : ps) out.push_back(p.value);
  return out;
}

ExactMatrix diag(std::vector<long> d) {
  std::vector<GaussianRational> g(d.begin(), d.end());
  return ExactMatrix::diagonal(g);
}

ModuleActionTriple conjugate(const ModuleActionTriple& t, const std::vector<GaussianRational>& c) {
  std::vector<GaussianRational> inv;
  for (const auto& v : c) inv.push_back(v.inverse());
  ExactMatrix p = ExactMatrix::diagonal(c), q = ExactMatrix::diagonal(inv);
  return {q * t.x * p, q * t.y * p, q * t.z * p};
}

}  // namespace

TEST(Eigenstructure, Diagonal) {
  auto ps = eigenstructure(diag({2, 0, -2}), 7);
  EXPECT_EQ(values(ps), (std::vector<long>{-2, 0, 2}));
  for (const auto& p : ps) EXPECT_EQ(diag({2, 0, -2}).apply(p.vector), GaussianRational(p.value) * p.vector);
}

TEST(Eigenstructure, CanonicalSpectra) {
  for (int d = 0; d <= 10; d += 2) {
    auto t = build_canonical(ModuleType::B(d));
    std::vector<long> expect;
    for (int i = 0; i <= d; ++i) expect.push_back(sign_power(i) * (d - 2 * i));
    std::sort(expect.begin(), expect.end());
    EXPECT_EQ(values(eigenstructure(t.x, eigenvalue_bound(t.dim()))), expect) << d;
  }
  for (int d = 0; d <= 9; ++d) {
    auto t = build_canonical(ModuleType::AB(d, NLabel::Zero));
    std::vector<long> expect;
    for (int i = 0; i <= d; ++i) expect.push_back(sign_power(d + i) * (2 * d - 2 * i + 1));
    std::sort(expect.begin(), expect.end());
    EXPECT_EQ(values(eigenstructure(t.y, eigenvalue_bound(t.dim()))), expect) << d;
  }
}

TEST(Eigenstructure, Errors) {
  try {
    eigenstructure(diag({1, 1, 0}), 5);
    FAIL();
  } catch (const LeonardError& e) {
    EXPECT_EQ(e.kind(), LeonardError::Kind::RepeatedEigenvalue);
  }
  try {
    eigenstructure(diag({9, 0}), 5);
    FAIL();
  } catch (const LeonardError& e) {
    EXPECT_EQ(e.kind(), LeonardError::Kind::EigenvaluesNotExhausted);
  }
}

TEST(StandardOrdering, CanonicalB4) {
  auto t = build_canonical(ModuleType::B(4));
  auto ord = standard_ordering(eigenstructure(t.x, 11), t.y, t.z);
  EXPECT_EQ(ord.values, (std::vector<long>{4, -2, 0, 2, -4}));
}

TEST(StandardOrdering, SingleEigenvalue) {
  ExactMatrix one = diag({3});
  auto ord = standard_ordering(eigenstructure(one, 5), diag({1}), diag({-1}));
  EXPECT_EQ(ord.values, (std::vector<long>{3}));
}

TEST(StandardOrdering, ReversalIsValid) {
  for (auto ty : {ModuleType::B(6), ModuleType::AB(5, NLabel::Y)}) {
    auto t = build_canonical(ty);
    auto ord = standard_ordering(eigenstructure(t.x, eigenvalue_bound(t.dim())), t.y, t.z);
    VectorBasis rev = ord.basis;
    std::reverse(rev.vectors.begin(), rev.vectors.end());
    for (const ExactMatrix* m : {&t.y, &t.z}) {
      ExactMatrix r = restrict_to(*m, rev);
      for (Index i = 0; i + 1 < r.rows(); ++i) {
        EXPECT_TRUE(r.find(i, i + 1));
        EXPECT_TRUE(r.find(i + 1, i));
      }
      for (auto e : r.entries()) EXPECT_LE(e.row > e.col ? e.row - e.col : e.col - e.row, 1u);
    }
  }
}

TEST(StandardOrdering, DistinctErrors) {
  ExactMatrix x = diag({1, 2, 3});
  std::vector<ExactMatrix::Entry> full;
  for (Index r = 0; r < 3; ++r)
    for (Index c = 0; c < 3; ++c) full.push_back({r, c, 1});
  try {
    standard_ordering(eigenstructure(x, 5), ExactMatrix::from_entries(3, 3, full), diag({1, 1, 1}));
    FAIL();
  } catch (const LeonardError& e) {
    EXPECT_EQ(e.kind(), LeonardError::Kind::NotAPath);
  }
  ExactMatrix tri = ExactMatrix::from_entries(3, 3, {{0, 1, 1}, {1, 0, 1}, {1, 2, 1}, {2, 1, 1}});
  ExactMatrix half = ExactMatrix::from_entries(3, 3, {{0, 1, 1}, {1, 0, 1}});
  try {
    standard_ordering(eigenstructure(x, 5), tri, half);
    FAIL();
  } catch (const LeonardError& e) {
    EXPECT_EQ(e.kind(), LeonardError::Kind::ZeroAdjacentBlock);
  }
}

TEST(StandardOrdering, StableUnderRescaling) {
  testgen::Gen g(11);
  for (auto ty : {ModuleType::B(4), ModuleType::B(8), ModuleType::AB(4, NLabel::X), ModuleType::AB(5, NLabel::Z)}) {
    auto t = build_canonical(ty);
    auto base = certify("c", t);
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<GaussianRational> c;
      for (Index k = 0; k < t.dim(); ++k) c.push_back(g.nonzero());
      auto cert = certify("c", conjugate(t, c));
      EXPECT_EQ(cert.orderings, base.orderings);
      EXPECT_EQ(cert.shapes, base.shapes);
      EXPECT_EQ(cert.verdict, base.verdict);
    }
  }
}

TEST(Shapes, CanonicalFamilies) {
  for (int d = 2; d <= 10; d += 2)
    for (Shape s : certify("b", build_canonical(ModuleType::B(d))).shapes) EXPECT_EQ(s, Shape::Bipartite) << d;
  for (int d = 1; d <= 9; ++d)
    for (NLabel n : {NLabel::Zero, NLabel::X, NLabel::Y, NLabel::Z})
      for (Shape s : certify("ab", build_canonical(ModuleType::AB(d, n))).shapes)
        EXPECT_EQ(s, Shape::AlmostBipartite) << d << to_string(n);
}

TEST(Shapes, NonExample) {
  ExactMatrix y = ExactMatrix::from_entries(2, 2, {{0, 0, 1}, {0, 1, 1}, {1, 0, 1}, {1, 1, -1}});
  EXPECT_EQ(shape_of(y), Shape::Neither);
  EXPECT_EQ(shape_of(diag({0, 0, 0})), Shape::Bipartite);
  EXPECT_EQ(shape_of(diag({0, 0, 5})), Shape::AlmostBipartite);
  EXPECT_EQ(shape_of(diag({0, 1, 0})), Shape::Neither);
}

TEST(BannaiIto, Examples) {
  EXPECT_TRUE(bannai_ito_check({4, -2, 0, 2, -4}));
  EXPECT_FALSE(bannai_ito_check({3, 1, -1, -3}));
  EXPECT_TRUE(bannai_ito_check({5, 1, 2}));
  EXPECT_TRUE(bannai_ito_check({}));
  EXPECT_THROW(bannai_ito_check({1, 2, 2, 3}), ArithmeticError);
}

TEST(Nu, CanonicalAndScaled) {
  auto t = build_canonical(ModuleType::B(6));
  auto nu = nu_scalars(t.x, t.y, t.z);
  for (const auto& v : nu) EXPECT_EQ(v, GaussianRational(2));
  GaussianRational two(2);
  auto scaled = nu_scalars(two * t.x, two * t.y, two * t.z);
  for (const auto& v : scaled) EXPECT_EQ(v, GaussianRational(4));
  ExactMatrix zero(t.dim(), t.dim());
  EXPECT_THROW(nu_scalars(zero, t.y, t.z), LeonardError);
}

TEST(Nu, ScalingLaw) {
  testgen::Gen g(5);
  for (auto ty : {ModuleType::B(4), ModuleType::AB(3, NLabel::Y), ModuleType::AB(6, NLabel::Zero)}) {
    auto t = build_canonical(ty);
    for (int trial = 0; trial < 4; ++trial) {
      GaussianRational a = g.nonzero(), b = g.nonzero(), c = g.nonzero();
      auto nu = nu_scalars(a * t.x, b * t.y, c * t.z);
      EXPECT_EQ(nu[0], GaussianRational(2) * b * c / a);
      EXPECT_EQ(nu[1], GaussianRational(2) * c * a / b);
      EXPECT_EQ(nu[2], GaussianRational(2) * a * b / c);
    }
  }
}

TEST(Certificate, TraceRow) {
  for (int d = 0; d <= 8; d += 2) {
    GaussianRational p(d + 1), m(-(d + 1));
    EXPECT_EQ(trace_row({p, m, m}, d), NLabel::X);
  }
  EXPECT_FALSE(trace_row({GaussianRational(1), GaussianRational(1), GaussianRational(0)}, 2).has_value());
}

TEST(Certificate, CanonicalVerdicts) {
  for (int d = 4; d <= 8; d += 2) {
    auto c = certify("b", build_canonical(ModuleType::B(d)));
    EXPECT_EQ(c.verdict, "normalized-B");
    EXPECT_EQ(c.type, ModuleType::B(d));
    EXPECT_TRUE(c.bannai_ito);
  }
  for (NLabel n : {NLabel::Zero, NLabel::X, NLabel::Y, NLabel::Z}) {
    auto c = certify("ab", build_canonical(ModuleType::AB(4, n)));
    EXPECT_EQ(c.verdict, std::string(to_string(n)) + "-normalized-AB");
  }
  auto small = certify("s", build_canonical(ModuleType::B(2)));
  EXPECT_FALSE(small.type.has_value());
}

TEST(Certificate, EvenCubeModules) {
  for (int D : {4, 6}) {
    CubeContext ctx(D);
    auto pos = positive_structure(ctx);
    for (const auto& w : decompose(ctx)) {
      if (w.diameter < 3) continue;
      auto c = certify(w.id, restrict_triple(pos, w.vectors));
      EXPECT_EQ(c.verdict, "normalized-B") << w.id;
      EXPECT_EQ(c.diameter(), D - 2 * w.endpoint);
      EXPECT_TRUE(c.bannai_ito);
      ASSERT_TRUE(c.nu.has_value());
      for (const auto& v : *c.nu) EXPECT_EQ(v, GaussianRational(2));
      EXPECT_TRUE(isomorphic(c, certify("canon", build_canonical(ModuleType::B(c.diameter())))));
    }
  }
}

TEST(Certificate, QuotientEvenEndpoint) {
  QuotientContext q(7);
  auto structure = quotient_acsa_structure(q);
  for (const auto& m : quotient_modules(q)) {
    if (m.module.endpoint != 0) continue;
    auto c = certify(m.module.id, restrict_triple(structure, m.module.vectors));
    EXPECT_EQ(c.verdict, "z-normalized-AB");
    EXPECT_EQ(c.diameter(), 3);
  }
}

TEST(Certificate, Json) {
  auto c = certify("r0#0", build_canonical(ModuleType::B(4)));
  auto j = to_json(c);
  EXPECT_EQ(j["module_id"], "r0#0");
  EXPECT_EQ(j["dim"], 5);
  EXPECT_EQ(j["orderings"]["A"], (std::vector<long>{4, -2, 0, 2, -4}));
  EXPECT_EQ(j["shapes"].size(), 6u);
  EXPECT_EQ(j["nu"][0], "2");
  EXPECT_EQ(j["verdict"], "normalized-B");
  EXPECT_EQ(j["type"], "B(4)");
}
