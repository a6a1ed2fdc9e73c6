#include "cubeleonard/quotient.hpp"

#include <gtest/gtest.h>

using namespace cubeleonard;

namespace {

mpz_class binom(long n, long k) {
  if (k < 0 || k > n) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

}  // namespace

TEST(QuotientContext, OddOnly) {
  EXPECT_THROW(QuotientContext(4), std::invalid_argument);
  QuotientContext q(5);
  EXPECT_EQ(q.class_count(), 16u);
  EXPECT_EQ(q.half_diameter(), 2);
  for (Index y = 0; y < 32; ++y) {
    Index c = q.class_of(y);
    EXPECT_LT(c, 16u);
    EXPECT_EQ(CubeContext::distance(q.representative(c), q.partner(c)), 5);
  }
}

TEST(Psi, RankAndKernel) {
  for (int D : {3, 5, 7}) {
    QuotientContext q(D);
    ExactMatrix psi = psi_matrix(q);
    EXPECT_EQ(rank(psi), q.class_count());
    auto [plus, minus] = v_plus_minus(q.parent());
    for (const auto& v : minus.vectors) EXPECT_TRUE(psi.apply(v).is_zero());
    for (std::size_t j = 0; j < plus.size(); ++j) {
      Index y = plus[j].entries().front().first;
      EXPECT_EQ(psi.apply(plus[j]), SparseVector::unit(q.class_count(), q.class_of(y), 2));
    }
    EXPECT_EQ(kernel_basis(psi).size(), minus.size());
  }
}

TEST(QuotientAdjacency, K4AtThree) {
  QuotientContext q(3);
  ExactMatrix a = quotient_adjacency(q);
  std::vector<ExactMatrix::Entry> es;
  for (Index r = 0; r < 4; ++r)
    for (Index c = 0; c < 4; ++c)
      if (r != c) es.push_back({r, c, 1});
  EXPECT_EQ(a, ExactMatrix::from_entries(4, 4, es));
}

TEST(QuotientAdjacency, RegularAndTransported) {
  for (int D : {3, 5, 7, 9}) {
    QuotientContext q(D);
    ExactMatrix a = quotient_adjacency(q);
    for (Index c = 0; c < q.class_count(); ++c) EXPECT_EQ(a.row(c).nnz(), static_cast<std::size_t>(D));
    EXPECT_EQ(transport(q, adjacency(q.parent())), a);
  }
}

TEST(QuotientAdjacency, IntersectionNumbersMatchTable) {
  for (int D : {3, 5, 7, 9}) {
    QuotientContext q(D);
    auto got = intersection_numbers(quotient_adjacency(q));
    auto expect = tabulated_quotient_intersection_numbers(D);
    EXPECT_TRUE(got.distance_regular) << D;
    EXPECT_EQ(got.diameter, expect.diameter);
    EXPECT_EQ(got.a, expect.a) << D;
    EXPECT_EQ(got.b, expect.b) << D;
    EXPECT_EQ(got.c, expect.c) << D;
    EXPECT_EQ(got.k, expect.k) << D;
  }
}

TEST(QuotientAdjacency, IntersectionNumbersOfCube) {
  auto got = intersection_numbers(adjacency(CubeContext(4)));
  EXPECT_TRUE(got.distance_regular);
  EXPECT_EQ(got.b, (std::vector<long>{4, 3, 2, 1, 0}));
  EXPECT_EQ(got.c, (std::vector<long>{0, 1, 2, 3, 4}));
}

TEST(QuotientAdjacency, EigenvalueMultiplicities) {
  // Nullity of A~ - (D - 4i) is C(D, 2i); the printed C(2D, 2i) exceeds the class count.
  for (int D : {3, 5, 7}) {
    QuotientContext q(D);
    ExactMatrix a = quotient_adjacency(q);
    std::size_t total = 0;
    for (int i = 0; i <= q.half_diameter(); ++i) {
      auto k = kernel_basis(ExactMatrix::linear_combination(a, GaussianRational(-(D - 4 * i)), ExactMatrix::identity(q.class_count())));
      EXPECT_EQ(k.size(), binom(D, 2 * i).get_ui()) << D << " " << i;
      total += k.size();
    }
    EXPECT_EQ(total, q.class_count());
    EXPECT_GT(binom(2 * D, 2), mpz_class(q.class_count()));
  }
}

TEST(QuotientDualAdjacency, Examples) {
  QuotientContext q(3);
  ExactMatrix b = quotient_dual_adjacency(q);
  EXPECT_EQ(b.at(0, 0), GaussianRational(3));
  EXPECT_EQ(b.at(1, 1), GaussianRational(-1));
  for (int D : {3, 5, 7, 9}) {
    QuotientContext qq(D);
    ExactMatrix bb = quotient_dual_adjacency(qq);
    EXPECT_TRUE(bb.is_diagonal());
    for (int i = 0; i <= qq.half_diameter(); ++i) {
      std::vector<GaussianRational> proj(qq.class_count());
      for (Index c = 0; c < qq.class_count(); ++c)
        if (qq.quotient_distance_from_base(c) == i) proj[c] = 1;
      EXPECT_TRUE(commutator(bb, ExactMatrix::diagonal(proj)).is_zero());
    }
  }
}

TEST(Transport, RejectsMapsLeavingVPlus) {
  QuotientContext q(5);
  EXPECT_THROW(transport(q, dual_adjacency(q.parent())), NotInvariantError);
}

TEST(QuotientStructure, RelationsAndWeights) {
  for (int D : {3, 5, 7, 9}) {
    QuotientContext q(D);
    auto m = quotient_acsa_structure(q);
    EXPECT_TRUE(check_relations(m).ok);
    EXPECT_EQ(quotient_weighted_adjacency_violation(q, m.z), "") << D;
  }
  QuotientContext q(5);
  auto m = quotient_acsa_structure(q);
  // class 0b00001 is at distance 1, 0b00011 at distance 2
  EXPECT_EQ(m.z.at(0b00001, 0b00011), GaussianRational(-1));
}

TEST(QuotientStructure, IntertwinesWithPsi) {
  for (int D : {3, 5, 7, 9}) {
    QuotientContext q(D);
    ExactMatrix psi = psi_matrix(q);
    auto parent = positive_structure(q.parent());
    auto m = quotient_acsa_structure(q);
    EXPECT_EQ(psi * parent.x, m.x * psi);
    EXPECT_EQ(psi * parent.y, m.y * psi);
    EXPECT_EQ(psi * parent.z, m.z * psi);
  }
}
