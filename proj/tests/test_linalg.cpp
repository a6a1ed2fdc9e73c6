#include "cubeleonard/linalg.hpp"

#include <gtest/gtest.h>

#include <bit>

#include "gen.hpp"

using namespace cubeleonard;

namespace {

ExactMatrix dense(const std::vector<std::vector<GaussianRational>>& rows) { return ExactMatrix::from_dense(rows); }

// Adjacency of Q_D built straight from bit flips.
ExactMatrix cube_adjacency(int D) {
  Index n = Index{1} << D;
  std::vector<ExactMatrix::Entry> es;
  for (Index v = 0; v < n; ++v)
    for (int b = 0; b < D; ++b) es.push_back({v, v ^ (Index{1} << b), GaussianRational(1)});
  return ExactMatrix::from_entries(n, n, es);
}

}  // namespace

TEST(ExactMatrix, FromEntriesSumsDuplicatesAndDropsZeros) {
  auto m = ExactMatrix::from_entries(2, 2, {{0, 0, 1}, {0, 0, -1}, {1, 0, 2}, {1, 0, 3}, {1, 1, 0}});
  EXPECT_EQ(m.nnz(), 1u);
  EXPECT_EQ(m.at(1, 0), GaussianRational(5));
  EXPECT_THROW(ExactMatrix::from_entries(2, 2, {{2, 0, 1}}), DimensionError);
}

TEST(Matmul, IdentityIsNeutral) {
  testgen::Gen g(1);
  ExactMatrix m = g.matrix(5, 7);
  EXPECT_EQ(ExactMatrix::identity(5) * m, m);
  EXPECT_EQ(m * ExactMatrix::identity(7), m);
}

TEST(Matmul, NilpotentSquareIsZero) {
  ExactMatrix n = dense({{0, 1}, {0, 0}});
  EXPECT_TRUE((n * n).is_zero());
}

TEST(Matmul, DimensionMismatchThrows) {
  EXPECT_THROW(ExactMatrix(2, 3) * ExactMatrix(2, 3), DimensionError);
}

TEST(Matmul, AssociativeOnRandomTriples) {
  testgen::Gen g(2);
  for (int k = 0; k < 30; ++k) {
    Index a = g.integer(1, 6), b = g.integer(1, 6), c = g.integer(1, 6), d = g.integer(1, 6);
    ExactMatrix x = g.matrix(a, b), y = g.matrix(b, c), z = g.matrix(c, d);
    EXPECT_EQ((x * y) * z, x * (y * z));
  }
}

TEST(Matmul, FastPathAgreesWithGeneric) {
  testgen::Gen g(3);
  for (int k = 0; k < 30; ++k) {
    ExactMatrix x = g.matrix(6, 5, 60), y = g.matrix(5, 4, 60);
    auto fast = detail::matmul_integer(x, y);
    ASSERT_TRUE(fast.has_value());
    EXPECT_EQ(*fast, detail::matmul_generic(x, y));
  }
}

TEST(Matmul, FallsBackWhenIntegersOverflow) {
  mpq_class big(mpz_class("123456789012345678901234567890"), 7);
  ExactMatrix x = ExactMatrix::scalar(2, GaussianRational(big));
  EXPECT_FALSE(detail::matmul_integer(x, x).has_value());
  EXPECT_EQ((x * x).at(1, 1), GaussianRational(big * big));
}

TEST(KernelBasis, IdentityHasTrivialKernel) {
  EXPECT_EQ(kernel_basis(ExactMatrix::identity(4)).size(), 0u);
}

TEST(KernelBasis, NilpotentJordanBlock) {
  auto k = kernel_basis(dense({{0, 1}, {0, 0}}));
  ASSERT_EQ(k.size(), 1u);
  EXPECT_EQ(k[0], SparseVector::unit(2, 0));
}

TEST(KernelBasis, PerronVectorOfCube) {
  for (int D = 1; D <= 6; ++D) {
    ExactMatrix a = cube_adjacency(D);
    auto k = kernel_basis(a - ExactMatrix::scalar(a.rows(), D));
    ASSERT_EQ(k.size(), 1u);
    EXPECT_EQ(k[0], SparseVector::from_dense(std::vector<GaussianRational>(a.rows(), 1)));
  }
}

TEST(KernelBasis, RandomKernelsAreAnnihilatedAndNormalized) {
  testgen::Gen g(4);
  for (int k = 0; k < 40; ++k) {
    Index r = g.integer(1, 6), c = g.integer(1, 8);
    ExactMatrix m = g.matrix(r, c, 50);
    auto kb = kernel_basis(m);
    EXPECT_EQ(kb.size() + rank(m), c);
    EXPECT_TRUE(is_independent(kb));
    for (const auto& v : kb.vectors) {
      EXPECT_TRUE(m.apply(v).is_zero());
      ASSERT_FALSE(v.is_zero());
      EXPECT_TRUE(v.entries().front().second.is_one());
    }
  }
}

TEST(ExpNilpotent, JordanBlock) {
  EXPECT_EQ(exp_nilpotent(dense({{0, 1}, {0, 0}}), 2), dense({{1, 1}, {0, 1}}));
}

TEST(ExpNilpotent, ZeroGivesIdentity) {
  EXPECT_EQ(exp_nilpotent(ExactMatrix(3, 3), 1), ExactMatrix::identity(3));
}

TEST(ExpNilpotent, NonNilpotentThrows) {
  EXPECT_THROW(exp_nilpotent(ExactMatrix::identity(2), 5), NotNilpotentError);
  EXPECT_THROW(exp_nilpotent(dense({{0, 1, 0}, {0, 0, 1}, {0, 0, 0}}), 2), NotNilpotentError);
}

TEST(ExpNilpotent, InverseOnRandomStrictlyTriangular) {
  testgen::Gen g(5);
  for (int k = 0; k < 20; ++k) {
    Index n = g.integer(1, 6);
    ExactMatrix t = g.strictly_upper(n);
    EXPECT_EQ(exp_nilpotent(t, n) * exp_nilpotent(-t, n), ExactMatrix::identity(n));
    SparseVector v = SparseVector::from_dense(std::vector<GaussianRational>(n, g.gaussian()));
    EXPECT_EQ(exp_nilpotent_apply(t, v, n), exp_nilpotent(t, n).apply(v));
  }
}

TEST(Restrict, IdentityRestrictsToIdentity) {
  testgen::Gen g(6);
  VectorBasis b{4, {}};
  ExactMatrix inv = g.invertible(4);
  for (Index j = 0; j < 3; ++j) b.vectors.push_back(inv.column(j));
  EXPECT_EQ(restrict_to(ExactMatrix::identity(4), b), ExactMatrix::identity(3));
}

TEST(Restrict, AllOnesOfSquare) {
  VectorBasis b{4, {SparseVector::from_dense({1, 1, 1, 1})}};
  EXPECT_EQ(restrict_to(cube_adjacency(2), b), dense({{2}}));
}

TEST(Restrict, EndpointZeroModuleOfQ4) {
  // v_j = sum of the weight-j vertices.
  const int D = 4;
  VectorBasis b{16, {}};
  for (int j = 0; j <= D; ++j) {
    std::vector<GaussianRational> v(16);
    for (unsigned y = 0; y < 16; ++y)
      if (std::popcount(y) == j) v[y] = 1;
    b.vectors.push_back(SparseVector::from_dense(v));
  }
  ExactMatrix r = restrict_to(cube_adjacency(D), b);
  for (int j = 0; j < D; ++j) {
    EXPECT_EQ(r.at(j + 1, j), GaussianRational(j + 1));
    EXPECT_EQ(r.at(j, j + 1), GaussianRational(D - j));
  }
  EXPECT_EQ(r.nnz(), 8u);
}

TEST(Restrict, NamesFirstViolatingVector) {
  VectorBasis b{3, {SparseVector::unit(3, 0), SparseVector::unit(3, 1)}};
  ExactMatrix m = dense({{1, 0, 0}, {0, 0, 0}, {0, 1, 0}});
  try {
    restrict_to(m, b);
    FAIL() << "expected NotInvariantError";
  } catch (const NotInvariantError& e) {
    EXPECT_EQ(e.vector_index(), 1u);
  }
}

TEST(Restrict, DependentBasisRejected) {
  VectorBasis b{2, {SparseVector::unit(2, 0), SparseVector::unit(2, 0, 3)}};
  EXPECT_THROW(BasisSolver{b}, DimensionError);
}

TEST(Restrict, Multiplicative) {
  testgen::Gen g(7);
  for (int k = 0; k < 15; ++k) {
    // Conjugate a random block upper-triangular pair so the first block spans an invariant subspace.
    const Index n = 5, m = 2;
    auto block = [&]() {
      ExactMatrix a = g.matrix(n, n, 60);
      std::vector<ExactMatrix::Entry> es;
      for (auto e : a.entries())
        if (!(e.row >= m && e.col < m)) es.push_back(e);
      return ExactMatrix::from_entries(n, n, es);
    };
    ExactMatrix p = g.invertible(n);
    VectorBasis b{n, {p.column(0), p.column(1)}};
    VectorBasis all{n, {}};
    for (Index j = 0; j < n; ++j) all.vectors.push_back(p.column(j));
    BasisSolver solver(all);
    std::vector<SparseVector> inv_cols;
    for (Index j = 0; j < n; ++j) inv_cols.push_back(*solver.coordinates(SparseVector::unit(n, j)));
    ExactMatrix pinv = ExactMatrix::from_columns(n, inv_cols);
    ASSERT_EQ(p * pinv, ExactMatrix::identity(n));
    ExactMatrix m1 = p * block() * pinv, m2 = p * block() * pinv;
    EXPECT_EQ(restrict_to(m1 * m2, b), restrict_to(m1, b) * restrict_to(m2, b));
  }
}

TEST(MatrixText, RoundTrip) {
  testgen::Gen g(8);
  for (int k = 0; k < 20; ++k) {
    ExactMatrix m = g.matrix(g.integer(0, 6), g.integer(0, 6));
    std::string text = to_text(m);
    EXPECT_EQ(from_text(text), m);
    EXPECT_EQ(to_text(from_text(text)), text);
  }
}

TEST(MatrixText, Format) {
  ExactMatrix m = ExactMatrix::from_entries(2, 3, {{0, 2, GaussianRational::i()}, {1, 0, GaussianRational::fraction(-1, 2)}});
  EXPECT_EQ(to_text(m), "dims 2 3\n0 2 i\n1 0 -1/2\n");
}

TEST(MatrixText, RejectsMalformed) {
  for (const char* bad : {"0 0 1\n", "dims 2\n", "dims 2 2\n2 0 1\n", "dims 2 2\n0 0 0\n", "dims 2 2\n0 0 1\n0 0 2\n",
                          "dims 2 2\n0 0 x\n", "dims 2 2\n-1 0 1\n"})
    EXPECT_THROW(from_text(bad), ParseError) << bad;
}
