#include <gtest/gtest.h>

#include <vector>

#include "replan/errors.hpp"
#include "replan/numerics.hpp"
#include "replan/random.hpp"

namespace replan {
namespace {

RealMat random_matrix(std::size_t n, Rng& rng) {
  RealMat m(n);
  for (auto& x : m.flat()) x = standard_normal(rng);
  return m;
}

RealVec random_vector(std::size_t n, Rng& rng) {
  RealVec v(n);
  for (auto& x : v) x = standard_normal(rng);
  return v;
}

// (I - alpha phi phi^T) M by explicit matrix product.
RealMat explicit_left_update(const RealMat& m, const RealVec& phi, double alpha) {
  const std::size_t n = m.dim();
  RealMat a = RealMat::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) -= alpha * phi[i] * phi[j];
  RealMat out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += a(i, k) * m(k, j);
      out(i, j) = s;
    }
  return out;
}

TEST(Dot, OneHotSelects) { EXPECT_EQ(dot(RealVec{1, 0}, RealVec{0.5, 2}), 0.5); }

TEST(Dot, ZeroVector) { EXPECT_EQ(dot(RealVec{0, 0, 0}, RealVec{3, -1, 7}), 0.0); }

TEST(Dot, HandArithmetic) { EXPECT_EQ(dot(RealVec{1, 2, 3}, RealVec{4, 5, 6}), 32.0); }

TEST(Dot, LengthMismatchThrows) {
  EXPECT_THROW(dot(RealVec{1, 2}, RealVec{1, 2, 3}), DimensionError);
}

TEST(Rank1Update, IdentityOneHalf) {
  const RealMat out = rank1_left_update(RealMat::identity(2), RealVec{1, 0}, 0.5);
  EXPECT_EQ(out, (RealMat{{0.5, 0}, {0, 1}}));
}

TEST(Rank1Update, ZeroAlphaLeavesMatrix) {
  Rng rng(3);
  const RealMat m = random_matrix(5, rng);
  EXPECT_EQ(rank1_left_update(m, random_vector(5, rng), 0.0), m);
}

TEST(Rank1Update, Random3x3MatchesExplicitProduct) {
  Rng rng(11);
  const RealMat m = random_matrix(3, rng);
  const RealVec phi = random_vector(3, rng);
  const RealMat got = rank1_left_update(m, phi, 0.1);
  EXPECT_LE(max_abs_diff(got.flat(), explicit_left_update(m, phi, 0.1).flat()), 1e-12);
}

TEST(Rank1Update, MatchesExplicitProductUpToTwenty) {
  Rng rng(12);
  for (std::size_t n = 1; n <= 20; ++n) {
    for (int rep = 0; rep < 5; ++rep) {
      const RealMat m = random_matrix(n, rng);
      RealVec phi = random_vector(n, rng);
      for (auto& x : phi) x /= static_cast<double>(n);
      const double alpha = uniform01(rng);
      const RealMat got = rank1_left_update(m, phi, alpha);
      EXPECT_LE(max_abs_diff(got.flat(), explicit_left_update(m, phi, alpha).flat()), 1e-12)
          << "n=" << n;
    }
  }
}

TEST(Rank1Update, InPlaceNeedsScratchOfLengthN) {
  RealMat m = RealMat::identity(3);
  std::vector<double> scratch(2);
  EXPECT_THROW(rank1_left_update_inplace(m, RealVec{1, 0, 0}, 0.1, scratch), DimensionError);
  EXPECT_THROW(rank1_left_update(m, RealVec{1, 0}, 0.1), DimensionError);
}

TEST(MatVec, IdentityReturnsInput) {
  const RealVec v{1.5, -2, 3};
  EXPECT_EQ(mat_vec(RealMat::identity(3), v), v);
}

TEST(MatVec, HandArithmetic) {
  EXPECT_EQ(mat_vec(RealMat{{1, 1}, {0, 2}}, RealVec{3, 4}), (RealVec{7, 8}));
}

TEST(MatVec, DimensionMismatchThrows) {
  EXPECT_THROW(mat_vec(RealMat::identity(2), RealVec{1, 2, 3}), DimensionError);
}

TEST(Axpy, ZeroScaleReturnsY) {
  const RealVec y{1, 2, 3};
  EXPECT_EQ(axpy(y, 0.0, RealVec{9, 9, 9}), y);
}

TEST(Axpy, Accumulates) {
  RealVec y{1, 2};
  axpy_inplace(y, 2.0, RealVec{0.5, -1});
  EXPECT_EQ(y, (RealVec{2, 0}));
}

TEST(RealMat, RejectsRaggedRows) {
  EXPECT_THROW((RealMat{{1, 2}, {3}}), DimensionError);
}

TEST(RealMat, IdentityAndFinite) {
  RealMat m = RealMat::identity(3);
  EXPECT_EQ(m(1, 1), 1.0);
  EXPECT_EQ(m(0, 2), 0.0);
  EXPECT_TRUE(m.all_finite());
  m(2, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_FALSE(m.all_finite());
  m.set_identity();
  EXPECT_EQ(m, RealMat::identity(3));
}

// The OpenMP kernels must reproduce the serial reference bit for bit, on both
// sides of the auto-dispatch threshold.
class KernelParity : public ::testing::TestWithParam<std::size_t> {};

TEST_P(KernelParity, MatVecBitIdentical) {
  const std::size_t n = GetParam();
  Rng rng(mix_seed(n, 1));
  const RealMat m = random_matrix(n, rng);
  const RealVec v = random_vector(n, rng);
  RealVec a(n), b(n);
  serial::mat_vec(m, v, a);
  omp::mat_vec(m, v, b);
  EXPECT_EQ(a, b);
  EXPECT_EQ(mat_vec(m, v, Exec::Auto), a);
}

TEST_P(KernelParity, Rank1UpdateBitIdentical) {
  const std::size_t n = GetParam();
  Rng rng(mix_seed(n, 2));
  RealMat a = random_matrix(n, rng);
  RealMat b = a;
  const RealVec phi = random_vector(n, rng);
  std::vector<double> sa(n), sb(n);
  for (int rep = 0; rep < 3; ++rep) {
    serial::rank1_left_update(a, phi, 0.01, sa);
    omp::rank1_left_update(b, phi, 0.01, sb);
  }
  EXPECT_EQ(a, b);
  EXPECT_EQ(sa, sb);
}

INSTANTIATE_TEST_SUITE_P(Sizes, KernelParity,
                         ::testing::Values(1, 2, 7, 16, 64, kParallelMinDim - 1, kParallelMinDim,
                                           kParallelMinDim + 37));

TEST(Random, MixSeedSpreadsNeighbours) {
  EXPECT_NE(mix_seed(1), mix_seed(2));
  EXPECT_NE(mix_seed(1, 2), mix_seed(2, 1));
  EXPECT_EQ(mix_seed(7, 3), mix_seed(7, 3));
}

TEST(Random, UniformIndexInRangeAndCovering) {
  Rng rng(5);
  std::vector<int> counts(7);
  for (int i = 0; i < 7000; ++i) {
    const auto k = uniform_index(rng, 7);
    ASSERT_LT(k, 7u);
    ++counts[k];
  }
  for (int c : counts) EXPECT_GT(c, 850);
}

TEST(Random, UniformIndexHandlesWideRange) {
  Rng rng(6);
  const std::uint64_t n = (std::uint64_t{1} << 63) + 12345;
  bool high = false;
  for (int i = 0; i < 64; ++i) {
    const auto k = uniform_index(rng, n);
    ASSERT_LT(k, n);
    high = high || k > (std::uint64_t{1} << 62);
  }
  EXPECT_TRUE(high);
}

TEST(Random, NormalMoments) {
  Rng rng(9);
  double s = 0, s2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = standard_normal(rng);
    s += x;
    s2 += x * x;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.02);
}

}  // namespace
}  // namespace replan
