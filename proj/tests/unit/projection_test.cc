#include "sssp/projection.h"
#include "sssp/random.h"
#include "sssp/signal.h"

#include <gtest/gtest.h>

#include <cmath>

namespace sssp {
namespace {

ProjectionScheme Scheme(ProjectionKind kind) {
  ProjectionScheme s;
  s.kind = kind;
  return s;
}

constexpr ProjectionKind kPursuits[] = {ProjectionKind::kOmp, ProjectionKind::kCosamp,
                                        ProjectionKind::kSp, ProjectionKind::kL1};

TEST(BruteforceTest, IdentityReducesToTopK) {
  Rng rng(1);
  const Dictionary d = MakeIdentity(10);
  for (int rep = 0; rep < 10; ++rep) {
    const Vec z = rng.ComplexGaussianVector(10);
    EXPECT_EQ(LambdaOptBruteforce(d, z, 3).support, TopKIndices(z, 3));
  }
}

TEST(BruteforceTest, HandInstance) {
  Mat m(2, 3);
  m << 1.0, 0.0, 1.0 / std::sqrt(2.0), 0.0, 1.0, 1.0 / std::sqrt(2.0);
  const Dictionary d = Dictionary::FromMatrix(m, DictionaryKind::kIdentity);
  Vec z(2);
  z << 1.0, 1.0;
  const ProjectionResult r = LambdaOptBruteforce(d, z, 1);
  EXPECT_EQ(r.support, Support({2}));
  EXPECT_NEAR(r.residual_norm, 0.0, 1e-12);
}

TEST(BruteforceTest, ZeroSparsityAndBudget) {
  const Dictionary d = MakeOvercompleteDft(8, 2);
  const Vec z = Rng(2).ComplexGaussianVector(8);
  const ProjectionResult r = LambdaOptBruteforce(d, z, 0);
  EXPECT_TRUE(r.support.empty());
  EXPECT_EQ(r.projected.norm(), 0.0);
  EXPECT_NEAR(r.residual_norm, z.norm(), 1e-15);
  EXPECT_THROW(LambdaOptBruteforce(d, z, 4, 100), BudgetExceeded);
  EXPECT_EQ(Binomial(16, 4), 1820u);
  EXPECT_EQ(Binomial(1000, 500), UINT64_MAX);
}

TEST(ThresholdTest, OptimalForOrthonormal) {
  Rng rng(3);
  const Dictionary d = MakeRandomOrthonormal(8, 4);
  for (int rep = 0; rep < 20; ++rep) {
    const Vec z = rng.ComplexGaussianVector(8);
    EXPECT_EQ(SdThreshold(d, z, 3).support, LambdaOptBruteforce(d, z, 3).support);
  }
}

TEST(ThresholdTest, NormWeightingPicksSmallScaleAtom) {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = 10.0;
  m(1, 1) = 0.1;
  const Dictionary d = Dictionary::FromMatrix(m, DictionaryKind::kRenormalizedOrthogonal);
  Vec z(2);
  z << 0.1, 1.0;
  // Raw correlations favour atom 0 (|<z, D_0>| = 1 > 0.1).
  EXPECT_EQ(TopKIndices(Vec(m.adjoint() * z), 1), Support({0}));
  const ProjectionResult r = SdThreshold(d, z, 1);
  EXPECT_EQ(r.support, Support({1}));
  EXPECT_EQ(r.support, LambdaOptBruteforce(d, z, 1).support);
  EXPECT_NEAR(r.residual_norm, 0.1, 1e-14);
}

TEST(ThresholdTest, ZeroInputTakesFirstIndices) {
  const ProjectionResult r = SdThreshold(MakeOvercompleteDft(8, 2), Vec::Zero(8), 3);
  EXPECT_EQ(r.support, Support({0, 1, 2}));
  EXPECT_EQ(r.projected.norm(), 0.0);
}

TEST(PursuitTest, OrthonormalMatchesThreshold) {
  Rng rng(5);
  const Dictionary d = MakeRandomOrthonormal(12, 6);
  for (int rep = 0; rep < 5; ++rep) {
    const Vec z = rng.ComplexGaussianVector(12);
    const Support expected = SdThreshold(d, z, 3).support;
    for (ProjectionKind kind : kPursuits) {
      EXPECT_EQ(SdPursuit(d, z, 3, Scheme(kind)).support, expected) << ToString(kind);
    }
  }
}

TEST(PursuitTest, OvercompleteDftSeparatedSupport) {
  const Dictionary d = MakeOvercompleteDft(32, 4);
  const SparseCoef a = GenSparseCoef(128, 2, {SupportKind::kSeparated, 0}, 12);
  const Vec z = d.matrix * a.Dense();
  const ProjectionResult omp = SdPursuit(d, z, 2, Scheme(ProjectionKind::kOmp));
  EXPECT_EQ(omp.support, a.support);
  EXPECT_LE(omp.residual_norm, 1e-10 * z.norm());
  const ProjectionResult l1 = SdPursuit(d, z, 2, Scheme(ProjectionKind::kL1));
  EXPECT_LE((l1.projected - z).norm(), 1e-6 * z.norm());
  EXPECT_THROW(SdPursuit(d, z, 2, Scheme(ProjectionKind::kThreshold)), std::invalid_argument);
}

TEST(ProjectionInvariantTest, ConsistentAndNeverBeatsOptimum) {
  Rng rng(9);
  const Dictionary d = MakeOvercompleteDft(8, 2);
  for (int rep = 0; rep < 20; ++rep) {
    const Vec z = rng.ComplexGaussianVector(8);
    const double opt = LambdaOptBruteforce(d, z, 2).residual_norm;
    for (ProjectionKind kind : {ProjectionKind::kThreshold, ProjectionKind::kOmp,
                                ProjectionKind::kCosamp, ProjectionKind::kSp,
                                ProjectionKind::kL1, ProjectionKind::kBruteforce}) {
      const ProjectionResult r = Project(d, z, 2, Scheme(kind));
      EXPECT_LE(r.support.size(), 2);
      EXPECT_GE(r.residual_norm, opt - 1e-10) << ToString(kind);
      EXPECT_LE((r.projected - ProjectOntoSpan(d.matrix, r.support, z)).norm(), 1e-10);
      EXPECT_NEAR(r.residual_norm, (z - r.projected).norm(), 1e-10);
    }
  }
}

TEST(NearOptimalityTest, OrthonormalThresholdIsExact) {
  const NearOptimality c = NearOptimalityConstants(
      MakeRandomOrthonormal(8, 2), Scheme(ProjectionKind::kThreshold), 2, 1000, 3);
  EXPECT_NEAR(c.c1, 1.0, 1e-10);
  EXPECT_NEAR(c.c2, 1.0, 1e-10);
  EXPECT_EQ(c.samples, 1000);
}

TEST(NearOptimalityTest, OrderingOnRedundantDictionary) {
  for (ProjectionKind kind : {ProjectionKind::kThreshold, ProjectionKind::kOmp}) {
    const NearOptimality c =
        NearOptimalityConstants(MakeOvercompleteDft(8, 2), Scheme(kind), 2, 100, 4);
    EXPECT_GE(c.c1, 1.0 - 1e-12);
    EXPECT_GT(c.c2, 0.0);
    EXPECT_LE(c.c2, 1.0 + 1e-12);
  }
}

TEST(NearOptimalityTest, Deterministic) {
  const Dictionary d = MakeOvercompleteDft(8, 2);
  const NearOptimality a = NearOptimalityConstants(d, Scheme(ProjectionKind::kOmp), 2, 200, 5);
  const NearOptimality b = NearOptimalityConstants(d, Scheme(ProjectionKind::kOmp), 2, 200, 5);
  EXPECT_EQ(a.c1, b.c1);
  EXPECT_EQ(a.c2, b.c2);
  EXPECT_EQ(a.exact_hits, b.exact_hits);
}

TEST(ProjectionKindTest, NamesRoundTrip) {
  for (ProjectionKind k : {ProjectionKind::kThreshold, ProjectionKind::kOmp,
                           ProjectionKind::kCosamp, ProjectionKind::kSp,
                           ProjectionKind::kL1, ProjectionKind::kBruteforce}) {
    EXPECT_EQ(ParseProjectionKind(ToString(k)), k);
  }
}

}  // namespace
}  // namespace sssp
