#include "sssp/random.h"
#include "sssp/solvers.h"

#include <Eigen/QR>
#include <gtest/gtest.h>

#include <cmath>
#include <limits>

namespace sssp {
namespace {

constexpr SolverKind kAllKinds[] = {SolverKind::kOmp, SolverKind::kRomp,
                                    SolverKind::kCosamp, SolverKind::kSp,
                                    SolverKind::kBp};

struct Instance {
  Mat phi;
  SparseCoef a;
  Vec y;
};

Instance GaussianInstance(int m, int d, int k, std::uint64_t seed) {
  Instance inst;
  inst.phi = Rng(seed).GaussianMatrix(m, d) / std::sqrt(double(m));
  inst.a = GenSparseCoef(d, k, {}, DeriveSeed(seed, {1}), ValueField::kReal);
  inst.y = inst.phi * inst.a.Dense();
  return inst;
}

TEST(SolveTest, OrthonormalCaseIsExactForEveryKind) {
  const Mat q = Eigen::HouseholderQR<Mat>(Rng(3).GaussianMatrix(16, 16)).householderQ();
  const SparseCoef a = GenSparseCoef(16, 3, {}, 4);
  const Vec y = q * a.Dense();
  for (SolverKind kind : kAllKinds) {
    SolverSpec spec;
    spec.kind = kind;
    spec.k = 3;
    spec.bp_sigma = 1e-10;
    const SolveResult r = Solve(q, y, spec);
    EXPECT_LE((r.coef.Dense() - a.Dense()).norm(), 1e-8) << ToString(kind);
  }
}

TEST(SolveTest, OmpSupportMatchesExhaustiveSearch) {
  const Instance inst = GaussianInstance(20, 50, 3, 2024);
  // Oracle: the support with the smallest least-squares residual.
  std::vector<int> comb = {0, 1, 2}, best;
  double best_res = std::numeric_limits<double>::infinity();
  do {
    Mat sub(20, 3);
    for (int j = 0; j < 3; ++j) sub.col(j) = inst.phi.col(comb[j]);
    const Vec coef = sub.colPivHouseholderQr().solve(inst.y);
    const double res = (inst.y - sub * coef).norm();
    if (res < best_res) {
      best_res = res;
      best = comb;
    }
  } while (NextCombination(comb, 50));
  EXPECT_EQ(Support(best), inst.a.support);

  SolverSpec spec;
  spec.kind = SolverKind::kOmp;
  spec.k = 3;
  EXPECT_EQ(Solve(inst.phi, inst.y, spec).coef.support, Support(best));

  spec.kind = SolverKind::kBp;
  spec.bp_sigma = 1e-10;
  spec.l1.max_iter = 20000;
  const SolveResult bp = Solve(inst.phi, inst.y, spec);
  EXPECT_LE((bp.coef.Dense() - inst.a.Dense()).norm(), 1e-5);
}

TEST(SolveTest, RefitResidualIsOrthogonalToSelectedColumns) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Instance inst = GaussianInstance(24, 60, 4, 500 + s);
    const Vec y = AddNoise(inst.y, 0.1, s);
    for (SolverKind kind : kAllKinds) {
      SolverSpec spec;
      spec.kind = kind;
      spec.k = 4;
      spec.bp_sigma = 0.1;
      const SolveResult r = Solve(inst.phi, y, spec);
      const Vec res = y - inst.phi * r.coef.Dense();
      for (int j : r.coef.support) {
        EXPECT_LE(std::abs(inst.phi.col(j).dot(res)), 1e-8 * y.norm() * inst.phi.col(j).norm())
            << ToString(kind);
      }
    }
  }
}

TEST(SolveTest, IterativeResidualsNeverIncrease) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Instance inst = GaussianInstance(20, 80, 6, 900 + s);
    for (SolverKind kind : {SolverKind::kCosamp, SolverKind::kSp}) {
      SolverSpec spec;
      spec.kind = kind;
      spec.k = 6;
      const SolveResult r = Solve(inst.phi, inst.y, spec);
      ASSERT_FALSE(r.residual_trace.empty());
      for (std::size_t i = 1; i < r.residual_trace.size(); ++i) {
        EXPECT_LE(r.residual_trace[i], r.residual_trace[i - 1] * (1 + 1e-12)) << ToString(kind);
      }
      EXPECT_NEAR(r.residual_trace.back(), (inst.y - inst.phi * r.coef.Dense()).norm(),
                  1e-9 * inst.y.norm());
    }
  }
}

TEST(SolveTest, SupportSizeAtMostK) {
  const Instance inst = GaussianInstance(30, 90, 5, 77);
  for (SolverKind kind : kAllKinds) {
    SolverSpec spec;
    spec.kind = kind;
    spec.k = 5;
    spec.bp_sigma = 1e-6 * inst.y.norm();
    EXPECT_LE(Solve(inst.phi, inst.y, spec).coef.support.size(), 5) << ToString(kind);
  }
}

TEST(SolveTest, RejectsBadInput) {
  const Instance inst = GaussianInstance(10, 20, 2, 1);
  SolverSpec spec;
  spec.k = 2;
  EXPECT_THROW(Solve(inst.phi, Vec::Ones(9), spec), DimensionError);
  spec.k = 21;
  EXPECT_THROW(Solve(inst.phi, inst.y, spec), std::invalid_argument);
  spec.k = 2;
  spec.tol = 0.0;
  EXPECT_THROW(Solve(inst.phi, inst.y, spec), std::invalid_argument);
  EXPECT_THROW(ParseSolverKind("lasso"), std::invalid_argument);
}

TEST(ExactRecoveryTest, Contract) {
  const SparseCoef a = GenSparseCoef(10, 3, {}, 5);
  EXPECT_TRUE(ExactRecovery(a, a, 1e-4));
  SparseCoef zero;
  zero.length = 10;
  EXPECT_FALSE(ExactRecovery(a, zero, 1e-4));
  Vec t(2), e(2);
  t << 1.0, 0.0;
  e << 0.5, 0.0;
  EXPECT_TRUE(ExactRecovery(t, e, 0.5));  // boundary is inclusive
  EXPECT_FALSE(ExactRecovery(t, e, 0.4999));
  EXPECT_THROW(ExactRecovery(t, Vec::Zero(3), 0.1), DimensionError);
}

TEST(LargestContributionsTest, WeighsByColumnNorm) {
  Vec a(3);
  a << 1.0, 5.0, 2.0;
  RealVec norms(3);
  norms << 10.0, 1.0, 1.0;
  EXPECT_EQ(LargestContributions(a, norms, 1), Support({0}));
  EXPECT_EQ(LargestContributions(a, norms, 2), Support({0, 1}));
}

}  // namespace
}  // namespace sssp
