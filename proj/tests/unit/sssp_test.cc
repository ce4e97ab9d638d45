#include "sssp/metrics.h"
#include "sssp/random.h"
#include "sssp/solvers.h"
#include "sssp/sssp.h"

#include <gtest/gtest.h>

#include <cmath>

namespace sssp {
namespace {

SsspConfig Config(int k, ProjectionKind kind) {
  SsspConfig cfg;
  cfg.k = k;
  cfg.scheme.kind = kind;
  return cfg;
}

TEST(SsspTest, ZeroMeasurementsStopOnResidualFloor) {
  const SensingMatrix a = MakeGaussianSensing(10, 20, 1);
  const RecoveryResult r = SsspRecover(a, MakeIdentity(20), Vec::Zero(10),
                                       Config(2, ProjectionKind::kThreshold));
  EXPECT_EQ(r.x_hat.norm(), 0.0);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_EQ(r.stop_reason, StopReason::kResidualFloor);
  EXPECT_EQ(ToString(r.stop_reason), "residual-floor");
}

TEST(SsspTest, IdentityDictionaryAgreesWithSubspacePursuit) {
  const SensingMatrix a = MakeGaussianSensing(20, 40, 2024);
  const Dictionary d = MakeIdentity(40);
  const SparseCoef c = GenSparseCoef(40, 3, {}, 7, ValueField::kReal);
  const Vec x = c.Dense();
  const Vec y = a.matrix * x;

  SolverSpec sp;
  sp.kind = SolverKind::kSp;
  sp.k = 3;
  const SolveResult base = Solve(a.matrix, y, sp);
  ASSERT_LE(RecoveryError(x, base.coef.Dense()), 1e-6);

  const RecoveryResult r = SsspRecover(a, d, y, Config(3, ProjectionKind::kThreshold));
  EXPECT_LE(RecoveryError(x, r.x_hat), 1e-6);
  EXPECT_EQ(r.support, base.coef.support);
}

TEST(SsspTest, OvercompleteDftWithOmpProjection) {
  const Dictionary d = MakeOvercompleteDft(32, 4);
  const SensingMatrix a = MakeGaussianSensing(24, 32, 31);
  const SparseCoef c = GenSparseCoef(128, 2, {SupportKind::kSeparated, 0}, 32);
  const Vec x = d.matrix * c.Dense();
  const RecoveryResult r = SsspRecover(a, d, a.matrix * x, Config(2, ProjectionKind::kOmp));
  EXPECT_LE(RecoveryError(x, r.x_hat), 1e-4);
}

TEST(SsspTest, StructuralInvariants) {
  const Dictionary d = MakeOvercompleteDft(16, 2);
  for (ProjectionKind kind : {ProjectionKind::kThreshold, ProjectionKind::kOmp,
                              ProjectionKind::kCosamp, ProjectionKind::kSp,
                              ProjectionKind::kL1}) {
    for (std::uint64_t s = 0; s < 5; ++s) {
      const SensingMatrix a = MakeGaussianSensing(10, 16, 100 + s);
      const SparseCoef c = GenSparseCoef(32, 3, {}, 200 + s);
      const Vec y = AddNoise(a.matrix * d.matrix * c.Dense(), 0.01, s);
      SsspConfig cfg = Config(3, kind);
      cfg.record_iterates = true;
      const RecoveryResult r = SsspRecover(a, d, y, cfg);
      EXPECT_LE(r.iterations, cfg.EffectiveMaxIter());
      EXPECT_EQ(r.residual_trace.size(), std::size_t(r.iterations + 1));
      EXPECT_EQ(r.iterates.size(), std::size_t(r.iterations + 1));
      EXPECT_LE(r.support.size(), 3);
      EXPECT_LE((r.x_hat - d.matrix * r.a_hat.Dense()).norm(), 1e-10);
      for (double v : r.residual_trace) {
        EXPECT_TRUE(std::isfinite(v));
        EXPECT_GE(v, 0.0);
      }
      EXPECT_NEAR(r.residual_trace.back(), (y - a.matrix * r.x_hat).norm(), 1e-10);
    }
  }
}

TEST(SsspTest, IteratesAreSparseInDictionary) {
  const Dictionary d = MakeOvercompleteDft(16, 2);
  const SensingMatrix a = MakeGaussianSensing(12, 16, 5);
  const SparseCoef c = GenSparseCoef(32, 2, {}, 6);
  SsspConfig cfg = Config(2, ProjectionKind::kOmp);
  cfg.record_iterates = true;
  const RecoveryResult r = SsspRecover(a, d, a.matrix * d.matrix * c.Dense(), cfg);
  for (const Vec& xl : r.iterates) {
    // x^l lies in some span of 2 atoms.
    if (xl.norm() == 0.0) continue;
    EXPECT_LE(LambdaOptBruteforce(d, xl, 2).residual_norm, 1e-9 * xl.norm());
  }
}

TEST(SsspTest, TrueSupportIsAFixedPoint) {
  const Dictionary d = MakeRandomOrthonormal(32, 3);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const SensingMatrix a = MakeGaussianSensing(20, 32, 10 + s);
    const SparseCoef c = GenSparseCoef(32, 3, {}, 20 + s);
    const Vec y = a.matrix * d.matrix * c.Dense();
    const RecoveryResult r = SsspRecover(a, d, y, Config(3, ProjectionKind::kThreshold));
    if (r.support == c.support) {
      EXPECT_LE(r.residual_trace.back(), 1e-10 * y.norm());
    }
  }
}

TEST(SsspTest, ConfigValidation) {
  const SensingMatrix a = MakeGaussianSensing(5, 8, 1);
  const Dictionary d = MakeIdentity(8);
  EXPECT_THROW(SsspRecover(a, d, Vec::Ones(4), Config(1, ProjectionKind::kThreshold)),
               DimensionError);
  EXPECT_THROW(SsspRecover(a, d, Vec::Ones(5), Config(9, ProjectionKind::kThreshold)),
               std::invalid_argument);
  EXPECT_THROW(SsspRecover(a, MakeIdentity(7), Vec::Ones(5), Config(1, ProjectionKind::kThreshold)),
               DimensionError);
  SsspConfig cfg = Config(1, ProjectionKind::kThreshold);
  EXPECT_EQ(cfg.EffectiveMaxIter(), 50);
  cfg.k = 7;
  EXPECT_EQ(cfg.EffectiveMaxIter(), 70);
  cfg.max_iter = 3;
  EXPECT_EQ(cfg.EffectiveMaxIter(), 3);
}

TEST(SsspTest, CandidateBudgetIsClamped) {
  // 3k + k > d: the union would exceed the dictionary without the clamp.
  const Dictionary d = MakeIdentity(6);
  const SensingMatrix a = MakeGaussianSensing(6, 6, 9);
  const SparseCoef c = GenSparseCoef(6, 2, {}, 10);
  const RecoveryResult r = SsspRecover(a, d, a.matrix * c.Dense(), Config(2, ProjectionKind::kThreshold));
  EXPECT_LE(RecoveryError(c.Dense(), r.x_hat), 1e-10);
}

TEST(SparsityEstimateTest, SweepFindsTrueLevel) {
  const Dictionary d = MakeRandomOrthonormal(64, 1);
  const SensingMatrix a = MakeGaussianSensing(40, 64, 2);
  const SparseCoef c = GenSparseCoef(64, 4, {}, 3);
  const Vec y = a.matrix * d.matrix * c.Dense();
  const SsspConfig tmpl = Config(1, ProjectionKind::kThreshold);
  EXPECT_EQ(EstimateSparsity(a, d, y, {4}, tmpl), 4);

  const auto sweep = SparsitySweep(a, d, y, {1, 2, 3, 4, 5, 6}, tmpl);
  // Oracle: the first grid value reaching the floor.
  int first = -1;
  for (const auto& e : sweep) {
    if (e.residual <= 1e-8 * y.norm()) {
      first = e.k;
      break;
    }
  }
  ASSERT_EQ(first, 4);
  for (const auto& e : sweep) {
    if (e.k >= 4) {
      EXPECT_LE(e.residual, 1e-8 * y.norm());
    } else {
      EXPECT_GT(e.residual, 1e-8 * y.norm());
    }
  }
  const int k = EstimateSparsity(a, d, y, {1, 2, 3, 4, 5, 6}, tmpl);
  EXPECT_LE(sweep[k - 1].residual, 1e-8 * y.norm());
  EXPECT_THROW(SparsitySweep(a, d, y, {}, tmpl), std::invalid_argument);
  EXPECT_THROW(SparsitySweep(a, d, y, {3, 2}, tmpl), std::invalid_argument);
}

// Error reaches max(eta, 15 ||e||) within a number of iterations that grows
// at most like log(||x|| / eta).
TEST(SsspTest, IterationCountGrowsLogarithmically) {
  const Dictionary d = MakeIdentity(12);
  const SensingMatrix a = MakeGaussianSensing(12, 12, 4);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const SparseCoef c = GenSparseCoef(12, 2, {}, 40 + s);
    const Vec x = c.Dense();
    const double noise = 1e-9 * x.norm();
    const Vec y = AddNoise(a.matrix * x, noise, s);
    SsspConfig cfg = Config(2, ProjectionKind::kBruteforce);
    cfg.record_iterates = true;
    const RecoveryResult r = SsspRecover(a, d, y, cfg);
    for (double eta = 1e-1; eta >= 1e-7; eta /= 10) {
      const double target = std::max(eta * x.norm(), 15 * noise);
      int reached = -1;
      for (std::size_t l = 0; l < r.iterates.size(); ++l) {
        if ((x - r.iterates[l]).norm() <= target) {
          reached = static_cast<int>(l);
          break;
        }
      }
      ASSERT_GE(reached, 0);
      EXPECT_LE(reached, 1 + std::ceil(std::log2(1.0 / eta)));
    }
  }
}

}  // namespace
}  // namespace sssp
