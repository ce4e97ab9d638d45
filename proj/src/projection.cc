#include "sssp/projection.h"

#include "sssp/random.h"
#include "sssp/solvers.h"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace sssp {

std::string ToString(ProjectionKind kind) {
  switch (kind) {
    case ProjectionKind::kThreshold: return "threshold";
    case ProjectionKind::kOmp: return "omp";
    case ProjectionKind::kCosamp: return "cosamp";
    case ProjectionKind::kSp: return "sp";
    case ProjectionKind::kL1: return "l1";
    case ProjectionKind::kBruteforce: return "bruteforce";
  }
  return "unknown";
}

ProjectionKind ParseProjectionKind(std::string_view name) {
  for (auto kind : {ProjectionKind::kThreshold, ProjectionKind::kOmp,
                    ProjectionKind::kCosamp, ProjectionKind::kSp,
                    ProjectionKind::kL1, ProjectionKind::kBruteforce}) {
    if (name == ToString(kind)) return kind;
  }
  throw std::invalid_argument("unknown projection scheme: " + std::string(name));
}

std::uint64_t Binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 c = 1;
  for (int i = 1; i <= k; ++i) {
    c = c * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (c > std::numeric_limits<std::uint64_t>::max()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return static_cast<std::uint64_t>(c);
}

ProjectionResult MakeProjection(const Dictionary& d, const Vec& z,
                                Support support) {
  ProjectionResult out;
  out.projected = ProjectOntoSpan(d.matrix, support, z);
  out.residual_norm = (z - out.projected).norm();
  out.support = std::move(support);
  return out;
}

ProjectionResult LambdaOptBruteforce(const Dictionary& d, const Vec& z, int k,
                                     std::uint64_t cap) {
  if (z.size() != d.rows()) {
    throw DimensionError("LambdaOptBruteforce: z length != rows");
  }
  if (k < 0) throw std::invalid_argument("LambdaOptBruteforce: k < 0");
  const int size = std::min(k, d.cols());
  if (Binomial(d.cols(), size) > cap) {
    throw BudgetExceeded("LambdaOptBruteforce: C(d, k) exceeds the cap");
  }
  if (size == 0) return MakeProjection(d, z, Support());

  const double tie = 1e-12 * std::max(z.norm(), 1e-300);
  std::vector<int> comb(size);
  for (int i = 0; i < size; ++i) comb[i] = i;
  std::vector<int> best;
  double best_residual = std::numeric_limits<double>::infinity();
  Mat sub(d.rows(), size);
  while (true) {
    for (int j = 0; j < size; ++j) sub.col(j) = d.matrix.col(comb[j]);
    Eigen::CompleteOrthogonalDecomposition<Mat> cod;
    cod.setThreshold(1e-10);
    cod.compute(sub);
    const double residual = (z - sub * cod.solve(z)).norm();
    if (residual < best_residual - tie) {
      best_residual = residual;
      best = comb;
    }
    if (!NextCombination(comb, d.cols())) break;
  }
  return MakeProjection(d, z, Support(best));
}

ProjectionResult SdThreshold(const Dictionary& d, const Vec& z, int k) {
  if (k < 0 || k > d.cols()) {
    throw std::invalid_argument("SdThreshold: need 0 <= k <= d");
  }
  const RealVec score = NormalizedCorrelations(d.matrix, z, d.column_norms);
  return MakeProjection(d, z, TopKIndices(score, k));
}

ProjectionResult SdPursuit(const Dictionary& d, const Vec& z, int k,
                           const ProjectionScheme& scheme) {
  if (k < 0 || k > d.cols()) {
    throw std::invalid_argument("SdPursuit: need 0 <= k <= d");
  }
  if (k == 0) return MakeProjection(d, z, Support());
  SolverSpec spec;
  spec.k = k;
  spec.max_iter = scheme.inner_iters;
  spec.l1 = scheme.l1;
  switch (scheme.kind) {
    case ProjectionKind::kOmp: spec.kind = SolverKind::kOmp; break;
    case ProjectionKind::kCosamp: spec.kind = SolverKind::kCosamp; break;
    case ProjectionKind::kSp: spec.kind = SolverKind::kSp; break;
    case ProjectionKind::kL1: {
      L1Params params = scheme.l1;
      params.stable_support_k = k;
      params.stable_checks = scheme.l1_stable_checks;
      const auto op = SynthesisOperator(d);
      const L1Result l1 = L1BallAdmm(*op, z, scheme.l1_sigma_rel * z.norm(),
                                     params, d.column_norms);
      return MakeProjection(d, z, LargestContributions(l1.coef, d.column_norms, k));
    }
    default:
      throw std::invalid_argument("SdPursuit: scheme must be omp, cosamp, sp or l1");
  }
  const SolveResult solved = Solve(d.matrix, z, spec);
  // Solvers may stop below k atoms; the projection uses whatever they chose.
  return MakeProjection(d, z, solved.coef.support);
}

ProjectionResult Project(const Dictionary& d, const Vec& z, int k,
                         const ProjectionScheme& scheme) {
  switch (scheme.kind) {
    case ProjectionKind::kThreshold: return SdThreshold(d, z, k);
    case ProjectionKind::kBruteforce:
      return LambdaOptBruteforce(d, z, k, scheme.bruteforce_cap);
    default: return SdPursuit(d, z, k, scheme);
  }
}

NearOptimality NearOptimalityConstants(const Dictionary& d,
                                       const ProjectionScheme& scheme, int k,
                                       int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("NearOptimalityConstants: samples < 1");
  if (Binomial(d.cols(), std::min(k, d.cols())) > scheme.bruteforce_cap) {
    throw BudgetExceeded("NearOptimalityConstants: brute-force oracle over budget");
  }
  NearOptimality out;
  out.samples = samples;
  double c1 = 0.0;
  double c2 = std::numeric_limits<double>::infinity();
  bool any_c1 = false;
  for (int s = 0; s < samples; ++s) {
    Rng rng(DeriveSeed(seed, {static_cast<std::uint64_t>(s)}));
    const Vec x = rng.ComplexGaussianVector(d.rows());
    const ProjectionResult opt = LambdaOptBruteforce(d, x, k, scheme.bruteforce_cap);
    const ProjectionResult got = Project(d, x, k, scheme);
    if (opt.residual_norm < 1e-12 * x.norm()) {
      ++out.exact_hits;
    } else {
      c1 = std::max(c1, got.residual_norm / opt.residual_norm);
      any_c1 = true;
    }
    const double opt_norm = opt.projected.norm();
    if (opt_norm > 0.0) c2 = std::min(c2, got.projected.norm() / opt_norm);
  }
  out.c1 = any_c1 ? c1 : 1.0;
  out.c2 = std::isfinite(c2) ? c2 : 1.0;
  return out;
}

}  // namespace sssp
