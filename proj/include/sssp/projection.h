#pragma once

// k-atom projections in signal space. LambdaOptBruteforce is the exact
// (combinatorial) best k-term projection; the other schemes are the
// near-optimal substitutes used inside the recovery loop.

#include "sssp/dictionary.h"
#include "sssp/l1.h"
#include "sssp/linalg.h"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sssp {

inline constexpr std::uint64_t kDefaultBruteforceCap = 2'000'000;

enum class ProjectionKind { kThreshold, kOmp, kCosamp, kSp, kL1, kBruteforce };

std::string ToString(ProjectionKind kind);
ProjectionKind ParseProjectionKind(std::string_view name);

struct ProjectionScheme {
  ProjectionKind kind = ProjectionKind::kThreshold;
  // Iteration cap for the iterative pursuits (cosamp, sp).
  int inner_iters = 20;
  L1Params l1;
  // l1 fit tolerance relative to ||z||.
  double l1_sigma_rel = 1e-6;
  // The l1 solve also stops once its top-k support has been unchanged for
  // this many convergence checks (10 iterations each); 0 disables.
  int l1_stable_checks = 10;
  // Largest number of supports the brute-force search may evaluate.
  std::uint64_t bruteforce_cap = kDefaultBruteforceCap;
};

struct ProjectionResult {
  Support support;
  Vec projected;  // P_support z
  double residual_norm = 0.0;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Saturates at UINT64_MAX.
std::uint64_t Binomial(int n, int k);

// Exhaustive search over all supports of size min(k, d) (smaller supports
// never do better). Ties resolve to the lexicographically first support.
ProjectionResult LambdaOptBruteforce(const Dictionary& d, const Vec& z, int k,
                                     std::uint64_t cap = kDefaultBruteforceCap);

// Keeps the k largest |<z, D_i>| / ||D_i||.
ProjectionResult SdThreshold(const Dictionary& d, const Vec& z, int k);

// Runs the scheme's coefficient-space solver on z ~ D a with sparsity k and
// projects onto the support it returns. For l1 that is basis pursuit
// followed by top-k extraction.
ProjectionResult SdPursuit(const Dictionary& d, const Vec& z, int k,
                           const ProjectionScheme& scheme);

// Dispatches on scheme.kind.
ProjectionResult Project(const Dictionary& d, const Vec& z, int k,
                         const ProjectionScheme& scheme);

// Projection of z onto the span of `support`, packaged.
ProjectionResult MakeProjection(const Dictionary& d, const Vec& z,
                                Support support);

struct NearOptimality {
  // max ||P_S x - x|| / ||P_opt x - x|| over samples with a nonzero optimum.
  double c1 = 1.0;
  // min ||P_S x|| / ||P_opt x||.
  double c2 = 1.0;
  // Samples whose optimal residual was below 1e-12 ||x|| (c1 undefined).
  int exact_hits = 0;
  int samples = 0;
};

// Empirical near-optimality constants of `scheme` against the brute-force
// projection over `samples` complex Gaussian test vectors.
NearOptimality NearOptimalityConstants(const Dictionary& d,
                                       const ProjectionScheme& scheme, int k,
                                       int samples, std::uint64_t seed);

}  // namespace sssp
