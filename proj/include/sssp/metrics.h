#pragma once

// Quantities from the recovery analysis: restricted isometry constants of AD,
// the localization factor, tail energy, model mismatch, error measures,
// measurement-count bounds and the per-iteration error bounds.

#include "sssp/dictionary.h"
#include "sssp/linalg.h"
#include "sssp/projection.h"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace sssp {

enum class EstimateMethod { kBruteforce, kSampled };

std::string ToString(EstimateMethod method);
EstimateMethod ParseEstimateMethod(std::string_view name);

struct DripEstimate {
  int k = 0;
  double delta = 0.0;
  EstimateMethod method = EstimateMethod::kBruteforce;
  std::uint64_t supports_checked = 0;
};

// max over size-k supports T of ||(AD)_T^* (AD)_T - I||_2. Bruteforce visits
// every support; sampled visits `trials` uniformly random supports and is a
// lower bound. k is clamped to d.
DripEstimate DripConstant(const SensingMatrix& a, const Dictionary& d, int k,
                          EstimateMethod method, int trials = 0,
                          std::uint64_t seed = 0,
                          std::uint64_t cap = kDefaultBruteforceCap);

// Same for an arbitrary matrix (the restricted isometry constant of phi).
DripEstimate RestrictedIsometryConstant(const Mat& phi, int k,
                                        EstimateMethod method, int trials = 0,
                                        std::uint64_t seed = 0,
                                        std::uint64_t cap = kDefaultBruteforceCap);

struct LocalizationEstimate {
  double value = 0.0;
  std::uint64_t supports_checked = 0;
  // Every inner ascent reached its stopping tolerance.
  bool converged = true;
};

// sup ||D^* D a||_1 / sqrt(k) over k-sparse a with ||D a||_2 = 1. For each
// support the inner maximization over the unit sphere of span(D_T) runs
// sign-based power ascent from `restarts` random starts. Always a lower bound
// on the supremum; exact for orthonormal D.
LocalizationEstimate LocalizationFactor(const Dictionary& d, int k,
                                        EstimateMethod method, int samples,
                                        std::uint64_t seed, int restarts = 20,
                                        std::uint64_t cap = kDefaultBruteforceCap);

// ||x - x_k||_2 + ||x - x_k||_1 / sqrt(k) + noise_norm, x_k the k largest
// entries by modulus.
double TailEnergy(const Vec& x, int k, double noise_norm);

// ||x - D a_k||_2 + ||x - D a_k||_1 / sqrt(k) at the a_k found by `scheme`.
// An upper bound on the infimum over all k-sparse a_k.
double ModelMismatch(const Vec& x, const Dictionary& d, int k,
                     const ProjectionScheme& scheme);

// ||x - x_hat|| / ||x||. Throws when x = 0.
double RecoveryError(const Vec& x, const Vec& x_hat);

// 10 log10(||x|| / ||x - x_hat||), an amplitude ratio. +inf when x_hat == x.
double RSnr(const Vec& x, const Vec& x_hat);

// 10 log10(||x|| / tail_energy(x, k, noise_norm)).
double RSnrTailCeiling(const Vec& x, int k, double noise_norm);

// Gaussian concentration constant eps^2/4 - eps^3/6.
double GaussianC0(double eps);

using C0Function = std::function<double(double)>;

// Measurements for the restricted isometry property over all k-atom spans of
// an n x d dictionary:
//   ceil((2k log(42 e d / (delta k)) + log(4 / alpha)) / c0(delta / sqrt 2)).
std::int64_t MeasurementBound(int k, int d, double delta, double alpha,
                              const C0Function& c0 = GaussianC0);

// Single k-dimensional subspace:
//   ceil((2k log(42 / delta) + log(4 / alpha)) / c0(delta / sqrt 2)).
std::int64_t MeasurementBoundSubspace(int k, double delta, double alpha,
                                      const C0Function& c0 = GaussianC0);

struct ConvergenceConstantsResult {
  double c1 = 0.0;
  double c2 = 0.0;
};

// C1 = ((2 + l1) delta + l1)(2 + l2) sqrt((1 + delta) / (1 - delta))
// C2 = (2 + l2)((2 + l1)(1 + delta) + 2) / sqrt(1 - delta)
ConvergenceConstantsResult ConvergenceConstants(double delta4k, double lambda1,
                                                double lambda2);

// Power-law tail bounds for a p-compressible signal of radius R:
//   ||x - x_k||_1 <= D1 R k^(1 - 1/p),     D1 = 1 / (1/p - 1)
//   ||x - x_k||_2 <= D2 R k^(1/2 - 1/p),   D2 = (2/p - 1)^(-1/2)
//   tail energy   <= 2 D1 R k^(1/2 - 1/p) + noise_norm
struct CompressibleBounds {
  double l1_tail = 0.0;
  double l2_tail = 0.0;
  double tail_energy = 0.0;
};

CompressibleBounds PCompressibleBounds(double p, double radius, int k,
                                       double noise_norm = 0.0);

// The error bounds a BoundReport can evaluate. "Step" forms bound one
// iteration, "closed" forms bound the error after l iterations.
enum class BoundKind {
  // (1 + (1 - C1^(l+1)) / (1 - C1)) C2 ||e|| after l + 1 iterations.
  kIterationCount,
  // 0.5 ||x - x^l|| + 7.5 ||e||  /  2^-l ||x|| + 15 ||e||.
  kSparseStep,
  kSparseClosed,
  // Adds ||x - D a_k|| + 7.5 ||A(x - D a_k)||  (15 in the closed form).
  kMismatchStep,
  kMismatchClosed,
  // ||A v|| <= sqrt(1 + delta_k)(||v||_2 + ||v||_1 / sqrt(k)).
  kRipUpper,
  // 8.5 sqrt(1 + delta_k) M(x)  (16 in the closed form).
  kModelMismatchStep,
  kModelMismatchClosed,
  // 10 e~  (20 in the closed form).
  kTailEnergyStep,
  kTailEnergyClosed,
  // ||AD(a - a_k)|| <= sqrt(1 + delta_k)(||a - a_k||_2 + ||a - a_k||_1/sqrt(k)).
  kCoefficientTail,
};

std::string ToString(BoundKind kind);
BoundKind ParseBoundKind(std::string_view name);

// Inputs for BoundReport. Only the fields a given kind reads must be set.
struct BoundInputs {
  Vec x;           // true signal
  Vec x_curr;      // x^l
  Vec x_next;      // x^{l+1}
  int iteration = 0;  // l
  int k = 1;
  double noise_norm = 0.0;  // ||e||
  // Restricted isometry constant of order 4k; the step and closed bounds
  // are asserted only when it is known and <= 0.1.
  std::optional<double> delta_4k;
  // Constant of order k, for the norm-expansion bounds.
  std::optional<double> delta_k;
  Vec dak;             // D a_k
  Mat sensing;         // A, or AD for kCoefficientTail
  double model_mismatch = 0.0;  // M(x)
  double tail_energy = 0.0;     // e~
  // kIterationCount constants.
  double c1 = 0.5;
  double c2 = 7.5;
  // kRipUpper / kCoefficientTail: the vector v (or a - a_k).
  Vec v;
};

struct BoundReport {
  BoundKind kind = BoundKind::kSparseStep;
  double lhs_error = 0.0;
  double rhs_bound = 0.0;
  bool condition_met = false;

  bool Holds(double slack = 0.0) const { return lhs_error <= rhs_bound + slack; }
  // One-line JSON object.
  std::string ToJson() const;
};

BoundReport MakeBoundReport(BoundKind kind, const BoundInputs& in);

// ceil(log(||x|| / ||e||) / log(1 / C1)). Requires 0 < C1 < 1, ||e|| > 0.
int IterationsForNoiseLevel(double x_norm, double noise_norm, double c1);

}  // namespace sssp
