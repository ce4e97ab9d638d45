#pragma once

// Signal space subspace pursuit.
//
// Each iteration
//   S1  u = A* r,            Omega = S_D(u, 3k)
//   S2  T = Omega U I
//   S3  a~ = argmin ||y - AD a||  over a supported on T,  x~ = D a~
//   S4  I = S_D(x~, k)
//   S5  a = argmin ||y - AD a||  over a supported on I,   x = D a
//   S6  r = y - A x
// where S_D is the k-atom projection selected by the config's scheme.

#include "sssp/dictionary.h"
#include "sssp/linalg.h"
#include "sssp/projection.h"
#include "sssp/signal.h"

#include <optional>
#include <string>
#include <vector>

namespace sssp {

struct SsspConfig {
  int k = 1;
  // Candidate budget in S1 is candidate_factor * k.
  int candidate_factor = 3;
  ProjectionScheme scheme;
  // 0 selects max(50, 10 k).
  int max_iter = 0;
  // Stop when ||x^{l+1} - x^l|| / ||x^l|| <= eps_rel.
  double eps_rel = 1e-6;
  // Known noise level, if any. Informational; the halting rule does not
  // depend on it.
  std::optional<double> noise_norm_hint;
  // Keep every iterate x^l in RecoveryResult::iterates.
  bool record_iterates = false;

  int EffectiveMaxIter() const;
};

enum class StopReason { kRelativeChange, kMaxIter, kResidualFloor };

std::string ToString(StopReason reason);

struct RecoveryResult {
  Vec x_hat;
  Support support;
  SparseCoef a_hat;
  int iterations = 0;
  // ||r^l|| for l = 0..iterations.
  std::vector<double> residual_trace;
  bool converged = false;
  StopReason stop_reason = StopReason::kMaxIter;
  // x^0 .. x^iterations when record_iterates is set.
  std::vector<Vec> iterates;
};

RecoveryResult SsspRecover(const SensingMatrix& a, const Dictionary& d,
                           const Vec& y, const SsspConfig& cfg);

// Same, with the product A D supplied (experiment trials share it).
RecoveryResult SsspRecover(const SensingMatrix& a, const Dictionary& d,
                           const Mat& ad, const Vec& y, const SsspConfig& cfg);

struct SparsitySweepEntry {
  int k = 0;
  double residual = 0.0;  // ||y - AD a_hat||
};

// Runs SsspRecover for every k in k_grid (ascending) and records the
// measurement residual.
std::vector<SparsitySweepEntry> SparsitySweep(const SensingMatrix& a,
                                              const Dictionary& d, const Vec& y,
                                              const std::vector<int>& k_grid,
                                              const SsspConfig& cfg_template);

// The grid value with the smallest residual; ties go to the smaller k.
int EstimateSparsity(const SensingMatrix& a, const Dictionary& d, const Vec& y,
                     const std::vector<int>& k_grid,
                     const SsspConfig& cfg_template);

}  // namespace sssp
