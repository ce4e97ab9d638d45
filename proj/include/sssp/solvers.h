#pragma once

// Coefficient-space recovery baselines on a generic matrix Phi (typically the
// combined operator A D): OMP, ROMP, CoSaMP, subspace pursuit and l1 basis
// pursuit.

#include "sssp/l1.h"
#include "sssp/linalg.h"
#include "sssp/signal.h"

#include <string>
#include <string_view>
#include <vector>

namespace sssp {

enum class SolverKind { kOmp, kRomp, kCosamp, kSp, kBp };

std::string ToString(SolverKind kind);
SolverKind ParseSolverKind(std::string_view name);

struct SolverSpec {
  SolverKind kind = SolverKind::kOmp;
  int k = 1;
  int max_iter = 100;
  // Stop once ||y - Phi a|| <= tol * ||y||.
  double tol = 1e-10;
  // Residual bound for bp (absolute).
  double bp_sigma = 0.0;
  // Least-squares re-fit of bp's output on its top-k support.
  bool bp_debias = true;
  L1Params l1;
};

struct SolveResult {
  SparseCoef coef;
  int iterations = 0;
  // False only when an iteration cap cut the solver short.
  bool converged = false;
  // ||y - Phi a|| of the initial and each accepted iterate.
  std::vector<double> residual_trace;
};

SolveResult Solve(const Mat& phi, const Vec& y, const SolverSpec& spec);

// ||truth - estimate|| <= rel_tol * ||truth|| (inclusive).
bool ExactRecovery(const SparseCoef& truth, const SparseCoef& estimate,
                   double rel_tol);
bool ExactRecovery(const Vec& truth, const Vec& estimate, double rel_tol);

// Top-k of |a_i| * ||Phi_i||: the atoms contributing most to Phi a.
Support LargestContributions(const Vec& a, const RealVec& column_norms, int k);

}  // namespace sssp
