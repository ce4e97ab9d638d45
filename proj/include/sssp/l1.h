#pragma once

#include "sssp/linalg.h"
#include "sssp/operator.h"

namespace sssp {

struct L1Params {
  // Augmented Lagrangian penalty.
  double penalty = 1.0;
  int max_iter = 2000;
  // Primal and dual residual tolerance (absolute + relative, on the
  // normalized problem).
  double tol = 1e-8;
  // When both are positive, also stop once the stable_support_k largest
  // weighted entries of the iterate have not changed for stable_checks
  // consecutive convergence checks (one check every 10 iterations). For
  // callers that only use the top-k support.
  int stable_support_k = 0;
  int stable_checks = 0;
};

struct L1Result {
  Vec coef;
  int iterations = 0;
  bool converged = false;
  // Stopped by the support-stability rule.
  bool support_stable = false;
};

// Solves  min ||a||_1  s.t.  ||y - Phi a||_2 <= sigma  with the alternating
// direction method of multipliers on the splitting
//   a = z          (z carries the l1 term, complex soft threshold)
//   Phi a - y = w  (w lives in the sigma ball)
// The a-update inverts I + Phi* Phi through the m x m matrix I + Phi Phi*.
// The problem is solved on y / ||Phi* y||_inf and rescaled, so the shrinkage
// threshold 1 / penalty is measured against the largest correlation.
// The penalty is adapted by residual balancing during the first
// min(1000, max_iter / 2) iterations and held fixed afterwards.
// `weights` (optional, length d) rank entries for the support-stability
// rule.
L1Result L1BallAdmm(const LinearOperator& phi, const Vec& y, double sigma,
                    const L1Params& params = {}, const RealVec& weights = {});

L1Result L1BallAdmm(const Mat& phi, const Vec& y, double sigma,
                    const L1Params& params = {}, const RealVec& weights = {});

// Complex magnitude shrinkage: v * max(0, 1 - t / |v|).
Vec ComplexShrink(const Vec& v, double threshold);

}  // namespace sssp
