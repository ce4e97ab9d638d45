#include "sssp/l1.h"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <optional>

namespace sssp {

Vec ComplexShrink(const Vec& v, double threshold) {
  Vec out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    out(i) = mag > threshold ? v(i) * ((mag - threshold) / mag) : Scalar(0.0);
  }
  return out;
}

namespace {

Vec ProjectToBall(const Vec& v, double radius) {
  const double norm = v.norm();
  if (norm <= radius) return v;
  return v * (radius / norm);
}

// Convergence is checked on this cadence; the dual residual costs an extra
// product with Phi*.
constexpr int kCheckEvery = 10;
constexpr double kBalance = 10.0;
constexpr double kStretch = 2.0;
constexpr int kBalanceWindow = 1000;

// Solves (I + Phi Phi*) q = b, by a scalar when Phi Phi* = c I.
class OuterSolver {
 public:
  explicit OuterSolver(const LinearOperator& phi) : bound_(phi.TightFrameBound()) {
    if (!bound_) {
      gram_ = phi.OuterGram();
      Mat shifted = gram_;
      shifted.diagonal().array() += 1.0;
      chol_.compute(shifted);
    }
  }
  Vec Gram(const Vec& t) const { return bound_ ? Vec(*bound_ * t) : Vec(gram_ * t); }
  Vec Solve(const Vec& b) const {
    return bound_ ? Vec(b / (1.0 + *bound_)) : Vec(chol_.solve(b));
  }

 private:
  std::optional<double> bound_;
  Mat gram_;
  Eigen::LLT<Mat> chol_;
};

}  // namespace

L1Result L1BallAdmm(const Mat& phi, const Vec& y, double sigma,
                    const L1Params& params, const RealVec& weights) {
  return L1BallAdmm(DenseOperator(phi), y, sigma, params, weights);
}

L1Result L1BallAdmm(const LinearOperator& phi, const Vec& y, double sigma,
                    const L1Params& params, const RealVec& weights) {
  if (y.size() != phi.rows()) {
    throw DimensionError("L1BallAdmm: y length != rows");
  }
  if (weights.size() != 0 && weights.size() != phi.cols()) {
    throw DimensionError("L1BallAdmm: weights length != columns");
  }
  if (!(sigma >= 0.0) || !(params.penalty > 0.0) || params.max_iter < 1) {
    throw std::invalid_argument("L1BallAdmm: invalid parameters");
  }
  const Eigen::Index m = phi.rows();
  const Eigen::Index d = phi.cols();
  L1Result result;
  result.coef = Vec::Zero(d);
  const double y_norm = y.norm();
  if (y_norm == 0.0 || sigma >= y_norm) {
    // a = 0 is feasible and optimal.
    result.converged = true;
    return result;
  }
  const Vec corr = phi.ApplyAdjoint(y);
  const double scale = corr.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) {
    // y is orthogonal to the range of Phi; nothing can reduce the residual.
    result.converged = true;
    return result;
  }
  const Vec target = y / scale;
  const double radius = sigma / scale;
  double rho = params.penalty;
  const double tol = params.tol;
  const OuterSolver outer(phi);
  const int balance_until = std::min(kBalanceWindow, params.max_iter / 2);
  const bool watch = params.stable_support_k > 0 && params.stable_checks > 0;
  const int watch_k = std::min<int>(params.stable_support_k, static_cast<int>(d));
  Support watched;
  int stable = 0;

  Vec z = Vec::Zero(d), u = Vec::Zero(d);
  Vec w = Vec::Zero(m), v = Vec::Zero(m);
  Vec a(d), phi_a(m);

  for (int it = 1; it <= params.max_iter; ++it) {
    // a-update: (I + Phi* Phi) a = (z - u) + Phi* t,  t = y + w - v.
    // With b the right-hand side, a = b - Phi* (I + G)^{-1} Phi b, and
    // Phi b = Phi (z - u) + G t.
    const Vec base = z - u;
    const Vec t = target + w - v;
    const Vec phi_base = phi.Apply(base);
    const Vec q = t - outer.Solve(phi_base + outer.Gram(t));
    a = base + phi.ApplyAdjoint(q);
    phi_a = phi_base + outer.Gram(q);

    const Vec z_old = z;
    const Vec w_old = w;
    z = ComplexShrink(a + u, 1.0 / rho);
    const Vec fit = phi_a - target;
    w = ProjectToBall(fit + v, radius);

    u += a - z;
    v += fit - w;
    result.iterations = it;

    if (it % kCheckEvery == 0 || it == params.max_iter) {
      const double primal =
          std::sqrt((a - z).squaredNorm() + (fit - w).squaredNorm());
      const double dual =
          rho * ((z - z_old) + phi.ApplyAdjoint(w - w_old)).norm();
      const double scale_primal =
          std::max(std::sqrt(a.squaredNorm() + phi_a.squaredNorm()),
                   std::sqrt(z.squaredNorm() + (w + target).squaredNorm()));
      const double scale_dual = rho * (u + phi.ApplyAdjoint(v)).norm();
      if (primal <= tol * (1.0 + scale_primal) &&
          dual <= tol * (1.0 + scale_dual)) {
        result.converged = true;
        break;
      }
      // Residual balancing. The a-update does not depend on rho, so only
      // the scaled duals need rescaling. Balancing is frozen after the
      // window; left running it keeps inflating rho near the solution.
      if (it <= balance_until) {
        if (primal > kBalance * dual) {
          rho *= kStretch;
          u /= kStretch;
          v /= kStretch;
        } else if (dual > kBalance * primal) {
          rho /= kStretch;
          u *= kStretch;
          v *= kStretch;
        }
      }
      if (watch) {
        RealVec score = z.cwiseAbs();
        if (weights.size() != 0) score = score.cwiseProduct(weights);
        Support top = TopKIndices(score, watch_k);
        stable = top == watched ? stable + 1 : 0;
        watched = std::move(top);
        if (stable >= params.stable_checks) {
          result.support_stable = true;
          break;
        }
      }
    }
  }
  result.coef = z * scale;
  return result;
}

}  // namespace sssp
