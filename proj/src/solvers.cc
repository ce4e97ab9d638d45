#include "sssp/solvers.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sssp {

std::string ToString(SolverKind kind) {
  switch (kind) {
    case SolverKind::kOmp: return "omp";
    case SolverKind::kRomp: return "romp";
    case SolverKind::kCosamp: return "cosamp";
    case SolverKind::kSp: return "sp";
    case SolverKind::kBp: return "bp";
  }
  return "unknown";
}

SolverKind ParseSolverKind(std::string_view name) {
  for (auto kind : {SolverKind::kOmp, SolverKind::kRomp, SolverKind::kCosamp,
                    SolverKind::kSp, SolverKind::kBp}) {
    if (name == ToString(kind)) return kind;
  }
  throw std::invalid_argument("unknown solver: " + std::string(name));
}

Support LargestContributions(const Vec& a, const RealVec& column_norms, int k) {
  const RealVec weighted = a.cwiseAbs().cwiseProduct(column_norms);
  return TopKIndices(weighted, std::min<int>(k, static_cast<int>(a.size())));
}

namespace {

struct Problem {
  const Mat& phi;
  const Vec& y;
  RealVec norms;
  double y_norm;
  int cols() const { return static_cast<int>(phi.cols()); }
  double Residual(const Vec& a) const { return (y - phi * a).norm(); }
  bool Small(double residual, double tol) const {
    return residual <= tol * y_norm;
  }
};

SparseCoef Restrict(const Vec& a, const Support& support) {
  SparseCoef c;
  c.length = static_cast<int>(a.size());
  std::vector<int> idx;
  for (int i : support) {
    if (a(i) != Scalar(0.0)) {
      idx.push_back(i);
      c.values.push_back(a(i));
    }
  }
  c.support = Support(std::move(idx));
  return c;
}

SolveResult SolveOmp(const Problem& p, const SolverSpec& spec) {
  SolveResult out;
  Support support;
  Vec a = Vec::Zero(p.cols());
  Vec r = p.y;
  out.residual_trace.push_back(r.norm());
  const int budget = std::min(spec.k, p.cols());
  while (support.size() < budget && !p.Small(out.residual_trace.back(), spec.tol)) {
    RealVec score = NormalizedCorrelations(p.phi, r, p.norms);
    for (int i : support) score(i) = -1.0;
    Eigen::Index best = 0;
    score.maxCoeff(&best);  // first maximum: lowest index on ties
    if (!(score(best) > 0.0)) break;
    support = Support::Union(support, Support{static_cast<int>(best)});
    a = LeastSquaresOnSupport(p.phi, p.y, support);
    r = p.y - p.phi * a;
    out.residual_trace.push_back(r.norm());
    ++out.iterations;
  }
  out.converged = true;
  out.coef = Restrict(a, support);
  return out;
}

// Regularization step of ROMP: among the candidates (sorted by decreasing
// score), the window of comparable scores (max <= 2 min) with the largest
// energy.
std::vector<int> ComparableGroup(const RealVec& score, std::vector<int> cand) {
  std::sort(cand.begin(), cand.end(), [&score](int a, int b) {
    if (score(a) != score(b)) return score(a) > score(b);
    return a < b;
  });
  double best_energy = -1.0;
  std::size_t best_lo = 0, best_hi = 0;
  std::size_t hi = 0;
  double energy = 0.0;
  for (std::size_t lo = 0; lo < cand.size(); ++lo) {
    if (hi < lo) {
      hi = lo;
      energy = 0.0;
    }
    while (hi < cand.size() && score(cand[lo]) <= 2.0 * score(cand[hi])) {
      energy += score(cand[hi]) * score(cand[hi]);
      ++hi;
    }
    if (energy > best_energy) {
      best_energy = energy;
      best_lo = lo;
      best_hi = hi;
    }
    energy -= score(cand[lo]) * score(cand[lo]);
  }
  return {cand.begin() + best_lo, cand.begin() + best_hi};
}

SolveResult SolveRomp(const Problem& p, const SolverSpec& spec) {
  SolveResult out;
  Support support;
  Vec a = Vec::Zero(p.cols());
  Vec r = p.y;
  out.residual_trace.push_back(r.norm());
  const int cap = std::min(2 * spec.k, p.cols());
  bool capped = true;
  for (int it = 0; it < spec.max_iter; ++it) {
    if (support.size() >= cap || p.Small(out.residual_trace.back(), spec.tol)) {
      capped = false;
      break;
    }
    RealVec score = NormalizedCorrelations(p.phi, r, p.norms);
    for (int i : support) score(i) = 0.0;
    std::vector<int> cand;
    for (int i : TopKIndices(score, std::min(spec.k, p.cols()))) {
      if (score(i) > 0.0) cand.push_back(i);
    }
    if (cand.empty()) {
      capped = false;
      break;
    }
    support = Support::Union(support,
                             Support::FromUnsorted(ComparableGroup(score, cand)));
    a = LeastSquaresOnSupport(p.phi, p.y, support);
    r = p.y - p.phi * a;
    out.residual_trace.push_back(r.norm());
    ++out.iterations;
  }
  if (support.size() > spec.k) {
    support = LargestContributions(a, p.norms, spec.k);
    a = LeastSquaresOnSupport(p.phi, p.y, support);
    out.residual_trace.push_back(p.Residual(a));
  }
  out.converged = !capped;
  out.coef = Restrict(a, support);
  return out;
}

SolveResult SolveCosamp(const Problem& p, const SolverSpec& spec) {
  SolveResult out;
  const int k = std::min(spec.k, p.cols());
  const int candidates = std::min(2 * k, p.cols());
  Support support, best_support;
  Vec r = p.y;
  // Best pruned iterate. On coherent dictionaries every pruned iterate can
  // be worse than a = 0, so the first one is always accepted; the final
  // re-fit on its support still beats ||y||.
  double best = std::numeric_limits<double>::infinity();
  out.residual_trace.push_back(p.y_norm);
  bool capped = true;
  for (int it = 0; it < spec.max_iter; ++it) {
    if (p.Small(std::min(best, p.y_norm), spec.tol)) {
      capped = false;
      break;
    }
    const RealVec score = NormalizedCorrelations(p.phi, r, p.norms);
    const Support merged = Support::Union(TopKIndices(score, candidates), support);
    const Vec b = LeastSquaresOnSupport(p.phi, p.y, merged);
    const Support pruned = LargestContributions(b, p.norms, k);
    Vec next = Vec::Zero(p.cols());
    for (int i : pruned) next(i) = b(i);
    r = p.y - p.phi * next;
    const double residual = r.norm();
    ++out.iterations;
    if (residual < best) {
      best = residual;
      best_support = pruned;
    }
    out.residual_trace.push_back(std::min(best, out.residual_trace.back()));
    const bool stalled = pruned == support;
    support = pruned;
    if (stalled) {
      capped = false;
      break;
    }
  }
  // Re-fit on the best support; this can only lower the residual.
  Vec refit = LeastSquaresOnSupport(p.phi, p.y, best_support);
  const double refit_residual = p.Residual(refit);
  if (refit_residual < out.residual_trace.back()) {
    out.residual_trace.push_back(refit_residual);
  }
  out.converged = !capped;
  out.coef = Restrict(refit, best_support);
  return out;
}

SolveResult SolveSp(const Problem& p, const SolverSpec& spec) {
  SolveResult out;
  const int k = std::min(spec.k, p.cols());
  Support support = TopKIndices(NormalizedCorrelations(p.phi, p.y, p.norms), k);
  Vec a = LeastSquaresOnSupport(p.phi, p.y, support);
  Vec r = p.y - p.phi * a;
  double residual = r.norm();
  out.residual_trace.push_back(p.y_norm);
  out.residual_trace.push_back(residual);
  out.iterations = 1;
  bool capped = true;
  for (int it = 1; it < spec.max_iter; ++it) {
    if (p.Small(residual, spec.tol)) {
      capped = false;
      break;
    }
    const Support merged = Support::Union(
        support, TopKIndices(NormalizedCorrelations(p.phi, r, p.norms), k));
    const Vec b = LeastSquaresOnSupport(p.phi, p.y, merged);
    const Support pruned = LargestContributions(b, p.norms, k);
    const Vec next = LeastSquaresOnSupport(p.phi, p.y, pruned);
    const Vec next_r = p.y - p.phi * next;
    const double next_residual = next_r.norm();
    ++out.iterations;
    if (!(next_residual < residual)) {
      capped = false;
      break;
    }
    support = pruned;
    a = next;
    r = next_r;
    residual = next_residual;
    out.residual_trace.push_back(residual);
  }
  if (p.Small(residual, spec.tol)) capped = false;
  out.converged = !capped;
  out.coef = Restrict(a, support);
  return out;
}

SolveResult SolveBp(const Problem& p, const SolverSpec& spec) {
  SolveResult out;
  out.residual_trace.push_back(p.y_norm);
  const L1Result l1 = L1BallAdmm(p.phi, p.y, spec.bp_sigma, spec.l1);
  out.iterations = l1.iterations;
  out.converged = l1.converged;
  const Support top = LargestContributions(l1.coef, p.norms, spec.k);
  Vec a;
  if (spec.bp_debias) {
    a = LeastSquaresOnSupport(p.phi, p.y, top);
  } else {
    a = Vec::Zero(p.cols());
    for (int i : top) a(i) = l1.coef(i);
  }
  out.residual_trace.push_back(p.Residual(a));
  out.coef = Restrict(a, top);
  return out;
}

}  // namespace

SolveResult Solve(const Mat& phi, const Vec& y, const SolverSpec& spec) {
  if (y.size() != phi.rows()) {
    throw DimensionError("Solve: y length != rows of Phi");
  }
  if (spec.k < 1 || spec.k > phi.cols()) {
    throw std::invalid_argument("Solve: need 1 <= k <= columns");
  }
  if (!(spec.tol > 0.0) || spec.max_iter < 1) {
    throw std::invalid_argument("Solve: need tol > 0 and max_iter >= 1");
  }
  const Problem p{phi, y, ColumnNorms(phi), y.norm()};
  switch (spec.kind) {
    case SolverKind::kOmp: return SolveOmp(p, spec);
    case SolverKind::kRomp: return SolveRomp(p, spec);
    case SolverKind::kCosamp: return SolveCosamp(p, spec);
    case SolverKind::kSp: return SolveSp(p, spec);
    case SolverKind::kBp: return SolveBp(p, spec);
  }
  throw std::invalid_argument("Solve: unknown solver kind");
}

bool ExactRecovery(const Vec& truth, const Vec& estimate, double rel_tol) {
  if (truth.size() != estimate.size()) {
    throw DimensionError("ExactRecovery: length mismatch");
  }
  return (truth - estimate).norm() <= rel_tol * truth.norm();
}

bool ExactRecovery(const SparseCoef& truth, const SparseCoef& estimate,
                   double rel_tol) {
  if (truth.length != estimate.length) {
    throw DimensionError("ExactRecovery: length mismatch");
  }
  return ExactRecovery(truth.Dense(), estimate.Dense(), rel_tol);
}

}  // namespace sssp
