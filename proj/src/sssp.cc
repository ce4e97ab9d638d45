#include "sssp/sssp.h"

#include <algorithm>
#include <stdexcept>

namespace sssp {

int SsspConfig::EffectiveMaxIter() const {
  return max_iter > 0 ? max_iter : std::max(50, 10 * k);
}

std::string ToString(StopReason reason) {
  switch (reason) {
    case StopReason::kRelativeChange: return "relative-change";
    case StopReason::kMaxIter: return "max-iter";
    case StopReason::kResidualFloor: return "residual-floor";
  }
  return "unknown";
}

RecoveryResult SsspRecover(const SensingMatrix& a, const Dictionary& d,
                           const Vec& y, const SsspConfig& cfg) {
  if (a.cols() != d.rows()) {
    throw DimensionError("SsspRecover: A columns != D rows");
  }
  return SsspRecover(a, d, a.matrix * d.matrix, y, cfg);
}

RecoveryResult SsspRecover(const SensingMatrix& a, const Dictionary& d,
                           const Mat& ad, const Vec& y, const SsspConfig& cfg) {
  if (a.cols() != d.rows() || ad.rows() != a.rows() || ad.cols() != d.cols()) {
    throw DimensionError("SsspRecover: A, D and AD shapes disagree");
  }
  if (y.size() != a.rows()) {
    throw DimensionError("SsspRecover: y length != rows of A");
  }
  if (cfg.k < 1 || cfg.k > d.cols()) {
    throw std::invalid_argument("SsspRecover: need 1 <= k <= d");
  }
  if (cfg.candidate_factor < 1 || !(cfg.eps_rel > 0.0)) {
    throw std::invalid_argument("SsspRecover: invalid config");
  }
  if (!AllFinite(y)) {
    throw std::invalid_argument("SsspRecover: y has non-finite entries");
  }

  const int max_iter = cfg.EffectiveMaxIter();
  const double y_norm = y.norm();
  const int n = d.rows();

  RecoveryResult out;
  Support kept;
  Vec coef = Vec::Zero(d.cols());
  Vec x = Vec::Zero(n);
  Vec r = y;
  out.residual_trace.push_back(r.norm());
  if (cfg.record_iterates) out.iterates.push_back(x);

  for (int it = 1; it <= max_iter; ++it) {
    // S1
    const Vec proxy = a.matrix.adjoint() * r;
    const int budget = std::min(cfg.candidate_factor * cfg.k, d.cols() - kept.size());
    const Support candidates = Project(d, proxy, budget, cfg.scheme).support;
    // S2, S3
    const Support merged = Support::Union(candidates, kept);
    const Vec wide = LeastSquaresOnSupport(ad, y, merged);
    const Vec x_wide = d.matrix * wide;
    // S4
    kept = Project(d, x_wide, cfg.k, cfg.scheme).support;
    // S5
    coef = LeastSquaresOnSupport(ad, y, kept);
    const Vec x_next = d.matrix * coef;
    // S6
    r = y - a.matrix * x_next;
    const double r_norm = r.norm();
    out.residual_trace.push_back(r_norm);
    if (cfg.record_iterates) out.iterates.push_back(x_next);
    out.iterations = it;

    const double x_prev_norm = x.norm();
    const double change = (x_next - x).norm();
    x = x_next;
    if (r_norm <= 1e-12 * y_norm) {
      out.converged = true;
      out.stop_reason = StopReason::kResidualFloor;
      break;
    }
    if (x_prev_norm > 0.0 && change <= cfg.eps_rel * x_prev_norm) {
      out.converged = true;
      out.stop_reason = StopReason::kRelativeChange;
      break;
    }
    if (it == max_iter) out.stop_reason = StopReason::kMaxIter;
  }

  out.x_hat = x;
  out.a_hat = SparseCoef::FromDense(coef);
  out.support = out.a_hat.support;
  return out;
}

std::vector<SparsitySweepEntry> SparsitySweep(const SensingMatrix& a,
                                              const Dictionary& d, const Vec& y,
                                              const std::vector<int>& k_grid,
                                              const SsspConfig& cfg_template) {
  if (k_grid.empty()) throw std::invalid_argument("SparsitySweep: empty grid");
  if (!std::is_sorted(k_grid.begin(), k_grid.end())) {
    throw std::invalid_argument("SparsitySweep: grid must be ascending");
  }
  const Mat ad = a.matrix * d.matrix;
  std::vector<SparsitySweepEntry> sweep;
  for (int k : k_grid) {
    SsspConfig cfg = cfg_template;
    cfg.k = k;
    const RecoveryResult res = SsspRecover(a, d, ad, y, cfg);
    sweep.push_back({k, (y - ad * res.a_hat.Dense()).norm()});
  }
  return sweep;
}

int EstimateSparsity(const SensingMatrix& a, const Dictionary& d, const Vec& y,
                     const std::vector<int>& k_grid,
                     const SsspConfig& cfg_template) {
  const auto sweep = SparsitySweep(a, d, y, k_grid, cfg_template);
  const SparsitySweepEntry* best = &sweep.front();
  for (const auto& entry : sweep) {
    if (entry.residual < best->residual) best = &entry;
  }
  return best->k;
}

}  // namespace sssp
