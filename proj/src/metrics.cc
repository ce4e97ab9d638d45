#include "sssp/metrics.h"

#include "sssp/random.h"

#include <Eigen/QR>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace sssp {

namespace {

double L1Norm(const Vec& v) { return v.cwiseAbs().sum(); }

// k distinct indices of [0, d), ascending.
std::vector<int> RandomSubset(int d, int k, Rng& rng) {
  std::vector<int> pool(d);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < k; ++i) std::swap(pool[i], pool[i + rng.UniformInt(d - i)]);
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

double GramDeviationOn(const Mat& gram, const std::vector<int>& comb) {
  const int s = static_cast<int>(comb.size());
  Mat sub(s, s);
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) sub(i, j) = gram(comb[i], comb[j]);
    sub(i, i) -= 1.0;
  }
  return HermitianSpectralNorm(sub);
}

Scalar Phase(Scalar z) {
  const double r = std::abs(z);
  return r > 0.0 ? z / r : Scalar(0.0);
}

struct AscentResult {
  double value = 0.0;
  bool converged = false;
};

// max ||G w||_1 over unit w, by w <- G^* sign(G w) / ||.||.
AscentResult SignAscent(const Mat& g, Vec w) {
  constexpr int kMaxIter = 1000;
  constexpr double kTol = 1e-13;
  AscentResult out;
  w.normalize();
  double value = L1Norm(g * w);
  for (int it = 0; it < kMaxIter; ++it) {
    const Vec gw = g * w;
    Vec s(gw.size());
    for (Eigen::Index i = 0; i < gw.size(); ++i) s(i) = Phase(gw(i));
    Vec next = g.adjoint() * s;
    const double norm = next.norm();
    if (norm == 0.0) break;
    next /= norm;
    const double next_value = L1Norm(g * next);
    w = next;
    if (next_value - value <= kTol * std::max(1.0, next_value)) {
      value = std::max(value, next_value);
      out.converged = true;
      break;
    }
    value = next_value;
  }
  out.value = value;
  return out;
}

bool IsReal(const Mat& m) { return m.imag().cwiseAbs().maxCoeff() == 0.0; }

}  // namespace

std::string ToString(EstimateMethod method) {
  return method == EstimateMethod::kBruteforce ? "bruteforce" : "sampled";
}

EstimateMethod ParseEstimateMethod(std::string_view name) {
  if (name == "bruteforce") return EstimateMethod::kBruteforce;
  if (name == "sampled") return EstimateMethod::kSampled;
  throw std::invalid_argument("unknown estimate method: " + std::string(name));
}

DripEstimate RestrictedIsometryConstant(const Mat& phi, int k,
                                        EstimateMethod method, int trials,
                                        std::uint64_t seed, std::uint64_t cap) {
  if (k < 1) throw std::invalid_argument("RestrictedIsometryConstant: k < 1");
  const int d = static_cast<int>(phi.cols());
  const int size = std::min(k, d);
  const Mat gram = phi.adjoint() * phi;
  DripEstimate out;
  out.k = k;
  out.method = method;
  if (method == EstimateMethod::kBruteforce) {
    if (Binomial(d, size) > cap) {
      throw BudgetExceeded("RestrictedIsometryConstant: C(d, k) exceeds the cap");
    }
    std::vector<int> comb(size);
    std::iota(comb.begin(), comb.end(), 0);
    do {
      out.delta = std::max(out.delta, GramDeviationOn(gram, comb));
      ++out.supports_checked;
    } while (NextCombination(comb, d));
    return out;
  }
  if (trials < 1) throw std::invalid_argument("RestrictedIsometryConstant: trials < 1");
  Rng rng(DeriveSeed(seed, {0x71}));
  for (int t = 0; t < trials; ++t) {
    out.delta = std::max(out.delta, GramDeviationOn(gram, RandomSubset(d, size, rng)));
    ++out.supports_checked;
  }
  return out;
}

DripEstimate DripConstant(const SensingMatrix& a, const Dictionary& d, int k,
                          EstimateMethod method, int trials, std::uint64_t seed,
                          std::uint64_t cap) {
  if (a.cols() != d.rows()) throw DimensionError("DripConstant: A columns != D rows");
  return RestrictedIsometryConstant(a.matrix * d.matrix, k, method, trials, seed, cap);
}

LocalizationEstimate LocalizationFactor(const Dictionary& d, int k,
                                        EstimateMethod method, int samples,
                                        std::uint64_t seed, int restarts,
                                        std::uint64_t cap) {
  if (k < 1 || k > d.cols()) {
    throw std::invalid_argument("LocalizationFactor: need 1 <= k <= d");
  }
  if (restarts < 1) throw std::invalid_argument("LocalizationFactor: restarts < 1");
  const bool real = IsReal(d.matrix);
  const double root_k = std::sqrt(static_cast<double>(k));
  LocalizationEstimate out;

  auto visit = [&](const std::vector<int>& comb, std::uint64_t label) {
    Eigen::ColPivHouseholderQR<Mat> qr(GatherColumns(d.matrix, Support(comb)));
    qr.setThreshold(1e-10);
    const int rank = static_cast<int>(qr.rank());
    if (rank == 0) return;
    const Mat q = qr.householderQ() * Mat::Identity(d.rows(), rank);
    const Mat g = d.matrix.adjoint() * q;
    Rng rng(DeriveSeed(seed, {0x72, label}));
    for (int r = 0; r < restarts; ++r) {
      Vec w(rank);
      for (int i = 0; i < rank; ++i) {
        w(i) = real ? Scalar(rng.Normal()) : rng.ComplexNormal();
      }
      if (w.norm() == 0.0) continue;
      const AscentResult res = SignAscent(g, w);
      out.value = std::max(out.value, res.value / root_k);
      out.converged = out.converged && res.converged;
    }
    ++out.supports_checked;
  };

  if (method == EstimateMethod::kBruteforce) {
    if (Binomial(d.cols(), k) > cap) {
      throw BudgetExceeded("LocalizationFactor: C(d, k) exceeds the cap");
    }
    std::vector<int> comb(k);
    std::iota(comb.begin(), comb.end(), 0);
    std::uint64_t label = 0;
    do {
      visit(comb, label++);
    } while (NextCombination(comb, d.cols()));
    return out;
  }
  if (samples < 1) throw std::invalid_argument("LocalizationFactor: samples < 1");
  Rng picker(DeriveSeed(seed, {0x73}));
  for (int s = 0; s < samples; ++s) {
    visit(RandomSubset(d.cols(), k, picker), static_cast<std::uint64_t>(s));
  }
  return out;
}

double TailEnergy(const Vec& x, int k, double noise_norm) {
  if (k < 1 || k > x.size()) throw std::invalid_argument("TailEnergy: need 1 <= k <= n");
  if (noise_norm < 0.0) throw std::invalid_argument("TailEnergy: noise_norm < 0");
  Vec tail = x;
  for (int i : TopKIndices(x, k)) tail(i) = 0.0;
  return tail.norm() + L1Norm(tail) / std::sqrt(static_cast<double>(k)) + noise_norm;
}

double ModelMismatch(const Vec& x, const Dictionary& d, int k,
                     const ProjectionScheme& scheme) {
  if (k < 1 || k > d.cols()) throw std::invalid_argument("ModelMismatch: need 1 <= k <= d");
  const ProjectionResult proj = Project(d, x, k, scheme);
  const Vec diff = x - proj.projected;
  return diff.norm() + L1Norm(diff) / std::sqrt(static_cast<double>(k));
}

double RecoveryError(const Vec& x, const Vec& x_hat) {
  if (x.size() != x_hat.size()) throw DimensionError("RecoveryError: length mismatch");
  const double norm = x.norm();
  if (norm == 0.0) throw std::invalid_argument("RecoveryError: zero true signal");
  return (x - x_hat).norm() / norm;
}

double RSnr(const Vec& x, const Vec& x_hat) {
  if (x.size() != x_hat.size()) throw DimensionError("RSnr: length mismatch");
  const double err = (x - x_hat).norm();
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(x.norm() / err);
}

double RSnrTailCeiling(const Vec& x, int k, double noise_norm) {
  const double tail = TailEnergy(x, k, noise_norm);
  if (tail == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(x.norm() / tail);
}

double GaussianC0(double eps) { return eps * eps / 4.0 - eps * eps * eps / 6.0; }

namespace {

std::int64_t MeasurementCount(double numerator, double delta, const C0Function& c0) {
  const double c = c0(delta / std::sqrt(2.0));
  if (!(c > 0.0)) throw std::invalid_argument("MeasurementBound: c0 must be positive");
  return static_cast<std::int64_t>(std::ceil(numerator / c));
}

void CheckUnitInterval(double delta, double alpha) {
  if (!(delta > 0.0 && delta < 1.0) || !(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("MeasurementBound: delta and alpha must lie in (0, 1)");
  }
}

}  // namespace

std::int64_t MeasurementBound(int k, int d, double delta, double alpha,
                              const C0Function& c0) {
  CheckUnitInterval(delta, alpha);
  if (k < 1 || d < k) throw std::invalid_argument("MeasurementBound: need 1 <= k <= d");
  const double numerator =
      2.0 * k * std::log(42.0 * std::exp(1.0) * d / (delta * k)) + std::log(4.0 / alpha);
  return MeasurementCount(numerator, delta, c0);
}

std::int64_t MeasurementBoundSubspace(int k, double delta, double alpha,
                                      const C0Function& c0) {
  CheckUnitInterval(delta, alpha);
  if (k < 1) throw std::invalid_argument("MeasurementBoundSubspace: k < 1");
  const double numerator = 2.0 * k * std::log(42.0 / delta) + std::log(4.0 / alpha);
  return MeasurementCount(numerator, delta, c0);
}

ConvergenceConstantsResult ConvergenceConstants(double delta4k, double lambda1,
                                                double lambda2) {
  if (!(delta4k >= 0.0 && delta4k < 1.0)) {
    throw std::invalid_argument("ConvergenceConstants: need 0 <= delta < 1");
  }
  ConvergenceConstantsResult out;
  out.c1 = ((2.0 + lambda1) * delta4k + lambda1) * (2.0 + lambda2) *
           std::sqrt((1.0 + delta4k) / (1.0 - delta4k));
  out.c2 = (2.0 + lambda2) * ((2.0 + lambda1) * (1.0 + delta4k) + 2.0) /
           std::sqrt(1.0 - delta4k);
  return out;
}

CompressibleBounds PCompressibleBounds(double p, double radius, int k,
                                       double noise_norm) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("PCompressibleBounds: p outside (0, 1)");
  if (k < 1) throw std::invalid_argument("PCompressibleBounds: k < 1");
  const double d1 = 1.0 / (1.0 / p - 1.0);
  const double d2 = 1.0 / std::sqrt(2.0 / p - 1.0);
  CompressibleBounds out;
  out.l1_tail = d1 * radius * std::pow(k, 1.0 - 1.0 / p);
  out.l2_tail = d2 * radius * std::pow(k, 0.5 - 1.0 / p);
  out.tail_energy = 2.0 * d1 * radius * std::pow(k, 0.5 - 1.0 / p) + noise_norm;
  return out;
}

namespace {

constexpr BoundKind kAllBounds[] = {
    BoundKind::kIterationCount,      BoundKind::kSparseStep,
    BoundKind::kSparseClosed,        BoundKind::kMismatchStep,
    BoundKind::kMismatchClosed,      BoundKind::kRipUpper,
    BoundKind::kModelMismatchStep,   BoundKind::kModelMismatchClosed,
    BoundKind::kTailEnergyStep,      BoundKind::kTailEnergyClosed,
    BoundKind::kCoefficientTail,
};

void RequireLength(const Vec& v, Eigen::Index n, const char* what) {
  if (v.size() != n) {
    throw DimensionError(std::string("MakeBoundReport: ") + what + " has the wrong length");
  }
}

}  // namespace

std::string ToString(BoundKind kind) {
  switch (kind) {
    case BoundKind::kIterationCount: return "iteration-count";
    case BoundKind::kSparseStep: return "sparse-step";
    case BoundKind::kSparseClosed: return "sparse-closed";
    case BoundKind::kMismatchStep: return "mismatch-step";
    case BoundKind::kMismatchClosed: return "mismatch-closed";
    case BoundKind::kRipUpper: return "rip-upper";
    case BoundKind::kModelMismatchStep: return "model-mismatch-step";
    case BoundKind::kModelMismatchClosed: return "model-mismatch-closed";
    case BoundKind::kTailEnergyStep: return "tail-energy-step";
    case BoundKind::kTailEnergyClosed: return "tail-energy-closed";
    case BoundKind::kCoefficientTail: return "coefficient-tail";
  }
  return "unknown";
}

BoundKind ParseBoundKind(std::string_view name) {
  for (BoundKind kind : kAllBounds) {
    if (name == ToString(kind)) return kind;
  }
  throw std::invalid_argument("unknown bound: " + std::string(name));
}

std::string BoundReport::ToJson() const {
  nlohmann::json j;
  j["bound"] = ToString(kind);
  j["lhs"] = lhs_error;
  j["rhs"] = rhs_bound;
  j["condition_met"] = condition_met;
  j["holds"] = Holds();
  return j.dump();
}

int IterationsForNoiseLevel(double x_norm, double noise_norm, double c1) {
  if (!(c1 > 0.0 && c1 < 1.0) || !(noise_norm > 0.0) || !(x_norm > 0.0)) {
    throw std::invalid_argument("IterationsForNoiseLevel: need 0 < C1 < 1 and positive norms");
  }
  return static_cast<int>(std::ceil(std::log(x_norm / noise_norm) / std::log(1.0 / c1)));
}

BoundReport MakeBoundReport(BoundKind kind, const BoundInputs& in) {
  BoundReport out;
  out.kind = kind;
  const double e = in.noise_norm;
  const double halving = std::ldexp(1.0, -in.iteration);
  const bool drip_ok = in.delta_4k.has_value() && *in.delta_4k <= 0.1;
  const double root_k = std::sqrt(static_cast<double>(in.k));
  auto expansion = [&]() {
    if (!in.delta_k) throw std::invalid_argument("MakeBoundReport: delta_k required");
    return std::sqrt(1.0 + *in.delta_k);
  };
  auto step_lhs = [&]() {
    RequireLength(in.x_next, in.x.size(), "x_next");
    return (in.x - in.x_next).norm();
  };
  auto step_prev = [&]() {
    RequireLength(in.x_curr, in.x.size(), "x_curr");
    return (in.x - in.x_curr).norm();
  };
  // The closed forms bound ||x - x^l||.
  auto closed_lhs = [&]() { return step_prev(); };
  auto mismatch = [&]() {
    RequireLength(in.dak, in.x.size(), "dak");
    return in.x - in.dak;
  };
  auto measured_mismatch = [&]() {
    const Vec diff = mismatch();
    if (in.sensing.cols() != diff.size()) {
      throw DimensionError("MakeBoundReport: sensing matrix does not match x");
    }
    return (in.sensing * diff).norm();
  };

  switch (kind) {
    case BoundKind::kIterationCount:
      out.lhs_error = step_lhs();
      out.rhs_bound = (1.0 + (1.0 - std::pow(in.c1, in.iteration + 1)) / (1.0 - in.c1)) *
                      in.c2 * e;
      out.condition_met = drip_ok;
      break;
    case BoundKind::kSparseStep:
      out.lhs_error = step_lhs();
      out.rhs_bound = 0.5 * step_prev() + 7.5 * e;
      out.condition_met = drip_ok;
      break;
    case BoundKind::kSparseClosed:
      out.lhs_error = closed_lhs();
      out.rhs_bound = halving * in.x.norm() + 15.0 * e;
      out.condition_met = drip_ok;
      break;
    case BoundKind::kMismatchStep:
      out.lhs_error = step_lhs();
      out.rhs_bound = 0.5 * step_prev() + mismatch().norm() +
                      7.5 * measured_mismatch() + 7.5 * e;
      out.condition_met = drip_ok;
      break;
    case BoundKind::kMismatchClosed:
      out.lhs_error = closed_lhs();
      out.rhs_bound = halving * in.dak.norm() + mismatch().norm() +
                      15.0 * measured_mismatch() + 15.0 * e;
      out.condition_met = drip_ok;
      break;
    case BoundKind::kRipUpper:
    case BoundKind::kCoefficientTail:
      if (in.sensing.cols() != in.v.size()) {
        throw DimensionError("MakeBoundReport: sensing matrix does not match v");
      }
      out.lhs_error = (in.sensing * in.v).norm();
      out.rhs_bound = expansion() * (in.v.norm() + L1Norm(in.v) / root_k);
      out.condition_met = true;
      break;
    case BoundKind::kModelMismatchStep:
      out.lhs_error = step_lhs();
      out.rhs_bound = 0.5 * step_prev() + 7.5 * e + 8.5 * expansion() * in.model_mismatch;
      out.condition_met = drip_ok;
      break;
    case BoundKind::kModelMismatchClosed:
      out.lhs_error = closed_lhs();
      out.rhs_bound = halving * in.dak.norm() + 15.0 * e +
                      16.0 * expansion() * in.model_mismatch;
      out.condition_met = drip_ok;
      break;
    case BoundKind::kTailEnergyStep:
      out.lhs_error = step_lhs();
      out.rhs_bound = 0.5 * step_prev() + 10.0 * in.tail_energy;
      out.condition_met = drip_ok;
      break;
    case BoundKind::kTailEnergyClosed:
      out.lhs_error = closed_lhs();
      out.rhs_bound = halving * in.dak.norm() + 20.0 * in.tail_energy;
      out.condition_met = drip_ok;
      break;
  }
  return out;
}

}  // namespace sssp
