#include "sssp/signal.h"

#include "sssp/random.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sssp {

Vec SparseCoef::Dense() const {
  Vec out = Vec::Zero(length);
  for (int j = 0; j < support.size(); ++j) out(support[j]) = values[j];
  return out;
}

SparseCoef SparseCoef::FromDense(const Vec& dense) {
  SparseCoef c;
  c.length = static_cast<int>(dense.size());
  std::vector<int> idx;
  for (Eigen::Index i = 0; i < dense.size(); ++i) {
    if (dense(i) != Scalar(0.0)) {
      idx.push_back(static_cast<int>(i));
      c.values.push_back(dense(i));
    }
  }
  c.support = Support(std::move(idx));
  return c;
}

std::string ToString(SupportKind kind) {
  switch (kind) {
    case SupportKind::kUniform: return "uniform";
    case SupportKind::kSeparated: return "separated";
    case SupportKind::kClustered: return "clustered";
  }
  return "unknown";
}

SupportKind ParseSupportKind(std::string_view name) {
  for (auto kind : {SupportKind::kUniform, SupportKind::kSeparated,
                    SupportKind::kClustered}) {
    if (name == ToString(kind)) return kind;
  }
  throw std::invalid_argument("unknown support model: " + std::string(name));
}

int CircularDistance(int a, int b, int d) {
  const int diff = std::abs(a - b) % d;
  return std::min(diff, d - diff);
}

int EffectiveMinGap(const SupportModel& model, int d, int k) {
  if (model.min_gap > 0) return model.min_gap;
  return k > 0 ? std::max(1, d / (2 * k)) : 1;
}

namespace {

std::vector<int> UniformSupport(int d, int k, Rng& rng) {
  // Partial Fisher-Yates.
  std::vector<int> pool(d);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < k; ++i) {
    const int j = i + rng.UniformInt(d - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

// Every valid circular arrangement is a rotation offset plus a composition
// of the free slack d - k*gap into k trailing gaps. Each valid set arises
// from exactly k (offset, composition) pairs, one per choice of which element
// is listed first, so uniform offsets and uniform compositions give a uniform
// valid set.
std::vector<int> SeparatedSupport(int d, int k, int gap, Rng& rng) {
  const int slack = d - k * gap;
  // Uniform composition of `slack` into k non-negative parts via stars and
  // bars: choose k-1 bar positions among slack + k - 1 slots.
  std::vector<int> bars = UniformSupport(slack + k - 1, k - 1, rng);
  std::sort(bars.begin(), bars.end());
  std::vector<int> extra(k);
  int prev = -1;
  for (int i = 0; i < k - 1; ++i) {
    extra[i] = bars[i] - prev - 1;
    prev = bars[i];
  }
  extra[k - 1] = slack + k - 1 - prev - 1;

  const int offset = rng.UniformInt(d);
  std::vector<int> out(k);
  int pos = offset;
  for (int i = 0; i < k; ++i) {
    out[i] = pos % d;
    pos += gap + extra[i];
  }
  return out;
}

}  // namespace

SparseCoef GenSparseCoef(int d, int k, const SupportModel& model,
                         std::uint64_t seed, ValueField field) {
  if (d < 1 || k < 0 || k > d) {
    throw std::invalid_argument("GenSparseCoef: need 0 <= k <= d");
  }
  Rng rng(DeriveSeed(seed, {0x61}));
  std::vector<int> idx;
  switch (model.kind) {
    case SupportKind::kUniform:
      idx = UniformSupport(d, k, rng);
      break;
    case SupportKind::kSeparated: {
      const int gap = EffectiveMinGap(model, d, k);
      if (static_cast<long>(k) * gap > d) {
        throw std::invalid_argument("GenSparseCoef: k * min_gap exceeds d");
      }
      if (k > 0) idx = SeparatedSupport(d, k, gap, rng);
      break;
    }
    case SupportKind::kClustered: {
      const int start = rng.UniformInt(d);
      for (int i = 0; i < k; ++i) idx.push_back((start + i) % d);
      break;
    }
  }
  SparseCoef c;
  c.length = d;
  c.support = Support::FromUnsorted(std::move(idx));
  c.values.reserve(k);
  for (int i = 0; i < k; ++i) {
    Scalar v;
    do {
      v = field == ValueField::kComplex ? rng.ComplexNormal()
                                        : Scalar(rng.Normal(), 0.0);
    } while (v == Scalar(0.0));
    c.values.push_back(v);
  }
  return c;
}

Vec GenPCompressible(int n, double p, double radius, std::uint64_t seed,
                     ValueField field) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("GenPCompressible: p must lie in (0, 1)");
  }
  if (!(radius > 0.0) || n < 1) {
    throw std::invalid_argument("GenPCompressible: need radius > 0 and n >= 1");
  }
  Rng rng(DeriveSeed(seed, {0x62}));
  const std::vector<int> placement = UniformSupport(n, n, rng);
  Vec x(n);
  for (int i = 0; i < n; ++i) {
    const double magnitude = radius * std::pow(static_cast<double>(i + 1), -1.0 / p);
    const Scalar phase = field == ValueField::kComplex
                             ? rng.UnitPhase()
                             : Scalar(rng.Uniform() < 0.5 ? -1.0 : 1.0, 0.0);
    x(placement[i]) = magnitude * phase;
  }
  return x;
}

Vec AddNoise(const Vec& y, double noise_norm, std::uint64_t seed) {
  if (!(noise_norm >= 0.0)) {
    throw std::invalid_argument("AddNoise: noise_norm must be >= 0");
  }
  if (noise_norm == 0.0) return y;
  Rng rng(DeriveSeed(seed, {0x63}));
  Vec e = rng.ComplexGaussianVector(static_cast<int>(y.size()));
  e *= noise_norm / e.norm();
  return y + e;
}

}  // namespace sssp
