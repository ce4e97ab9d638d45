#pragma once

// Ground-truth signals for the recovery experiments: k-sparse coefficient
// vectors under three support models, power-law compressible signals, and
// noise of exact norm.

#include "sssp/linalg.h"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sssp {

// Coefficient vector of length d with an explicit support.
struct SparseCoef {
  int length = 0;
  Support support;
  std::vector<Scalar> values;  // aligned with support

  Vec Dense() const;
  // Keeps the nonzero entries of `dense`.
  static SparseCoef FromDense(const Vec& dense);
};

enum class SupportKind { kUniform, kSeparated, kClustered };

std::string ToString(SupportKind kind);
SupportKind ParseSupportKind(std::string_view name);

struct SupportModel {
  SupportKind kind = SupportKind::kUniform;
  // Separated supports only; 0 selects floor(d / (2k)).
  int min_gap = 0;
};

enum class ValueField { kComplex, kReal };

// min(|a - b|, d - |a - b|).
int CircularDistance(int a, int b, int d);

// Min gap a separated model actually uses for (d, k).
int EffectiveMinGap(const SupportModel& model, int d, int k);

// Support drawn per model, values i.i.d. standard Gaussian (complex with
// E|v|^2 = 1, or real N(0, 1)).
//   uniform:   k distinct indices uniformly at random
//   separated: uniformly random set with pairwise circular gap >= min_gap
//   clustered: k consecutive indices starting uniformly, wrapping mod d
SparseCoef GenSparseCoef(int d, int k, const SupportModel& model,
                         std::uint64_t seed,
                         ValueField field = ValueField::kComplex);

// Sorted magnitudes exactly radius * i^(-1/p), random phases (or signs) and a
// random placement.
Vec GenPCompressible(int n, double p, double radius, std::uint64_t seed,
                     ValueField field = ValueField::kComplex);

// y + e with e a Gaussian direction scaled to ||e||_2 = noise_norm.
Vec AddNoise(const Vec& y, double noise_norm, std::uint64_t seed);

}  // namespace sssp
