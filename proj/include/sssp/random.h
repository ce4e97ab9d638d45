#pragma once

#include "sssp/linalg.h"

#include <cstdint>
#include <initializer_list>
#include <random>

namespace sssp {

// One step of the splitmix64 generator; a good 64-bit mixing function.
std::uint64_t SplitMix64(std::uint64_t x);

// Deterministic child seed from a parent seed and a path of integer labels.
// Used to give every (m, trial, stage) its own independent stream so that
// results do not depend on evaluation order.
std::uint64_t DeriveSeed(std::uint64_t parent,
                         std::initializer_list<std::uint64_t> path);

// Seeded engine with the draws the generators need.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(SplitMix64(seed)) {}

  double Normal() { return normal_(engine_); }
  double Uniform() { return uniform_(engine_); }
  // Uniform integer in [0, bound).
  int UniformInt(int bound);
  // E|z|^2 = 1.
  Scalar ComplexNormal();
  // exp(i theta) with theta uniform.
  Scalar UnitPhase();

  Mat GaussianMatrix(int rows, int cols);
  Vec ComplexGaussianVector(int n);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace sssp
