#include "sssp/random.h"

#include <cmath>
#include <numbers>

namespace sssp {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t DeriveSeed(std::uint64_t parent,
                         std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = SplitMix64(parent);
  for (std::uint64_t label : path) {
    h = SplitMix64(h ^ SplitMix64(label + 0x632be59bd9b4e019ULL));
  }
  return h;
}

int Rng::UniformInt(int bound) {
  std::uniform_int_distribution<int> dist(0, bound - 1);
  return dist(engine_);
}

Scalar Rng::ComplexNormal() {
  const double s = std::sqrt(0.5);
  const double re = Normal();
  const double im = Normal();
  return {s * re, s * im};
}

Scalar Rng::UnitPhase() {
  return std::polar(1.0, 2.0 * std::numbers::pi * Uniform());
}

Mat Rng::GaussianMatrix(int rows, int cols) {
  // Column-major fill keeps the draw order fixed.
  Mat out(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) out(i, j) = Scalar(Normal(), 0.0);
  }
  return out;
}

Vec Rng::ComplexGaussianVector(int n) {
  Vec out(n);
  for (int i = 0; i < n; ++i) out(i) = ComplexNormal();
  return out;
}

}  // namespace sssp
