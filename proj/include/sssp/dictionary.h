#pragma once

// Dictionaries (synthesis operators D, n x d) and Gaussian sensing matrices
// (A, m x n), plus a small binary format for caching them between runs.

#include "sssp/linalg.h"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace sssp {

enum class DictionaryKind {
  kIdentity,
  kRandomOrthonormal,
  kRenormalizedOrthogonal,
  kOvercompleteDft,
};

std::string ToString(DictionaryKind kind);
// Accepts the names produced by ToString ("identity", "random-orthonormal",
// "renormalized-orthogonal", "overcomplete-dft").
DictionaryKind ParseDictionaryKind(std::string_view name);

struct Dictionary {
  Mat matrix;
  DictionaryKind kind = DictionaryKind::kIdentity;
  RealVec column_norms;

  int rows() const { return static_cast<int>(matrix.rows()); }
  int cols() const { return static_cast<int>(matrix.cols()); }

  // Wraps an arbitrary matrix; column norms are computed from it.
  static Dictionary FromMatrix(Mat matrix, DictionaryKind kind);
};

struct SensingMatrix {
  Mat matrix;
  bool column_normalized = false;
  std::uint64_t seed = 0;

  int rows() const { return static_cast<int>(matrix.rows()); }
  int cols() const { return static_cast<int>(matrix.cols()); }
};

Dictionary MakeIdentity(int n);

// Q from the QR factorization of an n x n Gaussian draw, with the signs of
// R's diagonal folded into Q.
Dictionary MakeRandomOrthonormal(int n, std::uint64_t seed);

// Q diag(s): Q as in MakeRandomOrthonormal(n, seed), scales s_i log-uniform
// on [scale_min, scale_max].
Dictionary MakeRenormalizedOrthogonal(int n, std::uint64_t seed,
                                      double scale_min = 0.1,
                                      double scale_max = 10.0);

// D[j, w] = exp(2 pi i j w / d) / sqrt(d), d = oversampling * n. Parseval,
// so columns have norm sqrt(n / d).
Dictionary MakeOvercompleteDft(int n, int oversampling);

// Entries i.i.d. N(0, 1/m), real. With normalize_columns every column is then
// rescaled to unit norm.
SensingMatrix MakeGaussianSensing(int m, int n, std::uint64_t seed,
                                  bool normalize_columns = false);

// ||D D* - I||_2 <= tol.
bool IsParseval(const Dictionary& d, double tol);
double FrameDeviation(const Dictionary& d);

// Binary layout, little-endian:
//   "SPDM" | u32 rows | u32 cols | u8 complex flag | f64 data, row-major
// With the flag set each entry is written as (re, im); otherwise only real
// parts are written. WriteMatrix clears the flag when every imaginary part
// is exactly zero.
void WriteMatrix(const Mat& m, std::ostream& out);
Mat ReadMatrix(std::istream& in);
void SaveMatrix(const Mat& m, const std::string& path);
Mat LoadMatrix(const std::string& path);

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sssp
