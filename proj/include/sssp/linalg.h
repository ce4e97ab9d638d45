#pragma once

// Dense complex linear algebra shared by the recovery algorithms.
//
// Everything is carried in the complex field. Real problems embed with zero
// imaginary parts, and every adjoint is the conjugate transpose.

#include <Eigen/Core>

#include <complex>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace sssp {

using Scalar = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RealVec = Eigen::VectorXd;

// Raised when operand shapes do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A set of atom indices kept strictly increasing.
class Support {
 public:
  Support() = default;
  // Throws std::invalid_argument unless `indices` is strictly increasing and
  // non-negative.
  explicit Support(std::vector<int> indices);
  Support(std::initializer_list<int> indices);

  // Sorts and drops duplicates.
  static Support FromUnsorted(std::vector<int> indices);
  static Support Range(int begin, int end);
  static Support Union(const Support& a, const Support& b);

  int size() const { return static_cast<int>(indices_.size()); }
  bool empty() const { return indices_.empty(); }
  int operator[](int i) const { return indices_[i]; }
  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }
  const std::vector<int>& indices() const { return indices_; }
  bool contains(int index) const;
  // -1 when empty.
  int max_index() const { return indices_.empty() ? -1 : indices_.back(); }

  bool operator==(const Support& other) const = default;

  std::string ToString() const;

 private:
  std::vector<int> indices_;
};

// Columns of `m` selected by `support`, in support order.
Mat GatherColumns(const Mat& m, const Support& support);

// Full-length vector holding `values` at `support` and zero elsewhere.
Vec Scatter(const Vec& values, const Support& support, int length);

// |<r, M_i>| / ||M_i||_2 for every column; zero-norm columns give 0.
RealVec NormalizedCorrelations(const Mat& m, const Vec& r);

// Same, with column norms supplied by the caller (hot loops reuse them).
RealVec NormalizedCorrelations(const Mat& m, const Vec& r,
                               const RealVec& column_norms);

RealVec ColumnNorms(const Mat& m);

// Minimum-norm least squares restricted to `support`. The result has the
// full column length of `phi` and is zero off the support. Rank is decided by
// a complete orthogonal decomposition with relative threshold 1e-10.
Vec LeastSquaresOnSupport(const Mat& phi, const Vec& y, const Support& support);

// Orthogonal projection of `z` onto the span of the selected columns of `d`.
Vec ProjectOntoSpan(const Mat& d, const Support& support, const Vec& z);

// Indices of the k largest entries, lowest index first on ties, returned in
// ascending index order.
Support TopKIndices(const RealVec& scores, int k);
// Ranks by modulus.
Support TopKIndices(const Vec& v, int k);

// ||M* M - I||_2.
double OpnormGramDeviation(const Mat& m);

// Largest eigenvalue modulus of a Hermitian matrix. Uses a dense
// self-adjoint eigensolver up to 512 rows and power iteration beyond.
double HermitianSpectralNorm(const Mat& h);

// Power iteration branch of HermitianSpectralNorm, exposed for testing.
double HermitianSpectralNormPower(const Mat& h, int max_iter = 10000,
                                  double tol = 1e-10);

// Advances `comb` (strictly increasing, entries in [0, n)) to the next
// combination in lexicographic order. Returns false after the last one.
bool NextCombination(std::vector<int>& comb, int n);

bool AllFinite(const Vec& v);
bool AllFinite(const Mat& m);

}  // namespace sssp
