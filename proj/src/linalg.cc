#include "sssp/linalg.h"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace sssp {

namespace {

constexpr double kRankThreshold = 1e-10;
constexpr int kDenseEigenLimit = 512;

}  // namespace

Support::Support(std::vector<int> indices) : indices_(std::move(indices)) {
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] < 0) {
      throw std::invalid_argument("Support: negative index");
    }
    if (i > 0 && indices_[i] <= indices_[i - 1]) {
      throw std::invalid_argument("Support: indices must be strictly increasing");
    }
  }
}

Support::Support(std::initializer_list<int> indices)
    : Support(std::vector<int>(indices)) {}

Support Support::FromUnsorted(std::vector<int> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return Support(std::move(indices));
}

Support Support::Range(int begin, int end) {
  std::vector<int> indices(std::max(0, end - begin));
  std::iota(indices.begin(), indices.end(), begin);
  return Support(std::move(indices));
}

Support Support::Union(const Support& a, const Support& b) {
  std::vector<int> merged;
  merged.reserve(a.indices_.size() + b.indices_.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(merged));
  return Support(std::move(merged));
}

bool Support::contains(int index) const {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

std::string Support::ToString() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    os << (i ? "," : "") << indices_[i];
  }
  os << '}';
  return os.str();
}

Mat GatherColumns(const Mat& m, const Support& support) {
  if (support.max_index() >= m.cols()) {
    throw DimensionError("support index exceeds column count");
  }
  Mat out(m.rows(), support.size());
  for (int j = 0; j < support.size(); ++j) {
    out.col(j) = m.col(support[j]);
  }
  return out;
}

Vec Scatter(const Vec& values, const Support& support, int length) {
  if (values.size() != support.size() || support.max_index() >= length) {
    throw DimensionError("Scatter: values/support/length mismatch");
  }
  Vec out = Vec::Zero(length);
  for (int j = 0; j < support.size(); ++j) {
    out(support[j]) = values(j);
  }
  return out;
}

RealVec ColumnNorms(const Mat& m) { return m.colwise().norm().transpose(); }

RealVec NormalizedCorrelations(const Mat& m, const Vec& r) {
  return NormalizedCorrelations(m, r, ColumnNorms(m));
}

RealVec NormalizedCorrelations(const Mat& m, const Vec& r,
                               const RealVec& column_norms) {
  if (r.size() != m.rows() || column_norms.size() != m.cols()) {
    throw DimensionError("NormalizedCorrelations: dimension mismatch");
  }
  const Vec proxy = m.adjoint() * r;
  RealVec out(m.cols());
  for (Eigen::Index i = 0; i < m.cols(); ++i) {
    out(i) = column_norms(i) > 0.0 ? std::abs(proxy(i)) / column_norms(i) : 0.0;
  }
  return out;
}

Vec LeastSquaresOnSupport(const Mat& phi, const Vec& y, const Support& support) {
  if (y.size() != phi.rows()) {
    throw DimensionError("LeastSquaresOnSupport: y length != rows");
  }
  if (support.max_index() >= phi.cols()) {
    throw DimensionError("LeastSquaresOnSupport: support exceeds columns");
  }
  Vec out = Vec::Zero(phi.cols());
  if (support.empty()) return out;
  const Mat sub = GatherColumns(phi, support);
  Eigen::CompleteOrthogonalDecomposition<Mat> cod;
  cod.setThreshold(kRankThreshold);
  cod.compute(sub);
  const Vec coef = cod.solve(y);
  for (int j = 0; j < support.size(); ++j) out(support[j]) = coef(j);
  return out;
}

Vec ProjectOntoSpan(const Mat& d, const Support& support, const Vec& z) {
  if (z.size() != d.rows()) {
    throw DimensionError("ProjectOntoSpan: z length != rows");
  }
  if (support.empty()) return Vec::Zero(d.rows());
  const Mat sub = GatherColumns(d, support);
  Eigen::CompleteOrthogonalDecomposition<Mat> cod;
  cod.setThreshold(kRankThreshold);
  cod.compute(sub);
  return sub * cod.solve(z);
}

Support TopKIndices(const RealVec& scores, int k) {
  if (k < 0 || k > scores.size()) {
    throw std::invalid_argument("TopKIndices: k outside [0, length]");
  }
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  auto before = [&scores](int a, int b) {
    if (scores(a) != scores(b)) return scores(a) > scores(b);
    return a < b;
  };
  std::partial_sort(order.begin(), order.begin() + k, order.end(), before);
  order.resize(k);
  std::sort(order.begin(), order.end());
  return Support(std::move(order));
}

Support TopKIndices(const Vec& v, int k) {
  return TopKIndices(RealVec(v.cwiseAbs()), k);
}

double OpnormGramDeviation(const Mat& m) {
  if (m.size() == 0) {
    throw std::invalid_argument("OpnormGramDeviation: empty matrix");
  }
  Mat gram = m.adjoint() * m;
  gram.diagonal().array() -= 1.0;
  return HermitianSpectralNorm(gram);
}

double HermitianSpectralNorm(const Mat& h) {
  if (h.rows() != h.cols()) {
    throw DimensionError("HermitianSpectralNorm: matrix is not square");
  }
  if (h.rows() == 0) return 0.0;
  if (h.rows() <= kDenseEigenLimit) {
    Eigen::SelfAdjointEigenSolver<Mat> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
  }
  return HermitianSpectralNormPower(h);
}

double HermitianSpectralNormPower(const Mat& h, int max_iter, double tol) {
  const Eigen::Index n = h.rows();
  if (n == 0) return 0.0;
  // Deterministic, generic start vector.
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v(i) = Scalar(std::cos(0.7 * i + 0.3), std::sin(1.3 * i + 0.1));
  }
  v.normalize();
  double estimate = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vec w = h * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    // ||H v|| for unit v tends to max |lambda| even when +lambda and -lambda
    // are both dominant, since H^2 then has a single dominant eigenvalue.
    const double next = norm;
    v = w / norm;
    if (std::abs(next - estimate) <= tol * next) {
      estimate = next;
      break;
    }
    estimate = next;
  }
  return estimate;
}

bool NextCombination(std::vector<int>& comb, int n) {
  const int size = static_cast<int>(comb.size());
  int i = size - 1;
  while (i >= 0 && comb[i] == n - size + i) --i;
  if (i < 0) return false;
  ++comb[i];
  for (int j = i + 1; j < size; ++j) comb[j] = comb[j - 1] + 1;
  return true;
}

bool AllFinite(const Vec& v) { return v.allFinite(); }
bool AllFinite(const Mat& m) { return m.allFinite(); }

}  // namespace sssp
