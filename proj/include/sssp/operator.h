#pragma once

// Linear maps given by their action, so iterative solvers can use fast
// transforms where a dense product would dominate the cost.

#include "sssp/dictionary.h"
#include "sssp/linalg.h"

#include <memory>
#include <optional>

namespace sssp {

class LinearOperator {
 public:
  virtual ~LinearOperator() = default;

  virtual int rows() const = 0;
  virtual int cols() const = 0;
  // Phi a.
  virtual Vec Apply(const Vec& a) const = 0;
  // Phi^* y.
  virtual Vec ApplyAdjoint(const Vec& y) const = 0;
  // Phi Phi^* (rows x rows).
  virtual Mat OuterGram() const = 0;
  // c when Phi Phi^* = c I is known exactly.
  virtual std::optional<double> TightFrameBound() const { return std::nullopt; }
};

// Wraps a matrix; the matrix must outlive the operator.
class DenseOperator : public LinearOperator {
 public:
  explicit DenseOperator(const Mat& phi) : phi_(phi) {}

  int rows() const override { return static_cast<int>(phi_.rows()); }
  int cols() const override { return static_cast<int>(phi_.cols()); }
  Vec Apply(const Vec& a) const override { return phi_ * a; }
  Vec ApplyAdjoint(const Vec& y) const override { return phi_.adjoint() * y; }
  Mat OuterGram() const override { return phi_ * phi_.adjoint(); }

 private:
  const Mat& phi_;
};

// The n x d oversampled DFT frame D[j, w] = exp(2 pi i j w / d) / sqrt(d),
// applied with length-d FFTs. Not safe for concurrent use; make one per
// thread.
class DftFrameOperator : public LinearOperator {
 public:
  DftFrameOperator(int n, int d);
  ~DftFrameOperator() override;

  int rows() const override { return n_; }
  int cols() const override { return d_; }
  Vec Apply(const Vec& a) const override;
  Vec ApplyAdjoint(const Vec& y) const override;
  Mat OuterGram() const override { return Mat::Identity(n_, n_); }
  std::optional<double> TightFrameBound() const override { return 1.0; }

 private:
  struct Impl;
  int n_;
  int d_;
  std::unique_ptr<Impl> impl_;
};

// The fast transform for an oversampled DFT dictionary whose entries match
// MakeOvercompleteDft (checked on a few entries); a dense wrapper otherwise.
// The dictionary must outlive the result.
std::unique_ptr<LinearOperator> SynthesisOperator(const Dictionary& d);

}  // namespace sssp
