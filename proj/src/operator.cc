#include "sssp/operator.h"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>
#include <vector>

namespace sssp {

struct DftFrameOperator::Impl {
  Eigen::FFT<double> fft;
  std::vector<Scalar> time;
  std::vector<Scalar> freq;
};

DftFrameOperator::DftFrameOperator(int n, int d)
    : n_(n), d_(d), impl_(std::make_unique<Impl>()) {
  if (n < 1 || d < n) throw DimensionError("DftFrameOperator: need 1 <= n <= d");
  impl_->time.resize(d);
  impl_->freq.resize(d);
}

DftFrameOperator::~DftFrameOperator() = default;

Vec DftFrameOperator::Apply(const Vec& a) const {
  if (a.size() != d_) throw DimensionError("DftFrameOperator::Apply: length != d");
  // x_j = sum_w a_w e^{2 pi i j w / d} / sqrt(d) = sqrt(d) * ifft(a)_j.
  for (int w = 0; w < d_; ++w) impl_->freq[w] = a(w);
  impl_->fft.inv(impl_->time, impl_->freq);
  const double scale = std::sqrt(static_cast<double>(d_));
  Vec out(n_);
  for (int j = 0; j < n_; ++j) out(j) = impl_->time[j] * scale;
  return out;
}

Vec DftFrameOperator::ApplyAdjoint(const Vec& y) const {
  if (y.size() != n_) throw DimensionError("DftFrameOperator::ApplyAdjoint: length != n");
  for (int j = 0; j < d_; ++j) impl_->time[j] = j < n_ ? y(j) : Scalar(0.0);
  impl_->fft.fwd(impl_->freq, impl_->time);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d_));
  Vec out(d_);
  for (int w = 0; w < d_; ++w) out(w) = impl_->freq[w] * scale;
  return out;
}

namespace {

bool MatchesDftFrame(const Mat& m) {
  const Eigen::Index n = m.rows(), d = m.cols();
  if (n < 2 || d % n != 0) return false;
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  const Eigen::Index probes[][2] = {{0, 0}, {1, 1}, {n - 1, d - 1}, {n / 2, d / 3}};
  for (const auto& p : probes) {
    const long phase = static_cast<long>((p[0] * p[1]) % d);
    const Scalar expect = std::polar(scale, 2.0 * std::numbers::pi * phase / d);
    if (std::abs(m(p[0], p[1]) - expect) > 1e-12) return false;
  }
  return true;
}

}  // namespace

std::unique_ptr<LinearOperator> SynthesisOperator(const Dictionary& d) {
  if (d.kind == DictionaryKind::kOvercompleteDft && MatchesDftFrame(d.matrix)) {
    return std::make_unique<DftFrameOperator>(d.rows(), d.cols());
  }
  return std::make_unique<DenseOperator>(d.matrix);
}

}  // namespace sssp
