#include "sssp/dictionary.h"

#include "sssp/random.h"

#include <Eigen/QR>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace sssp {

std::string ToString(DictionaryKind kind) {
  switch (kind) {
    case DictionaryKind::kIdentity: return "identity";
    case DictionaryKind::kRandomOrthonormal: return "random-orthonormal";
    case DictionaryKind::kRenormalizedOrthogonal: return "renormalized-orthogonal";
    case DictionaryKind::kOvercompleteDft: return "overcomplete-dft";
  }
  return "unknown";
}

DictionaryKind ParseDictionaryKind(std::string_view name) {
  for (auto kind : {DictionaryKind::kIdentity, DictionaryKind::kRandomOrthonormal,
                    DictionaryKind::kRenormalizedOrthogonal,
                    DictionaryKind::kOvercompleteDft}) {
    if (name == ToString(kind)) return kind;
  }
  throw std::invalid_argument("unknown dictionary kind: " + std::string(name));
}

Dictionary Dictionary::FromMatrix(Mat matrix, DictionaryKind kind) {
  Dictionary d;
  d.column_norms = ColumnNorms(matrix);
  d.matrix = std::move(matrix);
  d.kind = kind;
  return d;
}

Dictionary MakeIdentity(int n) {
  if (n < 1) throw std::invalid_argument("MakeIdentity: n must be >= 1");
  return Dictionary::FromMatrix(Mat::Identity(n, n), DictionaryKind::kIdentity);
}

namespace {

Mat RandomOrthonormalMatrix(int n, std::uint64_t seed) {
  Rng rng(DeriveSeed(seed, {0x51}));
  const Mat g = rng.GaussianMatrix(n, n);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ() * Mat::Identity(n, n);
  const Mat& r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    if (r(j, j).real() < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

}  // namespace

Dictionary MakeRandomOrthonormal(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("MakeRandomOrthonormal: n must be >= 1");
  return Dictionary::FromMatrix(RandomOrthonormalMatrix(n, seed),
                                DictionaryKind::kRandomOrthonormal);
}

Dictionary MakeRenormalizedOrthogonal(int n, std::uint64_t seed,
                                      double scale_min, double scale_max) {
  if (n < 1) throw std::invalid_argument("MakeRenormalizedOrthogonal: n must be >= 1");
  if (!(scale_min > 0.0) || !(scale_min <= scale_max) || !std::isfinite(scale_max)) {
    throw std::invalid_argument(
        "MakeRenormalizedOrthogonal: need 0 < scale_min <= scale_max");
  }
  Mat q = RandomOrthonormalMatrix(n, seed);
  Rng rng(DeriveSeed(seed, {0x52}));
  const double lo = std::log(scale_min);
  const double hi = std::log(scale_max);
  for (int j = 0; j < n; ++j) {
    const double u = rng.Uniform();
    const double s = scale_min == scale_max ? scale_min : std::exp(lo + u * (hi - lo));
    q.col(j) *= s;
  }
  return Dictionary::FromMatrix(std::move(q), DictionaryKind::kRenormalizedOrthogonal);
}

Dictionary MakeOvercompleteDft(int n, int oversampling) {
  if (n < 1 || oversampling < 1) {
    throw std::invalid_argument("MakeOvercompleteDft: need n >= 1, oversampling >= 1");
  }
  const long d = static_cast<long>(n) * oversampling;
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  Mat m(n, d);
  for (long w = 0; w < d; ++w) {
    for (long j = 0; j < n; ++j) {
      // Reduce j*w mod d first so the phase stays accurate.
      const long phase = (j * w) % d;
      m(j, w) = std::polar(scale, 2.0 * std::numbers::pi * phase / d);
    }
  }
  return Dictionary::FromMatrix(std::move(m), DictionaryKind::kOvercompleteDft);
}

SensingMatrix MakeGaussianSensing(int m, int n, std::uint64_t seed,
                                  bool normalize_columns) {
  if (m < 1 || m > n) {
    throw std::invalid_argument("MakeGaussianSensing: need 1 <= m <= n");
  }
  Rng rng(DeriveSeed(seed, {0x53}));
  SensingMatrix a;
  a.matrix = rng.GaussianMatrix(m, n) / std::sqrt(static_cast<double>(m));
  a.seed = seed;
  a.column_normalized = normalize_columns;
  if (normalize_columns) {
    for (int j = 0; j < n; ++j) {
      const double norm = a.matrix.col(j).norm();
      if (norm > 0.0) a.matrix.col(j) /= norm;
    }
  }
  return a;
}

double FrameDeviation(const Dictionary& d) {
  Mat frame = d.matrix * d.matrix.adjoint();
  frame.diagonal().array() -= 1.0;
  return HermitianSpectralNorm(frame);
}

bool IsParseval(const Dictionary& d, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("IsParseval: tol must be > 0");
  return FrameDeviation(d) <= tol;
}

namespace {

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian platforms are not supported");

template <typename T>
void PutLittle(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes.begin(), bytes.end());
  }
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T GetLittle(std::istream& in) {
  std::array<char, sizeof(T)> bytes;
  in.read(bytes.data(), bytes.size());
  if (!in) throw FormatError("SPDM: truncated stream");
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes.begin(), bytes.end());
  }
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

constexpr char kMagic[4] = {'S', 'P', 'D', 'M'};

}  // namespace

void WriteMatrix(const Mat& m, std::ostream& out) {
  const bool is_complex = (m.imag().array() != 0.0).any();
  out.write(kMagic, 4);
  PutLittle<std::uint32_t>(out, static_cast<std::uint32_t>(m.rows()));
  PutLittle<std::uint32_t>(out, static_cast<std::uint32_t>(m.cols()));
  PutLittle<std::uint8_t>(out, is_complex ? 1 : 0);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      PutLittle<double>(out, m(i, j).real());
      if (is_complex) PutLittle<double>(out, m(i, j).imag());
    }
  }
  if (!out) throw std::runtime_error("SPDM: write failed");
}

Mat ReadMatrix(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw FormatError("SPDM: bad magic");
  }
  const auto rows = GetLittle<std::uint32_t>(in);
  const auto cols = GetLittle<std::uint32_t>(in);
  const auto flag = GetLittle<std::uint8_t>(in);
  if (flag > 1) throw FormatError("SPDM: bad complex flag");
  Mat m(rows, cols);
  for (std::uint32_t i = 0; i < rows; ++i) {
    for (std::uint32_t j = 0; j < cols; ++j) {
      const double re = GetLittle<double>(in);
      const double im = flag ? GetLittle<double>(in) : 0.0;
      m(i, j) = Scalar(re, im);
    }
  }
  return m;
}

void SaveMatrix(const Mat& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  WriteMatrix(m, out);
}

Mat LoadMatrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return ReadMatrix(in);
}

}  // namespace sssp
