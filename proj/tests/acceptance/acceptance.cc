// Acceptance checks. Each criterion prints detail lines followed by exactly
// one "PASS criterion N: ..." or "FAIL criterion N: ..." line; the exit code
// is 0 on PASS and 1 on FAIL.
//
//   acceptance --criterion 3
//   acceptance --criterion 1 --trials 50     (quicker, looser)

#include "sssp/experiment.h"
#include "sssp/metrics.h"
#include "sssp/random.h"
#include "sssp/solvers.h"
#include "sssp/sssp.h"

#include <CLI11.hpp>

#include <Eigen/QR>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#ifndef SSSP_SPEC_DIR
#define SSSP_SPEC_DIR "specs"
#endif

namespace sssp {
namespace {

// Tolerances.
constexpr double kSamplingSlack = 0.05;
constexpr double kOrthoFreqAt55 = 0.80;
constexpr double kOrthoFreqAt70 = 0.95;
constexpr double kBpTarget = 0.90;
constexpr double kClusterMargin = 0.10;
constexpr double kClusterOmpCeiling = 0.2;
constexpr double kStepContraction = 0.5;
constexpr double kStepNoiseGain = 7.5;
constexpr double kStepRoundoff = 1e-10;
constexpr double kDripCondition = 0.1;
constexpr double kLocalizationTol = 1e-6;
constexpr double kC1Target = 0.5;
constexpr double kC2Target = 7.5;

struct Verdict {
  bool pass = false;
  std::string summary;
};

std::optional<int> g_trials;

std::string SpecPath(const std::string& name) {
  return std::string(SSSP_SPEC_DIR) + "/" + name;
}

ExperimentSpec LoadStudy(const std::string& name, std::vector<std::string> algorithms) {
  ExperimentSpec spec = LoadSpec(SpecPath(name));
  if (!algorithms.empty()) spec.algorithms = std::move(algorithms);
  if (g_trials) spec.trials = *g_trials;
  spec.Validate();
  return spec;
}

// frequency[algorithm][m]
using FrequencyTable = std::map<std::string, std::map<int, double>>;

FrequencyTable RunStudy(const ExperimentSpec& spec) {
  const auto start = std::chrono::steady_clock::now();
  const auto curves = RunCurve(spec);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  FrequencyTable table;
  std::printf("  %d trials per m, %.1f s\n  %-16s", spec.trials, secs, "m");
  for (int m : spec.m_values) std::printf("%6d", m);
  std::printf("\n");
  for (const RecoveryCurve& c : curves) {
    std::printf("  %-16s", c.algorithm.c_str());
    for (const CurvePoint& p : c.points) {
      table[c.algorithm][p.m] = p.frequency;
      std::printf("%6.2f", p.frequency);
    }
    std::printf("\n");
  }
  return table;
}

std::string Fmt(const char* format, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

Verdict OrthonormalReproduction() {
  const ExperimentSpec spec =
      LoadStudy("orthonormal.spec", {"sssp:threshold"});
  if (!std::count(spec.m_values.begin(), spec.m_values.end(), 55) ||
      !std::count(spec.m_values.begin(), spec.m_values.end(), 70)) {
    return {false, "m-grid lacks 55 or 70"};
  }
  auto f = RunStudy(spec)["sssp:threshold"];
  const bool pass = f[55] >= kOrthoFreqAt55 && f[70] >= kOrthoFreqAt70;
  return {pass, Fmt("sssp:threshold frequency %.3f at m=55 (>= 0.80), %.3f at m=70 (>= 0.95)",
                    f[55], f[70])};
}

Verdict BaselineOrdering() {
  const ExperimentSpec spec =
      LoadStudy("orthonormal.spec", {"sssp:threshold", "omp", "cosamp", "bp"});
  FrequencyTable t = RunStudy(spec);
  int violations = 0;
  for (int m : spec.m_values) {
    const double s = t["sssp:threshold"][m];
    for (const char* base : {"omp", "cosamp"}) {
      if (s < t[base][m] - kSamplingSlack) {
        ++violations;
        std::printf("  ordering violated at m=%d: sssp %.3f vs %s %.3f\n", m, s, base,
                    t[base][m]);
      }
    }
  }
  double bp_best = 0.0;
  for (int m : spec.m_values) {
    if (m >= 60 && m <= 70) bp_best = std::max(bp_best, t["bp"][m]);
  }
  const bool pass = violations == 0 && bp_best >= kBpTarget;
  return {pass, Fmt("%.0f ordering violations; best bp frequency in m=60..70 is %.3f (>= 0.90)",
                    violations, bp_best)};
}

Verdict DftSeparated() {
  const ExperimentSpec spec =
      LoadStudy("dft_separated.spec", {"sssp:l1", "sssp:threshold", "omp"});
  FrequencyTable t = RunStudy(spec);
  int checked = 0, violations = 0;
  for (int m : spec.m_values) {
    if (m < 80) continue;
    ++checked;
    const double l1 = t["sssp:l1"][m];
    for (const char* other : {"sssp:threshold", "omp"}) {
      if (l1 < t[other][m] - kSamplingSlack) {
        ++violations;
        std::printf("  violated at m=%d: sssp:l1 %.3f vs %s %.3f\n", m, l1, other, t[other][m]);
      }
    }
  }
  return {checked > 0 && violations == 0,
          Fmt("%.0f grid points with m >= 80, %.0f violations of sssp:l1 >= others - 0.05",
              checked, violations)};
}

Verdict DftClustered() {
  const ExperimentSpec spec = LoadStudy("dft_clustered.spec", {"sssp:cosamp", "omp"});
  FrequencyTable t = RunStudy(spec);
  double best_margin = -1.0, omp_max = 0.0;
  int best_m = 0;
  for (int m : spec.m_values) {
    omp_max = std::max(omp_max, t["omp"][m]);
    if (m <= 120 && t["sssp:cosamp"][m] - t["omp"][m] > best_margin) {
      best_margin = t["sssp:cosamp"][m] - t["omp"][m];
      best_m = m;
    }
  }
  const bool pass = best_margin >= kClusterMargin && omp_max <= kClusterOmpCeiling;
  return {pass, Fmt("largest sssp:cosamp - omp margin %.3f at m=%.0f (>= 0.10); max omp "
                    "frequency %.3f (<= 0.2)",
                    best_margin, best_m, omp_max)};
}

// Sensing matrix Q (I + eps G), near-isometric on the whole space.
SensingMatrix NearIsometry(int n, double eps, std::uint64_t seed) {
  Rng rng(seed);
  const Mat q = Eigen::HouseholderQR<Mat>(rng.GaussianMatrix(n, n)).householderQ();
  SensingMatrix a;
  a.matrix = q * (Mat::Identity(n, n) + eps * rng.GaussianMatrix(n, n) / std::sqrt(double(n)));
  a.seed = seed;
  return a;
}

Verdict ContractionPerIteration() {
  const int kInstances = 60;
  int instances = 0, steps = 0, violations = 0;
  double worst_delta = 0.0, worst_ratio = 0.0;
  for (std::uint64_t s = 0; instances < kInstances; ++s) {
    const int n = 8 + 2 * static_cast<int>(s % 3);  // 8, 10, 12
    const int k = 1 + static_cast<int>(s % 2);
    const Dictionary d = MakeRandomOrthonormal(n, DeriveSeed(501, {s}));
    const SensingMatrix a = NearIsometry(n, 0.03, DeriveSeed(502, {s}));
    const double delta =
        DripConstant(a, d, 4 * k, EstimateMethod::kBruteforce).delta;
    if (delta > kDripCondition) continue;
    ++instances;
    worst_delta = std::max(worst_delta, delta);

    const SparseCoef c = GenSparseCoef(n, k, {}, DeriveSeed(503, {s}));
    const Vec x = d.matrix * c.Dense();
    const double noise = (s % 3 == 0) ? 0.0 : 1e-3 * x.norm();
    const Vec y = AddNoise(a.matrix * x, noise, DeriveSeed(504, {s}));
    SsspConfig cfg;
    cfg.k = k;
    cfg.scheme.kind = ProjectionKind::kBruteforce;
    cfg.record_iterates = true;
    const RecoveryResult r = SsspRecover(a, d, y, cfg);
    for (std::size_t l = 0; l + 1 < r.iterates.size(); ++l) {
      BoundInputs in;
      in.x = x;
      in.x_curr = r.iterates[l];
      in.x_next = r.iterates[l + 1];
      in.noise_norm = noise;
      in.k = k;
      in.delta_4k = delta;
      const BoundReport rep = MakeBoundReport(BoundKind::kSparseStep, in);
      ++steps;
      const double lhs = (x - r.iterates[l + 1]).norm();
      const double rhs = kStepContraction * (x - r.iterates[l]).norm() + kStepNoiseGain * noise;
      if (!rep.condition_met || !(lhs <= rhs + kStepRoundoff * x.norm()) ||
          !rep.Holds(kStepRoundoff * x.norm())) {
        ++violations;
        std::printf("  violation: instance %llu iteration %zu lhs %.3e rhs %.3e\n",
                    static_cast<unsigned long long>(s), l + 1, lhs, rhs);
      }
      if (rhs > 0) worst_ratio = std::max(worst_ratio, lhs / rhs);
    }
  }
  std::printf("  %d instances, %d logged iterations, largest delta_4k %.4f, largest lhs/rhs %.3g\n",
              instances, steps, worst_delta, worst_ratio);
  return {violations == 0 && steps > 0,
          Fmt("%.0f iterations on %.0f instances with delta_4k <= 0.1, %.0f violations", steps,
              instances, violations)};
}

Verdict RipUpperBound() {
  const int kDraws = 1000;
  int violations = 0;
  double worst = 0.0;
  for (int t = 0; t < kDraws; ++t) {
    const std::uint64_t seed = DeriveSeed(601, {std::uint64_t(t)});
    const int k = 1 + t % 4;
    const SensingMatrix a = MakeGaussianSensing(6, 8, seed);
    const double delta =
        DripConstant(a, MakeIdentity(8), k, EstimateMethod::kBruteforce).delta;
    Rng rng(DeriveSeed(seed, {1}));
    BoundInputs in;
    in.k = k;
    in.delta_k = delta;
    in.sensing = a.matrix;
    in.v = (t % 2) ? rng.ComplexGaussianVector(8) : Vec(rng.GaussianMatrix(8, 1).col(0));
    const BoundReport r = MakeBoundReport(BoundKind::kRipUpper, in);
    const double rhs = std::sqrt(1 + delta) * (in.v.norm() + in.v.cwiseAbs().sum() / std::sqrt(k));
    const double lhs = (a.matrix * in.v).norm();
    if (!r.Holds() || lhs > rhs) ++violations;
    worst = std::max(worst, lhs / rhs);
  }
  return {violations == 0,
          Fmt("%.0f draws, %.0f violations, largest lhs/rhs %.4f", kDraws, violations, worst)};
}

Verdict LocalizationOfOrthonormal() {
  int bad = 0;
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    const int n = 8 + (t % 5) * 2;  // up to 16
    const int k = 1 + t % 3;
    const Dictionary d = MakeRandomOrthonormal(n, DeriveSeed(701, {std::uint64_t(t)}));
    const LocalizationEstimate e =
        LocalizationFactor(d, k, EstimateMethod::kBruteforce, 0, DeriveSeed(702, {std::uint64_t(t)}));
    std::printf("  n=%d k=%d eta=%.12f\n", n, k, e.value);
    worst = std::max(worst, std::abs(e.value - 1.0));
    bad += std::abs(e.value - 1.0) > kLocalizationTol;
  }
  return {bad == 0, Fmt("10 dictionaries, largest |eta - 1| = %.2e (<= 1e-6)", worst)};
}

Verdict PaperConstants() {
  const ConvergenceConstantsResult c = ConvergenceConstants(0.1, 0.1, 1.0);
  return {c.c1 <= kC1Target && c.c2 <= kC2Target,
          Fmt("C1 = %.6f (target <= 0.5), C2 = %.6f (target <= 7.5)", c.c1, c.c2)};
}

Verdict CompressibleBoundsHold() {
  int checks = 0, violations = 0;
  for (double p : {0.3, 0.5, 0.8}) {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const double radius = 0.5 + s % 4;
      const double noise = (s % 2) ? 0.1 : 0.0;
      const Vec x = GenPCompressible(256, p, radius, DeriveSeed(901, {s}));
      for (int k : {4, 8, 16}) {
        Vec tail = x;
        for (int i : TopKIndices(x, k)) tail(i) = 0.0;
        const CompressibleBounds b = PCompressibleBounds(p, radius, k, noise);
        violations += tail.norm() > b.l2_tail;
        violations += tail.cwiseAbs().sum() > b.l1_tail;
        violations += TailEnergy(x, k, noise) > b.tail_energy;
        checks += 3;
      }
    }
  }
  return {violations == 0, Fmt("%.0f inequality checks, %.0f violations", checks, violations)};
}

Verdict OracleEquivalence() {
  int threshold_mismatch = 0;
  for (int t = 0; t < 500; ++t) {
    const std::uint64_t seed = DeriveSeed(1001, {std::uint64_t(t)});
    const int n = 6 + t % 7;
    const int k = 1 + t % 4;
    const Dictionary d = MakeRandomOrthonormal(n, seed);
    const Vec z = Rng(DeriveSeed(seed, {1})).ComplexGaussianVector(n);
    threshold_mismatch += SdThreshold(d, z, k).support != LambdaOptBruteforce(d, z, k).support;
  }
  int sp_mismatch = 0;
  for (int t = 0; t < 100; ++t) {
    const std::uint64_t seed = DeriveSeed(1002, {std::uint64_t(t)});
    const SensingMatrix a = MakeGaussianSensing(32, 64, seed);
    const SparseCoef c = GenSparseCoef(64, 4, {}, DeriveSeed(seed, {1}), ValueField::kReal);
    const Vec y = a.matrix * c.Dense();
    SolverSpec sp;
    sp.kind = SolverKind::kSp;
    sp.k = 4;
    SsspConfig cfg;
    cfg.k = 4;
    const Support base = Solve(a.matrix, y, sp).coef.support;
    const Support ours = SsspRecover(a, MakeIdentity(64), y, cfg).support;
    if (base != ours) {
      ++sp_mismatch;
      std::printf("  instance %d: sp %s, sssp %s\n", t, base.ToString().c_str(),
                  ours.ToString().c_str());
    }
  }
  return {threshold_mismatch == 0 && sp_mismatch == 0,
          Fmt("threshold vs exhaustive: %.0f/500 mismatches; sssp(identity) vs sp: %.0f/100 "
              "mismatches",
              threshold_mismatch, sp_mismatch)};
}

Verdict Determinism() {
  const ExperimentSpec spec = LoadStudy("orthonormal.spec", {});
  std::string runs[2];
  for (std::string& out : runs) {
    std::ostringstream os;
    WriteCsv(RunCurve(spec), os);
    out = os.str();
  }
  return {runs[0] == runs[1] && !runs[0].empty(),
          Fmt("two runs of the orthonormal study, %.0f and %.0f bytes, %s", runs[0].size(),
              runs[1].size()) +
              (runs[0] == runs[1] ? "identical" : "different")};
}

}  // namespace
}  // namespace sssp

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int criterion = 0;
  app.add_option("--criterion", criterion, "Criterion number (1-11)")
      ->required()
      ->check(CLI::Range(1, 11));
  app.add_option("--trials", sssp::g_trials, "Override trials per m for the curve studies");
  CLI11_PARSE(app, argc, argv);

  using Check = sssp::Verdict (*)();
  static const Check kChecks[] = {
      sssp::OrthonormalReproduction, sssp::BaselineOrdering, sssp::DftSeparated,
      sssp::DftClustered,            sssp::ContractionPerIteration,
      sssp::RipUpperBound,           sssp::LocalizationOfOrthonormal,
      sssp::PaperConstants,          sssp::CompressibleBoundsHold,
      sssp::OracleEquivalence,       sssp::Determinism,
  };
  sssp::Verdict v;
  try {
    v = kChecks[criterion - 1]();
  } catch (const std::exception& e) {
    v = {false, std::string("error: ") + e.what()};
  }
  std::printf("%s criterion %d: %s\n", v.pass ? "PASS" : "FAIL", criterion, v.summary.c_str());
  std::fflush(stdout);
  return v.pass ? 0 : 1;
}
