#pragma once

// Seeded Monte Carlo recovery experiments: recovery frequency as a function
// of the number of measurements, for SSSP variants and the coefficient-space
// baselines on identical data.

#include "sssp/dictionary.h"
#include "sssp/l1.h"
#include "sssp/projection.h"
#include "sssp/signal.h"
#include "sssp/solvers.h"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sssp {

// Invalid experiment description (CLI exit code 2).
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File could not be read or written (CLI exit code 3).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// "sssp:<scheme>" or a baseline solver name.
struct AlgorithmTag {
  std::string name;
  bool is_sssp = false;
  ProjectionKind scheme = ProjectionKind::kThreshold;
  SolverKind solver = SolverKind::kOmp;
};

// Throws SpecError for names outside the closed set.
AlgorithmTag ParseAlgorithmTag(std::string_view name);

struct ExperimentSpec {
  int n = 256;
  int d = 256;
  int k = 10;
  DictionaryKind dict = DictionaryKind::kRandomOrthonormal;
  int dft_oversampling = 4;
  double scale_min = 0.1;
  double scale_max = 10.0;
  std::uint64_t dict_seed = 1;
  SupportModel support_model;
  ValueField values = ValueField::kReal;
  std::vector<int> m_values;
  int trials = 200;
  double noise_norm = 0.0;
  std::vector<std::string> algorithms;
  double success_rel_tol = 1e-4;
  std::uint64_t master_seed = 1;
  // 0 uses every hardware thread.
  int workers = 1;
  // Wall-clock timing makes mean_runtime_ms nondeterministic; off by default
  // so that CSV output is a pure function of the spec.
  bool timing = false;

  // SSSP settings.
  int sssp_max_iter = 0;
  double sssp_eps = 1e-6;
  int inner_iters = 20;
  // Baseline settings.
  int solver_max_iter = 100;
  double solver_tol = 1e-10;
  // BP residual bound relative to ||y||, used when noise_norm is 0.
  double bp_sigma_rel = 1e-6;
  L1Params l1;

  // Throws SpecError.
  void Validate() const;
};

// Parses `key = value` lines; '#' starts a comment. Throws SpecError on
// unknown keys or malformed values (the result is validated).
ExperimentSpec ParseSpec(std::istream& in);
// Throws IoError when the file cannot be read.
ExperimentSpec LoadSpec(const std::string& path);
std::string FormatSpec(const ExperimentSpec& spec);

// "20:120:5" (inclusive range) or "20,25,30".
std::vector<int> ParseIntList(std::string_view text);

Dictionary BuildDictionary(const ExperimentSpec& spec);

struct AlgorithmOutcome {
  std::string algorithm;
  bool success = false;
  int iterations = 0;
  double runtime_ms = 0.0;
  double final_residual = 0.0;  // ||y - A x_hat||
  double recovery_error = 0.0;
  // Non-empty when the algorithm threw; the outcome then counts as failed.
  std::string error;
  std::vector<double> residual_trace;
};

struct TrialOutcome {
  int m = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  std::vector<AlgorithmOutcome> outcomes;  // in spec.algorithms order
};

// Seed of trial (m, trial_index): DeriveSeed(master_seed, {m, trial_index}).
std::uint64_t TrialSeed(const ExperimentSpec& spec, int m, int trial_index);

// Draws A (m x n), a and x = D a (plus noise) from the trial seed and runs
// every algorithm on the same data. Success means
// ||x - x_hat|| <= success_rel_tol ||x||, measured in signal space.
TrialOutcome RunTrial(const ExperimentSpec& spec, const Dictionary& dict, int m,
                      int trial_index);
TrialOutcome RunTrial(const ExperimentSpec& spec, int m, int trial_index);

struct CurvePoint {
  int m = 0;
  int trials = 0;
  int successes = 0;
  double frequency = 0.0;
  double mean_iterations = 0.0;
  double mean_runtime_ms = 0.0;
};

struct RecoveryCurve {
  std::string algorithm;
  std::vector<CurvePoint> points;  // ascending m
};

struct RunOptions {
  // Overrides spec.workers when set.
  std::optional<int> workers;
  // Called after each finished trial with (done, total); serialized.
  std::function<void(int, int)> progress;
  // Receives every trial outcome in (m, trial) order.
  std::vector<TrialOutcome>* outcomes = nullptr;
};

std::vector<RecoveryCurve> RunCurve(const ExperimentSpec& spec,
                                    const RunOptions& options = {});

// Aggregates outcomes (any order) into curves ordered like spec.algorithms.
std::vector<RecoveryCurve> Aggregate(const ExperimentSpec& spec,
                                     const std::vector<TrialOutcome>& outcomes);

// Header `algorithm,m,trials,successes,frequency,mean_iterations,
// mean_runtime_ms`, one row per point, 17 significant digits, LF endings.
void WriteCsv(const std::vector<RecoveryCurve>& curves, std::ostream& out);
void ExportCsv(const std::vector<RecoveryCurve>& curves, const std::string& path);
std::vector<RecoveryCurve> ReadCsv(std::istream& in);
std::vector<RecoveryCurve> ImportCsv(const std::string& path);

// One JSON object per line:
//   {"m":..,"trial":..,"algorithm":..,"iteration":..,"residual":..}
void WriteTraces(const std::vector<TrialOutcome>& outcomes, std::ostream& out);

}  // namespace sssp
