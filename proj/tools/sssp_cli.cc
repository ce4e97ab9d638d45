// Command-line front end for the recovery experiments and metric utilities.
//
//   sssp_cli curve --spec specs/orthonormal.spec --out curve.csv
//   sssp_cli recover --spec specs/dft_separated.spec --m 100 --trial 3
//   sssp_cli drip --spec specs/orthonormal.spec --m 60 --k 2 --method sampled
//   sssp_cli locfactor --spec specs/dft_separated.spec --k 2 --method sampled
//   sssp_cli bounds --delta 0.1 --lambda1 0.1 --lambda2 1 --k 10 --d 256
//
// Exit codes: 0 success, 2 invalid spec or arguments, 3 I/O failure.

#include "sssp/experiment.h"
#include "sssp/metrics.h"
#include "sssp/random.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

constexpr int kExitSpec = 2;
constexpr int kExitIo = 3;

struct CommonFlags {
  std::string spec_path;
  std::string m_list;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::string algos;
  std::string out;
};

void AddCommon(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--spec", f.spec_path, "Experiment spec file (key = value)")
      ->required();
  cmd->add_option("--m", f.m_list, "Measurement counts: 20:120:5 or 40,60");
  cmd->add_option("--trials", f.trials, "Trials per m");
  cmd->add_option("--seed", f.seed, "Master seed");
  cmd->add_option("--algos", f.algos, "Comma-separated algorithm tags");
}

sssp::ExperimentSpec LoadWithOverrides(const CommonFlags& f) {
  sssp::ExperimentSpec spec = sssp::LoadSpec(f.spec_path);
  if (!f.m_list.empty()) spec.m_values = sssp::ParseIntList(f.m_list);
  if (f.trials) spec.trials = *f.trials;
  if (f.seed) spec.master_seed = *f.seed;
  if (!f.algos.empty()) {
    std::istringstream is(f.algos);
    spec.algorithms.clear();
    for (std::string tag; std::getline(is, tag, ',');) spec.algorithms.push_back(tag);
  }
  spec.Validate();
  return spec;
}

// Writes to `path`, or stdout when empty or "-".
template <typename F>
void WithOutput(const std::string& path, F&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw sssp::IoError("cannot write " + path);
  write(out);
  out.flush();
  if (!out) throw sssp::IoError("write failed: " + path);
}

int RunCurveCommand(const CommonFlags& f, const std::string& traces,
                    std::optional<int> workers, bool quiet) {
  const sssp::ExperimentSpec spec = LoadWithOverrides(f);
  sssp::RunOptions options;
  options.workers = workers;
  std::vector<sssp::TrialOutcome> outcomes;
  if (!traces.empty()) options.outcomes = &outcomes;
  if (!quiet) {
    options.progress = [](int done, int total) {
      if (done == total || done % 50 == 0) {
        std::fprintf(stderr, "\r%d/%d trials", done, total);
        if (done == total) std::fputc('\n', stderr);
      }
    };
  }
  const auto curves = sssp::RunCurve(spec, options);
  WithOutput(f.out, [&](std::ostream& os) { sssp::WriteCsv(curves, os); });
  if (!traces.empty()) {
    WithOutput(traces, [&](std::ostream& os) { sssp::WriteTraces(outcomes, os); });
  }
  return 0;
}

int RunRecoverCommand(const CommonFlags& f, int trial) {
  const sssp::ExperimentSpec spec = LoadWithOverrides(f);
  const int m = spec.m_values.front();
  const sssp::TrialOutcome outcome = sssp::RunTrial(spec, m, trial);
  std::printf("m=%d trial=%d seed=%llu\n", m, trial,
              static_cast<unsigned long long>(outcome.seed));
  for (const auto& o : outcome.outcomes) {
    if (!o.error.empty()) {
      std::printf("%-16s FAILED  error: %s\n", o.algorithm.c_str(), o.error.c_str());
      continue;
    }
    std::printf("%-16s %s  iterations=%d  rel_error=%.3e  residual=%.3e\n",
                o.algorithm.c_str(), o.success ? "success" : "failure", o.iterations,
                o.recovery_error, o.final_residual);
  }
  if (!f.out.empty()) {
    WithOutput(f.out, [&](std::ostream& os) { sssp::WriteTraces({outcome}, os); });
  } else {
    for (const auto& o : outcome.outcomes) {
      std::printf("trace %s:", o.algorithm.c_str());
      for (double r : o.residual_trace) std::printf(" %.3e", r);
      std::printf("\n");
    }
  }
  return 0;
}

int RunDripCommand(const CommonFlags& f, int k, const std::string& method,
                   int samples) {
  const sssp::ExperimentSpec spec = LoadWithOverrides(f);
  const sssp::Dictionary dict = sssp::BuildDictionary(spec);
  const int m = spec.m_values.front();
  const sssp::SensingMatrix a =
      sssp::MakeGaussianSensing(m, spec.n, sssp::DeriveSeed(spec.master_seed, {0xd1}));
  const auto est = sssp::DripConstant(a, dict, k, sssp::ParseEstimateMethod(method),
                                      samples, spec.master_seed);
  nlohmann::json j;
  j["m"] = m;
  j["k"] = est.k;
  j["delta"] = est.delta;
  j["method"] = sssp::ToString(est.method);
  j["supports_checked"] = est.supports_checked;
  WithOutput(f.out, [&](std::ostream& os) { os << j.dump() << '\n'; });
  return 0;
}

int RunLocfactorCommand(const CommonFlags& f, int k, const std::string& method,
                        int samples, int restarts) {
  const sssp::ExperimentSpec spec = LoadWithOverrides(f);
  const sssp::Dictionary dict = sssp::BuildDictionary(spec);
  const auto est = sssp::LocalizationFactor(dict, k, sssp::ParseEstimateMethod(method),
                                            samples, spec.master_seed, restarts);
  nlohmann::json j;
  j["k"] = k;
  j["eta"] = est.value;
  j["supports_checked"] = est.supports_checked;
  j["converged"] = est.converged;
  WithOutput(f.out, [&](std::ostream& os) { os << j.dump() << '\n'; });
  return 0;
}

int RunBoundsCommand(double delta, double lambda1, double lambda2, int k, int d,
                     double alpha, const std::string& out) {
  const auto c = sssp::ConvergenceConstants(delta, lambda1, lambda2);
  nlohmann::json j;
  j["delta"] = delta;
  j["lambda1"] = lambda1;
  j["lambda2"] = lambda2;
  j["C1"] = c.c1;
  j["C2"] = c.c2;
  j["k"] = k;
  j["d"] = d;
  j["alpha"] = alpha;
  j["measurements_dictionary"] = sssp::MeasurementBound(k, d, delta, alpha);
  j["measurements_subspace"] = sssp::MeasurementBoundSubspace(k, delta, alpha);
  WithOutput(out, [&](std::ostream& os) { os << j.dump() << '\n'; });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Signal space subspace pursuit experiments"};
  app.require_subcommand(1);

  CommonFlags curve_flags;
  std::string traces;
  std::optional<int> workers;
  bool quiet = false;
  auto* curve = app.add_subcommand("curve", "Recovery frequency versus m");
  AddCommon(curve, curve_flags);
  curve->add_option("--out", curve_flags.out, "CSV output path (default stdout)");
  curve->add_option("--traces", traces, "Residual traces as JSON lines");
  curve->add_option("--workers", workers, "Worker threads (0 = all cores)");
  curve->add_flag("--quiet", quiet, "No progress on stderr");

  CommonFlags recover_flags;
  int trial = 0;
  auto* recover = app.add_subcommand("recover", "Run one trial and print traces");
  AddCommon(recover, recover_flags);
  recover->add_option("--trial", trial, "Trial index")->check(CLI::NonNegativeNumber);
  recover->add_option("--out", recover_flags.out, "Trace JSON lines path");

  CommonFlags drip_flags;
  int drip_k = 1;
  std::string drip_method = "sampled";
  int drip_samples = 1000;
  auto* drip = app.add_subcommand("drip", "Restricted isometry constant of A D");
  AddCommon(drip, drip_flags);
  drip->add_option("--k", drip_k, "Order")->required();
  drip->add_option("--method", drip_method, "bruteforce or sampled");
  drip->add_option("--samples", drip_samples, "Random supports for sampled");
  drip->add_option("--out", drip_flags.out, "Output path");

  CommonFlags loc_flags;
  int loc_k = 1;
  std::string loc_method = "sampled";
  int loc_samples = 200;
  int restarts = 20;
  auto* loc = app.add_subcommand("locfactor", "Localization factor of the dictionary");
  AddCommon(loc, loc_flags);
  loc->add_option("--k", loc_k, "Sparsity")->required();
  loc->add_option("--method", loc_method, "bruteforce or sampled");
  loc->add_option("--samples", loc_samples, "Random supports for sampled");
  loc->add_option("--restarts", restarts, "Ascent restarts per support");
  loc->add_option("--out", loc_flags.out, "Output path");

  double delta = 0.1, lambda1 = 0.1, lambda2 = 1.0, alpha = 0.01;
  int bound_k = 10, bound_d = 256;
  std::string bounds_out;
  auto* bounds = app.add_subcommand("bounds", "Convergence constants and measurement bounds");
  bounds->add_option("--delta", delta, "Restricted isometry constant");
  bounds->add_option("--lambda1", lambda1);
  bounds->add_option("--lambda2", lambda2);
  bounds->add_option("--k", bound_k);
  bounds->add_option("--d", bound_d);
  bounds->add_option("--alpha", alpha, "Failure probability");
  bounds->add_option("--out", bounds_out, "Output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitSpec;
  }

  try {
    if (*curve) return RunCurveCommand(curve_flags, traces, workers, quiet);
    if (*recover) return RunRecoverCommand(recover_flags, trial);
    if (*drip) return RunDripCommand(drip_flags, drip_k, drip_method, drip_samples);
    if (*loc) {
      return RunLocfactorCommand(loc_flags, loc_k, loc_method, loc_samples, restarts);
    }
    if (*bounds) {
      return RunBoundsCommand(delta, lambda1, lambda2, bound_k, bound_d, alpha, bounds_out);
    }
  } catch (const sssp::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const sssp::SpecError& e) {
    std::fprintf(stderr, "spec error: %s\n", e.what());
    return kExitSpec;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid argument: %s\n", e.what());
    return kExitSpec;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
