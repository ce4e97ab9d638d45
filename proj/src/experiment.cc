#include "sssp/experiment.h"

#include "sssp/random.h"
#include "sssp/sssp.h"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace sssp {

namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> Split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(Trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

template <typename T>
T ParseNumber(std::string_view text, std::string_view key) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw SpecError("invalid value for '" + std::string(key) + "': '" +
                    std::string(text) + "'");
  }
  return value;
}

bool ParseBool(std::string_view text, std::string_view key) {
  if (text == "true" || text == "1" || text == "on") return true;
  if (text == "false" || text == "0" || text == "off") return false;
  throw SpecError("invalid boolean for '" + std::string(key) + "'");
}

template <typename F>
auto Rethrow(F&& parse) {
  try {
    return parse();
  } catch (const SpecError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw SpecError(e.what());
  }
}

double ElapsedMs(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

AlgorithmTag ParseAlgorithmTag(std::string_view name) {
  AlgorithmTag tag;
  tag.name = std::string(name);
  try {
    if (name.starts_with("sssp:")) {
      tag.is_sssp = true;
      tag.scheme = ParseProjectionKind(name.substr(5));
      if (tag.scheme == ProjectionKind::kBruteforce) {
        throw SpecError("sssp:bruteforce is not an experiment algorithm");
      }
    } else {
      tag.solver = ParseSolverKind(name);
    }
  } catch (const std::invalid_argument&) {
    throw SpecError("unknown algorithm tag: " + std::string(name));
  }
  return tag;
}

std::vector<int> ParseIntList(std::string_view text) {
  text = Trim(text);
  std::vector<int> out;
  if (text.find(':') != std::string_view::npos) {
    const auto parts = Split(text, ':');
    if (parts.size() != 3) throw SpecError("range must be start:stop:step");
    const int start = ParseNumber<int>(parts[0], "m");
    const int stop = ParseNumber<int>(parts[1], "m");
    const int step = ParseNumber<int>(parts[2], "m");
    if (step <= 0) throw SpecError("range step must be positive");
    for (int v = start; v <= stop; v += step) out.push_back(v);
    return out;
  }
  for (auto part : Split(text, ',')) out.push_back(ParseNumber<int>(part, "m"));
  return out;
}

void ExperimentSpec::Validate() const {
  if (n < 1 || k < 1) throw SpecError("n and k must be positive");
  if (dict == DictionaryKind::kOvercompleteDft) {
    if (dft_oversampling < 1) throw SpecError("dft_oversampling must be >= 1");
    if (d != n * dft_oversampling) {
      throw SpecError("d must equal n * dft_oversampling for the DFT dictionary");
    }
  } else if (d != n) {
    throw SpecError("d must equal n for square dictionaries");
  }
  if (k > d) throw SpecError("k must not exceed d");
  if (dict == DictionaryKind::kRenormalizedOrthogonal &&
      !(scale_min > 0.0 && scale_min <= scale_max)) {
    throw SpecError("need 0 < scale_min <= scale_max");
  }
  if (support_model.min_gap < 0) throw SpecError("min_gap must be >= 0");
  if (support_model.kind == SupportKind::kSeparated &&
      static_cast<long long>(k) * EffectiveMinGap(support_model, d, k) > d) {
    throw SpecError("separated support does not fit: k * min_gap > d");
  }
  if (m_values.empty()) throw SpecError("m must list at least one value");
  for (std::size_t i = 0; i < m_values.size(); ++i) {
    if (m_values[i] < 1 || m_values[i] > n) throw SpecError("m values must lie in [1, n]");
    if (i > 0 && m_values[i] <= m_values[i - 1]) {
      throw SpecError("m values must be strictly ascending");
    }
  }
  if (trials < 1) throw SpecError("trials must be >= 1");
  if (!(noise_norm >= 0.0)) throw SpecError("noise must be >= 0");
  if (algorithms.empty()) throw SpecError("algorithms must not be empty");
  for (const auto& a : algorithms) ParseAlgorithmTag(a);
  if (!(success_rel_tol > 0.0)) throw SpecError("success_tol must be positive");
  if (workers < 0) throw SpecError("workers must be >= 0");
  if (sssp_max_iter < 0 || !(sssp_eps > 0.0) || inner_iters < 1) {
    throw SpecError("invalid SSSP settings");
  }
  if (solver_max_iter < 1 || !(solver_tol > 0.0) || !(bp_sigma_rel >= 0.0)) {
    throw SpecError("invalid solver settings");
  }
  if (!(l1.penalty > 0.0) || l1.max_iter < 1 || !(l1.tol > 0.0)) {
    throw SpecError("invalid l1 settings");
  }
}

ExperimentSpec ParseSpec(std::istream& in) {
  ExperimentSpec spec;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = Trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw SpecError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string_view key = Trim(view.substr(0, eq));
    const std::string_view value = Trim(view.substr(eq + 1));
    if (key == "n") spec.n = ParseNumber<int>(value, key);
    else if (key == "d") spec.d = ParseNumber<int>(value, key);
    else if (key == "k") spec.k = ParseNumber<int>(value, key);
    else if (key == "dict") spec.dict = Rethrow([&] { return ParseDictionaryKind(value); });
    else if (key == "dft_oversampling") spec.dft_oversampling = ParseNumber<int>(value, key);
    else if (key == "scale_min") spec.scale_min = ParseNumber<double>(value, key);
    else if (key == "scale_max") spec.scale_max = ParseNumber<double>(value, key);
    else if (key == "dict_seed") spec.dict_seed = ParseNumber<std::uint64_t>(value, key);
    else if (key == "support") {
      spec.support_model.kind = Rethrow([&] { return ParseSupportKind(value); });
    } else if (key == "min_gap") spec.support_model.min_gap = ParseNumber<int>(value, key);
    else if (key == "values") {
      if (value == "real") spec.values = ValueField::kReal;
      else if (value == "complex") spec.values = ValueField::kComplex;
      else throw SpecError("values must be real or complex");
    } else if (key == "m") spec.m_values = ParseIntList(value);
    else if (key == "trials") spec.trials = ParseNumber<int>(value, key);
    else if (key == "noise") spec.noise_norm = ParseNumber<double>(value, key);
    else if (key == "algorithms") {
      spec.algorithms.clear();
      for (auto a : Split(value, ',')) spec.algorithms.emplace_back(a);
    } else if (key == "success_tol") spec.success_rel_tol = ParseNumber<double>(value, key);
    else if (key == "seed") spec.master_seed = ParseNumber<std::uint64_t>(value, key);
    else if (key == "workers") spec.workers = ParseNumber<int>(value, key);
    else if (key == "timing") spec.timing = ParseBool(value, key);
    else if (key == "sssp_max_iter") spec.sssp_max_iter = ParseNumber<int>(value, key);
    else if (key == "sssp_eps") spec.sssp_eps = ParseNumber<double>(value, key);
    else if (key == "inner_iters") spec.inner_iters = ParseNumber<int>(value, key);
    else if (key == "solver_max_iter") spec.solver_max_iter = ParseNumber<int>(value, key);
    else if (key == "solver_tol") spec.solver_tol = ParseNumber<double>(value, key);
    else if (key == "bp_sigma_rel") spec.bp_sigma_rel = ParseNumber<double>(value, key);
    else if (key == "l1_penalty") spec.l1.penalty = ParseNumber<double>(value, key);
    else if (key == "l1_max_iter") spec.l1.max_iter = ParseNumber<int>(value, key);
    else if (key == "l1_tol") spec.l1.tol = ParseNumber<double>(value, key);
    else throw SpecError("unknown key '" + std::string(key) + "'");
  }
  spec.Validate();
  return spec;
}

ExperimentSpec LoadSpec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read spec file: " + path);
  return ParseSpec(in);
}

std::string FormatSpec(const ExperimentSpec& spec) {
  std::ostringstream os;
  os << "n = " << spec.n << "\nd = " << spec.d << "\nk = " << spec.k
     << "\ndict = " << ToString(spec.dict)
     << "\ndft_oversampling = " << spec.dft_oversampling
     << "\nscale_min = " << FormatDouble(spec.scale_min)
     << "\nscale_max = " << FormatDouble(spec.scale_max)
     << "\ndict_seed = " << spec.dict_seed
     << "\nsupport = " << ToString(spec.support_model.kind)
     << "\nmin_gap = " << spec.support_model.min_gap
     << "\nvalues = " << (spec.values == ValueField::kReal ? "real" : "complex")
     << "\nm = ";
  for (std::size_t i = 0; i < spec.m_values.size(); ++i) {
    os << (i ? "," : "") << spec.m_values[i];
  }
  os << "\ntrials = " << spec.trials << "\nnoise = " << FormatDouble(spec.noise_norm)
     << "\nalgorithms = ";
  for (std::size_t i = 0; i < spec.algorithms.size(); ++i) {
    os << (i ? "," : "") << spec.algorithms[i];
  }
  os << "\nsuccess_tol = " << FormatDouble(spec.success_rel_tol)
     << "\nseed = " << spec.master_seed << "\nworkers = " << spec.workers
     << "\ntiming = " << (spec.timing ? "true" : "false")
     << "\nsssp_max_iter = " << spec.sssp_max_iter
     << "\nsssp_eps = " << FormatDouble(spec.sssp_eps)
     << "\ninner_iters = " << spec.inner_iters
     << "\nsolver_max_iter = " << spec.solver_max_iter
     << "\nsolver_tol = " << FormatDouble(spec.solver_tol)
     << "\nbp_sigma_rel = " << FormatDouble(spec.bp_sigma_rel)
     << "\nl1_penalty = " << FormatDouble(spec.l1.penalty)
     << "\nl1_max_iter = " << spec.l1.max_iter
     << "\nl1_tol = " << FormatDouble(spec.l1.tol) << "\n";
  return os.str();
}

Dictionary BuildDictionary(const ExperimentSpec& spec) {
  switch (spec.dict) {
    case DictionaryKind::kIdentity: return MakeIdentity(spec.n);
    case DictionaryKind::kRandomOrthonormal:
      return MakeRandomOrthonormal(spec.n, spec.dict_seed);
    case DictionaryKind::kRenormalizedOrthogonal:
      return MakeRenormalizedOrthogonal(spec.n, spec.dict_seed, spec.scale_min,
                                        spec.scale_max);
    case DictionaryKind::kOvercompleteDft:
      return MakeOvercompleteDft(spec.n, spec.dft_oversampling);
  }
  throw SpecError("unknown dictionary");
}

std::uint64_t TrialSeed(const ExperimentSpec& spec, int m, int trial_index) {
  return DeriveSeed(spec.master_seed, {static_cast<std::uint64_t>(m),
                                       static_cast<std::uint64_t>(trial_index)});
}

TrialOutcome RunTrial(const ExperimentSpec& spec, int m, int trial_index) {
  return RunTrial(spec, BuildDictionary(spec), m, trial_index);
}

TrialOutcome RunTrial(const ExperimentSpec& spec, const Dictionary& dict, int m,
                      int trial_index) {
  if (dict.rows() != spec.n || dict.cols() != spec.d) {
    throw DimensionError("RunTrial: dictionary does not match the spec");
  }
  TrialOutcome trial;
  trial.m = m;
  trial.trial = trial_index;
  trial.seed = TrialSeed(spec, m, trial_index);

  // Stage labels keep the draws independent of each other and of the
  // algorithm list.
  const SensingMatrix a = MakeGaussianSensing(m, spec.n, DeriveSeed(trial.seed, {1}));
  const SparseCoef coef = GenSparseCoef(spec.d, spec.k, spec.support_model,
                                        DeriveSeed(trial.seed, {2}), spec.values);
  const Vec x = dict.matrix * coef.Dense();
  const Vec y = AddNoise(a.matrix * x, spec.noise_norm, DeriveSeed(trial.seed, {3}));
  const Mat ad = a.matrix * dict.matrix;

  for (const auto& name : spec.algorithms) {
    const AlgorithmTag tag = ParseAlgorithmTag(name);
    AlgorithmOutcome out;
    out.algorithm = name;
    const auto start = std::chrono::steady_clock::now();
    try {
      Vec x_hat;
      if (tag.is_sssp) {
        SsspConfig cfg;
        cfg.k = spec.k;
        cfg.scheme.kind = tag.scheme;
        cfg.scheme.inner_iters = spec.inner_iters;
        cfg.scheme.l1 = spec.l1;
        cfg.max_iter = spec.sssp_max_iter;
        cfg.eps_rel = spec.sssp_eps;
        if (spec.noise_norm > 0.0) cfg.noise_norm_hint = spec.noise_norm;
        RecoveryResult res = SsspRecover(a, dict, ad, y, cfg);
        x_hat = std::move(res.x_hat);
        out.iterations = res.iterations;
        out.residual_trace = std::move(res.residual_trace);
      } else {
        SolverSpec solver;
        solver.kind = tag.solver;
        solver.k = spec.k;
        solver.max_iter = spec.solver_max_iter;
        solver.tol = spec.solver_tol;
        solver.bp_sigma = spec.noise_norm > 0.0 ? spec.noise_norm
                                                : spec.bp_sigma_rel * y.norm();
        solver.l1 = spec.l1;
        SolveResult res = Solve(ad, y, solver);
        x_hat = dict.matrix * res.coef.Dense();
        out.iterations = res.iterations;
        out.residual_trace = std::move(res.residual_trace);
      }
      out.final_residual = (y - a.matrix * x_hat).norm();
      out.recovery_error = (x - x_hat).norm() / x.norm();
      out.success = ExactRecovery(x, x_hat, spec.success_rel_tol);
    } catch (const std::exception& e) {
      out.success = false;
      out.error = e.what();
    }
    if (spec.timing) out.runtime_ms = ElapsedMs(start);
    trial.outcomes.push_back(std::move(out));
  }
  return trial;
}

std::vector<RecoveryCurve> Aggregate(const ExperimentSpec& spec,
                                     const std::vector<TrialOutcome>& outcomes) {
  struct Sums {
    int trials = 0;
    int successes = 0;
    double iterations = 0.0;
    double runtime = 0.0;
  };
  // Sums are accumulated in (m, trial) order so floating-point totals do not
  // depend on the order outcomes arrive in.
  std::vector<const TrialOutcome*> ordered;
  ordered.reserve(outcomes.size());
  for (const auto& t : outcomes) ordered.push_back(&t);
  std::sort(ordered.begin(), ordered.end(), [](const auto* a, const auto* b) {
    return a->m != b->m ? a->m < b->m : a->trial < b->trial;
  });

  std::vector<RecoveryCurve> curves;
  for (std::size_t ai = 0; ai < spec.algorithms.size(); ++ai) {
    std::map<int, Sums> by_m;
    for (int m : spec.m_values) by_m[m];
    for (const auto* t : ordered) {
      if (ai >= t->outcomes.size()) continue;
      const AlgorithmOutcome& o = t->outcomes[ai];
      Sums& s = by_m[t->m];
      ++s.trials;
      s.successes += o.success ? 1 : 0;
      s.iterations += o.iterations;
      s.runtime += o.runtime_ms;
    }
    RecoveryCurve curve;
    curve.algorithm = spec.algorithms[ai];
    for (const auto& [m, s] : by_m) {
      CurvePoint p;
      p.m = m;
      p.trials = s.trials;
      p.successes = s.successes;
      if (s.trials > 0) {
        p.frequency = static_cast<double>(s.successes) / s.trials;
        p.mean_iterations = s.iterations / s.trials;
        p.mean_runtime_ms = s.runtime / s.trials;
      }
      curve.points.push_back(p);
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

std::vector<RecoveryCurve> RunCurve(const ExperimentSpec& spec,
                                    const RunOptions& options) {
  spec.Validate();
  const Dictionary dict = BuildDictionary(spec);
  const int total = static_cast<int>(spec.m_values.size()) * spec.trials;
  std::vector<TrialOutcome> results(total);

  int workers = options.workers.value_or(spec.workers);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, total);

  std::atomic<int> next{0};
  std::mutex progress_mutex;
  int done = 0;
  auto work = [&] {
    for (int job = next++; job < total; job = next++) {
      const int m = spec.m_values[job / spec.trials];
      results[job] = RunTrial(spec, dict, m, job % spec.trials);
      if (options.progress) {
        std::lock_guard<std::mutex> lock(progress_mutex);
        options.progress(++done, total);
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  auto curves = Aggregate(spec, results);
  if (options.outcomes) *options.outcomes = std::move(results);
  return curves;
}

void WriteCsv(const std::vector<RecoveryCurve>& curves, std::ostream& out) {
  out << "algorithm,m,trials,successes,frequency,mean_iterations,mean_runtime_ms\n";
  for (const auto& curve : curves) {
    for (const auto& p : curve.points) {
      out << curve.algorithm << ',' << p.m << ',' << p.trials << ',' << p.successes
          << ',' << FormatDouble(p.frequency) << ',' << FormatDouble(p.mean_iterations)
          << ',' << FormatDouble(p.mean_runtime_ms) << '\n';
    }
  }
}

void ExportCsv(const std::vector<RecoveryCurve>& curves, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  WriteCsv(curves, out);
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

std::vector<RecoveryCurve> ReadCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) ||
      line != "algorithm,m,trials,successes,frequency,mean_iterations,mean_runtime_ms") {
    throw IoError("unexpected CSV header");
  }
  std::vector<RecoveryCurve> curves;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = Split(line, ',');
    if (f.size() != 7) throw IoError("malformed CSV row: " + line);
    CurvePoint p;
    try {
      p.m = ParseNumber<int>(f[1], "m");
      p.trials = ParseNumber<int>(f[2], "trials");
      p.successes = ParseNumber<int>(f[3], "successes");
      p.frequency = ParseNumber<double>(f[4], "frequency");
      p.mean_iterations = ParseNumber<double>(f[5], "mean_iterations");
      p.mean_runtime_ms = ParseNumber<double>(f[6], "mean_runtime_ms");
    } catch (const SpecError& e) {
      throw IoError(std::string("malformed CSV row: ") + e.what());
    }
    if (curves.empty() || curves.back().algorithm != f[0]) {
      curves.push_back({std::string(f[0]), {}});
    }
    curves.back().points.push_back(p);
  }
  return curves;
}

std::vector<RecoveryCurve> ImportCsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  return ReadCsv(in);
}

void WriteTraces(const std::vector<TrialOutcome>& outcomes, std::ostream& out) {
  for (const auto& t : outcomes) {
    for (const auto& o : t.outcomes) {
      for (std::size_t i = 0; i < o.residual_trace.size(); ++i) {
        nlohmann::json j;
        j["m"] = t.m;
        j["trial"] = t.trial;
        j["algorithm"] = o.algorithm;
        j["iteration"] = i;
        j["residual"] = o.residual_trace[i];
        out << j.dump() << '\n';
      }
    }
  }
}

}  // namespace sssp
