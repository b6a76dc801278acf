#include "pgir/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include "pgir/error.hpp"

namespace pgir {

namespace {

constexpr double kAutoMargin = 1e-9;

struct Instance {
  SamplingSet sampling;
  double omega;
  ReconstructionPlan plan;
  std::vector<double> mu;
};

Instance make_instance(const BenchmarkConfig& config, const SpectralBasis& basis, std::uint64_t index) {
  auto sampling =
      uniform_sampling_set(basis.order(), config.fraction, derive_seed(config.seed, StreamTag::sampling, index));
  const double omega = config.omega ? *config.omega : auto_cutoff(basis, sampling, max_cutoff(basis, sampling));
  ReconstructionPlan plan(basis, sampling, omega);
  plan.require_valid();
  std::vector<double> mu;
  for (const auto& m : config.methods) mu.push_back(plan.mu_for(m));
  return Instance{std::move(sampling), omega, std::move(plan), std::move(mu)};
}

InstanceStats stats_of(const Instance& inst) {
  const auto& v = inst.plan.validity();
  return InstanceStats{v.samples, v.density, v.omega, v.sigma_min, v.width_fraction, inst.plan.rho_A1(), inst.mu};
}

[[noreturn]] void rethrow_with_context(const std::exception_ptr& error, const std::string& context) {
  try {
    std::rethrow_exception(error);
  } catch (const ValidityError& e) {
    throw ValidityError(context + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(context + e.what());
  } catch (const std::exception& e) {
    throw Error(context + e.what());
  }
}

// Runs body(t) for t in [0, trials) on `threads` workers. Failures are
// rethrown for the lowest failing trial so the reported error is stable.
template <typename Body>
void for_each_trial(const BenchmarkConfig& config, Body&& body) {
  const auto trials = static_cast<std::size_t>(config.trials);
  std::vector<std::exception_ptr> errors(trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < trials; t = next++) {
      try {
        body(t);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  const auto workers = static_cast<std::size_t>(std::max(1, config.threads));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < std::min(workers, trials); ++i) pool.emplace_back(worker);
  }
  for (std::size_t t = 0; t < trials; ++t) {
    if (errors[t]) {
      rethrow_with_context(errors[t], "trial " + std::to_string(t) + " (signal seed " +
                                          std::to_string(derive_seed(config.seed, StreamTag::signal, t)) + "): ");
    }
  }
}

BenchmarkMetadata base_metadata(const BenchmarkConfig& config, const Graph& graph) {
  BenchmarkMetadata meta{};
  meta.n = graph.order();
  meta.m = graph.edge_count();
  meta.graph_hash = graph.content_hash();
  meta.base_seed = config.seed;
  meta.trials = config.trials;
  meta.fraction = config.fraction;
  meta.tolerance = config.tolerance;
  meta.max_iterations = config.max_iterations;
  meta.threshold = config.threshold;
  meta.omega_auto = !config.omega.has_value();
  meta.resample_per_trial = config.resample_per_trial;
  for (const auto& m : config.methods) meta.methods.push_back(m.name());
  for (int t = 0; t < config.trials; ++t) {
    meta.signal_seeds.push_back(derive_seed(config.seed, StreamTag::signal, static_cast<std::uint64_t>(t)));
  }
  return meta;
}

// Either one shared instance or one per trial, built up front in trial order.
std::vector<Instance> make_instances(const BenchmarkConfig& config, const SpectralBasis& basis) {
  std::vector<Instance> out;
  const int count = config.resample_per_trial ? config.trials : 1;
  for (int i = 0; i < count; ++i) {
    try {
      out.push_back(make_instance(config, basis, static_cast<std::uint64_t>(i)));
    } catch (...) {
      rethrow_with_context(std::current_exception(),
                           "sampling set " + std::to_string(i) + " (seed " +
                               std::to_string(derive_seed(config.seed, StreamTag::sampling, i)) + "): ");
    }
  }
  return out;
}

ReconstructionConfig run_config(const BenchmarkConfig& config, const Instance& inst, const Method& method) {
  return ReconstructionConfig{method, inst.omega, config.tolerance, config.max_iterations};
}

} // namespace

std::uint64_t derive_seed(std::uint64_t base, StreamTag tag, std::uint64_t index, std::uint64_t sub) {
  std::seed_seq seq{static_cast<std::uint32_t>(base),        static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(tag),         static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32), static_cast<std::uint32_t>(sub),
                    static_cast<std::uint32_t>(sub >> 32)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[1]) << 32) | words[0];
}

GraphSignal random_bandlimited(const SpectralBasis& basis, double omega, std::uint64_t seed) {
  const auto band = bandlimit(basis, omega);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd coefficients = Eigen::VectorXd::Zero(basis.order());
  for (Eigen::Index k = 0; k < band.width(); ++k) coefficients(k) = normal(rng);
  Eigen::VectorXd f = basis.eigenvectors().leftCols(band.width()) * coefficients.head(band.width());
  const double norm = f.norm();
  if (norm == 0.0) throw NumericalError("random_bandlimited: drew a zero signal");
  return GraphSignal(f / norm);
}

GraphSignal add_observation_noise(const GraphSignal& f, const SamplingSet& sampling, double snr_db,
                                  std::uint64_t seed) {
  if (sampling.size() != f.size()) throw InvalidArgument("add_observation_noise: dimension mismatch");
  if (std::isinf(snr_db) && snr_db > 0.0) return f;
  if (std::isnan(snr_db)) throw InvalidArgument("add_observation_noise: snr is NaN");
  const double power = f.values().squaredNorm() / static_cast<double>(f.size());
  if (power == 0.0) throw InvalidArgument("add_observation_noise: signal has zero norm");
  const double sigma = std::sqrt(power * std::pow(10.0, -snr_db / 10.0));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  Eigen::VectorXd noisy = f.values();
  for (auto v : sampling.sampled()) noisy(v) += normal(rng);
  return GraphSignal(std::move(noisy));
}

double auto_cutoff(const SpectralBasis& basis, const SamplingSet& sampling, double sigma_min) {
  const auto& lambda = basis.eigenvalues();
  const Eigen::Index n = lambda.size();
  const Eigen::Index count = sampling.count();
  if (count < 1) throw ValidityError("validity: no admissible cutoff without samples");
  double density_bound = 2.0;
  if (count < n) {
    // Largest j < count whose successor lies beyond the retention tolerance.
    Eigen::Index j = count - 1;
    while (j >= 0 && lambda(j + 1) <= lambda(j) + kBandBoundaryTolerance) --j;
    if (j < 0) throw ValidityError("validity: no admissible cutoff keeps the band within the sample count");
    density_bound = lambda(j);
  }
  const double omega = std::min(sigma_min - kAutoMargin, density_bound);
  if (omega + kBandBoundaryTolerance < lambda(0)) {
    throw ValidityError("validity: sigma_min is too small to retain any frequency");
  }
  return omega;
}

void BenchmarkConfig::validate() const {
  if (trials < 1) throw InvalidArgument("benchmark: trials must be at least 1");
  if (!(fraction > 0.0 && fraction <= 1.0)) throw InvalidArgument("benchmark: fraction must lie in (0, 1]");
  if (methods.empty()) throw InvalidArgument("benchmark: no methods");
  if (!(tolerance > 0.0)) throw InvalidArgument("benchmark: tolerance must be positive");
  if (max_iterations < 1) throw InvalidArgument("benchmark: max_iterations must be at least 1");
  if (!(threshold > 0.0)) throw InvalidArgument("benchmark: threshold must be positive");
  if (threads < 1) throw InvalidArgument("benchmark: threads must be at least 1");
}

Graph resolve_graph(const BenchmarkConfig& config) {
  if (const auto* er = std::get_if<ErdosRenyiSource>(&config.graph)) {
    return erdos_renyi(er->n, er->m, derive_seed(config.seed, StreamTag::graph, 0));
  }
  if (const auto* file = std::get_if<GraphFileSource>(&config.graph)) {
    std::ifstream in(file->path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open graph file " + file->path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_edge_list(buf.str());
  }
  return std::get<Graph>(config.graph);
}

BenchmarkResult convergence_benchmark(const BenchmarkConfig& config) {
  config.validate();
  const Graph graph = resolve_graph(config);
  return convergence_benchmark(config, graph, eigendecompose(normalized_laplacian(graph)));
}

BenchmarkResult convergence_benchmark(const BenchmarkConfig& config, const Graph& graph, const SpectralBasis& basis) {
  config.validate();
  if (basis.order() != graph.order()) throw InvalidArgument("benchmark: basis does not match graph");
  const auto instances = make_instances(config, basis);
  const std::size_t methods = config.methods.size();
  const auto trials = static_cast<std::size_t>(config.trials);

  struct TrialRun {
    std::vector<double> errors;
    int iterations;
    double seconds;
  };
  std::vector<std::vector<TrialRun>> runs(trials, std::vector<TrialRun>(methods));

  for_each_trial(config, [&](std::size_t t) {
    const auto& inst = instances[config.resample_per_trial ? t : 0];
    const auto truth = random_bandlimited(basis, inst.omega, derive_seed(config.seed, StreamTag::signal, t));
    for (std::size_t m = 0; m < methods; ++m) {
      const auto start = std::chrono::steady_clock::now();
      const auto report = inst.plan.run(truth, run_config(config, inst, config.methods[m]), &truth);
      const auto stop = std::chrono::steady_clock::now();
      TrialRun run{{}, report.iterations, std::chrono::duration<double>(stop - start).count()};
      run.errors.reserve(report.trace.size());
      for (const auto& row : report.trace) run.errors.push_back(*row.relative_error);
      runs[t][m] = std::move(run);
    }
  });

  std::size_t length = 0;
  for (const auto& per_trial : runs) {
    for (const auto& run : per_trial) length = std::max(length, run.errors.size());
  }

  BenchmarkResult result{base_metadata(config, graph), {}};
  for (const auto& inst : instances) result.metadata.instances.push_back(stats_of(inst));
  for (std::size_t m = 0; m < methods; ++m) {
    MethodSummary summary{};
    summary.name = config.methods[m].name();
    summary.mean_error.assign(length, 0.0);
    double reached_sum = 0.0;
    double iteration_sum = 0.0;
    double seconds = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      const auto& run = runs[t][m];
      for (std::size_t k = 0; k < length; ++k) {
        summary.mean_error[k] += run.errors[std::min(k, run.errors.size() - 1)];
      }
      const auto hit = std::find_if(run.errors.begin(), run.errors.end(),
                                    [&](double e) { return e <= config.threshold; });
      if (hit != run.errors.end()) {
        reached_sum += static_cast<double>(hit - run.errors.begin() + 1);
        ++summary.trials_reaching_threshold;
      }
      iteration_sum += run.iterations;
      seconds += run.seconds;
      if (config.keep_traces) summary.traces.push_back(run.errors);
    }
    for (auto& e : summary.mean_error) e /= static_cast<double>(trials);
    summary.mean_iterations_to_threshold = summary.trials_reaching_threshold > 0
                                               ? reached_sum / summary.trials_reaching_threshold
                                               : std::numeric_limits<double>::quiet_NaN();
    summary.mean_iterations = iteration_sum / static_cast<double>(trials);
    summary.seconds_per_iteration = iteration_sum > 0 ? seconds / iteration_sum : 0.0;
    result.methods.push_back(std::move(summary));
  }
  return result;
}

NoiseSweepResult noise_sweep(const BenchmarkConfig& config) {
  config.validate();
  const Graph graph = resolve_graph(config);
  return noise_sweep(config, graph, eigendecompose(normalized_laplacian(graph)));
}

NoiseSweepResult noise_sweep(const BenchmarkConfig& config, const Graph& graph, const SpectralBasis& basis) {
  config.validate();
  if (config.snr_db.empty()) throw InvalidArgument("noise_sweep: snr list is empty");
  if (basis.order() != graph.order()) throw InvalidArgument("noise_sweep: basis does not match graph");
  const auto instances = make_instances(config, basis);
  const std::size_t methods = config.methods.size();
  const std::size_t levels = config.snr_db.size();
  const auto trials = static_cast<std::size_t>(config.trials);

  // errors[t][level][method]
  std::vector<std::vector<std::vector<double>>> errors(
      trials, std::vector<std::vector<double>>(levels, std::vector<double>(methods, 0.0)));
  for_each_trial(config, [&](std::size_t t) {
    const auto& inst = instances[config.resample_per_trial ? t : 0];
    const auto truth = random_bandlimited(basis, inst.omega, derive_seed(config.seed, StreamTag::signal, t));
    for (std::size_t j = 0; j < levels; ++j) {
      const auto observed = add_observation_noise(truth, inst.sampling, config.snr_db[j],
                                                  derive_seed(config.seed, StreamTag::noise, t, j));
      for (std::size_t m = 0; m < methods; ++m) {
        const auto report = inst.plan.run(observed, run_config(config, inst, config.methods[m]));
        errors[t][j][m] = relative_error(report.signal, truth);
      }
    }
  });

  NoiseSweepResult result{base_metadata(config, graph), {}};
  for (const auto& inst : instances) result.metadata.instances.push_back(stats_of(inst));
  for (std::size_t j = 0; j < levels; ++j) {
    NoiseSweepRow row{config.snr_db[j], std::vector<double>(methods, 0.0)};
    for (std::size_t t = 0; t < trials; ++t) {
      for (std::size_t m = 0; m < methods; ++m) row.steady_state_error[m] += errors[t][j][m];
    }
    for (auto& e : row.steady_state_error) e /= static_cast<double>(trials);
    result.rows.push_back(std::move(row));
  }
  return result;
}

} // namespace pgir
