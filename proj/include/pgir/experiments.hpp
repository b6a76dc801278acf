#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "pgir/graph.hpp"
#include "pgir/reconstruct.hpp"
#include "pgir/sampling.hpp"
#include "pgir/spectral.hpp"

namespace pgir {

/// Independent RNG streams. The tag keeps graph, sampling, signal and noise
/// draws apart even when they share a trial index.
enum class StreamTag : std::uint32_t { graph = 1, sampling = 2, signal = 3, noise = 4 };

/// Seed for stream (base, tag, index, sub); depends on nothing else.
std::uint64_t derive_seed(std::uint64_t base, StreamTag tag, std::uint64_t index, std::uint64_t sub = 0);

inline constexpr double kNoiseless = std::numeric_limits<double>::infinity();

/// I.i.d. standard normal coefficients on the retained band, inverse
/// transformed and scaled to unit norm.
GraphSignal random_bandlimited(const SpectralBasis& basis, double omega, std::uint64_t seed);

/// Adds N(0, (||f||^2 / n) 10^(-snr_db / 10)) to each sampled entry.
/// `snr_db == kNoiseless` returns f unchanged.
GraphSignal add_observation_noise(const GraphSignal& f, const SamplingSet& sampling, double snr_db,
                                  std::uint64_t seed);

/// Largest cutoff passing both validity checks: min(sigma_min - 1e-9, lambda_j)
/// where lambda_j is the largest eigenvalue keeping the band no wider than the
/// sample count.
double auto_cutoff(const SpectralBasis& basis, const SamplingSet& sampling, double sigma_min);

struct ErdosRenyiSource {
  Vertex n;
  std::size_t m;
};

struct GraphFileSource {
  std::string path;
};

using GraphSource = std::variant<ErdosRenyiSource, GraphFileSource, Graph>;

struct BenchmarkConfig {
  GraphSource graph = ErdosRenyiSource{300, 1200};
  double fraction = 0.35;
  /// nullopt selects auto_cutoff.
  std::optional<double> omega;
  std::vector<Method> methods = {Method::ilsr(), Method::opgir()};
  int trials = 100;
  std::uint64_t seed = 0;
  double tolerance = 1e-10;
  int max_iterations = 5000;
  /// Error level used for the iterations-to-threshold statistic.
  double threshold = 1e-6;
  std::vector<double> snr_db;
  bool resample_per_trial = false;
  bool keep_traces = false;
  int threads = 1;

  void validate() const;
};

/// Diagnostics of one sampling set (one per benchmark, or one per trial
/// when resampling).
struct InstanceStats {
  Eigen::Index samples;
  double density;
  double omega;
  double sigma_min;
  double width_fraction;
  double rho_A1;
  std::vector<double> mu;  // per method
};

struct BenchmarkMetadata {
  Vertex n;
  std::size_t m;
  std::uint64_t graph_hash;
  std::uint64_t base_seed;
  int trials;
  double fraction;
  double tolerance;
  int max_iterations;
  double threshold;
  bool omega_auto;
  bool resample_per_trial;
  std::vector<std::string> methods;
  std::vector<InstanceStats> instances;
  std::vector<std::uint64_t> signal_seeds;
};

struct MethodSummary {
  std::string name;
  /// Mean relative error per iteration, padded with each trial's final value.
  std::vector<double> mean_error;
  /// Mean over trials that reached `threshold`.
  double mean_iterations_to_threshold;
  int trials_reaching_threshold;
  double mean_iterations;
  double seconds_per_iteration;
  /// Raw per-trial error traces (unpadded), only with keep_traces.
  std::vector<std::vector<double>> traces;
};

struct BenchmarkResult {
  BenchmarkMetadata metadata;
  std::vector<MethodSummary> methods;
};

struct NoiseSweepRow {
  double snr_db;
  std::vector<double> steady_state_error;  // per method
};

struct NoiseSweepResult {
  BenchmarkMetadata metadata;
  std::vector<NoiseSweepRow> rows;
};

/// Resolves the configured graph source; ER graphs use derive_seed(seed, graph, 0).
Graph resolve_graph(const BenchmarkConfig& config);

BenchmarkResult convergence_benchmark(const BenchmarkConfig& config);
BenchmarkResult convergence_benchmark(const BenchmarkConfig& config, const Graph& graph, const SpectralBasis& basis);

NoiseSweepResult noise_sweep(const BenchmarkConfig& config);
NoiseSweepResult noise_sweep(const BenchmarkConfig& config, const Graph& graph, const SpectralBasis& basis);

} // namespace pgir
