#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pgir/experiments.hpp"
#include "pgir/reconstruct.hpp"
#include "pgir/sampling.hpp"
#include "pgir/signal.hpp"

namespace pgir::io {

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// 17 significant digits; inf and nan spelled "inf", "-inf", "nan".
std::string format_double(double value);

/// "vertex,value" CSV. Rows may come in any order but must cover 0..n-1 once.
std::string format_signal_csv(const GraphSignal& f, const std::vector<std::string>& comments = {});
GraphSignal parse_signal_csv(std::string_view text, Eigen::Index expected_order = -1);

/// One sampled vertex index per line.
std::string format_mask(const SamplingSet& s, const std::vector<std::string>& comments = {});
/// Accepts the index list or the "vertex,sampled" CSV form.
SamplingSet parse_mask(std::string_view text, Eigen::Index order);

/// "iteration,relative_update[,relative_error]".
std::string format_trace_csv(const std::vector<TraceRow>& trace);

nlohmann::json report_json(const ReconstructionReport& report);
nlohmann::json validity_json(const ValidityReport& v);

/// "iteration,<method>_mean_err,..."
std::string format_benchmark_csv(const BenchmarkResult& result);
/// "snr_db,<method>_steady_state_err,..."
std::string format_noise_csv(const NoiseSweepResult& result);
nlohmann::json metadata_json(const BenchmarkMetadata& meta);
nlohmann::json benchmark_json(const BenchmarkResult& result);

} // namespace pgir::io
