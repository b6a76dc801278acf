#include "pgir/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>

#include "pgir/error.hpp"

namespace pgir::io {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\f\v");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\f\v");
  return s.substr(first, last - first + 1);
}

// Calls fn(line_number, trimmed_line) for every non-blank, non-comment line.
template <typename Fn>
void for_each_content_line(std::string_view text, Fn&& fn) {
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    const auto raw = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    fn(line_no, line);
  }
}

std::pair<std::string_view, std::string_view> split_comma(std::string_view line, std::size_t line_no) {
  const auto comma = line.find(',');
  if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
    throw ParseError("expected two comma-separated fields", line_no);
  }
  return {trim(line.substr(0, comma)), trim(line.substr(comma + 1))};
}

Eigen::Index parse_vertex(std::string_view token, std::size_t line_no) {
  Eigen::Index v = -1;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || v < 0) {
    throw ParseError("expected a vertex index, got '" + std::string(token) + "'", line_no);
  }
  return v;
}

double parse_real(std::string_view token, std::size_t line_no) {
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), x);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(x)) {
    throw ParseError("expected a finite real, got '" + std::string(token) + "'", line_no);
  }
  return x;
}

void emit_comments(std::ostringstream& out, const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
}

nlohmann::json number_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

} // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::random_device rd;
  auto tmp = path;
  tmp += ".tmp" + std::to_string(rd());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::filesystem::remove(tmp);
      throw InvalidArgument("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw InvalidArgument("cannot move output into place at " + path.string() + ": " + ec.message());
  }
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string format_signal_csv(const GraphSignal& f, const std::vector<std::string>& comments) {
  std::ostringstream out;
  emit_comments(out, comments);
  out << "vertex,value\n";
  for (Eigen::Index v = 0; v < f.size(); ++v) out << v << ',' << format_double(f[v]) << '\n';
  return out.str();
}

GraphSignal parse_signal_csv(std::string_view text, Eigen::Index expected_order) {
  std::vector<std::pair<Eigen::Index, double>> rows;
  bool first = true;
  for_each_content_line(text, [&](std::size_t line_no, std::string_view line) {
    const auto [a, b] = split_comma(line, line_no);
    if (first && a == "vertex") {
      first = false;
      return;
    }
    first = false;
    rows.emplace_back(parse_vertex(a, line_no), parse_real(b, line_no));
  });
  const auto n = expected_order >= 0 ? expected_order : static_cast<Eigen::Index>(rows.size());
  if (static_cast<Eigen::Index>(rows.size()) != n) {
    throw ParseError("signal has " + std::to_string(rows.size()) + " rows, expected " + std::to_string(n), 0);
  }
  if (n == 0) throw ParseError("signal file is empty", 0);
  Eigen::VectorXd values(n);
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (const auto& [v, x] : rows) {
    if (v >= n) throw ParseError("vertex " + std::to_string(v) + " out of range", 0);
    if (seen[static_cast<std::size_t>(v)]) throw ParseError("vertex " + std::to_string(v) + " listed twice", 0);
    seen[static_cast<std::size_t>(v)] = true;
    values(v) = x;
  }
  return GraphSignal(std::move(values));
}

std::string format_mask(const SamplingSet& s, const std::vector<std::string>& comments) {
  std::ostringstream out;
  emit_comments(out, comments);
  for (auto v : s.sampled()) out << v << '\n';
  return out.str();
}

SamplingSet parse_mask(std::string_view text, Eigen::Index order) {
  std::vector<bool> mask(static_cast<std::size_t>(order), false);
  std::optional<bool> csv;
  bool header_allowed = true;
  for_each_content_line(text, [&](std::size_t line_no, std::string_view line) {
    const bool has_comma = line.find(',') != std::string_view::npos;
    if (!csv) csv = has_comma;
    if (*csv != has_comma) throw ParseError("mixed mask formats", line_no);
    Eigen::Index v = -1;
    bool sampled = true;
    if (*csv) {
      const auto [a, b] = split_comma(line, line_no);
      if (header_allowed && a == "vertex") {
        header_allowed = false;
        return;
      }
      v = parse_vertex(a, line_no);
      if (b == "1") {
        sampled = true;
      } else if (b == "0") {
        sampled = false;
      } else {
        throw ParseError("sampled flag must be 0 or 1", line_no);
      }
    } else {
      v = parse_vertex(line, line_no);
    }
    header_allowed = false;
    if (v >= order) throw ParseError("vertex " + std::to_string(v) + " out of range for n = " + std::to_string(order), line_no);
    if (sampled) mask[static_cast<std::size_t>(v)] = true;
  });
  return SamplingSet(std::move(mask));
}

std::string format_trace_csv(const std::vector<TraceRow>& trace) {
  const bool with_error = !trace.empty() && trace.front().relative_error.has_value();
  std::ostringstream out;
  out << "iteration,relative_update" << (with_error ? ",relative_error" : "") << '\n';
  for (const auto& row : trace) {
    out << row.iteration << ',' << format_double(row.relative_update);
    if (with_error) out << ',' << format_double(row.relative_error.value_or(std::nan("")));
    out << '\n';
  }
  return out.str();
}

nlohmann::json validity_json(const ValidityReport& v) {
  return {
      {"omega", v.omega},
      {"sigma_min", v.sigma_min},
      {"width", v.width},
      {"samples", v.samples},
      {"width_fraction", v.width_fraction},
      {"density", v.density},
      {"omega_within_sigma_min", v.omega_within_sigma_min},
      {"width_within_density", v.width_within_density},
  };
}

nlohmann::json report_json(const ReconstructionReport& r) {
  return {
      {"mu_used", r.mu_used},
      {"rho_A1", r.rho_A1},
      {"rho_A_mu", r.rho_A_mu},
      {"predicted_rate", number_or_null(r.predicted_rate)},
      {"iterations", r.iterations},
      {"converged", r.converged},
      {"validity", validity_json(r.validity)},
  };
}

std::string format_benchmark_csv(const BenchmarkResult& result) {
  std::ostringstream out;
  out << "iteration";
  for (const auto& m : result.methods) out << ',' << m.name << "_mean_err";
  out << '\n';
  const std::size_t length = result.methods.empty() ? 0 : result.methods.front().mean_error.size();
  for (std::size_t k = 0; k < length; ++k) {
    out << k + 1;
    for (const auto& m : result.methods) out << ',' << format_double(m.mean_error[k]);
    out << '\n';
  }
  return out.str();
}

std::string format_noise_csv(const NoiseSweepResult& result) {
  std::ostringstream out;
  out << "snr_db";
  for (const auto& name : result.metadata.methods) out << ',' << name << "_steady_state_err";
  out << '\n';
  for (const auto& row : result.rows) {
    out << format_double(row.snr_db);
    for (double e : row.steady_state_error) out << ',' << format_double(e);
    out << '\n';
  }
  return out.str();
}

nlohmann::json metadata_json(const BenchmarkMetadata& meta) {
  nlohmann::json instances = nlohmann::json::array();
  for (const auto& s : meta.instances) {
    nlohmann::json mu = nlohmann::json::object();
    for (std::size_t i = 0; i < s.mu.size() && i < meta.methods.size(); ++i) mu[meta.methods[i]] = s.mu[i];
    instances.push_back({
        {"samples", s.samples},
        {"density", s.density},
        {"omega", s.omega},
        {"sigma_min", s.sigma_min},
        {"width_fraction", s.width_fraction},
        {"rho_A1", s.rho_A1},
        {"mu", mu},
    });
  }
  std::ostringstream hash;
  hash << std::hex << meta.graph_hash;
  return {
      {"graph", {{"n", meta.n}, {"m", meta.m}, {"content_hash", hash.str()}}},
      {"base_seed", meta.base_seed},
      {"trials", meta.trials},
      {"fraction", meta.fraction},
      {"tolerance", meta.tolerance},
      {"max_iterations", meta.max_iterations},
      {"threshold", meta.threshold},
      {"omega_auto", meta.omega_auto},
      {"resample_per_trial", meta.resample_per_trial},
      {"snr_signal_power", "norm2_over_n"},
      {"methods", meta.methods},
      {"instances", instances},
      {"signal_seeds", meta.signal_seeds},
  };
}

nlohmann::json benchmark_json(const BenchmarkResult& result) {
  auto doc = metadata_json(result.metadata);
  nlohmann::json methods = nlohmann::json::array();
  for (const auto& m : result.methods) {
    methods.push_back({
        {"name", m.name},
        {"mean_iterations_to_threshold", number_or_null(m.mean_iterations_to_threshold)},
        {"trials_reaching_threshold", m.trials_reaching_threshold},
        {"mean_iterations", m.mean_iterations},
        {"seconds_per_iteration", m.seconds_per_iteration},
    });
  }
  doc["results"] = methods;
  return doc;
}

} // namespace pgir::io
