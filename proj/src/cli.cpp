#include "pgir/cli.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pgir/basis_cache.hpp"
#include "pgir/error.hpp"
#include "pgir/experiments.hpp"
#include "pgir/graph.hpp"
#include "pgir/io.hpp"
#include "pgir/reconstruct.hpp"
#include "pgir/sampling.hpp"
#include "pgir/spectral.hpp"

namespace pgir::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Paths {
  std::string graph, mask, signal, truth, trace, out, report, noise_out;
};

/// "auto" or a real number.
std::optional<double> parse_omega(const std::string& text) {
  if (text == "auto") return std::nullopt;
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(x)) {
    throw InvalidArgument("omega must be a real number or 'auto', got '" + text + "'");
  }
  return x;
}

double parse_snr(const std::string& text) {
  if (text == "inf" || text == "+inf") return kNoiseless;
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc() || ptr != text.data() + text.size()) throw InvalidArgument("bad snr value '" + text + "'");
  return x;
}

Graph load_graph(const std::string& path) { return load_edge_list(io::read_file(path)); }

SpectralBasis basis_for(const Graph& g) { return cached_basis(g, basis_cache_directory()); }

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

double resolve_omega(const std::optional<double>& requested, const SpectralBasis& basis, const SamplingSet& s) {
  return requested ? *requested : auto_cutoff(basis, s, max_cutoff(basis, s));
}

json rate_or_null(double rho) {
  if (rho > 0.0 && rho < 1.0) return asymptotic_rate(rho);
  return nullptr;
}

void add_gen_graph(CLI::App& app, std::function<void()>& action, std::ostream& out) {
  auto* sub = app.add_subcommand("gen-graph", "Generate a random graph as an edge list");
  auto model = std::make_shared<std::string>("er");
  auto n = std::make_shared<Vertex>(0);
  auto m = std::make_shared<std::size_t>(0);
  auto seed = std::make_shared<std::uint64_t>(0);
  auto path = std::make_shared<std::string>();
  sub->add_option("--model", *model, "Graph model")->check(CLI::IsMember({"er"}));
  sub->add_option("--n", *n, "Vertex count")->required();
  sub->add_option("--m", *m, "Edge count")->required();
  sub->add_option("--seed", *seed, "RNG seed")->required();
  sub->add_option("--out", *path, "Output edge list")->required();
  sub->callback([=, &action, &out] {
    action = [=, &out] {
      const auto g = erdos_renyi(*n, *m, *seed);
      io::write_file_atomic(*path, format_edge_list(g, {"model=" + *model + " n=" + std::to_string(*n) +
                                                        " m=" + std::to_string(*m) + " seed=" + std::to_string(*seed)}));
      std::ostringstream hash;
      hash << std::hex << g.content_hash();
      out << dump({{"n", g.order()}, {"m", g.edge_count()}, {"content_hash", hash.str()}, {"out", *path}});
    };
  });
}

void add_analyze(CLI::App& app, std::function<void()>& action, std::ostream& out) {
  auto* sub = app.add_subcommand("analyze", "Report recoverability and convergence diagnostics");
  auto p = std::make_shared<Paths>();
  auto omega = std::make_shared<std::string>("auto");
  sub->add_option("--graph", p->graph, "Edge list")->required();
  sub->add_option("--mask", p->mask, "Sampling mask")->required();
  sub->add_option("--omega", *omega, "Cutoff frequency or 'auto'");
  sub->callback([=, &action, &out] {
    action = [=, &out] {
      const auto g = load_graph(p->graph);
      const auto basis = basis_for(g);
      const auto s = io::parse_mask(io::read_file(p->mask), g.order());
      const double w = resolve_omega(parse_omega(*omega), basis, s);
      const ReconstructionPlan plan(basis, s, w);
      const auto& v = plan.validity();
      json doc = {
          {"n", g.order()},
          {"m", g.edge_count()},
          {"samples", s.count()},
          {"density", v.density},
          {"omega", w},
          {"omega_auto", *omega == "auto"},
          {"sigma_min", v.sigma_min},
          {"width", v.width},
          {"width_fraction", v.width_fraction},
          {"omega_within_sigma_min", v.omega_within_sigma_min},
          {"width_within_density", v.width_within_density},
          {"rho_A1", plan.rho_A1()},
          {"band_restriction_min_eigenvalue", plan.extremes().smallest},
      };
      doc["rates"] = {{"ilsr", rate_or_null(rho_A_mu(plan.rho_A1(), 1.0))}};
      try {
        const double mu = plan.mu_for(Method::opgir());
        doc["mu_opt"] = mu;
        doc["rho_A_mu_opt"] = rho_A_mu(plan.rho_A1(), mu);
        doc["rates"]["opgir"] = rate_or_null(rho_A_mu(plan.rho_A1(), mu));
      } catch (const ValidityError& e) {
        doc["mu_opt"] = nullptr;
        doc["mu_opt_error"] = e.what();
      }
      out << dump(doc);
    };
  });
}

void add_gen_signal(CLI::App& app, std::function<void()>& action, std::ostream& out) {
  auto* sub = app.add_subcommand("gen-signal", "Draw a random unit-norm bandlimited signal");
  auto p = std::make_shared<Paths>();
  auto omega = std::make_shared<double>(0.0);
  auto seed = std::make_shared<std::uint64_t>(0);
  sub->add_option("--graph", p->graph, "Edge list")->required();
  sub->add_option("--omega", *omega, "Cutoff frequency")->required();
  sub->add_option("--seed", *seed, "RNG seed")->required();
  sub->add_option("--out", p->out, "Output signal CSV")->required();
  sub->callback([=, &action, &out] {
    action = [=, &out] {
      const auto g = load_graph(p->graph);
      const auto basis = basis_for(g);
      const auto f = random_bandlimited(basis, *omega, *seed);
      io::write_file_atomic(p->out, io::format_signal_csv(f, {"omega=" + io::format_double(*omega) +
                                                              " seed=" + std::to_string(*seed)}));
      out << dump({{"n", f.size()}, {"omega", *omega}, {"seed", *seed}, {"width", bandlimit(basis, *omega).width()},
                   {"out", p->out}});
    };
  });
}

void add_sample(CLI::App& app, std::function<void()>& action, std::ostream& out) {
  auto* sub = app.add_subcommand("sample", "Draw a uniform random sampling set");
  auto p = std::make_shared<Paths>();
  auto fraction = std::make_shared<double>(0.0);
  auto seed = std::make_shared<std::uint64_t>(0);
  sub->add_option("--graph", p->graph, "Edge list")->required();
  sub->add_option("--fraction", *fraction, "Fraction of vertices to sample")->required();
  sub->add_option("--seed", *seed, "RNG seed")->required();
  sub->add_option("--out", p->out, "Output mask file")->required();
  sub->callback([=, &action, &out] {
    action = [=, &out] {
      const auto g = load_graph(p->graph);
      const auto s = uniform_sampling_set(g.order(), *fraction, *seed);
      io::write_file_atomic(p->out, io::format_mask(s, {"fraction=" + io::format_double(*fraction) +
                                                        " seed=" + std::to_string(*seed)}));
      out << dump({{"n", g.order()}, {"samples", s.count()}, {"density", density(s)}, {"out", p->out}});
    };
  });
}

void add_reconstruct(CLI::App& app, std::function<void()>& action, std::ostream& out) {
  auto* sub = app.add_subcommand("reconstruct", "Recover a bandlimited signal from its samples");
  auto p = std::make_shared<Paths>();
  auto omega = std::make_shared<std::string>();
  auto method = std::make_shared<std::string>("opgir");
  auto tol = std::make_shared<double>(ReconstructionConfig{}.tolerance);
  auto max_iter = std::make_shared<int>(ReconstructionConfig{}.max_iterations);
  sub->add_option("--graph", p->graph, "Edge list")->required();
  sub->add_option("--signal", p->signal, "Observed signal CSV (unsampled entries ignored)")->required();
  sub->add_option("--mask", p->mask, "Sampling mask")->required();
  sub->add_option("--omega", *omega, "Cutoff frequency or 'auto'")->required();
  sub->add_option("--method", *method, "ilsr, opgir or mu=<real>");
  sub->add_option("--tol", *tol, "Relative-update stop threshold");
  sub->add_option("--max-iter", *max_iter, "Iteration cap");
  sub->add_option("--truth", p->truth, "Ground-truth signal CSV for the error column");
  sub->add_option("--trace", p->trace, "Trace CSV output")->required();
  sub->add_option("--out", p->out, "Recovered signal CSV output")->required();
  sub->add_option("--report", p->report, "Report JSON output (also printed)");
  sub->callback([=, &action, &out] {
    action = [=, &out] {
      const auto g = load_graph(p->graph);
      const auto basis = basis_for(g);
      const auto s = io::parse_mask(io::read_file(p->mask), g.order());
      const auto observed = io::parse_signal_csv(io::read_file(p->signal), g.order());
      std::optional<GraphSignal> truth;
      if (!p->truth.empty()) truth = io::parse_signal_csv(io::read_file(p->truth), g.order());
      ReconstructionConfig cfg{Method::parse(*method), resolve_omega(parse_omega(*omega), basis, s), *tol, *max_iter};
      const auto report = pgir(observed, s, basis, cfg, truth ? &*truth : nullptr);
      json doc = io::report_json(report);
      doc["config"] = {{"method", cfg.method.name()}, {"omega", cfg.omega},  {"omega_flag", *omega},
                       {"tolerance", *tol},           {"max_iterations", *max_iter}};
      if (truth) doc["final_relative_error"] = relative_error(report.signal, *truth);
      io::write_file_atomic(p->trace, io::format_trace_csv(report.trace));
      io::write_file_atomic(p->out, io::format_signal_csv(report.signal, {"method=" + cfg.method.name() +
                                                                         " omega=" + io::format_double(cfg.omega)}));
      if (!p->report.empty()) io::write_file_atomic(p->report, dump(doc));
      out << dump(doc);
    };
  });
}

void add_benchmark(CLI::App& app, std::function<void()>& action, std::ostream& out) {
  auto* sub = app.add_subcommand("benchmark", "Multi-trial convergence and noise benchmark");
  auto p = std::make_shared<Paths>();
  auto er = std::make_shared<std::vector<long long>>();
  auto omega = std::make_shared<std::string>("auto");
  auto methods = std::make_shared<std::vector<std::string>>(std::vector<std::string>{"ilsr", "opgir"});
  auto snr = std::make_shared<std::vector<std::string>>();
  auto cfg = std::make_shared<BenchmarkConfig>();
  auto* graph_opt = sub->add_option("--graph", p->graph, "Edge list");
  auto* er_opt = sub->add_option("--er", *er, "Erdos-Renyi source n,m")->delimiter(',')->expected(2);
  graph_opt->excludes(er_opt);
  sub->add_option("--fraction", cfg->fraction, "Sampling fraction")->required();
  sub->add_option("--omega", *omega, "Cutoff frequency or 'auto'");
  sub->add_option("--methods", *methods, "Comma-separated methods")->delimiter(',');
  sub->add_option("--trials", cfg->trials, "Trial count")->required();
  sub->add_option("--seed", cfg->seed, "Base seed")->required();
  sub->add_option("--snr", *snr, "Comma-separated SNR list in dB (enables the noise sweep)")->delimiter(',');
  sub->add_option("--tol", cfg->tolerance, "Relative-update stop threshold");
  sub->add_option("--max-iter", cfg->max_iterations, "Iteration cap");
  sub->add_option("--threshold", cfg->threshold, "Error level for iterations-to-threshold");
  sub->add_option("--threads", cfg->threads, "Worker threads for trials");
  sub->add_flag("--resample-per-trial", cfg->resample_per_trial, "Draw a fresh sampling set per trial");
  sub->add_flag("--keep-traces", cfg->keep_traces, "Also write raw per-trial traces");
  sub->add_option("--out", p->out, "Convergence CSV output")->required();
  sub->add_option("--noise-out", p->noise_out, "Noise sweep CSV output (default <out>.noise.csv)");
  sub->callback([=, &action, &out] {
    action = [=, &out] {
      BenchmarkConfig config = *cfg;
      if (!p->graph.empty()) {
        config.graph = GraphFileSource{p->graph};
      } else if (er->size() == 2) {
        config.graph = ErdosRenyiSource{static_cast<Vertex>((*er)[0]), static_cast<std::size_t>((*er)[1])};
      } else {
        throw InvalidArgument("benchmark needs --graph <path> or --er n,m");
      }
      config.omega = parse_omega(*omega);
      config.methods.clear();
      for (const auto& m : *methods) config.methods.push_back(Method::parse(m));
      for (const auto& x : *snr) config.snr_db.push_back(parse_snr(x));
      config.validate();

      const auto graph = resolve_graph(config);
      const auto basis = basis_for(graph);
      const auto result = convergence_benchmark(config, graph, basis);
      json meta = io::benchmark_json(result);
      meta["flags"] = {{"omega", *omega}, {"methods", *methods}, {"snr", *snr}};
      if (!p->graph.empty()) meta["graph"]["source"] = p->graph;
      else meta["graph"]["source"] = "er:" + std::to_string((*er)[0]) + "," + std::to_string((*er)[1]);

      std::vector<std::pair<fs::path, std::string>> outputs;
      outputs.emplace_back(p->out, io::format_benchmark_csv(result));
      if (config.keep_traces) {
        std::ostringstream traces;
        traces << "method,trial,iteration,relative_error\n";
        for (const auto& m : result.methods) {
          for (std::size_t t = 0; t < m.traces.size(); ++t) {
            for (std::size_t k = 0; k < m.traces[t].size(); ++k) {
              traces << m.name << ',' << t << ',' << k + 1 << ',' << io::format_double(m.traces[t][k]) << '\n';
            }
          }
        }
        outputs.emplace_back(p->out + ".traces.csv", traces.str());
      }
      if (!config.snr_db.empty()) {
        const auto sweep = noise_sweep(config, graph, basis);
        const auto noise_path = p->noise_out.empty() ? p->out + ".noise.csv" : p->noise_out;
        outputs.emplace_back(noise_path, io::format_noise_csv(sweep));
        meta["noise_sweep"] = {{"out", noise_path}, {"snr_db", config.snr_db}};
      }
      outputs.emplace_back(p->out + ".meta.json", dump(meta));
      for (const auto& [path, content] : outputs) io::write_file_atomic(path, content);

      json summary = json::array();
      for (const auto& m : result.methods) {
        summary.push_back({{"name", m.name},
                           {"mean_iterations_to_threshold", m.mean_iterations_to_threshold},
                           {"trials_reaching_threshold", m.trials_reaching_threshold}});
      }
      out << dump({{"out", p->out}, {"methods", summary}});
    };
  });
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bandlimited graph signal reconstruction by relaxed Papoulis-Gerchberg iteration", "pgir"};
  app.require_subcommand(1);
  std::function<void()> action;
  add_gen_graph(app, action, out);
  add_analyze(app, action, out);
  add_gen_signal(app, action, out);
  add_sample(app, action, out);
  add_reconstruct(app, action, out);
  add_benchmark(app, action, out);

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.emplace_back("pgir");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return e.get_exit_code() == 0 ? 2 : e.get_exit_code();
  }

  try {
    if (action) action();
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

} // namespace pgir::cli
