// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: acceptance [N ...]   (no arguments runs every criterion)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pgir/experiments.hpp"
#include "pgir/io.hpp"
#include "pgir/reconstruct.hpp"

using namespace pgir;

namespace {

struct Outcome {
  bool pass;
  std::string details;
};

struct Criterion {
  int id;
  std::string name;
  std::function<Outcome()> run;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

Outcome spectra() {
  struct Case {
    const char* name;
    Graph g;
    std::vector<double> expected;
  };
  const std::vector<Case> cases = {
      {"K2", oracle::complete2(), {0, 2}},
      {"P3", oracle::path(3), {0, 1, 2}},
      {"C6", oracle::cycle(6), {0, 0.5, 0.5, 1.5, 1.5, 2}},
  };
  double worst = 0.0;
  for (const auto& c : cases) {
    const auto lambda = eigendecompose(normalized_laplacian(c.g)).eigenvalues();
    for (std::size_t i = 0; i < c.expected.size(); ++i) {
      worst = std::max(worst, std::abs(lambda(static_cast<Eigen::Index>(i)) - c.expected[i]));
    }
  }
  return {worst <= 1e-10, "max deviation " + fmt(worst) + " (tol 1e-10)"};
}

Outcome eigenvalue_range() {
  std::mt19937_64 rng(2);
  double lo = 0.0;
  double hi = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Vertex n = std::uniform_int_distribution<Vertex>(10, 300)(rng);
    const double ratio = std::uniform_real_distribution<double>(2.0, 6.0)(rng);
    const auto max_m = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    const auto m = static_cast<std::size_t>(std::min(max_m, std::round(ratio * n)));
    const auto lambda = eigendecompose(normalized_laplacian(erdos_renyi(n, m, rng()))).eigenvalues();
    lo = std::min(lo, lambda.minCoeff());
    hi = std::max(hi, lambda.maxCoeff());
  }
  return {lo >= -1e-10 && hi <= 2.0 + 1e-10, "20 graphs, eigenvalues in [" + fmt(lo) + ", " + fmt(hi) + "]"};
}

Outcome rho_equivalence() {
  std::mt19937_64 rng(3);
  const std::vector<double> mus = {0.5, 1.0, 1.3, 1.7};
  double worst_rho1 = 0.0;
  double worst_closed = 0.0;
  double worst_exact = 0.0;
  int mismatches = 0;
  std::vector<int> per_mu(mus.size(), 0);
  for (int trial = 0; trial < 20; ++trial) {
    const Vertex n = std::uniform_int_distribution<Vertex>(8, 50)(rng);
    const auto g = erdos_renyi(n, static_cast<std::size_t>(std::lround(2.5 * n)), rng());
    const auto basis = eigendecompose(normalized_laplacian(g));
    const auto s = uniform_sampling_set(n, std::uniform_real_distribution<double>(0.2, 0.8)(rng), rng());
    const auto spec = bandlimit(basis, std::uniform_real_distribution<double>(0.0, 2.0)(rng));
    const auto p = oracle::dense_lowpass(basis, spec.width());
    const double rho1 = rho_A1(spec, basis, s);
    worst_rho1 = std::max(worst_rho1, std::abs(rho1 - oracle::spectral_radius(oracle::dense_T(p, s, 1.0))));
    for (std::size_t i = 0; i < mus.size(); ++i) {
      const double truth = oracle::spectral_radius(oracle::dense_T(p, s, mus[i]));
      const double closed = std::abs(rho_A_mu(rho1, mus[i]) - truth);
      worst_closed = std::max(worst_closed, closed);
      worst_exact = std::max(worst_exact, std::abs(iteration_radius(spec, basis, s, mus[i]) - truth));
      if (closed > 1e-8) {
        ++mismatches;
        ++per_mu[i];
      }
    }
  }
  std::ostringstream d;
  d << "rho_A1 max dev " << fmt(worst_rho1) << "; rho_A_mu max dev " << fmt(worst_closed) << " with " << mismatches
    << "/80 cases over 1e-8 (per mu 0.5/1/1.3/1.7: " << per_mu[0] << '/' << per_mu[1] << '/' << per_mu[2] << '/'
    << per_mu[3] << ")";
  d << "; exact iteration_radius max dev " << fmt(worst_exact);
  if (mismatches > 0) {
    d << ". Closed form assumes the band restriction of I-S has smallest eigenvalue 0; it is an upper bound"
         " for mu above 2/(2-rho_A1)";
  }
  return {worst_rho1 <= 1e-8 && mismatches == 0, d.str()};
}

Outcome mu_opt_grid() {
  double worst = 0.0;
  for (double rho1 : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    double best = 2.0;
    double best_mu = 0.0;
    for (int i = 1; i <= 199; ++i) {
      const double mu = i / 100.0;
      const double r = rho_A_mu(rho1, mu);
      if (r < best) {
        best = r;
        best_mu = mu;
      }
    }
    worst = std::max(worst, std::abs(best_mu - mu_opt(rho1)));
  }
  return {worst <= 0.01 + 1e-12, "max |grid argmin - mu_opt| = " + fmt(worst) + " (tol 0.01)"};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(5);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = oracle::random_valid_instance(rng, 10, 60);
    const auto truth = random_bandlimited(inst.basis, inst.omega, rng());
    const auto direct = least_squares_oracle(truth, inst.sampling, inst.basis, inst.omega);
    for (const auto& m : {Method::ilsr(), Method::opgir()}) {
      const auto r = pgir::pgir(truth, inst.sampling, inst.basis, ReconstructionConfig{m, inst.omega, 1e-12, 20000});
      worst = std::max(worst, relative_error(r.signal, direct));
    }
  }
  return {worst <= 1e-6, "20 instances x {ilsr, opgir}, max relative error " + fmt(worst) + " (tol 1e-6)"};
}

Outcome rate_realization() {
  std::mt19937_64 rng(6);
  int checked = 0;
  int attempts = 0;
  double worst = 0.0;
  while (checked < 20 && attempts < 200) {
    ++attempts;
    const auto inst = oracle::random_valid_instance(rng, 20, 60);
    const auto truth = random_bandlimited(inst.basis, inst.omega, rng());
    for (const auto& m : {Method::ilsr(), Method::opgir()}) {
      const auto r =
          pgir::pgir(truth, inst.sampling, inst.basis, ReconstructionConfig{m, inst.omega, 1e-10, 20000}, &truth);
      if (r.rho_A_mu < 0.1 || r.trace.size() < 21) continue;
      const double last = *r.trace.back().relative_error;
      const double first = *r.trace[r.trace.size() - 21].relative_error;
      const double ratio = std::pow(last / first, 1.0 / 20.0);
      worst = std::max(worst, std::abs(ratio - r.rho_A_mu) / r.rho_A_mu);
      ++checked;
    }
  }
  return {checked >= 20 && worst <= 0.10,
          std::to_string(checked) + " runs with rho >= 0.1, max relative deviation " + fmt(worst) + " (tol 0.10)"};
}

BenchmarkConfig desk_config() {
  BenchmarkConfig c;
  c.graph = ErdosRenyiSource{300, 1200};
  c.fraction = 0.35;
  c.trials = 100;
  c.seed = 0;
  return c;
}

Outcome convergence_curves() {
  const auto result = convergence_benchmark(desk_config());
  const auto& ilsr = result.methods.at(0);
  const auto& opgir = result.methods.at(1);
  std::size_t above = 0;
  double worst = 0.0;
  for (std::size_t k = 0; k < ilsr.mean_error.size(); ++k) {
    if (opgir.mean_error[k] > ilsr.mean_error[k]) {
      ++above;
      worst = std::max(worst, opgir.mean_error[k] - ilsr.mean_error[k]);
    }
  }
  const bool all_reached = ilsr.trials_reaching_threshold == 100 && opgir.trials_reaching_threshold == 100;
  const bool faster = opgir.mean_iterations_to_threshold < ilsr.mean_iterations_to_threshold;
  std::ostringstream d;
  const auto& inst = result.metadata.instances.front();
  d << "iterations to 1e-6: ilsr " << fmt(ilsr.mean_iterations_to_threshold) << ", opgir "
    << fmt(opgir.mean_iterations_to_threshold) << "; opgir curve above ilsr at " << above << "/"
    << ilsr.mean_error.size() << " iterations (max excess " << fmt(worst) << "); omega " << fmt(inst.omega)
    << ", sigma_min " << fmt(inst.sigma_min) << ", rho_A1 " << fmt(inst.rho_A1) << ", mu_opt " << fmt(inst.mu.at(1));
  return {all_reached && faster && above == 0, d.str()};
}

Outcome noise_monotonicity() {
  auto cfg = desk_config();
  cfg.snr_db = {5, 10, 15, 20, 25, 30};
  const auto sweep = noise_sweep(cfg);
  bool ok = true;
  std::ostringstream d;
  for (std::size_t m = 0; m < sweep.metadata.methods.size(); ++m) {
    d << (m ? "; " : "") << sweep.metadata.methods[m] << ":";
    for (std::size_t j = 0; j < sweep.rows.size(); ++j) {
      d << ' ' << fmt(sweep.rows[j].steady_state_error[m]);
      if (j > 0 && !(sweep.rows[j].steady_state_error[m] < sweep.rows[j - 1].steady_state_error[m])) ok = false;
    }
  }
  return {ok, "100 trials, steady-state error at 5..30 dB " + d.str()};
}

Outcome interlacing() {
  std::mt19937_64 rng(9);
  int violations = 0;
  double worst = 0.0;
  for (int chain = 0; chain < 10; ++chain) {
    const Vertex n = std::uniform_int_distribution<Vertex>(10, 60)(rng);
    const auto g = erdos_renyi(n, static_cast<std::size_t>(3 * n), rng());
    const auto laplacian = normalized_laplacian(g);
    const auto basis = eigendecompose(laplacian);
    std::vector<Vertex> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Vertex{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<bool> mask(static_cast<std::size_t>(n), false);
    double previous = max_cutoff(basis, SamplingSet(mask));
    for (auto v : order) {
      mask[static_cast<std::size_t>(v)] = true;
      const SamplingSet s(mask);
      const double via_basis = max_cutoff(basis, s);
      const double via_laplacian = max_cutoff(laplacian, s);
      for (double current : {via_basis, via_laplacian}) {
        // Squared cutoffs are eigenvalues; compare at eigenvalue precision.
        const double drop = previous * previous - current * current;
        if (drop > 1e-12) ++violations;
        worst = std::max(worst, drop);
      }
      previous = via_basis;
    }
  }
  return {violations == 0, "10 chains, " + std::to_string(violations) + " decreases, largest squared drop " +
                               fmt(std::max(worst, 0.0)) + " (tol 1e-12)"};
}

Outcome determinism() {
  const auto a = io::format_benchmark_csv(convergence_benchmark(desk_config()));
  const auto b = io::format_benchmark_csv(convergence_benchmark(desk_config()));
  return {a == b, std::string(a == b ? "identical" : "different") + " CSVs (" + std::to_string(a.size()) + " bytes)"};
}

} // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "spectrum correctness", spectra},
      {2, "eigenvalue range", eigenvalue_range},
      {3, "rho equivalence with explicit T_mu", rho_equivalence},
      {4, "mu_opt grid optimality", mu_opt_grid},
      {5, "least-squares oracle equivalence", oracle_equivalence},
      {6, "rate realization", rate_realization},
      {7, "convergence benchmark ER(300,1200)", convergence_curves},
      {8, "steady-state error decreasing in SNR", noise_monotonicity},
      {9, "max_cutoff nondecreasing along nested masks", interlacing},
      {10, "benchmark determinism", determinism},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty()) {
    for (const auto& c : criteria) selected.push_back(c.id);
  }

  int failures = 0;
  for (int id : selected) {
    const auto it = std::find_if(criteria.begin(), criteria.end(), [&](const Criterion& c) { return c.id == id; });
    if (it == criteria.end()) {
      std::cerr << "unknown criterion " << id << "\n";
      return 2;
    }
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = it->run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (outcome.pass ? "[PASS] " : "[FAIL] ") << it->id << ' ' << it->name << ": " << outcome.details << " ["
              << fmt(seconds) << " s]" << std::endl;
    if (!outcome.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
