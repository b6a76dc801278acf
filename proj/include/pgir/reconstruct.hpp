#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pgir/sampling.hpp"
#include "pgir/signal.hpp"
#include "pgir/spectral.hpp"

namespace pgir {

/// Relaxation-parameter policy for the iteration.
class Method {
public:
  enum class Kind { ilsr, opgir, fixed };

  static Method ilsr() { return Method(Kind::ilsr, 1.0); }
  static Method opgir() { return Method(Kind::opgir, 0.0); }
  /// Throws unless mu lies in (0, 2).
  static Method fixed(double mu);
  /// "ilsr", "opgir" or "mu=<real>".
  static Method parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  double fixed_mu() const noexcept { return mu_; }
  std::string name() const;

  friend bool operator==(const Method&, const Method&) = default;

private:
  Method(Kind kind, double mu) : kind_(kind), mu_(mu) {}
  Kind kind_;
  double mu_;
};

struct ReconstructionConfig {
  Method method = Method::opgir();
  double omega = 0.0;
  /// Stop once ||f(k+1) - f(k)|| / max(||f(k)||, eps) <= tolerance.
  double tolerance = 1e-10;
  int max_iterations = 5000;

  void validate() const;
};

struct TraceRow {
  int iteration;
  double relative_update;
  std::optional<double> relative_error;
};

/// Outcome of the two recoverability checks, each reported separately.
struct ValidityReport {
  double omega;
  double sigma_min;
  Eigen::Index width;
  Eigen::Index samples;
  double width_fraction;
  double density;
  /// omega <= sigma_min.
  bool omega_within_sigma_min;
  /// width_fraction <= density, compared as counts.
  bool width_within_density;

  bool ok() const noexcept { return omega_within_sigma_min && width_within_density; }
};

struct ReconstructionReport {
  GraphSignal signal;
  std::vector<TraceRow> trace;
  double mu_used;
  double rho_A1;
  double rho_A_mu;
  /// -ln rho_A_mu; +inf when rho_A_mu is 0.
  double predicted_rate;
  int iterations;
  bool converged;
  ValidityReport validity;
};

/// rho1 at or above 1 - kRhoMargin means the samples do not pin down the band.
inline constexpr double kRhoMargin = 1e-9;

/// 2 / (2 - rho1), in [1, 2).
double mu_opt(double rho1);

/// Per-(basis, sampling set, cutoff) state shared by every run on that
/// instance: the band columns, sigma_min and rho(A_1) are computed once.
class ReconstructionPlan {
public:
  ReconstructionPlan(const SpectralBasis& basis, SamplingSet sampling, double omega);

  const SamplingSet& sampling() const noexcept { return sampling_; }
  const BandlimitSpec& band() const noexcept { return band_; }
  const ValidityReport& validity() const noexcept { return validity_; }
  double rho_A1() const noexcept { return rho1_; }
  const BandRestrictionExtremes& extremes() const noexcept { return extremes_; }

  /// Throws ValidityError naming the first failed condition.
  void require_valid() const;

  /// Relaxation parameter for a method; O-PGIR requires rho1 < 1 - kRhoMargin
  /// and a strict sub-band.
  double mu_for(const Method& method) const;

  /// mu S observed + (I - mu S) P x.
  GraphSignal apply_map(const GraphSignal& x, const GraphSignal& observed, double mu) const;

  ReconstructionReport run(const GraphSignal& observed, const ReconstructionConfig& config,
                           const GraphSignal* truth = nullptr) const;

private:
  SamplingSet sampling_;
  BandlimitSpec band_;
  Eigen::MatrixXd columns_;
  Eigen::VectorXd indicator_;
  ValidityReport validity_;
  BandRestrictionExtremes extremes_;
  double rho1_;
};

/// Builds a plan for (basis, sampling, config.omega) and runs it. Values of
/// `observed` at unsampled vertices are ignored.
ReconstructionReport pgir(const GraphSignal& observed, const SamplingSet& sampling, const SpectralBasis& basis,
                          const ReconstructionConfig& config, const GraphSignal* truth = nullptr);

/// Direct solve of min ||S Phi_w c - S observed|| by column-pivoted QR;
/// returns Phi_w c. Throws when the sampled rows do not have full column rank.
GraphSignal least_squares_oracle(const GraphSignal& observed, const SamplingSet& sampling,
                                 const SpectralBasis& basis, double omega);

double relative_error(const GraphSignal& estimate, const GraphSignal& truth);

} // namespace pgir
