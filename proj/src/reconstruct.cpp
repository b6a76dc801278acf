#include "pgir/reconstruct.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "pgir/error.hpp"

namespace pgir {

namespace {

constexpr double kUpdateFloor = 1e-300;
constexpr double kRankTolerance = 1e-10;

bool mu_in_open_range(double mu) { return mu > 0.0 && mu < 2.0; }

} // namespace

Method Method::fixed(double mu) {
  if (!mu_in_open_range(mu)) {
    throw ValidityError("validity: mu must lie in (0,2), got " + std::to_string(mu));
  }
  return Method(Kind::fixed, mu);
}

Method Method::parse(std::string_view text) {
  if (text == "ilsr") return ilsr();
  if (text == "opgir") return opgir();
  if (text.substr(0, 3) == "mu=") {
    const auto body = text.substr(3);
    double mu = 0.0;
    auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), mu);
    if (ec == std::errc() && ptr == body.data() + body.size()) return fixed(mu);
  }
  throw InvalidArgument("unknown method '" + std::string(text) + "' (expected ilsr, opgir or mu=<real>)");
}

std::string Method::name() const {
  switch (kind_) {
  case Kind::ilsr:
    return "ilsr";
  case Kind::opgir:
    return "opgir";
  case Kind::fixed: {
    std::ostringstream s;
    s << "mu=" << mu_;
    return s.str();
  }
  }
  return {};
}

void ReconstructionConfig::validate() const {
  if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (max_iterations < 1) throw InvalidArgument("max_iterations must be at least 1");
  if (method.kind() == Method::Kind::fixed && !mu_in_open_range(method.fixed_mu())) {
    throw ValidityError("validity: mu must lie in (0,2)");
  }
}

double mu_opt(double rho1) {
  if (!(rho1 >= 0.0)) throw InvalidArgument("mu_opt: rho1 must be non-negative");
  if (!(rho1 < 1.0 - kRhoMargin)) {
    throw ValidityError("validity: rho(A_1) = " + std::to_string(rho1) +
                        " is not below 1; the samples do not determine the band");
  }
  return 2.0 / (2.0 - rho1);
}

ReconstructionPlan::ReconstructionPlan(const SpectralBasis& basis, SamplingSet sampling, double omega)
    : sampling_(std::move(sampling)), band_(bandlimit(basis, omega)) {
  if (sampling_.size() != basis.order()) throw InvalidArgument("sampling mask size does not match the basis");
  columns_ = band_columns(band_, basis);
  indicator_ = sampling_.indicator();
  extremes_ = band_restriction_extremes(band_, basis, sampling_);
  rho1_ = extremes_.largest;
  const double sigma = max_cutoff(basis, sampling_);
  validity_ = ValidityReport{
      .omega = omega,
      .sigma_min = sigma,
      .width = band_.width(),
      .samples = sampling_.count(),
      .width_fraction = band_.width_fraction(),
      .density = density(sampling_),
      .omega_within_sigma_min = omega <= sigma,
      .width_within_density = band_.width() <= sampling_.count(),
  };
}

void ReconstructionPlan::require_valid() const {
  if (!validity_.omega_within_sigma_min) {
    throw ValidityError("validity: omega exceeds sigma_min (omega = " + std::to_string(validity_.omega) +
                        ", sigma_min = " + std::to_string(validity_.sigma_min) + ")");
  }
  if (!validity_.width_within_density) {
    throw ValidityError("validity: band width fraction exceeds sampling density (" +
                        std::to_string(validity_.width_fraction) + " > " + std::to_string(validity_.density) + ")");
  }
}

double ReconstructionPlan::mu_for(const Method& method) const {
  switch (method.kind()) {
  case Method::Kind::ilsr:
    return 1.0;
  case Method::Kind::fixed:
    return method.fixed_mu();
  case Method::Kind::opgir:
    if (band_.full_band()) throw ValidityError("validity: optimal mu needs a strict sub-band (width fraction < 1)");
    return mu_opt(rho1_);
  }
  return 1.0;
}

GraphSignal ReconstructionPlan::apply_map(const GraphSignal& x, const GraphSignal& observed, double mu) const {
  if (x.size() != indicator_.size() || observed.size() != indicator_.size()) {
    throw InvalidArgument("apply_map: dimension mismatch");
  }
  const Eigen::VectorXd p = columns_ * (columns_.transpose() * x.values());
  return GraphSignal(mu * indicator_.cwiseProduct(observed.values()) + p - mu * indicator_.cwiseProduct(p));
}

ReconstructionReport ReconstructionPlan::run(const GraphSignal& observed, const ReconstructionConfig& config,
                                             const GraphSignal* truth) const {
  config.validate();
  if (observed.size() != indicator_.size()) throw InvalidArgument("observed signal size does not match the basis");
  if (truth != nullptr && truth->size() != indicator_.size()) {
    throw InvalidArgument("truth signal size does not match the basis");
  }
  require_valid();
  const double mu = mu_for(config.method);
  const double radius = rho_A_mu(rho1_, mu);

  const Eigen::VectorXd seed_term = mu * indicator_.cwiseProduct(observed.values());
  const Eigen::VectorXd keep = Eigen::VectorXd::Ones(indicator_.size()) - mu * indicator_;
  const double truth_norm = truth != nullptr ? truth->norm() : 0.0;
  if (truth != nullptr && truth_norm == 0.0) throw InvalidArgument("truth signal has zero norm");

  Eigen::VectorXd current = seed_term;
  Eigen::VectorXd next(current.size());
  std::vector<TraceRow> trace;
  trace.reserve(static_cast<std::size_t>(std::min(config.max_iterations, 1 << 16)));
  bool converged = false;
  int k = 0;
  while (k < config.max_iterations) {
    ++k;
    next.noalias() = columns_ * (columns_.transpose() * current);
    next = seed_term + keep.cwiseProduct(next);
    const double update = (next - current).norm() / std::max(current.norm(), kUpdateFloor);
    std::optional<double> err;
    if (truth != nullptr) err = (next - truth->values()).norm() / truth_norm;
    trace.push_back(TraceRow{k, update, err});
    current.swap(next);
    if (update <= config.tolerance) {
      converged = true;
      break;
    }
  }

  return ReconstructionReport{
      .signal = GraphSignal(std::move(current)),
      .trace = std::move(trace),
      .mu_used = mu,
      .rho_A1 = rho1_,
      .rho_A_mu = radius,
      .predicted_rate = radius > 0.0 ? -std::log(radius) : std::numeric_limits<double>::infinity(),
      .iterations = k,
      .converged = converged,
      .validity = validity_,
  };
}

ReconstructionReport pgir(const GraphSignal& observed, const SamplingSet& sampling, const SpectralBasis& basis,
                          const ReconstructionConfig& config, const GraphSignal* truth) {
  return ReconstructionPlan(basis, sampling, config.omega).run(observed, config, truth);
}

GraphSignal least_squares_oracle(const GraphSignal& observed, const SamplingSet& sampling,
                                 const SpectralBasis& basis, double omega) {
  if (observed.size() != basis.order() || sampling.size() != basis.order()) {
    throw InvalidArgument("least_squares_oracle: dimension mismatch");
  }
  const auto band = bandlimit(basis, omega);
  const auto w = band.width();
  const auto& rows = sampling.sampled();
  const auto s = static_cast<Eigen::Index>(rows.size());
  if (s < w) {
    throw NumericalError("least_squares_oracle: " + std::to_string(s) + " samples cannot determine " +
                         std::to_string(w) + " band coefficients");
  }
  Eigen::MatrixXd a(s, w);
  Eigen::VectorXd b(s);
  for (Eigen::Index r = 0; r < s; ++r) {
    const auto v = rows[static_cast<std::size_t>(r)];
    a.row(r) = basis.eigenvectors().row(v).head(w);
    b(r) = observed[v];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(kRankTolerance);
  if (qr.rank() < w) {
    throw NumericalError("least_squares_oracle: sampled band rows are rank deficient (rank " +
                         std::to_string(qr.rank()) + " < " + std::to_string(w) + ")");
  }
  const Eigen::VectorXd c = qr.solve(b);
  return GraphSignal(basis.eigenvectors().leftCols(w) * c);
}

double relative_error(const GraphSignal& estimate, const GraphSignal& truth) {
  if (estimate.size() != truth.size()) throw InvalidArgument("relative_error: dimension mismatch");
  const double denom = truth.norm();
  if (denom == 0.0) throw InvalidArgument("relative_error: truth has zero norm");
  return (estimate.values() - truth.values()).norm() / denom;
}

} // namespace pgir
