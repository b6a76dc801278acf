#pragma once

#include <Eigen/Dense>

#include "pgir/graph.hpp"
#include "pgir/sampling.hpp"
#include "pgir/signal.hpp"

namespace pgir {

/// Ascending eigenvalues and orthonormal eigenvectors of the normalized
/// Laplacian. Column k of `eigenvectors()` pairs with `eigenvalues()(k)`.
class SpectralBasis {
public:
  SpectralBasis(Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenvectors);

  Eigen::Index order() const noexcept { return eigenvalues_.size(); }
  const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }
  const Eigen::MatrixXd& eigenvectors() const noexcept { return eigenvectors_; }

  friend bool operator==(const SpectralBasis&, const SpectralBasis&) = default;

private:
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
};

/// GFT coefficients, indexed like the basis eigenvalues.
struct Spectrum {
  Eigen::VectorXd coefficients;
};

/// The retained band {k : lambda_k <= omega}; always a prefix of the
/// ascending eigenvalue order, so only its width is stored.
class BandlimitSpec {
public:
  BandlimitSpec(double omega, Eigen::Index width, Eigen::Index order);

  double omega() const noexcept { return omega_; }
  Eigen::Index width() const noexcept { return width_; }
  Eigen::Index order() const noexcept { return order_; }
  double width_fraction() const noexcept {
    return static_cast<double>(width_) / static_cast<double>(order_);
  }
  bool full_band() const noexcept { return width_ == order_; }

private:
  double omega_;
  Eigen::Index width_;
  Eigen::Index order_;
};

/// Eigenvalues within this distance above omega count as retained.
inline constexpr double kBandBoundaryTolerance = 1e-12;

/// Full eigensystem, ascending. Each eigenvector is flipped so that its first
/// component with magnitude above 1e-10 is positive.
SpectralBasis eigendecompose(const SymmetricMatrix& m);

Spectrum gft(const SpectralBasis& basis, const GraphSignal& f);
GraphSignal igft(const SpectralBasis& basis, const Spectrum& fhat);

BandlimitSpec bandlimit(const SpectralBasis& basis, double omega);

/// Leading `spec.width()` eigenvector columns.
Eigen::MatrixXd band_columns(const BandlimitSpec& spec, const SpectralBasis& basis);

/// P f = Phi_w (Phi_w^T f), applied without forming P.
GraphSignal apply_lowpass(const BandlimitSpec& spec, const SpectralBasis& basis, const GraphSignal& f);

/// Largest singular value.
double spectral_norm(const Eigen::MatrixXd& m);

/// Extreme eigenvalues of B = Phi_w^T (I - S) Phi_w.
struct BandRestrictionExtremes {
  double smallest;
  double largest;
};

BandRestrictionExtremes band_restriction_extremes(const BandlimitSpec& spec, const SpectralBasis& basis,
                                                  const SamplingSet& s);

/// rho(A_1): largest eigenvalue of B = Phi_w^T (I - S) Phi_w, in [0, 1].
double rho_A1(const BandlimitSpec& spec, const SpectralBasis& basis, const SamplingSet& s);

/// Closed-form rho(A_mu) = max{|1 - mu|, |1 - mu (1 - rho1)|} for mu in (0, 2).
///
/// This treats 0 as an eigenvalue of B. When B is positive definite the
/// value is an upper bound on the true radius for mu > 2 / (2 - rho1) and
/// exact otherwise; `iteration_radius` gives the exact value.
double rho_A_mu(double rho1, double mu);

/// Exact rho(A_mu) = rho(P (I - mu S) P), computed from both extremes of B.
double iteration_radius(const BandRestrictionExtremes& extremes, double mu);
double iteration_radius(const BandlimitSpec& spec, const SpectralBasis& basis, const SamplingSet& s, double mu);

/// -ln(rho) for rho in (0, 1).
double asymptotic_rate(double rho);

/// -ln ||M^k|| / k; throws when ||M^k|| >= 1.
double average_rate(const Eigen::MatrixXd& m, int k);

} // namespace pgir
