#include "pgir/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pgir/error.hpp"

namespace pgir {

namespace {

constexpr double kSignThreshold = 1e-10;

void require_order(const SpectralBasis& basis, Eigen::Index n, const char* what) {
  if (basis.order() != n) {
    throw InvalidArgument(std::string(what) + ": dimension mismatch (basis order " + std::to_string(basis.order()) +
                          ", got " + std::to_string(n) + ")");
  }
}

void require_band(const BandlimitSpec& spec, const SpectralBasis& basis) {
  if (spec.order() != basis.order()) throw InvalidArgument("band spec does not match basis order");
}

} // namespace

SpectralBasis::SpectralBasis(Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenvectors)
    : eigenvalues_(std::move(eigenvalues)), eigenvectors_(std::move(eigenvectors)) {
  const auto n = eigenvalues_.size();
  if (n == 0 || eigenvectors_.rows() != n || eigenvectors_.cols() != n) {
    throw InvalidArgument("spectral basis needs n eigenvalues and an n x n eigenvector matrix");
  }
  for (Eigen::Index k = 1; k < n; ++k) {
    if (eigenvalues_(k) < eigenvalues_(k - 1)) throw InvalidArgument("eigenvalues must be ascending");
  }
}

BandlimitSpec::BandlimitSpec(double omega, Eigen::Index width, Eigen::Index order)
    : omega_(omega), width_(width), order_(order) {
  if (order < 1 || width < 1 || width > order) throw InvalidArgument("band must retain between 1 and n frequencies");
}

SpectralBasis eigendecompose(const SymmetricMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.dense());
  if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver did not converge");
  Eigen::VectorXd values = solver.eigenvalues();
  Eigen::MatrixXd vectors = solver.eigenvectors();
  for (Eigen::Index k = 0; k < vectors.cols(); ++k) {
    for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
      if (std::abs(vectors(i, k)) > kSignThreshold) {
        if (vectors(i, k) < 0.0) vectors.col(k) *= -1.0;
        break;
      }
    }
  }
  return SpectralBasis(std::move(values), std::move(vectors));
}

Spectrum gft(const SpectralBasis& basis, const GraphSignal& f) {
  require_order(basis, f.size(), "gft");
  return Spectrum{basis.eigenvectors().transpose() * f.values()};
}

GraphSignal igft(const SpectralBasis& basis, const Spectrum& fhat) {
  require_order(basis, fhat.coefficients.size(), "igft");
  return GraphSignal(basis.eigenvectors() * fhat.coefficients);
}

BandlimitSpec bandlimit(const SpectralBasis& basis, double omega) {
  const auto& lambda = basis.eigenvalues();
  Eigen::Index width = 0;
  while (width < lambda.size() && lambda(width) <= omega + kBandBoundaryTolerance) ++width;
  if (width == 0) {
    throw InvalidArgument("cutoff " + std::to_string(omega) + " is below the smallest graph frequency");
  }
  return BandlimitSpec(omega, width, basis.order());
}

Eigen::MatrixXd band_columns(const BandlimitSpec& spec, const SpectralBasis& basis) {
  require_band(spec, basis);
  return basis.eigenvectors().leftCols(spec.width());
}

GraphSignal apply_lowpass(const BandlimitSpec& spec, const SpectralBasis& basis, const GraphSignal& f) {
  require_band(spec, basis);
  require_order(basis, f.size(), "apply_lowpass");
  const auto phi = basis.eigenvectors().leftCols(spec.width());
  return GraphSignal(phi * (phi.transpose() * f.values()));
}

double spectral_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  if (!m.allFinite()) throw InvalidArgument("spectral_norm: non-finite entries");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

BandRestrictionExtremes band_restriction_extremes(const BandlimitSpec& spec, const SpectralBasis& basis,
                                                  const SamplingSet& s) {
  require_band(spec, basis);
  require_order(basis, s.size(), "rho_A1");
  const auto& unsampled = s.unsampled();
  if (unsampled.empty()) return {0.0, 0.0};
  const auto w = spec.width();
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(unsampled.size()), w);
  for (std::size_t r = 0; r < unsampled.size(); ++r) {
    rows.row(static_cast<Eigen::Index>(r)) = basis.eigenvectors().row(unsampled[r]).head(w);
  }
  const Eigen::MatrixXd b = rows.transpose() * rows;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(b, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("rho_A1: eigensolver did not converge");
  const auto& ev = solver.eigenvalues();
  // B is a compression of a projection; clamp roundoff into [0, 1].
  return {std::clamp(ev(0), 0.0, 1.0), std::clamp(ev(ev.size() - 1), 0.0, 1.0)};
}

double rho_A1(const BandlimitSpec& spec, const SpectralBasis& basis, const SamplingSet& s) {
  return band_restriction_extremes(spec, basis, s).largest;
}

double rho_A_mu(double rho1, double mu) {
  if (!(rho1 >= 0.0 && rho1 <= 1.0)) throw InvalidArgument("rho_A_mu: rho1 must lie in [0, 1]");
  if (!(mu > 0.0 && mu < 2.0)) throw InvalidArgument("rho_A_mu: mu must lie in (0, 2)");
  return std::max(std::abs(1.0 - mu), std::abs(1.0 - mu * (1.0 - rho1)));
}

double iteration_radius(const BandRestrictionExtremes& extremes, double mu) {
  if (!(mu >= 0.0 && mu <= 2.0)) throw InvalidArgument("iteration_radius: mu must lie in [0, 2]");
  // On PW_w the operator acts as I - mu (I - B); it vanishes on the complement.
  return std::max(std::abs(1.0 - mu * (1.0 - extremes.smallest)), std::abs(1.0 - mu * (1.0 - extremes.largest)));
}

double iteration_radius(const BandlimitSpec& spec, const SpectralBasis& basis, const SamplingSet& s, double mu) {
  return iteration_radius(band_restriction_extremes(spec, basis, s), mu);
}

double asymptotic_rate(double rho) {
  if (!(rho > 0.0 && rho < 1.0)) {
    throw InvalidArgument("asymptotic_rate: rho = " + std::to_string(rho) + " outside (0, 1)");
  }
  return -std::log(rho);
}

double average_rate(const Eigen::MatrixXd& m, int k) {
  if (k < 1) throw InvalidArgument("average_rate: k must be positive");
  if (m.rows() != m.cols()) throw InvalidArgument("average_rate: matrix must be square");
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(m.rows(), m.cols());
  Eigen::MatrixXd base = m;
  for (int e = k; e > 0; e >>= 1) {
    if (e & 1) power = power * base;
    if (e > 1) base = base * base;
  }
  const double norm = spectral_norm(power);
  if (!(norm < 1.0)) {
    throw InvalidArgument("average_rate: ||M^k|| = " + std::to_string(norm) + " is not below 1");
  }
  return -std::log(norm) / k;
}

} // namespace pgir
